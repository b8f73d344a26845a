#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
基础信号工具测试
"""

import unittest
import sys
import os

import numpy as np

# 添加项目根目录到路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

try:
    from utils.signalcore import (RandomStream, clamp_llr, complex_to_real_matrix,
                                  complex_to_real_pair, real_pair_to_complex, LLR_CLAMP)
except ImportError:
    print("无法导入基础信号模块，请确保utils目录在Python路径中")
    sys.exit(1)


class 实数等效表示测试(unittest.TestCase):
    """复数与实数对转换的单元测试"""

    def test_标量转换(self):
        """测试标量复数转换"""
        对 = complex_to_real_pair(3 - 4j)
        np.testing.assert_array_equal(对, [3.0, -4.0])
        self.assertEqual(real_pair_to_complex(对), 3 - 4j)
        self.assertIsInstance(real_pair_to_complex(对), complex)

    def test_往返按位相等(self):
        """测试往返转换按位相等，包括负零"""
        x = np.array([1 + 2j, complex(-0.0, 3.0), 1e300 - 1e-300j, -5.5 - 0.0j])
        回 = real_pair_to_complex(complex_to_real_pair(x))
        np.testing.assert_array_equal(回.real, x.real)
        np.testing.assert_array_equal(回.imag, x.imag)
        np.testing.assert_array_equal(np.signbit(回.real), np.signbit(x.real))
        np.testing.assert_array_equal(np.signbit(回.imag), np.signbit(x.imag))

    def test_旋转缩放矩阵(self):
        """测试实数矩阵与复数乘法等价"""
        h = 0.3 - 1.2j
        x = -0.7 + 0.4j
        矩阵 = complex_to_real_matrix(h, 2.0)
        np.testing.assert_allclose(矩阵 @ complex_to_real_pair(x),
                                   complex_to_real_pair(2.0 * h * x), atol=1e-15)
        np.testing.assert_array_equal(complex_to_real_matrix(1 + 1j, 2.0), [[2.0, -2.0], [2.0, 2.0]])

    def test_错误形状(self):
        """测试最后一维不是2时报错"""
        with self.assertRaises(ValueError):
            real_pair_to_complex(np.zeros(3))

    def test_LLR截断(self):
        """测试LLR截断"""
        np.testing.assert_array_equal(clamp_llr([-100.0, 3.0, np.inf]), [-LLR_CLAMP, 3.0, LLR_CLAMP])


class 随机数流测试(unittest.TestCase):
    """随机数流的单元测试"""

    def test_相同参数可复现(self):
        """测试相同种子与流编号产生相同序列"""
        a = RandomStream(42, 7).complex_gaussian(1.0, 100)
        b = RandomStream(42, 7).complex_gaussian(1.0, 100)
        np.testing.assert_array_equal(a, b)

    def test_不同流不同序列(self):
        """测试不同流编号产生不同序列"""
        a = RandomStream(42, 0).bits(256)
        b = RandomStream(42, 1).bits(256)
        self.assertFalse(np.array_equal(a, b))

    def test_复高斯方差(self):
        """测试复高斯样本方差"""
        样本 = RandomStream(1).complex_gaussian(2.0, 200000)
        self.assertAlmostEqual(np.mean(np.abs(样本) ** 2), 2.0, delta=0.04)
        self.assertAlmostEqual(np.var(样本.real), 1.0, delta=0.02)

    def test_非法种子(self):
        """测试负种子报错"""
        with self.assertRaises(ValueError):
            RandomStream(-1)

    def test_非法概率(self):
        """测试伯努利概率越界报错"""
        with self.assertRaises(ValueError):
            RandomStream(0).bernoulli(1.5, 3)


if __name__ == "__main__":
    unittest.main()
