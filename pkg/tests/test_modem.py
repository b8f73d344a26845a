#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
调制解调测试
"""

import unittest
import sys
import os
import math

import numpy as np

# 添加项目根目录到路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

try:
    from utils.modem import (ConstellationSpec, hard_demodulate, minimum_distance, modulate,
                             selection_threshold, soft_demodulate)
    from utils.signalcore import RandomStream
except ImportError:
    print("无法导入调制解调模块，请确保utils目录在Python路径中")
    sys.exit(1)


class 星座测试(unittest.TestCase):
    """星座定义的单元测试"""

    def test_QPSK映射(self):
        """测试QPSK格雷映射"""
        spec = ConstellationSpec.qpsk()
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(modulate([0, 0, 1, 0, 0, 1, 1, 1], spec),
                                   [s + 1j * s, -s + 1j * s, s - 1j * s, -s - 1j * s])

    def test_平均能量归一(self):
        """测试各阶星座平均能量为1"""
        for Q in (2, 4, 8, 16, 64):
            spec = ConstellationSpec.for_order(Q)
            self.assertAlmostEqual(np.mean(np.abs(spec.points) ** 2), 1.0, places=12, msg=spec.name)

    def test_选择门限(self):
        """测试选择门限 ε = (d_min/2)²"""
        self.assertAlmostEqual(selection_threshold(ConstellationSpec.qpsk()), 0.5)
        self.assertAlmostEqual(selection_threshold(ConstellationSpec.bpsk()), 1.0)
        self.assertAlmostEqual(selection_threshold(ConstellationSpec.square_qam(16)), 0.1)

    def test_格雷相邻(self):
        """测试最近邻星座点标号只差一位"""
        for Q in (4, 16, 64, 8):
            spec = ConstellationSpec.for_order(Q)
            d_min = minimum_distance(spec)
            for i in range(Q):
                for j in range(i + 1, Q):
                    if abs(spec.points[i] - spec.points[j]) < d_min * (1 + 1e-9):
                        self.assertEqual(int(np.sum(spec.labels[i] != spec.labels[j])), 1,
                                         msg=f"{spec.name} {i} {j}")

    def test_非法阶数(self):
        """测试非法星座阶数"""
        with self.assertRaises(ValueError):
            ConstellationSpec.for_order(3)
        with self.assertRaises(ValueError):
            ConstellationSpec.square_qam(8)

    def test_比特数不整除(self):
        """测试比特数不是每符号比特数整数倍时报错"""
        with self.assertRaises(ValueError):
            modulate([0, 1, 1], ConstellationSpec.qpsk())


class 软解调测试(unittest.TestCase):
    """软解调的单元测试"""

    def test_高信噪比符号判决(self):
        """测试高信噪比下LLR符号恢复比特"""
        for Q in (2, 4, 16):
            spec = ConstellationSpec.for_order(Q)
            bits = RandomStream(11, Q).bits(spec.bits_per_symbol * 50)
            y = 0.8j * modulate(bits, spec)
            llr = soft_demodulate(y, 0.8j, 1.0, 1e-3, spec)
            np.testing.assert_array_equal((llr < 0).astype(np.uint8), bits)

    def test_与穷举一致(self):
        """测试与逐点穷举求和一致"""
        spec = ConstellationSpec.square_qam(16)
        y = np.array([0.3 - 0.7j, -1.1 + 0.2j])
        h = np.array([0.9 + 0.4j, -0.2 + 1.3j])
        llr = soft_demodulate(y, h, 1.5, 0.8, spec)
        期望 = []
        for m in range(2):
            for i in range(4):
                零 = 一 = 0.0
                for q in range(16):
                    w = math.exp(-abs(y[m] - 1.5 * h[m] * spec.points[q]) ** 2 / 0.8)
                    if spec.labels[q, i] == 0:
                        零 += w
                    else:
                        一 += w
                期望.append(math.log(零) - math.log(一))
        np.testing.assert_allclose(llr, 期望, rtol=1e-10, atol=1e-10)

    def test_LLR截断(self):
        """测试极高信噪比LLR被截断"""
        spec = ConstellationSpec.qpsk()
        llr = soft_demodulate(modulate([0, 1], spec), 1.0, 1.0, 1e-9, spec)
        np.testing.assert_array_equal(llr, [50.0, -50.0])

    def test_非法噪声方差(self):
        """测试非正噪声方差报错"""
        with self.assertRaises(ValueError):
            soft_demodulate(np.array([1.0 + 0j]), 1.0, 1.0, 0.0, ConstellationSpec.qpsk())

    def test_硬判决(self):
        """测试无噪声硬判决"""
        spec = ConstellationSpec.square_qam(16)
        bits = RandomStream(2).bits(64)
        np.testing.assert_array_equal(hard_demodulate(modulate(bits, spec), spec), bits)


if __name__ == "__main__":
    unittest.main()
