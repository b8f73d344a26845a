#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
前向纠错编码测试
"""

import unittest
import sys
import os
from itertools import product

import numpy as np
from scipy.special import logsumexp

# 添加项目根目录到路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

try:
    from utils.fec import (CodecConfig, Trellis, bcjr_decode, crc_attach, crc_check,
                           make_interleaver, sccc_decode, sccc_encode)
    from utils.signalcore import RandomStream
except ImportError:
    print("无法导入纠错编码模块，请确保utils目录在Python路径中")
    sys.exit(1)


def 穷举后验(trellis, chan, prior, terminated):
    """穷举所有输入序列计算输入与输出比特的后验LLR"""
    T = prior.size
    n = trellis.n_outputs
    序列 = []
    权重 = []
    for u in product((0, 1), repeat=T):
        u = np.array(u)
        c, 终止 = trellis.encode(u)
        if terminated and 终止 != 0:
            continue
        w = 0.5 * np.sum((1 - 2 * c) * chan) + 0.5 * np.sum((1 - 2 * u) * prior)
        序列.append((u, c))
        权重.append(w)
    权重 = np.array(权重)
    U = np.array([s[0] for s in 序列])
    C = np.array([s[1] for s in 序列])
    post_in = np.array([logsumexp(权重[U[:, k] == 0]) - logsumexp(权重[U[:, k] == 1])
                        for k in range(T)])
    post_out = np.array([logsumexp(权重[C[:, j] == 0]) - logsumexp(权重[C[:, j] == 1])
                         for j in range(T * n)])
    return post_in, post_out


class 网格编码测试(unittest.TestCase):
    """网格与编码器的单元测试"""

    def test_外码输出(self):
        """测试 (3,2) 外码的编码输出"""
        trellis = Trellis.from_generators((0o3, 0o2), 1)
        输出, 终止 = trellis.encode([1, 0, 1, 1])
        np.testing.assert_array_equal(输出, [1, 1, 1, 0, 1, 1, 0, 1])
        self.assertEqual(终止, 1)

    def test_掺杂累加器(self):
        """测试掺杂位置输出系统比特"""
        trellis = Trellis.doped_accumulator(2)
        输出, _ = trellis.encode([1, 1, 0, 1])
        np.testing.assert_array_equal(输出, [1, 1, 0, 1])
        无掺杂, _ = Trellis.doped_accumulator(1000).encode([1, 1, 0, 1])
        np.testing.assert_array_equal(无掺杂, [1, 0, 0, 1])

    def test_非法生成多项式(self):
        """测试生成多项式超出记忆长度时报错"""
        with self.assertRaises(ValueError):
            Trellis.from_generators((0o7, 0o5), 1)

    def test_编码线性(self):
        """测试SCCC编码的线性"""
        cfg = CodecConfig(info_bits=32)
        rng = RandomStream(4)
        a = rng.bits(32)
        b = rng.bits(32)
        np.testing.assert_array_equal(sccc_encode(a ^ b, cfg), sccc_encode(a, cfg) ^ sccc_encode(b, cfg))
        self.assertEqual(sccc_encode(a, cfg).size, 64)


class BCJR测试(unittest.TestCase):
    """BCJR 译码的单元测试"""

    def _比较(self, trellis, T, terminated, seed):
        rng = RandomStream(seed)
        chan = 1.5 * rng.generator.normal(size=T * trellis.n_outputs)
        prior = 0.7 * rng.generator.normal(size=T)
        结果 = bcjr_decode(chan, prior, trellis, terminated=terminated)
        期望_in, 期望_out = 穷举后验(trellis, chan, prior, terminated)
        有限 = np.isfinite(期望_in)
        np.testing.assert_allclose(结果.posterior_llr[有限], 期望_in[有限], atol=1e-9)
        输出有限 = np.isfinite(期望_out)
        np.testing.assert_allclose(结果.posterior_out_llr[输出有限], 期望_out[输出有限], atol=1e-9)
        np.testing.assert_allclose(结果.extrinsic_llr[有限], np.clip(期望_in[有限] - prior[有限], -50, 50), atol=1e-9)
        return 结果, 期望_in

    def test_外码与穷举一致(self):
        """测试外码BCJR后验与穷举一致"""
        self._比较(Trellis.from_generators((0o3, 0o2), 1), 8, False, 1)

    def test_终止网格与穷举一致(self):
        """测试零状态终止时与穷举一致，末位确定为0"""
        结果, 期望_in = self._比较(Trellis.from_generators((0o3, 0o2), 1), 7, True, 2)
        self.assertTrue(np.isinf(期望_in[-1]))
        self.assertEqual(结果.posterior_llr[-1], 50.0)

    def test_掺杂累加器与穷举一致(self):
        """测试周期时变网格与穷举一致"""
        self._比较(Trellis.doped_accumulator(3), 10, False, 3)

    def test_全零输入(self):
        """测试全零LLR输出全零"""
        结果 = bcjr_decode(np.zeros(12), np.zeros(6), Trellis.from_generators((0o3, 0o2), 1))
        np.testing.assert_array_equal(结果.posterior_llr, np.zeros(6))

    def test_长度不一致(self):
        """测试信道LLR长度错误"""
        with self.assertRaises(ValueError):
            bcjr_decode(np.zeros(5), np.zeros(3), Trellis.from_generators((0o3, 0o2), 1))


class SCCC测试(unittest.TestCase):
    """SCCC 迭代译码的单元测试"""

    def test_无噪声译码(self):
        """测试无噪声信道LLR正确译码"""
        cfg = CodecConfig(info_bits=64, n_iterations=4)
        info = RandomStream(8).bits(64)
        llr = 10.0 * (1.0 - 2.0 * sccc_encode(info, cfg))
        结果 = sccc_decode(llr, cfg)
        np.testing.assert_array_equal(结果.info_hat, info)
        self.assertEqual(结果.iterations, 4)
        self.assertEqual(结果.coded_llr.size, 128)

    def test_提前结束(self):
        """测试判决收敛时提前结束迭代"""
        cfg = CodecConfig(info_bits=32, n_iterations=8, early_exit=True)
        info = RandomStream(9).bits(32)
        结果 = sccc_decode(10.0 * (1.0 - 2.0 * sccc_encode(info, cfg)), cfg)
        np.testing.assert_array_equal(结果.info_hat, info)
        self.assertLess(结果.iterations, 8)

    def test_全零LLR判为零(self):
        """测试无信息时判决为比特0"""
        cfg = CodecConfig(info_bits=16, n_iterations=2)
        np.testing.assert_array_equal(sccc_decode(np.zeros(32), cfg).info_hat, np.zeros(16))

    def test_交织器(self):
        """测试交织器是置换且由种子决定"""
        p = make_interleaver(100, 5)
        np.testing.assert_array_equal(np.sort(p), np.arange(100))
        np.testing.assert_array_equal(p, make_interleaver(100, 5))
        with self.assertRaises(ValueError):
            CodecConfig(info_bits=4, interleaver=np.zeros(8, dtype=int))

    def test_长度不一致(self):
        """测试信息比特长度错误"""
        with self.assertRaises(ValueError):
            sccc_encode(np.zeros(10), CodecConfig(info_bits=16))


class CRC测试(unittest.TestCase):
    """CRC-16 的单元测试"""

    def test_附加后校验通过(self):
        """测试附加CRC后校验通过"""
        帧 = crc_attach(RandomStream(6).bits(40))
        self.assertEqual(帧.size, 56)
        self.assertTrue(crc_check(帧))

    def test_单比特错误检出(self):
        """测试任意单比特错误都能检出"""
        帧 = crc_attach(RandomStream(7).bits(40))
        for i in range(帧.size):
            错帧 = 帧.copy()
            错帧[i] ^= 1
            self.assertFalse(crc_check(错帧), msg=f"位置 {i}")

    def test_帧过短(self):
        """测试帧长不足报错"""
        with self.assertRaises(ValueError):
            crc_check(np.zeros(16))


if __name__ == "__main__":
    unittest.main()
