#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
解析模型测试
"""

import unittest
import sys
import os
import math

import numpy as np
from scipy import integrate

# 添加项目根目录到路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

try:
    from utils.analysis import (BaselineConfig, MarkovSelectModel, OutageParams, fd_hd_gap,
                                find_crossover, markov_model_expected_gain, mc_outage,
                                outage_fd, outage_hd, p_forward_avg, p_forward_avg_per_realization,
                                p_forward_outage, p_nonforward_outage, p_select,
                                p_select_baseline, protocol_outage, sigma_ce_sq, sum_exp_pdf,
                                throughput_fd, throughput_hd, transition_matrix)
    from utils.signalcore import RandomStream
except ImportError:
    print("无法导入解析模块，请确保utils目录在Python路径中")
    sys.exit(1)


class 选择概率测试(unittest.TestCase):
    """MMSE 误差方差与选择概率的单元测试"""

    def test_误差方差(self):
        """测试 σ²_Ce 算例"""
        self.assertAlmostEqual(sigma_ce_sq(1.0, 1.0, 1.0, 0.0, True), 0.25)
        self.assertAlmostEqual(sigma_ce_sq(1.0, 1.0, 1.0, 1.0, True), 0.5 - 1.0 / 6.0)
        self.assertAlmostEqual(sigma_ce_sq(1.0, 1.0, 1.0, 1.0, False), 0.25)

    def test_选择概率(self):
        """测试选择概率闭式"""
        self.assertAlmostEqual(p_select(0.25, 0.5), 1.0 - math.exp(-1.0))
        self.assertEqual(p_select(0.25, 0.0), 0.0)
        self.assertEqual(p_select(0.0, 0.5), 1.0)
        with self.assertRaises(ValueError):
            p_select(0.25, -0.1)

    def test_自干扰降低选择概率(self):
        """测试自干扰存在时选择概率不升高"""
        模型 = markov_model_expected_gain(10.0, 10.0, 6.25, 1.0, 0.5, 20)
        self.assertLessEqual(模型.p1, 模型.p0)


class 马尔可夫模型测试(unittest.TestCase):
    """转发马尔可夫模型的单元测试"""

    def test_行随机(self):
        """测试转移矩阵每行和为1"""
        T = transition_matrix(MarkovSelectModel(0.3, 0.8, 5))
        np.testing.assert_allclose(T.sum(axis=1), np.ones(4))

    def test_边界情况(self):
        """测试 P₀、P₁ 取边界值时的平均转发概率"""
        self.assertAlmostEqual(p_forward_avg(MarkovSelectModel(1.0, 1.0, 20)), 1.0)
        self.assertAlmostEqual(p_forward_avg(MarkovSelectModel(0.7, 0.0, 20)), 0.0)
        self.assertAlmostEqual(p_forward_avg(MarkovSelectModel(0.2, 0.6, 1)), 0.6)

    def test_两时隙(self):
        """测试 L=2 时的平均转发概率"""
        p1, p0 = 0.3, 0.8
        期望 = (p0 + (p0 * p1 + (1 - p0) * p0)) / 2.0
        self.assertAlmostEqual(p_forward_avg(MarkovSelectModel(p1, p0, 2)), 期望)

    def test_马尔可夫链蒙特卡洛(self):
        """测试逐时隙模拟转发链的平均转发比例与 P_C 一致"""
        p1, p0, L, n = 0.8, 0.95, 20, 200000
        rng = RandomStream(6)
        上一时隙 = np.zeros(n, dtype=bool)
        次数 = 0
        for _ in range(L):
            本时隙 = rng.generator.random(n) < np.where(上一时隙, p1, p0)
            次数 += int(本时隙.sum())
            上一时隙 = 本时隙
        估计 = 次数 / (n * L)
        解析 = p_forward_avg(MarkovSelectModel(p1, p0, L))
        self.assertLess(abs(估计 - 解析), 4 * math.sqrt(0.25 / n))
        self.assertTrue(p1 < 解析 < p0)

    def test_非法概率(self):
        """测试非法概率参数"""
        with self.assertRaises(ValueError):
            MarkovSelectModel(1.2, 0.5, 3)

    def test_逐实现平均(self):
        """测试逐实现平均在 ε=0 时为零"""
        值 = p_forward_avg_per_realization(10.0, 10.0, 6.25, 1.0, 0.0, 4, RandomStream(1), 20)
        self.assertEqual(值, 0.0)


class 中断概率测试(unittest.TestCase):
    """中断概率闭式的单元测试"""

    def test_转发中断算例(self):
        """测试 X=2, Y=1, R=1 的转发中断概率"""
        self.assertAlmostEqual(p_forward_outage(2.0, 1.0, math.expm1(1.0)), 0.3324, places=4)
        self.assertAlmostEqual(outage_fd(OutageParams(2.0, 1.0, 1.0, 1.0)), 0.3324, places=4)

    def test_X等于Y连续(self):
        """测试 X=Y 分支两侧连续"""
        a = math.expm1(1.0)
        中心 = p_forward_outage(1.0, 1.0, a)
        for δ in (1e-12, 1e-10, 1e-8, 1e-6):
            self.assertAlmostEqual(p_forward_outage(1.0, 1.0 + δ, a), 中心, delta=1e-6)
            self.assertAlmostEqual(p_forward_outage(1.0, 1.0 - δ, a), 中心, delta=1e-6)

    def test_单调性网格(self):
        """测试全双工中断概率在50x50对数网格上对 X、Y 均不增"""
        网格 = np.logspace(-1, 3, 50)
        值 = np.array([[outage_fd(OutageParams(X, Y, 1.0, 0.7)) for Y in 网格] for X in 网格])
        self.assertTrue(np.all(np.diff(值, axis=0) <= 1e-12))
        self.assertTrue(np.all(np.diff(值, axis=1) <= 1e-12))
        self.assertTrue(np.all((值 >= 0) & (值 <= 1)))

    def test_密度Y趋近X极限(self):
        """测试 |Y-X| = 1e-8·X 时和分布密度与 X=Y 分支逐点一致"""
        z = np.linspace(0.0, 20.0, 201)
        for X in (0.3, 1.7, 25.0):
            中心 = sum_exp_pdf(z, X, X)
            for Y in (X * (1 + 1e-8), X * (1 - 1e-8)):
                np.testing.assert_allclose(sum_exp_pdf(z, X, Y), 中心, rtol=0, atol=1e-6)

    def test_不转发退化(self):
        """测试 P_C=0 时退化为直达链路"""
        X, R = 3.0, 1.0
        self.assertAlmostEqual(outage_fd(OutageParams(X, 5.0, R, 0.0)),
                               1.0 - math.exp(-math.expm1(R) / X))
        self.assertAlmostEqual(p_forward_outage(X, 0.0, 2.0), p_nonforward_outage(X, 2.0))

    def test_半双工(self):
        """测试半双工门限为 e^{2R}-1"""
        X, Y, R, P0 = 4.0, 9.0, 0.5, 0.6
        a = math.expm1(2 * R)
        期望 = P0 * p_forward_outage(X, Y, a) + (1 - P0) * (1 - math.exp(-a / X))
        self.assertAlmostEqual(outage_hd(X, Y, R, P0), 期望)

    def test_概率密度积分(self):
        """测试和分布密度积分为1且与中断概率一致"""
        a = math.expm1(1.0)
        for X, Y in ((2.0, 1.0), (1.5, 1.5)):
            总和, _ = integrate.quad(lambda z: sum_exp_pdf(z, X, Y), 0.0, np.inf)
            self.assertAlmostEqual(总和, 1.0, places=6)
            累计, _ = integrate.quad(lambda z: sum_exp_pdf(z, X, Y), 0.0, a)
            self.assertAlmostEqual(累计, p_forward_outage(X, Y, a), places=8)

    def test_蒙特卡洛一致(self):
        """测试蒙特卡洛估计与闭式一致"""
        n = 200000
        估计, 次数 = mc_outage(2.0, 1.0, 1.0, 0.7, n, RandomStream(3))
        解析 = outage_fd(OutageParams(2.0, 1.0, 1.0, 0.7))
        self.assertEqual(次数, round(估计 * n))
        self.assertLess(abs(估计 - 解析), 4 * math.sqrt(解析 * (1 - 解析) / n))
        估计, _ = mc_outage(2.0, 1.0, 0.5, 0.4, n, RandomStream(4), half_duplex=True)
        解析 = outage_hd(2.0, 1.0, 0.5, 0.4)
        self.assertLess(abs(估计 - 解析), 4 * math.sqrt(解析 * (1 - 解析) / n))

    def test_百万次蒙特卡洛一致(self):
        """测试12组参数（含 X=Y 与 X≠Y 两个分支）下10^6次蒙特卡洛与闭式一致"""
        n = 1000000
        参数组 = ((1.0, 25.0, 1.0, 0.64), (10.0, 250.0, 2.0, 0.78), (63.1, 63.1, 2.0, 0.9),
               (2.0, 1.0, 1.0, 0.7), (0.5, 0.5, 1.0, 1.0), (5.0, 5.0, 2.0, 0.3),
               (100.0, 10.0, 1.0, 0.5), (3.0, 30.0, 0.5, 0.95), (20.0, 20.0, 1.0, 0.0),
               (0.8, 8.0, 2.0, 0.85), (50.0, 2.0, 2.0, 0.6), (7.0, 7.0, 0.5, 0.99))
        self.assertEqual(len(参数组), 12)
        for i, (X, Y, R, P_fw) in enumerate(参数组):
            估计, _ = mc_outage(X, Y, R, P_fw, n, RandomStream(10, i))
            解析 = outage_fd(OutageParams(X, Y, R, P_fw))
            self.assertLess(abs(估计 - 解析), 4 * math.sqrt(解析 * (1 - 解析) / n) + 1e-6,
                            msg=f"X={X}, Y={Y}, R={R}, P_C={P_fw}")

    def test_非法参数(self):
        """测试非法中断概率参数"""
        with self.assertRaises(ValueError):
            OutageParams(0.0, 1.0, 1.0, 0.5)
        with self.assertRaises(ValueError):
            OutageParams(1.0, 1.0, 1.0, 1.5)


class 对比协议测试(unittest.TestCase):
    """帧级对比协议的单元测试"""

    def test_理想中继(self):
        """测试理想中继转发概率为1"""
        self.assertEqual(p_select_baseline(BaselineConfig("perfect_relay"), 1.0, 1.0, 1.0, 1.0, 1.0), 1.0)

    def test_CRC协议闭式(self):
        """测试无自干扰时CRC协议转发概率"""
        值 = p_select_baseline(BaselineConfig("crc_sdf"), 1.0, 1.0, 1.0, 0.0, 1.0)
        self.assertAlmostEqual(值, math.exp(-math.expm1(1.0)))

    def test_转发概率蒙特卡洛(self):
        """测试帧级协议转发概率与抽样 SINR 事件的比例一致"""
        P_S, P_R, σ_SR, σ_RR, R, n = 5.0, 5.0, 2.0, 0.5, 2.0, 400000
        rng = RandomStream(7)
        sinr = P_S * rng.exponential(σ_SR, n) / (P_R * rng.exponential(σ_RR, n) + 1.0)
        for cfg, 门限 in ((BaselineConfig("crc_sdf"), math.expm1(R)),
                         (BaselineConfig("threshold_sdf", 3.0), 3.0)):
            估计 = float(np.mean(sinr >= 门限))
            解析 = p_select_baseline(cfg, P_S, P_R, σ_SR, σ_RR, R)
            self.assertLess(abs(估计 - 解析), 4 * math.sqrt(解析 * (1 - 解析) / n), msg=cfg.protocol)

    def test_门限低于速率门限时更易转发(self):
        """测试 Γ_T < e^R-1 时门限协议转发概率更高"""
        crc = p_select_baseline(BaselineConfig("crc_sdf"), 5.0, 5.0, 2.0, 0.5, 2.0)
        门限 = p_select_baseline(BaselineConfig("threshold_sdf", 3.0), 5.0, 5.0, 2.0, 0.5, 2.0)
        self.assertGreater(门限, crc)

    def test_理想中继中断最低(self):
        """测试理想中继的中断概率不高于其他协议"""
        参数 = (10.0, 10.0, 1.0, 6.25, 2.78, 1.0, 2.0, 20)
        理想 = protocol_outage("perfect_relay", *参数)
        for 协议 in ("proposed", "crc_sdf", "threshold_sdf"):
            self.assertLessEqual(理想, protocol_outage(协议, *参数) + 1e-15)

    def test_逐符号协议不可用帧级公式(self):
        """测试逐符号协议不能使用帧级转发概率"""
        with self.assertRaises(ValueError):
            p_select_baseline(BaselineConfig("proposed"), 1.0, 1.0, 1.0, 1.0, 1.0)


class 吞吐量与交叉点测试(unittest.TestCase):
    """吞吐量与交叉点的单元测试"""

    def test_吞吐量(self):
        """测试全双工与半双工吞吐量"""
        self.assertAlmostEqual(float(throughput_fd(1.0, 0.0, 20)), 20.0 / 21.0)
        self.assertAlmostEqual(float(throughput_hd(1.0, 0.0)), 1.0)
        self.assertAlmostEqual(float(throughput_hd(2.0, 0.25)), 1.5)
        self.assertAlmostEqual(float(throughput_fd(2.0, 0.5, 1)), 0.5)

    def test_交叉点(self):
        """测试差值曲线变号位置插值"""
        self.assertAlmostEqual(find_crossover([0, 1, 2], [-1.0, -0.5, 0.5]), 1.5)
        self.assertIsNone(find_crossover([0, 1, 2], [-1.0, -0.5, -0.1]))
        self.assertEqual(find_crossover([0, 1], [0.0, 1.0]), 0.0)
        np.testing.assert_allclose(fd_hd_gap([0.1, 0.2], [0.3, 0.1]), [-0.2, 0.1])


if __name__ == "__main__":
    unittest.main()
