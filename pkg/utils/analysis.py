#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
解析性能分析
选择概率、两状态马尔可夫转发模型、全双工/半双工中断概率、对比协议与吞吐量
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from utils.relay import Protocol
from utils.signalcore import RandomStream

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]

# X 与 Y 相对差小于该值时使用 X=Y 分支
EQUAL_GAIN_RTOL = 1e-9


def sigma_ce_sq(P_S: Number, P_R: Number, g_SR: Number, sigma_RR_sq: float, si_active: bool,
                sigma0_sq: float = 1.0, sigma_x_sq: float = 1.0) -> Number:
    """
    MMSE 估计误差每维方差

    σ²_Ce = σx²/2 - P_S·σx⁴·g / (2P_S·σx²·g + 2P_R·σx²·σ²_RR·[si] + 2σ²_0)

    参数:
        g_SR: S-R 功率增益（期望增益模式下为 σ²_SR）
    """
    自干扰 = 2.0 * np.asarray(P_R) * sigma_x_sq * sigma_RR_sq if si_active else 0.0
    分母 = 2.0 * np.asarray(P_S) * sigma_x_sq * g_SR + 自干扰 + 2.0 * sigma0_sq
    结果 = sigma_x_sq / 2.0 - np.asarray(P_S) * sigma_x_sq ** 2 * g_SR / 分母
    return np.maximum(结果, 0.0)


def p_select(sigma_ce_sq_value: Number, epsilon: float) -> Number:
    """
    符号被选择的概率 1 - exp(-ε / (2σ²_Ce))

    σ²_Ce = 0 时为 1；ε = 0 时为 0。
    """
    if epsilon < 0:
        raise ValueError(f"选择门限 ε 不能为负: {epsilon}")
    s = np.asarray(sigma_ce_sq_value, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("σ²_Ce 不能为负")
    with np.errstate(divide="ignore"):
        结果 = np.where(s > 0, -np.expm1(-epsilon / (2.0 * np.where(s > 0, s, 1.0))), 1.0)
    if epsilon == 0:
        结果 = np.zeros_like(结果)
    return 结果 if 结果.ndim else float(结果)


@dataclass(frozen=True)
class MarkovSelectModel:
    """
    两状态转发模型

    p1: 上一时隙已转发（存在自干扰）时的选择概率
    p0: 上一时隙未转发（无自干扰）时的选择概率
    """
    p1: float
    p0: float
    L: int

    def __post_init__(self):
        for 名称 in ("p1", "p0"):
            值 = getattr(self, 名称)
            if not 0.0 <= 值 <= 1.0:
                raise ValueError(f"{名称} 必须在[0,1]内，实际为 {值}")
        if self.L < 1:
            raise ValueError(f"帧数 L 必须为正: {self.L}")


def transition_matrix(model: MarkovSelectModel) -> np.ndarray:
    """
    4x4 转移矩阵，状态顺序 (有干扰且选择, 无干扰且选择, 有干扰未选择, 无干扰未选择)，
    行随机
    """
    P1, P0 = model.p1, model.p0
    return np.array([
        [P1, 0.0, 1.0 - P1, 0.0],
        [P1, 0.0, 1.0 - P1, 0.0],
        [0.0, P0, 0.0, 1.0 - P0],
        [0.0, P0, 0.0, 1.0 - P0],
    ])


def p_forward_avg(model: MarkovSelectModel) -> float:
    """
    L 个时隙平均转发概率 P_C = (1/L)·Σ u·T^{l-1}·v，
    u = [0, P0, 0, 1-P0]，v = [1, 1, 0, 0]ᵀ
    """
    T = transition_matrix(model)
    分布 = np.array([0.0, model.p0, 0.0, 1.0 - model.p0])
    v = np.array([1.0, 1.0, 0.0, 0.0])
    累计 = 0.0
    for _ in range(model.L):
        累计 += float(分布 @ v)
        分布 = 分布 @ T
    return 累计 / model.L


def markov_model_expected_gain(P_S: float, P_R: float, g_SR: float, sigma_RR_sq: float,
                               epsilon: float, L: int, sigma0_sq: float = 1.0,
                               sigma_x_sq: float = 1.0) -> MarkovSelectModel:
    """由功率与 S-R 增益得到 (P₁, P₀)"""
    p1 = p_select(sigma_ce_sq(P_S, P_R, g_SR, sigma_RR_sq, True, sigma0_sq, sigma_x_sq), epsilon)
    p0 = p_select(sigma_ce_sq(P_S, P_R, g_SR, sigma_RR_sq, False, sigma0_sq, sigma_x_sq), epsilon)
    return MarkovSelectModel(p1=float(p1), p0=float(p0), L=L)


def p_forward_avg_per_realization(P_S: float, P_R: float, sigma_SR_sq: float, sigma_RR_sq: float,
                                  epsilon: float, L: int, rng: RandomStream, n_draws: int = 1000,
                                  sigma0_sq: float = 1.0, sigma_x_sq: float = 1.0) -> float:
    """对 n_draws 个 S-R 瑞利增益样本求 P_C 的平均"""
    if n_draws < 1:
        raise ValueError(f"样本数必须为正: {n_draws}")
    增益 = rng.exponential(sigma_SR_sq, n_draws)
    总和 = 0.0
    for g in 增益:
        总和 += p_forward_avg(markov_model_expected_gain(P_S, P_R, g, sigma_RR_sq, epsilon, L,
                                                          sigma0_sq, sigma_x_sq))
    return 总和 / n_draws


@dataclass(frozen=True)
class OutageParams:
    """
    中断概率参数

    X = P_S·σ²_SD，Y = P_R·σ²_RD，R 为目标速率 (nats/s/Hz)，P_C 为平均转发概率
    """
    X: float
    Y: float
    R: float
    P_C: float

    def __post_init__(self):
        if not self.X > 0:
            raise ValueError(f"X 必须为正: {self.X}")
        if self.Y < 0:
            raise ValueError(f"Y 不能为负: {self.Y}")
        if self.R <= 0:
            raise ValueError(f"速率 R 必须为正: {self.R}")
        if not 0.0 <= self.P_C <= 1.0:
            raise ValueError(f"P_C 必须在[0,1]内: {self.P_C}")


def p_nonforward_outage(X: Number, threshold: Number) -> Number:
    """仅直达径时的中断概率 1 - exp(-threshold/X)"""
    with np.errstate(divide="ignore"):
        return -np.expm1(-np.asarray(threshold, dtype=np.float64) / np.asarray(X, dtype=np.float64))


def p_forward_outage(X: Number, Y: Number, threshold: Number) -> Number:
    """
    直达径与中继径合并时的中断概率 Pr[X·e₁ + Y·e₂ < threshold]

    X = Y（相对差 < 1e-9）: 1 - ((threshold + X)/X)·e^{-threshold/X}
    X ≠ Y: 1 - (Y·e^{-threshold/Y} - X·e^{-threshold/X}) / (Y - X)
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    a = np.asarray(threshold, dtype=np.float64)
    相等 = np.abs(X - Y) < EQUAL_GAIN_RTOL * np.maximum(X, Y)
    with np.errstate(divide="ignore", invalid="ignore"):
        eX = np.where(X > 0, np.exp(-a / np.where(X > 0, X, 1.0)), 0.0)
        eY = np.where(Y > 0, np.exp(-a / np.where(Y > 0, Y, 1.0)), 0.0)
        相等分支 = 1.0 - (a + X) / np.where(X > 0, X, 1.0) * eX
        差 = np.where(相等, 1.0, Y - X)
        不等分支 = 1.0 - (Y * eY - X * eX) / 差
    结果 = np.where(相等, 相等分支, 不等分支)
    结果 = np.clip(结果, 0.0, 1.0)
    return 结果 if 结果.ndim else float(结果)


def outage_fd(params: OutageParams) -> float:
    """全双工中断概率 P_C·P_FW + (1-P_C)·P_NonFW，门限 e^R - 1"""
    a = np.expm1(params.R)
    return float(params.P_C * p_forward_outage(params.X, params.Y, a)
                 + (1.0 - params.P_C) * p_nonforward_outage(params.X, a))


def outage_hd(X: float, Y: float, R: float, P0: float) -> float:
    """半双工中断概率：门限 e^{2R} - 1，转发概率为 P₀"""
    if not 0.0 <= P0 <= 1.0:
        raise ValueError(f"P0 必须在[0,1]内: {P0}")
    a = np.expm1(2.0 * R)
    return float(P0 * p_forward_outage(X, Y, a) + (1.0 - P0) * p_nonforward_outage(X, a))


@dataclass(frozen=True)
class BaselineConfig:
    """帧级对比协议参数"""
    protocol: Protocol
    gamma_T: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))
        if self.gamma_T <= 0:
            raise ValueError(f"SINR 门限必须为正: {self.gamma_T}")


def p_select_baseline(cfg: BaselineConfig, P_S: float, P_R: float, sigma_SR_sq: float,
                      sigma_RR_sq: float, R: float, sigma0_sq: float = 1.0) -> float:
    """
    帧级协议在中继处的转发概率 Pr[P_S|h_SR|²/(P_R|h_RR|²+σ²_0) ≥ γ]

    = [1/(1 + P_R·σ²_RR·γ/(P_S·σ²_SR))]·exp(-γ·σ²_0/(P_S·σ²_SR))，
    crc_sdf 取 γ = e^R - 1，threshold_sdf 取 γ = Γ_T，perfect_relay 为 1。
    """
    if cfg.protocol is Protocol.PERFECT_RELAY:
        return 1.0
    if cfg.protocol is Protocol.CRC_SDF:
        门限 = float(np.expm1(R))
    elif cfg.protocol is Protocol.THRESHOLD_SDF:
        门限 = cfg.gamma_T
    else:
        raise ValueError("逐符号选择协议的选择概率请使用 p_select")
    平均 = P_S * sigma_SR_sq
    if 平均 <= 0:
        return 0.0
    return float(np.exp(-门限 * sigma0_sq / 平均) / (1.0 + P_R * sigma_RR_sq * 门限 / 平均))


def protocol_outage(protocol, P_S: float, P_R: float, sigma_SD_sq: float, sigma_SR_sq: float,
                    sigma_RD_sq: float, sigma_RR_sq: float, R: float, L: int,
                    epsilon: float = 0.5, gamma_T: float = 3.0, sigma0_sq: float = 1.0,
                    sigma_x_sq: float = 1.0) -> float:
    """
    各协议的全双工系统中断概率

    逐符号选择使用 MMSE 选择概率；帧级协议以各自的转发概率代入同一马尔可夫模型
    （有自干扰时为 P₁，无自干扰时为 P₀）；理想中继 P_C = 1。
    """
    协议 = Protocol.parse(protocol)
    X = P_S * sigma_SD_sq / sigma0_sq
    Y = P_R * sigma_RD_sq / sigma0_sq
    if 协议 is Protocol.PROPOSED:
        模型 = markov_model_expected_gain(P_S, P_R, sigma_SR_sq, sigma_RR_sq, epsilon, L,
                                        sigma0_sq, sigma_x_sq)
        P_C = p_forward_avg(模型)
    elif 协议 is Protocol.PERFECT_RELAY:
        P_C = 1.0
    else:
        基线 = BaselineConfig(协议, gamma_T)
        p1 = p_select_baseline(基线, P_S, P_R, sigma_SR_sq, sigma_RR_sq, R, sigma0_sq)
        p0 = p_select_baseline(基线, P_S, P_R, sigma_SR_sq, 0.0, R, sigma0_sq)
        P_C = p_forward_avg(MarkovSelectModel(p1=p1, p0=p0, L=L))
    return outage_fd(OutageParams(X=X, Y=Y, R=R, P_C=P_C))


def sum_exp_pdf(z: Number, X: float, Y: float) -> Number:
    """
    Z = X·e₁ + Y·e₂（e 为单位均值指数变量）的概率密度

    X = Y: (z/X²)·e^{-z/X}；X ≠ Y: (e^{-z/Y} - e^{-z/X}) / (Y - X)
    """
    if X <= 0 or Y <= 0:
        raise ValueError(f"X、Y 必须为正: X={X}, Y={Y}")
    z = np.asarray(z, dtype=np.float64)
    if abs(X - Y) < EQUAL_GAIN_RTOL * max(X, Y):
        结果 = z / X ** 2 * np.exp(-z / X)
    else:
        结果 = (np.exp(-z / Y) - np.exp(-z / X)) / (Y - X)
    结果 = np.where(z >= 0, 结果, 0.0)
    return 结果 if 结果.ndim else float(结果)


def mc_outage(X: float, Y: float, R: float, P_fw: float, n_trials: int, rng: RandomStream,
              half_duplex: bool = False) -> Tuple[float, int]:
    """
    蒙特卡洛中断概率：抽取直达与中继径功率增益及转发指示，按容量事件计数

    全双工事件 ln(1 + X·e₁ + fw·Y·e₂) < R；半双工速率减半。

    返回:
        (估计值, 中断次数)
    """
    if n_trials < 1:
        raise ValueError(f"试验次数必须为正: {n_trials}")
    直达 = X * rng.exponential(1.0, n_trials)
    中继 = Y * rng.exponential(1.0, n_trials)
    转发 = rng.bernoulli(P_fw, n_trials)
    容量 = np.log1p(直达 + 转发 * 中继)
    if half_duplex:
        容量 = 容量 / 2.0
    次数 = int(np.count_nonzero(容量 < R))
    return 次数 / n_trials, 次数


def throughput_fd(R: float, outage: Number, L: int) -> Number:
    """全双工吞吐量 R·(1-P_out)·L/(L+1)"""
    return R * (1.0 - np.asarray(outage)) * L / (L + 1.0)


def throughput_hd(R: float, outage: Number) -> Number:
    """
    半双工吞吐量 R·(1-P_out)

    半双工中断事件已按每跳速率 2R（门限 e^{2R}-1）定义，端到端目标速率仍为 R
    """
    return R * (1.0 - np.asarray(outage))


def fd_hd_gap(outage_fd_values: Sequence[float], outage_hd_values: Sequence[float]) -> np.ndarray:
    """P_FD - P_HD，负值表示全双工更优"""
    return np.asarray(outage_fd_values, dtype=np.float64) - np.asarray(outage_hd_values, dtype=np.float64)


def find_crossover(x: Sequence[float], difference: Sequence[float]) -> Optional[float]:
    """
    差值曲线第一次变号处的线性插值横坐标，无变号时返回 None
    """
    x = np.asarray(x, dtype=np.float64)
    d = np.asarray(difference, dtype=np.float64)
    if x.shape != d.shape:
        raise ValueError("横坐标与差值长度必须一致")
    for i in range(len(x) - 1):
        if d[i] == 0:
            return float(x[i])
        if np.sign(d[i]) != np.sign(d[i + 1]) and d[i + 1] != 0:
            return float(x[i] - d[i] * (x[i + 1] - x[i]) / (d[i + 1] - d[i]))
    if len(d) and d[-1] == 0:
        return float(x[-1])
    return None
