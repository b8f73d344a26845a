#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
调制解调
格雷映射星座（BPSK、方形 QAM、PSK）、比特到符号映射与精确求和形式的软解调
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Union

import numpy as np
from scipy.special import logsumexp

from utils.signalcore import LLR_CLAMP, clamp_llr

logger = logging.getLogger(__name__)


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _int_to_bits(value: int, width: int) -> list:
    """整数转 MSB 在前的比特列表"""
    return [(value >> (width - 1 - k)) & 1 for k in range(width)]


@dataclass(frozen=True, eq=False)
class ConstellationSpec:
    """
    星座定义

    points[i] 是标号 labels[i]（MSB 在前）对应的星座点，平均能量为 sigma_x_sq。
    """
    order: int
    points: np.ndarray
    labels: np.ndarray
    sigma_x_sq: float = 1.0
    name: str = ""
    _index_weights: np.ndarray = field(init=False, repr=False)
    _label_to_point: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        Q = self.order
        if Q < 2 or Q & (Q - 1):
            raise ValueError(f"星座阶数必须是大于1的2的幂，实际为 {Q}")
        if self.points.shape != (Q,) or self.labels.shape != (Q, self.bits_per_symbol):
            raise ValueError("星座点或标号的形状与阶数不一致")
        权重 = 1 << np.arange(self.bits_per_symbol - 1, -1, -1)
        标号值 = self.labels.astype(np.int64) @ 权重
        if len(set(标号值.tolist())) != Q:
            raise ValueError("星座标号必须互不相同")
        查找表 = np.empty(Q, dtype=np.complex128)
        查找表[标号值] = self.points
        object.__setattr__(self, "_index_weights", 权重)
        object.__setattr__(self, "_label_to_point", 查找表)

    @property
    def bits_per_symbol(self) -> int:
        return int(self.order).bit_length() - 1

    @classmethod
    def bpsk(cls) -> "ConstellationSpec":
        """BPSK: 比特 b 映射为 1-2b"""
        return cls(order=2, points=np.array([1.0 + 0j, -1.0 + 0j]),
                   labels=np.array([[0], [1]], dtype=np.uint8), name="BPSK")

    @classmethod
    def square_qam(cls, order: int, sigma_x_sq: float = 1.0) -> "ConstellationSpec":
        """
        格雷映射方形 QAM

        每个实数维度为格雷映射 PAM，标号前半为同相比特、后半为正交比特；
        比特 0 对应正半轴。QPSK 即 (b1,b0) -> ((1-2b1)/√2, (1-2b0)/√2)。
        """
        m2 = int(order).bit_length() - 1
        if order < 4 or order & (order - 1) or m2 % 2:
            raise ValueError(f"方形QAM阶数必须是4的幂，实际为 {order}")
        m = m2 // 2
        边长 = 1 << m
        电平 = {}
        for i in range(边长):
            电平[_gray(i)] = (边长 - 1) - 2 * i
        平均能量 = 2.0 * (order - 1) / 3.0
        缩放 = np.sqrt(sigma_x_sq / 平均能量)
        点 = []
        标号 = []
        for 同相 in range(边长):
            for 正交 in range(边长):
                点.append(缩放 * complex(电平[同相], 电平[正交]))
                标号.append(_int_to_bits(同相, m) + _int_to_bits(正交, m))
        名称 = "QPSK" if order == 4 else f"{order}QAM"
        return cls(order=order, points=np.array(点), labels=np.array(标号, dtype=np.uint8),
                   sigma_x_sq=sigma_x_sq, name=名称)

    @classmethod
    def psk(cls, order: int, sigma_x_sq: float = 1.0) -> "ConstellationSpec":
        """格雷映射 PSK，第 i 个相位点携带标号 gray(i)"""
        m = int(order).bit_length() - 1
        相位 = 2 * np.pi * np.arange(order) / order
        点 = np.sqrt(sigma_x_sq) * np.exp(1j * 相位)
        标号 = np.array([_int_to_bits(_gray(i), m) for i in range(order)], dtype=np.uint8)
        return cls(order=order, points=点, labels=标号, sigma_x_sq=sigma_x_sq, name=f"{order}PSK")

    @classmethod
    def qpsk(cls) -> "ConstellationSpec":
        return cls.square_qam(4)

    @classmethod
    def for_order(cls, order: int) -> "ConstellationSpec":
        """
        按阶数选择星座：2 为 BPSK，4 的幂为方形 QAM，其余 2 的幂为 PSK
        """
        if order < 2 or order & (order - 1):
            raise ValueError(f"不支持的星座阶数: {order}")
        if order == 2:
            return cls.bpsk()
        if (int(order).bit_length() - 1) % 2 == 0:
            return cls.square_qam(order)
        return cls.psk(order)

    def labels_to_points(self, labels: np.ndarray) -> np.ndarray:
        """(..., Z) 比特标号转星座点"""
        索引 = np.asarray(labels, dtype=np.int64) @ self._index_weights
        return self._label_to_point[索引]

    def bit_masks(self) -> np.ndarray:
        """(Z, Q) 布尔矩阵，第 i 行标记第 i 比特为 0 的星座点"""
        return (self.labels == 0).T


def modulate(coded_bits: np.ndarray, spec: ConstellationSpec) -> np.ndarray:
    """
    比特到符号映射

    参数:
        coded_bits: 编码比特，长度必须是每符号比特数的整数倍
        spec: 星座

    返回:
        复符号数组
    """
    bits = np.asarray(coded_bits, dtype=np.uint8).ravel()
    Z = spec.bits_per_symbol
    if bits.size % Z:
        raise ValueError(f"比特数 {bits.size} 不是每符号比特数 {Z} 的整数倍")
    return spec.labels_to_points(bits.reshape(-1, Z))


def soft_demodulate(y: np.ndarray, h: Union[complex, np.ndarray], gain: float,
                    var_total: Union[float, np.ndarray], spec: ConstellationSpec) -> np.ndarray:
    """
    精确求和形式的比特 LLR

    模型 y = gain·h·x + n，n ~ CN(0, var_total)。
    LLR_i = log Σ_{x:b_i=0} e^{-|y-gain·h·x|²/var} - log Σ_{x:b_i=1} e^{-|y-gain·h·x|²/var}

    参数:
        y: 接收符号 (M,)
        h: 信道增益，标量或 (M,)
        gain: 幅度增益（通常为 √P）
        var_total: 总噪声方差，标量或逐符号数组
        spec: 星座

    返回:
        (M·Z,) LLR，按编码比特顺序排列，截断到 ±LLR_CLAMP
    """
    y = np.atleast_1d(np.asarray(y, dtype=np.complex128))
    var = np.asarray(var_total, dtype=np.float64)
    if np.any(var <= 0):
        raise ValueError("噪声方差必须为正")
    中心 = (gain * np.asarray(h, dtype=np.complex128))[..., None] * spec.points
    度量 = -np.abs(y[..., None] - 中心) ** 2 / np.broadcast_to(var, y.shape)[..., None]
    掩码 = spec.bit_masks()
    llr = np.empty(y.shape + (spec.bits_per_symbol,))
    for i, 零掩码 in enumerate(掩码):
        llr[..., i] = (logsumexp(度量[..., 零掩码], axis=-1)
                       - logsumexp(度量[..., ~零掩码], axis=-1))
    return clamp_llr(llr.reshape(-1), LLR_CLAMP)


def hard_demodulate(y: np.ndarray, spec: ConstellationSpec) -> np.ndarray:
    """最小距离判决，返回比特"""
    y = np.atleast_1d(np.asarray(y, dtype=np.complex128))
    索引 = np.argmin(np.abs(y[..., None] - spec.points) ** 2, axis=-1)
    return spec.labels[索引].reshape(-1)


def minimum_distance(spec: ConstellationSpec) -> float:
    return float(min(abs(a - b) for a, b in combinations(spec.points, 2)))


def selection_threshold(spec: ConstellationSpec) -> float:
    """选择门限 ε = (d_min/2)²，QPSK 为 0.5"""
    return (minimum_distance(spec) / 2.0) ** 2
