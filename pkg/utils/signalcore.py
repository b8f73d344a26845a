#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
基础信号工具
复数与实数等效表示之间的转换、可复现的随机数流、LLR 截断
"""

import logging
from typing import Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

# LLR 截断幅度
LLR_CLAMP = 50.0

ArrayLike = Union[complex, float, np.ndarray, Sequence[complex]]


def complex_to_real_pair(x: ArrayLike) -> np.ndarray:
    """
    复数转换为实数对 [Re, Im]

    参数:
        x: 复数标量或数组

    返回:
        形状为 (..., 2) 的实数数组
    """
    x = np.asarray(x, dtype=np.complex128)
    return np.stack([x.real, x.imag], axis=-1)


def real_pair_to_complex(p: np.ndarray) -> Union[complex, np.ndarray]:
    """
    实数对 [Re, Im] 转换回复数，与 complex_to_real_pair 互逆（按位相等）

    参数:
        p: 形状为 (..., 2) 的实数数组

    返回:
        复数标量或数组
    """
    p = np.asarray(p, dtype=np.float64)
    if p.shape[-1] != 2:
        raise ValueError(f"实数对最后一维长度必须为2，实际为 {p.shape[-1]}")
    # 分别写实部和虚部，保留 -0.0 的符号
    out = np.empty(p.shape[:-1], dtype=np.complex128)
    out.real = p[..., 0]
    out.imag = p[..., 1]
    if out.ndim == 0:
        return complex(out)
    return out


def complex_to_real_matrix(h: ArrayLike, scale: float = 1.0) -> np.ndarray:
    """
    复增益的 2x2 实数旋转缩放矩阵 scale*[[Re,-Im],[Im,Re]]

    参数:
        h: 复增益（标量或数组）
        scale: 缩放因子

    返回:
        形状为 (..., 2, 2) 的实数矩阵
    """
    h = np.asarray(h, dtype=np.complex128)
    a = scale * h.real
    b = scale * h.imag
    row0 = np.stack([a, -b], axis=-1)
    row1 = np.stack([b, a], axis=-1)
    return np.stack([row0, row1], axis=-2)


def clamp_llr(llr: np.ndarray, limit: float = LLR_CLAMP) -> np.ndarray:
    """LLR 截断到 [-limit, limit]"""
    return np.clip(np.asarray(llr, dtype=np.float64), -limit, limit)


class RandomStream:
    """
    可复现的随机数流

    由 (seed, stream_id) 唯一确定，同一对参数产生完全相同的随机序列，
    不同 stream_id 之间统计独立。每个流只应由一个使用者持有。
    """

    def __init__(self, seed: int, stream_id: int = 0):
        """
        初始化随机数流

        参数:
            seed: 64位非负整数种子
            stream_id: 子流编号
        """
        if seed < 0 or seed >= 2 ** 64:
            raise ValueError(f"随机种子必须是64位非负整数，实际为 {seed}")
        if stream_id < 0:
            raise ValueError(f"子流编号必须非负，实际为 {stream_id}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        序列 = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(序列))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"

    def substream(self, stream_id: int) -> "RandomStream":
        """同一种子下的另一个子流"""
        return RandomStream(self.seed, stream_id)

    def bits(self, n: int) -> np.ndarray:
        """n 个等概率比特 (uint8)"""
        return self.generator.integers(0, 2, size=n, dtype=np.uint8)

    def complex_gaussian(self, variance: float, size=None) -> np.ndarray:
        """
        圆对称复高斯样本 CN(0, variance)，每个实数维度方差为 variance/2

        参数:
            variance: 复方差
            size: 样本形状
        """
        if variance < 0:
            raise ValueError(f"方差不能为负: {variance}")
        样本 = self.generator.normal(size=size) + 1j * self.generator.normal(size=size)
        return np.sqrt(variance / 2.0) * 样本

    def exponential(self, mean: float, size=None) -> np.ndarray:
        """均值为 mean 的指数分布样本（瑞利信道功率增益）"""
        return self.generator.exponential(scale=mean, size=size)

    def bernoulli(self, p: float, size=None) -> np.ndarray:
        """成功概率为 p 的伯努利样本"""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"概率必须在[0,1]内: {p}")
        return self.generator.random(size=size) < p

    def permutation(self, n: int) -> np.ndarray:
        """0..n-1 的随机置换"""
        return self.generator.permutation(n)


def ensure_finite(value: float, name: str) -> float:
    """检查数值有限，否则抛出 ValueError"""
    if not np.isfinite(value):
        raise ValueError(f"{name} 必须是有限数值，实际为 {value}")
    return float(value)


def db_to_linear(db: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """分贝转线性值"""
    return np.power(10.0, np.asarray(db, dtype=np.float64) / 10.0)


def linear_to_db(x: Union[float, np.ndarray], floor: Optional[float] = None) -> Union[float, np.ndarray]:
    """线性值转分贝"""
    x = np.asarray(x, dtype=np.float64)
    if floor is not None:
        x = np.maximum(x, floor)
    return 10.0 * np.log10(x)
