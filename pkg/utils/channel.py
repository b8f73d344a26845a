#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
信道模型
三节点（源 S、中继 R、目的 D）几何、路径损耗、块衰落瑞利信道与残余自干扰
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from utils.signalcore import RandomStream, db_to_linear

logger = logging.getLogger(__name__)

# 预设几何: (d_SR, d_RD)，以 d_SD 为单位
几何预设 = {
    "L1": (0.4, 0.6),
    "L2": (0.8, 0.2),
}


class Link(Enum):
    """链路"""
    SR = "SR"
    SD = "SD"
    RD = "RD"


@dataclass(frozen=True)
class LinkGeometry:
    """三节点距离与路径损耗指数"""
    d_SD: float
    d_SR: float
    d_RD: float
    v: float = 2.0

    def __post_init__(self):
        for 名称 in ("d_SD", "d_SR", "d_RD"):
            值 = getattr(self, 名称)
            if not np.isfinite(值) or 值 <= 0:
                raise ValueError(f"距离 {名称} 必须是正的有限值，实际为 {值}")
        if self.v <= 0:
            raise ValueError(f"路径损耗指数必须为正，实际为 {self.v}")

    @classmethod
    def preset(cls, name: str, d_SD: float = 1.0, v: float = 2.0) -> "LinkGeometry":
        """
        按预设名称构建几何

        参数:
            name: "L1" 或 "L2"
            d_SD: 源到目的距离
            v: 路径损耗指数
        """
        if name not in 几何预设:
            raise ValueError(f"未知几何预设: {name}，可选 {', '.join(几何预设)}")
        d_SR, d_RD = 几何预设[name]
        return cls(d_SD=d_SD, d_SR=d_SR * d_SD, d_RD=d_RD * d_SD, v=v)

    @classmethod
    def collinear(cls, d_SD: float, d_SR: float, v: float = 2.0) -> "LinkGeometry":
        """共线几何，d_RD = d_SD - d_SR"""
        if not 0.0 < d_SR < d_SD:
            raise ValueError(f"共线几何要求 0 < d_SR < d_SD，实际 d_SR={d_SR}, d_SD={d_SD}")
        return cls(d_SD=d_SD, d_SR=d_SR, d_RD=d_SD - d_SR, v=v)

    def is_collinear(self, tol: float = 1e-12) -> bool:
        return abs(self.d_SR + self.d_RD - self.d_SD) <= tol * max(self.d_SD, 1.0)

    def distance(self, link: Link) -> float:
        return {Link.SR: self.d_SR, Link.SD: self.d_SD, Link.RD: self.d_RD}[link]


@dataclass(frozen=True)
class PowerAllocation:
    """源与中继发射功率"""
    P_S: float
    P_R: float
    P_tot: Optional[float] = None

    def __post_init__(self):
        if self.P_S < 0 or self.P_R < 0:
            raise ValueError(f"发射功率不能为负: P_S={self.P_S}, P_R={self.P_R}")
        if self.P_tot is not None and self.P_S + self.P_R > self.P_tot * (1 + 1e-12):
            raise ValueError(f"功率分配超出总功率: {self.P_S} + {self.P_R} > {self.P_tot}")


@dataclass(frozen=True)
class NoiseModel:
    """噪声方差与残余自干扰方差"""
    sigma0_sq: float = 1.0
    sigma_RR_sq: float = 0.0

    def __post_init__(self):
        if self.sigma0_sq <= 0:
            raise ValueError(f"噪声方差必须为正，实际为 {self.sigma0_sq}")
        if self.sigma_RR_sq < 0:
            raise ValueError(f"自干扰方差不能为负，实际为 {self.sigma_RR_sq}")


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    一次 L+1 时隙的信道实现

    数组下标 0 对应时隙 1；每个时隙内所有符号共享同一增益（块衰落）。
    """
    h_SR: np.ndarray
    h_SD: np.ndarray
    h_RD: np.ndarray
    h_RR: np.ndarray

    @property
    def n_slots(self) -> int:
        return len(self.h_SD)

    def slot(self, l: int) -> Tuple[complex, complex, complex, complex]:
        """
        取第 l 个时隙（从1开始）的 (h_SR, h_SD, h_RD, h_RR)
        """
        if not 1 <= l <= self.n_slots:
            raise ValueError(f"时隙编号越界: {l}，有效范围 1..{self.n_slots}")
        i = l - 1
        return self.h_SR[i], self.h_SD[i], self.h_RD[i], self.h_RR[i]


def link_variance(geom: LinkGeometry, link: Link) -> float:
    """
    链路平均功率增益 σ² = d^(-v)

    参数:
        geom: 几何（距离均为正，由 LinkGeometry 保证）
        link: 链路
    """
    return float(geom.distance(link) ** (-geom.v))


def snr_offset_db(geom: LinkGeometry, link: Link) -> float:
    """链路相对 S-D 链路的平均 SNR 偏移 (dB)"""
    return float(10.0 * np.log10(link_variance(geom, link) / link_variance(geom, Link.SD)))


def draw_channel(geom: LinkGeometry, noise: NoiseModel, L: int, rng: RandomStream) -> ChannelRealization:
    """
    抽取 L+1 个时隙的独立瑞利块衰落信道

    参数:
        geom: 几何
        noise: 噪声模型（提供 σ²_RR）
        L: 帧数
        rng: 随机数流

    返回:
        ChannelRealization，h_RR 每个时隙独立重抽
    """
    if L < 1:
        raise ValueError(f"帧数 L 必须为正，实际为 {L}")
    n = L + 1
    # 抽样顺序固定，保证可复现
    h_SR = rng.complex_gaussian(link_variance(geom, Link.SR), n)
    h_SD = rng.complex_gaussian(link_variance(geom, Link.SD), n)
    h_RD = rng.complex_gaussian(link_variance(geom, Link.RD), n)
    h_RR = rng.complex_gaussian(noise.sigma_RR_sq, n)
    for 数组 in (h_SR, h_SD, h_RD, h_RR):
        数组.setflags(write=False)
    return ChannelRealization(h_SR=h_SR, h_SD=h_SD, h_RD=h_RD, h_RR=h_RR)


def effective_noise_variance(noise: NoiseModel, P_R: float,
                             si_active: Union[bool, np.ndarray],
                             sigma_x_sq: float = 1.0) -> Union[float, np.ndarray]:
    """
    中继侧等效噪声方差 σ²_0 + P_R·σ²_x·σ²_RR·[自干扰存在]

    参数:
        noise: 噪声模型
        P_R: 中继功率
        si_active: 是否存在自干扰（可为逐符号布尔数组）
        sigma_x_sq: 符号平均能量

    返回:
        标量或与 si_active 同形状的数组
    """
    自干扰 = P_R * sigma_x_sq * noise.sigma_RR_sq
    结果 = noise.sigma0_sq + 自干扰 * np.asarray(si_active, dtype=np.float64)
    if np.ndim(结果) == 0:
        return float(结果)
    return 结果


def powers_from_total_snr(snr_db: float, noise: NoiseModel, power_split: float = 0.5,
                          sigma_x_sq: float = 1.0) -> PowerAllocation:
    """
    由“总平均链路 SNR”得到 (P_S, P_R)

    总平均链路 SNR 取源 SNR 与中继 SNR 的线性平均，
    即 P_tot·σ²_x / (2σ²_0)；等功率分配时 P_S = P_R = SNR·σ²_0/σ²_x。

    参数:
        snr_db: 总平均链路 SNR (dB)
        noise: 噪声模型
        power_split: P_S / P_tot
        sigma_x_sq: 符号平均能量
    """
    if not 0.0 <= power_split <= 1.0:
        raise ValueError(f"功率分配比例必须在[0,1]内: {power_split}")
    P_tot = 2.0 * float(db_to_linear(snr_db)) * noise.sigma0_sq / sigma_x_sq
    P_S = power_split * P_tot
    return PowerAllocation(P_S=P_S, P_R=P_tot - P_S, P_tot=P_tot)
