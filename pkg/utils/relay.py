#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
全双工中继
逐帧软解调、SCCC 译码、重编码重构，并以 MMSE 平方偏差逐符号选择转发；
另含帧级转发的对比协议（CRC、SINR 门限、理想中继）。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np

from utils.channel import NoiseModel, effective_noise_variance
from utils.fec import CodecConfig, crc_check, sccc_decode, sccc_encode
from utils.modem import ConstellationSpec, modulate, soft_demodulate
from utils.signalcore import complex_to_real_matrix, complex_to_real_pair

logger = logging.getLogger(__name__)


class Protocol(str, Enum):
    """中继转发协议"""
    PROPOSED = "proposed"
    CRC_SDF = "crc_sdf"
    THRESHOLD_SDF = "threshold_sdf"
    PERFECT_RELAY = "perfect_relay"

    @classmethod
    def parse(cls, value) -> "Protocol":
        try:
            return cls(value)
        except ValueError:
            可选 = ", ".join(p.value for p in cls)
            raise ValueError(f"未知协议: {value}，可选 {可选}") from None


@dataclass(frozen=True, eq=False)
class RelayConfig:
    """中继处理参数"""
    codec: CodecConfig
    constellation: ConstellationSpec
    noise: NoiseModel
    P_S: float
    P_R: float
    epsilon: float
    protocol: Protocol = Protocol.PROPOSED
    gamma_T: float = 3.0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError(f"选择门限 ε 不能为负: {self.epsilon}")
        if self.P_S < 0 or self.P_R < 0:
            raise ValueError("发射功率不能为负")
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))


@dataclass(frozen=True, eq=False)
class RelaySlotState:
    """上一时隙中继发送的帧及其选择掩码"""
    prev_frame: np.ndarray
    prev_mask: np.ndarray

    @classmethod
    def silent(cls, n_symbols: int) -> "RelaySlotState":
        """初始状态：中继尚未发送任何符号"""
        return cls(prev_frame=np.zeros(n_symbols, dtype=np.complex128),
                   prev_mask=np.zeros(n_symbols, dtype=bool))


class RelaySlotOutput(NamedTuple):
    x_next: np.ndarray
    mask: np.ndarray
    info_hat: Optional[np.ndarray]
    delta: Optional[np.ndarray]


def mmse_matrix(h_SR: complex, P_S: float, P_R: float, sigma_RR_sq: float, sigma0_sq: float,
                sigma_x_sq: float = 1.0, si_active: bool = True) -> np.ndarray:
    """
    2x2 实数 MMSE 检测矩阵

    W = (σx²/2)·H̃ᵀ·[(σx²/2)·H̃H̃ᵀ + (P_R·σx²·σ²_RR/2)·I + (σ²_0/2)·I]⁻¹，
    H̃ 为 √P_S·h_SR 的实数等效矩阵；si_active 为 False 时去掉自干扰项。
    """
    H = complex_to_real_matrix(h_SR, np.sqrt(P_S))
    自干扰 = P_R * sigma_x_sq * sigma_RR_sq / 2.0 if si_active else 0.0
    A = (sigma_x_sq / 2.0) * H @ H.T + (自干扰 + sigma0_sq / 2.0) * np.eye(2)
    # A 对称，W = c·Hᵀ·A⁻¹ = c·(A⁻¹·H)ᵀ
    return (sigma_x_sq / 2.0) * np.linalg.solve(A, H).T


def square_deviation(W: np.ndarray, y: np.ndarray, x_hat: np.ndarray) -> np.ndarray:
    """
    平方偏差 Δ = ‖W·ỹ - x̃̂‖²

    参数:
        W: (2,2) 或 (..., 2, 2)
        y: (..., 2) 接收实数对
        x_hat: (..., 2) 重构符号实数对
    """
    估计 = np.einsum("...ij,...j->...i", W, y)
    return np.sum((估计 - x_hat) ** 2, axis=-1)


def select_symbol(delta, epsilon: float):
    """Δ ≤ ε 时选择转发（可逐元素）"""
    if epsilon < 0:
        raise ValueError(f"选择门限 ε 不能为负: {epsilon}")
    return np.asarray(delta) <= epsilon


def select_symbols(y_frame: np.ndarray, x_hat: np.ndarray, h_SR: complex,
                   prev_mask: np.ndarray, cfg: RelayConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    给定重构符号，对整帧逐符号计算 Δ 并作选择

    返回:
        (选择掩码, Δ)
    """
    y_frame = np.asarray(y_frame, dtype=np.complex128)
    x_hat = np.asarray(x_hat, dtype=np.complex128)
    if y_frame.shape != x_hat.shape or y_frame.shape != np.shape(prev_mask):
        raise ValueError("接收帧、重构帧与上一时隙掩码长度必须一致")
    参数 = (h_SR, cfg.P_S, cfg.P_R, cfg.noise.sigma_RR_sq, cfg.noise.sigma0_sq,
          cfg.constellation.sigma_x_sq)
    W_有干扰 = mmse_matrix(*参数, si_active=True)
    W_无干扰 = mmse_matrix(*参数, si_active=False)
    W = np.where(np.asarray(prev_mask, dtype=bool)[:, None, None], W_有干扰, W_无干扰)
    delta = square_deviation(W, complex_to_real_pair(y_frame), complex_to_real_pair(x_hat))
    return select_symbol(delta, cfg.epsilon), delta


def _decode_and_reconstruct(y_frame: np.ndarray, h_SR: complex, state: RelaySlotState,
                            cfg: RelayConfig) -> Tuple[np.ndarray, np.ndarray]:
    """软解调 + 译码 + 重编码调制，返回 (info_hat, x_hat)"""
    方差 = effective_noise_variance(cfg.noise, cfg.P_R, state.prev_mask,
                                  cfg.constellation.sigma_x_sq)
    llr = soft_demodulate(y_frame, h_SR, np.sqrt(cfg.P_S), 方差, cfg.constellation)
    info_hat = sccc_decode(llr, cfg.codec).info_hat
    x_hat = modulate(sccc_encode(info_hat, cfg.codec), cfg.constellation)
    return info_hat, x_hat


def relay_slot(y_frame: np.ndarray, h_SR: complex, state: RelaySlotState,
               cfg: RelayConfig) -> RelaySlotOutput:
    """
    符号级选择性译码转发的一次中继处理

    参数:
        y_frame: 本时隙中继接收帧
        h_SR: 本时隙 S-R 信道
        state: 上一时隙的发送帧与掩码（决定逐符号自干扰是否存在）
        cfg: 中继参数

    返回:
        RelaySlotOutput；被丢弃符号位置为 0
    """
    y_frame = np.asarray(y_frame, dtype=np.complex128)
    if y_frame.shape != state.prev_mask.shape:
        raise ValueError(f"接收帧长度 {y_frame.size} 与中继状态长度 {state.prev_mask.size} 不一致")
    info_hat, x_hat = _decode_and_reconstruct(y_frame, h_SR, state, cfg)
    mask, delta = select_symbols(y_frame, x_hat, h_SR, state.prev_mask, cfg)
    x_next = np.where(mask, x_hat, 0.0 + 0.0j)
    logger.debug("中继选择 %d/%d 个符号", int(mask.sum()), mask.size)
    return RelaySlotOutput(x_next=x_next, mask=mask, info_hat=info_hat, delta=delta)


def instantaneous_sinr(h_SR: complex, h_RR: complex, si_active: bool, cfg: RelayConfig) -> float:
    """中继瞬时 SINR = P_S|h_SR|²σx² / (P_R|h_RR|²σx²·[自干扰] + σ²_0)"""
    σx2 = cfg.constellation.sigma_x_sq
    干扰 = cfg.P_R * abs(h_RR) ** 2 * σx2 if si_active else 0.0
    return cfg.P_S * abs(h_SR) ** 2 * σx2 / (干扰 + cfg.noise.sigma0_sq)


def forward_frame(y_frame: np.ndarray, h_SR: complex, h_RR: complex, state: RelaySlotState,
                  cfg: RelayConfig, x_true: Optional[np.ndarray] = None) -> RelaySlotOutput:
    """
    按协议决定中继下一时隙的发送帧

    proposed 为逐符号选择；crc_sdf、threshold_sdf 整帧转发或静默；
    perfect_relay 总是转发源的真实帧（需要 x_true）。
    """
    n = state.prev_mask.size
    if cfg.protocol is Protocol.PROPOSED:
        return relay_slot(y_frame, h_SR, state, cfg)
    if cfg.protocol is Protocol.PERFECT_RELAY:
        if x_true is None:
            raise ValueError("理想中继需要源的真实符号")
        return RelaySlotOutput(np.asarray(x_true, dtype=np.complex128).copy(),
                               np.ones(n, dtype=bool), None, None)
    静默 = RelaySlotOutput(np.zeros(n, dtype=np.complex128), np.zeros(n, dtype=bool), None, None)
    if cfg.protocol is Protocol.THRESHOLD_SDF:
        sinr = instantaneous_sinr(h_SR, h_RR, bool(np.any(state.prev_mask)), cfg)
        if sinr < cfg.gamma_T:
            return 静默
        info_hat, x_hat = _decode_and_reconstruct(y_frame, h_SR, state, cfg)
        return RelaySlotOutput(x_hat, np.ones(n, dtype=bool), info_hat, None)
    # CRC_SDF
    info_hat, x_hat = _decode_and_reconstruct(y_frame, h_SR, state, cfg)
    if not crc_check(info_hat):
        return 静默._replace(info_hat=info_hat)
    return RelaySlotOutput(x_hat, np.ones(n, dtype=bool), info_hat, None)


class RelayNode:
    """
    持有跨时隙状态的中继节点

    每个时隙调用 receive()，返回下一时隙要发送的帧。
    """

    def __init__(self, cfg: RelayConfig, n_symbols: int):
        self.cfg = cfg
        self.state = RelaySlotState.silent(n_symbols)

    @property
    def transmit_frame(self) -> np.ndarray:
        """当前时隙中继发送的帧（上一时隙的处理结果）"""
        return self.state.prev_frame

    def receive(self, y_frame: np.ndarray, h_SR: complex, h_RR: complex,
                x_true: Optional[np.ndarray] = None) -> RelaySlotOutput:
        输出 = forward_frame(y_frame, h_SR, h_RR, self.state, self.cfg, x_true)
        self.state = RelaySlotState(prev_frame=输出.x_next, prev_mask=输出.mask)
        return 输出
