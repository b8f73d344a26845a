#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
目的节点
对叠加的源信号与中继信号作修正 MAP 联合检测，计入“中继丢弃”假设；
合并直达径与中继径 LLR 后进行 SCCC 译码。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from utils.fec import CodecConfig, sccc_decode
from utils.modem import ConstellationSpec, soft_demodulate
from utils.signalcore import LLR_CLAMP, clamp_llr

logger = logging.getLogger(__name__)


class SlotKind(str, Enum):
    """时隙类型：首时隙只有源，末时隙只有中继"""
    FIRST = "first"
    MIDDLE = "middle"
    LAST = "last"


@dataclass(frozen=True, eq=False)
class HypothesisSet:
    """
    联合假设集合 {(x_S, x_R)}

    include_discard 为 True 时中继符号额外取“丢弃”(0)，共 Q·(Q+1) 个假设；
    relay_index 为 -1 表示丢弃假设。
    """
    x_source: np.ndarray
    x_relay: np.ndarray
    source_index: np.ndarray
    relay_index: np.ndarray
    include_discard: bool

    @classmethod
    def build(cls, spec: ConstellationSpec, include_discard: bool = True) -> "HypothesisSet":
        Q = spec.order
        中继索引 = list(range(Q)) + ([-1] if include_discard else [])
        源索引 = np.repeat(np.arange(Q), len(中继索引))
        中继索引 = np.tile(np.array(中继索引), Q)
        中继点 = np.where(中继索引 >= 0, spec.points[np.maximum(中继索引, 0)], 0.0)
        return cls(x_source=spec.points[源索引], x_relay=中继点.astype(np.complex128),
                   source_index=源索引, relay_index=中继索引, include_discard=include_discard)

    def __len__(self) -> int:
        return self.x_source.size

    @property
    def discard(self) -> np.ndarray:
        return self.relay_index < 0


def normalize_observation(y: np.ndarray, h_S: np.ndarray, h_R: np.ndarray, sigma0_sq: float):
    """
    噪声归一化：乘以 1/σ₀，使每个实数维度噪声方差为 1/2，
    似然正比于 e^{-‖ỹ - H̃x̃ᵀ‖²}
    """
    if sigma0_sq <= 0:
        raise ValueError(f"噪声方差必须为正: {sigma0_sq}")
    缩放 = 1.0 / np.sqrt(sigma0_sq)
    return (np.asarray(y, dtype=np.complex128) * 缩放,
            np.asarray(h_S, dtype=np.complex128) * 缩放,
            np.asarray(h_R, dtype=np.complex128) * 缩放)


def _hypothesis_metrics(y, h_S, h_R, hyp: HypothesisSet) -> np.ndarray:
    """(M, K) 对数似然 -|y - h_S·x_S - h_R·x_R|²"""
    y = np.atleast_1d(y)
    h_S = np.broadcast_to(h_S, y.shape)
    h_R = np.broadcast_to(h_R, y.shape)
    残差 = y[:, None] - h_S[:, None] * hyp.x_source - h_R[:, None] * hyp.x_relay
    return -np.abs(残差) ** 2


def llr_source_bits(y: np.ndarray, h_S, h_R, spec: ConstellationSpec,
                    include_discard: bool = True) -> np.ndarray:
    """
    源比特 LLR，对所有假设（含丢弃假设）求和

    参数:
        y: 归一化后的接收符号 (M,)
        h_S: 归一化后的源等效增益 √P_S·h_SD/σ₀
        h_R: 归一化后的中继等效增益 √P_R·h_RD/σ₀
        spec: 星座
        include_discard: 是否包含中继丢弃假设

    返回:
        (M·Z,) LLR
    """
    hyp = HypothesisSet.build(spec, include_discard)
    度量 = _hypothesis_metrics(y, h_S, h_R, hyp)
    标号 = spec.labels[hyp.source_index]
    llr = np.empty((度量.shape[0], spec.bits_per_symbol))
    for i in range(spec.bits_per_symbol):
        零 = 标号[:, i] == 0
        llr[:, i] = logsumexp(度量[:, 零], axis=1) - logsumexp(度量[:, ~零], axis=1)
    return clamp_llr(llr.reshape(-1), LLR_CLAMP)


class RelayPosterior(NamedTuple):
    """log Pr[c_R,i=b|ỹ]，形状 (M, Z, 2)；log Pr[c=∅|ỹ]，形状 (M,)"""
    log_bit: np.ndarray
    log_discard: np.ndarray


def relay_posterior(y: np.ndarray, h_S, h_R, spec: ConstellationSpec) -> RelayPosterior:
    """中继比特与丢弃假设的后验，每个比特位上 Pr[0] + Pr[1] + Pr[∅] = 1"""
    hyp = HypothesisSet.build(spec, include_discard=True)
    度量 = _hypothesis_metrics(y, h_S, h_R, hyp)
    总量 = logsumexp(度量, axis=1)
    丢弃 = hyp.discard
    对数丢弃概率 = logsumexp(度量[:, 丢弃], axis=1) - 总量
    保留度量 = 度量[:, ~丢弃]
    标号 = spec.labels[hyp.relay_index[~丢弃]]
    对数比特 = np.empty((度量.shape[0], spec.bits_per_symbol, 2))
    for i in range(spec.bits_per_symbol):
        零 = 标号[:, i] == 0
        对数比特[:, i, 0] = logsumexp(保留度量[:, 零], axis=1) - 总量
        对数比特[:, i, 1] = logsumexp(保留度量[:, ~零], axis=1) - 总量
    return RelayPosterior(log_bit=对数比特, log_discard=对数丢弃概率)


class RelayLlr(NamedTuple):
    llr: np.ndarray
    discarded: np.ndarray


def llr_relay_bits(y: np.ndarray, h_S, h_R, spec: ConstellationSpec) -> RelayLlr:
    """
    中继比特 LLR

    若 max_{i,b} Pr[c_i=b|y] < Pr[c=∅|y]，判该符号被中继丢弃，其比特 LLR 全部置 0
    （相等时视为未丢弃）；否则在排除丢弃假设的集合上计算 LLR。

    返回:
        RelayLlr(llr (M·Z,), discarded (M,))
    """
    后验 = relay_posterior(y, h_S, h_R, spec)
    llr = 后验.log_bit[:, :, 0] - 后验.log_bit[:, :, 1]
    discarded = 后验.log_bit.max(axis=(1, 2)) < 后验.log_discard
    llr[discarded] = 0.0
    return RelayLlr(llr=clamp_llr(llr.reshape(-1), LLR_CLAMP), discarded=discarded)


def relay_reliability_llr(llr: np.ndarray, error_prob: float) -> np.ndarray:
    """
    按中继转发符号的残余错误概率 p 修正中继径 LLR

    L' = log((1-p)e^L + p) - log((1-p) + p·e^L)，|L'| ≤ log((1-p)/p)；p = 0 时原样返回
    """
    if not 0.0 <= error_prob < 0.5:
        raise ValueError(f"中继错误概率必须在[0, 0.5)内: {error_prob}")
    llr = np.asarray(llr, dtype=float)
    if error_prob == 0.0:
        return llr
    对数正确, 对数错误 = np.log1p(-error_prob), np.log(error_prob)
    return np.logaddexp(对数正确 + llr, 对数错误) - np.logaddexp(对数正确, 对数错误 + llr)


class SlotDetection(NamedTuple):
    """一个时隙的检测结果；不存在的路径为 None"""
    slot: int
    kind: SlotKind
    source_llr: Optional[np.ndarray]
    relay_llr: Optional[np.ndarray]
    relay_discarded: Optional[np.ndarray]


def detect_slot(y_frame: np.ndarray, h_SD: complex, h_RD: complex, P_S: float, P_R: float,
                slot_kind, spec: ConstellationSpec, sigma0_sq: float = 1.0,
                slot: int = 0) -> SlotDetection:
    """
    单时隙检测

    参数:
        y_frame: 目的节点接收帧
        h_SD, h_RD: 本时隙信道
        P_S, P_R: 发射功率
        slot_kind: first（仅源）/ middle（联合）/ last（仅中继）
        spec: 星座
        sigma0_sq: 噪声方差
        slot: 时隙编号（从1开始，仅用于记录）
    """
    try:
        kind = SlotKind(slot_kind)
    except ValueError:
        raise ValueError(f"无效的时隙类型: {slot_kind}") from None
    if kind is SlotKind.FIRST:
        llr = soft_demodulate(y_frame, h_SD, np.sqrt(P_S), sigma0_sq, spec)
        return SlotDetection(slot, kind, llr, None, None)
    h_S = np.sqrt(P_S) * h_SD if kind is SlotKind.MIDDLE else 0.0
    y, h_S, h_R = normalize_observation(y_frame, h_S, np.sqrt(P_R) * h_RD, sigma0_sq)
    中继 = llr_relay_bits(y, h_S, h_R, spec)
    源 = llr_source_bits(y, h_S, h_R, spec) if kind is SlotKind.MIDDLE else None
    if 中继.discarded.any():
        logger.debug("时隙 %d 判定中继丢弃 %d 个符号", slot, int(中继.discarded.sum()))
    return SlotDetection(slot, kind, 源, 中继.llr, 中继.discarded)


def slot_kind_for(l: int, L: int) -> SlotKind:
    """时隙 l（1..L+1）的类型"""
    if not 1 <= l <= L + 1:
        raise ValueError(f"时隙编号越界: {l}，有效范围 1..{L + 1}")
    if l == 1:
        return SlotKind.FIRST
    if l == L + 1:
        return SlotKind.LAST
    return SlotKind.MIDDLE


class CombineResult(NamedTuple):
    info_hats: List[np.ndarray]
    combined_llrs: List[np.ndarray]
    bit_errors: Optional[List[int]]


def combine_and_decode(detections: Sequence[SlotDetection], cfg: CodecConfig,
                       reference: Optional[Sequence[np.ndarray]] = None,
                       compare_bits: Optional[int] = None,
                       relay_error_prob: float = 0.0) -> CombineResult:
    """
    合并直达径与中继径 LLR 并译码

    第 l 帧的 LLR = 时隙 l 的源 LLR + 时隙 l+1 的中继 LLR。

    参数:
        detections: L+1 个时隙的检测结果，按时隙顺序
        cfg: 编解码参数
        reference: 可选，各帧真实信息比特，用于统计误比特
        compare_bits: 只比较前若干比特（如去掉 CRC 后的负载）
        relay_error_prob: 中继转发符号的残余错误概率，中继径 LLR 先经 relay_reliability_llr 修正

    返回:
        CombineResult
    """
    L = len(detections) - 1
    if L < 1:
        raise ValueError("至少需要两个时隙的检测结果")
    if not 0.0 <= relay_error_prob < 0.5:
        raise ValueError(f"中继错误概率必须在[0, 0.5)内: {relay_error_prob}")
    判决 = []
    合并 = []
    for l in range(1, L + 1):
        直达 = detections[l - 1].source_llr
        中继 = detections[l].relay_llr
        if 直达 is None or 中继 is None:
            raise ValueError(f"第 {l} 帧缺少直达径或中继径的检测结果")
        llr = 直达 + relay_reliability_llr(中继, relay_error_prob)
        合并.append(llr)
        判决.append(sccc_decode(llr, cfg).info_hat)
    误码 = None
    if reference is not None:
        if len(reference) != L:
            raise ValueError(f"参考帧数 {len(reference)} 与检测帧数 {L} 不一致")
        n = cfg.info_bits if compare_bits is None else compare_bits
        误码 = [int(np.count_nonzero(a[:n] != np.asarray(b)[:n])) for a, b in zip(判决, reference)]
    return CombineResult(info_hats=判决, combined_llrs=合并, bit_errors=误码)
