#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
前向纠错编码
串行级联卷积码 (SCCC)：外码为 1/2 码率前馈卷积码，经随机交织后接内码掺杂累加器；
迭代译码采用对数域 max* (精确 Jacobian 对数) BCJR。另含 CRC-16 校验。
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from utils.signalcore import LLR_CLAMP, RandomStream, clamp_llr

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

logger = logging.getLogger(__name__)

# 交织器随机流编号，与仿真随机流分开
INTERLEAVER_STREAM = 0x1E7E

# LTE gcrc16: x^16 + x^12 + x^5 + 1
CRC16_POLY = 0x1021
CRC16_WIDTH = 16


def _jit(func):
    if NUMBA_AVAILABLE:
        return njit(cache=True)(func)
    return func


@_jit
def _max_star(a, b):
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@_jit
def _bcjr_kernel(next_state, out_table, prior_in, chan_out, terminated):
    T = prior_in.shape[0]
    S = next_state.shape[0]
    n = chan_out.shape[1]

    gamma = np.empty((T, S, 2))
    for k in range(T):
        for s in range(S):
            for u in range(2):
                g = 0.5 * prior_in[k] if u == 0 else -0.5 * prior_in[k]
                for j in range(n):
                    if out_table[k, s, u, j] == 0:
                        g += 0.5 * chan_out[k, j]
                    else:
                        g -= 0.5 * chan_out[k, j]
                gamma[k, s, u] = g

    alpha = np.full((T + 1, S), -np.inf)
    alpha[0, 0] = 0.0
    for k in range(T):
        for s in range(S):
            if alpha[k, s] == -np.inf:
                continue
            for u in range(2):
                ns = next_state[s, u]
                alpha[k + 1, ns] = _max_star(alpha[k + 1, ns], alpha[k, s] + gamma[k, s, u])
        m = np.max(alpha[k + 1])
        for s in range(S):
            alpha[k + 1, s] -= m

    beta = np.full((T + 1, S), -np.inf)
    if terminated:
        beta[T, 0] = 0.0
    else:
        for s in range(S):
            beta[T, s] = 0.0
    for k in range(T - 1, -1, -1):
        for s in range(S):
            for u in range(2):
                ns = next_state[s, u]
                if beta[k + 1, ns] == -np.inf:
                    continue
                beta[k, s] = _max_star(beta[k, s], gamma[k, s, u] + beta[k + 1, ns])
        m = np.max(beta[k])
        if m > -np.inf:
            for s in range(S):
                beta[k, s] -= m

    post_in = np.empty(T)
    post_out = np.empty((T, n))
    zero_out = np.empty(n)
    one_out = np.empty(n)
    for k in range(T):
        zero_in = -np.inf
        one_in = -np.inf
        for j in range(n):
            zero_out[j] = -np.inf
            one_out[j] = -np.inf
        for s in range(S):
            if alpha[k, s] == -np.inf:
                continue
            for u in range(2):
                ns = next_state[s, u]
                if beta[k + 1, ns] == -np.inf:
                    continue
                metric = alpha[k, s] + gamma[k, s, u] + beta[k + 1, ns]
                if u == 0:
                    zero_in = _max_star(zero_in, metric)
                else:
                    one_in = _max_star(one_in, metric)
                for j in range(n):
                    if out_table[k, s, u, j] == 0:
                        zero_out[j] = _max_star(zero_out[j], metric)
                    else:
                        one_out[j] = _max_star(one_out[j], metric)
        post_in[k] = _llr_from(zero_in, one_in)
        for j in range(n):
            post_out[k, j] = _llr_from(zero_out[j], one_out[j])
    return post_in, post_out


@_jit
def _llr_from(zero, one):
    if zero == -np.inf and one == -np.inf:
        return 0.0
    if one == -np.inf:
        return np.inf
    if zero == -np.inf:
        return -np.inf
    return zero - one


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True, eq=False)
class Trellis:
    """
    二进制输入网格

    next_state[s, u] 为下一状态；outputs[p, s, u, :] 为相位 p 的输出比特，
    第 k 步（从0开始）使用相位 k % period，用于描述周期时变（掺杂）网格。
    """
    next_state: np.ndarray
    outputs: np.ndarray

    def __post_init__(self):
        if self.next_state.ndim != 2 or self.next_state.shape[1] != 2:
            raise ValueError("next_state 形状必须为 (S, 2)")
        if self.outputs.ndim != 4 or self.outputs.shape[1:3] != self.next_state.shape:
            raise ValueError("outputs 形状必须为 (period, S, 2, n)")

    @property
    def n_states(self) -> int:
        return self.next_state.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.outputs.shape[3]

    @property
    def period(self) -> int:
        return self.outputs.shape[0]

    @classmethod
    def from_generators(cls, generators: Sequence[int], memory: int) -> "Trellis":
        """
        前馈卷积码网格

        生成多项式为八进制数，最高位对应当前输入比特，
        例如 memory=1 时 3 -> u_k⊕u_{k-1}，2 -> u_k。

        参数:
            generators: 八进制生成多项式（按 Python 整数给出，例如 0o3）
            memory: 编码器记忆长度
        """
        if memory < 1:
            raise ValueError(f"记忆长度必须为正: {memory}")
        K = memory + 1
        for g in generators:
            if g <= 0 or g >= (1 << K):
                raise ValueError(f"生成多项式 {oct(g)} 与记忆长度 {memory} 不匹配")
        S = 1 << memory
        next_state = np.empty((S, 2), dtype=np.int64)
        outputs = np.empty((1, S, 2, len(generators)), dtype=np.int64)
        for s in range(S):
            for u in range(2):
                寄存器 = (u << memory) | s
                next_state[s, u] = 寄存器 >> 1
                for j, g in enumerate(generators):
                    outputs[0, s, u, j] = _parity(寄存器 & g)
        return cls(next_state=next_state, outputs=outputs)

    @classmethod
    def doped_accumulator(cls, doping_rate: int) -> "Trellis":
        """
        掺杂累加器 s_k = s_{k-1} ⊕ v_k

        第 d, 2d, 3d, ... 个位置（从1开始计）输出系统比特 v_k，其余位置输出累加状态。
        """
        if doping_rate < 1:
            raise ValueError(f"掺杂率必须为正整数: {doping_rate}")
        next_state = np.array([[0, 1], [1, 0]], dtype=np.int64)
        outputs = np.empty((doping_rate, 2, 2, 1), dtype=np.int64)
        for p in range(doping_rate):
            掺杂 = (p + 1) % doping_rate == 0
            for s in range(2):
                for u in range(2):
                    outputs[p, s, u, 0] = u if 掺杂 else next_state[s, u]
        return cls(next_state=next_state, outputs=outputs)

    def output_table(self, T: int) -> np.ndarray:
        """展开为 (T, S, 2, n) 的逐步输出表"""
        return np.ascontiguousarray(self.outputs[np.arange(T) % self.period])

    def encode(self, bits: np.ndarray, initial_state: int = 0) -> Tuple[np.ndarray, int]:
        """
        网格编码

        返回:
            (输出比特 (T·n,), 终止状态)
        """
        bits = np.asarray(bits, dtype=np.int64).ravel()
        状态 = initial_state
        输出 = np.empty((bits.size, self.n_outputs), dtype=np.uint8)
        for k, u in enumerate(bits):
            输出[k] = self.outputs[k % self.period, 状态, u]
            状态 = int(self.next_state[状态, u])
        return 输出.reshape(-1), 状态


class BcjrResult(NamedTuple):
    """BCJR 输出：输入比特与输出比特的后验和外信息 LLR"""
    posterior_llr: np.ndarray
    extrinsic_llr: np.ndarray
    posterior_out_llr: np.ndarray
    extrinsic_out_llr: np.ndarray


def bcjr_decode(chan_llr: np.ndarray, prior_llr: np.ndarray, trellis: Trellis,
                terminated: bool = False) -> BcjrResult:
    """
    对数域 BCJR（精确 max*）

    参数:
        chan_llr: 输出比特的信道 LLR，长度 T·n
        prior_llr: 输入比特的先验 LLR，长度 T
        trellis: 网格
        terminated: 是否要求终止于零状态（否则末端状态均匀）

    返回:
        BcjrResult；外信息 = 后验 - 对应输入，截断到 ±LLR_CLAMP
    """
    prior = np.ascontiguousarray(prior_llr, dtype=np.float64).ravel()
    T = prior.size
    n = trellis.n_outputs
    chan = np.ascontiguousarray(chan_llr, dtype=np.float64).ravel()
    if chan.size != T * n:
        raise ValueError(f"信道LLR长度 {chan.size} 与网格步数 {T}×{n} 不一致")
    chan = chan.reshape(T, n)
    if not np.any(chan) and not np.any(prior) and not terminated:
        零 = np.zeros(T)
        return BcjrResult(零, 零.copy(), np.zeros(T * n), np.zeros(T * n))

    post_in, post_out = _bcjr_kernel(np.ascontiguousarray(trellis.next_state),
                                     trellis.output_table(T), prior, chan, terminated)
    post_out = post_out.reshape(-1)
    ext_in = clamp_llr(post_in - prior)
    ext_out = clamp_llr(post_out - chan.reshape(-1))
    return BcjrResult(_finite(post_in), ext_in, _finite(post_out), ext_out)


def _finite(llr: np.ndarray) -> np.ndarray:
    """确定比特的无穷 LLR 替换为 ±LLR_CLAMP，其余保持不变"""
    return np.where(np.isinf(llr), np.sign(llr) * LLR_CLAMP, llr)


def make_interleaver(n: int, seed: int) -> np.ndarray:
    """由种子生成长度 n 的随机交织置换"""
    return RandomStream(seed, INTERLEAVER_STREAM).permutation(n)


@dataclass(frozen=True, eq=False)
class CodecConfig:
    """
    SCCC 编解码参数

    码率 1/2：M 个信息比特产生 2M 个编码比特；外码尾比特的输出不发送，
    译码时以零终止状态约束。
    """
    info_bits: int = 512
    generators: Tuple[int, ...] = (0o3, 0o2)
    memory: int = 1
    doping_rate: int = 2
    n_iterations: int = 8
    interleaver_seed: int = 0
    early_exit: bool = False
    interleaver: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.info_bits < 1:
            raise ValueError(f"信息比特数必须为正: {self.info_bits}")
        if len(self.generators) != 2:
            raise ValueError("外码必须是1/2码率（两个生成多项式）")
        if self.n_iterations < 1:
            raise ValueError(f"迭代次数必须为正: {self.n_iterations}")
        n = self.coded_bits
        if self.interleaver is None:
            置换 = make_interleaver(n, self.interleaver_seed)
        else:
            置换 = np.asarray(self.interleaver, dtype=np.int64)
        if 置换.shape != (n,) or not np.array_equal(np.sort(置换), np.arange(n)):
            raise ValueError(f"交织器必须是 0..{n - 1} 的一个置换")
        置换.setflags(write=False)
        object.__setattr__(self, "interleaver", 置换)

    @property
    def coded_bits(self) -> int:
        return 2 * self.info_bits

    @cached_property
    def outer_trellis(self) -> Trellis:
        return Trellis.from_generators(self.generators, self.memory)

    @cached_property
    def inner_trellis(self) -> Trellis:
        return Trellis.doped_accumulator(self.doping_rate)


def sccc_encode(info: np.ndarray, cfg: CodecConfig) -> np.ndarray:
    """
    SCCC 编码

    参数:
        info: M 个信息比特
        cfg: 编解码参数

    返回:
        2M 个编码比特 (uint8)
    """
    info = np.asarray(info, dtype=np.uint8).ravel()
    if info.size != cfg.info_bits:
        raise ValueError(f"信息比特长度 {info.size} 与配置 {cfg.info_bits} 不一致")
    尾比特 = np.zeros(cfg.memory, dtype=np.uint8)
    外码输出, _ = cfg.outer_trellis.encode(np.concatenate([info, 尾比特]))
    外码输出 = 外码输出[:cfg.coded_bits]
    交织后 = 外码输出[cfg.interleaver]
    内码输出, _ = cfg.inner_trellis.encode(交织后)
    return 内码输出


class SCCCResult(NamedTuple):
    info_hat: np.ndarray
    coded_llr: np.ndarray
    iterations: int


def sccc_decode(chan_llr: np.ndarray, cfg: CodecConfig) -> SCCCResult:
    """
    SCCC 迭代译码（内码先、外码后）

    参数:
        chan_llr: 2M 个编码比特的信道 LLR
        cfg: 编解码参数

    返回:
        SCCCResult(info_hat, coded_llr, iterations)；后验恰为 0 时判为比特 0
    """
    chan = clamp_llr(np.asarray(chan_llr, dtype=np.float64).ravel())
    if chan.size != cfg.coded_bits:
        raise ValueError(f"信道LLR长度 {chan.size} 与码长 {cfg.coded_bits} 不一致")
    M = cfg.info_bits
    K = cfg.memory
    n_outer = M + K
    内码先验 = np.zeros(cfg.coded_bits)
    info_hat = None
    coded_llr = chan
    迭代 = 0
    for 迭代 in range(1, cfg.n_iterations + 1):
        内码 = bcjr_decode(chan, 内码先验, cfg.inner_trellis)
        coded_llr = 内码.posterior_out_llr
        解交织 = np.empty(cfg.coded_bits)
        解交织[cfg.interleaver] = 内码.extrinsic_llr
        外码信道 = np.zeros(2 * n_outer)
        外码信道[:cfg.coded_bits] = 解交织
        外码 = bcjr_decode(外码信道, np.zeros(n_outer), cfg.outer_trellis, terminated=True)
        新判决 = (外码.posterior_llr[:M] < 0).astype(np.uint8)
        内码先验 = 外码.extrinsic_out_llr[:cfg.coded_bits][cfg.interleaver]
        if cfg.early_exit and info_hat is not None and np.array_equal(新判决, info_hat):
            info_hat = 新判决
            logger.debug("判决收敛，第 %d 次迭代提前结束", 迭代)
            break
        info_hat = 新判决
    return SCCCResult(info_hat=info_hat, coded_llr=coded_llr, iterations=迭代)


def crc16_bits(bits: np.ndarray, poly: int = CRC16_POLY) -> np.ndarray:
    """
    CRC-16 校验比特（初值 0，MSB 在前）

    参数:
        bits: 数据比特
        poly: 生成多项式（不含最高次项）
    """
    寄存器 = 0
    for b in np.asarray(bits, dtype=np.uint8).ravel():
        反馈 = ((寄存器 >> (CRC16_WIDTH - 1)) & 1) ^ int(b)
        寄存器 = (寄存器 << 1) & 0xFFFF
        if 反馈:
            寄存器 ^= poly
    return np.array([(寄存器 >> (CRC16_WIDTH - 1 - i)) & 1 for i in range(CRC16_WIDTH)],
                    dtype=np.uint8)


def crc_attach(payload: np.ndarray, poly: int = CRC16_POLY) -> np.ndarray:
    """在负载后附加 16 位 CRC"""
    payload = np.asarray(payload, dtype=np.uint8).ravel()
    return np.concatenate([payload, crc16_bits(payload, poly)])


def crc_check(frame: np.ndarray, poly: int = CRC16_POLY) -> bool:
    """校验带 CRC 的帧，余式为零时通过"""
    frame = np.asarray(frame, dtype=np.uint8).ravel()
    if frame.size <= CRC16_WIDTH:
        raise ValueError(f"帧长 {frame.size} 不足以容纳 CRC")
    return not np.any(crc16_bits(frame, poly))
