#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
仿真与实验编排
中断概率、自干扰扫描、对比协议、功率分配对比、误比特率与选择准确度实验，
以及结果 CSV / 元数据输出。
"""

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from utils import analysis
from utils.channel import (Link, LinkGeometry, NoiseModel, draw_channel, link_variance,
                           powers_from_total_snr)
from utils.destination import combine_and_decode, detect_slot, slot_kind_for
from utils.fec import NUMBA_AVAILABLE, CRC16_WIDTH, CodecConfig, crc_attach, sccc_encode
from utils.modem import ConstellationSpec, modulate, selection_threshold
from utils.optimize import ContourPoint, OptimizeConfig, optimize_power_given_location
from utils.relay import Protocol, RelayConfig, RelayNode, RelaySlotState, relay_slot
from utils.signalcore import RandomStream, db_to_linear

logger = logging.getLogger(__name__)

RESULT_HEADER = ["sweep", "metric", "value", "ci_half_width", "n_trials"]
CONTOUR_HEADER = ["p_s_frac", "d_sr_frac", "outage"]

# 各类随机流的编号基址，互不重叠
_MC_STREAM_BASE = 1 << 40
_PC_STREAM_BASE = 2 << 40
_ACCURACY_STREAM_BASE = 3 << 40

进度回调 = Optional[Callable[[int], None]]


@dataclass
class SimConfig:
    """仿真参数，默认值对应常用实验设置"""
    L: int = 20
    M: int = 512
    modulation_order: int = 4
    epsilon: Optional[float] = None
    geometry: str = "L1"
    d_SD: float = 1.0
    path_loss_exponent: float = 2.0
    sigma_RR_sq: float = 1.0
    sigma0_sq: float = 1.0
    rate: float = 1.0
    gamma_T: float = 3.0
    relay_error_prob: float = 0.01
    protocols: List[str] = field(default_factory=lambda: [p.value for p in Protocol])
    snr_db: List[float] = field(default_factory=lambda: [float(s) for s in range(0, 31, 2)])
    n_trials: int = 10000
    ber_trials: int = 1000
    seed: int = 0
    mode: str = "analytic"
    pc_mode: str = "expected_gain"
    pc_realizations: int = 1000
    power_split: float = 0.5
    power_allocation: str = "equal"
    n_iterations: int = 8
    doping_rate: int = 2
    interleaver_seed: int = 0
    early_exit: bool = False
    si_max: float = 5.0
    si_snr_db: float = 3.0
    si_points: List[float] = field(default_factory=lambda: [i / 10.0 for i in range(11)])
    accuracy_snr_db: List[float] = field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0, 20.0])
    accuracy_orders: List[int] = field(default_factory=lambda: [2, 4, 16])
    accuracy_trials: int = 200
    self_check: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ValueError(f"帧数 L 必须是正偶数: {self.L}")
        if self.M < 1 or self.n_trials < 1 or self.ber_trials < 1 or self.accuracy_trials < 1:
            raise ValueError("帧长与试验次数必须为正")
        if self.pc_realizations < 1 or self.workers < 1:
            raise ValueError("样本数与进程数必须为正")
        if self.mode not in ("analytic", "mc", "both"):
            raise ValueError(f"未知模式: {self.mode}，可选 analytic, mc, both")
        if self.pc_mode not in ("expected_gain", "per_realization"):
            raise ValueError(f"未知 P_C 模式: {self.pc_mode}")
        if self.power_allocation not in ("equal", "optimal"):
            raise ValueError(f"未知功率分配方式: {self.power_allocation}")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError(f"选择门限 ε 不能为负: {self.epsilon}")
        if self.sigma_RR_sq < 0 or self.sigma0_sq <= 0 or self.rate <= 0:
            raise ValueError("σ²_RR 不能为负，σ²_0 与速率必须为正")
        if not 0.0 <= self.relay_error_prob < 0.5:
            raise ValueError(f"中继错误概率必须在[0, 0.5)内: {self.relay_error_prob}")
        self.protocols = [Protocol.parse(p).value for p in self.protocols]
        Z = ConstellationSpec.for_order(self.modulation_order).bits_per_symbol
        if (2 * self.M) % Z:
            raise ValueError(f"码长 {2 * self.M} 不能被每符号比特数 {Z} 整除")
        if Protocol.CRC_SDF.value in self.protocols and self.M <= CRC16_WIDTH:
            raise ValueError(f"CRC 协议要求帧长大于 {CRC16_WIDTH}")
        LinkGeometry.preset(self.geometry, self.d_SD, self.path_loss_exponent)

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def geometry_obj(self) -> LinkGeometry:
        return LinkGeometry.preset(self.geometry, self.d_SD, self.path_loss_exponent)

    def noise(self, sigma_RR_sq: Optional[float] = None) -> NoiseModel:
        σ = self.sigma_RR_sq if sigma_RR_sq is None else sigma_RR_sq
        return NoiseModel(sigma0_sq=self.sigma0_sq, sigma_RR_sq=σ)

    def constellation(self, order: Optional[int] = None) -> ConstellationSpec:
        return ConstellationSpec.for_order(self.modulation_order if order is None else order)

    def epsilon_for(self, spec: ConstellationSpec) -> float:
        return selection_threshold(spec) if self.epsilon is None else self.epsilon

    def codec(self) -> CodecConfig:
        return CodecConfig(info_bits=self.M, doping_rate=self.doping_rate,
                           n_iterations=self.n_iterations, interleaver_seed=self.interleaver_seed,
                           early_exit=self.early_exit)


class ResultRow(NamedTuple):
    sweep: float
    metric: str
    value: float
    ci_half_width: float = float("nan")
    n_trials: int = 0


class SelfCheckError(RuntimeError):
    """蒙特卡洛与解析结果偏差超过 3σ"""

    def __init__(self, points: List[Tuple[float, str, float, float]]):
        self.points = points
        明细 = "; ".join(f"{m}@{s:g}: 仿真 {mc:.4g} / 解析 {an:.4g}" for s, m, mc, an in points)
        super().__init__(f"自检失败，{len(points)} 个点偏差超过3σ: {明细}")


def wilson_half_width(k: int, n: int, confidence: float = 0.95) -> float:
    """Wilson 置信区间半宽"""
    if n < 1:
        raise ValueError(f"样本数必须为正: {n}")
    z = norm.ppf(0.5 + confidence / 2.0)
    p = k / n
    return float(z / (1.0 + z * z / n) * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)))


def _analytic_point(cfg: SimConfig, snr_db: float, sigma_RR_sq: float, point_index: int) -> Dict[str, float]:
    """单个 SNR 点的解析量：P₁、P₀、P_C 与全双工/半双工中断概率"""
    geom = cfg.geometry_obj()
    noise = cfg.noise(sigma_RR_sq)
    spec = cfg.constellation()
    ε = cfg.epsilon_for(spec)
    功率 = powers_from_total_snr(snr_db, noise, cfg.power_split, spec.sigma_x_sq)
    σ_SR = link_variance(geom, Link.SR)
    σ_RD = link_variance(geom, Link.RD)
    σ_SD = link_variance(geom, Link.SD)
    模型 = analysis.markov_model_expected_gain(功率.P_S, 功率.P_R, σ_SR, sigma_RR_sq, ε, cfg.L,
                                             cfg.sigma0_sq, spec.sigma_x_sq)
    if cfg.pc_mode == "per_realization":
        rng = RandomStream(cfg.seed, _PC_STREAM_BASE + point_index)
        P_C = analysis.p_forward_avg_per_realization(功率.P_S, 功率.P_R, σ_SR, sigma_RR_sq, ε, cfg.L,
                                                     rng, cfg.pc_realizations, cfg.sigma0_sq,
                                                     spec.sigma_x_sq)
    else:
        P_C = analysis.p_forward_avg(模型)
    X = 功率.P_S * σ_SD / cfg.sigma0_sq
    Y = 功率.P_R * σ_RD / cfg.sigma0_sq
    return {
        "X": X, "Y": Y, "p1": 模型.p1, "p0": 模型.p0, "P_C": P_C,
        "fd": analysis.outage_fd(analysis.OutageParams(X=X, Y=Y, R=cfg.rate, P_C=P_C)),
        "hd": analysis.outage_hd(X, Y, cfg.rate, 模型.p0),
    }


def _mc_rows(cfg: SimConfig, sweep: float, 点: Dict[str, float], point_index: int,
             failures: List) -> List[ResultRow]:
    rng = RandomStream(cfg.seed, _MC_STREAM_BASE + point_index)
    行 = []
    for 名称, 半双工, 转发 in (("fd", False, 点["P_C"]), ("hd", True, 点["p0"])):
        估计, 次数 = analysis.mc_outage(点["X"], 点["Y"], cfg.rate, 转发, cfg.n_trials, rng, 半双工)
        行.append(ResultRow(sweep, f"outage.{名称}.mc", 估计,
                            wilson_half_width(次数, cfg.n_trials), cfg.n_trials))
        σ = np.sqrt(max(点[名称] * (1.0 - 点[名称]), 1.0 / cfg.n_trials) / cfg.n_trials)
        if abs(估计 - 点[名称]) > 3.0 * σ:
            failures.append((sweep, f"outage.{名称}", 估计, 点[名称]))
    return 行


def run_outage_experiment(cfg: SimConfig, progress: 进度回调 = None) -> List[ResultRow]:
    """
    中断概率与吞吐量随总平均链路 SNR 的变化（全双工与半双工）

    mode 为 mc 或 both 时附加蒙特卡洛估计；self_check 时偏差超过 3σ 抛出 SelfCheckError
    """
    行 = []
    失败 = []
    for i, snr in enumerate(cfg.snr_db):
        点 = _analytic_point(cfg, snr, cfg.sigma_RR_sq, i)
        if cfg.mode in ("analytic", "both"):
            行.extend([
                ResultRow(snr, "outage.fd", 点["fd"]),
                ResultRow(snr, "outage.hd", 点["hd"]),
                ResultRow(snr, "p_c", 点["P_C"]),
                ResultRow(snr, "throughput.fd", float(analysis.throughput_fd(cfg.rate, 点["fd"], cfg.L))),
                ResultRow(snr, "throughput.hd", float(analysis.throughput_hd(cfg.rate, 点["hd"]))),
            ])
        if cfg.mode in ("mc", "both"):
            行.extend(_mc_rows(cfg, snr, 点, i, 失败))
        logger.info("SNR %.1f dB: 全双工 %.4e, 半双工 %.4e", snr, 点["fd"], 点["hd"])
        if progress:
            progress(1)
    if cfg.self_check and 失败:
        raise SelfCheckError(失败)
    return 行


def run_si_sweep(cfg: SimConfig, progress: 进度回调 = None) -> List[ResultRow]:
    """固定 SNR 下中断概率随归一化自干扰方差 σ²_RR / si_max 的变化"""
    行 = []
    失败 = []
    for i, 归一化 in enumerate(cfg.si_points):
        if not 0.0 <= 归一化 <= 1.0:
            raise ValueError(f"归一化自干扰必须在[0,1]内: {归一化}")
        点 = _analytic_point(cfg, cfg.si_snr_db, 归一化 * cfg.si_max, i)
        if cfg.mode in ("analytic", "both"):
            行.append(ResultRow(归一化, "outage.fd", 点["fd"]))
            行.append(ResultRow(归一化, "outage.hd", 点["hd"]))
        if cfg.mode in ("mc", "both"):
            行.extend(_mc_rows(cfg, 归一化, 点, i, 失败))
        if progress:
            progress(1)
    if cfg.self_check and 失败:
        raise SelfCheckError(失败)
    return 行


def run_baseline_experiment(cfg: SimConfig, progress: 进度回调 = None) -> List[ResultRow]:
    """各转发协议的解析中断概率随 SNR 的变化"""
    geom = cfg.geometry_obj()
    noise = cfg.noise()
    spec = cfg.constellation()
    行 = []
    for snr in cfg.snr_db:
        功率 = powers_from_total_snr(snr, noise, cfg.power_split, spec.sigma_x_sq)
        for 协议 in cfg.protocols:
            值 = analysis.protocol_outage(
                协议, 功率.P_S, 功率.P_R, link_variance(geom, Link.SD), link_variance(geom, Link.SR),
                link_variance(geom, Link.RD), cfg.sigma_RR_sq, cfg.rate, cfg.L,
                cfg.epsilon_for(spec), cfg.gamma_T, cfg.sigma0_sq, spec.sigma_x_sq)
            行.append(ResultRow(snr, f"outage.{协议}", 值))
        if progress:
            progress(1)
    return 行


def optimize_config_for(cfg: SimConfig, snr_db: float) -> OptimizeConfig:
    """由仿真参数与 SNR 构造同一系统的优化参数"""
    spec = cfg.constellation()
    功率 = powers_from_total_snr(snr_db, cfg.noise(), 0.5, spec.sigma_x_sq)
    return OptimizeConfig(P_tot=功率.P_tot, d_SD=cfg.d_SD, v=cfg.path_loss_exponent, R=cfg.rate,
                          epsilon=cfg.epsilon_for(spec), sigma_RR_sq=cfg.sigma_RR_sq,
                          sigma0_sq=cfg.sigma0_sq, sigma_x_sq=spec.sigma_x_sq, L=cfg.L,
                          mode="power_given_location")


def optimal_power_split(cfg: SimConfig, snr_db: float) -> Tuple[float, float]:
    """固定几何下的最优 P_S/P_tot 及对应中断概率"""
    优化 = optimize_config_for(cfg, snr_db)
    报告 = optimize_power_given_location(优化, cfg.geometry_obj().d_SR)
    return 报告.P_S / 优化.P_tot, 报告.outage


def run_power_comparison(cfg: SimConfig, progress: 进度回调 = None) -> List[ResultRow]:
    """每个 SNR 点上最优功率分配与等功率分配的中断概率"""
    行 = []
    for i, snr in enumerate(cfg.snr_db):
        等功率 = _analytic_point(cfg, snr, cfg.sigma_RR_sq, i)["fd"]
        比例, 最优 = optimal_power_split(cfg, snr)
        行.extend([
            ResultRow(snr, "outage.equal_power", 等功率),
            ResultRow(snr, "outage.optimal_power", 最优),
            ResultRow(snr, "optimal.p_s_frac", 比例),
        ])
        if progress:
            progress(1)
    return 行


def _relay_config(cfg: SimConfig, protocol: str, P_S: float, P_R: float,
                  spec: ConstellationSpec, codec: CodecConfig) -> RelayConfig:
    return RelayConfig(codec=codec, constellation=spec, noise=cfg.noise(), P_S=P_S, P_R=P_R,
                       epsilon=cfg.epsilon_for(spec), protocol=protocol, gamma_T=cfg.gamma_T)


def simulate_trial(cfg: SimConfig, snr_db: float, protocol: str, rng: RandomStream,
                   power_split: Optional[float] = None,
                   codec: Optional[CodecConfig] = None) -> Tuple[int, int]:
    """
    一次 L 帧全双工传输的端到端仿真

    返回:
        (误比特数, 比较的比特数)；CRC 协议只统计负载比特
    """
    spec = cfg.constellation()
    codec = cfg.codec() if codec is None else codec
    noise = cfg.noise()
    split = cfg.power_split if power_split is None else power_split
    功率 = powers_from_total_snr(snr_db, noise, split, spec.sigma_x_sq)
    P_S, P_R = 功率.P_S, 功率.P_R
    协议 = Protocol.parse(protocol)
    L, M = cfg.L, cfg.M

    信息 = [rng.bits(M) for _ in range(L)]
    比较位数 = M
    if 协议 is Protocol.CRC_SDF:
        比较位数 = M - CRC16_WIDTH
        信息 = [crc_attach(f[:比较位数]) for f in 信息]
    源符号 = [modulate(sccc_encode(f, codec), spec) for f in 信息]
    n_sym = 源符号[0].size
    信道 = draw_channel(cfg.geometry_obj(), noise, L, rng)
    中继 = RelayNode(_relay_config(cfg, 协议.value, P_S, P_R, spec, codec), n_sym)
    静默 = np.zeros(n_sym, dtype=np.complex128)

    检测 = []
    for l in range(1, L + 2):
        h_SR, h_SD, h_RD, h_RR = 信道.slot(l)
        x_R = 中继.transmit_frame
        x_S = 源符号[l - 1] if l <= L else 静默
        if l <= L:
            y_R = (np.sqrt(P_S) * h_SR * x_S + np.sqrt(P_R) * h_RR * x_R
                   + rng.complex_gaussian(noise.sigma0_sq, n_sym))
        y_D = (np.sqrt(P_S) * h_SD * x_S + np.sqrt(P_R) * h_RD * x_R
               + rng.complex_gaussian(noise.sigma0_sq, n_sym))
        检测.append(detect_slot(y_D, h_SD, h_RD, P_S, P_R, slot_kind_for(l, L), spec,
                              noise.sigma0_sq, l))
        if l <= L:
            中继.receive(y_R, h_SR, h_RR, x_S)
    # 理想中继的转发符号无错
    错误概率 = 0.0 if 协议 is Protocol.PERFECT_RELAY else cfg.relay_error_prob
    结果 = combine_and_decode(检测, codec, reference=信息, compare_bits=比较位数,
                            relay_error_prob=错误概率)
    return sum(结果.bit_errors), 比较位数 * L


def _ber_task(args) -> Tuple[int, int]:
    cfg, snr, protocol, stream_id, split = args
    return simulate_trial(cfg, snr, protocol, RandomStream(cfg.seed, stream_id), split)


def _map_tasks(func, tasks: Sequence, workers: int, progress: 进度回调 = None) -> List:
    """按任务顺序返回结果；workers > 1 时使用进程池"""
    if workers <= 1:
        结果 = []
        for t in tasks:
            结果.append(func(t))
            if progress:
                progress(1)
        return 结果
    with ProcessPoolExecutor(max_workers=workers) as 池:
        结果 = []
        for r in 池.map(func, tasks, chunksize=max(1, len(tasks) // (8 * workers))):
            结果.append(r)
            if progress:
                progress(1)
        return 结果


def run_ber_experiment(cfg: SimConfig, progress: 进度回调 = None) -> List[ResultRow]:
    """
    各协议的端到端误比特率随 SNR 的变化

    同一 SNR 点、同一试验编号在各协议间使用相同随机流（公共随机数）
    """
    行 = []
    for i, snr in enumerate(cfg.snr_db):
        split = optimal_power_split(cfg, snr)[0] if cfg.power_allocation == "optimal" else cfg.power_split
        for 协议 in cfg.protocols:
            任务 = [(cfg, snr, 协议, i * cfg.ber_trials + t, split) for t in range(cfg.ber_trials)]
            结果 = _map_tasks(_ber_task, 任务, cfg.workers, progress)
            错误 = sum(r[0] for r in 结果)
            总数 = sum(r[1] for r in 结果)
            行.append(ResultRow(snr, f"ber.{协议}", 错误 / 总数,
                                wilson_half_width(错误, 总数), cfg.ber_trials))
            logger.info("SNR %.1f dB 协议 %s: BER %.3e", snr, 协议, 错误 / 总数)
    return 行


def _accuracy_task(args) -> Tuple[int, int, int]:
    """单帧选择准确度：返回 (选择且错误, 选择且正确, 符号总数)"""
    cfg, order, snr, stream_id = args
    rng = RandomStream(cfg.seed, stream_id)
    spec = cfg.constellation(order)
    codec = cfg.codec()
    P_S = float(db_to_linear(snr)) * cfg.sigma0_sq / spec.sigma_x_sq
    中继配置 = _relay_config(cfg, Protocol.PROPOSED.value, P_S, P_S, spec, codec)
    信息 = rng.bits(cfg.M)
    x = modulate(sccc_encode(信息, codec), spec)
    h_SR = complex(rng.complex_gaussian(1.0))
    y = np.sqrt(P_S) * h_SR * x + rng.complex_gaussian(cfg.sigma0_sq, x.size)
    输出 = relay_slot(y, h_SR, RelaySlotState.silent(x.size), 中继配置)
    正确 = 输出.x_next == x
    return (int(np.count_nonzero(输出.mask & ~正确)), int(np.count_nonzero(输出.mask & 正确)),
            int(x.size))


def run_selection_accuracy(cfg: SimConfig, progress: 进度回调 = None) -> List[ResultRow]:
    """
    中继选择准确度：Pr[选择且重构错误] 与 Pr[选择且重构正确] 随 S-R SNR 的变化

    S-R 链路平均增益取 1，中继无自干扰
    """
    行 = []
    for order in cfg.accuracy_orders:
        for i, snr in enumerate(cfg.accuracy_snr_db):
            基址 = _ACCURACY_STREAM_BASE + (order * len(cfg.accuracy_snr_db) + i) * cfg.accuracy_trials
            任务 = [(cfg, order, snr, 基址 + t) for t in range(cfg.accuracy_trials)]
            结果 = _map_tasks(_accuracy_task, 任务, cfg.workers, progress)
            错, 对, 总 = (sum(r[k] for r in 结果) for k in range(3))
            行.append(ResultRow(snr, f"selection_accuracy.q{order}.selected_wrong", 错 / 总,
                                wilson_half_width(错, 总), cfg.accuracy_trials))
            行.append(ResultRow(snr, f"selection_accuracy.q{order}.selected_correct", 对 / 总,
                                wilson_half_width(对, 总), cfg.accuracy_trials))
    return 行


def _fmt(x: float) -> str:
    return "%.10e" % x


def emit_results(rows: Iterable[ResultRow], path: str) -> None:
    """写出结果 CSV，表头 sweep,metric,value,ci_half_width,n_trials"""
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            写入器 = csv.writer(f, lineterminator="\n")
            写入器.writerow(RESULT_HEADER)
            for r in rows:
                写入器.writerow([_fmt(r.sweep), r.metric, _fmt(r.value), _fmt(r.ci_half_width),
                              int(r.n_trials)])
    except OSError as e:
        raise OSError(f"写入结果文件失败 {path}: {e}") from e


def read_results(path: str) -> List[ResultRow]:
    """读取 emit_results 写出的 CSV"""
    try:
        with open(path, "r", newline="", encoding="utf-8") as f:
            读取器 = csv.reader(f)
            表头 = next(读取器, None)
            if 表头 != RESULT_HEADER:
                raise ValueError(f"结果文件表头不正确 {path}: {表头}")
            return [ResultRow(float(s), m, float(v), float(c), int(n)) for s, m, v, c, n in 读取器]
    except OSError as e:
        raise OSError(f"读取结果文件失败 {path}: {e}") from e


def emit_contour(points: Iterable[ContourPoint], path: str) -> None:
    """写出等高线网格 CSV，表头 p_s_frac,d_sr_frac,outage"""
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            写入器 = csv.writer(f, lineterminator="\n")
            写入器.writerow(CONTOUR_HEADER)
            for p in points:
                写入器.writerow([_fmt(p.p_s_frac), _fmt(p.d_sr_frac), _fmt(p.outage)])
    except OSError as e:
        raise OSError(f"写入等高线文件失败 {path}: {e}") from e


def emit_metadata(path: str, experiment: str, config: object, extra: Optional[Dict] = None) -> str:
    """
    在结果文件旁写出 <path>.meta.json，记录实验名、参数与解释说明

    返回:
        元数据文件路径
    """
    元数据 = {
        "experiment": experiment,
        "config": asdict(config),
        "notes": {
            "snr_axis": "total average links SNR = linear mean of P_S/σ²_0 and P_R/σ²_0 (σ²_x=1)",
            "throughput": "interpreted: FD = R·(1-P_out)·L/(L+1), HD = R·(1-P_out) with HD outage at threshold e^{2R}-1",
            "numba": NUMBA_AVAILABLE,
        },
    }
    if extra:
        元数据.update(extra)
    元数据路径 = f"{path}.meta.json"
    try:
        with open(元数据路径, "w", encoding="utf-8") as f:
            json.dump(元数据, f, ensure_ascii=False, indent=2)
    except OSError as e:
        raise OSError(f"写入元数据失败 {元数据路径}: {e}") from e
    return 元数据路径


def ensure_output_dir(path: str) -> None:
    目录 = os.path.dirname(os.path.abspath(path))
    os.makedirs(目录, exist_ok=True)
