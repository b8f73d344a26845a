#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
功率分配与中继位置优化
共线几何下对全双工中断概率做一维最小化：在数值导数上二分求驻点，
扫描多个区间并与端点比较；另给出 (P_S/P_tot, d_SR/d_SD) 等高线网格。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from utils.analysis import (MarkovSelectModel, OutageParams, outage_fd, p_forward_avg,
                            p_select, sigma_ce_sq)

logger = logging.getLogger(__name__)

# 距离端点相对余量，避免 d_SR 或 d_RD 为零
ENDPOINT_MARGIN = 1e-6


class OptimizeMode(str, Enum):
    EQUAL_GAIN_LOCATION = "equal_gain_location"
    POWER_GIVEN_LOCATION = "power_given_location"
    LOCATION_GIVEN_POWER = "location_given_power"
    SEPARATE_CONSTRAINTS = "separate_constraints"


@dataclass
class OptimizeConfig:
    """优化参数（默认值对应共线几何示例：P_tot=10, R=2, ε=1, σ²_RR=0.1）"""
    P_tot: float = 10.0
    d_SD: float = 1.0
    v: float = 2.0
    R: float = 2.0
    epsilon: float = 1.0
    sigma_RR_sq: float = 0.1
    sigma0_sq: float = 1.0
    sigma_x_sq: float = 1.0
    L: int = 20
    mode: str = OptimizeMode.EQUAL_GAIN_LOCATION.value
    d_SR: Optional[float] = None
    P_S: Optional[float] = None
    P_S_max: Optional[float] = None
    P_R_max: Optional[float] = None
    tolerance: float = 1e-4
    max_iter: int = 60
    scan_points: int = 64
    contour_resolution: int = 101

    def __post_init__(self):
        if self.P_tot <= 0:
            raise ValueError(f"总功率必须为正: {self.P_tot}")
        if self.d_SD <= 0:
            raise ValueError(f"d_SD 必须为正: {self.d_SD}")
        if self.R <= 0 or self.epsilon < 0 or self.sigma_RR_sq < 0 or self.sigma0_sq <= 0:
            raise ValueError("R 必须为正，ε、σ²_RR 不能为负，σ²_0 必须为正")
        if self.L < 1 or self.scan_points < 2 or self.max_iter < 1 or self.tolerance <= 0:
            raise ValueError("L、扫描点数、最大迭代次数与容差必须为正")
        OptimizeMode(self.mode)
        if self.d_SR is not None and not 0.0 <= self.d_SR <= self.d_SD:
            raise ValueError(f"d_SR 必须在[0, d_SD]内: {self.d_SR}")
        if self.P_S is not None and not 0.0 < self.P_S < self.P_tot:
            raise ValueError(f"P_S 必须在(0, P_tot)内: {self.P_S}")


class OptimumReport(NamedTuple):
    P_S: float
    P_R: float
    d_SR: float
    d_RD: float
    outage: float
    iterations: int
    converged: bool
    convex_verified: Optional[bool]
    derivative_consistent: bool
    interior: bool
    bracketed: bool


def outage_at_allocation(cfg: OptimizeConfig, P_S: float, P_R: float, d_SR: float,
                         equal_gain: bool = False) -> float:
    """
    给定功率与中继位置的全双工中断概率（期望增益模式）

    d_SR 被限制在 [δ, d_SD-δ]，δ = 1e-6·d_SD；equal_gain 为 True 时直接取 Y = X，
    避免由 P_tot - P_S 重建 P_R 时的舍入使 X、Y 偏离相等。
    """
    余量 = ENDPOINT_MARGIN * cfg.d_SD
    d = min(max(d_SR, 余量), cfg.d_SD - 余量)
    g_SR = d ** (-cfg.v)
    g_RD = (cfg.d_SD - d) ** (-cfg.v)
    g_SD = cfg.d_SD ** (-cfg.v)
    P_S = max(P_S, 0.0)
    P_R = max(P_R, 0.0)
    p1 = p_select(sigma_ce_sq(P_S, P_R, g_SR, cfg.sigma_RR_sq, True, cfg.sigma0_sq,
                              cfg.sigma_x_sq), cfg.epsilon)
    p0 = p_select(sigma_ce_sq(P_S, P_R, g_SR, cfg.sigma_RR_sq, False, cfg.sigma0_sq,
                              cfg.sigma_x_sq), cfg.epsilon)
    P_C = p_forward_avg(MarkovSelectModel(p1=float(p1), p0=float(p0), L=cfg.L))
    X = max(P_S * g_SD / cfg.sigma0_sq, 1e-300)
    Y = X if equal_gain else P_R * g_RD / cfg.sigma0_sq
    return outage_fd(OutageParams(X=X, Y=Y, R=cfg.R, P_C=P_C))


def equal_gain_source_power(cfg: OptimizeConfig, d_SR: float) -> float:
    """
    X = Y 约束下的源功率 P_S = P_tot·d_SD^v / ((d_SD - d_SR)^v + d_SD^v)；
    v = 2 时即 P_tot·d_SD² / ((d_SD-d_SR)² + d_SD²)
    """
    return cfg.P_tot * cfg.d_SD ** cfg.v / ((cfg.d_SD - d_SR) ** cfg.v + cfg.d_SD ** cfg.v)


def numerical_derivative(f: Callable[[float], float], x: float, h: float) -> float:
    """中心差分"""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def bisect_root(df: Callable[[float], float], lo: float, hi: float, tol: float,
                max_iter: int) -> Tuple[float, int, bool]:
    """
    二分法求 df 的零点，要求 df(lo)、df(hi) 异号

    返回:
        (根, 迭代次数, 是否收敛)
    """
    if np.sign(df(lo)) * np.sign(df(hi)) > 0:
        raise ValueError(f"区间 [{lo}, {hi}] 两端导数同号，无法二分")
    根, 状态 = bisect(df, lo, hi, xtol=tol, maxiter=max_iter, full_output=True, disp=False)
    return float(根), int(状态.iterations), bool(状态.converged)


@dataclass
class _Minimizer:
    """一维区间最小化：扫描导数变号区间、二分求根，并与端点及扫描最优点比较"""
    f: Callable[[float], float]
    lo: float
    hi: float
    cfg: OptimizeConfig
    extra_candidates: List[float] = field(default_factory=list)

    def run(self) -> Tuple[float, float, int, bool, Optional[bool], bool, bool, bool]:
        宽度 = self.hi - self.lo
        h = 1e-5 * 宽度
        a, b = self.lo + h, self.hi - h
        df = lambda x: numerical_derivative(self.f, x, h)
        网格 = np.linspace(a, b, self.cfg.scan_points)
        导数 = np.array([df(x) for x in 网格])
        候选 = [a, b] + [x for x in self.extra_candidates if a <= x <= b]
        候选.append(float(网格[int(np.argmin([self.f(x) for x in 网格]))]))
        迭代总数 = 0
        全部收敛 = True
        驻点 = []
        for i in range(len(网格) - 1):
            if 导数[i] < 0 <= 导数[i + 1]:
                根, 次数, 收敛 = bisect_root(df, 网格[i], 网格[i + 1],
                                            self.cfg.tolerance * 宽度, self.cfg.max_iter)
                迭代总数 = max(迭代总数, 次数)
                全部收敛 &= 收敛
                驻点.append(根)
                logger.debug("区间 [%.6g, %.6g] 内驻点 %.6g，二分 %d 次", 网格[i], 网格[i + 1], 根, 次数)
        if not 驻点:
            logger.info("导数在 [%.6g, %.6g] 内无负到正的变号，结果取端点或扫描最优点", a, b)
        候选.extend(驻点)
        数值 = [self.f(x) for x in 候选]
        最优 = int(np.argmin(数值))
        x_opt = float(候选[最优])
        内点 = x_opt in 驻点
        一致 = self._richardson_consistent(x_opt, h)
        凸 = self._convex_on(网格) if 驻点 else None
        return x_opt, float(数值[最优]), 迭代总数, 全部收敛, 凸, 一致, 内点, bool(驻点)

    def _richardson_consistent(self, x: float, h: float) -> bool:
        """步长 h 与 h/2 的中心差分应一致（误差随步长二阶下降）"""
        d1 = numerical_derivative(self.f, x, h)
        d2 = numerical_derivative(self.f, x, h / 2.0)
        尺度 = max(abs(d1), abs(d2), 1e-12)
        一致 = abs(d1 - d2) <= 1e-3 * 尺度 + 1e-9
        if not 一致:
            logger.warning("数值导数在 %.6g 处不一致: %.6g vs %.6g", x, d1, d2)
        return 一致

    def _convex_on(self, 网格: np.ndarray) -> bool:
        """在扫描网格上检查二阶差分非负"""
        值 = np.array([self.f(x) for x in 网格])
        二阶差分 = 值[:-2] - 2.0 * 值[1:-1] + 值[2:]
        凸 = bool(np.all(二阶差分 >= -1e-12))
        if not 凸:
            logger.info("目标函数在搜索区间上非凸，已比较全部驻点与端点")
        return 凸


def _report(cfg: OptimizeConfig, P_S: float, P_R: float, d_SR: float, outage: float,
            result) -> OptimumReport:
    _, _, 迭代, 收敛, 凸, 一致, 内点, 有变号 = result
    return OptimumReport(P_S=P_S, P_R=P_R, d_SR=d_SR, d_RD=cfg.d_SD - d_SR, outage=outage,
                         iterations=迭代, converged=收敛, convex_verified=凸,
                         derivative_consistent=一致, interior=内点, bracketed=有变号)


def optimize_equal_gain_location(cfg: OptimizeConfig) -> OptimumReport:
    """
    X = Y 约束下优化中继位置，功率随位置由 equal_gain_source_power 决定

    目标函数在 X = Y 分支上求值；导数无变号时 bracketed 为 False，结果为端点或扫描最优点
    """
    def 目标(d):
        P_S = equal_gain_source_power(cfg, d)
        return outage_at_allocation(cfg, P_S, cfg.P_tot - P_S, d, equal_gain=True)
    余量 = ENDPOINT_MARGIN * cfg.d_SD
    结果 = _Minimizer(目标, 余量, cfg.d_SD - 余量, cfg, [cfg.d_SD / 2.0]).run()
    d_opt = 结果[0]
    P_S = equal_gain_source_power(cfg, d_opt)
    return _report(cfg, P_S, cfg.P_tot - P_S, d_opt, 结果[1], 结果)


def optimize_power_given_location(cfg: OptimizeConfig, d_SR: Optional[float] = None) -> OptimumReport:
    """固定中继位置，在 P_S + P_R = P_tot 上优化 P_S"""
    d = cfg.d_SD / 2.0 if d_SR is None else d_SR
    if not 0.0 <= d <= cfg.d_SD:
        raise ValueError(f"d_SR 必须在[0, d_SD]内: {d}")
    目标 = lambda P_S: outage_at_allocation(cfg, P_S, cfg.P_tot - P_S, d)
    余量 = ENDPOINT_MARGIN * cfg.P_tot
    结果 = _Minimizer(目标, 余量, cfg.P_tot - 余量, cfg, [cfg.P_tot / 2.0]).run()
    return _report(cfg, 结果[0], cfg.P_tot - 结果[0], d, 结果[1], 结果)


def optimize_location_given_power(cfg: OptimizeConfig, P_S: Optional[float] = None) -> OptimumReport:
    """固定功率分配，优化中继位置"""
    P_S = cfg.P_tot / 2.0 if P_S is None else P_S
    if not 0.0 < P_S < cfg.P_tot:
        raise ValueError(f"P_S 必须在(0, P_tot)内: {P_S}")
    P_R = cfg.P_tot - P_S
    目标 = lambda d: outage_at_allocation(cfg, P_S, P_R, d)
    余量 = ENDPOINT_MARGIN * cfg.d_SD
    结果 = _Minimizer(目标, 余量, cfg.d_SD - 余量, cfg, [cfg.d_SD / 2.0]).run()
    return _report(cfg, P_S, P_R, 结果[0], 结果[1], 结果)


def separate_constraint_power(cfg: OptimizeConfig, P_S_max: Optional[float] = None,
                              P_R_max: Optional[float] = None,
                              d_SR: Optional[float] = None) -> OptimumReport:
    """
    分别约束 P_S ≤ P_S_max、P_R ≤ P_R_max：P_S 取上限，
    P_R = min(∂P_out/∂P_R 的零点, P_R_max)
    """
    P_S = cfg.P_tot / 2.0 if P_S_max is None else P_S_max
    上限 = cfg.P_tot / 2.0 if P_R_max is None else P_R_max
    if P_S <= 0 or 上限 <= 0:
        raise ValueError(f"功率上限必须为正: P_S_max={P_S}, P_R_max={上限}")
    d = cfg.d_SD / 2.0 if d_SR is None else d_SR
    目标 = lambda P_R: outage_at_allocation(cfg, P_S, P_R, d)
    结果 = list(_Minimizer(目标, ENDPOINT_MARGIN * 上限, 上限, cfg).run())
    # 无内部驻点或驻点不优于上限时取 P_R_max
    if 目标(上限) <= 结果[1]:
        结果[0], 结果[1], 结果[6] = 上限, 目标(上限), False
    P_R = min(结果[0], 上限)
    return _report(cfg, P_S, P_R, d, 结果[1], 结果)


def optimize(cfg: OptimizeConfig) -> OptimumReport:
    """按 cfg.mode 分派"""
    mode = OptimizeMode(cfg.mode)
    if mode is OptimizeMode.EQUAL_GAIN_LOCATION:
        return optimize_equal_gain_location(cfg)
    if mode is OptimizeMode.POWER_GIVEN_LOCATION:
        return optimize_power_given_location(cfg, cfg.d_SR)
    if mode is OptimizeMode.LOCATION_GIVEN_POWER:
        return optimize_location_given_power(cfg, cfg.P_S)
    return separate_constraint_power(cfg, cfg.P_S_max, cfg.P_R_max, cfg.d_SR)


class ContourPoint(NamedTuple):
    p_s_frac: float
    d_sr_frac: float
    outage: float


def contour_grid(cfg: OptimizeConfig, resolution: Optional[int] = None) -> List[ContourPoint]:
    """
    (P_S/P_tot, d_SR/d_SD) ∈ [0,1]² 网格上的中断概率

    P_S/P_tot = 1 时中继不发射，中断概率退化为直达链路；
    P_S 下限取 1e-6·P_tot。
    """
    n = cfg.contour_resolution if resolution is None else resolution
    if n < 2:
        raise ValueError(f"网格分辨率至少为2: {n}")
    点 = []
    for p in np.linspace(0.0, 1.0, n):
        P_S = max(p, ENDPOINT_MARGIN) * cfg.P_tot
        for r in np.linspace(0.0, 1.0, n):
            值 = outage_at_allocation(cfg, P_S, cfg.P_tot - P_S, r * cfg.d_SD)
            点.append(ContourPoint(float(p), float(r), 值))
    return 点
