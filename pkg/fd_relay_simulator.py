#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
全双工选择性译码转发中继仿真工具
符号级选择转发的中断概率、误比特率、选择准确度仿真与功率/位置优化

版本: 1.0.0
许可证: MIT
"""

import logging
import sys
from typing import Callable, List, Optional

import click

from utils import harness
from utils.config_manager import 配置管理器
from utils.harness import ResultRow, SelfCheckError, SimConfig
from utils.optimize import OptimizeMode, contour_grid, optimize
from utils.relay import Protocol

# 终端颜色
绿色 = "\033[1;32m"
黄色 = "\033[1;33m"
红色 = "\033[1;31m"
结束 = "\033[0m"

几何选项 = click.Choice(["L1", "L2"])


def _错误退出(e: Exception, 退出码: int = 1) -> None:
    click.echo(f"{红色}错误: {str(e)}{结束}", err=True)
    sys.exit(退出码)


def _仿真配置(ctx: click.Context, **覆盖) -> SimConfig:
    管理器: 配置管理器 = ctx.obj["配置"]
    return 管理器.构建仿真配置(seed=ctx.obj["种子"], **覆盖)


def _运行实验(名称: str, 实验: Callable, 配置: SimConfig, 输出: str, 总步数: int) -> List[ResultRow]:
    """运行实验、显示进度条并写出结果与元数据"""
    harness.ensure_output_dir(输出)
    with click.progressbar(length=总步数, label=f"{名称}") as 进度条:
        行 = 实验(配置, progress=进度条.update)
    harness.emit_results(行, 输出)
    元数据 = harness.emit_metadata(输出, 名称, 配置)
    click.echo(f"\n{绿色}{'=' * 60}{结束}")
    click.echo(f"实验: {名称}")
    click.echo(f"结果行数: {len(行)}")
    click.echo(f"结果文件: {输出}")
    click.echo(f"元数据: {元数据}")
    click.echo(f"{绿色}{'=' * 60}{结束}")
    return 行


@click.group()
@click.option('--config', '-c', 'config_path', default=None, type=click.Path(dir_okay=False),
              help='JSON 配置文件路径')
@click.option('--seed', default=None, type=int, help='64位随机种子，覆盖配置文件')
@click.option('--verbose', '-v', is_flag=True, help='输出调试日志')
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], seed: Optional[int], verbose: bool):
    """全双工选择性译码转发中继仿真工具"""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    ctx.ensure_object(dict)
    try:
        ctx.obj["配置"] = 配置管理器(config_path)
    except Exception as e:
        _错误退出(e)
    ctx.obj["种子"] = seed


@cli.command()
@click.option('--out', '-o', default='outage.csv', help='结果 CSV 路径')
@click.option('--mode', '-m', default=None, type=click.Choice(['analytic', 'mc', 'both']),
              help='解析 / 蒙特卡洛 / 两者')
@click.option('--trials', '-t', default=None, type=int, help='每个 SNR 点的蒙特卡洛试验次数')
@click.option('--geometry', '-g', default=None, type=几何选项, help='中继位置预设')
@click.option('--rate', '-r', default=None, type=float, help='目标速率 R (nats/s/Hz)')
@click.option('--sigma-rr', default=None, type=float, help='残余自干扰方差 σ²_RR')
@click.option('--pc-mode', default=None, type=click.Choice(['expected_gain', 'per_realization']),
              help='平均转发概率的计算方式')
@click.option('--self-check', is_flag=True, default=None, help='蒙特卡洛与解析偏差超过3σ时失败')
@click.pass_context
def outage(ctx, out, mode, trials, geometry, rate, sigma_rr, pc_mode, self_check):
    """中断概率与吞吐量随总平均链路 SNR 的变化（全双工 vs 半双工）"""
    try:
        配置 = _仿真配置(ctx, mode=mode, n_trials=trials, geometry=geometry, rate=rate,
                      sigma_RR_sq=sigma_rr, pc_mode=pc_mode, self_check=self_check)
        _运行实验("outage", harness.run_outage_experiment, 配置, out, len(配置.snr_db))
    except SelfCheckError as e:
        _错误退出(e, 2)
    except Exception as e:
        _错误退出(e)


@cli.command(name='si-sweep')
@click.option('--out', '-o', default='si_sweep.csv', help='结果 CSV 路径')
@click.option('--mode', '-m', default=None, type=click.Choice(['analytic', 'mc', 'both']),
              help='解析 / 蒙特卡洛 / 两者')
@click.option('--trials', '-t', default=None, type=int, help='每个点的蒙特卡洛试验次数')
@click.option('--geometry', '-g', default=None, type=几何选项, help='中继位置预设')
@click.option('--snr', default=None, type=float, help='固定的总平均链路 SNR (dB)')
@click.option('--self-check', is_flag=True, default=None, help='蒙特卡洛与解析偏差超过3σ时失败')
@click.pass_context
def si_sweep(ctx, out, mode, trials, geometry, snr, self_check):
    """中断概率随归一化自干扰方差的变化"""
    try:
        配置 = _仿真配置(ctx, mode=mode, n_trials=trials, geometry=geometry, si_snr_db=snr,
                      self_check=self_check)
        _运行实验("si-sweep", harness.run_si_sweep, 配置, out, len(配置.si_points))
    except SelfCheckError as e:
        _错误退出(e, 2)
    except Exception as e:
        _错误退出(e)


@cli.command()
@click.option('--out', '-o', default='baseline.csv', help='结果 CSV 路径')
@click.option('--geometry', '-g', default=None, type=几何选项, help='中继位置预设')
@click.option('--rate', '-r', default=None, type=float, help='目标速率 R (nats/s/Hz)')
@click.option('--sigma-rr', default=None, type=float, help='残余自干扰方差 σ²_RR')
@click.pass_context
def baseline(ctx, out, geometry, rate, sigma_rr):
    """各转发协议的解析中断概率对比"""
    try:
        配置 = _仿真配置(ctx, geometry=geometry, rate=rate, sigma_RR_sq=sigma_rr)
        _运行实验("baseline", harness.run_baseline_experiment, 配置, out, len(配置.snr_db))
    except Exception as e:
        _错误退出(e)


@cli.command(name='power-compare')
@click.option('--out', '-o', default='power_compare.csv', help='结果 CSV 路径')
@click.option('--geometry', '-g', default=None, type=几何选项, help='中继位置预设')
@click.option('--rate', '-r', default=None, type=float, help='目标速率 R (nats/s/Hz)')
@click.option('--sigma-rr', default=None, type=float, help='残余自干扰方差 σ²_RR')
@click.pass_context
def power_compare(ctx, out, geometry, rate, sigma_rr):
    """最优功率分配与等功率分配的中断概率对比"""
    try:
        配置 = _仿真配置(ctx, geometry=geometry, rate=rate, sigma_RR_sq=sigma_rr)
        _运行实验("power-compare", harness.run_power_comparison, 配置, out, len(配置.snr_db))
    except Exception as e:
        _错误退出(e)


@cli.command()
@click.option('--out', '-o', default='ber.csv', help='结果 CSV 路径')
@click.option('--trials', '-t', default=None, type=int, help='每个 SNR 点每个协议的帧组数')
@click.option('--workers', '-w', default=None, type=int, help='并行进程数')
@click.option('--protocol', '-p', 'protocols', multiple=True,
              type=click.Choice([p.value for p in Protocol]), help='参与仿真的协议，可重复')
@click.option('--geometry', '-g', default=None, type=几何选项, help='中继位置预设')
@click.option('--sigma-rr', default=None, type=float, help='残余自干扰方差 σ²_RR')
@click.option('--power-allocation', default=None, type=click.Choice(['equal', 'optimal']),
              help='等功率或按解析最优功率分配')
@click.option('--relay-error-prob', default=None, type=float,
              help='目的节点合并时假定的中继转发符号错误概率')
@click.pass_context
def ber(ctx, out, trials, workers, protocols, geometry, sigma_rr, power_allocation, relay_error_prob):
    """端到端误比特率仿真"""
    try:
        配置 = _仿真配置(ctx, ber_trials=trials, workers=workers, protocols=list(protocols) or None,
                      geometry=geometry, sigma_RR_sq=sigma_rr, power_allocation=power_allocation,
                      relay_error_prob=relay_error_prob)
        总数 = len(配置.snr_db) * len(配置.protocols) * 配置.ber_trials
        _运行实验("ber", harness.run_ber_experiment, 配置, out, 总数)
    except Exception as e:
        _错误退出(e)


@cli.command()
@click.option('--out', '-o', default='accuracy.csv', help='结果 CSV 路径')
@click.option('--trials', '-t', default=None, type=int, help='每个点的帧数')
@click.option('--workers', '-w', default=None, type=int, help='并行进程数')
@click.pass_context
def accuracy(ctx, out, trials, workers):
    """中继选择准确度随 S-R SNR 与星座阶数的变化"""
    try:
        配置 = _仿真配置(ctx, accuracy_trials=trials, workers=workers)
        总数 = len(配置.accuracy_orders) * len(配置.accuracy_snr_db) * 配置.accuracy_trials
        _运行实验("accuracy", harness.run_selection_accuracy, 配置, out, 总数)
    except Exception as e:
        _错误退出(e)


@cli.command(name='optimize')
@click.option('--out', '-o', default='optimum.csv', help='结果 CSV 路径')
@click.option('--opt-mode', default=None, type=click.Choice([m.value for m in OptimizeMode]),
              help='优化方式')
@click.option('--d-sr', default=None, type=float, help='固定的中继位置 d_SR')
@click.option('--p-s', default=None, type=float, help='固定的源功率 P_S')
@click.option('--p-s-max', default=None, type=float, help='源功率上限')
@click.option('--p-r-max', default=None, type=float, help='中继功率上限')
@click.pass_context
def optimize_cmd(ctx, out, opt_mode, d_sr, p_s, p_s_max, p_r_max):
    """功率分配 / 中继位置优化"""
    try:
        管理器: 配置管理器 = ctx.obj["配置"]
        配置 = 管理器.构建优化配置(mode=opt_mode, d_SR=d_sr, P_S=p_s, P_S_max=p_s_max, P_R_max=p_r_max)
        报告 = optimize(配置)
        行 = [ResultRow(0.0, f"optimum.{名称}", float(getattr(报告, 名称)))
             for 名称 in ("P_S", "P_R", "d_SR", "d_RD", "outage", "iterations")]
        harness.ensure_output_dir(out)
        harness.emit_results(行, out)
        harness.emit_metadata(out, "optimize", 配置, {"report": 报告._asdict()})
        click.echo(f"\n{绿色}{'=' * 60}{结束}")
        click.echo(f"{黄色}优化方式: {配置.mode}{结束}")
        click.echo(f"P_S = {报告.P_S:.6g}, P_R = {报告.P_R:.6g}")
        click.echo(f"d_SR = {报告.d_SR:.6g}, d_RD = {报告.d_RD:.6g}")
        click.echo(f"中断概率 = {报告.outage:.6e}")
        click.echo(f"二分迭代次数 = {报告.iterations}，内部驻点 = {'是' if 报告.interior else '否'}")
        if not 报告.bracketed:
            click.echo(f"{黄色}提示: 导数在搜索区间内无变号，结果为端点或扫描网格上的最优点{结束}")
        if 报告.convex_verified is False:
            click.echo(f"{黄色}警告: 目标函数在搜索区间上非凸，结果为比较全部驻点与端点后的最优值{结束}")
        click.echo(f"{绿色}{'=' * 60}{结束}")
    except Exception as e:
        _错误退出(e)


@cli.command()
@click.option('--out', '-o', default='contour.csv', help='等高线 CSV 路径')
@click.option('--resolution', default=None, type=int, help='每个维度的网格点数')
@click.pass_context
def contour(ctx, out, resolution):
    """(P_S/P_tot, d_SR/d_SD) 网格上的中断概率"""
    try:
        管理器: 配置管理器 = ctx.obj["配置"]
        配置 = 管理器.构建优化配置(contour_resolution=resolution)
        点 = contour_grid(配置)
        harness.ensure_output_dir(out)
        harness.emit_contour(点, out)
        harness.emit_metadata(out, "contour", 配置)
        最优 = min(点, key=lambda p: p.outage)
        click.echo(f"网格点数: {len(点)}，结果文件: {out}")
        click.echo(f"网格最优: P_S/P_tot = {最优.p_s_frac:.3f}, d_SR/d_SD = {最优.d_sr_frac:.3f}, "
                   f"中断概率 = {最优.outage:.4e}")
    except Exception as e:
        _错误退出(e)


@cli.command(name='init-config')
@click.argument('path', type=click.Path(dir_okay=False))
@click.pass_context
def init_config(ctx, path):
    """写出包含全部默认值的配置文件模板"""
    try:
        管理器: 配置管理器 = ctx.obj["配置"]
        管理器.保存配置(path)
        click.echo(f"配置模板已写入: {path}")
    except Exception as e:
        _错误退出(e)


if __name__ == "__main__":
    cli()
