#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
配置文件管理工具
读取 JSON 配置，合并到仿真与优化参数的默认值上，并拒绝未知配置项
"""

import copy
import json
import os
from dataclasses import asdict
from typing import Any, Dict, Optional

from utils.harness import SimConfig
from utils.optimize import OptimizeConfig


class 配置错误(ValueError):
    """配置文件内容不合法"""


class 配置管理器:
    """配置管理器类，负责加载、校验、显示和保存仿真配置"""

    # 配置节与对应的参数类
    配置节 = {
        "simulation": SimConfig,
        "optimize": OptimizeConfig,
    }

    def __init__(self, 配置文件路径: Optional[str] = None):
        """
        初始化配置管理器

        参数:
            配置文件路径: JSON 配置文件路径，为 None 时只使用默认配置
        """
        self.配置文件路径 = 配置文件路径
        self.默认配置 = {名称: asdict(类()) for 名称, 类 in self.配置节.items()}
        self.配置 = self.加载配置()

    def 加载配置(self) -> Dict[str, Any]:
        """
        从文件加载配置并与默认配置合并

        返回:
            配置字典
        """
        合并配置 = copy.deepcopy(self.默认配置)
        if self.配置文件路径 is None:
            return 合并配置
        if not os.path.exists(self.配置文件路径):
            raise 配置错误(f"配置文件不存在: {self.配置文件路径}")
        try:
            with open(self.配置文件路径, 'r', encoding='utf-8') as f:
                配置 = json.load(f)
        except json.JSONDecodeError as e:
            raise 配置错误(f"配置文件不是合法的JSON {self.配置文件路径}: {e}") from e
        except OSError as e:
            raise 配置错误(f"无法读取配置文件 {self.配置文件路径}: {e}") from e
        self._校验配置(配置)
        self._递归更新字典(合并配置, 配置)
        return 合并配置

    def _校验配置(self, 配置: Any) -> None:
        """检查配置节与配置项名称，未知项抛出配置错误"""
        if not isinstance(配置, dict):
            raise 配置错误(f"配置文件顶层必须是对象: {self.配置文件路径}")
        for 节, 内容 in 配置.items():
            if 节 not in self.配置节:
                raise 配置错误(f"未知配置节 '{节}'（{self.配置文件路径}），可选: {', '.join(self.配置节)}")
            if not isinstance(内容, dict):
                raise 配置错误(f"配置节 '{节}' 必须是对象")
            已知项 = set(self.默认配置[节])
            for 键 in 内容:
                if 键 not in 已知项:
                    raise 配置错误(f"未知配置项 '{节}.{键}'（{self.配置文件路径}）")

    def 保存配置(self, 路径: Optional[str] = None) -> str:
        """
        保存当前配置到文件

        参数:
            路径: 目标路径，为 None 时写回配置文件路径

        返回:
            实际写入的路径
        """
        目标 = 路径 or self.配置文件路径
        if 目标 is None:
            raise 配置错误("未指定配置文件保存路径")
        try:
            with open(目标, 'w', encoding='utf-8') as f:
                json.dump(self.配置, f, ensure_ascii=False, indent=2)
        except OSError as e:
            raise OSError(f"保存配置文件失败 {目标}: {e}") from e
        return 目标

    def 获取配置(self, 键: str, 默认值: Any = None) -> Any:
        """
        获取配置项的值

        参数:
            键: 点号分隔的路径，如 "simulation.L"
            默认值: 键不存在时返回的值
        """
        当前值 = self.配置
        try:
            for 部分 in 键.split('.'):
                当前值 = 当前值[部分]
            return 当前值
        except (KeyError, TypeError):
            return 默认值

    def 设置配置(self, 键: str, 值: Any) -> None:
        """
        设置配置项的值（不写盘），键必须是已知的 "节.项"
        """
        部分 = 键.split('.')
        if len(部分) != 2 or 部分[0] not in self.配置节 or 部分[1] not in self.默认配置[部分[0]]:
            raise 配置错误(f"未知配置项 '{键}'")
        self.配置[部分[0]][部分[1]] = 值

    def 重置配置(self) -> None:
        """重置配置为默认值"""
        self.配置 = copy.deepcopy(self.默认配置)

    def 显示配置(self) -> str:
        """格式化显示当前配置"""
        return json.dumps(self.配置, ensure_ascii=False, indent=2)

    def 构建仿真配置(self, **覆盖) -> SimConfig:
        """
        构建 SimConfig，覆盖项中值为 None 的被忽略

        参数:
            覆盖: 命令行等来源的覆盖值
        """
        return self._构建("simulation", 覆盖)

    def 构建优化配置(self, **覆盖) -> OptimizeConfig:
        """构建 OptimizeConfig"""
        return self._构建("optimize", 覆盖)

    def _构建(self, 节: str, 覆盖: Dict[str, Any]):
        参数 = dict(self.配置[节])
        for 键, 值 in 覆盖.items():
            if 值 is None:
                continue
            if 键 not in 参数:
                raise 配置错误(f"未知配置项 '{节}.{键}'")
            参数[键] = 值
        try:
            return self.配置节[节](**参数)
        except (TypeError, ValueError) as e:
            raise 配置错误(f"配置节 '{节}' 参数无效: {e}") from e

    def _递归更新字典(self, 目标: Dict, 源: Dict) -> None:
        """
        递归更新字典，保留目标字典中的键

        参数:
            目标: 要更新的目标字典
            源: 源字典
        """
        for 键, 值 in 源.items():
            if 键 in 目标 and isinstance(目标[键], dict) and isinstance(值, dict):
                self._递归更新字典(目标[键], 值)
            else:
                目标[键] = 值
