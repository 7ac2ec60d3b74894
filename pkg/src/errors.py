#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常类型
所有模块抛出的错误都继承自 ToricError，命令行据此映射退出码
"""

from typing import List, Optional, Sequence, Tuple


class ToricError(Exception):
    """工具包错误的基类"""

    def __init__(self, message: str, diagnostics: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.message = message
        self.diagnostics: List[str] = list(diagnostics or [])

    def __str__(self) -> str:
        if not self.diagnostics:
            return self.message
        return self.message + "\n" + "\n".join(f"  - {d}" for d in self.diagnostics)


class ValidationError(ToricError, ValueError):
    """数学前提或不变量不成立（退出码 2）"""


class SingularMatrixError(ValidationError):
    """线性方程组的系数矩阵奇异"""


class ParseError(ToricError):
    """输入文档无法解析（退出码 1）"""


class HilbertBasisIncomplete(ToricError):
    """Hilbert 基补全超过 norm_cap，部分结果不可用"""

    def __init__(self, message: str, partial: Optional[list] = None, norm_cap: int = 0):
        super().__init__(message)
        self.partial = list(partial or [])
        self.norm_cap = norm_cap
        self.usable = False


class PackingError(ValidationError):
    """填充证书失败：包含关系或两两内部不相交不成立"""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None,
                 diagnostics: Optional[Sequence[str]] = None):
        super().__init__(message, diagnostics)
        self.pair = pair
