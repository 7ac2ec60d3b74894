#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精确整数/有理数线性代数
提供本原化、幺模判定、整数核基、有理线性方程组求解以及幺模仿射映射
所有计算都是精确的：整数矩阵用 numpy 的 object 数组，行列式与求解交给 sympy
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import sympy

try:
    from .errors import SingularMatrixError, ValidationError
except ImportError:
    from errors import SingularMatrixError, ValidationError

logger = logging.getLogger(__name__)

Rational = Fraction
LatticeVector = Tuple[int, ...]
RationalVector = Tuple[Fraction, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]
RationalLike = Union[int, str, Fraction]


def as_rational(value: RationalLike) -> Fraction:
    """
    把整数、"p/q" 字符串或 Fraction 转成最简分数

    Args:
        value: 整数、Fraction 或形如 "p/q" 的字符串

    Returns:
        分母为正的最简 Fraction

    Raises:
        ValueError: 无法解析或分母为零
    """
    if isinstance(value, bool):
        raise ValueError(f"不是有理数: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            if not den.strip():
                raise ValueError(f"不是有理数: {value!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise ValueError(f"不是有理数: {value!r}")


def rational_vector(values: Iterable[RationalLike]) -> RationalVector:
    """逐个转换为 Fraction 元组"""
    return tuple(as_rational(v) for v in values)


def format_rational(q: Fraction) -> str:
    """Fraction 的 "p/q" 字符串形式，整数不带分母"""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_vector(v: Sequence) -> str:
    """日志与诊断信息中的向量写法 (a, b, …)"""
    return "(" + ", ".join(format_rational(c) for c in v) + ")"


def dot(u: Sequence, x: Sequence) -> Fraction:
    """配对 ⟨x, u⟩"""
    if len(u) != len(x):
        raise ValidationError(f"维数不一致: {len(u)} 与 {len(x)}")
    return sum((Fraction(a) * b for a, b in zip(u, x)), Fraction(0))


def primitivize(v: Sequence[int]) -> Tuple[LatticeVector, int]:
    """
    提取格向量的本原部分

    Args:
        v: 非零整数向量

    Returns:
        (w, g)，满足 v = g·w 且 w 各分量的最大公约数为 1

    Raises:
        ValidationError: 零向量
    """
    coords = tuple(int(c) for c in v)
    g = reduce(gcd, coords, 0)
    if g == 0:
        raise ValidationError("零向量没有本原部分")
    return tuple(c // g for c in coords), g


def is_primitive(v: Sequence[int]) -> bool:
    """各分量最大公约数是否为 1"""
    return reduce(gcd, (int(c) for c in v), 0) == 1


def to_fraction(value) -> Fraction:
    """sympy 有理数 → Fraction"""
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """
    无除法（Bareiss）精确行列式

    Args:
        rows: n 个长度为 n 的向量

    Returns:
        行列式（整数输入时分母为 1）
    """
    if not rows:
        return Fraction(1)
    matrix = sympy.Matrix([[sympy.Rational(Fraction(c)) for c in row] for row in rows])
    if matrix.rows != matrix.cols:
        raise ValidationError(f"行列式需要方阵，得到 {matrix.rows}x{matrix.cols}")
    return to_fraction(matrix.det(method="bareiss"))


def is_lattice_basis(vs: Sequence[Sequence[int]]) -> bool:
    """
    n 个 n 维格向量是否构成 Z^n 的一组基

    Args:
        vs: 向量列表

    Returns:
        行列式为 ±1 时为 True

    Raises:
        ValidationError: 向量个数与维数不符
    """
    n = len(vs)
    if n == 0 or any(len(v) != n for v in vs):
        raise ValidationError(f"需要 {n} 个 {n} 维向量")
    return abs(determinant(vs)) == 1


def is_unimodular(matrix: Sequence[Sequence[int]], strict_sl: bool = False) -> bool:
    """|det| = 1；strict_sl 时要求 det = +1"""
    det = determinant(matrix)
    return det == 1 if strict_sl else abs(det) == 1


def exgcd(a: int, b: int) -> np.ndarray:
    """
    扩展欧几里得

    Returns:
        行列式为 1 的 2x2 整数矩阵 M，使 M @ [a, b] = [gcd(a, b), 0]
    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign

    # 对列向量 [a, b] 做可逆行变换，并用单位阵记录
    M = np.array([[b, 0, 1],
                  [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:]
    M *= [a_sign, b_sign]
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def integer_matrix(rows: Sequence[Sequence[int]]) -> np.ndarray:
    """整数矩阵 → numpy object 数组（任意精度）"""
    return np.array([[int(c) for c in row] for row in rows], dtype=object).reshape(len(rows), -1)


def integer_kernel_basis(U: Sequence[Sequence[int]]) -> List[LatticeVector]:
    """
    整数矩阵核 ker(U) ∩ Z^d 的格基

    通过列 Hermite 约化：用行列式为 1 的 2x2 列变换把 U 化为列阶梯形 H = U·T，
    T 的最后 d − rank(U) 列即为核的格基。

    Args:
        U: n×d 整数矩阵（按行给出）

    Returns:
        d 维整数向量列表，个数为 d − rank(U)；核平凡时为空
    """
    H = integer_matrix(U)
    n, d = H.shape
    T = np.eye(d, dtype=object)
    pivot = 0
    for r in range(n):
        if pivot >= d:
            break
        for j in range(pivot + 1, d):
            if H[r, j] == 0:
                continue
            M = exgcd(H[r, pivot], H[r, j]).T
            H[:, [pivot, j]] = H[:, [pivot, j]] @ M
            T[:, [pivot, j]] = T[:, [pivot, j]] @ M
        if H[r, pivot] != 0:
            pivot += 1

    basis = [tuple(int(c) for c in T[:, j]) for j in range(pivot, d)]
    logger.debug("整数核: %dx%d 矩阵, 秩 %d, 基向量 %d 个", n, d, pivot, len(basis))
    return basis


def matrix_rank(rows: Sequence[Sequence]) -> int:
    """精确秩"""
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(Fraction(c)) for c in row] for row in rows]).rank()


def solve_rational(A: Sequence[Sequence], b: Sequence) -> RationalVector:
    """
    精确求解 Ax = b

    Args:
        A: n×n 有理矩阵
        b: 长度 n 的有理向量

    Returns:
        解向量 x

    Raises:
        SingularMatrixError: A 奇异
    """
    n = len(A)
    if n == 0 or any(len(row) != n for row in A) or len(b) != n:
        raise ValidationError("solve_rational 需要 n×n 矩阵与长度 n 的右端")
    matrix = sympy.Matrix([[sympy.Rational(Fraction(c)) for c in row] for row in A])
    if matrix.det(method="bareiss") == 0:
        raise SingularMatrixError("系数矩阵奇异")
    rhs = sympy.Matrix([sympy.Rational(Fraction(c)) for c in b])
    x = matrix.LUsolve(rhs)
    return tuple(to_fraction(c) for c in x)


def integer_inverse(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    """幺模矩阵的整数逆"""
    inv = sympy.Matrix([[int(c) for c in row] for row in matrix]).inv()
    return tuple(tuple(int(c) for c in inv.row(i)) for i in range(inv.rows))


def mat_vec(matrix: Sequence[Sequence], y: Sequence) -> RationalVector:
    return tuple(dot(row, y) for row in matrix)


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    product = integer_matrix(A) @ integer_matrix(B)
    return tuple(tuple(int(c) for c in row) for row in product)


def transpose(matrix: Sequence[Sequence]) -> tuple:
    return tuple(tuple(row) for row in zip(*matrix))


@dataclass(frozen=True)
class UnimodularMap:
    """
    幺模仿射映射 y ↦ M·y + x

    matrix 按行存储，第 k 列是 e_k 的像；translation 是有理平移。
    构造时校验 |det(M)| = 1。
    """

    matrix: IntMatrix
    translation: RationalVector

    def __post_init__(self):
        matrix = tuple(tuple(int(c) for c in row) for row in self.matrix)
        translation = rational_vector(self.translation)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)
        n = len(matrix)
        if any(len(row) != n for row in matrix) or len(translation) != n:
            raise ValidationError("幺模映射的矩阵与平移维数不一致")
        if not is_unimodular(matrix):
            raise ValidationError(f"矩阵不是幺模的: det = {determinant(matrix)}")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def determinant(self) -> int:
        return int(determinant(self.matrix))

    @property
    def columns(self) -> Tuple[LatticeVector, ...]:
        return transpose(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "UnimodularMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
                   (Fraction(0),) * n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]],
                     translation: Sequence[RationalLike]) -> "UnimodularMap":
        """由各列（e_k 的像）构造"""
        return cls(transpose(columns), rational_vector(translation))

    @classmethod
    def translation_only(cls, translation: Sequence[RationalLike]) -> "UnimodularMap":
        n = len(translation)
        return cls(cls.identity(n).matrix, rational_vector(translation))

    def linear(self, y: Sequence) -> RationalVector:
        return mat_vec(self.matrix, y)

    def apply(self, y: Sequence) -> RationalVector:
        return tuple(a + b for a, b in zip(self.linear(y), self.translation))

    def inverse(self) -> "UnimodularMap":
        inv = integer_inverse(self.matrix)
        return UnimodularMap(inv, tuple(-c for c in mat_vec(inv, self.translation)))

    def compose(self, other: "UnimodularMap") -> "UnimodularMap":
        """self ∘ other"""
        return UnimodularMap(mat_mul(self.matrix, other.matrix), self.apply(other.translation))

    def is_special(self) -> bool:
        return self.determinant == 1
