#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
具名构造
射影空间、顶点爆破、乘积、固定算例以及多边形空间的矩多面体和 Λ 闭式
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

try:
    from .errors import ValidationError
    from .fan import (Fan, SupportFunction, anticanonical_support, make_fan, normal_fan,
                      product_fan, star_subdivision)
    from .lattice import (RationalVector, as_rational, dot, format_vector, primitivize,
                          rational_vector)
    from .polytope import DelzantPolytope, build_polytope, vertex_figure
except ImportError:
    from errors import ValidationError
    from fan import (Fan, SupportFunction, anticanonical_support, make_fan, normal_fan,
                     product_fan, star_subdivision)
    from lattice import (RationalVector, as_rational, dot, format_vector, primitivize,
                         rational_vector)
    from polytope import DelzantPolytope, build_polytope, vertex_figure

logger = logging.getLogger(__name__)

MAX_POLYGON_SIDES = 20


@dataclass(frozen=True)
class BlowupRecord:
    """一次顶点爆破；ancestry 为更早的爆破记录（从根开始）"""

    parent: DelzantPolytope
    vertex: RationalVector
    eps: Fraction
    child: DelzantPolytope
    ancestry: Tuple["BlowupRecord", ...] = ()

    @property
    def root(self) -> DelzantPolytope:
        return self.ancestry[0].parent if self.ancestry else self.parent

    @property
    def chain(self) -> Tuple["BlowupRecord", ...]:
        return self.ancestry + (self,)


@dataclass(frozen=True)
class PolygonWeights:
    """多边形边长 α_1, …, α_m"""

    alphas: Tuple[Fraction, ...]

    def __post_init__(self):
        alphas = rational_vector(self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if any(a <= 0 for a in alphas):
            raise ValidationError(f"边长必须为正: {format_vector(alphas)}")
        if len(alphas) > MAX_POLYGON_SIDES:
            raise ValidationError(f"边数 {len(alphas)} 超过上限 {MAX_POLYGON_SIDES}")

    @property
    def m(self) -> int:
        return len(self.alphas)


def _weights(alpha) -> PolygonWeights:
    return alpha if isinstance(alpha, PolygonWeights) else PolygonWeights(tuple(alpha))


def projective_space(n: int) -> DelzantPolytope:
    """单位单形 {x_i ≥ 0, −Σx_i ≥ −1}"""
    if n < 1:
        raise ValidationError("维数必须 ≥ 1")
    facets = [(tuple(int(i == k) for i in range(n)), 0) for k in range(n)]
    facets.append(((-1,) * n, -1))
    return build_polytope(facets)


def blowup_at_vertex(delta: DelzantPolytope, p: Sequence, eps,
                     ancestry: Sequence[BlowupRecord] = ()) -> BlowupRecord:
    """
    在顶点 p 处以 ε 爆破：用过 p + εv_i 的超平面截去顶点

    新刻面的法向量是 p 处活跃法向量之和，偏移 ⟨p, u⟩ + ε，追加在最后

    Args:
        delta: Delzant 多面体
        p: 顶点
        eps: 0 < ε < E_p(Δ)
        ancestry: 之前的爆破记录

    Returns:
        BlowupRecord

    Raises:
        ValidationError: ε 不在范围内或结果不是 Delzant 多面体
    """
    eps = as_rational(eps)
    fig = vertex_figure(delta, p)
    if not 0 < eps < fig.E:
        raise ValidationError(f"ε = {eps} 必须满足 0 < ε < E_p = {fig.E}")
    total = [sum(delta.facets[k].normal[i] for k in fig.active) for i in range(delta.dim)]
    normal, _ = primitivize(total)
    offset = dot(normal, fig.vertex) + eps
    cut = [tuple(c + eps * w for c, w in zip(fig.vertex, v)) for v in fig.edge_dirs]
    if any(dot(normal, q) != offset for q in cut):
        raise ValidationError("新刻面没有恰好经过 p + εv_i")
    child = build_polytope([(f.normal, f.offset) for f in delta.facets] + [(normal, offset)])
    if len(child.vertices) != len(delta.vertices) + delta.dim - 1:
        raise ValidationError("爆破后的顶点数不等于 |Vert| + n − 1")
    logger.debug("爆破顶点 %s, ε = %s, 新刻面法向量 %s", format_vector(fig.vertex), eps, format_vector(normal))
    return BlowupRecord(delta, fig.vertex, eps, child, tuple(ancestry))


def product_polytope(delta1: DelzantPolytope, delta2: DelzantPolytope) -> DelzantPolytope:
    n1, n2 = delta1.dim, delta2.dim
    facets = [(tuple(f.normal) + (0,) * n2, f.offset) for f in delta1.facets]
    facets += [((0,) * n1 + tuple(f.normal), f.offset) for f in delta2.facets]
    return build_polytope(facets)


def cp_product(n1: int, n2: int) -> DelzantPolytope:
    return product_polytope(projective_space(n1), projective_space(n2))


def example_4_2(n: int, tau) -> DelzantPolytope:
    """CP^n 在顶点 e_n 处以 τ 爆破"""
    e_n = tuple(int(i == n - 1) for i in range(n))
    return blowup_at_vertex(projective_space(n), e_n, tau).child


def example_4_1() -> Tuple[Fan, SupportFunction]:
    """沿 Z₂ 奇点曲线解消得到的四维非 Fano 流形"""
    generators = [(-1, -2, -2, -2), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
                  (0, 0, 0, 1), (0, -1, -1, -1)]
    cones = [(1, 3, 4, 5), (1, 4, 5, 6), (1, 3, 5, 6), (1, 3, 4, 6),
             (2, 3, 4, 5), (2, 4, 5, 6), (2, 3, 5, 6), (2, 3, 4, 6)]
    fan = make_fan(generators, [[i - 1 for i in c] for c in cones])
    return fan, SupportFunction((1, 0, 1, 0, 0, 0))


def example_4_3() -> Tuple[Fan, SupportFunction]:
    """CP²×CP² 沿三个二维轨道闭包依次等变爆破，取 φ_c1"""
    cp2, _ = normal_fan(projective_space(2))
    fan = product_fan(cp2, cp2)
    for face in ((0, 3), (1, 4), (2, 5)):
        fan = star_subdivision(fan, face)
    return fan, anticanonical_support(fan)


def example_4_3_printed() -> Tuple[Fan, SupportFunction]:
    """按已发表的 23 个极大锥逐字构造（不通过 validate_fan）"""
    fan, phi = example_4_3()
    cones = [(1, 2, 7, 8), (1, 2, 6, 8), (1, 2, 6, 7), (1, 3, 5, 7), (1, 3, 5, 9), (1, 3, 7, 9),
             (1, 5, 6, 8), (1, 5, 6, 9), (1, 5, 7, 8), (1, 6, 7, 9), (2, 3, 4, 9), (2, 3, 8, 9),
             (2, 3, 4, 5), (2, 4, 7, 8), (2, 4, 6, 7), (2, 4, 6, 9), (2, 6, 8, 9), (3, 4, 5, 7),
             (3, 4, 7, 9), (3, 5, 8, 9), (4, 5, 7, 8), (4, 6, 7, 9), (5, 6, 8, 9)]
    return make_fan(fan.generators, [[i - 1 for i in c] for c in cones]), phi


def remark_1_5() -> DelzantPolytope:
    """七边形 Δ_α"""
    facets = [((1, 0), "1/2"), ((-1, 0), "-5/2"), ((0, 1), "1/3"), ((0, -1), "-7/3"),
              ((1, 1), 1), ((1, -1), -1), ((-1, 1), -1)]
    return build_polytope(facets)


# 七边形顶点的命名 q1..q7
REMARK_1_5_VERTICES: Dict[str, RationalVector] = {
    name: rational_vector(v) for name, v in [
        ("q1", ("1/2", "3/2")), ("q2", ("4/3", "7/3")), ("q3", ("5/2", "7/3")),
        ("q4", ("5/2", "3/2")), ("q5", ("4/3", "1/3")), ("q6", ("2/3", "1/3")),
        ("q7", ("1/2", "1/2")),
    ]
}

FIXTURES = {
    "example_4_1": example_4_1,
    "example_4_2": lambda: example_4_2(2, Fraction(1, 2)),
    "example_4_3": example_4_3,
    "example_4_3_printed": example_4_3_printed,
    "remark_1_5": remark_1_5,
}

FIXTURE_DESCRIPTIONS = {
    "example_4_1": "四维非 Fano 流形 (Σ, ω)，三明治在 1 处闭合",
    "example_4_2": "CP² 在 e₂ 处以 τ = 1/2 爆破",
    "example_4_3": "CP²×CP² 的三次等变爆破，24 个极大锥，φ_c1",
    "example_4_3_printed": "已发表的 23 个极大锥（校验失败）",
    "remark_1_5": "七边形 Δ_α（非 Fano）",
}

# 已发表数值与精确计算不一致的算例
PUBLISHED_VALUES = {
    "remark_1_5": [
        "已发表值 Λ(Δ_α) = 25π/3，精确枚举得 Λ = 2π·23/6 = 23π/3",
        "已发表值 Υ(Δ_α) = π/3，Hilbert 基最小正值得 Υ = 2π·2 = 4π",
        "已发表的椭球半径（如 q1 处 √(5√2/3)）按欧氏棱长计算，这里按本原棱向量的格长度 r = 5/6 给出 √(2·5/6)",
    ],
    "example_4_3": [
        "已发表值 Υ(Σ, φ_c1) = 1；生成元中没有相反向量，关系总和至少为 3，Υ = 3",
        "已发表的 23 个极大锥中 ⟨u2,u3,u4,u5⟩ 内部含 u8，正确的扇有 24 个极大锥",
    ],
    "example_4_1": [
        "已发表的顶点 t1、t3 与 Δ_ω 的精确顶点不符（以 polytope_from_support 为准）",
    ],
    "example_4_2": [
        "已发表的自反规范化 r = 2 不满足条件；只有 τ = (n−1)/(n+1) 时存在，r = n+1",
    ],
}


def fixture(name: str) -> Union[DelzantPolytope, Tuple[Fan, SupportFunction]]:
    """按名称返回固定算例"""
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValidationError(f"未知算例 {name!r}，可选: {', '.join(sorted(FIXTURES))}") from None


def is_generic(alpha) -> bool:
    """不存在 ε_i = ±1 使 Σ ε_i α_i = 0"""
    alphas = _weights(alpha).alphas
    for signs in itertools.product((1, -1), repeat=len(alphas)):
        if sum((s * a for s, a in zip(signs, alphas)), Fraction(0)) == 0:
            return False
    return True


def _require_generic(alpha, min_sides: int) -> PolygonWeights:
    weights = _weights(alpha)
    if weights.m < min_sides:
        raise ValidationError(f"需要至少 {min_sides} 条边，得到 {weights.m}")
    if not is_generic(weights):
        raise ValidationError(f"α = {format_vector(weights.alphas)} 不是一般的：存在 Σ±α_i = 0")
    return weights


def polygon_up_space(alpha, prune: bool = True) -> DelzantPolytope:
    """
    (m−1) 维多面体：|x_i| ≤ α_i（i < m），Σx_i ≥ α_m

    Args:
        alpha: 一般边长，m ≥ 3
        prune: 丢弃模板中的冗余刻面（记录警告）
    """
    weights = _require_generic(alpha, 3)
    a, m = weights.alphas, weights.m
    n = m - 1
    facets = [(tuple(int(i == k) for i in range(n)), -a[k]) for k in range(n)]
    facets += [(tuple(-int(i == k) for i in range(n)), -a[k]) for k in range(n)]
    facets.append(((1,) * n, a[m - 1]))
    return build_polytope(facets, prune=prune)


def polygon_apol_space(alpha, prune: bool = True) -> DelzantPolytope:
    """
    (m−2) 维多面体：|y_i| ≤ α_i（i ≤ m−2），α_m − α_{m−1} ≤ Σy_i ≤ α_m + α_{m−1}
    """
    weights = _require_generic(alpha, 4)
    a, m = weights.alphas, weights.m
    n = m - 2
    facets = [(tuple(int(i == k) for i in range(n)), -a[k]) for k in range(n)]
    facets += [(tuple(-int(i == k) for i in range(n)), -a[k]) for k in range(n)]
    facets.append(((1,) * n, a[m - 1] - a[m - 2]))
    facets.append(((-1,) * n, -(a[m - 1] + a[m - 2])))
    return build_polytope(facets, prune=prune)


def lambda_up_closed_form(alpha) -> Fraction:
    """
    max{2Σ_{i<m} α_i b_i + (Σ_{i<m} α_i − α_m) b_m : 1 ≤ 2Σ_{i<m} b_i + m·b_m ≤ m}
    """
    weights = _require_generic(alpha, 3)
    a, m = weights.alphas, weights.m
    head = sum(a[:-1], Fraction(0))
    best = None
    for b_m in range(2):
        budget = m - m * b_m
        for b in itertools.product(range(budget // 2 + 1), repeat=m - 1):
            total = 2 * sum(b) + m * b_m
            if not 1 <= total <= m:
                continue
            value = 2 * sum((ai * bi for ai, bi in zip(a, b)), Fraction(0)) + (head - a[-1]) * b_m
            if best is None or value > best:
                best = value
    return best


def lambda_apol_closed_form(alpha) -> Fraction:
    """
    APol(α) 的 Λ 闭式：μ_i + p − q ≥ 0，1 ≤ 2Σμ_i + (m−1)p − (m−3)q ≤ m−1，
    值为 2Σα_iμ_i + p(S + α_{m−1} − α_m) + q(α_m + α_{m−1} − S)，S = Σ_{i≤m−2} α_i
    """
    weights = _require_generic(alpha, 4)
    a, m = weights.alphas, weights.m
    head = sum(a[:-2], Fraction(0))
    best = None
    for p, q in itertools.product(range(m), repeat=2):
        low = max(0, q - p)
        for mu in itertools.product(range(low, m), repeat=m - 2):
            total = 2 * sum(mu) + (m - 1) * p - (m - 3) * q
            if not 1 <= total <= m - 1:
                continue
            value = (2 * sum((ai * k for ai, k in zip(a, mu)), Fraction(0))
                     + p * (head + a[-2] - a[-1]) + q * (a[-1] + a[-2] - head))
            if best is None or value > best:
                best = value
    if best is None:
        raise ValidationError("闭式的可行集为空")
    return best


def lambda_apol_printed_form(alpha) -> Fraction:
    """
    APol(α) 闭式的已发表写法：全部 μ ≥ 0，
    1 ≤ 2Σ_{i≤m−2} μ_i + (m−1)μ_{m−1} + (m−3)μ_m ≤ m−1，目标函数与 lambda_apol_closed_form 相同

    与一般算法不一致时以一般算法为准，polygon 报告同时给出两者
    """
    weights = _require_generic(alpha, 4)
    a, m = weights.alphas, weights.m
    head = sum(a[:-2], Fraction(0))
    best = None
    for p, q in itertools.product(range(2), range(m)):
        for mu in itertools.product(range((m - 1) // 2 + 1), repeat=m - 2):
            total = 2 * sum(mu) + (m - 1) * p + (m - 3) * q
            if not 1 <= total <= m - 1:
                continue
            value = (2 * sum((ai * k for ai, k in zip(a, mu)), Fraction(0))
                     + p * (head + a[-2] - a[-1]) + q * (a[-1] + a[-2] - head))
            if best is None or value > best:
                best = value
    return best


def prop_5_3_applies(alpha) -> bool:
    """α_{m−1} > α_m > ½Σ_{j≤m−1} α_j"""
    a = _weights(alpha).alphas
    if len(a) < 4:
        return False
    return a[-2] > a[-1] > sum(a[:-1], Fraction(0)) / 2


def pol_reduction(alpha) -> PolygonWeights:
    """
    Pol(α) 与 APol(α_1, …, α_{m−2}, α_{m−1} − α_m) 辛同胚时返回后者的边长

    Raises:
        ValidationError: 条件链不成立
    """
    weights = _require_generic(alpha, 4)
    a = weights.alphas
    if not prop_5_3_applies(weights):
        raise ValidationError(
            f"约化条件 α_(m−1) > α_m > ½Σ_(j≤m−1) α_j 不成立: α = {format_vector(a)}")
    return PolygonWeights(a[:-2] + (a[-2] - a[-1],))


def polygon_space(alpha, space: str = "up", prune: bool = True) -> DelzantPolytope:
    if space == "up":
        return polygon_up_space(alpha, prune=prune)
    if space == "apol":
        return polygon_apol_space(alpha, prune=prune)
    raise ValidationError(f"未知空间 {space!r}（可选 up、apol）")


def closed_form_applies(alpha, space: str = "up") -> bool:
    """闭式只在模板刻面全部不冗余时等于 Λ"""
    return not polygon_space(alpha, space, prune=True).pruned


def closed_form(alpha, space: str = "up") -> Fraction:
    """
    Raises:
        ValidationError: 未知空间；模板含冗余刻面（闭式不适用）
    """
    if space not in ("up", "apol"):
        raise ValidationError(f"未知空间 {space!r}（可选 up、apol）")
    if not closed_form_applies(alpha, space):
        raise ValidationError(f"α = {format_vector(_weights(alpha).alphas)} 的模板含冗余刻面，闭式不适用")
    if space == "up":
        return lambda_up_closed_form(alpha)
    return lambda_apol_closed_form(alpha)


def fixture_names() -> List[str]:
    return sorted(FIXTURES)
