#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
容量上下界
有界关系枚举（Λ）、非负关系幺半群的 Hilbert 基（Υ），
以及把宽度下界、Λ、Υ、Seshadri 常数上界汇总成报告
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

try:
    from .errors import HilbertBasisIncomplete, ValidationError
    from .fan import (Fan, PrimitiveCollection, SupportFunction, anticanonical_support,
                      is_fano, is_strictly_convex, normal_fan, polytope_from_support)
    from .lattice import LatticeVector
    from .polytope import (DelzantPolytope, ReflexiveNormalization, WidthBound,
                           is_reflexive_normalizable, width_lower_bound)
except ImportError:
    from errors import HilbertBasisIncomplete, ValidationError
    from fan import (Fan, PrimitiveCollection, SupportFunction, anticanonical_support,
                     is_fano, is_strictly_convex, normal_fan, polytope_from_support)
    from lattice import LatticeVector
    from polytope import (DelzantPolytope, ReflexiveNormalization, WidthBound,
                          is_reflexive_normalizable, width_lower_bound)

logger = logging.getLogger(__name__)

POLYTOPE_2PI = "polytope-2π"
FAN_NORMALIZED = "fan-normalized"


@dataclass(frozen=True, order=True)
class RelationVector:
    """非负整数关系 Σ a_k u_k = 0，value 为某个 φ 下的 Σ φ(u_k) a_k"""

    coeffs: Tuple[int, ...]
    value: Fraction = Fraction(0)

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    def evaluated(self, phi: SupportFunction) -> "RelationVector":
        value = sum((Fraction(a) * v for a, v in zip(self.coeffs, phi.values)), Fraction(0))
        return RelationVector(self.coeffs, value)


class LambdaBound(NamedTuple):
    value: Fraction
    argmax: Tuple[RelationVector, ...]
    cap: Fraction


class UpsilonBound(NamedTuple):
    value: Fraction
    argmin: RelationVector
    has_zero_values: bool
    fano: bool


def _check_generators(generators: Sequence[Sequence[int]]) -> List[LatticeVector]:
    gens = [tuple(int(c) for c in u) for u in generators]
    if not gens or any(len(u) != len(gens[0]) for u in gens):
        raise ValidationError("生成元为空或维数不一致")
    return gens


def bounded_relations(generators: Sequence[Sequence[int]], B: int) -> List[RelationVector]:
    """
    全部 a ∈ Z_{≥0}^d，Σ a_k u_k = 0，1 ≤ Σ a_k ≤ B

    深度优先枚举系数向量；当 ‖部分和‖_∞ 超过 剩余预算 × max‖u_k‖_∞ 时剪枝

    Args:
        generators: d 个格向量
        B: 系数总和上界

    Returns:
        按系数字典序排列的关系（value 为 0，用 evaluated 赋值）
    """
    gens = _check_generators(generators)
    if B < 1:
        return []
    n, d = len(gens[0]), len(gens)
    step = max(abs(c) for u in gens for c in u)
    found: List[Tuple[int, ...]] = []
    coeffs = [0] * d

    def search(k: int, remaining: int, partial: List[int]):
        if max((abs(c) for c in partial), default=0) > remaining * step:
            return
        if k == d:
            if remaining < B and not any(partial):
                found.append(tuple(coeffs))
            return
        for a in range(remaining + 1):
            coeffs[k] = a
            search(k + 1, remaining - a, [p + a * c for p, c in zip(partial, gens[k])])
        coeffs[k] = 0

    search(0, B, [0] * n)
    logger.debug("有界关系: d=%d, B=%d, 共 %d 个", d, B, len(found))
    return [RelationVector(a) for a in sorted(found)]


def _require_convex(fan: Fan, phi: SupportFunction):
    result = is_strictly_convex(fan, phi)
    if not result.convex:
        raise ValidationError("支撑函数不是严格凸的")


def lambda_bound(fan: Fan, phi: SupportFunction) -> LambdaBound:
    """
    Λ(Σ, φ) = max Σ φ(u_k) a_k，a 取遍总和 ≤ n+1 的非负关系

    Returns:
        LambdaBound(值, 全部取到最大值的关系（字典序）, 上限 (n+1)·max φ)

    Raises:
        ValidationError: φ 不严格凸；没有关系；值不在 (0, (n+1)·max φ] 内
    """
    _require_convex(fan, phi)
    relations = [r.evaluated(phi) for r in bounded_relations(fan.generators, fan.dim + 1)]
    if not relations:
        raise ValidationError("总和不超过 n+1 的关系为空，与完备扇矛盾")
    value = max(r.value for r in relations)
    argmax = tuple(r for r in relations if r.value == value)
    cap = (fan.dim + 1) * max(phi.values)
    if not 0 < value <= cap:
        raise ValidationError(f"Λ = {value} 不在 (0, {cap}] 内")
    return LambdaBound(value, argmax, cap)


def _dominates(b: Tuple[int, ...], a: Tuple[int, ...]) -> bool:
    return all(x >= y for x, y in zip(b, a))


def hilbert_basis(generators: Sequence[Sequence[int]], norm_cap: int = 50) -> List[RelationVector]:
    """
    非负整数解幺半群 {a ≥ 0 : Σ a_k u_k = 0} 的 Hilbert 基

    补全法：从单位向量出发，非解 a 只沿满足 ⟨Aa, Ae_j⟩ < 0 的方向 e_j 延伸，
    被已知解支配的候选丢弃；同一层的解先入基再延伸

    Args:
        generators: d 个格向量（矩阵 A 的列）
        norm_cap: 候选分量上界

    Returns:
        按字典序排列的极小解

    Raises:
        HilbertBasisIncomplete: 候选分量超过 norm_cap，附带已找到的部分解
    """
    gens = _check_generators(generators)
    d = len(gens)
    units = [tuple(int(i == j) for i in range(d)) for j in range(d)]
    frontier = [(e, gens[j]) for j, e in enumerate(units)]
    basis: List[Tuple[int, ...]] = []
    level = 1
    while frontier:
        rest = []
        for a, image in frontier:
            if not any(image):
                basis.append(a)
            else:
                rest.append((a, image))
        seen = set()
        nxt = []
        for a, image in rest:
            for j, u in enumerate(gens):
                if sum(x * y for x, y in zip(image, u)) >= 0:
                    continue
                b = a[:j] + (a[j] + 1,) + a[j + 1:]
                if b in seen or any(_dominates(b, s) for s in basis):
                    continue
                if b[j] > norm_cap:
                    raise HilbertBasisIncomplete(
                        f"Hilbert 基补全超过 norm_cap = {norm_cap}",
                        partial=[RelationVector(s) for s in sorted(basis)], norm_cap=norm_cap)
                seen.add(b)
                nxt.append((b, tuple(x + y for x, y in zip(image, u))))
        level += 1
        logger.debug("Hilbert 基补全: 第 %d 层 %d 个候选, 已有 %d 个解", level, len(nxt), len(basis))
        frontier = nxt
    return [RelationVector(a) for a in sorted(basis)]


def upsilon_bound(fan: Fan, phi: SupportFunction, norm_cap: int = 50) -> UpsilonBound:
    """
    Υ(Σ, φ)：Hilbert 基上 Σ φ(u_k) a_k 的最小正值

    φ 严格凸时所有关系的值非负且可加，因而该最小值对整个幺半群成立

    Returns:
        UpsilonBound(值, 取到最小值的字典序最小关系, 是否存在零值基元素, 是否 Fano)
    """
    _require_convex(fan, phi)
    basis = [r.evaluated(phi) for r in hilbert_basis(fan.generators, norm_cap)]
    positive = [r for r in basis if r.value > 0]
    if not positive:
        raise ValidationError("Hilbert 基中没有正值关系")
    value = min(r.value for r in positive)
    argmin = min(r for r in positive if r.value == value)
    zero = any(r.value == 0 for r in basis)
    fano = is_fano(fan).fano
    if not fano:
        logger.warning("扇不是 Fano 的，Υ = %s 不是容量上界", value)
    return UpsilonBound(value, argmin, zero, fano)


@dataclass
class CapacityOptions:
    search_budget: int = 3
    norm_cap: int = 50
    strict_sl: bool = False
    width_max_candidates: int = 200000
    compute_width: bool = True


@dataclass
class CapacityReport:
    """容量三明治：宽度下界 ≤ 容量 ≤ Λ（Fano 时 ≤ Υ）"""

    normalization: str
    dim: int
    lambda_upper: Fraction
    lambda_argmax: Tuple[RelationVector, ...]
    lambda_cap: Fraction
    upsilon_upper: Fraction
    upsilon_argmin: RelationVector
    upsilon_has_zero_values: bool
    fano: bool
    fano_witness: Optional[PrimitiveCollection]
    width: Optional[WidthBound] = None
    ancestor_upsilon: Optional[Fraction] = None
    ancestor_fano: Optional[bool] = None
    reflexive: Optional[ReflexiveNormalization] = None
    reflexive_agrees: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    @property
    def upsilon_is_capacity_bound(self) -> bool:
        return self.fano

    @property
    def ancestor_is_capacity_bound(self) -> bool:
        return self.ancestor_upsilon is not None and bool(self.ancestor_fano)

    @property
    def width_lower(self) -> Optional[Fraction]:
        return self.width.value if self.width else None

    @property
    def best_upper(self) -> Fraction:
        bounds = [self.lambda_upper]
        if self.upsilon_is_capacity_bound:
            bounds.append(self.upsilon_upper)
        if self.ancestor_is_capacity_bound:
            bounds.append(self.ancestor_upsilon)
        return min(bounds)

    @property
    def seshadri_upper(self) -> Fraction:
        """ε(L) ≤ Λ，Fano 时 ≤ Υ（同一归一化下）"""
        if self.fano:
            return min(self.lambda_upper, self.upsilon_upper)
        return self.lambda_upper

    @property
    def sandwich_closed(self) -> bool:
        return self.width is not None and self.width.value == self.best_upper

    @property
    def factor(self) -> str:
        return "2π" if self.normalization == POLYTOPE_2PI else ""


def _ancestor_upsilon(child_fan: Fan, phi: SupportFunction, ancestor: DelzantPolytope,
                      norm_cap: int) -> Tuple[Fraction, bool]:
    """祖先扇生成元上的 Υ；要求孩子的前 d0 个生成元就是祖先的生成元"""
    root_fan, _ = normal_fan(ancestor)
    d0 = root_fan.d
    if child_fan.generators[:d0] != root_fan.generators:
        raise ValidationError("祖先多面体的刻面法向量与当前多面体的前若干个刻面不一致")
    restricted = phi.restricted(d0)
    bound = upsilon_bound(root_fan, restricted, norm_cap)
    return bound.value, bound.fano


def capacity_report(source: Union[DelzantPolytope, Tuple[Fan, SupportFunction]],
                    options: Optional[CapacityOptions] = None,
                    ancestor: Optional[DelzantPolytope] = None,
                    notes: Sequence[str] = ()) -> CapacityReport:
    """
    汇总一个输入的全部界

    Args:
        source: Delzant 多面体（polytope-2π 归一化）或 (扇, 支撑函数)（fan-normalized）
        options: 搜索预算等选项
        ancestor: 爆破链的根多面体；给出时额外报告祖先 Υ
        notes: 附加说明（例如与已发表数值的差异）

    Returns:
        CapacityReport

    Raises:
        ValidationError: 输入无效或三明治不等式被破坏
    """
    options = options or CapacityOptions()
    if isinstance(source, DelzantPolytope):
        delta = source
        fan, phi = normal_fan(delta)
        normalization = POLYTOPE_2PI
    else:
        fan, phi = source
        delta = polytope_from_support(fan, phi)
        normalization = FAN_NORMALIZED

    lam = lambda_bound(fan, phi)
    ups = upsilon_bound(fan, phi, options.norm_cap)
    fano_result = is_fano(fan)
    report = CapacityReport(
        normalization=normalization,
        dim=fan.dim,
        lambda_upper=lam.value,
        lambda_argmax=lam.argmax,
        lambda_cap=lam.cap,
        upsilon_upper=ups.value,
        upsilon_argmin=ups.argmin,
        upsilon_has_zero_values=ups.has_zero_values,
        fano=fano_result.fano,
        fano_witness=fano_result.witness,
        notes=list(notes),
    )
    if not fano_result.criteria_agree:
        report.notes.append("Fano 判据（本原集合次数）与 φ_c1 严格凸性不一致")

    if options.compute_width:
        report.width = width_lower_bound(delta, search_budget=options.search_budget,
                                         max_candidates=options.width_max_candidates,
                                         strict_sl=options.strict_sl)

    if ancestor is not None:
        report.ancestor_upsilon, report.ancestor_fano = _ancestor_upsilon(
            fan, phi, ancestor, options.norm_cap)
        if not report.ancestor_fano:
            report.notes.append("根祖先不是 Fano 的，祖先 Υ 不是容量上界")

    try:
        report.reflexive = is_reflexive_normalizable(delta)
        if report.fano:
            anticanonical = polytope_from_support(fan, anticanonical_support(fan))
            report.reflexive_agrees = is_reflexive_normalizable(anticanonical) is not None
        else:
            report.reflexive_agrees = report.reflexive is None
    except ValidationError as e:
        logger.warning("自反规范化检查跳过: %s", e.message)
        report.notes.append(f"自反规范化检查跳过: {e.message}")

    if ups.value > lam.value:
        raise ValidationError(f"Υ = {ups.value} 大于 Λ = {lam.value}")
    if report.width is not None and report.width.value > report.best_upper:
        raise ValidationError(f"宽度下界 {report.width.value} 超过上界 {report.best_upper}")
    return report

