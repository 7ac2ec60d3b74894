#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
完备正则扇
法扇构造、扇校验、本原集合与本原关系、墙关系、分段线性函数的严格凸性、
Fano 判定以及由支撑函数恢复多面体 Δ_φ
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

try:
    from .errors import ValidationError
    from .lattice import (IntMatrix, LatticeVector, RationalVector, as_rational, dot,
                          integer_inverse, integer_kernel_basis, is_lattice_basis, is_primitive,
                          mat_vec, rational_vector, solve_rational, transpose)
    from .polytope import DelzantPolytope, build_polytope
except ImportError:
    from errors import ValidationError
    from lattice import (IntMatrix, LatticeVector, RationalVector, as_rational, dot,
                         integer_inverse, integer_kernel_basis, is_lattice_basis, is_primitive,
                         mat_vec, rational_vector, solve_rational, transpose)
    from polytope import DelzantPolytope, build_polytope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fan:
    """完备正则扇：生成元 G(Σ) 与极大锥（生成元下标的有序元组）"""

    generators: Tuple[LatticeVector, ...]
    max_cones: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        generators = tuple(tuple(int(c) for c in u) for u in self.generators)
        cones = tuple(tuple(sorted(int(i) for i in cone)) for cone in self.max_cones)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "max_cones", cones)
        if not generators:
            raise ValidationError("扇没有生成元")
        n = len(generators[0])
        if any(len(u) != n for u in generators):
            raise ValidationError("生成元维数不一致")
        for c, cone in enumerate(cones):
            if len(cone) != n or len(set(cone)) != n:
                raise ValidationError(f"极大锥 {c} 需要 {n} 个不同的生成元下标: {cone}")
            if any(i < 0 or i >= len(generators) for i in cone):
                raise ValidationError(f"极大锥 {c} 的下标越界: {cone}")

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    @property
    def d(self) -> int:
        return len(self.generators)

    @property
    def generator_matrix(self) -> IntMatrix:
        """n×d 矩阵，第 k 列为 u_k"""
        return transpose(self.generators)

    @cached_property
    def faces(self) -> FrozenSet[FrozenSet[int]]:
        result = set()
        for cone in self.max_cones:
            for k in range(len(cone) + 1):
                result.update(frozenset(s) for s in itertools.combinations(cone, k))
        return frozenset(result)

    def is_face(self, indices) -> bool:
        return frozenset(indices) in self.faces

    @cached_property
    def cone_inverses(self) -> Tuple[IntMatrix, ...]:
        """每个极大锥基矩阵（列为生成元）的整数逆；行是锥的对偶基"""
        inverses = []
        for cone in self.max_cones:
            basis = transpose([self.generators[i] for i in cone])
            if not is_lattice_basis([self.generators[i] for i in cone]):
                raise ValidationError(f"极大锥 {cone} 不是正则的")
            inverses.append(integer_inverse(basis))
        return tuple(inverses)

    def cone_coordinates(self, c: int, x: Sequence) -> RationalVector:
        """x 在第 c 个极大锥的生成元基下的坐标"""
        return mat_vec(self.cone_inverses[c], x)

    def walls(self) -> Dict[Tuple[int, ...], List[Tuple[int, int]]]:
        """墙（n−1 元下标组）→ [(锥编号, 补全生成元)]"""
        result: Dict[Tuple[int, ...], List[Tuple[int, int]]] = {}
        for c, cone in enumerate(self.max_cones):
            for flank in cone:
                wall = tuple(i for i in cone if i != flank)
                result.setdefault(wall, []).append((c, flank))
        return result


@dataclass(frozen=True)
class SupportFunction:
    """分段线性函数，由 φ(u_k) 的值确定"""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", rational_vector(self.values))

    def scaled(self, r) -> "SupportFunction":
        r = as_rational(r)
        return SupportFunction(tuple(r * v for v in self.values))

    def restricted(self, count: int) -> "SupportFunction":
        """前 count 个生成元上的取值（祖先扇）"""
        return SupportFunction(self.values[:count])


@dataclass(frozen=True)
class PrimitiveCollection:
    """本原集合 P、σ(P)、本原关系系数与次数"""

    indices: Tuple[int, ...]
    target_cone: Tuple[int, ...]
    coefficients: Tuple[int, ...]
    degree: int

    def relation_vector(self, d: int) -> Tuple[int, ...]:
        """Σ_{i∈P} u_i − Σ c_j u_j = 0 对应的 d 维整数向量"""
        vec = [0] * d
        for i in self.indices:
            vec[i] += 1
        for j, c in zip(self.target_cone, self.coefficients):
            vec[j] -= c
        return tuple(vec)


@dataclass(frozen=True)
class WallRelation:
    """墙关系 b_1u_{i_1}+…+b_{n−1}u_{i_{n−1}} + u_f + u_f' = 0"""

    wall: Tuple[int, ...]
    flanks: Tuple[int, int]
    coefficients: Tuple[int, ...]
    relation_vector: Tuple[int, ...]


@dataclass
class FanDiagnostics:
    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


class ConvexityResult(NamedTuple):
    convex: bool
    witness: Optional[object] = None
    criteria_agree: Optional[bool] = None


class FanoResult(NamedTuple):
    fano: bool
    witness: Optional[PrimitiveCollection]
    criteria_agree: bool


def make_fan(generators: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]) -> Fan:
    return Fan(tuple(tuple(u) for u in generators), tuple(tuple(c) for c in max_cones))


def normal_fan(delta: DelzantPolytope) -> Tuple[Fan, SupportFunction]:
    """
    Δ 的法扇与支撑函数 φ(u_k) = −λ_k（因而 Δ_φ = Δ）

    Args:
        delta: Delzant 多面体

    Returns:
        (扇, 支撑函数)；极大锥按 Δ 的顶点顺序排列
    """
    fan = Fan(delta.normals, tuple(tuple(sorted(inc)) for inc in delta.incidence))
    return fan, SupportFunction(tuple(-f.offset for f in delta.facets))


def _generic_point(fan: Fan) -> Tuple[int, ...]:
    # 各锥对偶基的整系数都小于 t − 1，(1, t, …, t^{n−1}) 不落在任何墙上
    bound = max(abs(c) for inv in fan.cone_inverses for row in inv for c in row)
    t = bound + 2
    return tuple(t ** i for i in range(fan.dim))


def validate_fan(fan: Fan) -> FanDiagnostics:
    """
    检查正则性、墙配对、两侧补全生成元分居墙的两侧、邻接图连通以及一般点恰被一个锥覆盖

    Returns:
        FanDiagnostics，violations 为空即有效
    """
    diag = FanDiagnostics()
    for k, u in enumerate(fan.generators):
        if not any(u) or not is_primitive(u):
            diag.violations.append(f"生成元 u{k + 1} = {u} 不是非零本原向量")
    used = {i for cone in fan.max_cones for i in cone}
    for k in range(fan.d):
        if k not in used:
            diag.violations.append(f"生成元 u{k + 1} 不属于任何极大锥")
    if len(set(fan.max_cones)) != len(fan.max_cones):
        diag.violations.append("极大锥重复")

    irregular = [cone for cone in fan.max_cones
                 if not is_lattice_basis([fan.generators[i] for i in cone])]
    for cone in irregular:
        diag.violations.append(f"极大锥 {_cone_name(cone)} 不是正则的 (|det| ≠ 1)")
    if irregular:
        return diag

    graph = nx.Graph()
    graph.add_nodes_from(range(len(fan.max_cones)))
    for wall, owners in sorted(fan.walls().items()):
        if len(owners) != 2:
            diag.violations.append(f"墙 {_cone_name(wall)} 属于 {len(owners)} 个极大锥（应为 2）")
            continue
        (c1, f1), (c2, f2) = owners
        pos = fan.max_cones[c1].index(f1)
        side = dot(fan.cone_inverses[c1][pos], fan.generators[f2])
        if side >= 0:
            diag.violations.append(f"墙 {_cone_name(wall)} 两侧的生成元 u{f1 + 1}, u{f2 + 1} 不在墙的两侧")
        graph.add_edge(c1, c2)
    if len(fan.max_cones) and not nx.is_connected(graph):
        diag.violations.append(f"极大锥邻接图不连通（{nx.number_connected_components(graph)} 个分支）")

    point = _generic_point(fan)
    covering = [c for c in range(len(fan.max_cones))
                if all(x > 0 for x in fan.cone_coordinates(c, point))]
    if len(covering) != 1:
        diag.violations.append(f"一般点 {point} 被 {len(covering)} 个极大锥覆盖（应为 1）")
    return diag


def require_valid(fan: Fan) -> Fan:
    diag = validate_fan(fan)
    if not diag.valid:
        raise ValidationError("扇不是完备正则扇", diag.violations)
    return fan


def _cone_name(indices: Sequence[int]) -> str:
    return "⟨" + ",".join(f"u{i + 1}" for i in indices) + "⟩"


def locate_cone(fan: Fan, x: Sequence) -> Tuple[Tuple[int, ...], Tuple[Fraction, ...]]:
    """
    包含 x 于相对内部的唯一面及 x 在其上的正系数

    Raises:
        ValidationError: 找不到或不唯一（扇有缺陷）
    """
    supports = {}
    for c, cone in enumerate(fan.max_cones):
        coords = fan.cone_coordinates(c, x)
        if all(a >= 0 for a in coords):
            face = tuple(i for i, a in zip(cone, coords) if a > 0)
            supports[face] = tuple(a for a in coords if a > 0)
    if len(supports) != 1:
        raise ValidationError(f"点 {tuple(x)} 所在的锥{'不存在' if not supports else '不唯一'}，扇有缺陷")
    return next(iter(supports.items()))


def evaluate_support(fan: Fan, phi: SupportFunction, x: Sequence) -> Fraction:
    """定位包含 x 的锥并线性求值"""
    face, coords = locate_cone(fan, x)
    return sum((a * phi.values[i] for i, a in zip(face, coords)), Fraction(0))


def primitive_collections(fan: Fan) -> List[PrimitiveCollection]:
    """
    本原集合：锥生成元单纯复形的极小非面

    对每个 P 定位 Σ_{i∈P} u_i 所在的面 σ(P)，系数给出本原关系，次数为 |P| − Σc_j

    Returns:
        按下标字典序排列的本原集合
    """
    result = []
    for size in range(2, fan.dim + 2):
        for subset in itertools.combinations(range(fan.d), size):
            if fan.is_face(subset):
                continue
            if not all(fan.is_face(s) for s in itertools.combinations(subset, size - 1)):
                continue
            total = tuple(sum(fan.generators[i][k] for i in subset) for k in range(fan.dim))
            if any(total):
                face, coords = locate_cone(fan, total)
            else:
                face, coords = (), ()
            if any(c.denominator != 1 for c in coords):
                raise ValidationError(f"本原关系系数不是整数: {subset}")
            coefficients = tuple(int(c) for c in coords)
            result.append(PrimitiveCollection(subset, face, coefficients, size - sum(coefficients)))
    logger.debug("本原集合 %d 个", len(result))
    return result


def wall_relations(fan: Fan) -> List[WallRelation]:
    """
    每面墙一条关系，两侧生成元系数规范为 1

    Returns:
        按墙的下标字典序排列
    """
    relations = []
    for wall, owners in sorted(fan.walls().items()):
        if len(owners) != 2:
            raise ValidationError(f"墙 {_cone_name(wall)} 没有恰好两个极大锥")
        (c1, f1), (c2, f2) = owners
        flanks = (min(f1, f2), max(f1, f2))
        target = tuple(-(a + b) for a, b in zip(fan.generators[f1], fan.generators[f2]))
        basis = [fan.generators[i] for i in wall]
        if wall:
            coords = solve_rational(transpose(basis + [fan.generators[f1]]), target)
        else:
            coords = (Fraction(0),) if not any(target) else (Fraction(1),)
        if coords[-1] != 0 or any(c.denominator != 1 for c in coords):
            raise ValidationError(f"墙 {_cone_name(wall)} 的关系系数不符合正则扇")
        b = tuple(int(c) for c in coords[:-1])
        vec = [0] * fan.d
        for i, coeff in zip(wall, b):
            vec[i] += coeff
        vec[f1] += 1
        vec[f2] += 1
        relations.append(WallRelation(wall, flanks, b + (1, 1), tuple(vec)))
    return relations


def degree(mu: Sequence[int], phi: SupportFunction) -> Fraction:
    """次数配对 deg_φ(μ) = Σ μ_k φ(u_k)"""
    return sum((Fraction(m) * v for m, v in zip(mu, phi.values)), Fraction(0))


def relation_lattice(fan: Fan) -> List[Tuple[int, ...]]:
    """关系格 R(Σ) = {μ : Σ μ_k u_k = 0} 的格基，秩 d − n"""
    return integer_kernel_basis(fan.generator_matrix)


def anticanonical_support(fan: Fan) -> SupportFunction:
    """φ_{c₁}(u_k) = 1"""
    return SupportFunction((Fraction(1),) * fan.d)


def is_strictly_convex_by_collections(fan: Fan, phi: SupportFunction) -> ConvexityResult:
    """对每个本原集合检查 Σ_{i∈P} φ(u_i) > φ(Σ_{i∈P} u_i)"""
    for pc in primitive_collections(fan):
        lhs = sum((phi.values[i] for i in pc.indices), Fraction(0))
        rhs = sum((c * phi.values[j] for j, c in zip(pc.target_cone, pc.coefficients)), Fraction(0))
        if lhs <= rhs:
            return ConvexityResult(False, pc)
    return ConvexityResult(True)


def is_strictly_convex(fan: Fan, phi: SupportFunction, cross_check: bool = False) -> ConvexityResult:
    """
    严格凸性：每面墙的关系向量满足 Σ φ(u_k) v(σ)_k > 0

    Args:
        fan: 有效扇
        phi: 支撑函数
        cross_check: 同时用本原集合判据核对

    Returns:
        ConvexityResult(结果, 违反的墙或本原集合, 两判据是否一致)
    """
    if len(phi.values) != fan.d:
        raise ValidationError(f"支撑函数有 {len(phi.values)} 个值，扇有 {fan.d} 个生成元")
    convex, witness = True, None
    for rel in wall_relations(fan):
        if degree(rel.relation_vector, phi) <= 0:
            convex, witness = False, rel
            break
    agree = None
    if cross_check:
        other = is_strictly_convex_by_collections(fan, phi)
        agree = other.convex == convex
        if not agree:
            logger.error("墙判据与本原集合判据不一致: %s vs %s", convex, other.convex)
    return ConvexityResult(convex, witness, agree)


def is_fano(fan: Fan) -> FanoResult:
    """
    所有本原集合次数为正 ⇔ Fano；并与 φ_{c₁} 的严格凸性核对

    Returns:
        FanoResult(是否 Fano, 违反的本原集合, 两判据是否一致)
    """
    witness = None
    for pc in primitive_collections(fan):
        if pc.degree <= 0:
            witness = pc
            break
    fano = witness is None
    convex = is_strictly_convex(fan, anticanonical_support(fan)).convex
    if convex != fano:
        logger.error("Fano 判据不一致: 次数判据 %s, φ_c1 凸性 %s", fano, convex)
    return FanoResult(fano, witness, convex == fano)


def polytope_from_support(fan: Fan, phi: SupportFunction, prune: bool = False) -> DelzantPolytope:
    """
    Δ_φ = {m : ⟨m, u_k⟩ ≥ −φ(u_k)}，顶点为各极大锥上的 φ_σ

    Raises:
        ValidationError: φ 不严格凸，或顶点与极大锥不一一对应
    """
    result = is_strictly_convex(fan, phi)
    if not result.convex:
        raise ValidationError("支撑函数不是严格凸的", [_describe_witness(result.witness)])
    corners = set()
    for cone in fan.max_cones:
        normals = [fan.generators[i] for i in cone]
        corners.add(solve_rational(normals, [-phi.values[i] for i in cone]))
    delta = build_polytope([(u, -v) for u, v in zip(fan.generators, phi.values)], prune=prune)
    if delta.vertex_set() != frozenset(corners):
        raise ValidationError("Δ_φ 的顶点与极大锥不一一对应")
    return delta


def _describe_witness(witness) -> str:
    if isinstance(witness, WallRelation):
        return f"墙 {_cone_name(witness.wall)} 的关系 {witness.relation_vector} 次数非正"
    if isinstance(witness, PrimitiveCollection):
        return f"本原集合 {_cone_name(witness.indices)} 次数 {witness.degree}"
    return str(witness)


def star_subdivision(fan: Fan, face: Sequence[int]) -> Fan:
    """
    沿锥 face 的星形细分（沿轨道闭包的等变爆破）

    新生成元为 face 中生成元之和，追加在最后；包含 face 的极大锥被细分
    """
    face = tuple(sorted(face))
    if len(face) < 2 or not fan.is_face(face):
        raise ValidationError(f"{_cone_name(face)} 不是扇中维数 ≥ 2 的锥")
    new_gen = tuple(sum(fan.generators[i][k] for i in face) for k in range(fan.dim))
    new_index = fan.d
    cones = []
    for cone in fan.max_cones:
        if set(face) <= set(cone):
            for i in face:
                cones.append(tuple(sorted([j for j in cone if j != i] + [new_index])))
        else:
            cones.append(cone)
    return Fan(fan.generators + (new_gen,), tuple(cones))


def product_fan(fan1: Fan, fan2: Fan) -> Fan:
    n1, n2 = fan1.dim, fan2.dim
    gens = [tuple(u) + (0,) * n2 for u in fan1.generators]
    gens += [(0,) * n1 + tuple(v) for v in fan2.generators]
    cones = [c1 + tuple(j + fan1.d for j in c2) for c1 in fan1.max_cones for c2 in fan2.max_cones]
    return Fan(tuple(gens), tuple(cones))
