#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Delzant 多面体
由刻面数据 {(u_k, λ_k)}（不等式 ⟨x, u_k⟩ ≥ λ_k）构造多面体，
枚举顶点、校验单纯/光滑/无冗余，计算顶点图形 r_p/E_p、体积、
单形嵌入证书、自反规范化与同构判定
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy.solvers.simplex import InfeasibleLPError, linprog

try:
    from .errors import SingularMatrixError, ValidationError
    from .lattice import (LatticeVector, RationalVector, UnimodularMap, as_rational,
                          determinant, dot, format_vector, integer_inverse, integer_matrix,
                          is_lattice_basis, is_primitive, mat_vec, matrix_rank, primitivize,
                          rational_vector, solve_rational, to_fraction, transpose)
except ImportError:
    from errors import SingularMatrixError, ValidationError
    from lattice import (LatticeVector, RationalVector, UnimodularMap, as_rational,
                         determinant, dot, format_vector, integer_inverse, integer_matrix,
                         is_lattice_basis, is_primitive, mat_vec, matrix_rank, primitivize,
                         rational_vector, solve_rational, to_fraction, transpose)

logger = logging.getLogger(__name__)


class Facet(NamedTuple):
    """刻面 ⟨x, normal⟩ ≥ offset"""
    normal: LatticeVector
    offset: Fraction


@dataclass(frozen=True)
class SimplexSpec:
    """加权单形 Δ(a_1,…,a_n) = conv(0, a_1e_1, …, a_ne_n)"""

    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        weights = rational_vector(self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights or any(w <= 0 for w in weights):
            raise ValidationError(f"单形权重必须为正: {weights}")

    @classmethod
    def uniform(cls, n: int, a) -> "SimplexSpec":
        return cls((as_rational(a),) * n)

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.weights)) == 1

    @property
    def product(self) -> Fraction:
        return math.prod(self.weights, start=Fraction(1))

    def vertices(self) -> List[RationalVector]:
        n = self.dim
        points = [(Fraction(0),) * n]
        for k, a in enumerate(self.weights):
            points.append(tuple(a if i == k else Fraction(0) for i in range(n)))
        return points


@dataclass(frozen=True)
class VertexFigure:
    """
    顶点 p 处的顶点图形

    edge_dirs[k] 是离开 active[k] 号刻面的本原棱方向，
    ratios[k] 是沿该方向到相邻顶点 neighbours[k] 的格长度 r_p(Δ)_k
    """

    vertex: RationalVector
    active: Tuple[int, ...]
    edge_dirs: Tuple[LatticeVector, ...]
    ratios: Tuple[Fraction, ...]
    neighbours: Tuple[RationalVector, ...]

    @property
    def E(self) -> Fraction:
        return min(self.ratios)

    def simplex_map(self) -> UnimodularMap:
        """把 e_k 送到 v_k、原点送到 p 的映射"""
        return UnimodularMap.from_columns(self.edge_dirs, self.vertex)


class WidthBound(NamedTuple):
    """宽度下界及其证书"""
    value: Fraction
    map: UnimodularMap
    simplex: SimplexSpec


class ReflexiveNormalization(NamedTuple):
    """r·(m + Δ) 满足自反条件"""
    r: Fraction
    m: RationalVector


@dataclass(frozen=True)
class DelzantPolytope:
    """
    Delzant 多面体

    只能通过 build_polytope 或 transformed/scaled/translated 得到，
    因而所有不变量（本原法向量、有界、满维、单纯、光滑、无冗余）都已校验
    """

    facets: Tuple[Facet, ...]
    vertices: Tuple[RationalVector, ...]
    incidence: Tuple[FrozenSet[int], ...]
    pruned: Tuple[Facet, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.facets[0].normal)

    @property
    def normals(self) -> Tuple[LatticeVector, ...]:
        return tuple(f.normal for f in self.facets)

    @property
    def offsets(self) -> Tuple[Fraction, ...]:
        return tuple(f.offset for f in self.facets)

    def slacks(self, x: Sequence) -> Tuple[Fraction, ...]:
        return tuple(dot(f.normal, x) - f.offset for f in self.facets)

    def contains(self, x: Sequence) -> bool:
        return all(s >= 0 for s in self.slacks(x))

    def vertex_index(self, p: Sequence) -> int:
        key = rational_vector(p)
        try:
            return self.vertices.index(key)
        except ValueError:
            raise ValidationError(f"{format_vector(key)} 不是多面体的顶点") from None

    def vertex_set(self) -> FrozenSet[RationalVector]:
        return frozenset(self.vertices)

    def facet_set(self) -> FrozenSet[Facet]:
        return frozenset(self.facets)

    def same_as(self, other: "DelzantPolytope") -> bool:
        return self.vertex_set() == other.vertex_set() and self.facet_set() == other.facet_set()

    def transformed(self, mapping: UnimodularMap) -> "DelzantPolytope":
        """
        像 Ψ(Δ) + x，不重新枚举顶点

        ⟨y, u⟩ ≥ λ 变为 ⟨z, Ψ^{-T}u⟩ ≥ λ + ⟨x, Ψ^{-T}u⟩
        """
        if mapping.dim != self.dim:
            raise ValidationError("映射维数与多面体维数不一致")
        inv_t = transpose(integer_inverse(mapping.matrix))
        facets = []
        for f in self.facets:
            normal = tuple(int(c) for c in integer_matrix(inv_t) @ np.array(f.normal, dtype=object))
            facets.append(Facet(normal, f.offset + dot(normal, mapping.translation)))
        vertices = [mapping.apply(v) for v in self.vertices]
        return _reordered(facets, vertices, self.incidence)

    def translated(self, x: Sequence) -> "DelzantPolytope":
        return self.transformed(UnimodularMap.translation_only(rational_vector(x)))

    def scaled(self, r) -> "DelzantPolytope":
        r = as_rational(r)
        if r <= 0:
            raise ValidationError("缩放因子必须为正")
        facets = [Facet(f.normal, r * f.offset) for f in self.facets]
        vertices = [tuple(r * c for c in v) for v in self.vertices]
        return _reordered(facets, vertices, self.incidence)


def _reordered(facets: List[Facet], vertices: List[RationalVector],
               incidence: Sequence[FrozenSet[int]]) -> DelzantPolytope:
    order = sorted(range(len(vertices)), key=lambda i: vertices[i])
    return DelzantPolytope(tuple(facets), tuple(vertices[i] for i in order),
                           tuple(incidence[i] for i in order))


def _check_facets(facets: Sequence) -> List[Facet]:
    parsed = []
    for normal, offset in facets:
        normal = tuple(int(c) for c in normal)
        parsed.append(Facet(normal, as_rational(offset)))
    if not parsed:
        raise ValidationError("没有刻面")
    n = len(parsed[0].normal)
    if n == 0 or any(len(f.normal) != n for f in parsed):
        raise ValidationError("刻面法向量维数不一致")
    if len(parsed) < n + 1:
        raise ValidationError(f"{n} 维多面体至少需要 {n + 1} 个刻面，得到 {len(parsed)}")
    for k, f in enumerate(parsed):
        if not any(f.normal):
            raise ValidationError(f"刻面 {k} 的法向量为零")
        if not is_primitive(f.normal):
            raise ValidationError(f"刻面 {k} 的法向量 {format_vector(f.normal)} 不是本原的")
    return parsed


def _enumerate_vertices(facets: Sequence[Facet]) -> Dict[RationalVector, FrozenSet[int]]:
    """逐个取 n 元刻面子集求交点，保留满足全部不等式的点"""
    n = len(facets[0].normal)
    found: Dict[RationalVector, FrozenSet[int]] = {}
    for subset in itertools.combinations(range(len(facets)), n):
        if any(set(subset) <= active for active in found.values()):
            continue
        try:
            x = solve_rational([facets[k].normal for k in subset], [facets[k].offset for k in subset])
        except SingularMatrixError:
            continue
        slacks = [dot(f.normal, x) - f.offset for f in facets]
        if all(s >= 0 for s in slacks):
            found[x] = frozenset(k for k, s in enumerate(slacks) if s == 0)
    logger.debug("顶点枚举: %d 个刻面, 找到 %d 个顶点", len(facets), len(found))
    return found


def _positively_spanning(normals: Sequence[LatticeVector]) -> bool:
    """法向量正张成 R^n ⇔ 多面体有界"""
    n = len(normals[0])
    if matrix_rank(normals) < n:
        return False
    # Σ c_k u_k = 0 且 c_k ≥ 1
    A_eq = [[normals[k][i] for k in range(len(normals))] for i in range(n)]
    b_eq = [-sum(u[i] for u in normals) for i in range(n)]
    try:
        linprog([0] * len(normals), [[0] * len(normals)], [1], A_eq, b_eq)
    except InfeasibleLPError:
        return False
    return True


def _affine_rank(points: Sequence[RationalVector]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return matrix_rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def build_polytope(facets: Sequence, prune: bool = False) -> DelzantPolytope:
    """
    由刻面数据构造并校验 Delzant 多面体

    Args:
        facets: (法向量, 偏移) 列表，不等式为 ⟨x, u⟩ ≥ λ
        prune: 为 True 时丢弃冗余刻面并记录警告，否则冗余刻面报错

    Returns:
        顶点按字典序排列的 DelzantPolytope

    Raises:
        ValidationError: 法向量非本原、无界、空或非满维、非单纯、非光滑、冗余刻面
    """
    parsed = _check_facets(facets)
    n = len(parsed[0].normal)
    if not _positively_spanning([f.normal for f in parsed]):
        raise ValidationError("多面体无界：刻面法向量不正张成 R^n")

    found = _enumerate_vertices(parsed)
    if not found:
        raise ValidationError("多面体为空")

    vertices = sorted(found)
    redundant = []
    for k in range(len(parsed)):
        on_facet = [v for v in vertices if k in found[v]]
        if _affine_rank(on_facet) < n - 1 or len(on_facet) < n:
            redundant.append(k)
    if redundant:
        names = ", ".join(f"{k}: ⟨x,{format_vector(parsed[k].normal)}⟩ ≥ {parsed[k].offset}" for k in redundant)
        if len(redundant) == len(parsed) or len(vertices) <= n:
            raise ValidationError("多面体为空或不是满维的", [names])
        if not prune:
            raise ValidationError(f"存在冗余刻面 {names}（可用 prune 丢弃）")
        logger.warning("丢弃冗余刻面 %s", names)
        kept = [f for k, f in enumerate(parsed) if k not in redundant]
        result = build_polytope(kept, prune=True)
        dropped = tuple(parsed[k] for k in redundant)
        return DelzantPolytope(result.facets, result.vertices, result.incidence,
                               result.pruned + dropped)

    for k in range(len(parsed)):
        if all(k in found[v] for v in vertices):
            raise ValidationError(f"多面体不是满维的：所有顶点都在刻面 {k} 上")

    diagnostics = []
    for v in vertices:
        active = sorted(found[v])
        if len(active) != n:
            diagnostics.append(f"顶点 {format_vector(v)} 处有 {len(active)} 个活跃刻面（非单纯）")
        elif not is_lattice_basis([parsed[k].normal for k in active]):
            diagnostics.append(f"顶点 {format_vector(v)} 处的法向量不构成格基（非光滑）")
    if diagnostics:
        raise ValidationError("不是 Delzant 多面体", diagnostics)

    polytope = DelzantPolytope(tuple(parsed), tuple(vertices), tuple(found[v] for v in vertices))
    for v in vertices:
        vertex_figure(polytope, v)
    return polytope


def vertex_figure(delta: DelzantPolytope, p: Sequence) -> VertexFigure:
    """
    顶点 p 的本原棱方向与格长度

    依次让一个活跃刻面失效，求出棱方向 w（⟨w, u_i⟩ = 0 对其余活跃刻面，
    ⟨w, u_k⟩ = 1），沿 w 走到第一个阻挡刻面即为相邻顶点

    Args:
        delta: Delzant 多面体
        p: 其顶点

    Returns:
        VertexFigure，其中 E = min_k r_p(Δ)_k
    """
    idx = delta.vertex_index(p)
    vertex = delta.vertices[idx]
    active = tuple(sorted(delta.incidence[idx]))
    normals = [delta.facets[k].normal for k in active]
    slacks = delta.slacks(vertex)

    dirs, ratios, neighbours = [], [], []
    for pos, k in enumerate(active):
        rhs = [Fraction(int(i == pos)) for i in range(len(active))]
        w = solve_rational(normals, rhs)
        if any(c.denominator != 1 for c in w):
            raise ValidationError(f"顶点 {format_vector(vertex)} 处棱方向不是整向量")
        w, _ = primitivize([int(c) for c in w])
        steps = [slacks[j] / -dot(f.normal, w)
                 for j, f in enumerate(delta.facets) if dot(f.normal, w) < 0]
        if not steps:
            raise ValidationError(f"多面体无界：顶点 {format_vector(vertex)} 处沿 {format_vector(w)} 的棱无终点")
        t = min(steps)
        dirs.append(w)
        ratios.append(t)
        neighbours.append(tuple(c + t * wi for c, wi in zip(vertex, w)))
    return VertexFigure(vertex, active, tuple(dirs), tuple(ratios), tuple(neighbours))


def vertex_figures(delta: DelzantPolytope) -> List[VertexFigure]:
    return [vertex_figure(delta, v) for v in delta.vertices]


def max_vertex_bound(delta: DelzantPolytope) -> Tuple[Fraction, RationalVector]:
    """
    max_p E_p(Δ) 及取到最大值的字典序最小顶点

    Returns:
        (值, 顶点)，该值是 W(Δ) 的可靠下界
    """
    best_value, best_vertex = None, None
    for fig in vertex_figures(delta):
        if best_value is None or fig.E > best_value:
            best_value, best_vertex = fig.E, fig.vertex
    return best_value, best_vertex


def verify_simplex_inclusion(delta: DelzantPolytope, mapping: UnimodularMap,
                             simplex: SimplexSpec, strict_sl: bool = False) -> bool:
    """
    闭单形的像 Ψ(Δ(a)) + x 是否包含在闭多面体 Δ 中

    Raises:
        ValidationError: 维数不一致；strict_sl 时 det(Ψ) ≠ 1
    """
    if mapping.dim != delta.dim or simplex.dim != delta.dim:
        raise ValidationError("映射、单形与多面体的维数不一致")
    if strict_sl and mapping.determinant != 1:
        raise ValidationError(f"要求 SL(n,Z)，但 det = {mapping.determinant}")
    return all(delta.contains(mapping.apply(v)) for v in simplex.vertices())


def _oriented(mapping: UnimodularMap, a: Fraction) -> UnimodularMap:
    """把 det = −1 的均匀单形证书换成 det = +1 的等价证书"""
    if mapping.determinant == 1:
        return mapping
    cols = list(mapping.columns)
    if len(cols) == 1:
        shift = tuple(t + a * c for t, c in zip(mapping.translation, cols[0]))
        return UnimodularMap.from_columns([tuple(-c for c in cols[0])], shift)
    cols[0], cols[1] = cols[1], cols[0]
    return UnimodularMap.from_columns(cols, mapping.translation)


def _column_additions(n: int, bound: int):
    """
    从单位阵出发，逐次做列加法 c_j += c_i 得到的非负幺模矩阵（按列排列去重）

    生成顺序为广度优先，元素不超过 bound
    """
    start = tuple(tuple(int(i == j) for i in range(n)) for j in range(n))
    seen = {tuple(sorted(start))}
    frontier = [start]
    while frontier:
        nxt = []
        for cols in frontier:
            for i, j in itertools.permutations(range(n), 2):
                new_col = tuple(a + b for a, b in zip(cols[j], cols[i]))
                if max(new_col) > bound:
                    continue
                cand = cols[:j] + (new_col,) + cols[j + 1:]
                key = tuple(sorted(cand))
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(cand)
                yield cand
        frontier = nxt


def _uniform_weight(slacks: Sequence[Fraction], G: np.ndarray) -> Optional[Fraction]:
    """G[j, k] = ⟨w_k, u_j⟩；均匀单形的最大权重 min slack_j / (−G[j,k])"""
    best = None
    for j, k in zip(*np.nonzero(G < 0)):
        value = slacks[j] / -int(G[j, k])
        if best is None or value < best:
            best = value
    return best


def width_lower_bound(delta: DelzantPolytope, search_budget: int = 3,
                      max_candidates: int = 200000,
                      strict_sl: bool = False) -> WidthBound:
    """
    W(Δ) 的带证书下界

    先尝试每个顶点的顶点图形映射（值为 E_p），再在各顶点处搜索
    M = V·C 形式的映射，其中 V 是棱方向、C 是元素不超过 search_budget 的非负幺模矩阵；
    候选先用 numpy 浮点批量筛选，再精确重算并经 verify_simplex_inclusion 校验；
    预算只按候选个数计，相同输入总得到相同证书

    Args:
        delta: Delzant 多面体
        search_budget: C 的元素上界，0 表示只用顶点图形
        max_candidates: 所有顶点合计检查的候选矩阵上限
        strict_sl: 要求证书矩阵 det = +1

    Returns:
        WidthBound(值, 映射, 均匀单形)
    """
    n = delta.dim
    figures = vertex_figures(delta)
    figures.sort(key=lambda f: (-f.E, f.vertex))
    best_value = figures[0].E
    best_map = figures[0].simplex_map()

    if search_budget > 0 and n > 1:
        normals = integer_matrix(delta.normals)
        per_vertex = max(1, max_candidates // len(figures))
        candidates = list(itertools.islice(_column_additions(n, search_budget), per_vertex + 1))
        if len(candidates) > per_vertex:
            candidates = candidates[:per_vertex]
            logger.warning("宽度搜索达到候选上限 %d（每个顶点 %d 个），使用当前最优证书",
                           max_candidates, per_vertex)
        C = np.array([transpose(c) for c in candidates], dtype=np.int64).reshape(-1, n, n)
        for fig in figures:
            slacks = delta.slacks(fig.vertex)
            scale = math.lcm(*(s.denominator for s in slacks))
            scaled = np.array([float(s * scale) for s in slacks])
            UV = normals @ integer_matrix(transpose(fig.edge_dirs))
            G = np.einsum("jk,bkl->bjl", UV.astype(np.int64), C)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(G < 0, scaled[None, :, None] / -G, np.inf)
            approx = ratios.min(axis=(1, 2)) / scale
            threshold = float(best_value) * (1 + 1e-9)
            for b in np.argsort(-approx, kind="stable"):
                if approx[b] <= threshold:
                    break
                value = _uniform_weight(slacks, G[b])
                if value is None or value <= best_value:
                    continue
                W = integer_matrix(transpose(fig.edge_dirs)) @ C[b].astype(object)
                best_value = value
                best_map = UnimodularMap(tuple(tuple(int(c) for c in row) for row in W), fig.vertex)
                logger.debug("宽度搜索: 顶点 %s 处改进到 %s", format_vector(fig.vertex), value)
                break

    if strict_sl:
        best_map = _oriented(best_map, best_value)
    simplex = SimplexSpec.uniform(n, best_value)
    if not verify_simplex_inclusion(delta, best_map, simplex, strict_sl=strict_sl):
        raise ValidationError("宽度证书校验失败")
    return WidthBound(best_value, best_map, simplex)


def _face_simplices(delta: DelzantPolytope, face: FrozenSet[int], memo: dict) -> List[tuple]:
    """face（活跃刻面集合）的拉取三角剖分，返回顶点元组列表"""
    if face in memo:
        return memo[face]
    verts = [v for v, inc in zip(delta.vertices, delta.incidence) if face <= inc]
    if len(face) == delta.dim:
        memo[face] = [(verts[0],)]
        return memo[face]
    apex = verts[0]
    result = []
    for j in range(len(delta.facets)):
        if j in face:
            continue
        sub = face | {j}
        sub_verts = [v for v, inc in zip(delta.vertices, delta.incidence) if sub <= inc]
        if not sub_verts or apex in sub_verts:
            continue
        # 单纯多面体中非空交对应 n − |sub| 维的面
        for simplex in _face_simplices(delta, frozenset(sub), memo):
            result.append((apex,) + simplex)
    memo[face] = result
    return result


def volume(delta: DelzantPolytope) -> Fraction:
    """精确欧氏体积：从顶点出发的拉取三角剖分"""
    n = delta.dim
    total = Fraction(0)
    for simplex in _face_simplices(delta, frozenset(), {}):
        base = simplex[0]
        total += abs(determinant([[a - b for a, b in zip(v, base)] for v in simplex[1:]]))
    return total / math.factorial(n)


def lambda_cap_polytope(delta: DelzantPolytope) -> Fraction:
    """−(n+1)·min_k λ_k"""
    return -(delta.dim + 1) * min(delta.offsets)


def polar_vertices(delta: DelzantPolytope) -> List[RationalVector]:
    """
    极对偶 Δ* = {y : ⟨y, x⟩ ≥ −1 ∀x ∈ Δ} 的顶点 u_k / (−λ_k)

    Raises:
        ValidationError: 原点不在内部
    """
    if any(f.offset >= 0 for f in delta.facets):
        raise ValidationError("原点不在多面体内部，极对偶无界")
    return [tuple(Fraction(c) / -f.offset for c in f.normal) for f in delta.facets]


def _interior_lattice_points(delta: DelzantPolytope, limit: int = 200000) -> List[LatticeVector]:
    n = delta.dim
    lows = [math.floor(min(v[i] for v in delta.vertices)) for i in range(n)]
    highs = [math.ceil(max(v[i] for v in delta.vertices)) for i in range(n)]
    if math.prod(h - l + 1 for l, h in zip(lows, highs)) > limit:
        raise ValidationError("格点枚举范围过大")
    points = []
    for point in itertools.product(*(range(l, h + 1) for l, h in zip(lows, highs))):
        if all(s > 0 for s in delta.slacks(point)):
            points.append(point)
    return points


def is_reflexive_normalizable(delta: DelzantPolytope) -> Optional[ReflexiveNormalization]:
    """
    寻找 r > 0 与 m 使 r·(m + Δ) 自反

    解 r(λ_i + ⟨m, u_i⟩) = −1（未知量 1/r 与 m），再检查像的顶点为整点、
    原点是唯一内部格点

    Returns:
        ReflexiveNormalization 或 None
    """
    n = delta.dim
    rows = [[sympy.Integer(c) for c in f.normal] + [sympy.Integer(1)] for f in delta.facets]
    rhs = [sympy.Rational(-f.offset) for f in delta.facets]
    try:
        solution, params = sympy.Matrix(rows).gauss_jordan_solve(sympy.Matrix(rhs))
    except ValueError:
        return None
    if params.shape[0] != 0:
        return None
    values = [to_fraction(c) for c in solution]
    m, s = tuple(values[:n]), values[n]
    if s <= 0:
        return None
    r = 1 / s
    image = delta.translated(m).scaled(r)
    if any(c.denominator != 1 for v in image.vertices for c in v):
        return None
    if _interior_lattice_points(image) != [(0,) * n]:
        return None
    return ReflexiveNormalization(r, m)


def polytope_isomorphic(delta1: DelzantPolytope, delta2: DelzantPolytope) -> Optional[UnimodularMap]:
    """
    判断 Δ2 = Ψ(Δ1) + x 是否对某个幺模仿射映射成立

    固定 Δ1 的一个顶点图形，尝试映到 Δ2 每个顶点图形的每种棱匹配；
    每个候选唯一确定矩阵，再检查顶点集合相等

    Returns:
        找到时返回映射，否则 None
    """
    if delta1.dim != delta2.dim:
        return None
    if len(delta1.vertices) != len(delta2.vertices) or len(delta1.facets) != len(delta2.facets):
        return None
    n = delta1.dim
    fig1 = vertex_figure(delta1, delta1.vertices[0])
    V1_inv = integer_matrix(integer_inverse(transpose(fig1.edge_dirs)))
    targets = delta2.vertex_set()
    for fig2 in vertex_figures(delta2):
        if sorted(fig2.ratios) != sorted(fig1.ratios):
            continue
        for perm in itertools.permutations(range(n)):
            if any(fig1.ratios[k] != fig2.ratios[perm[k]] for k in range(n)):
                continue
            V2 = integer_matrix(transpose([fig2.edge_dirs[perm[k]] for k in range(n)]))
            matrix = tuple(tuple(int(c) for c in row) for row in V2 @ V1_inv)
            image_p = mat_vec(matrix, fig1.vertex)
            mapping = UnimodularMap(matrix, tuple(b - a for a, b in zip(image_p, fig2.vertex)))
            if frozenset(mapping.apply(v) for v in delta1.vertices) == targets:
                return mapping
    return None
