#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
椭球填充证书
顶点单形、单形分离判定（精确有理线性规划）、按顶点组构造的填充证书，
以及任意两两内部不交的幺模单形族的校验
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import networkx as nx
import sympy
from sympy.solvers.simplex import InfeasibleLPError, linprog

try:
    from .errors import PackingError, ValidationError
    from .lattice import (RationalVector, UnimodularMap, as_rational, format_rational, format_vector,
                          to_fraction)
    from .polytope import DelzantPolytope, SimplexSpec, verify_simplex_inclusion, vertex_figure, volume
except ImportError:
    from errors import PackingError, ValidationError
    from lattice import (RationalVector, UnimodularMap, as_rational, format_rational, format_vector,
                          to_fraction)
    from polytope import DelzantPolytope, SimplexSpec, verify_simplex_inclusion, vertex_figure, volume

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EllipsoidSpec:
    """E(√(2a_1) − ε, …, √(2a_n) − ε)，半径只以容量权重 a_k 符号化保存"""

    capacity_weights: Tuple[Fraction, ...]
    epsilon_margin: Fraction = Fraction(0)

    def __post_init__(self):
        if any(a <= 0 for a in self.capacity_weights):
            raise ValidationError("椭球容量权重必须为正")
        if self.epsilon_margin < 0:
            raise ValidationError("椭球边距必须非负")

    def radii(self) -> List[str]:
        """半径的符号形式"""
        margin = "" if self.epsilon_margin == 0 else f"−{format_rational(self.epsilon_margin)}"
        return [f"√(2·{format_rational(a)}){margin}" for a in self.capacity_weights]


@dataclass(frozen=True)
class PackingPiece:
    map: UnimodularMap
    simplex: SimplexSpec
    ellipsoid: EllipsoidSpec

    def corners(self) -> List[RationalVector]:
        return [self.map.apply(v) for v in self.simplex.vertices()]


@dataclass(frozen=True)
class PackingCertificate:
    pieces: Tuple[PackingPiece, ...]
    host: DelzantPolytope
    fraction: Fraction


def vertex_simplex(delta: DelzantPolytope, p: Sequence) -> Tuple[UnimodularMap, SimplexSpec]:
    """
    conv(p, p_1, …, p_n) 作为 Δ(r_p) 在顶点图形映射下的像

    Returns:
        (映射, 单形)
    """
    fig = vertex_figure(delta, p)
    return fig.simplex_map(), SimplexSpec(fig.ratios)


def _interiors_meet(first: Sequence[RationalVector], second: Sequence[RationalVector]) -> bool:
    """
    两个满维单形的开内部是否相交

    最大化 s：重心坐标 λ_i ≥ s、μ_j ≥ s，Σλ = Σμ = 1，Σλ_iP_i = Σμ_jQ_j；
    闭包不交时不可行，最优 s = 0 表示只在边界接触
    """
    k1, k2 = len(first), len(second)
    n = len(first[0])
    size = k1 + k2 + 1
    rows, rhs = [], []
    for i in range(k1 + k2):
        row = [0] * size
        row[i] = -1
        row[-1] = 1
        rows.append(row)
        rhs.append(0)
    eq_rows, eq_rhs = [], []
    eq_rows.append([1] * k1 + [0] * k2 + [0])
    eq_rhs.append(1)
    eq_rows.append([0] * k1 + [1] * k2 + [0])
    eq_rhs.append(1)
    for c in range(n):
        eq_rows.append([sympy.Rational(p[c]) for p in first]
                       + [-sympy.Rational(q[c]) for q in second] + [0])
        eq_rhs.append(0)
    objective = [0] * (k1 + k2) + [-1]
    try:
        optimum, _ = linprog(objective, rows, rhs, eq_rows, eq_rhs)
    except InfeasibleLPError:
        return False
    return to_fraction(-optimum) > 0


def simplicially_separating(delta: DelzantPolytope, p: Sequence, q: Sequence) -> bool:
    """p、q 两个顶点的顶点单形内部是否不交（边界接触算分离）"""
    ip, iq = delta.vertex_index(p), delta.vertex_index(q)
    if ip == iq:
        raise ValidationError("需要两个不同的顶点")
    first = _simplex_points(delta, delta.vertices[ip])
    second = _simplex_points(delta, delta.vertices[iq])
    return not _interiors_meet(first, second)


def _simplex_points(delta: DelzantPolytope, p: RationalVector) -> List[RationalVector]:
    fig = vertex_figure(delta, p)
    return [fig.vertex] + list(fig.neighbours)


def packed_fraction(cert: PackingCertificate) -> Fraction:
    """Σ_k ∏ a^(k) / (n!·vol(Δ))：椭球总体积与辛体积之比"""
    if not cert.pieces:
        return Fraction(0)
    n = cert.host.dim
    total = sum((piece.simplex.product for piece in cert.pieces), Fraction(0))
    return total / (math.factorial(n) * volume(cert.host))


def verify_general_packing(delta: DelzantPolytope,
                           pieces: Sequence[Tuple[UnimodularMap, SimplexSpec]],
                           strict_sl: bool = False) -> PackingCertificate:
    """
    校验每个 A_k(Δ(a^(k))) + q_k ⊆ Δ 且两两内部不交

    Args:
        delta: 宿主多面体
        pieces: (映射, 单形) 列表
        strict_sl: 要求映射 det = +1

    Returns:
        PackingCertificate，椭球为 E(√(2a^(k)))

    Raises:
        PackingError: 包含或不交失败，pair 给出出错的下标
    """
    built = []
    for k, (mapping, simplex) in enumerate(pieces):
        if not verify_simplex_inclusion(delta, mapping, simplex, strict_sl=strict_sl):
            raise PackingError(f"第 {k} 块单形不在多面体内", pair=(k, k))
        built.append(PackingPiece(mapping, simplex, EllipsoidSpec(simplex.weights)))
    corners = [piece.corners() for piece in built]
    for i, j in itertools.combinations(range(len(built)), 2):
        if _interiors_meet(corners[i], corners[j]):
            raise PackingError(f"第 {i} 块与第 {j} 块单形内部相交", pair=(i, j))
    cert = PackingCertificate(tuple(built), delta, Fraction(0))
    return PackingCertificate(cert.pieces, delta, packed_fraction(cert))


def theorem_6_4_certificate(delta: DelzantPolytope, vertices: Sequence[Sequence],
                            eps) -> PackingCertificate:
    """
    两两单形分离的顶点组给出的填充证书

    每块锚定在一个顶点：单形 Δ(r_p(Δ))，椭球 E(√(2r_p(Δ)) − ε)

    Args:
        delta: Delzant 多面体
        vertices: 顶点列表
        eps: 0 < ε < min E_p

    Raises:
        ValidationError: 顶点为空、重复或 ε 不在范围内
        PackingError: 存在不分离的顶点对（pair 为其在 vertices 中的下标）
    """
    eps = as_rational(eps)
    if not vertices:
        raise ValidationError("顶点组为空")
    indices = [delta.vertex_index(v) for v in vertices]
    if len(set(indices)) != len(indices):
        raise ValidationError("顶点组中有重复顶点")
    figures = [vertex_figure(delta, delta.vertices[i]) for i in indices]
    bound = min(fig.E for fig in figures)
    if not 0 < eps < bound:
        raise ValidationError(f"ε = {eps} 必须满足 0 < ε < {bound}")
    points = [[fig.vertex] + list(fig.neighbours) for fig in figures]
    for i, j in itertools.combinations(range(len(figures)), 2):
        if _interiors_meet(points[i], points[j]):
            raise PackingError(
                f"顶点 {format_vector(figures[i].vertex)} 与 {format_vector(figures[j].vertex)} 不是单形分离的",
                pair=(i, j))
    pieces = []
    for fig in figures:
        simplex = SimplexSpec(fig.ratios)
        if not verify_simplex_inclusion(delta, fig.simplex_map(), simplex):
            raise PackingError(f"顶点 {format_vector(fig.vertex)} 的顶点单形不在多面体内")
        pieces.append(PackingPiece(fig.simplex_map(), simplex, EllipsoidSpec(fig.ratios, eps)))
    cert = PackingCertificate(tuple(pieces), delta, Fraction(0))
    fraction = packed_fraction(cert)
    logger.debug("填充证书: %d 块, 填充比例 %s", len(pieces), fraction)
    return PackingCertificate(cert.pieces, delta, fraction)


def separation_graph(delta: DelzantPolytope) -> nx.Graph:
    """顶点下标为节点，单形分离的顶点对为边"""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(delta.vertices)))
    points = [_simplex_points(delta, v) for v in delta.vertices]
    for i, j in itertools.combinations(range(len(points)), 2):
        if not _interiors_meet(points[i], points[j]):
            graph.add_edge(i, j)
    return graph


def maximal_separating_groups(delta: DelzantPolytope,
                              min_size: int = 2) -> List[Tuple[RationalVector, ...]]:
    """
    分离图的极大团，即可直接用于填充证书的极大顶点组

    Returns:
        按顶点字典序排列的顶点元组列表
    """
    graph = separation_graph(delta)
    groups = []
    for clique in nx.find_cliques(graph):
        if len(clique) >= min_size:
            groups.append(tuple(delta.vertices[i] for i in sorted(clique)))
    return sorted(groups)

