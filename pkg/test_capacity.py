#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
容量上下界测试
有界关系枚举与 Hilbert 基（含暴力对照）、Λ / Υ 的已知值、不变性与容量报告
"""

import itertools
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent / "src"))

from capacity import (FAN_NORMALIZED, POLYTOPE_2PI, CapacityOptions, bounded_relations,
                      capacity_report, hilbert_basis, lambda_bound, upsilon_bound)
from constructions import (blowup_at_vertex, example_4_1, example_4_2, example_4_3,
                           projective_space, remark_1_5)
from errors import HilbertBasisIncomplete, ValidationError
from fan import SupportFunction, anticanonical_support, normal_fan
from lattice import UnimodularMap, matrix_rank

FAST = CapacityOptions(search_budget=1, width_max_candidates=20000)

SMALL_MAPS = [
    UnimodularMap.from_columns([(1, 0), (0, 1)], (3, -2)),
    UnimodularMap.from_columns([(1, 1), (0, 1)], ("1/2", 0)),
    UnimodularMap.from_columns([(0, 1), (1, 0)], (0, "5/3")),
    UnimodularMap.from_columns([(2, 1), (1, 1)], (-1, -1)),
    UnimodularMap.from_columns([(-1, 0), (-1, 1)], (1, 0)),
]


def kernel_vectors(generators, B):
    """逐点枚举 [0, B]^d 网格，作为 bounded_relations 的对照"""
    d, n = len(generators), len(generators[0])
    found = []
    for a in itertools.product(range(B + 1), repeat=d):
        if not 1 <= sum(a) <= B:
            continue
        if all(sum(c * u[i] for c, u in zip(a, generators)) == 0 for i in range(n)):
            found.append(a)
    return sorted(found)


def minimal_solutions(columns, bound):
    """暴力求非负解的极小元素"""
    d = len(columns)
    solutions = []
    for a in itertools.product(range(bound + 1), repeat=d):
        if not any(a):
            continue
        if all(sum(c * u[i] for c, u in zip(a, columns)) == 0 for i in range(len(columns[0]))):
            solutions.append(a)
    minimal = [a for a in solutions
               if not any(b != a and all(x <= y for x, y in zip(b, a)) for b in solutions)]
    return sorted(minimal)


def test_bounded_relations_of_cp2():
    gens = [(1, 0), (0, 1), (-1, -1)]
    relations = bounded_relations(gens, 3)
    assert [r.coeffs for r in relations] == [(1, 1, 1)]
    assert [r.coeffs for r in bounded_relations(gens, 6)] == [(1, 1, 1), (2, 2, 2)]
    assert bounded_relations(gens, 0) == []


def test_bounded_relations_of_heptagon():
    fan, phi = normal_fan(remark_1_5())
    relations = [r.evaluated(phi) for r in bounded_relations(fan.generators, 3)]
    assert {(r.coeffs, r.value) for r in relations} == {
        ((1, 1, 0, 0, 0, 0, 0), 2),
        ((0, 0, 1, 1, 0, 0, 0), 2),
        ((0, 0, 0, 0, 0, 1, 1), 2),
        ((0, 1, 0, 1, 1, 0, 0), Fraction(23, 6)),
        ((0, 1, 1, 0, 0, 1, 0), Fraction(19, 6)),
        ((1, 0, 0, 1, 0, 0, 1), Fraction(17, 6)),
    }


@st.composite
def generator_lists(draw):
    n = draw(st.integers(2, 3))
    coord = st.integers(-2, 2)
    return draw(st.lists(st.tuples(*[coord] * n), min_size=2, max_size=7))


@settings(max_examples=30, deadline=None)
@given(generator_lists(), st.integers(1, 4))
def test_bounded_relations_match_grid(generators, B):
    found = [r.coeffs for r in bounded_relations(generators, B)]
    assert found == kernel_vectors(generators, B)


def test_hilbert_basis_examples():
    basis = hilbert_basis([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (0, 0, -1)])
    assert [r.coeffs for r in basis] == [(0, 0, 1, 0, 1), (1, 1, 1, 1, 0)]
    assert [r.coeffs for r in hilbert_basis([(1,), (-50,)])] == [(50, 1)]
    assert [r.coeffs for r in hilbert_basis([(1,), (-2,), (-3,)])] == [(2, 1, 0), (3, 0, 1)]


def test_hilbert_basis_norm_cap():
    with pytest.raises(HilbertBasisIncomplete) as info:
        hilbert_basis([(1,), (-50,)], norm_cap=10)
    assert info.value.norm_cap == 10
    assert info.value.partial == []


def test_hilbert_basis_without_relations():
    assert hilbert_basis([(1, 0), (0, 1)]) == []


@settings(max_examples=20, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=4, max_size=4))
def test_hilbert_basis_matches_brute_force(columns):
    assume(matrix_rank([[u[i] for u in columns] for i in range(2)]) == 2)
    try:
        basis = hilbert_basis(columns)
    except HilbertBasisIncomplete:
        assume(False)
    # 极小解的分量不超过两个回路之和，回路分量是至多为 8 的 2×2 子式
    assert [r.coeffs for r in basis] == minimal_solutions(columns, 16)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-1, 1), min_size=2, max_size=2), min_size=5, max_size=5))
def test_hilbert_basis_of_wide_systems(columns):
    try:
        basis = hilbert_basis(columns)
    except HilbertBasisIncomplete:
        assume(False)
    # 回路分量是至多为 2 的 2×2 子式，极小解落在至多三个回路张成的半开平行体内
    assert [r.coeffs for r in basis] == minimal_solutions(columns, 6)


def test_lambda_of_heptagon():
    fan, phi = normal_fan(remark_1_5())
    bound = lambda_bound(fan, phi)
    assert bound.value == Fraction(23, 6)
    assert [r.coeffs for r in bound.argmax] == [(0, 1, 0, 1, 1, 0, 0)]
    assert bound.cap == Fraction(15, 2)


def test_upsilon_of_heptagon():
    fan, phi = normal_fan(remark_1_5())
    bound = upsilon_bound(fan, phi)
    assert bound.value == 2
    assert bound.argmin.coeffs == (0, 0, 0, 0, 0, 1, 1)
    assert not bound.fano


def test_bounds_of_example_4_1():
    fan, omega = example_4_1()
    lam = lambda_bound(fan, omega)
    assert lam.value == 1
    assert (0, 0, 1, 1, 1, 1) in [r.coeffs for r in lam.argmax]
    assert upsilon_bound(fan, omega).value == 1


@pytest.mark.parametrize("tau", [Fraction(1, 4), Fraction(1, 2), Fraction(2, 3)])
def test_bounds_of_blown_up_plane(tau):
    fan, phi = normal_fan(example_4_2(2, tau))
    assert lambda_bound(fan, phi).value == 1
    ups = upsilon_bound(fan, phi)
    assert ups.value == 1 - tau
    assert ups.fano


def test_lambda_of_blown_up_space():
    fan, phi = normal_fan(example_4_2(3, Fraction(1, 4)))
    assert lambda_bound(fan, phi).value == Fraction(3, 2)
    fan, phi = normal_fan(example_4_2(3, Fraction(3, 4)))
    assert lambda_bound(fan, phi).value == 1


def test_bounds_require_convex_support():
    fan, _ = example_4_1()
    with pytest.raises(ValidationError):
        lambda_bound(fan, anticanonical_support(fan))
    with pytest.raises(ValidationError):
        upsilon_bound(fan, SupportFunction((0,) * fan.d))


def test_upsilon_of_example_4_3():
    fan, phi = example_4_3()
    bound = upsilon_bound(fan, phi)
    assert bound.fano
    assert bound.value == 3


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([remark_1_5(), example_4_2(2, Fraction(1, 3)), projective_space(2)]),
       st.sampled_from(SMALL_MAPS))
def test_bounds_are_unimodular_invariant(delta, mapping):
    fan, phi = normal_fan(delta)
    moved_fan, moved_phi = normal_fan(delta.transformed(mapping))
    assert lambda_bound(moved_fan, moved_phi).value == lambda_bound(fan, phi).value
    assert upsilon_bound(moved_fan, moved_phi).value == upsilon_bound(fan, phi).value


@pytest.mark.parametrize("r", [Fraction(2), Fraction(1, 3), Fraction(7, 2)])
def test_bounds_scale_linearly(r):
    delta = remark_1_5()
    fan, phi = normal_fan(delta)
    assert lambda_bound(fan, phi.scaled(r)).value == r * Fraction(23, 6)
    assert upsilon_bound(fan, phi.scaled(r)).value == r * 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_report_of_projective_space(n):
    report = capacity_report(projective_space(n), FAST)
    assert report.normalization == POLYTOPE_2PI
    assert report.factor == "2π"
    assert report.lambda_upper == report.upsilon_upper == 1
    assert report.fano
    assert report.width_lower == 1
    assert report.sandwich_closed
    assert report.reflexive.r == n + 1
    assert report.reflexive_agrees


def test_report_of_blown_up_plane():
    report = capacity_report(example_4_2(2, Fraction(1, 2)), FAST)
    assert report.best_upper == Fraction(1, 2)
    assert report.width_lower == Fraction(1, 2)
    assert report.sandwich_closed
    assert report.seshadri_upper == Fraction(1, 2)
    assert report.reflexive is None
    assert report.reflexive_agrees


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("tau", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
def test_report_of_blown_up_projective_spaces(n, tau):
    delta = 1 - tau
    report = capacity_report(example_4_2(n, tau), FAST)
    assert report.fano
    assert report.lambda_upper == max(1, ((n + 1) // 2) * delta)
    assert report.upsilon_upper == delta
    assert report.width_lower == delta
    assert report.sandwich_closed
    # 自反规范化只在 τ = (n−1)/(n+1) 时存在，此时 r = n+1
    if tau == Fraction(n - 1, n + 1):
        assert report.reflexive.r == n + 1
        assert report.reflexive.m == (Fraction(-1, n + 1),) * n
    else:
        assert report.reflexive is None


def test_report_of_example_4_1():
    report = capacity_report(example_4_1(), FAST)
    assert report.normalization == FAN_NORMALIZED
    assert report.factor == ""
    assert not report.fano
    assert report.fano_witness.indices == (0, 1)
    assert report.best_upper == 1
    assert report.width_lower == 1
    assert report.sandwich_closed


def test_report_of_heptagon():
    report = capacity_report(remark_1_5(), FAST, notes=["已发表值不同"])
    assert report.lambda_upper == Fraction(23, 6)
    assert report.upsilon_upper == 2
    assert not report.upsilon_is_capacity_bound
    assert report.best_upper == Fraction(23, 6)
    assert 1 <= report.width_lower <= report.best_upper
    assert report.reflexive is None
    assert report.reflexive_agrees
    assert report.notes == ["已发表值不同"]


def test_report_without_width():
    report = capacity_report(remark_1_5(), CapacityOptions(compute_width=False))
    assert report.width is None
    assert not report.sandwich_closed


def test_report_of_example_4_3():
    report = capacity_report(example_4_3(), FAST)
    assert report.fano
    assert report.upsilon_upper == 3
    assert report.width_lower >= 1
    assert report.best_upper <= 3


def test_report_with_fano_ancestor():
    record = blowup_at_vertex(projective_space(2), (0, 1), Fraction(1, 2))
    report = capacity_report(record.child, FAST, ancestor=record.root)
    assert report.ancestor_upsilon == 1
    assert report.ancestor_fano
    assert report.ancestor_is_capacity_bound
    assert report.best_upper == Fraction(1, 2)


def test_report_with_non_fano_ancestor():
    root = remark_1_5()
    record = blowup_at_vertex(root, root.vertices[0], Fraction(1, 10))
    report = capacity_report(record.child, FAST, ancestor=root)
    assert report.ancestor_upsilon == 2
    assert not report.ancestor_is_capacity_bound
    assert any("祖先" in note for note in report.notes)


def test_report_rejects_unrelated_ancestor():
    with pytest.raises(ValidationError):
        capacity_report(example_4_2(2, Fraction(1, 2)), FAST, ancestor=remark_1_5())
