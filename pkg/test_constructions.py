#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
构造测试
射影空间与乘积、顶点爆破链、固定算例、多边形空间及其 Λ 闭式
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent / "src"))

from capacity import lambda_bound
from constructions import (FIXTURE_DESCRIPTIONS, FIXTURES, MAX_POLYGON_SIDES, PUBLISHED_VALUES,
                           PolygonWeights, blowup_at_vertex, closed_form, closed_form_applies,
                           cp_product, example_4_2, fixture, fixture_names, is_generic,
                           lambda_apol_closed_form, lambda_apol_printed_form,
                           lambda_up_closed_form, pol_reduction, polygon_apol_space,
                           polygon_space, polygon_up_space, projective_space, prop_5_3_applies)
from errors import ValidationError
from fan import Fan, normal_fan
from polytope import DelzantPolytope, build_polytope, volume


def as_vertices(*points):
    return frozenset(tuple(Fraction(c) for c in p) for p in points)


def generic_lambda(delta):
    return lambda_bound(*normal_fan(delta)).value


def test_projective_space():
    delta = projective_space(3)
    assert len(delta.vertices) == 4
    assert len(delta.facets) == 4
    with pytest.raises(ValidationError):
        projective_space(0)


def test_cp_product():
    delta = cp_product(1, 2)
    assert delta.dim == 3
    assert len(delta.vertices) == 6
    assert volume(delta) == Fraction(1, 2)


def test_blowup_of_projective_plane():
    record = blowup_at_vertex(projective_space(2), (0, 1), Fraction(1, 2))
    assert record.vertex == (0, 1)
    assert record.child.vertex_set() == as_vertices((0, 0), (1, 0), (0, "1/2"), ("1/2", "1/2"))
    assert record.child.facets[-1].normal == (0, -1)
    assert record.root is record.parent
    assert record.chain == (record,)


def test_blowup_chain():
    first = blowup_at_vertex(projective_space(2), (0, 1), Fraction(1, 2))
    second = blowup_at_vertex(first.child, (1, 0), Fraction(1, 4), ancestry=first.chain)
    assert second.root.same_as(projective_space(2))
    assert [r.eps for r in second.chain] == [Fraction(1, 2), Fraction(1, 4)]
    assert len(second.child.vertices) == 5
    assert second.child.facets[:3] == projective_space(2).facets


@pytest.mark.parametrize("eps", [0, 1, Fraction(3, 2), -1])
def test_blowup_rejects_eps_out_of_range(eps):
    with pytest.raises(ValidationError):
        blowup_at_vertex(projective_space(2), (0, 1), eps)


def test_blowup_rejects_non_vertex():
    with pytest.raises(ValidationError):
        blowup_at_vertex(projective_space(2), ("1/2", "1/2"), Fraction(1, 4))


def test_blowup_of_square_corner():
    square = build_polytope([((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)])
    child = blowup_at_vertex(square, (0, 0), Fraction(1, 3)).child
    assert len(child.vertices) == 5
    assert volume(child) == Fraction(17, 18)
    assert child.facets[-1].normal == (1, 1)


def test_example_4_2_matches_blowup():
    delta = example_4_2(3, Fraction(1, 4))
    assert len(delta.vertices) == 6
    assert delta.facets[-1].offset == Fraction(-3, 4)


def test_fixture_registry():
    assert fixture_names() == sorted(FIXTURES)
    assert set(FIXTURE_DESCRIPTIONS) == set(FIXTURES)
    assert set(PUBLISHED_VALUES) <= set(FIXTURES)
    for name in fixture_names():
        value = fixture(name)
        assert isinstance(value, DelzantPolytope) or isinstance(value[0], Fan)


def test_unknown_fixture():
    with pytest.raises(ValidationError):
        fixture("example_9_9")


def test_generic_weights():
    assert is_generic((1, 1, 1, 2))
    assert is_generic((Fraction(3, 2), 1, 1, 1, Fraction(4, 3)))
    assert not is_generic((1, 2, 3))
    assert not is_generic((1, 1, 1, 10, 7))


@pytest.mark.parametrize("alphas", [(1, 0, 2), (1, -1, 3), (1,) * (MAX_POLYGON_SIDES + 1)])
def test_polygon_weights_validation(alphas):
    with pytest.raises(ValidationError):
        PolygonWeights(alphas)


def test_non_generic_polygon_rejected():
    with pytest.raises(ValidationError):
        polygon_up_space((1, 2, 3))
    with pytest.raises(ValidationError):
        lambda_up_closed_form((1, 2, 3))


def test_up_space_equilateral_pentagon():
    alpha = (1, 1, 1, 1, 1)
    delta = polygon_up_space(alpha)
    assert delta.dim == 4
    assert not delta.pruned
    assert lambda_up_closed_form(alpha) == generic_lambda(delta) == 4


def test_up_space_with_pruning():
    alpha = (1, 1, 1, 2)
    delta = polygon_up_space(alpha)
    assert len(delta.pruned) == 3
    assert generic_lambda(delta) == 1
    assert lambda_up_closed_form(alpha) == 4
    with pytest.raises(ValidationError):
        polygon_up_space(alpha, prune=False)


def test_up_space_irredundant():
    alpha = (Fraction(3, 2), 1, 1, 1, Fraction(4, 3))
    delta = polygon_up_space(alpha, prune=False)
    assert len(delta.facets) == 9
    assert delta.dim == 4
    assert generic_lambda(delta) == lambda_up_closed_form(alpha) == 6


def test_apol_space_hexagon():
    alpha = (2, 2, 2, 1)
    delta = polygon_apol_space(alpha, prune=False)
    assert delta.dim == 2
    assert len(delta.vertices) == 6
    assert generic_lambda(delta) == lambda_apol_closed_form(alpha) == 7


def test_apol_space_redundant_template():
    with pytest.raises(ValidationError):
        polygon_apol_space((1, 1, 1, 1, 3), prune=False)


def polygon_lengths(min_sides, max_sides):
    return st.lists(st.integers(1, 12), min_size=min_sides, max_size=max_sides)


@settings(max_examples=25, deadline=None)
@given(polygon_lengths(4, 5))
def test_up_closed_form_matches_enumeration(alpha):
    assume(is_generic(alpha))
    assume(sum(alpha[:-1]) > alpha[-1])
    delta = polygon_up_space(alpha)
    if delta.pruned:
        assert not closed_form_applies(alpha, "up")
        with pytest.raises(ValidationError):
            closed_form(alpha, "up")
    else:
        assert closed_form_applies(alpha, "up")
        assert closed_form(alpha, "up") == lambda_up_closed_form(alpha) == generic_lambda(delta)


@settings(max_examples=25, deadline=None)
@given(polygon_lengths(4, 5))
def test_apol_closed_form_matches_enumeration(alpha):
    assume(is_generic(alpha))
    assume(alpha[-1] - alpha[-2] < sum(alpha[:-2]))
    delta = polygon_apol_space(alpha)
    if delta.pruned:
        assert not closed_form_applies(alpha, "apol")
        with pytest.raises(ValidationError):
            closed_form(alpha, "apol")
    else:
        assert closed_form(alpha, "apol") == lambda_apol_closed_form(alpha) == generic_lambda(delta)


@pytest.mark.parametrize("alpha,corrected,printed", [
    ((2, 2, 2, 1), 7, 5),
    ((8, 8, 9, 4), 29, 21),
    ((11, 4, 7, 12, 1), 48, 44),
])
def test_apol_printed_constraint_disagrees(alpha, corrected, printed):
    delta = polygon_apol_space(alpha, prune=False)
    assert generic_lambda(delta) == lambda_apol_closed_form(alpha) == corrected
    assert lambda_apol_printed_form(alpha) == printed


def test_closed_form_rejects_redundant_template():
    assert not closed_form_applies((1, 1, 1, 2), "up")
    with pytest.raises(ValidationError, match="冗余"):
        closed_form((1, 1, 1, 2), "up")
    assert closed_form_applies((2, 2, 2, 1), "apol")


def test_reduction_applies():
    alpha = (1, 1, 1, 12, 8)
    assert prop_5_3_applies(alpha)
    assert pol_reduction(alpha).alphas == (1, 1, 1, 4)


def test_reduction_rejects():
    assert not prop_5_3_applies((1, 1, 1, 1, 1))
    with pytest.raises(ValidationError):
        pol_reduction((1, 1, 1, 1, 1))
    with pytest.raises(ValidationError):
        pol_reduction((1, 1, 1, 10, 7))


def test_space_dispatch():
    assert polygon_space((2, 2, 2, 1), "apol").dim == 2
    assert closed_form((1, 1, 1, 1, 1), "up") == 4
    with pytest.raises(ValidationError):
        polygon_space((1, 1, 1, 1, 1), "pol")
    with pytest.raises(ValidationError):
        closed_form((1, 1, 1, 1, 1), "pol")
