#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
JSON 文档测试
输入文档的解析与校验、祖先记录、单形族文件和报告渲染
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent / "src"))

from capacity import CapacityOptions, capacity_report
from constructions import (REMARK_1_5_VERTICES, blowup_at_vertex, example_4_1,
                           projective_space, remark_1_5)
from document import (AncestryEntry, InputDocument, document_from_dict, document_to_dict, dump,
                      from_fan, from_polytope, packing_to_dict, parse_document, parse_pieces,
                      render_document, report_to_dict, root_polytope, to_fan, to_polytope,
                      value_block, witness_to_dict)
from errors import ParseError, ValidationError
from fan import primitive_collections
from packing import theorem_6_4_certificate

FAST = CapacityOptions(search_budget=1, width_max_candidates=20000)

CP2_TEXT = json.dumps({
    "kind": "polytope", "dim": 2,
    "facets": [{"normal": [1, 0], "offset": 0}, {"normal": [0, 1], "offset": "0"},
               {"normal": [-1, -1], "offset": "-1"}],
})


def polytope_dict(**changes):
    data = json.loads(CP2_TEXT)
    data.update(changes)
    return data


def test_parse_polytope_document():
    doc = parse_document(CP2_TEXT)
    assert doc.kind == "polytope"
    assert doc.facets[2] == ((-1, -1), Fraction(-1))
    assert to_polytope(doc).same_as(projective_space(2))


def test_parse_fan_document():
    fan, phi = example_4_1()
    doc = parse_document(render_document(from_fan(fan, phi, fixture="example_4_1")))
    assert doc.fixture == "example_4_1"
    assert to_fan(doc) == (fan, phi)


@pytest.mark.parametrize("text", ["{", "[1, 2]", "\"polytope\""])
def test_malformed_json(text):
    with pytest.raises(ParseError):
        parse_document(text)


@pytest.mark.parametrize("data", [
    {"dim": 2, "facets": []},
    polytope_dict(kind="cube"),
    polytope_dict(dim=0),
    polytope_dict(dim=True),
    polytope_dict(facets=[{"normal": [1, 0], "offset": 0.5}]),
    polytope_dict(facets=[{"normal": [1, 0], "offset": "1/0"}]),
    polytope_dict(facets=[{"normal": [1, 0, 0], "offset": 0}]),
    polytope_dict(facets=[{"normal": [1, "0"], "offset": 0}]),
    polytope_dict(facets=[{"offset": 0}]),
    polytope_dict(facets={"normal": [1, 0]}),
    polytope_dict(ancestry=[{"parent_facet_count": 0, "vertex": [0, 1], "eps": "1/2"}]),
    polytope_dict(ancestry=[{"parent_facet_count": 3, "vertex": [0, 1]}]),
    {"kind": "fan", "dim": 1, "generators": [[1], [-1]], "max_cones": [[0], [2]], "support": [0, 1]},
    {"kind": "fan", "dim": 1, "generators": [[1], [-1]], "max_cones": [[0], [1]], "support": [0]},
])
def test_invalid_documents(data):
    with pytest.raises(ParseError):
        document_from_dict(data)


def test_to_polytope_requires_kind():
    doc = from_fan(*example_4_1())
    with pytest.raises(ParseError):
        to_polytope(doc)
    with pytest.raises(ParseError):
        to_fan(parse_document(CP2_TEXT))


def test_ancestry_round_trip_and_root():
    record = blowup_at_vertex(projective_space(2), (0, 1), Fraction(1, 2))
    entry = AncestryEntry(len(record.parent.facets), record.vertex, record.eps)
    doc = parse_document(render_document(from_polytope(record.child, [entry])))
    assert doc.ancestry == [entry]
    assert root_polytope(doc).same_as(projective_space(2))
    assert root_polytope(parse_document(CP2_TEXT)) is None


def test_root_polytope_rejects_bad_count():
    doc = parse_document(CP2_TEXT)
    doc.ancestry = [AncestryEntry(9, (Fraction(0), Fraction(1)), Fraction(1, 2))]
    with pytest.raises(ParseError):
        root_polytope(doc)


def test_root_polytope_replays_chain():
    first = blowup_at_vertex(projective_space(2), (0, 1), Fraction(1, 2))
    second = blowup_at_vertex(first.child, (1, 0), Fraction(1, 4), ancestry=first.chain)
    entries = [AncestryEntry(len(r.parent.facets), r.vertex, r.eps) for r in second.chain]
    doc = parse_document(render_document(from_polytope(second.child, entries)))
    assert root_polytope(doc).same_as(projective_space(2))


@pytest.mark.parametrize("vertex,eps,count", [
    ((0, 1), Fraction(1, 4), 3),
    ((1, 0), Fraction(1, 2), 3),
    ((0, 1), Fraction(1, 2), 2),
])
def test_root_polytope_rejects_tampered_ancestry(vertex, eps, count):
    record = blowup_at_vertex(projective_space(2), (0, 1), Fraction(1, 2))
    entry = AncestryEntry(count, tuple(Fraction(c) for c in vertex), eps)
    doc = parse_document(render_document(from_polytope(record.child, [entry])))
    with pytest.raises(ValidationError):
        root_polytope(doc)


def test_rationals_render_as_strings():
    data = document_to_dict(from_polytope(remark_1_5()))
    assert data["facets"][0] == {"normal": [1, 0], "offset": "1/2"}
    assert "ancestry" not in data
    assert "fixture" not in data


@st.composite
def documents(draw):
    dim = draw(st.integers(1, 3))
    rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9))
    facets = draw(st.lists(st.tuples(st.tuples(*[st.integers(-3, 3)] * dim), rationals),
                           min_size=1, max_size=6))
    ancestry = draw(st.lists(st.builds(AncestryEntry, st.integers(1, 8),
                                       st.tuples(*[rationals] * dim), rationals), max_size=2))
    return InputDocument(kind="polytope", dim=dim, facets=facets, ancestry=ancestry,
                         fixture=draw(st.none() | st.sampled_from(["remark_1_5", "example_4_2"])))


@settings(max_examples=30)
@given(documents())
def test_document_text_is_lossless(doc):
    assert parse_document(render_document(doc)) == doc


def test_parse_pieces():
    text = json.dumps({
        "host": json.loads(CP2_TEXT),
        "pieces": [{"matrix": [[1, 0], [0, 1]], "translation": [0, 0], "weights": ["1/3", "1/3"]},
                   {"matrix": [[-1, -1], [0, 1]], "translation": [1, 0], "weights": ["1/3", "1/3"]}],
    })
    doc, pieces = parse_pieces(text)
    assert doc.dim == 2
    assert len(pieces) == 2
    mapping, simplex = pieces[1]
    assert mapping.columns == ((-1, 0), (-1, 1))
    assert simplex.weights == (Fraction(1, 3), Fraction(1, 3))


@pytest.mark.parametrize("data", [
    {"pieces": []},
    {"host": json.loads(CP2_TEXT), "pieces": []},
    {"host": json.loads(CP2_TEXT), "pieces": [{"matrix": [[1]], "translation": [0], "weights": [1]}]},
    {"host": json.loads(CP2_TEXT), "pieces": [{"matrix": [[1, 0], [0, 1]], "weights": [1, 1]}]},
])
def test_parse_pieces_errors(data):
    with pytest.raises(ParseError):
        parse_pieces(json.dumps(data))


def test_value_block():
    assert value_block(Fraction(1, 2), "2π", 4) == {"value": "1/2", "factor": "2π", "decimal": "3.1416"}
    assert value_block(Fraction(1, 2), "", 4) == {"value": "1/2", "factor": "1", "decimal": "0.5000"}


def test_witness_to_dict():
    fan, _ = example_4_1()
    witness = witness_to_dict(primitive_collections(fan)[0])
    assert witness == {"type": "primitive_collection", "indices": [0, 1], "target_cone": [5],
                       "coefficients": [2], "degree": 0}
    assert witness_to_dict(None) is None


def test_report_document():
    report = capacity_report(remark_1_5(), FAST)
    data = report_to_dict(report, published=["已发表值不同"], places=3)
    assert list(data) == ["kind", "validation", "fano", "capacity", "notes", "published_values"]
    cap = data["capacity"]
    assert cap["normalization"] == "polytope-2π"
    assert cap["lambda"]["value"] == "23/6"
    assert cap["lambda"]["argmax"] == [{"coeffs": [0, 1, 0, 1, 1, 0, 0], "total": 3, "value": "23/6"}]
    assert cap["lambda"]["cap"]["value"] == "15/2"
    assert cap["upsilon"]["is_capacity_bound"] is False
    assert cap["ancestor_upsilon"] is None
    assert data["fano"]["fano"] is False
    assert data["published_values"] == ["已发表值不同"]
    assert data["validation"] == {"valid": True, "diagnostics": []}


def test_report_rendering_is_deterministic():
    first = dump(report_to_dict(capacity_report(example_4_1(), FAST)))
    second = dump(report_to_dict(capacity_report(example_4_1(), FAST)))
    assert first == second
    assert json.loads(first)["capacity"]["normalization"] == "fan-normalized"


def test_packing_document():
    q = REMARK_1_5_VERTICES
    cert = theorem_6_4_certificate(remark_1_5(), [q["q1"], q["q3"], q["q5"]], Fraction(1, 100))
    data = packing_to_dict(cert)
    assert data["fraction"]["value"] == "31/71"
    assert len(data["pieces"]) == 3
    assert data["pieces"][0]["ellipsoid"]["margin"] == "1/100"
