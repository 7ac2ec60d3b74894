#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
JSON 文档
输入文档（多面体或扇，含爆破祖先记录）与报告文档的解析和渲染；
有理数一律写成 "p/q" 字符串，解析无损
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

try:
    from .capacity import CapacityReport, RelationVector
    from .constructions import blowup_at_vertex
    from .errors import ParseError, ValidationError
    from .fan import Fan, PrimitiveCollection, SupportFunction, WallRelation
    from .lattice import UnimodularMap, as_rational, format_rational
    from .packing import PackingCertificate
    from .polytope import DelzantPolytope, SimplexSpec, build_polytope
except ImportError:
    from capacity import CapacityReport, RelationVector
    from constructions import blowup_at_vertex
    from errors import ParseError, ValidationError
    from fan import Fan, PrimitiveCollection, SupportFunction, WallRelation
    from lattice import UnimodularMap, as_rational, format_rational
    from packing import PackingCertificate
    from polytope import DelzantPolytope, SimplexSpec, build_polytope

KINDS = ("polytope", "fan")


@dataclass(frozen=True)
class AncestryEntry:
    """一次爆破：父多面体的刻面个数、被爆破的顶点与 ε"""
    parent_facet_count: int
    vertex: Tuple[Fraction, ...]
    eps: Fraction


@dataclass
class InputDocument:
    kind: str
    dim: int
    facets: List[Tuple[Tuple[int, ...], Fraction]] = field(default_factory=list)
    generators: List[Tuple[int, ...]] = field(default_factory=list)
    max_cones: List[Tuple[int, ...]] = field(default_factory=list)
    support: List[Fraction] = field(default_factory=list)
    ancestry: List[AncestryEntry] = field(default_factory=list)
    fixture: Optional[str] = None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"{where}: 有理数必须写成整数或 \"p/q\" 字符串，得到 {value!r}")
    try:
        return as_rational(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{where}: 无法解析有理数 {value!r} ({e})") from None


def _integers(values, where: str) -> Tuple[int, ...]:
    if not isinstance(values, list) or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in values):
        raise ParseError(f"{where}: 需要整数数组，得到 {values!r}")
    return tuple(values)


def _rationals(values, where: str) -> Tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise ParseError(f"{where}: 需要数组，得到 {values!r}")
    return tuple(_rational(v, f"{where}[{i}]") for i, v in enumerate(values))


def _require(data: Dict, key: str, where: str = "文档"):
    if key not in data:
        raise ParseError(f"{where}缺少字段 {key!r}")
    return data[key]


def _load_json(text: str) -> Dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON 格式错误: {e}") from None
    if not isinstance(data, dict):
        raise ParseError("文档顶层必须是对象")
    return data


def document_from_dict(data: Dict) -> InputDocument:
    """
    校验字段并转换为 InputDocument

    Raises:
        ParseError: 缺字段、类型错误、有理数非法、维数或下标越界
    """
    kind = _require(data, "kind")
    if kind not in KINDS:
        raise ParseError(f"kind 必须是 {' 或 '.join(KINDS)}，得到 {kind!r}")
    dim = _require(data, "dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"dim 必须是正整数，得到 {dim!r}")
    doc = InputDocument(kind=kind, dim=dim, fixture=data.get("fixture"))

    if kind == "polytope":
        facets = _require(data, "facets")
        if not isinstance(facets, list):
            raise ParseError("facets 必须是数组")
        for k, facet in enumerate(facets):
            if not isinstance(facet, dict):
                raise ParseError(f"facets[{k}] 必须是对象")
            normal = _integers(_require(facet, "normal", f"facets[{k}] "), f"facets[{k}].normal")
            if len(normal) != dim:
                raise ParseError(f"facets[{k}].normal 的长度 {len(normal)} 与 dim = {dim} 不符")
            doc.facets.append((normal, _rational(_require(facet, "offset", f"facets[{k}] "),
                                                 f"facets[{k}].offset")))
    else:
        generators = _require(data, "generators")
        if not isinstance(generators, list):
            raise ParseError("generators 必须是数组")
        for k, u in enumerate(generators):
            u = _integers(u, f"generators[{k}]")
            if len(u) != dim:
                raise ParseError(f"generators[{k}] 的长度 {len(u)} 与 dim = {dim} 不符")
            doc.generators.append(u)
        cones = _require(data, "max_cones")
        if not isinstance(cones, list):
            raise ParseError("max_cones 必须是数组")
        for c, cone in enumerate(cones):
            cone = _integers(cone, f"max_cones[{c}]")
            if any(i < 0 or i >= len(doc.generators) for i in cone):
                raise ParseError(f"max_cones[{c}] 的下标越界: {list(cone)}")
            doc.max_cones.append(cone)
        doc.support = list(_rationals(_require(data, "support"), "support"))
        if len(doc.support) != len(doc.generators):
            raise ParseError(f"support 有 {len(doc.support)} 个值，生成元有 {len(doc.generators)} 个")

    ancestry = data.get("ancestry", [])
    if not isinstance(ancestry, list):
        raise ParseError("ancestry 必须是数组")
    for k, entry in enumerate(ancestry):
        if not isinstance(entry, dict):
            raise ParseError(f"ancestry[{k}] 必须是对象")
        count = _require(entry, "parent_facet_count", f"ancestry[{k}] ")
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise ParseError(f"ancestry[{k}].parent_facet_count 必须是正整数")
        doc.ancestry.append(AncestryEntry(
            count,
            _rationals(_require(entry, "vertex", f"ancestry[{k}] "), f"ancestry[{k}].vertex"),
            _rational(_require(entry, "eps", f"ancestry[{k}] "), f"ancestry[{k}].eps")))
    return doc


def parse_document(text: str) -> InputDocument:
    return document_from_dict(_load_json(text))


def document_to_dict(doc: InputDocument) -> Dict[str, Any]:
    data: Dict[str, Any] = {"kind": doc.kind, "dim": doc.dim}
    if doc.kind == "polytope":
        data["facets"] = [{"normal": list(normal), "offset": format_rational(offset)}
                          for normal, offset in doc.facets]
    else:
        data["generators"] = [list(u) for u in doc.generators]
        data["max_cones"] = [list(c) for c in doc.max_cones]
        data["support"] = [format_rational(v) for v in doc.support]
    if doc.ancestry:
        data["ancestry"] = [{"parent_facet_count": e.parent_facet_count,
                             "vertex": [format_rational(c) for c in e.vertex],
                             "eps": format_rational(e.eps)} for e in doc.ancestry]
    if doc.fixture is not None:
        data["fixture"] = doc.fixture
    return data


def render_document(doc: InputDocument) -> str:
    return dump(document_to_dict(doc))


def dump(data: Dict[str, Any]) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2)


def from_polytope(delta: DelzantPolytope, ancestry: Sequence[AncestryEntry] = (),
                  fixture: Optional[str] = None) -> InputDocument:
    return InputDocument(kind="polytope", dim=delta.dim,
                         facets=[(f.normal, f.offset) for f in delta.facets],
                         ancestry=list(ancestry), fixture=fixture)


def from_fan(fan: Fan, phi: SupportFunction, fixture: Optional[str] = None) -> InputDocument:
    return InputDocument(kind="fan", dim=fan.dim, generators=list(fan.generators),
                         max_cones=list(fan.max_cones), support=list(phi.values),
                         fixture=fixture)


def to_polytope(doc: InputDocument, prune: bool = False) -> DelzantPolytope:
    if doc.kind != "polytope":
        raise ParseError("需要 polytope 文档")
    return build_polytope(doc.facets, prune=prune)


def to_fan(doc: InputDocument) -> Tuple[Fan, SupportFunction]:
    if doc.kind != "fan":
        raise ParseError("需要 fan 文档")
    return Fan(tuple(doc.generators), tuple(doc.max_cones)), SupportFunction(tuple(doc.support))


def root_polytope(doc: InputDocument) -> Optional[DelzantPolytope]:
    """
    爆破链的根：当前刻面中的前 parent_facet_count 个

    从根开始按记录的顶点和 ε 重做每一次爆破，结果必须与文档的刻面一致

    Raises:
        ParseError: parent_facet_count 超出范围
        ValidationError: 重做的爆破与文档不符
    """
    if not doc.ancestry or doc.kind != "polytope":
        return None
    count = doc.ancestry[0].parent_facet_count
    if count > len(doc.facets):
        raise ParseError("ancestry 的 parent_facet_count 超过刻面个数")
    root = build_polytope(doc.facets[:count])
    current = root
    for k, entry in enumerate(doc.ancestry):
        if entry.parent_facet_count != len(current.facets):
            raise ValidationError(
                f"ancestry[{k}] 的 parent_facet_count = {entry.parent_facet_count}，"
                f"重做爆破时父多面体有 {len(current.facets)} 个刻面")
        current = blowup_at_vertex(current, entry.vertex, entry.eps).child
    if set(current.facets) != set(doc.facets):
        raise ValidationError("按 ancestry 重做的爆破与文档中的刻面不一致")
    return root


def parse_pieces(text: str) -> Tuple[InputDocument, List[Tuple[UnimodularMap, SimplexSpec]]]:
    """
    单形族文件：{"host": 多面体文档, "pieces": [{"matrix", "translation", "weights"}]}
    """
    data = _load_json(text)
    host = _require(data, "host")
    if not isinstance(host, dict):
        raise ParseError("host 必须是对象")
    doc = document_from_dict(host)
    raw = _require(data, "pieces")
    if not isinstance(raw, list) or not raw:
        raise ParseError("pieces 必须是非空数组")
    pieces = []
    for k, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ParseError(f"pieces[{k}] 必须是对象")
        matrix = _require(item, "matrix", f"pieces[{k}] ")
        if not isinstance(matrix, list):
            raise ParseError(f"pieces[{k}].matrix 必须是数组")
        rows = tuple(_integers(row, f"pieces[{k}].matrix") for row in matrix)
        translation = _rationals(_require(item, "translation", f"pieces[{k}] "),
                                 f"pieces[{k}].translation")
        weights = _rationals(_require(item, "weights", f"pieces[{k}] "), f"pieces[{k}].weights")
        if len(rows) != doc.dim or len(translation) != doc.dim or len(weights) != doc.dim:
            raise ParseError(f"pieces[{k}] 的维数与 host 不符")
        pieces.append((UnimodularMap(rows, translation), SimplexSpec(weights)))
    return doc, pieces


def map_to_dict(mapping: UnimodularMap) -> Dict[str, Any]:
    return {"matrix": [list(row) for row in mapping.matrix],
            "translation": [format_rational(c) for c in mapping.translation],
            "determinant": mapping.determinant}


def value_block(q: Fraction, factor: str, places: int = 6) -> Dict[str, Any]:
    """精确值、2π 标记与十进制渲染"""
    scale = 2 * math.pi if factor == "2π" else 1.0
    return {"value": format_rational(q), "factor": factor or "1",
            "decimal": f"{float(q) * scale:.{places}f}"}


def _relation(r: RelationVector) -> Dict[str, Any]:
    return {"coeffs": list(r.coeffs), "total": r.total, "value": format_rational(r.value)}


def witness_to_dict(witness) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    if isinstance(witness, PrimitiveCollection):
        return {"type": "primitive_collection", "indices": list(witness.indices),
                "target_cone": list(witness.target_cone),
                "coefficients": list(witness.coefficients), "degree": witness.degree}
    if isinstance(witness, WallRelation):
        return {"type": "wall", "wall": list(witness.wall), "flanks": list(witness.flanks),
                "relation": list(witness.relation_vector)}
    return {"type": "other", "text": str(witness)}


def report_to_dict(report: CapacityReport, diagnostics: Sequence[str] = (),
                   published: Sequence[str] = (), places: int = 6,
                   packing: Optional[PackingCertificate] = None) -> Dict[str, Any]:
    """
    报告文档；键顺序固定，见证按字典序，因而同一输入得到逐字节相同的输出
    """
    f = report.factor
    reflexive = None
    if report.reflexive is not None:
        reflexive = {"r": format_rational(report.reflexive.r),
                     "m": [format_rational(c) for c in report.reflexive.m]}
    width = None
    if report.width is not None:
        width = value_block(report.width.value, f, places)
        width["certificate"] = map_to_dict(report.width.map)
        width["certificate"]["simplex"] = [format_rational(w) for w in report.width.simplex.weights]
    lam = value_block(report.lambda_upper, f, places)
    lam["argmax"] = [_relation(r) for r in report.lambda_argmax]
    lam["cap"] = value_block(report.lambda_cap, f, places)
    ups = value_block(report.upsilon_upper, f, places)
    ups["argmin"] = _relation(report.upsilon_argmin)
    ups["has_zero_values"] = report.upsilon_has_zero_values
    ups["is_capacity_bound"] = report.upsilon_is_capacity_bound
    ancestor = None
    if report.ancestor_upsilon is not None:
        ancestor = value_block(report.ancestor_upsilon, f, places)
        ancestor["root_fano"] = bool(report.ancestor_fano)
        ancestor["is_capacity_bound"] = report.ancestor_is_capacity_bound

    data: Dict[str, Any] = {
        "kind": "report",
        "validation": {"valid": not diagnostics, "diagnostics": list(diagnostics)},
        "fano": {
            "fano": report.fano,
            "witness": witness_to_dict(report.fano_witness),
            "reflexive_normalization": reflexive,
            "reflexive_agrees": report.reflexive_agrees,
        },
        "capacity": {
            "normalization": report.normalization,
            "width_lower": width,
            "lambda": lam,
            "upsilon": ups,
            "ancestor_upsilon": ancestor,
            "best_upper": value_block(report.best_upper, f, places),
            "seshadri_upper": value_block(report.seshadri_upper, f, places),
            "sandwich_closed": report.sandwich_closed,
        },
        "notes": list(report.notes),
        "published_values": list(published),
    }
    if packing is not None:
        data["packing"] = packing_to_dict(packing, places)
    return data


def packing_to_dict(cert: PackingCertificate, places: int = 6) -> Dict[str, Any]:
    pieces = []
    for piece in cert.pieces:
        entry = map_to_dict(piece.map)
        entry["weights"] = [format_rational(w) for w in piece.simplex.weights]
        entry["ellipsoid"] = {
            "weights": [format_rational(a) for a in piece.ellipsoid.capacity_weights],
            "margin": format_rational(piece.ellipsoid.epsilon_margin),
            "radii": piece.ellipsoid.radii(),
        }
        pieces.append(entry)
    return {"pieces": pieces, "fraction": value_block(cert.fraction, "", places)}
