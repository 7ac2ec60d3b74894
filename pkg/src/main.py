#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
环面辛容量工具 - 命令行入口
分析 Delzant 多面体或完备正则扇的容量上下界、顶点爆破、椭球填充证书与多边形空间
"""

import argparse
import json
import logging
import os
import sys
import traceback
from typing import Dict, List, Optional, Sequence

try:
    from .capacity import CapacityOptions, capacity_report, lambda_bound
    from .constructions import (FIXTURE_DESCRIPTIONS, PUBLISHED_VALUES, blowup_at_vertex,
                                closed_form, fixture, fixture_names, lambda_apol_printed_form,
                                pol_reduction, polygon_space, prop_5_3_applies)
    from .document import (AncestryEntry, dump, from_fan, from_polytope, packing_to_dict,
                           parse_document, parse_pieces, render_document, report_to_dict,
                           root_polytope, to_fan, to_polytope, value_block)
    from .errors import HilbertBasisIncomplete, ParseError, ToricError, ValidationError
    from .fan import normal_fan, polytope_from_support, validate_fan
    from .lattice import as_rational, format_rational
    from .packing import maximal_separating_groups, theorem_6_4_certificate, verify_general_packing
except ImportError:
    from capacity import CapacityOptions, capacity_report, lambda_bound
    from constructions import (FIXTURE_DESCRIPTIONS, PUBLISHED_VALUES, blowup_at_vertex,
                               closed_form, fixture, fixture_names, lambda_apol_printed_form,
                               pol_reduction, polygon_space, prop_5_3_applies)
    from document import (AncestryEntry, dump, from_fan, from_polytope, packing_to_dict,
                          parse_document, parse_pieces, render_document, report_to_dict,
                          root_polytope, to_fan, to_polytope, value_block)
    from errors import HilbertBasisIncomplete, ParseError, ToricError, ValidationError
    from fan import normal_fan, polytope_from_support, validate_fan
    from lattice import as_rational, format_rational
    from packing import maximal_separating_groups, theorem_6_4_certificate, verify_general_packing


class Colors:
    """ANSI颜色代码"""
    RESET = '\033[0m'
    BOLD = '\033[1m'
    DIM = '\033[2m'

    RED = '\033[31m'
    GREEN = '\033[32m'
    YELLOW = '\033[33m'
    BLUE = '\033[34m'
    MAGENTA = '\033[35m'
    CYAN = '\033[36m'

    BRIGHT_GREEN = '\033[92m'
    BRIGHT_YELLOW = '\033[93m'
    BRIGHT_CYAN = '\033[96m'


class ColorFormatter(logging.Formatter):
    """按日志级别着色的格式化器"""

    LEVEL_COLORS = {
        logging.DEBUG: Colors.DIM,
        logging.INFO: Colors.CYAN,
        logging.WARNING: Colors.YELLOW,
        logging.ERROR: Colors.RED,
        logging.CRITICAL: Colors.RED + Colors.BOLD,
    }

    def __init__(self, use_color: bool = True):
        super().__init__("%(levelname)s %(name)s: %(message)s")
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        if not self.use_color:
            return text
        return f"{self.LEVEL_COLORS.get(record.levelno, '')}{text}{Colors.RESET}"


EXIT_OK = 0
EXIT_PARSE = 1
EXIT_VALIDATION = 2


class UsageParser(argparse.ArgumentParser):
    """用法错误统一走退出码 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(f"用法错误: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="只输出机器可读的 JSON")
    common.add_argument("--search-budget", type=int, default=None, help="幺模搜索的元素上界")
    common.add_argument("--norm-cap", type=int, default=None, help="Hilbert 基补全的分量上界")
    common.add_argument("--prune", action="store_true", default=None, help="丢弃冗余刻面")
    common.add_argument("--strict-sl", action="store_true", default=None, help="要求证书 det = +1")
    common.add_argument("--config-dir", default=None, help="配置目录")
    common.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    common.add_argument("--no-color", action="store_true", help="关闭彩色输出")

    parser = UsageParser(prog="toric-capacity", description="环面辛流形的容量上下界计算")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageParser)

    analyze = sub.add_parser("analyze", parents=[common], help="完整分析报告")
    analyze.add_argument("file", nargs="?", help="多面体或扇的 JSON 文档")
    analyze.add_argument("--fixture", choices=fixture_names(), help="使用内置算例")

    blowup = sub.add_parser("blowup", parents=[common], help="在顶点处爆破")
    blowup.add_argument("file")
    blowup.add_argument("--vertex", required=True, help="顶点坐标，如 0,1")
    blowup.add_argument("--eps", required=True, help="ε，如 1/2")
    blowup.add_argument("--output", help="写入文件而不是标准输出")

    pack = sub.add_parser("pack", parents=[common], help="椭球填充证书")
    pack.add_argument("file", nargs="?")
    pack.add_argument("--fixture", choices=fixture_names())
    pack.add_argument("--vertices", help="以分号分隔的顶点，如 1/2,3/2;5/2,7/3")
    pack.add_argument("--eps", default="1/100", help="椭球半径边距 ε")
    pack.add_argument("--verify", metavar="PIECES", help="校验单形族文件")
    pack.add_argument("--groups", action="store_true", help="列出极大单形分离顶点组")

    polygon = sub.add_parser("polygon", parents=[common], help="多边形空间")
    polygon.add_argument("--alpha", required=True, help="边长，如 1,1,1,2")
    polygon.add_argument("--space", choices=("up", "apol"), default="up")
    polygon.add_argument("--output")

    sub.add_parser("fixtures", parents=[common], help="列出内置算例")
    return parser


def parse_vector(text: str) -> tuple:
    try:
        return tuple(as_rational(c) for c in text.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"无法解析坐标 {text!r}: {e}") from None


def parse_rational(text: str):
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"无法解析有理数 {text!r}: {e}") from None


class ToricCapacityApp:
    """命令行应用：配置、日志与各子命令"""

    def __init__(self, config_dir: str = None):
        self.config_dir = config_dir or os.path.join(os.path.dirname(__file__), '..', 'config')
        self.config = self._load_config()
        self.use_color = bool(self.config.get("color", True))
        self.json_output = False

    def _load_config(self) -> Dict:
        """加载配置文件"""
        config_file = os.path.join(self.config_dir, 'config.json')
        default_config = {
            "search_budget": 3,
            "norm_cap": 50,
            "prune": False,
            "strict_sl": False,
            "width_max_candidates": 200000,
            "decimal_places": 6,
            "color": True,
            "log_level": "WARNING",
        }

        try:
            if os.path.exists(config_file):
                with open(config_file, 'r', encoding='utf-8') as f:
                    user_config = json.load(f)
                default_config.update(user_config)
        except Exception as e:
            print(f"{Colors.YELLOW}警告: 加载配置文件失败，使用默认配置: {e}{Colors.RESET}",
                  file=sys.stderr)

        return default_config

    def setting(self, args, name: str):
        """命令行参数 > 配置文件 > 默认值"""
        value = getattr(args, name, None)
        return self.config.get(name) if value is None else value

    def options(self, args) -> CapacityOptions:
        return CapacityOptions(
            search_budget=int(self.setting(args, "search_budget")),
            norm_cap=int(self.setting(args, "norm_cap")),
            strict_sl=bool(self.setting(args, "strict_sl")),
            width_max_candidates=int(self.config.get("width_max_candidates", 200000)),
        )

    def setup_logging(self, verbose: bool):
        level = logging.DEBUG if verbose else getattr(
            logging, str(self.config.get("log_level", "WARNING")).upper(), logging.WARNING)
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(ColorFormatter(self.use_color))
        root = logging.getLogger()
        root.handlers = [handler]
        root.setLevel(level)

    def paint(self, text: str, color: str) -> str:
        return f"{color}{text}{Colors.RESET}" if self.use_color else text

    def emit(self, data: Dict):
        print(dump(data))

    def error(self, message: str, diagnostics: Optional[List[str]] = None):
        print(self.paint(message, Colors.RED), file=sys.stderr)
        for d in diagnostics or []:
            print(self.paint(f"  - {d}", Colors.RED), file=sys.stderr)

    def load_input(self, args):
        """读入文件或内置算例，返回 (文档, 已发表值说明)"""
        name = getattr(args, "fixture", None)
        if name:
            obj = fixture(name)
            if isinstance(obj, tuple):
                doc = from_fan(*obj, fixture=name)
            else:
                doc = from_polytope(obj, fixture=name)
            return doc, PUBLISHED_VALUES.get(name, [])
        if not args.file:
            raise ParseError("需要输入文件或 --fixture")
        try:
            with open(args.file, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ParseError(f"无法读取 {args.file}: {e}") from None
        doc = parse_document(text)
        return doc, PUBLISHED_VALUES.get(doc.fixture, []) if doc.fixture else []

    def polytope_of(self, doc, args):
        if doc.kind == "polytope":
            return to_polytope(doc, prune=bool(self.setting(args, "prune")))
        fan, phi = self.valid_fan(doc)
        return polytope_from_support(fan, phi)

    def valid_fan(self, doc):
        fan, phi = to_fan(doc)
        diag = validate_fan(fan)
        if not diag.valid:
            raise ValidationError("扇不是完备正则扇", diag.violations)
        return fan, phi

    def cmd_analyze(self, args) -> int:
        doc, published = self.load_input(args)
        options = self.options(args)
        if doc.kind == "polytope":
            delta = to_polytope(doc, prune=bool(self.setting(args, "prune")))
            report = capacity_report(delta, options, ancestor=root_polytope(doc))
            if delta.pruned:
                report.notes.append(f"丢弃了 {len(delta.pruned)} 个冗余刻面")
        else:
            report = capacity_report(self.valid_fan(doc), options)
        data = report_to_dict(report, published=published,
                              places=int(self.config.get("decimal_places", 6)))
        if self.json_output:
            self.emit(data)
        else:
            self.print_report(data)
        return EXIT_OK

    def cmd_blowup(self, args) -> int:
        doc, _ = self.load_input(args)
        delta = self.polytope_of(doc, args)
        record = blowup_at_vertex(delta, parse_vector(args.vertex), parse_rational(args.eps))
        ancestry = list(doc.ancestry) if doc.kind == "polytope" else []
        ancestry.append(AncestryEntry(len(delta.facets), record.vertex, record.eps))
        self.write(render_document(from_polytope(record.child, ancestry)), args.output)
        return EXIT_OK

    def cmd_pack(self, args) -> int:
        places = int(self.config.get("decimal_places", 6))
        if args.verify:
            try:
                with open(args.verify, 'r', encoding='utf-8') as f:
                    host_doc, pieces = parse_pieces(f.read())
            except OSError as e:
                raise ParseError(f"无法读取 {args.verify}: {e}") from None
            cert = verify_general_packing(self.polytope_of(host_doc, args), pieces,
                                          strict_sl=bool(self.setting(args, "strict_sl")))
            self.show_packing(packing_to_dict(cert, places))
            return EXIT_OK

        doc, published = self.load_input(args)
        delta = self.polytope_of(doc, args)
        if args.groups:
            groups = maximal_separating_groups(delta)
            data = {"groups": [[[format_rational(c) for c in v] for v in g] for g in groups]}
            if self.json_output:
                self.emit(data)
            else:
                for g in data["groups"]:
                    print("  " + self.paint(" ".join("(" + ",".join(v) + ")" for v in g), Colors.CYAN))
            return EXIT_OK
        if not args.vertices or not args.vertices.strip():
            raise ParseError("--vertices 不能为空")
        vertices = [parse_vector(v) for v in args.vertices.split(";") if v.strip()]
        cert = theorem_6_4_certificate(delta, vertices, parse_rational(args.eps))
        self.show_packing(packing_to_dict(cert, places), published)
        return EXIT_OK

    def show_packing(self, data: Dict, published: Sequence[str] = ()):
        if self.json_output:
            self.emit({"kind": "report", "packing": data, "published_values": list(published)})
            return
        print(self.paint("填充证书", Colors.BRIGHT_CYAN))
        for k, piece in enumerate(data["pieces"]):
            print(f"  [{k}] 矩阵 {piece['matrix']} 平移 ({', '.join(piece['translation'])})")
            print(f"      权重 ({', '.join(piece['weights'])})  半径 {', '.join(piece['ellipsoid']['radii'])}")
        fraction = data["fraction"]
        print(f"  填充比例: {self.paint(fraction['value'], Colors.GREEN)} ≈ {fraction['decimal']}")
        for note in published:
            print(self.paint(f"  注: {note}", Colors.YELLOW))

    def cmd_polygon(self, args) -> int:
        alpha = parse_vector(args.alpha)
        delta = polygon_space(alpha, args.space, prune=True)
        generic = lambda_bound(*normal_fan(delta)).value
        places = int(self.config.get("decimal_places", 6))
        reduction = {"applies": prop_5_3_applies(alpha), "alpha": None}
        if reduction["applies"]:
            reduction["alpha"] = [format_rational(a) for a in pol_reduction(alpha).alphas]
        block = {
            "space": args.space,
            "alpha": [format_rational(a) for a in alpha],
            "closed_form": None,
            "closed_form_applicable": not delta.pruned,
            "generic_lambda": value_block(generic, "", places),
            "agreement": None,
            "printed_form": None,
            "printed_agrees": None,
            "pruned_facets": len(delta.pruned),
            "pol_reduction": reduction,
        }
        if block["closed_form_applicable"]:
            exact = closed_form(alpha, args.space)
            block["closed_form"] = value_block(exact, "", places)
            block["agreement"] = exact == generic
            if args.space == "apol":
                printed = lambda_apol_printed_form(alpha)
                block["printed_form"] = value_block(printed, "", places)
                block["printed_agrees"] = printed == generic
        text = render_document(from_polytope(delta))
        if args.output:
            self.write(text, args.output)
        if self.json_output:
            self.emit({"document": json.loads(text), "closed_form": block})
        else:
            print(self.paint(f"多边形空间 ({args.space})", Colors.BRIGHT_CYAN))
            print(f"  一般算法 Λ: {block['generic_lambda']['value']}")
            if block["closed_form_applicable"]:
                flag = self.paint("一致", Colors.GREEN) if block["agreement"] else self.paint("不一致", Colors.YELLOW)
                print(f"  闭式 Λ: {block['closed_form']['value']}  {flag}")
            else:
                print(self.paint(f"  闭式不适用：模板含 {len(delta.pruned)} 个冗余刻面（已丢弃）",
                                 Colors.YELLOW))
            if block["printed_form"] is not None and not block["printed_agrees"]:
                print(self.paint(f"  注: 已发表约束给出 {block['printed_form']['value']}，与一般算法不一致",
                                 Colors.YELLOW))
            if reduction["applies"]:
                print(f"  约化为 APol({', '.join(reduction['alpha'])})")
            else:
                print("  约化条件不成立")
            if not args.output:
                print(text)
        return EXIT_OK

    def cmd_fixtures(self, args) -> int:
        if self.json_output:
            self.emit({"fixtures": {name: FIXTURE_DESCRIPTIONS[name] for name in fixture_names()}})
        else:
            for name in fixture_names():
                print(f"  {self.paint(name, Colors.CYAN):<24} {FIXTURE_DESCRIPTIONS[name]}")
        return EXIT_OK

    def write(self, text: str, output: Optional[str]):
        if output:
            with open(output, 'w', encoding='utf-8') as f:
                f.write(text + "\n")
            if not self.json_output:
                print(self.paint(f"已写入 {output}", Colors.GREEN), file=sys.stderr)
        else:
            print(text)

    def print_report(self, data: Dict):
        """彩色的人类可读报告"""
        cap = data["capacity"]
        unit = "×2π" if cap["normalization"] == "polytope-2π" else ""
        line = self.paint("=" * 60, Colors.BRIGHT_CYAN)
        print(line)
        print(self.paint(f"容量报告（{cap['normalization']}）", Colors.BOLD))
        print(line)
        fano = data["fano"]
        print(f"Fano: {self.paint(str(fano['fano']), Colors.GREEN if fano['fano'] else Colors.YELLOW)}")
        if fano["witness"]:
            print(f"  非正次数本原集合: {fano['witness']['indices']} 次数 {fano['witness']['degree']}")
        if fano["reflexive_normalization"]:
            r = fano["reflexive_normalization"]
            print(f"  自反规范化: r = {r['r']}, m = ({', '.join(r['m'])})")

        def show(label, block):
            if block is None:
                return
            print(f"{label:<12} {self.paint(block['value'], Colors.GREEN)}{unit}  ≈ {block['decimal']}")

        show("宽度下界", cap["width_lower"])
        show("Λ", cap["lambda"])
        show("Υ", cap["upsilon"])
        if not cap["upsilon"]["is_capacity_bound"]:
            print(self.paint("  Υ 不是容量上界（非 Fano）", Colors.YELLOW))
        show("祖先 Υ", cap["ancestor_upsilon"])
        show("Seshadri", cap["seshadri_upper"])
        closed = cap["sandwich_closed"]
        print(f"三明治闭合: {self.paint(str(closed), Colors.GREEN if closed else Colors.YELLOW)}")
        for note in data["notes"] + data["published_values"]:
            print(self.paint(f"  注: {note}", Colors.YELLOW))

    def run(self, args) -> int:
        """执行子命令并映射退出码"""
        self.json_output = bool(args.json)
        if args.no_color or args.json:
            self.use_color = False
        self.setup_logging(args.verbose)
        handler = getattr(self, f"cmd_{args.command}")
        try:
            return handler(args)
        except ParseError as e:
            self.error(f"解析错误: {e}")
            return EXIT_PARSE
        except HilbertBasisIncomplete as e:
            self.error(f"Hilbert 基不完整: {e.message}", [f"已找到 {len(e.partial)} 个元素（不可用）"])
            return EXIT_VALIDATION
        except ValidationError as e:
            self.error(f"校验失败: {e.message}", e.diagnostics)
            return EXIT_VALIDATION
        except ToricError as e:
            self.error(str(e))
            return EXIT_VALIDATION


def main(argv: Optional[List[str]] = None):
    """主函数"""
    try:
        parser = build_parser()
        try:
            args = parser.parse_args(argv)
        except ParseError as e:
            print(f"{Colors.RED}{e}{Colors.RESET}", file=sys.stderr)
            sys.exit(EXIT_PARSE)
        app = ToricCapacityApp(args.config_dir)
        code = app.run(args)
    except KeyboardInterrupt:
        print(f"\n{Colors.BRIGHT_YELLOW}👋 程序退出！{Colors.RESET}", file=sys.stderr)
        code = EXIT_PARSE
    except Exception as e:
        print(f"{Colors.RED}程序异常: {e}{Colors.RESET}", file=sys.stderr)
        traceback.print_exc()
        code = EXIT_PARSE
    sys.exit(code)


if __name__ == "__main__":
    main()
