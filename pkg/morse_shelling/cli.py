"""
命令行模块 - validate / quiver / shell / spectral / examples / homology 子命令

机器可读的报告（JSON）写到 stdout，日志写到 stderr。
退出码: 0 成功，1 否定的数学结论，2 无效铺砌，3 解析错误，4 用法错误。
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional, Tuple

from .config import (
    DEFAULT_HOMOLOGY_COEFFICIENT,
    DEFAULT_SPECTRAL_COEFFICIENT,
    EXAMPLE_NAMES,
    EXIT_INVALID,
    EXIT_NOT_SHELLABLE,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    EXIT_USAGE,
)
from .document import DocumentError, dump_document, load_document, tiling_to_document
from .generators import EXAMPLE_GENERATORS
from .quiver import (
    CycleCertificate,
    build_quiver,
    is_acyclic,
    partial_shellable,
    partial_shelling_filtration,
    shelling_order,
    to_dot,
)
from .reports import render_text, run_frames
from .simplicial import close_downward, cohomology, homology
from .spectral import SpectralError, betti_bound, first_page_vs_tiles, spectral_sequence
from .tiles import TileValidationError
from .tiling import InvalidTilingError, critical_index_counts, require_valid, underlying_complex, validate
from .utils import parse_coefficient, setup_logger

logger = logging.getLogger(__name__)

Result = Tuple[dict, int]


class UsageError(ValueError):
    """命令行参数在语义上不合法（退出码 4）"""


class CliArgumentParser(argparse.ArgumentParser):
    """参数错误时以退出码 4 退出（argparse 默认的 2 留给无效铺砌）"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ 参数错误: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _load_valid(path: str):
    tiling = load_document(path)
    return require_valid(tiling)


def _certificate_report(command: str, certificate: CycleCertificate, **extra) -> Result:
    logger.info("❌ 箭图有有向环: %s", " → ".join(f"t{v}" for v in certificate.vertices))
    report = {"command": command, "shellable": False, "certificate": certificate.to_dict()}
    report.update(extra)
    return report, EXIT_NOT_SHELLABLE


def cmd_validate(path: str) -> Result:
    """
    校验铺砌文档

    Returns:
        tuple: (报告, 退出码 0 / 2)
    """
    tiling = load_document(path)
    partition, closedness = validate(tiling)
    ok = partition.ok and closedness.ok
    report = {
        "command": "validate",
        "ok": ok,
        "tiles": len(tiling.tiles),
        "cells": len(tiling.space),
        "partition": partition.to_dict(),
        "closedness": closedness.to_dict(),
    }
    if ok:
        report["critical_indices"] = {str(k): v for k, v in critical_index_counts(tiling).items()}
        logger.info("✅ 铺砌有效: %d 个瓦片, %d 个单元", len(tiling.tiles), len(tiling.space))
    else:
        logger.info("❌ 铺砌无效")
    return report, EXIT_OK if ok else EXIT_INVALID


def cmd_quiver(path: str, dot: Optional[str] = None) -> Result:
    """
    导出箭图；dot 为输出文件路径（"-" 表示把 DOT 文本直接写到 stdout）
    """
    tiling = _load_valid(path)
    quiver = build_quiver(tiling)
    text = to_dot(quiver)
    report = {
        "command": "quiver",
        "quiver": quiver.to_dict(),
        "acyclic": is_acyclic(quiver) is True,
    }
    if dot == "-":
        return {"command": "quiver", "dot_text": text}, EXIT_OK
    if dot:
        directory = os.path.dirname(os.path.abspath(dot))
        os.makedirs(directory, exist_ok=True)
        with open(dot, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("✅ DOT 已写出到 %s", dot)
        report["dot"] = dot
    else:
        report["dot_text"] = text
    return report, EXIT_OK


def cmd_shell(path: str, order: Optional[int] = None) -> Result:
    """
    壳化判定；order 为 q 时做 q 阶部分壳化判定

    Returns:
        tuple: (报告, 0 可壳化 / 1 不可壳化并附环证书)
    """
    tiling = _load_valid(path)
    if order is None:
        result = shelling_order(tiling)
        if isinstance(result, CycleCertificate):
            return _certificate_report("shell", result)
        logger.info("✅ 可壳化，顺序 %s", list(result.order))
        return {"command": "shell", "shellable": True, "order": list(result.order)}, EXIT_OK

    if order < 0:
        raise UsageError(f"--order 必须非负: {order}")
    definition = partial_shellable(tiling, order)
    if definition is not True:
        return _certificate_report("shell", definition, q=order)
    partial = partial_shelling_filtration(tiling, order)
    if isinstance(partial, CycleCertificate):
        return _certificate_report("shell", partial, q=order, quiver="restricted")
    logger.info("✅ %d 阶部分可壳化，顺序 %s", order, list(partial.order.order))
    report = {"command": "shell", "shellable": True, "q": order}
    report.update(partial.to_dict())
    return report, EXIT_OK


def _parse_pages(pages: str):
    if pages == "auto":
        return "auto"
    try:
        value = int(pages)
    except ValueError:
        raise UsageError(f"--pages 应为非负整数或 auto: {pages}")
    if value < 0:
        raise UsageError(f"--pages 应为非负整数或 auto: {pages}")
    return value


def cmd_spectral(path: str, coeff: str = DEFAULT_SPECTRAL_COEFFICIENT, order: Optional[int] = None,
                 pages: str = "auto", tables: bool = False) -> Result:
    """
    计算同调与上同调谱序列并与真值比对

    Returns:
        tuple: (报告, 0 MATCH / 1 不可壳化或 MISMATCH)
    """
    try:
        ring = parse_coefficient(coeff)
    except ValueError as e:
        raise UsageError(str(e))
    if not ring.is_field:
        raise UsageError("谱序列只支持域系数: rational 或 mod:p")
    r_max = _parse_pages(pages)
    tiling = _load_valid(path)

    if order is None:
        shelling = shelling_order(tiling)
        if isinstance(shelling, CycleCertificate):
            return _certificate_report("spectral", shelling)
    else:
        if order < 0:
            raise UsageError(f"--order 必须非负: {order}")
        partial = partial_shelling_filtration(tiling, order)
        if isinstance(partial, CycleCertificate):
            return _certificate_report("spectral", partial, q=order)
        shelling = partial.order

    runs = {
        "homology": spectral_sequence(tiling, shelling, order, ring, False, r_max),
        "cohomology": spectral_sequence(tiling, shelling, order, ring, True, r_max),
    }
    if tables:
        for run in runs.values():
            for name, frame in run_frames(run):
                sys.stderr.write(render_text(frame, name))

    matches = all(run.limit.matches for run in runs.values())
    verdict = "MATCH" if matches else "MISMATCH"
    first_page = first_page_vs_tiles(tiling, shelling, order, ring)
    report = {
        "command": "spectral",
        "ring": str(ring),
        "order": shelling.to_dict(),
        "homology": runs["homology"].to_dict(),
        "cohomology": runs["cohomology"].to_dict(),
        "first_page": first_page.to_dict(),
        "betti_bound": betti_bound(tiling, ring, order).to_dict(),
        "verdict": verdict,
    }
    if matches:
        logger.info("✅ E^∞ 与真值一致（%s），退化页: 同调 %s / 上同调 %s", ring,
                    runs["homology"].degeneration_page, runs["cohomology"].degeneration_page)
    else:
        logger.warning("❌ E^∞ 与真值不一致（%s）", ring)
    return report, EXIT_OK if matches else EXIT_NOT_SHELLABLE


def cmd_examples(name: str, n: int = 2, out: Optional[str] = None) -> Result:
    """
    生成内置示例文档；不指定 out 时文档本身作为报告输出
    """
    generator = EXAMPLE_GENERATORS.get(name)
    if generator is None:
        raise UsageError(f"未知的示例: {name}（可选 {', '.join(EXAMPLE_GENERATORS)}）")
    if n < 0:
        raise UsageError(f"--n 必须非负: {n}")
    tiling, order = generator(n=n)
    if out is None:
        return tiling_to_document(tiling), EXIT_OK
    dump_document(tiling, out)
    report = {
        "command": "examples",
        "name": name,
        "out": out,
        "tiles": len(tiling.tiles),
        "order": list(order.order) if order is not None else None,
    }
    return report, EXIT_OK


def cmd_homology(path: str, coeff: str = DEFAULT_HOMOLOGY_COEFFICIENT) -> Result:
    """底层复形与被铺砌集合闭包的（上）同调表"""
    try:
        ring = parse_coefficient(coeff)
    except ValueError as e:
        raise UsageError(str(e))
    tiling = _load_valid(path)
    complex_ = underlying_complex(tiling)
    closure = close_downward(tiling.space.cells)
    report = {
        "command": "homology",
        "ring": str(ring),
        "underlying": {
            "f_vector": complex_.f_vector(),
            "euler_characteristic": complex_.euler_characteristic(),
            "homology": homology(complex_, ring).to_dict(),
            "cohomology": cohomology(complex_, ring).to_dict(),
        },
        "cell_set_closure": {
            "f_vector": closure.f_vector(),
            "homology": homology(closure, ring).to_dict(),
        },
    }
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(
        prog="morse_shelling",
        description="Morse 铺砌、壳化与谱序列计算",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="输出 DEBUG 日志")
    parser.add_argument("--log-file", default=None,
                        help='详细日志文件路径（"auto" 表示在 logs/ 下按时间戳命名）')
    sub = parser.add_subparsers(dest="command", parser_class=CliArgumentParser)
    sub.required = True

    p = sub.add_parser("validate", help="校验铺砌文档（划分 + 闭性）")
    p.add_argument("path")

    p = sub.add_parser("quiver", help="导出铺砌的箭图")
    p.add_argument("path")
    p.add_argument("--dot", default=None, help='DOT 输出文件（"-" 表示 stdout）')

    p = sub.add_parser("shell", help="壳化判定（--order q 为部分壳化）")
    p.add_argument("path")
    p.add_argument("--order", type=int, default=None)

    p = sub.add_parser("spectral", help="谱序列计算并与真值比对")
    p.add_argument("path")
    p.add_argument("--coeff", default=DEFAULT_SPECTRAL_COEFFICIENT, help="rational 或 mod:p")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--pages", default="auto", help="最大页码或 auto")
    p.add_argument("--tables", action="store_true", help="把各页表格以对齐文本写到 stderr")

    p = sub.add_parser("examples", help="生成内置示例文档")
    p.add_argument("name", choices=sorted(EXAMPLE_NAMES))
    p.add_argument("--n", type=int, default=2, help="boundary-delta 的维数 n")
    p.add_argument("--out", default=None, help="输出文件（缺省写到 stdout）")

    p = sub.add_parser("homology", help="底层复形的（上）同调")
    p.add_argument("path")
    p.add_argument("--coeff", default=DEFAULT_HOMOLOGY_COEFFICIENT, help="integer、rational 或 mod:p")
    return parser


def run(args: argparse.Namespace) -> Result:
    """按子命令分发，并把异常映射到退出码"""
    try:
        if args.command == "validate":
            return cmd_validate(args.path)
        if args.command == "quiver":
            return cmd_quiver(args.path, args.dot)
        if args.command == "shell":
            return cmd_shell(args.path, args.order)
        if args.command == "spectral":
            return cmd_spectral(args.path, args.coeff, args.order, args.pages, args.tables)
        if args.command == "examples":
            return cmd_examples(args.name, args.n, args.out)
        if args.command == "homology":
            return cmd_homology(args.path, args.coeff)
        raise UsageError(f"未知的子命令: {args.command}")
    except DocumentError as e:
        logger.error("❌ 文档解析失败: %s", e)
        return {"command": args.command, "error": e.to_dict()}, EXIT_PARSE_ERROR
    except TileValidationError as e:
        logger.error("❌ 瓦片不合法: %s", e)
        return {"command": args.command, "error": "invalid tile", "violations": e.violations}, EXIT_INVALID
    except InvalidTilingError as e:
        logger.error("❌ %s", e)
        report = {"command": args.command, "error": "invalid tiling",
                  "partition": e.partition.to_dict()}
        if e.closedness is not None:
            report["closedness"] = e.closedness.to_dict()
        return report, EXIT_INVALID
    except SpectralError as e:
        logger.error("❌ %s", e)
        return {"command": args.command, "error": str(e)}, EXIT_INVALID
    except UsageError as e:
        logger.error("❌ 参数错误: %s", e)
        return {"command": args.command, "error": str(e)}, EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logger("morse_shelling", verbose=args.verbose, log_file=args.log_file)
    report, code = run(args)
    if args.command == "quiver" and "dot_text" in report and args.dot == "-":
        sys.stdout.write(report["dot_text"])
    else:
        sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    return code
