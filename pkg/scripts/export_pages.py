"""
把铺砌文档的谱序列各页表格导出到 data/exports/（Excel 或 CSV）
"""
import argparse
import os
import sys
from datetime import date
from pathlib import Path

import pandas as pd

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from morse_shelling.config import EXPORTS_DIR
from morse_shelling.document import load_document
from morse_shelling.quiver import CycleCertificate, partial_shelling_filtration, shelling_order
from morse_shelling.reports import run_frames
from morse_shelling.spectral import spectral_sequence
from morse_shelling.tiling import require_valid
from morse_shelling.utils import parse_coefficient


def compute_frames(path, coeff="rational", order=None, pages="auto"):
    """
    计算同调与上同调谱序列的全部表格

    Args:
        path: 铺砌文档路径
        coeff: 系数（rational 或 mod:p）
        order: 部分壳化阶数 q（None 表示完整壳化）
        pages: 最大页码或 auto

    Returns:
        list: [(表名, DataFrame), ...]
    """
    ring = parse_coefficient(coeff)
    tiling = require_valid(load_document(path))
    if order is None:
        shelling = shelling_order(tiling)
    else:
        partial = partial_shelling_filtration(tiling, order)
        shelling = partial if isinstance(partial, CycleCertificate) else partial.order
    if isinstance(shelling, CycleCertificate):
        raise ValueError(f"铺砌不可壳化，有向环: {shelling.vertices}")

    r_max = pages if pages == "auto" else int(pages)
    frames = []
    for cohomological in (False, True):
        run = spectral_sequence(tiling, shelling, order, ring, cohomological, r_max)
        frames.extend(run_frames(run))
    return frames


def export_pages(path, fmt="xlsx", **options):
    """
    导出到 data/exports/，xlsx 时每张表一个工作表，csv 时每张表一个文件
    """
    exports_dir = Path(EXPORTS_DIR)
    exports_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{Path(path).stem}_pages_{date.today().isoformat()}"
    frames = compute_frames(path, **options)

    if fmt == "xlsx":
        output_file = exports_dir / f"{stem}.xlsx"
        with pd.ExcelWriter(output_file, engine='openpyxl') as writer:
            for name, frame in frames:
                frame.to_excel(writer, sheet_name=name[:31])
        print(f"✅ 成功将 {len(frames)} 张表导出到 {output_file}")
        return [output_file]

    written = []
    for name, frame in frames:
        output_file = exports_dir / f"{stem}_{name}.csv"
        frame.to_csv(output_file, encoding='utf-8-sig')
        written.append(output_file)
    print(f"✅ 成功将 {len(frames)} 张表导出到 {exports_dir}")
    return written


def main():
    parser = argparse.ArgumentParser(description='导出谱序列各页表格')
    parser.add_argument('path', help='铺砌文档（JSON）路径')
    parser.add_argument('--format', choices=['xlsx', 'csv'], default='xlsx', help='导出格式 (默认: xlsx)')
    parser.add_argument('--coeff', default='rational', help='系数: rational 或 mod:p')
    parser.add_argument('--order', type=int, default=None, help='部分壳化阶数 q')
    parser.add_argument('--pages', default='auto', help='最大页码或 auto')
    args = parser.parse_args()

    try:
        export_pages(args.path, args.format, coeff=args.coeff, order=args.order, pages=args.pages)
    except Exception as e:
        print(f"❌ 导出时发生错误: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
