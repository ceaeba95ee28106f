"""
报表模块 - 谱序列页、同调表、极限比对转换为 pandas DataFrame，以及对齐文本输出
"""
from typing import Iterable

import pandas as pd

from .simplicial import HomologyTable
from .spectral import LimitReport, SpectralPage, SpectralRun


def page_frame(page: SpectralPage) -> pd.DataFrame:
    """
    谱序列页 → DataFrame

    行为瓦片位置 p（1..N），列为总次数 d = p + s，值为 dim E^r_{p, d-p}
    """
    degrees = sorted({p + s for (p, s) in page.entries}) or [0]
    top = max(degrees)
    data = {
        d: [page.entry(p, d - p) for p in range(1, page.length + 1)]
        for d in range(top + 1)
    }
    frame = pd.DataFrame(data, index=pd.Index(range(1, page.length + 1), name="p"))
    frame.columns.name = "degree"
    return frame


def homology_frame(table: HomologyTable) -> pd.DataFrame:
    """同调表 → DataFrame（每个次数一行：秩、挠系数、描述）"""
    rows = [
        {
            "degree": d,
            "rank": group.rank,
            "torsion": ",".join(str(t) for t in group.torsion),
            "group": group.describe(table.ring),
        }
        for d, group in enumerate(table.groups)
    ]
    return pd.DataFrame(rows, columns=["degree", "rank", "torsion", "group"])


def limit_frame(report: LimitReport) -> pd.DataFrame:
    """E^∞ 各次数总维数与真值比对"""
    degrees = sorted(set(report.limit) | set(report.oracle))
    totals = report.totals
    rows = [
        {
            "degree": d,
            "e_infinity": totals.get(d, 0),
            "oracle": report.oracle.get(d, 0),
            "match": totals.get(d, 0) == report.oracle.get(d, 0),
        }
        for d in degrees
    ]
    return pd.DataFrame(rows, columns=["degree", "e_infinity", "oracle", "match"])


def run_frames(run: SpectralRun) -> Iterable[tuple]:
    """
    一次谱序列计算的全部表格

    Yields:
        tuple: (表名, DataFrame)
    """
    prefix = "cohomology" if run.filtered.cohomological else "homology"
    for page in run.pages:
        yield f"{prefix}_E{page.r}", page_frame(page)
    yield f"{prefix}_Einf", page_frame(run.limit_page)
    yield f"{prefix}_limit", limit_frame(run.limit)


def render_text(frame: pd.DataFrame, title: str = "") -> str:
    """对齐文本表格，便于人工 diff"""
    body = frame.to_string()
    return f"{title}\n{body}\n" if title else body + "\n"
