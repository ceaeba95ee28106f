"""
工具函数模块
"""
import logging
import os
import sys
from datetime import datetime
from typing import Optional

from .config import LOG_DIR
from .simplicial import CoefficientRing


CONSOLE_FORMAT = '%(levelname)-8s | %(message)s'
DETAILED_FORMAT = '%(asctime)s.%(msecs)03d | %(levelname)-8s | %(message)s'


def setup_logger(name: str, verbose: bool = False, log_file: Optional[str] = None) -> logging.Logger:
    """
    设置日志记录器（控制台 + 可选的详细文件日志）

    Args:
        name: 日志记录器名称
        verbose: 控制台是否输出 DEBUG 信息
        log_file: 详细日志文件路径；传 "auto" 时在 logs/ 下按时间戳命名

    Returns:
        logging.Logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)

    # 避免重复添加handler
    if not logger.handlers:
        # 控制台handler - 写 stderr，stdout 留给机器可读的报告
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(logging.DEBUG if verbose else logging.INFO)
        console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
        logger.addHandler(console_handler)

        if log_file:
            if log_file == "auto":
                os.makedirs(LOG_DIR, exist_ok=True)
                log_file = os.path.join(
                    LOG_DIR, f'morse_shelling_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log')
            # 文件handler - 记录所有详细信息
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(DETAILED_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
            logger.addHandler(file_handler)

    return logger


def parse_coefficient(text: str) -> CoefficientRing:
    """
    解析命令行的系数参数

    Args:
        text: 'integer'、'rational' 或 'mod:p'（p 为素数）

    Returns:
        CoefficientRing

    Raises:
        ValueError: 无法识别或 p 不是素数
    """
    value = str(text).strip().lower()
    if value in ("integer", "integers", "z"):
        return CoefficientRing.integers()
    if value in ("rational", "rationals", "q"):
        return CoefficientRing.rationals()
    if value.startswith("mod:"):
        try:
            p = int(value[4:])
        except ValueError:
            raise ValueError(f"无法解析的模数: {text}")
        return CoefficientRing.prime_field(p)
    raise ValueError(f"未知的系数: {text}（可选 integer / rational / mod:p）")


def format_cells(cells) -> list:
    """把单纯形集合转成排序后的顶点列表，便于 JSON 输出"""
    return [list(c.vertices) for c in sorted(cells, key=lambda c: (len(c.vertices), c.vertices))]
