"""
配置文件 - 存储所有常量和配置项
"""

# 铺砌文档格式版本（JSON 文档中的 format_version 字段必须存在）
FORMAT_VERSION = "1.0"
SUPPORTED_FORMAT_MAJOR = 1

# 命令行退出码（稳定约定，不要随意改动）
EXIT_OK = 0
EXIT_NOT_SHELLABLE = 1
EXIT_INVALID = 2
EXIT_PARSE_ERROR = 3
EXIT_USAGE = 4

# 系数配置
DEFAULT_SPECTRAL_COEFFICIENT = "rational"
DEFAULT_HOMOLOGY_COEFFICIENT = "integer"

# 数据目录
DATA_DIR = "data"
EXPORTS_DIR = f"{DATA_DIR}/exports"
LOG_DIR = "logs"

# 内置示例生成器
EXAMPLE_NAMES = {
    "boundary-delta": "∂Δ_{n+1} 标准壳化（每个阶数一个基本瓦片）",
    "triangle-cycle": "∂Δ_2 的循环铺砌（不可壳化）",
    "octahedron-search": "八面体 Morse 壳化（搜索得到）",
}

# 八面体搜索目标：临界瓦片指标多重集
OCTAHEDRON_TARGET_INDICES = (0, 1, 2, 2)
# 八面体谱序列应在第几页退化
OCTAHEDRON_DEGENERATION_PAGE = 2
