"""
铺砌文档模块 - TilingDocument（JSON）的读取与写出

格式见 docs/TILING_DOCUMENT.md。结构错误抛 DocumentError（命令行退出码 3），
瓦片不变量错误抛 TileValidationError（退出码 2）。
"""
import json
import logging
import os
from typing import Any, List, Optional

from .config import FORMAT_VERSION, SUPPORTED_FORMAT_MAJOR
from .simplicial import Simplex
from .tiles import TileValidationError, make_tile
from .tiling import MorseTiling

logger = logging.getLogger(__name__)


class DocumentError(ValueError):
    """文档无法解析：带行列号（JSON 语法错误）或 JSON 路径（结构错误）"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 path: Optional[str] = None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"第 {line} 行第 {column} 列")
        if path:
            where.append(path)
        super().__init__(f"{message}（{'，'.join(where)}）" if where else message)

    def to_dict(self) -> dict:
        return {"error": str(self), "line": self.line, "column": self.column, "path": self.path}


def _int_list(value: Any, path: str) -> List[int]:
    if not isinstance(value, list):
        raise DocumentError("应为整数列表", path=path)
    result = []
    for i, item in enumerate(value):
        # bool 是 int 的子类，这里要排除
        if isinstance(item, bool) or not isinstance(item, int):
            raise DocumentError("应为整数", path=f"{path}[{i}]")
        result.append(item)
    return result


def _check_version(data: dict):
    version = data.get("format_version")
    if version is None:
        raise DocumentError("缺少 format_version 字段", path="$.format_version")
    if not isinstance(version, str):
        raise DocumentError("format_version 应为字符串", path="$.format_version")
    try:
        major = int(version.split(".")[0])
    except ValueError:
        raise DocumentError(f"无法识别的版本号: {version}", path="$.format_version")
    if major != SUPPORTED_FORMAT_MAJOR:
        raise DocumentError(f"不支持的格式版本: {version}", path="$.format_version")


def document_to_tiling(data: Any) -> MorseTiling:
    """
    把已解析的 JSON 对象转换为铺砌（不做划分/闭性校验）

    Args:
        data: json.loads 的结果

    Returns:
        MorseTiling

    Raises:
        DocumentError: 结构错误
        TileValidationError: 瓦片不变量错误（消息里带瓦片下标）
    """
    if not isinstance(data, dict):
        raise DocumentError("顶层应为对象", path="$")
    _check_version(data)
    vertices = set(_int_list(data.get("vertices", []), "$.vertices"))
    raw_tiles = data.get("tiles")
    if not isinstance(raw_tiles, list):
        raise DocumentError("缺少 tiles 列表", path="$.tiles")

    tiles = []
    violations = []
    for i, raw in enumerate(raw_tiles):
        path = f"$.tiles[{i}]"
        if not isinstance(raw, dict):
            raise DocumentError("瓦片应为对象", path=path)
        if "simplex" not in raw:
            raise DocumentError("瓦片缺少 simplex", path=f"{path}.simplex")
        simplex = _int_list(raw["simplex"], f"{path}.simplex")
        removed = _int_list(raw.get("removed_opposite", []), f"{path}.removed_opposite")
        morse_face = raw.get("morse_face")
        if morse_face is not None:
            morse_face = _int_list(morse_face, f"{path}.morse_face")
        if not simplex:
            raise DocumentError("simplex 不能为空", path=f"{path}.simplex")
        if len(set(simplex)) != len(simplex) or any(v < 0 for v in simplex):
            raise DocumentError("simplex 顶点必须互不相同且非负", path=f"{path}.simplex")
        if vertices and not set(simplex) <= vertices:
            raise DocumentError("simplex 使用了未声明的顶点", path=f"{path}.simplex")
        try:
            tiles.append(make_tile(simplex, removed, morse_face))
        except TileValidationError as e:
            violations.extend(f"tiles[{i}]: {v}" for v in e.violations)
        except ValueError as e:
            raise DocumentError(str(e), path=path)
    if violations:
        raise TileValidationError(violations)

    cells = None
    if data.get("cells") is not None:
        raw_cells = data["cells"]
        if not isinstance(raw_cells, list):
            raise DocumentError("cells 应为列表", path="$.cells")
        cells = []
        for i, raw in enumerate(raw_cells):
            face = _int_list(raw, f"$.cells[{i}]")
            try:
                cells.append(Simplex.of(face))
            except ValueError as e:
                raise DocumentError(str(e), path=f"$.cells[{i}]")
    return MorseTiling.from_tiles(tiles, cells)


def parse_document(text: str) -> MorseTiling:
    """解析 JSON 文本为铺砌"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"JSON 语法错误: {e.msg}", line=e.lineno, column=e.colno)
    return document_to_tiling(data)


def load_document(path: str) -> MorseTiling:
    """
    读取铺砌文档

    Args:
        path: 文件路径

    Returns:
        MorseTiling
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise DocumentError(f"无法读取文件: {e}", path=str(path))
    tiling = parse_document(text)
    logger.debug("读取 %s: %d 个瓦片, %d 个单元", path, len(tiling.tiles), len(tiling.space))
    return tiling


def tiling_to_document(tiling: MorseTiling) -> dict:
    """
    铺砌 → 文档对象；只有当单元集合不等于瓦片开面之并时才写出 cells
    """
    tiles = []
    for tile in tiling.tiles:
        tiles.append({
            "simplex": list(tile.simplex.vertices),
            "removed_opposite": sorted(tile.removed),
            "morse_face": list(tile.morse_face.vertices) if tile.morse_face is not None else None,
        })
    document = {
        "format_version": FORMAT_VERSION,
        "vertices": list(tiling.ambient.vertices),
        "tiles": tiles,
    }
    union = frozenset().union(*(t.open_faces for t in tiling.tiles)) if tiling.tiles else frozenset()
    if tiling.space.cells != union:
        document["cells"] = [list(c.vertices) for c in sorted(tiling.space.cells,
                                                                key=lambda c: (len(c), c.vertices))]
    return document


def dump_document(tiling: MorseTiling, path: Optional[str] = None) -> str:
    """
    写出铺砌文档

    Args:
        tiling: 铺砌
        path: 输出路径；None 时只返回文本

    Returns:
        str: JSON 文本
    """
    text = json.dumps(tiling_to_document(tiling), indent=2, ensure_ascii=False) + "\n"
    if path:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("✅ 已写出铺砌文档 %s（%d 个瓦片）", path, len(tiling.tiles))
    return text
