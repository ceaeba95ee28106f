"""
Morse 壳化工具包

单纯复形上的 Morse 瓦片、铺砌、箭图（quiver）、壳化判定与谱序列计算。
"""
from .simplicial import (
    CoefficientRing,
    HomologyTable,
    Simplex,
    SimplicialComplex,
    SubcomplexError,
    close_downward,
    cohomology,
    homology,
    relative_cohomology,
    relative_homology,
    skeleton,
)
from .tiles import MorseTile, TileKind, TileValidationError, classify, make_tile
from .tiling import CellSet, MorseTiling, ShellingError, ShellingOrder, is_shelling
from .quiver import Quiver, build_quiver, grading, is_acyclic, shelling_order
from .spectral import compute_page, filtration_from_shelling, run_to_limit, spectral_sequence

__version__ = "1.0.0"

__all__ = [
    "CoefficientRing",
    "HomologyTable",
    "Simplex",
    "SimplicialComplex",
    "SubcomplexError",
    "close_downward",
    "cohomology",
    "homology",
    "relative_cohomology",
    "relative_homology",
    "skeleton",
    "MorseTile",
    "TileKind",
    "TileValidationError",
    "classify",
    "make_tile",
    "CellSet",
    "MorseTiling",
    "ShellingError",
    "ShellingOrder",
    "is_shelling",
    "Quiver",
    "build_quiver",
    "grading",
    "is_acyclic",
    "shelling_order",
    "compute_page",
    "filtration_from_shelling",
    "run_to_limit",
    "spectral_sequence",
]
