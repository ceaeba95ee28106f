from .base_generator import BaseGenerator
from .generators_octahedron import (
    OctahedronSearchGenerator,
    octahedron_complex,
    octahedron_search,
    octahedron_tilings,
)
from .generators_sphere import (
    BoundaryDeltaGenerator,
    TriangleCycleGenerator,
    boundary_delta_shelling,
    triangle_cycle,
)

EXAMPLE_GENERATORS = {
    "boundary-delta": BoundaryDeltaGenerator(),
    "triangle-cycle": TriangleCycleGenerator(),
    "octahedron-search": OctahedronSearchGenerator(),
}

__all__ = [
    "EXAMPLE_GENERATORS",
    "BaseGenerator",
    "BoundaryDeltaGenerator",
    "TriangleCycleGenerator",
    "OctahedronSearchGenerator",
    "boundary_delta_shelling",
    "triangle_cycle",
    "octahedron_complex",
    "octahedron_search",
    "octahedron_tilings",
]
