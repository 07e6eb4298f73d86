"""Normal and octagonal almost normal surfaces in standard coordinates."""
from .coords import (
    QUAD_PAIRS,
    LengthMismatch,
    MatchingSystem,
    NormalCoordVector,
    NotAdmissible,
    NotASolution,
    OctCoordVector,
    TooLarge,
    compatible,
    format_nsv,
    is_admissible,
    is_solution,
    matching_system,
    oct_arcs,
    parse_nsv,
    quad_of,
    read_nsv,
    vertex_link_vector,
)
from .enumerate import (
    brute_force_octagonal,
    brute_force_solutions,
    enumerate_octagonal,
    fundamental_solutions,
    indecomposable,
    vertex_solutions,
)
from .surface import (
    Incompatible,
    NormalSurface,
    build_surface,
    haken_sum,
    is_normal_sphere,
    sphere_family,
)
