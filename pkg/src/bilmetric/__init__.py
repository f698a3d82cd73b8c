"""Resolving sets and metric-dimension bounds for bilinear forms graphs H_q(n, d)."""

from .bilform import (
    CapExceeded,
    GraphSpec,
    distance,
    enumerate_vertices,
    rank_class_sizes,
    subspace_of,
    transpose_map,
    vertex_of,
)
from .bounds import (
    babai_general,
    babai_strong,
    compare_report,
    exact_min_resolving,
    gaussian,
    greedy_resolving,
    theorem_bound,
)
from .gf import ExtensionField, FieldSpec, make_field, mul_matrix
from .linalg import Subspace, extend_to_basis, intersect, intersect_dim, member, rref
from .partition import STPartition, build_partition, verify_partition
from .resolving import (
    Certificate,
    ConstructionContext,
    LandmarkSet,
    build_landmarks,
    find_separating_landmark,
    hyperplanes_avoiding,
    signature,
    verify_resolving,
)

__version__ = "0.1.0"
