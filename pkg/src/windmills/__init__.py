"""Projection complexes, spinning families and windmill certificates with exact arithmetic."""

from .action import (
    EquivariantFamily,
    GroupAction,
    check_equivariance,
    check_invariance,
    check_spinning,
    permutation_action,
    symmetrize,
)
from .errors import InputError, NoPathError, ParameterError, TruncationError
from .instances import F2Axes, Z3Z3Tree
from .metric import (
    ComplexGraph,
    ConstantsReport,
    DistanceSystem,
    all_geodesics,
    build_complex,
    measure_constants,
    spinning_threshold,
    sum_distance_systems,
    verify_axioms,
)
from .trees import (
    Tree,
    axis_distance_system,
    axis_of,
    distance_formula_check,
    nearest_point_projection,
    random_tree,
    tree_distance_system,
)
from .windmill import (
    bounded_orbit_classify,
    build_windmill,
    free_product_certificate,
    locality_check,
    pivot_points,
    remember_check,
    syllable_decompose,
    waypoint_report,
)

__version__ = "0.1.0"
