"""Explicit planar infinity-harmonic maps and the geometry of their phase interfaces."""

from .linalg2 import Svd2, nullspace_projection, rank_eps, svd2
from .maps import (
    ExampleA,
    ExampleB,
    Jet2,
    KProfile,
    LinearProfile,
    PlanarCurve,
    SeparatedMap,
    Sign,
    TabulatedProfile,
    ZeroProfile,
    curve_jet,
    k_eval,
    map_jet,
    sup_k_check,
)
from .operator import (
    GridSpec,
    Residual,
    e_infinity_estimate,
    grid_residual,
    infinity_laplacian,
    infinity_laplacian_separated,
    numerical_jet,
)
from .phase import PhaseLabel, PhaseMap, analytic_phase_oracle, build_phase_map, classify_point
from .interface import InterfaceGraph, extract_interface
from .checks import (
    check_prop2_affine,
    check_prop2_dichotomy,
    check_rank1_characterization,
    projection_jump,
)

__version__ = "0.1.0"
