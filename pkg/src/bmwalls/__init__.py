"""Exact Bridgeland wall computations and Bayer-Macri divisors on surfaces."""
from .errors import *  # noqa: F401,F403
from .lattice import (
    ChernCharacter,
    Divisor,
    MukaiVector,
    Surface,
    bogomolov_discriminant,
    custom_surface,
    derived_dual,
    elliptic,
    euler_pairing,
    hirzebruch,
    intersect,
    k3,
    mukai_dual,
    mukai_pairing,
    mukai_vector,
    projective_plane,
)
from .stability import (
    INF,
    Frame,
    StabilityPoint,
    bridgeland_slope,
    central_charge,
    chamber_classify,
    omega_hat_vector,
    omega_vector,
    twisted_central_charge,
)
from .walls import (
    SearchBounds,
    WallRecord,
    dual_wall_check,
    enumerate_walls,
    k3_wall_of_pair,
    sq_line_of_wall,
    wall_of_pair,
)
from .bayer_macri import (
    DivisorExpr,
    abch_p2,
    decompose_dim0,
    decompose_dim1,
    decompose_dim2,
    global_line_bundle_dim2,
    k3_line_bundle,
    relation_checks,
    w_sigma,
)
from .nefcone import FiberedSurface, nef_cone, solve_balanced, toy_frame

__version__ = "0.1.0"
