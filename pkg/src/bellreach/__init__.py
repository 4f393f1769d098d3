"""Exact decision procedures for reachability of Bellman operator iterations.

Given an MDP without end components, an objective (max or min), and rational
vectors s and t, this package decides whether iterating the Bellman operator
from s ever hits t exactly, using only arbitrary-precision rational
arithmetic.  See the README for the file format and the command line.
"""

from .bellman import (
    ActionClass,
    ApplyResult,
    BellmanOperator,
    ConvergenceCertificate,
)
from .errors import (
    BellreachError,
    DimensionMismatch,
    EmptyInput,
    InvalidInput,
    InvalidMdp,
    IterationCapExceeded,
    NonConvergence,
    NotAFixedPoint,
    OutOfUnitBox,
    ParseError,
    PreconditionViolated,
    RegimeViolation,
    SingularMatrix,
    UnknownAction,
    ValidationError,
    ZeroRow,
)
from .io import load_mdp, parse_mdp, parse_rational, parse_vector, serialize_mdp
from .linalg import (
    Kernel2x2,
    KernelKind,
    frac,
    kernel_2x2,
    kernel_chain_zero,
    lcm_of_denominators,
    matrix,
    solve_linear,
    vector,
)
from .mdp import (
    Action,
    EndComponent,
    Mdp,
    Objective,
    build_mdp,
    maximal_end_components,
    remove_end_components,
    validate_mdp,
)
from .planar import (
    AngleOrder,
    KernelLine,
    KernelLineReport,
    PlanarKind,
    PlanarOutcome,
    ProductFamily,
    build_product_family,
    decide_planar_incomparable,
    kernel_lines,
    line_angle_cmp,
    pfr_map,
    shift,
    unshift,
)
from .signs import Regime, abstract_reach_zero, abstract_step, regime_for, sign_of
from .solver import (
    Certificate,
    MortalityVerdict,
    Reachable,
    TraceStep,
    Undecided,
    Unreachable,
    Verdict,
    brute_force_reach,
    decide_bor,
    decide_mortality,
    trace,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
