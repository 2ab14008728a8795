"""Finite-lattice workbench for causal relations, their adjoint pairs,
quantale laws, operational resolution and frame completion."""

from . import kernels
from .completion import (
    check_completion_universal_traits,
    distributive_ideals,
    frame_completion,
    is_distributive_join,
    is_frame,
    is_frame_exhaustive,
)
from .errors import *  # noqa: F403
from .galois import (
    AdjointPair,
    CausalRelation,
    HomLattice,
    MapTable,
    close_relation,
    compose_pairs,
    derive_causation,
    derive_pair,
    derive_propagation,
    duality,
    empty_relation,
    enumerate_hom,
    is_adjoint_pair,
    kernel_K,
    left_adjoint_of,
    order_relation,
    relation_of_pair,
    right_adjoint_of,
    separation_relation,
    totalize,
    validate_relation,
)
from .lattice import (
    FiniteLattice,
    adjoin_top,
    boolean,
    build_from_covers,
    chain,
    is_isomorphic,
    mn,
    n5,
    subspace_lattice,
)
from .propositions import (
    ActualityMap,
    check_Fsharp_quantaloidal,
    check_resolution_adjunction,
    conjunction_failure_witness,
    embed,
    induced_map,
    is_continuous,
    lift_map,
    resolve,
)
from .quantaloid import (
    InductionSystem,
    Quantale,
    check_causal_duality,
    check_quantale,
    check_quantaloid,
    check_representation,
    endo_quantale,
    generated_induction_system,
    represent_star,
    validate_action,
)
from .report import LawResult, Report, Verdict
from .textio import Workspace, parse_text, parse_workspace

BACKEND = kernels.BACKEND
__version__ = "0.1.0"
