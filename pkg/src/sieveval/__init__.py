"""Exact sieve-valued truth valuations of quantum propositions.

Layers, bottom up: exact Gaussian-rational linear algebra; the subspace
lattice; projected atoms and determinate sublattices with their two-valued
valuations; finite operator sites; sieve-valued valuations with subobject
semi-classifiers; and the bridge identifying the valuations on the
single-observable and all-observables sites.
"""

from .rationals import GaussianRational, format_scalar, gaussian, parse_scalar
from .linalg import (
    ExactMatrix,
    conj_transpose,
    diagonal_matrix,
    identity_matrix,
    kernel_basis,
    mat_mul,
    matrix_from_rows,
    rref,
    zero_matrix,
)
from .subspaces import (
    Ray,
    Subspace,
    apply_operator,
    full_space,
    join,
    leq,
    meet,
    ortho,
    project_onto_eigenspace,
    projector_matrix,
    ray_from_vector,
    subspace_from_vectors,
    zero_space,
)
from .modal import (
    Observable,
    TrueAtomSet,
    bub_valuation,
    compute_atoms,
    enumerate_determinate_sublattice,
    in_commutant,
    in_determinate_sublattice,
    observable_leq,
    trivial_observable,
    zero_augmented_atom_set,
)
from .sites import (
    ExtendedSite,
    MorphismX,
    OperatorMonoid,
    PlainSite,
    build_extended_site,
    build_plain_site,
    close_monoid,
    restrict_down,
    restrict_down_extended,
    restrict_to_rho,
    submonoid_commuting_with,
)
from .sieves import (
    GlobalElement,
    Presheaf,
    Sieve,
    StageHeyting,
    atom_global_element,
    atom_presheaf,
    bottom_annihilator,
    bottom_sieve,
    build_presheaf,
    characteristic,
    delta_omega_at,
    delta_omega_presheaf,
    enumerate_sieves,
    filter_check,
    heyting_implies,
    heyting_join,
    heyting_meet,
    ib_condition_check,
    is_subpresheaf,
    omega_at,
    omega_presheaf,
    omega_transition,
    proposition_presheaf,
    semiclassifier_check,
    tau_values,
    top_sieve,
    true_subobject,
    valuation,
)
from .bridge import (
    BridgeContext,
    equivalence_check,
    flat,
    heyting_iso_check,
    is_natural,
    is_projective,
    lift_eta,
    make_bridge_context,
    natural_characteristic,
    natural_map,
    natural_omega,
    sharp,
)
from .modal import validate_matrix_decomposition
from .scenario import (
    Scenario,
    bundled_scenario_names,
    bundled_scenario_path,
    load_scenario,
    scenario_from_dict,
)
from .runner import build_scenario, dump_site, run_valuate, valuate_run
from .checks import run_check

__version__ = "0.1.0"

__all__ = [
    "apply_operator",
    "atom_global_element",
    "atom_presheaf",
    "bottom_annihilator",
    "bottom_sieve",
    "BridgeContext",
    "bub_valuation",
    "build_extended_site",
    "build_plain_site",
    "build_presheaf",
    "build_scenario",
    "bundled_scenario_names",
    "bundled_scenario_path",
    "characteristic",
    "close_monoid",
    "compute_atoms",
    "conj_transpose",
    "delta_omega_at",
    "delta_omega_presheaf",
    "diagonal_matrix",
    "dump_site",
    "enumerate_determinate_sublattice",
    "enumerate_sieves",
    "equivalence_check",
    "ExactMatrix",
    "ExtendedSite",
    "filter_check",
    "flat",
    "format_scalar",
    "full_space",
    "gaussian",
    "GaussianRational",
    "GlobalElement",
    "heyting_implies",
    "heyting_iso_check",
    "heyting_join",
    "heyting_meet",
    "ib_condition_check",
    "identity_matrix",
    "in_commutant",
    "in_determinate_sublattice",
    "is_natural",
    "is_projective",
    "is_subpresheaf",
    "join",
    "kernel_basis",
    "leq",
    "lift_eta",
    "load_scenario",
    "make_bridge_context",
    "mat_mul",
    "matrix_from_rows",
    "meet",
    "MorphismX",
    "natural_characteristic",
    "natural_map",
    "natural_omega",
    "Observable",
    "observable_leq",
    "omega_at",
    "omega_presheaf",
    "omega_transition",
    "OperatorMonoid",
    "ortho",
    "parse_scalar",
    "PlainSite",
    "Presheaf",
    "project_onto_eigenspace",
    "projector_matrix",
    "proposition_presheaf",
    "Ray",
    "ray_from_vector",
    "restrict_down",
    "restrict_down_extended",
    "restrict_to_rho",
    "rref",
    "run_check",
    "run_valuate",
    "Scenario",
    "scenario_from_dict",
    "semiclassifier_check",
    "sharp",
    "Sieve",
    "StageHeyting",
    "submonoid_commuting_with",
    "Subspace",
    "subspace_from_vectors",
    "tau_values",
    "top_sieve",
    "trivial_observable",
    "true_subobject",
    "TrueAtomSet",
    "validate_matrix_decomposition",
    "valuate_run",
    "valuation",
    "zero_augmented_atom_set",
    "zero_matrix",
    "zero_space",
]
