"""cvcat: numerical simulator of a measurement-induced cat-state gate.

A weakly cubic, finitely squeezed ancilla is entangled with a target mode
and measured; the surviving mode is multiplied by an exact Airy-form factor.
This package evaluates that factor with hand-rolled special-function
numerics, builds the conditional output states, compares them with ideal
two-component superpositions, renders Wigner functions, and sweeps the
fidelity/probability trade-off.
"""

from .analysis import SweepRow, SweepSpec, db_to_s, efficiency_score, \
    fidelity, log_inverse_s_values, phase_aligned_l2, resample, rows_to_csv, \
    run_sweep
from .errors import ConvergenceError, CvcatError, DegenerateSuperpositionError, \
    DomainError, ZeroProbabilityOutcomeError
from .gate import ConditionalOutput, added_factor, added_factor_grid, \
    apply_gate, outcome_probability_density
from .oracle import TwoModeGrid, ancilla_grid_for, build_two_mode_grid, \
    oracle_added_factor, oracle_two_mode
from .phase_space import SupportRegion, WignerGrid, build_support_region, \
    intersect_horizontal, semiclassical_shear, suggest_wigner_bounds, \
    wigner_log_negativity, wigner_transform
from .special_numerics import QuadratureSpec, airy_ai, airy_ai_scaled, \
    default_oscillatory_spec, integrate_adaptive, integrate_oscillatory_gaussian
from .states import CatParams, GateParams, GridSpec, WaveFunction, \
    cat_params_from_gate, default_grid, make_cubic_phase_state, make_ideal_cat, \
    make_squeezed_vacuum, wavefunction_from_json, wavefunction_to_json

__version__ = "1.0.0"

__all__ = [
    "__version__",
    "CvcatError", "DomainError", "ConvergenceError",
    "ZeroProbabilityOutcomeError", "DegenerateSuperpositionError",
    "QuadratureSpec", "airy_ai", "airy_ai_scaled", "default_oscillatory_spec",
    "integrate_adaptive", "integrate_oscillatory_gaussian",
    "GridSpec", "WaveFunction", "GateParams", "CatParams", "default_grid",
    "make_squeezed_vacuum", "make_cubic_phase_state", "make_ideal_cat",
    "cat_params_from_gate", "wavefunction_to_json", "wavefunction_from_json",
    "ConditionalOutput", "added_factor", "added_factor_grid", "apply_gate",
    "outcome_probability_density",
    "TwoModeGrid", "ancilla_grid_for", "build_two_mode_grid",
    "oracle_added_factor", "oracle_two_mode",
    "WignerGrid", "SupportRegion", "wigner_transform", "wigner_log_negativity",
    "semiclassical_shear", "build_support_region", "intersect_horizontal",
    "suggest_wigner_bounds",
    "fidelity", "phase_aligned_l2", "resample", "db_to_s", "efficiency_score",
    "SweepSpec", "SweepRow", "run_sweep", "rows_to_csv", "log_inverse_s_values",
]
