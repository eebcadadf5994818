"""Franck-Condon factors for harmonic vibronic transitions.

Closed multidimensional-Hermite formulas, phase-space (Wigner and symplectic
tomogram) routes, and a brute-force quadrature oracle, all cross-checked
against each other. hbar = 1 throughout; a mode of frequency omega has
oscillator length omega**-0.5.
"""

from .closed_form import (
    FcBlockSystem,
    build_fc_block_system,
    clamp_counter,
    fc_freq_1d,
    fc_general,
    fc_line_engine,
    fc_schwinger,
    fc_shift_1d,
)
from .errors import (
    AccuracyError,
    DegenerateConfigurationError,
    DimensionError,
    DomainError,
    MethodMismatchError,
    NormalizationWarning,
    SingularParameterError,
    SpecError,
    TruncationWarning,
    VibrofcError,
)
from .oracle import QuadratureSpec, hermite_identity_check, overlap_quadrature, sum_rule
from .polynomials import (
    HermiteMatrixParam,
    as_multi_index,
    hermite_1d,
    hermite_multidim,
    laguerre_assoc,
    legendre_assoc,
)
from .spectrum import (
    MoleculeSpec,
    SpectrumLine,
    SpectrumResult,
    compute_spectrum,
    enumerate_final_states,
    parse_spec,
    read_spectrum,
    write_spectrum,
)
from .states import (
    DushinskyTransform,
    QuadraticState,
    TransformedState,
    apply_dushinsky,
    mode_eigenstate,
    normalize_phase,
    quadratic_state,
    wavefunction_eval,
)
from .tomography import (
    OverlapEstimate,
    PhaseSpaceGrid,
    TomogramQuery,
    dump_wigner_grid,
    radon_forward,
    tomogram_eval,
    tomographic_overlap,
    wigner_eval,
    wigner_grid,
    wigner_overlap,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "DegenerateConfigurationError",
    "DimensionError",
    "DomainError",
    "DushinskyTransform",
    "FcBlockSystem",
    "HermiteMatrixParam",
    "MethodMismatchError",
    "MoleculeSpec",
    "NormalizationWarning",
    "OverlapEstimate",
    "PhaseSpaceGrid",
    "QuadraticState",
    "QuadratureSpec",
    "SingularParameterError",
    "SpecError",
    "SpectrumLine",
    "SpectrumResult",
    "TomogramQuery",
    "TransformedState",
    "TruncationWarning",
    "VibrofcError",
    "apply_dushinsky",
    "as_multi_index",
    "build_fc_block_system",
    "clamp_counter",
    "compute_spectrum",
    "dump_wigner_grid",
    "enumerate_final_states",
    "fc_freq_1d",
    "fc_general",
    "fc_line_engine",
    "fc_schwinger",
    "fc_shift_1d",
    "hermite_1d",
    "hermite_identity_check",
    "hermite_multidim",
    "laguerre_assoc",
    "legendre_assoc",
    "mode_eigenstate",
    "normalize_phase",
    "overlap_quadrature",
    "parse_spec",
    "quadratic_state",
    "radon_forward",
    "read_spectrum",
    "sum_rule",
    "tomogram_eval",
    "tomographic_overlap",
    "wavefunction_eval",
    "wigner_eval",
    "wigner_grid",
    "wigner_overlap",
    "write_spectrum",
]
