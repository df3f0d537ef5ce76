"""Pseudo-spectral incompressible flow solver with interchangeable
Runge-Kutta integrators and embedded-pair adaptive step-size control."""

from .bench import (
    WorkPrecisionPoint,
    cell_config,
    parse_matrix_config,
    work_precision,
    write_work_precision_csv,
)
from .config import (
    ADAPTIVE_CAPABLE,
    INTEGRATORS,
    ConfigError,
    RunConfig,
    default_lengths,
    parse_config,
)
from .control import (
    AdvanceOutcome,
    ControllerConfig,
    ControllerState,
    StepSizeUnderflowError,
    adaptive_advance,
    error_norm,
    error_norm_delta,
    propose_step,
    scale_vector,
)
from .diagnostics import (
    DiagnosticsRecord,
    SpectrumRecord,
    compare_series,
    dissipation_rate,
    energy_spectrum,
    field_error_norms,
    kinetic_energy,
)
from .grid import Grid
from .integrators import (
    ButcherPair,
    NonFiniteStateError,
    StepOutcome,
    ab2_combine,
    ab2_step,
    make_bs5,
    make_dp5,
    make_kcl5,
    make_pair,
    make_rk4,
    rk_step,
)
from .order_conditions import condition_residuals, verify_order_conditions
from .physics import (
    FlowRHS,
    FlowState,
    ForcingError,
    PhysParams,
    apply_forcing,
    boussinesq_rhs,
    leray_project,
    ns_rhs,
)
from .problems import (
    ProblemSpec,
    hit_init,
    rayleigh_taylor_init,
    taylor_green_init,
)
from .simulation import (
    CheckpointData,
    CheckpointError,
    SimulationResult,
    make_initial_state,
    read_checkpoint,
    read_diagnostics_csv,
    run_simulation,
    write_checkpoint,
    write_diagnostics_csv,
)
from .spectral import (
    DealiasWorkspace,
    curl,
    dealiased_product,
    forward_transform,
    inverse_transform,
    pad_spectrum,
    symmetrize_real_planes,
    truncate_spectrum,
    zero_nyquist,
    zero_self_conjugate_imag,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
