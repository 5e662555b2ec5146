"""Doubly pumped parametric down-conversion toolkit.

Phase-matching geometry and mode clusters for two noncollinear pump waves
in a chi(2) medium, closed-form Gaussian dynamics of the resulting 3- and
4-mode entangled clusters, entanglement-witness evaluation, and a
split-step spectral simulator of the coupled propagation equations.
"""

__version__ = "0.1.0"

from .dispersion import (  # noqa: F401
    CrystalKind,
    CrystalModel,
    WaveIndexQuery,
    collinear_cut_angle,
    dkp_dQp,
    matched_poling_period,
    pump_gamma,
    refractive_index,
    signal_wavenumber,
    walk_off,
)
from .dynamics import (  # noqa: F401
    BogoliubovPair,
    CouplingParams,
    QuadDecomposition,
    bogoliubov,
    near_field_profiles,
    perturbative_pair_amplitudes,
    quad_decompose,
    quad_evolve,
    triplet_decouple,
    triplet_evolve,
)
from .gaussian import (  # noqa: F401
    GaussianState,
    evolve_state,
    pairwise_commutators,
    witness_variances,
)
from .modes import (  # noqa: F401
    ModeCluster,
    PumpConfig,
    coupled_modes,
    enumerate_clusters,
    poynting_angle,
    resonance_beta,
    resonance_residual,
    shared_mode,
)
from .phasematch import (  # noqa: F401
    MismatchMethod,
    ModeCoord,
    PumpModeCoord,
    collinear_mismatch,
    mismatch,
    sample_surface,
    surface_radius,
    symmetric_omega_grid,
)
from .splitstep import (  # noqa: F401
    FarFieldRecord,
    FieldState,
    PumpPulseSpec,
    SimGrid,
    SplitStepSim,
    hotspot_gain,
    linear_step,
    nonlinear_step,
    run_simulation,
)
