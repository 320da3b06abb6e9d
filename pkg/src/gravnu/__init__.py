"""Two-flavour neutrino oscillation observables in a Schwarzschild field.

Leggett-Garg K3 correlators and the l1-norm of coherence for radially
outward and inward propagation, with flat-spacetime references.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    GravnuError,
    HorizonError,
    InversionError,
    ValidationError,
)
from .units import UnitsMode, conversion_constant, phase_from_kinematics  # noqa: E402
from .geometry import (  # noqa: E402
    FLAT,
    Direction,
    Fidelity,
    GravitySource,
    detector_radius_exact,
    detector_radius_weak,
    local_energy,
    metric_potential,
    proper_distance_exact,
    proper_distance_quadrature,
    proper_distance_weak,
)
from .oscillation import (  # noqa: E402
    E,
    MU,
    Approx,
    EnergyReference,
    MassPhases,
    OscillationParams,
    PropagationScenario,
    evolution_matrix,
    mixing_matrix,
    phase_curved_general,
    phase_flat,
    phase_inward,
    phase_local_weak,
    phase_outward,
    scenario_phase,
    survival_probability,
    transition_probability,
)
from .lgi import (  # noqa: E402
    correlation_endpoints,
    correlation_middle,
    evaluate,
    k3,
    k3_direct_oracle,
)
from .coherence import (  # noqa: E402
    coherence_mu,
    coherence_mu_density,
    evolve_density,
    l1_norm,
    local_scenario,
)
from .sweep import (  # noqa: E402
    PRESETS,
    SweepResult,
    SweepSpec,
    preset,
    run_coherence_baseline_sweep,
    run_k3_energy_sweep,
    run_sweep,
)
