"""polex: polarization exchange between photon beams coupled by an atomic gas.

Three levels of description of the same effective interaction:

* :mod:`polex.meanfield` -- the closed mean-field equations and the
  -log(1 - cos theta) instability scaling of the helicity turnovers,
* :mod:`polex.quantum` -- exact evolution in the product Dicke space with
  correlation, entanglement-entropy and number-variance diagnostics,
* :mod:`polex.pulse` -- space-time transport of the mean-field equations
  with boundary injection and the standing polarization pattern.

:mod:`polex.spinspace` builds the collective operators (with a brute-force
full-space oracle), :mod:`polex.coupling` holds the physical constants and
Hamiltonian builders, and :mod:`polex.cli` packages the headline runs as
`polex run/sweep/check` commands.
"""

__version__ = "0.1.0"

from .spinspace import (
    CollectiveOp,
    QuantumState,
    StokesVector,
    brute_force_embed,
    collective_op,
    product_dicke_state,
    rotate_basis_45,
    spin_coherent,
    stokes_of,
)
from .coupling import (
    CouplingConstants,
    MTotalBlock,
    PhysicalInputs,
    TwoBeamHamiltonian,
    block_restrict,
    build_hamiltonian,
    exchange_length,
    first_principles_rate,
    hydrogen_R,
)
from .meanfield import (
    CrossingReport,
    MeanFieldState,
    MfParams,
    crossing_report,
    log_scaling_fit,
    mf_evolve,
    mf_rhs,
)
from .quantum import (
    EvolutionPlan,
    ObservableSeries,
    break_time_analysis,
    entanglement_entropy,
    evolve,
    expectations,
    observable_series,
    plateau_analysis,
    reduced_density,
    variance_ndiff,
    zeta_rotated,
)
from .pulse import BoundaryProfile, PulseGrid, pulse_step, run_to_steady, standing_residual

__all__ = [
    "__version__",
    "CollectiveOp",
    "QuantumState",
    "StokesVector",
    "brute_force_embed",
    "collective_op",
    "product_dicke_state",
    "rotate_basis_45",
    "spin_coherent",
    "stokes_of",
    "CouplingConstants",
    "MTotalBlock",
    "PhysicalInputs",
    "TwoBeamHamiltonian",
    "block_restrict",
    "build_hamiltonian",
    "exchange_length",
    "first_principles_rate",
    "hydrogen_R",
    "CrossingReport",
    "MeanFieldState",
    "MfParams",
    "crossing_report",
    "log_scaling_fit",
    "mf_evolve",
    "mf_rhs",
    "EvolutionPlan",
    "ObservableSeries",
    "break_time_analysis",
    "entanglement_entropy",
    "evolve",
    "expectations",
    "observable_series",
    "plateau_analysis",
    "reduced_density",
    "variance_ndiff",
    "zeta_rotated",
    "BoundaryProfile",
    "PulseGrid",
    "pulse_step",
    "run_to_steady",
    "standing_residual",
]
