"""Energy levels of a spin-0 DKP oscillator in a rotating cosmic-string background.

The package covers the curved-space geometry (metric, tetrads, spin
connection), the reduction of the five-component spin-0 DKP equation to a
radial equation with a Cornell potential function and Aharonov-Bohm flux,
the Nikiforov-Uvarov quantization condition, a root solver for the energy
spectrum, and a finite-difference oracle that checks the closed form
without using it.
"""

from dkposc.errors import (
    DKPError,
    DomainError,
    NoRealRootError,
    NumericError,
    OracleDisagreementError,
    ResolutionError,
    SingularityError,
)
from dkposc.params import PhysicsParams, QuantumNumbers, SpacetimeParams, effective_m
from dkposc.spectrum import (
    EnergyRoot,
    SolveReport,
    WavefunctionSpec,
    ab_shift_map,
    charge_density,
    solve_energy,
    wavefunction,
    wavefunction_spec,
)

__version__ = "0.1.0"

__all__ = [
    "DKPError", "DomainError", "NoRealRootError", "NumericError", "OracleDisagreementError",
    "ResolutionError", "SingularityError", "PhysicsParams", "QuantumNumbers", "SpacetimeParams",
    "effective_m", "EnergyRoot", "SolveReport", "WavefunctionSpec", "ab_shift_map",
    "charge_density", "solve_energy", "wavefunction", "wavefunction_spec",
]
