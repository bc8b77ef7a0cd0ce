"""Parameter sweeps over the positive/negative energy branches."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from dkposc.errors import DKPError, DomainError, NoRealRootError
from dkposc.params import PhysicsParams, QuantumNumbers
from dkposc.spectrum import solve_energy

PHYSICS_KEYS = ("M", "omega", "Omega", "alpha", "A", "B", "k", "phi")
QUANTUM_KEYS = ("n", "m")
SWEEPABLE = ("alpha", "Omega", "omega", "A", "B", "phi", "k", "n", "m")
INTEGER_KEYS = ("n", "m")
BRANCHES = ("positive", "negative", "all")


@dataclass(frozen=True)
class SweepConfig:
    params: PhysicsParams
    qn: QuantumNumbers
    sweep_param: str
    start: float
    stop: float
    steps: int
    branch: str = "positive"

    def __post_init__(self):
        if self.sweep_param not in SWEEPABLE:
            raise DomainError(f"param must be one of {', '.join(SWEEPABLE)}; got {self.sweep_param!r}")
        if not self.start < self.stop:
            raise DomainError(f"from must be below to, got {self.start!r} >= {self.stop!r}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"steps must be an integer >= 2, got {self.steps!r}")
        if self.branch not in BRANCHES:
            raise DomainError(f"branch must be one of {', '.join(BRANCHES)}; got {self.branch!r}")
        for value in self.values():
            self.point(value)  # raises DomainError on an invalid swept value

    def values(self) -> np.ndarray:
        values = np.linspace(self.start, self.stop, int(self.steps))
        if self.sweep_param in INTEGER_KEYS:
            if not np.allclose(values, np.round(values), rtol=0, atol=1e-9):
                raise DomainError(f"{self.sweep_param} sweep must land on integers; adjust from/to/steps")
            values = np.round(values)
        return values

    def point(self, value) -> tuple[QuantumNumbers, PhysicsParams]:
        if self.sweep_param in INTEGER_KEYS:
            return replace(self.qn, **{self.sweep_param: int(value)}), self.params
        return self.qn, replace(self.params, **{self.sweep_param: float(value)})


@dataclass
class SweepRow:
    sweep_param: str
    value: float
    n: int
    m: int
    E: float | None
    residual: float | None
    reason: str = ""
    curve: str = ""


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def successes(self) -> int:
        return sum(row.E is not None for row in self.rows)


def run_sweep(config: SweepConfig, curve: str = "") -> SweepResult:
    """Solve at every swept value; points without a root on the branch become rows with a reason."""
    result = SweepResult(config)
    for value in config.values():
        qn, p = config.point(value)
        base = dict(sweep_param=config.sweep_param, value=float(value), n=qn.n, m=qn.m, curve=curve)
        try:
            roots = solve_energy(qn, p).branch(config.branch)
        except NoRealRootError as exc:
            result.rows.append(SweepRow(E=None, residual=None, reason=f"no real root: {exc}", **base))
            continue
        except DKPError as exc:
            result.rows.append(SweepRow(E=None, residual=None, reason=f"{type(exc).__name__}: {exc}", **base))
            continue
        if not roots:
            result.rows.append(SweepRow(E=None, residual=None, reason=f"no {config.branch} root", **base))
        for root in roots:
            result.rows.append(SweepRow(E=root.E, residual=root.residual, **base))
    return result


def branch_energies(config: SweepConfig) -> np.ndarray:
    """Lowest root on the configured branch at each swept value (NaN where absent)."""
    out = []
    for value in config.values():
        qn, p = config.point(value)
        try:
            roots = solve_energy(qn, p).branch(config.branch)
        except NoRealRootError:
            roots = []
        out.append(roots[0].E if roots else np.nan)
    return np.array(out)


# Base parameters of the four reference sweeps. The omega and B sweeps draw
# their three curves over alpha, since omega itself is swept in the first.
_CAPTION = dict(M=1.0, k=1.0, A=1.0, B=1.0, Omega=1.0, omega=1.0, alpha=1.0)

FIGURE_PRESETS = {
    "fig1": dict(param="alpha", start=0.2, stop=1.0, base=_CAPTION, curves=("omega", (0.5, 1.0, 1.5))),
    "fig2": dict(param="Omega", start=0.0, stop=2.0, base=_CAPTION, curves=("alpha", (0.5, 0.75, 1.0))),
    "fig3": dict(param="omega", start=0.5, stop=2.0, base=_CAPTION, curves=("alpha", (0.5, 0.75, 1.0))),
    "fig4": dict(param="B", start=0.0, stop=2.0, base=_CAPTION, curves=("alpha", (0.5, 0.75, 1.0))),
}


def preset_config(name: str, steps: int = 50, branch: str = "positive", **overrides) -> SweepConfig:
    preset = FIGURE_PRESETS[name]
    base = dict(preset["base"], **overrides)
    qn = QuantumNumbers(n=int(base.pop("n", 1)), m=int(base.pop("m", 1)))
    return SweepConfig(params=PhysicsParams(**base), qn=qn, sweep_param=preset["param"],
                       start=preset["start"], stop=preset["stop"], steps=steps, branch=branch)
