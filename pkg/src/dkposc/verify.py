"""Cross-module verification suite behind ``dkposc verify``.

Every check records the number it measured next to its threshold, so a
report is useful even when everything passes.
"""

from __future__ import annotations

import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from dkposc import geometry, nu, oracle, reduction, spectrum
from dkposc.errors import DKPError
from dkposc.params import PhysicsParams, QuantumNumbers, SpacetimeParams
from dkposc.sweep import preset_config, branch_energies

DEFAULT_SEED = 20240917
LEVELS = ("quick", "full")

# sample backgrounds for the geometry checks
_SPACETIMES = (SpacetimeParams(1.0, 0.0), SpacetimeParams(0.5, 0.3), SpacetimeParams(0.9, 1.7))

# base parameters of the reference sweeps and the flux-free closed-form case
CAPTION = PhysicsParams(M=1.0, omega=1.0, Omega=1.0, alpha=1.0, A=1.0, B=1.0, k=1.0)
CLOSED_FORM = (QuantumNumbers(0, 1), PhysicsParams(M=1.0, omega=1.0, Omega=0.0, alpha=1.0, A=1.0, B=0.0, k=1.0))


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.measured = float(self.measured)


@dataclass
class VerifyReport:
    level: str
    seed: int
    results: list[CheckResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def get(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"level": self.level, "seed": self.seed, "passed": self.passed,
                "seconds": self.seconds, "results": [asdict(r) for r in self.results]}

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            flag = "PASS" if r.passed else "FAIL"
            line = f"{flag} {r.name}: measured={r.measured:.3e} threshold={r.threshold:.1e}"
            out.append(line + (f" ({r.detail})" if r.detail else ""))
        out.append(f"{'ALL PASS' if self.passed else 'FAILURES'} in {self.seconds:.2f} s "
                   f"[level={self.level} seed={self.seed}]")
        return out


def _below(name, measured, threshold, detail=""):
    measured = float(measured)
    return CheckResult(name, bool(measured < threshold), measured, threshold, detail)


def _above(name, measured, threshold, detail=""):
    measured = float(measured)
    return CheckResult(name, bool(measured > threshold), measured, threshold, detail)


# geometry -----------------------------------------------------------------

def check_dkp_algebra():
    worst = max(geometry.dkp_algebra_defects().values())
    return CheckResult("dkp_algebra", worst == 0, float(worst), 0.5, "exact integer defect over 64 triples")


def check_eta0_involution():
    eta0 = geometry.dkp_beta_matrices()[4]
    defect = np.abs(eta0 @ eta0 - np.eye(5, dtype=np.int64)).max()
    return CheckResult("eta0_involution", defect == 0, float(defect), 0.5, "eta0^2 = 1")


def tetrad_defect(r, st: SpacetimeParams) -> float:
    """Worst of the two orthonormality products and the metric reconstruction, relative to |g|."""
    e_down, e_up = geometry.tetrad_at(r, st)
    g = geometry.metric_at(r, st)
    eye = np.eye(4)
    rebuilt = e_down.T @ geometry.FLAT_METRIC @ e_down
    return max(np.abs(e_down @ e_up - eye).max(), np.abs(e_up @ e_down - eye).max(),
               np.abs(rebuilt - g).max() / np.abs(g).max())


def check_tetrads(radii):
    worst = max(tetrad_defect(r, st) for r in radii for st in _SPACETIMES)
    return _below("tetrads", worst, 1e-13, "orthonormality and metric reconstruction")


def christoffel_fd(r, st: SpacetimeParams, step=1e-5):
    """Christoffel symbols from central differences of the metric."""
    h = step * r
    dg = (geometry.metric_at(r + h, st) - geometry.metric_at(r - h, st)) / (2 * h)
    lowered = np.zeros((4, 4, 4))
    R = geometry.R_INDEX
    lowered[:, :, R] += dg
    lowered[:, R, :] += dg
    lowered[R, :, :] -= dg
    return 0.5 * np.einsum("mn,nij->mij", geometry.inverse_metric_at(r, st), lowered)


def check_christoffel(radii):
    worst = 0.0
    for st in _SPACETIMES:
        for r in radii:
            exact = geometry.christoffel_at(r, st)
            worst = max(worst, np.abs(exact - christoffel_fd(r, st)).max() / np.abs(exact).max())
    return _below("christoffel_fd", worst, 1e-7, "analytic vs central differences, step 1e-5 r")


def contraction_defect(r, st: SpacetimeParams) -> float:
    """Distance of r * beta^mu Gamma_mu from the single -1 entry at (scalar, v_r)."""
    pattern = np.zeros((5, 5))
    pattern[0, 2] = -1.0
    return float(np.abs(r * geometry.spinor_connection_contraction(r, st) - pattern).max())


def check_contraction(radii):
    worst = max(contraction_defect(r, st) for r in radii for st in _SPACETIMES)
    return _below("contraction", worst, 1e-13, f"-1/r single entry at {len(radii)} radii")


# reduction ----------------------------------------------------------------

def random_physics(rng, flux=True) -> tuple[QuantumNumbers, PhysicsParams]:
    p = PhysicsParams(
        M=float(rng.uniform(0.5, 2.0)), omega=float(rng.uniform(0.5, 2.0)),
        Omega=float(rng.uniform(0.0, 1.0)), alpha=float(rng.uniform(0.3, 1.0)),
        A=float(rng.uniform(0.5, 2.0)), B=float(rng.uniform(0.0, 1.0)),
        k=float(rng.uniform(-1.0, 1.0)), phi=float(rng.uniform(-2.0, 2.0)) if flux else 0.0,
    )
    return QuantumNumbers(int(rng.integers(0, 4)), int(rng.integers(-3, 4))), p


def check_operator_rows(rng, count):
    worst = 0.0
    for _ in range(count):
        qn, p = random_physics(rng)
        r, E = float(rng.uniform(0.1, 3.0)), float(rng.uniform(-5, 5))
        psi = rng.normal(size=5) + 1j * rng.normal(size=5)
        dpsi = rng.normal(size=5) + 1j * rng.normal(size=5)
        op = reduction.operator_components(psi, dpsi, r, E, qn, p)
        rows = reduction.component_equations(reduction.SpinorComponents(*psi), dpsi[0], dpsi[2], r, E, qn, p)
        factor = np.array([1 / (r * p.alpha), 1, 1, -1 / (r * p.alpha), -1])
        worst = max(worst, np.abs(op - factor * rows).max() / np.abs(op).max())
    return _below("operator_rows", worst, 1e-13, "matrix operator vs component equations")


def reduction_discrepancies(rng, count, energy_term_sign=-1.0, flux=True):
    out = []
    for _ in range(count):
        qn, p = random_physics(rng, flux)
        r, E = float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.5, 5.0))
        phi1, dphi1, d2phi1 = rng.normal(size=3)
        out.append(reduction.reduction_discrepancy(phi1, dphi1, d2phi1, r, E, qn, p, energy_term_sign))
    return np.array(out)


def check_reduction(rng, count):
    return [
        _below("reduction_consistency", reduction_discrepancies(rng, count, flux=False).max(), 1e-12,
               "flux-free components eliminated into the radial operator"),
        _below("reduction_consistency_flux", reduction_discrepancies(rng, count).max(), 1e-12,
               "with flux"),
        _above("reduction_mutation_detected", reduction_discrepancies(rng, count, +1.0).min(), 1e-6,
               "the +E^2 constant must be rejected"),
    ]


# spectrum -----------------------------------------------------------------

def residual_radii(spec: spectrum.WavefunctionSpec, count=100) -> np.ndarray:
    """Log-spaced radii covering the support of the eigenfunction."""
    length = 1.0 / np.sqrt(spec.scale)
    outer = 3.0 * np.sqrt((2 * spec.n + spec.exponent + 2) / spec.scale)
    return np.geomspace(1e-3 * length, outer, count)


def eigenfunction_residual(E, qn, p, count=100) -> float:
    """Largest relative radial-equation residual of the closed-form eigenfunction."""
    spec = spectrum.wavefunction_spec(E, qn, p)
    radii = residual_radii(spec, count)
    return float(reduction.radial_residual(lambda r: spectrum.wavefunction_derivatives(r, spec),
                                           radii, E, qn, p, relative=True).max())


def component_residual(E, qn, p, count=20) -> float:
    """Largest relative residual of the five component equations on the eigenspinor."""
    spec = spectrum.wavefunction_spec(E, qn, p)
    worst = 0.0
    for r in residual_radii(spec, count):
        v, dv, d2v = spectrum.wavefunction_derivatives(r, spec)
        s, dphi3 = reduction.components_from_radial(v, dv, d2v, r, E, qn, p)
        worst = max(worst, reduction.component_residuals(s, dv, dphi3, r, E, qn, p, relative=True).max())
    return float(worst)


def oracle_cases(level, seed):
    if level == "full":
        return oracle.random_draws(20, seed)
    return [CLOSED_FORM, (QuantumNumbers(1, 1), CAPTION),
            (QuantumNumbers(2, -1), PhysicsParams(M=1.0, omega=0.8, Omega=0.3, alpha=0.7, A=1.2, B=0.4, k=0.5,
                                                  phi=0.35))]


def check_spectrum_cases(cases):
    worst_res, worst_comp, worst_oracle, failures = 0.0, 0.0, 0.0, []
    for qn, p in cases:
        try:
            E = spectrum.solve_energy(qn, p).lowest_positive().E
            worst_res = max(worst_res, eigenfunction_residual(E, qn, p))
            worst_comp = max(worst_comp, component_residual(E, qn, p))
            worst_oracle = max(worst_oracle, oracle.oracle_energy(qn, p, E).relative_difference)
        except DKPError as exc:
            failures.append(f"{qn}: {type(exc).__name__}: {exc}")
    detail = f"{len(cases)} cases" + (f"; errors: {'; '.join(failures)}" if failures else "")
    bad = np.inf if failures else 0.0
    return [
        _below("eigenfunction_residual", max(worst_res, bad), 1e-8, detail + ", 100 log-spaced radii"),
        _below("component_residual", max(worst_comp, bad), 1e-9, detail),
        _below("oracle_agreement", max(worst_oracle, bad), 1e-6, detail),
    ]


def spectrum_distance(a: spectrum.SolveReport, b: spectrum.SolveReport) -> float:
    Ea = np.array([r.E for r in a.roots])
    Eb = np.array([r.E for r in b.roots])
    if Ea.size != Eb.size:
        return np.inf
    return float(np.max(np.abs(Ea - Eb) / np.maximum(np.abs(Ea), 1e-300), initial=0.0))


def check_flux_periodicity(rng, count):
    worst = 0.0
    for _ in range(count):
        qn, p = random_physics(rng)
        for s in (1, 2, 3):
            shifted = spectrum.solve_energy(qn, p.with_(phi=p.phi + s))
            mapped = spectrum.solve_energy(*spectrum.ab_shift_map(qn, p, s))
            worst = max(worst, spectrum_distance(shifted, mapped))
    return _below("flux_periodicity", worst, 1e-12, f"{count} draws, s in 1..3")


def check_flux_zero(rng, count):
    mismatches = 0
    for _ in range(count):
        qn, p = random_physics(rng, flux=False)
        E = float(rng.uniform(-20, 20))
        a = nu.quantization_residual(E, qn, p)
        b = nu.quantization_residual_no_flux(E, qn, p)
        mismatches += not (a == b or (np.isnan(a) and np.isnan(b)))
    return CheckResult("flux_zero_identity", mismatches == 0, float(mismatches), 0.5,
                       f"bit-identical residuals over {count} evaluations")


def check_closed_form():
    qn, p = CLOSED_FORM
    start = time.perf_counter()
    E = spectrum.solve_energy(qn, p).lowest_positive().E
    ms = 1e3 * (time.perf_counter() - start)
    return _below("closed_form", abs(E - 2.0), 1e-12, f"E={E!r} in {ms:.2f} ms")


def check_charge_density(rng, count):
    worst = 0.0
    eta0 = geometry.dkp_beta_matrices()[4]
    for _ in range(count):
        qn, p = random_physics(rng)
        r, E = float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.5, 5.0))
        phi1, dphi1 = rng.normal(size=2)
        psi = reduction.eliminate_components(phi1, dphi1, r, E, qn, p).as_array()
        beta_t = geometry.curved_beta_at(r, p.spacetime)[0]
        direct = (np.conj(psi) @ eta0 @ beta_t @ psi).real
        formula = spectrum.charge_density(r, E, qn, p, phi1)
        worst = max(worst, abs(direct - formula) / max(abs(formula), 1e-300))
    return _below("charge_density", worst, 1e-12, "closed form vs spinor bilinear")


def check_nu_identities(rng, count):
    worst = 0.0
    for _ in range(count):
        qn, p = random_physics(rng)
        E = float(rng.uniform(-5, 5))
        c = nu.nu_coefficients(E, qn, p)
        g = nu.quantization_residual(E, qn, p)
        worst = max(worst,
                    abs(nu.parametric_energy_condition(c, qn.n) - g / 4) / max(1.0, abs(g)),
                    abs(c.c10 - 2 * c.c12 - 0.5), abs(c.c13 + c.c11 / 2) / max(1.0, c.c11))
    return _below("nu_identities", worst, 1e-12, "parametric condition and c-constant identities")


def figure_trends(steps=50) -> dict:
    """Base-curve energies and derived trend measures for the four reference sweeps."""
    out = {}
    for name in ("fig1", "fig2", "fig3", "fig4"):
        config = preset_config(name, steps=steps)
        out[name] = (config.values(), branch_energies(config))
    return out


def _slope(param, value, h=1e-4):
    qn = QuantumNumbers(1, 1)
    E = [spectrum.solve_energy(qn, CAPTION.with_(**{param: v})).lowest_positive().E for v in (value, value + h)]
    return (E[1] - E[0]) / h


def check_figure_trends(steps=50):
    data = figure_trends(steps)
    diffs = {name: np.diff(E) for name, (_, E) in data.items()}
    results = [
        _below("trend_alpha_decreasing", np.nanmax(diffs["fig1"]), 0.0, "max step of E(alpha)"),
        _above("trend_alpha_steeper_small", abs(_slope("alpha", 0.2)) - abs(_slope("alpha", 0.9)), 0.0,
               "|dE/dalpha| at 0.2 minus at 0.9"),
        _above("trend_Omega_increasing", np.nanmin(diffs["fig2"]), 0.0, "min step of E(Omega)"),
        _above("trend_omega_increasing", np.nanmin(diffs["fig3"]), 0.0, "min step of E(omega)"),
        _above("trend_B_increasing", np.nanmin(diffs["fig4"]), 0.0, "min step of E(B)"),
    ]
    E_B = data["fig4"][1]
    results.append(_below("trend_B_relative_change", abs(E_B[-1] - E_B[0]) / abs(E_B[0]), 0.3,
                          "relative change of E over B in [0, 2]"))
    return results


def run_verify(level: str = "quick", seed: int | None = None) -> VerifyReport:
    """Run the suite. ``quick`` uses a few fixed cases; ``full`` adds the 20-draw oracle batch."""
    if level not in LEVELS:
        raise ValueError(f"level must be quick or full, got {level!r}")
    if seed is None:
        seed = int(os.environ.get("DKP_SEED", DEFAULT_SEED))
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    full = level == "full"
    radii = np.geomspace(0.05, 5.0, 20)
    report = VerifyReport(level=level, seed=seed)
    report.results += [check_dkp_algebra(), check_eta0_involution(), check_tetrads(radii),
                       check_christoffel(radii), check_contraction(radii),
                       check_operator_rows(rng, 200 if full else 20)]
    report.results += check_reduction(rng, 200 if full else 50)
    report.results += check_spectrum_cases(oracle_cases(level, seed))
    report.results += [check_flux_periodicity(rng, 50 if full else 5),
                       check_flux_zero(rng, 1000),
                       check_closed_form(),
                       check_charge_density(rng, 200 if full else 20),
                       check_nu_identities(rng, 200 if full else 20)]
    report.results += check_figure_trends(50 if full else 12)
    report.seconds = time.perf_counter() - start
    return report
