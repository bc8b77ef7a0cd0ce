"""Energy roots, normalized eigenfunctions, charge density and the flux shift."""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from dkposc import nu
from dkposc.errors import DomainError, NoRealRootError, NumericError
from dkposc.params import PhysicsParams, QuantumNumbers, effective_m

EPS = sys.float_info.epsilon

SCAN_POINTS = 4001
MAX_WINDOW_DOUBLINGS = 3
DOUBLE_ROOT_THRESHOLD = 1e-10


@dataclass(frozen=True)
class EnergyRoot:
    E: float
    residual: float
    branch: str
    iterations: int = 0
    flagged: bool = False


@dataclass(frozen=True)
class SolveReport:
    roots: tuple[EnergyRoot, ...]
    bracket_grid: dict
    iterations: tuple[int, ...] = field(default=())

    def branch(self, which: str = "all") -> list[EnergyRoot]:
        if which == "all":
            return list(self.roots)
        if which not in ("positive", "negative"):
            raise DomainError(f"branch must be positive, negative or all, got {which!r}")
        return [root for root in self.roots if root.branch == which]

    def lowest_positive(self) -> EnergyRoot:
        positive = self.branch("positive")
        if not positive:
            raise NoRealRootError(self.bracket_grid["window"], "no positive-energy root")
        return positive[0]


def scan_window(qn: QuantumNumbers, p: PhysicsParams) -> float:
    """Half-width E_max of the energy scan window."""
    nu_ = nu.eigenfunction_exponent(qn, p)
    level = 2 * qn.n + nu_ + 2
    return 10.0 * (p.M + abs(p.k) + p.M * p.omega * abs(p.A) * level
                   + p.Omega * level**2 + abs(effective_m(qn, p)) * p.Omega / p.alpha + 1.0)


def _residual_scale(E, qn, p):
    # magnitude of the largest terms in g(E), used to make residuals relative
    scale2 = p.M**2 * p.omega**2 * p.A**2 + E**2 * p.Omega**2
    nu_ = nu.eigenfunction_exponent(qn, p)
    return (E**2 + p.k**2 + p.M**2 + 2 * math.sqrt(scale2) * (2 * qn.n + 1 + nu_)
            + abs(2 * E * effective_m(qn, p) * p.Omega / p.alpha)
            + 2 * p.M * p.omega * abs(p.A) + 2 * abs(p.A * p.B) * p.M**2 * p.omega**2)


def solve_energy(qn: QuantumNumbers, p: PhysicsParams, tolerance: float = 1e-12) -> SolveReport:
    """All real roots of the quantization condition, ascending.

    The window [-E_max, E_max] is scanned on a uniform grid; sign changes
    are refined with Brent's bracketing method to near machine precision and
    local minima of |g| below DOUBLE_ROOT_THRESHOLD without a sign change
    are reported as flagged double roots.
    """
    if p.M * p.omega * p.A == 0 and p.Omega == 0:
        raise DomainError("the Gaussian scale vanishes: need M*omega*A != 0 or Omega > 0")
    e_max = scan_window(qn, p)
    g = lambda E: nu.quantization_residual(E, qn, p)
    for doubling in range(MAX_WINDOW_DOUBLINGS + 1):
        grid = np.linspace(-e_max, e_max, SCAN_POINTS)
        values = g(grid)
        roots = _roots_on_grid(grid, values, g, qn, p, tolerance)
        if roots:
            break
        if doubling < MAX_WINDOW_DOUBLINGS:
            e_max *= 2.0
    else:
        raise NoRealRootError((-e_max, e_max))
    roots.sort(key=lambda root: root.E)
    return SolveReport(
        roots=tuple(roots),
        bracket_grid={"window": (-e_max, e_max), "points": SCAN_POINTS, "doublings": doubling},
        iterations=tuple(root.iterations for root in roots),
    )


def _make_root(E, iterations, g, qn, p, tolerance, flagged=False):
    residual = abs(float(g(E)))
    if residual > tolerance * _residual_scale(E, qn, p) and not flagged:
        raise NumericError(f"root at E={E!r} has residual {residual:g} above tolerance")
    return EnergyRoot(E=float(E), residual=residual, branch="positive" if E >= 0 else "negative",
                      iterations=iterations, flagged=flagged)


def _roots_on_grid(grid, values, g, qn, p, tolerance):
    roots = []
    sign = np.sign(values)
    exact = np.flatnonzero(values == 0.0)
    for i in exact:
        roots.append(_make_root(grid[i], 0, g, qn, p, tolerance))
    for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
        E, info = optimize.brentq(g, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * EPS,
                                  maxiter=200, full_output=True)
        if not info.converged:
            raise NumericError(f"bracketing failed on [{grid[i]!r}, {grid[i + 1]!r}]")
        roots.append(_make_root(E, info.iterations, g, qn, p, tolerance))
    absval = np.abs(values)
    same = (sign[:-2] == sign[1:-1]) & (sign[1:-1] == sign[2:]) & (sign[1:-1] != 0)
    dip = same & (absval[1:-1] < absval[:-2]) & (absval[1:-1] <= absval[2:])
    # parabola through the three samples estimates how close the dip gets to zero
    curv = values[:-2] - 2 * values[1:-1] + values[2:]
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = values[1:-1] - (values[2:] - values[:-2]) ** 2 / (8 * curv)
    candidates = np.flatnonzero(dip & (np.sign(vertex) != sign[1:-1]) | dip & (np.abs(vertex) < 1e-6 * absval.max()))
    for j in candidates:
        i = j + 1
        res = optimize.minimize_scalar(lambda E: abs(float(g(E))), bounds=(grid[i - 1], grid[i + 1]),
                                       method="bounded", options={"xatol": 1e-14 * max(1.0, abs(grid[i]))})
        if res.fun < DOUBLE_ROOT_THRESHOLD * _residual_scale(res.x, qn, p):
            warnings.warn(f"near-double root at E={res.x!r} (|g|={res.fun:g})", RuntimeWarning)
            roots.append(_make_root(res.x, res.nfev, g, qn, p, tolerance, flagged=True))
    return roots


def laguerre(n: int, a: float, x):
    """Generalized Laguerre polynomial L_n^a(x) by the three-term recurrence.

    (k+1) L_{k+1} = (2k + 1 + a - x) L_k - (k + a) L_{k-1}
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    if a <= -1:
        raise DomainError(f"order must exceed -1, got {a!r}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for k in range(1, int(n)):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _laguerre_d(n, a, x, order):
    # d^j/dx^j L_n^a = (-1)^j L_{n-j}^{a+j}
    if order > n:
        return np.zeros_like(np.asarray(x, dtype=float)) + 0.0
    return (-1) ** order * laguerre(n - order, a + order, x)


@dataclass(frozen=True)
class WavefunctionSpec:
    """Phi1(r) = norm * r^exponent * exp(-scale r^2 / 2) * L_n^exponent(scale r^2)."""

    n: int
    exponent: float
    scale: float
    E: float = float("nan")
    norm: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"n must be non-negative, got {self.n!r}")
        if self.exponent < 0:
            raise DomainError(f"exponent must be non-negative, got {self.exponent!r}")
        if not self.scale > 0:
            raise DomainError(f"scale must be positive, got {self.scale!r}")


def wavefunction_spec(E: float, qn: QuantumNumbers, p: PhysicsParams, normalize: bool = True) -> WavefunctionSpec:
    """Eigenfunction parameters at the energy ``E`` (normally a root from :func:`solve_energy`)."""
    exponent, scale = nu.eigenfunction_parameters(E, qn, p)
    spec = WavefunctionSpec(n=qn.n, exponent=exponent, scale=scale, E=float(E))
    if normalize:
        spec = WavefunctionSpec(n=spec.n, exponent=exponent, scale=scale, E=spec.E, norm=normalization(spec))
    return spec


def wavefunction(r, spec: WavefunctionSpec):
    """Phi1 at radius ``r`` (scalar or array, r >= 0)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    x = spec.scale * r**2
    out = spec.norm * r**spec.exponent * np.exp(-x / 2) * laguerre(spec.n, spec.exponent, x)
    return out if np.ndim(out) else float(out)


def wavefunction_derivatives(r, spec: WavefunctionSpec):
    """``(Phi1, Phi1', Phi1'')`` at r > 0, by the product rule on the three factors."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("derivatives need r > 0")
    nu_, a, n = spec.exponent, spec.scale, spec.n
    x = a * r**2
    u, du, d2u = r**nu_, nu_ * r ** (nu_ - 1), nu_ * (nu_ - 1) * r ** (nu_ - 2)
    w = np.exp(-x / 2)
    dw, d2w = -a * r * w, (a**2 * r**2 - a) * w
    L0, L1, L2 = (_laguerre_d(n, nu_, x, j) for j in range(3))
    P, dP, d2P = L0, 2 * a * r * L1, 2 * a * L1 + 4 * a**2 * r**2 * L2
    f = u * w * P
    df = du * w * P + u * dw * P + u * w * dP
    d2f = (d2u * w * P + u * d2w * P + u * w * d2P
           + 2 * (du * dw * P + du * w * dP + u * dw * dP))
    return spec.norm * f, spec.norm * df, spec.norm * d2f


def normalization(spec: WavefunctionSpec) -> float:
    """Constant making the integral of |Phi1|^2 r dr over (0, inf) equal to one."""
    unit = WavefunctionSpec(n=spec.n, exponent=spec.exponent, scale=spec.scale, E=spec.E)
    # integrate in x = scale r^2 where r dr = dx / (2 scale)
    integrand = lambda x: (x ** unit.exponent * np.exp(-x) * laguerre(unit.n, unit.exponent, x) ** 2
                           / (2 * unit.scale ** (unit.exponent + 1)))
    peak = 2 * unit.n + unit.exponent + 1
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            head, err1 = integrate.quad(integrand, 0, peak, epsabs=0, epsrel=1e-12, limit=200)
            tail, err2 = integrate.quad(integrand, peak, np.inf, epsabs=0, epsrel=1e-12, limit=200)
        except integrate.IntegrationWarning as exc:
            raise NumericError(f"normalization quadrature did not converge: {exc}") from exc
    total = head + tail
    if not total > 0 or (err1 + err2) > 1e-10 * total:
        raise NumericError(f"normalization quadrature error {err1 + err2:g} too large for integral {total:g}")
    return 1.0 / math.sqrt(total)


def charge_density(r, E, qn: QuantumNumbers, p: PhysicsParams, phi1_value):
    """Time component of the current, -2 [E alpha (r^2 Omega^2 - 1) + m_eff Omega] |Phi1|^2 / (M alpha).

    Proportionality constant 1; the flux enters through m_eff = m - phi.
    """
    if np.any(np.asarray(r) < 0):
        raise DomainError("radius must be non-negative")
    if p.M == 0:
        raise ZeroDivisionError("M must be non-zero")
    a, W = p.alpha, p.Omega
    m_eff = effective_m(qn, p)
    return -2 * (E * a * (r**2 * W**2 - 1) + m_eff * W) / (p.M * a) * np.abs(phi1_value) ** 2


def ab_shift_map(qn: QuantumNumbers, p: PhysicsParams, s: int) -> tuple[QuantumNumbers, PhysicsParams]:
    """State equivalent to (n, m) at flux phi + s: the magnetic number moves to m - s, flux unchanged."""
    if int(s) != s:
        raise DomainError(f"flux shift must be an integer number of flux quanta, got {s!r}")
    return QuantumNumbers(n=qn.n, m=qn.m - int(s)), p
