"""Finite-difference check of the spectrum that never touches the closed form.

The substituted radial equation

    -S'' + a^2 r^2 S + (nu^2 - 1/4) S / r^2 = lam S,     S = sqrt(r) Phi1,

is discretized on a grid uniform in t = ln r. In that variable it becomes
the symmetric-definite pencil

    -Phi_tt + (nu^2 + a^2 e^{4t}) Phi = lam e^{2t} Phi,

whose solutions are smooth in t even when nu is small. The small-r end
carries the Robin condition Phi_t = nu Phi, which selects the regular
Frobenius branch r^nu, and the large-r end is Dirichlet. Eigenvalues come
from bisection on Sturm counts of the pencil, followed by one Richardson
step on two nested grids.

An energy E is an eigenvalue when lam(a(E)) equals the constant term of the
bracket, L3(E). Both a and L3 are read from the radial equation
coefficients in :mod:`dkposc.reduction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy import linalg, optimize

from dkposc.errors import DomainError, NumericError, OracleDisagreementError, ResolutionError
from dkposc.params import PhysicsParams, QuantumNumbers
from dkposc.reduction import radial_coefficients

R_MIN_FACTOR = 1e-4
R_MAX_FACTOR = 3.0
TAIL_TOLERANCE = 1e-10
TAIL_FRACTION = 0.05
MAX_R_MAX_DOUBLINGS = 4
RESOLUTION_SHIFT = 1e-4
DEFAULT_POINTS = 2001


@dataclass(frozen=True)
class Grid:
    """Grid of ``points`` nodes uniform in ln r between ``r_min`` and ``r_max``."""

    r_min: float
    r_max: float
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.r_min > 0:
            raise DomainError(f"r_min must be positive, got {self.r_min!r}")
        if not self.r_max > self.r_min:
            raise DomainError(f"r_max must exceed r_min, got {self.r_max!r} <= {self.r_min!r}")
        if int(self.points) != self.points or self.points < 100:
            raise DomainError(f"points must be an integer >= 100, got {self.points!r}")

    @property
    def h(self) -> float:
        return (math.log(self.r_max) - math.log(self.r_min)) / (self.points - 1)

    def t(self) -> np.ndarray:
        return np.linspace(math.log(self.r_min), math.log(self.r_max), self.points)

    def radii(self) -> np.ndarray:
        return np.exp(self.t())

    def refined(self) -> Grid:
        """Nested grid with half the spacing."""
        return Grid(self.r_min, self.r_max, 2 * self.points - 1)

    def with_r_max(self, r_max: float) -> Grid:
        return Grid(self.r_min, r_max, self.points)


def default_grid(n: int, a: float, nu: float, points: int = DEFAULT_POINTS) -> Grid:
    length = 1.0 / math.sqrt(a)
    return Grid(R_MIN_FACTOR * length, R_MAX_FACTOR * math.sqrt((2 * n + nu + 2) / a), points)


@dataclass(frozen=True)
class OracleResult:
    E_oracle: float
    E_closed: float
    lambda_history: tuple = field(default=())
    grid_used: Grid | None = None

    @property
    def relative_difference(self) -> float:
        return abs(self.E_oracle - self.E_closed) / abs(self.E_closed)


def pencil(a: float, nu: float, grid: Grid):
    """Tridiagonal pencil (K, W) as ``(k_diag, k_off, w_diag)``; the Dirichlet node r_max is dropped."""
    if not a > 0:
        raise DomainError(f"scale a must be positive, got {a!r}")
    if nu < 0:
        raise DomainError(f"nu must be non-negative, got {nu!r}")
    h = grid.h
    t = grid.t()[:-1]
    potential = nu**2 + a**2 * np.exp(4 * t)
    k_diag = 2.0 / h**2 + potential
    w_diag = np.exp(2 * t)
    # Robin node: ghost value Phi_{-1} = Phi_1 - 2 h nu Phi_0, row halved to stay symmetric
    k_diag[0] = (1.0 + h * nu) / h**2 + 0.5 * potential[0]
    w_diag[0] *= 0.5
    k_off = np.full(t.size - 1, -1.0 / h**2)
    return k_diag, k_off, w_diag


@numba.njit(cache=True)
def sturm_count(k_diag, k_off, w_diag, x):
    """Number of eigenvalues of the pencil below ``x`` (negative pivots of K - xW)."""
    count = 0
    q = k_diag[0] - x * w_diag[0]
    if q < 0.0:
        count += 1
    for i in range(1, k_diag.shape[0]):
        if q == 0.0:
            q = 1e-300
        q = (k_diag[i] - x * w_diag[i]) - k_off[i - 1] * k_off[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def pencil_eigenvalue(k_diag, k_off, w_diag, index: int) -> float:
    """The ``index``-th smallest (0-based) eigenvalue, by bisection on Sturm counts."""
    lo = 0.0  # K is positive definite
    hi = 1.0
    while sturm_count(k_diag, k_off, w_diag, hi) <= index:
        hi *= 2.0
        if hi > 1e300:
            raise NumericError("could not bracket the eigenvalue")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        if sturm_count(k_diag, k_off, w_diag, mid) > index:
            hi = mid
        else:
            lo = mid


def pencil_eigenvector(k_diag, k_off, w_diag, lam: float) -> np.ndarray:
    """Eigenvector for ``lam`` by two steps of shifted inverse iteration."""
    shift = lam * (1 - 1e-10)
    ab = np.zeros((3, k_diag.size))
    ab[0, 1:] = k_off
    ab[1] = k_diag - shift * w_diag
    ab[2, :-1] = k_off
    v = np.ones(k_diag.size)
    for _ in range(2):
        v = linalg.solve_banded((1, 1), ab, w_diag * v)
        v /= np.abs(v).max()
    return v


def fd_eigenvalue(n: int, a: float, nu: float, grid: Grid) -> float:
    """Unextrapolated (n+1)-th smallest eigenvalue on one grid."""
    return pencil_eigenvalue(*pencil(a, nu, grid), n)


def tail_ratio(n: int, a: float, nu: float, grid: Grid) -> float:
    """Peak of |S| over the outermost TAIL_FRACTION of the grid relative to its global peak."""
    k_diag, k_off, w_diag = pencil(a, nu, grid)
    lam = pencil_eigenvalue(k_diag, k_off, w_diag, n)
    S = np.abs(pencil_eigenvector(k_diag, k_off, w_diag, lam)) * np.sqrt(grid.radii()[:-1])
    cut = int((1 - TAIL_FRACTION) * S.size)
    return float(S[cut:].max() / S.max())


def adapt_r_max(n: int, a: float, nu: float, grid: Grid) -> Grid:
    """Double ``r_max`` until the eigenfunction tail is below TAIL_TOLERANCE."""
    for _ in range(MAX_R_MAX_DOUBLINGS + 1):
        if tail_ratio(n, a, nu, grid) <= TAIL_TOLERANCE:
            return grid
        grid = grid.with_r_max(2 * grid.r_max)
    raise ResolutionError(f"eigenfunction tail not resolved up to r_max={grid.r_max:g}")


def fd_lambda(n: int, a: float, nu: float, grid: Grid | None = None, extrapolate: bool = True) -> float:
    """(n+1)-th eigenvalue of -S'' + a^2 r^2 S + (nu^2 - 1/4) S / r^2.

    Without ``grid`` a default one is built and its outer radius adapted to
    the eigenfunction tail. With ``extrapolate`` the result is the
    Richardson combination of ``grid`` and its refinement.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    if grid is None:
        grid = adapt_r_max(n, a, nu, default_grid(n, a, nu))
    coarse = fd_eigenvalue(n, a, nu, grid)
    if not extrapolate:
        return coarse
    fine = fd_eigenvalue(n, a, nu, grid.refined())
    if abs(fine - coarse) > RESOLUTION_SHIFT * abs(fine):
        raise ResolutionError(f"eigenvalue moved by {abs(fine - coarse):g} under refinement of {grid.points} points")
    return (4.0 * fine - coarse) / 3.0


def oracle_energy(qn: QuantumNumbers, p: PhysicsParams, E_guess: float, points: int = DEFAULT_POINTS,
                  xtol: float = 1e-13) -> OracleResult:
    """Energy at which the finite-difference eigenvalue matches the bracket constant, near ``E_guess``.

    The grid is fixed from a(E_guess) so that h(E) = lam(a(E)) - L3(E) is
    smooth in E; the root is bracketed by expanding around ``E_guess`` and
    refined with Brent's method.
    """
    n = qn.n

    def a_of(E):
        return math.sqrt(radial_coefficients(E, qn, p).c_quadratic)

    nu = math.sqrt(radial_coefficients(E_guess, qn, p).c_inverse)
    a0 = a_of(E_guess)
    if not a0 > 0:
        raise DomainError("the Gaussian scale vanishes at E_guess")
    grid = adapt_r_max(n, a0, nu, default_grid(n, a0, nu, points))
    history = []

    def h(E):
        lam = fd_lambda(n, a_of(E), nu, grid)
        history.append((float(E), float(lam)))
        return lam + radial_coefficients(E, qn, p).c_const

    delta = 1e-4 * max(1.0, abs(E_guess))
    lo, hi = E_guess - delta, E_guess + delta
    h_lo, h_hi = h(lo), h(hi)
    for _ in range(12):
        if h_lo * h_hi < 0:
            break
        delta *= 4.0
        lo, hi = E_guess - delta, E_guess + delta
        h_lo, h_hi = h(lo), h(hi)
    else:
        raise OracleDisagreementError(E_guess)
    E = optimize.brentq(h, lo, hi, xtol=xtol * max(1.0, abs(E_guess)), rtol=1e-15, maxiter=200)
    return OracleResult(E_oracle=float(E), E_closed=float(E_guess), lambda_history=tuple(history), grid_used=grid)


def random_draws(count: int, seed: int):
    """Parameter draws for batch oracle runs (M = k = 1, no flux)."""
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(count):
        p = PhysicsParams(
            M=1.0, k=1.0, phi=0.0,
            alpha=float(rng.uniform(0.3, 1.0)),
            Omega=float(rng.uniform(0.0, 1.0)),
            omega=float(rng.uniform(0.5, 2.0)),
            A=float(rng.uniform(0.5, 2.0)),
            B=float(rng.uniform(0.0, 1.0)),
        )
        qn = QuantumNumbers(n=int(rng.integers(0, 4)), m=int(rng.integers(-3, 4)))
        draws.append((qn, p))
    return draws
