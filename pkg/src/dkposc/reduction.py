"""Separation of the DKP spinor and reduction to the radial equation.

With the plane-wave ansatz exp(-iEt + im phi + ikz) (Phi1, ..., Phi5)(r) the
oscillator equation becomes five component equations. Four are algebraic
and eliminate Phi2..Phi5 in favour of Phi1, which then obeys

    Phi1'' + Phi1'/r - V(r) Phi1 = 0,

    V = M^2 + k^2 + M^2 w^2 f^2 - M w f/r - M w f' - E^2 (1 - r^2 Omega^2)
        + m_eff^2/(alpha^2 r^2) + 2 E Omega m_eff / alpha,

where m_eff = m - phi carries the Aharonov-Bohm flux.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from dkposc import geometry
from dkposc.errors import DomainError
from dkposc.params import PhysicsParams, QuantumNumbers, effective_m


def _check_radius(r):
    arr = np.asarray(r, dtype=float)
    if not np.all(arr > 0.0):
        raise DomainError(f"radius must be positive, got {r!r}")
    return r


def cornell_f(r, A, B):
    """Cornell potential function A r + B / r."""
    _check_radius(r)
    return A * r + B / r


def cornell_df(r, A, B):
    """Radial derivative of :func:`cornell_f`."""
    _check_radius(r)
    return A - B / r**2


@dataclass(frozen=True)
class SpinorComponents:
    phi1: complex
    phi2: complex
    phi3: complex
    phi4: complex
    phi5: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.phi1, self.phi2, self.phi3, self.phi4, self.phi5], dtype=complex)


@dataclass(frozen=True)
class RadialCoefficients:
    """V(r) = c_quadratic r^2 + c_inverse / r^2 + c_const for the Cornell choice of f."""

    c_quadratic: float
    c_inverse: float
    c_const: float

    def potential(self, r):
        return self.c_quadratic * r**2 + self.c_inverse / r**2 + self.c_const


def _f_and_df(r, p, f, df):
    if f is None:
        return cornell_f(r, p.A, p.B), cornell_df(r, p.A, p.B)
    if df is None:
        raise DomainError("a custom potential function f needs its derivative df")
    return f(r), df(r)


def eliminate_components(phi1, dphi1, r, E, qn: QuantumNumbers, p: PhysicsParams, f=None) -> SpinorComponents:
    """Express Phi2..Phi5 through Phi1 and its derivative using the four algebraic equations."""
    _check_radius(r)
    if p.M == 0:
        raise ZeroDivisionError("M must be non-zero")
    fr = cornell_f(r, p.A, p.B) if f is None else f(r)
    M, a, W = p.M, p.alpha, p.Omega
    m_eff = effective_m(qn, p)
    phi1 = complex(phi1)
    return SpinorComponents(
        phi1=phi1,
        phi2=E * phi1 / M,
        phi3=1j * (dphi1 + M * p.omega * fr * phi1) / M,
        phi4=(-(r**2) * a * E * W - m_eff) * phi1 / (r * a * M),
        phi5=-p.k * phi1 / M,
    )


def _component_terms(s, dphi1, dphi3, r, E, qn, p, f):
    _check_radius(r)
    fr = cornell_f(r, p.A, p.B) if f is None else f(r)
    M, w, a, W, k = p.M, p.omega, p.alpha, p.Omega, p.k
    m, phi = qn.m, p.phi
    return [
        [-1j * r * a * dphi3, 1j * a * (M * w * r * fr - 1.0) * s.phi3, E * r * a * s.phi2,
         (m + E * r**2 * a * W) * s.phi4, k * r * a * s.phi5, -r * a * M * s.phi1, -phi * s.phi4],
        [E * s.phi1, -M * s.phi2],
        [1j * dphi1, 1j * M * w * fr * s.phi1, -M * s.phi3],
        [r**2 * a * E * W * s.phi1, m * s.phi1, r * a * M * s.phi4, -phi * s.phi1],
        [k * s.phi1, M * s.phi5],
    ]


def components_from_radial(phi1, dphi1, d2phi1, r, E, qn: QuantumNumbers, p: PhysicsParams):
    """Spinor components built from Phi1, together with dPhi3/dr by the chain rule (Cornell f)."""
    s = eliminate_components(phi1, dphi1, r, E, qn, p)
    M, w = p.M, p.omega
    fr, dfr = cornell_f(r, p.A, p.B), cornell_df(r, p.A, p.B)
    dphi3 = 1j * (d2phi1 + M * w * dfr * phi1 + M * w * fr * dphi1) / M
    return s, dphi3


def component_equations(s: SpinorComponents, dphi1, dphi3, r, E, qn: QuantumNumbers, p: PhysicsParams,
                        f=None) -> np.ndarray:
    """Left-hand sides of the five component equations, written as printed (first row carries r*alpha)."""
    return np.array([sum(row) for row in _component_terms(s, dphi1, dphi3, r, E, qn, p, f)], dtype=complex)


def component_residuals(s: SpinorComponents, dphi1, dphi3, r, E, qn: QuantumNumbers, p: PhysicsParams,
                        f=None, relative: bool = False) -> np.ndarray:
    """Magnitudes of the five component equations.

    ``relative=True`` divides each by the summed magnitude of its terms
    (rows whose terms all vanish report 0).
    """
    terms = _component_terms(s, dphi1, dphi3, r, E, qn, p, f)
    res = np.abs(np.array([sum(row) for row in terms], dtype=complex))
    if not relative:
        return res
    scale = np.array([sum(abs(t) for t in row) for row in terms])
    return np.where(scale > 0, res / np.where(scale > 0, scale, 1.0), 0.0)


def operator_components(psi, dpsi, r, E, qn: QuantumNumbers, p: PhysicsParams, f=None) -> np.ndarray:
    """Apply the full curved-space DKP oscillator operator, assembled from the geometry matrices.

    ``psi`` and ``dpsi`` are the five radial amplitudes and their r-derivatives.
    The result relates to :func:`component_equations` row-wise by the factors
    ``(1/(r alpha), 1, 1, -1/(r alpha), -1)``.
    """
    _check_radius(r)
    psi = np.asarray(psi, dtype=complex)
    dpsi = np.asarray(dpsi, dtype=complex)
    fr = cornell_f(r, p.A, p.B) if f is None else f(r)
    beta_mu = geometry.curved_beta_at(r, p.spacetime)
    contraction = geometry.spinor_connection_contraction(r, p.spacetime)
    eta0 = geometry.dkp_beta_matrices()[4].astype(float)
    # derivatives along (t, r, phi, z) on the ansatz; the flux enters by minimal coupling
    d = [-1j * E * psi, dpsi, 1j * (qn.m - p.phi) * psi, 1j * p.k * psi]
    out = sum(1j * beta_mu[mu] @ d[mu] for mu in range(4))
    out = out + 1j * contraction @ psi
    out = out + 1j * p.M * p.omega * fr * beta_mu[geometry.R_INDEX] @ (eta0 @ psi)
    return out - p.M * psi


def radial_coefficients(E, qn: QuantumNumbers, p: PhysicsParams) -> RadialCoefficients:
    """Coefficients of r^2, 1/r^2 and 1 in V(r) for the Cornell choice of f."""
    M, w, a, W = p.M, p.omega, p.alpha, p.Omega
    m_eff = effective_m(qn, p)
    return RadialCoefficients(
        c_quadratic=M**2 * w**2 * p.A**2 + E**2 * W**2,
        c_inverse=M**2 * w**2 * p.B**2 + m_eff**2 / a**2,
        c_const=(-E**2 + p.k**2 + M**2 + 2 * E * W * m_eff / a
                 - 2 * M * w * p.A + 2 * p.A * p.B * M**2 * w**2),
    )


def effective_potential(r, E, qn: QuantumNumbers, p: PhysicsParams, f=None, df=None,
                        energy_term_sign: float = -1.0):
    """V(r) for an arbitrary potential function ``f`` (Cornell when omitted).

    ``energy_term_sign`` is the sign of the constant E^2 term; the physical
    value is -1, and +1 exists only to exercise the consistency checks.
    """
    _check_radius(r)
    fr, dfr = _f_and_df(r, p, f, df)
    M, w, a, W = p.M, p.omega, p.alpha, p.Omega
    m_eff = effective_m(qn, p)
    return (M**2 + p.k**2 + M**2 * w**2 * fr**2 - M * w * fr / r - M * w * dfr
            + energy_term_sign * E**2 + E**2 * r**2 * W**2
            + m_eff**2 / (r**2 * a**2) + 2 * E * W * m_eff / a)


def radial_operator(phi, dphi, d2phi, r, E, qn: QuantumNumbers, p: PhysicsParams, f=None, df=None,
                    energy_term_sign: float = -1.0):
    """Phi'' + Phi'/r - V Phi."""
    V = effective_potential(r, E, qn, p, f, df, energy_term_sign)
    return d2phi + dphi / r - V * phi


def _operator_scale(phi, dphi, d2phi, r, E, qn, p, f=None, df=None, energy_term_sign=-1.0):
    V = effective_potential(r, E, qn, p, f, df, energy_term_sign)
    return np.abs(d2phi) + np.abs(dphi / r) + np.abs(V * phi)


def radial_residual(phi1: Callable, r, E, qn: QuantumNumbers, p: PhysicsParams, f=None, df=None,
                    relative: bool = False):
    """Residual of the radial equation for ``phi1(r) -> (value, first, second derivative)``.

    With ``relative=True`` the residual is divided by the sum of the
    magnitudes of the three terms, which is scale free and stays finite
    near nodes of ``phi1``.
    """
    _check_radius(r)
    v, dv, d2v = phi1(r)
    res = np.abs(radial_operator(v, dv, d2v, r, E, qn, p, f, df))
    if not relative:
        return res
    scale = _operator_scale(v, dv, d2v, r, E, qn, p, f, df)
    return res / np.where(scale > 0, scale, 1.0)


def reduction_discrepancy(phi1, dphi1, d2phi1, r, E, qn: QuantumNumbers, p: PhysicsParams,
                          energy_term_sign: float = -1.0) -> float:
    """Relative mismatch between the eliminated first component equation and the radial operator.

    Phi2..Phi5 are built by :func:`eliminate_components`, dPhi3/dr by the
    chain rule, and the first component equation (divided by r alpha / M)
    is compared with ``radial_operator`` at arbitrary, not necessarily
    on-shell, values of Phi1 and its derivatives.
    """
    s, dphi3 = components_from_radial(phi1, dphi1, d2phi1, r, E, qn, p)
    M = p.M
    row = component_equations(s, dphi1, dphi3, r, E, qn, p)[0] * M / (r * p.alpha)
    lhs = radial_operator(phi1, dphi1, d2phi1, r, E, qn, p, energy_term_sign=energy_term_sign)
    scale = _operator_scale(phi1, dphi1, d2phi1, r, E, qn, p)
    return float(abs(row - lhs) / scale)
