"""Nikiforov-Uvarov treatment of the radial equation.

After Phi1 = Q / sqrt(r) and tau = r^2 the radial equation takes the form

    Q'' + Q'/(2 tau) + (L1 tau^2 + L2 + L3 tau) Q / (4 tau^2) = 0

and the parametric NU constants c1..c13 follow from L1, L2, L3. The energy
condition and the polynomial solution are read off those constants.
All functions accept a numpy array for ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dkposc.params import PhysicsParams, QuantumNumbers, effective_m


@dataclass(frozen=True)
class NUCoefficients:
    zeta1: float
    zeta2: float
    zeta3: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float
    c8: float
    c9: float
    c10: float
    c11: float
    c12: float
    c13: float
    lambda1: float
    lambda2: float
    lambda3: float


def _lambdas(E, qn, p):
    M, w, a, W = p.M, p.omega, p.alpha, p.Omega
    m_eff = effective_m(qn, p)
    lam1 = -(M**2 * w**2 * p.A**2 + E**2 * W**2)
    lam2 = 0.25 - M**2 * w**2 * p.B**2 - m_eff**2 / a**2
    lam3 = (E**2 - p.k**2 - M**2 - 2 * E * m_eff * W / a
            + 2 * M * w * p.A - 2 * p.A * p.B * M**2 * w**2)
    return lam1, lam2, lam3


def nu_coefficients(E, qn: QuantumNumbers, p: PhysicsParams) -> NUCoefficients:
    lam1, lam2, lam3 = _lambdas(E, qn, p)
    zeta1 = -lam1 / 4
    zeta2 = lam3 / 4
    zeta3 = -lam2 / 4
    # c8 = zeta3 + 1/16 is a quarter of the squared exponent; forming it directly
    # avoids the cancellation against 1/16 when the exponent is tiny
    c8 = (p.M**2 * p.omega**2 * p.B**2 + effective_m(qn, p)**2 / p.alpha**2) / 4
    root8 = np.sqrt(c8)
    return NUCoefficients(
        zeta1=zeta1, zeta2=zeta2, zeta3=zeta3,
        c1=0.5, c2=0.0, c3=0.0, c4=0.5, c5=0.0,
        c6=zeta1, c7=-zeta2, c8=c8, c9=zeta1,
        c10=1 + 2 * root8,
        c11=2 * np.sqrt(zeta1),
        c12=0.25 + root8,
        c13=-np.sqrt(zeta1),
        lambda1=lam1, lambda2=lam2, lambda3=lam3,
    )


def parametric_energy_condition(c: NUCoefficients, n: int):
    """General parametric NU energy equation evaluated on the constants ``c``.

    For this problem (c2 = c3 = c5 = 0) it equals a quarter of
    :func:`quantization_residual`.
    """
    return (c.c2 * n - (2 * n + 1) * c.c5 + (2 * n + 1) * (np.sqrt(c.c9) + c.c3 * np.sqrt(c.c8))
            + n * (n - 1) * c.c3 + c.c7 + 2 * c.c3 * c.c8 + 2 * np.sqrt(c.c8 * c.c9))


def quantization_residual(E, qn: QuantumNumbers, p: PhysicsParams):
    """g(E) = 2(2n+1) a - L3 + 2 a nu with the flux-shifted magnetic number; zero at eigenvalues.

    a^2 = M^2 w^2 A^2 + E^2 Omega^2 and nu^2 = M^2 w^2 B^2 + (m - phi)^2 / alpha^2.
    """
    M, w, a, W = p.M, p.omega, p.alpha, p.Omega
    n = qn.n
    m_eff = qn.m - p.phi
    scale2 = M**2 * w**2 * p.A**2 + E**2 * W**2
    lam3 = (E**2 - p.k**2 - M**2 - 2 * E * m_eff * W / a
            + 2 * M * w * p.A - 2 * p.A * p.B * M**2 * w**2)
    return (2 * (2 * n + 1) * np.sqrt(scale2) - lam3
            + 2 * np.sqrt(scale2 * (M**2 * w**2 * p.B**2 + m_eff**2 / a**2)))


def quantization_residual_no_flux(E, qn: QuantumNumbers, p: PhysicsParams):
    """The same condition written for the flux-free problem; ``p.phi`` is ignored."""
    M, w, a, W = p.M, p.omega, p.alpha, p.Omega
    n, m = qn.n, qn.m
    scale2 = M**2 * w**2 * p.A**2 + E**2 * W**2
    lam3 = (E**2 - p.k**2 - M**2 - 2 * E * m * W / a
            + 2 * M * w * p.A - 2 * p.A * p.B * M**2 * w**2)
    return (2 * (2 * n + 1) * np.sqrt(scale2) - lam3
            + 2 * np.sqrt(scale2 * (M**2 * w**2 * p.B**2 + m**2 / a**2)))


def eigenfunction_exponent(qn: QuantumNumbers, p: PhysicsParams) -> float:
    """Small-r power of Phi1, sqrt(M^2 w^2 B^2 + (m - phi)^2 / alpha^2)."""
    m_eff = effective_m(qn, p)
    return float(np.sqrt(p.M**2 * p.omega**2 * p.B**2 + m_eff**2 / p.alpha**2))


def eigenfunction_parameters(E, qn: QuantumNumbers, p: PhysicsParams) -> tuple[float, float]:
    """``(exponent, scale)`` of the NU polynomial solution at energy ``E``.

    Q(tau) = tau^c12 exp(c13 tau) L_n^(c10-1)(c11 tau), so Phi1 = Q/sqrt(r)
    has exponent c10 - 1 and Gaussian scale c11.
    """
    c = nu_coefficients(E, qn, p)
    return float(c.c10 - 1), float(c.c11)
