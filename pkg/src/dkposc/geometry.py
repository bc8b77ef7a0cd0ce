"""Som-Raychaudhuri background: metric, tetrads, connections and spin-0 DKP matrices.

Coordinates are ordered (t, r, phi, z) -> (0, 1, 2, 3). Frame (Lorentz)
indices use the same ordering with the flat metric diag(-1, 1, 1, 1).

Array conventions
-----------------
``e_down[a, mu]`` holds the co-frame e^a_mu and ``e_up[mu, a]`` the frame
e_a^mu, so that ``e_up @ e_down`` and ``e_down @ e_up`` are both the identity
and ``e_down.T @ FLAT_METRIC @ e_down`` is the metric.
"""

from __future__ import annotations

import itertools

import numpy as np

from dkposc.errors import DomainError, SingularityError
from dkposc.params import SpacetimeParams

FLAT_METRIC = np.diag([-1, 1, 1, 1])

# The spin-0 DKP matrices below close the algebra with this signature; with
# the opposite one no 5x5 representation yields the component system of the
# oscillator (see dkp_beta_matrices).
DKP_ALGEBRA_METRIC = np.diag([1, -1, -1, -1])

R_INDEX = 1


def _check_radius(r):
    r = float(r)
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r!r}")
    return r


def metric_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """Covariant metric g_{mu nu} at radius ``r``."""
    r = _check_radius(r)
    a, w = p.alpha, p.Omega
    g = np.zeros((4, 4))
    g[0, 0] = -1.0
    g[1, 1] = 1.0
    g[3, 3] = 1.0
    g[0, 2] = g[2, 0] = -a * w * r**2
    g[2, 2] = a**2 * r**2 - a**2 * w**2 * r**4
    return g


def metric_derivative_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """Radial derivative dg_{mu nu}/dr (the metric depends on r only)."""
    r = _check_radius(r)
    a, w = p.alpha, p.Omega
    dg = np.zeros((4, 4))
    dg[0, 2] = dg[2, 0] = -2.0 * a * w * r
    dg[2, 2] = 2.0 * a**2 * r - 4.0 * a**2 * w**2 * r**3
    return dg


def inverse_metric_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """Contravariant metric g^{mu nu}, from the closed-form inverse of the (t, phi) block."""
    r = _check_radius(r)
    g = metric_at(r, p)
    det = g[0, 0] * g[2, 2] - g[0, 2] ** 2  # = -alpha^2 r^2
    if abs(det) <= np.finfo(float).tiny or not np.isfinite(det):
        raise SingularityError(r)
    gi = np.zeros((4, 4))
    gi[0, 0] = g[2, 2] / det
    gi[2, 2] = g[0, 0] / det
    gi[0, 2] = gi[2, 0] = -g[0, 2] / det
    gi[1, 1] = 1.0
    gi[3, 3] = 1.0
    return gi


def tetrad_at(r: float, p: SpacetimeParams) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(e_down, e_up)``: co-frame e^a_mu indexed [a, mu] and frame e_a^mu indexed [mu, a]."""
    r = _check_radius(r)
    a, w = p.alpha, p.Omega
    e_down = np.eye(4)
    e_down[0, 2] = a * w * r**2
    e_down[2, 2] = a * r
    e_up = np.eye(4)
    e_up[0, 2] = -w * r
    e_up[2, 2] = 1.0 / (a * r)
    return e_down, e_up


def tetrad_derivative_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """d(e^a_mu)/dr indexed [a, mu]."""
    r = _check_radius(r)
    de = np.zeros((4, 4))
    de[0, 2] = 2.0 * p.alpha * p.Omega * r
    de[2, 2] = p.alpha
    return de


def christoffel_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """Christoffel symbols of the second kind, ``gamma[mu, i, j]``.

    Only radial derivatives of the metric are non-zero, so the three
    derivative terms reduce to single slices of ``dg``.
    """
    gi = inverse_metric_at(r, p)
    dg = metric_derivative_at(r, p)
    # lowered[nu, i, j] = d_j g_{nu i} + d_i g_{nu j} - d_nu g_{ij}
    lowered = np.zeros((4, 4, 4))
    lowered[:, :, R_INDEX] += dg
    lowered[:, R_INDEX, :] += dg
    lowered[R_INDEX, :, :] -= dg
    return 0.5 * np.einsum("mn,nij->mij", gi, lowered)


def dkp_beta_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Flat-space spin-0 DKP matrices ``(beta0, beta1, beta2, beta3, eta0)``.

    The five-component spinor is ordered (scalar, v_t, v_r, v_phi, v_z) with
    the vector block holding covariant frame components. Entries are
    integers; ``eta0 = 2 beta0^2 - 1`` squares to the identity.
    """
    betas = []
    for a in range(4):
        b = np.zeros((5, 5), dtype=np.int64)
        b[0, a + 1] = DKP_ALGEBRA_METRIC[a, a]
        b[a + 1, 0] = 1
        betas.append(b)
    eta0 = 2 * betas[0] @ betas[0] - np.eye(5, dtype=np.int64)
    return betas[0], betas[1], betas[2], betas[3], eta0


def dkp_algebra_defects(betas=None, metric=DKP_ALGEBRA_METRIC) -> dict[tuple[int, int, int], int]:
    """Max-abs defect of b^a b^c b^b + b^b b^c b^a - b^a g^{cb} - b^b g^{ca} for all 64 index triples."""
    if betas is None:
        betas = dkp_beta_matrices()[:4]
    out = {}
    for a, c, b in itertools.product(range(4), repeat=3):
        lhs = betas[a] @ betas[c] @ betas[b] + betas[b] @ betas[c] @ betas[a]
        rhs = betas[a] * metric[c, b] + betas[b] * metric[c, a]
        out[(a, c, b)] = int(np.abs(lhs - rhs).max())
    return out


def spin_connection_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """Spin affine connection ``omega[mu, a, b]`` (antisymmetric in a, b)."""
    e_down, e_up = tetrad_at(r, p)
    gamma = christoffel_at(r, p)
    de = np.zeros((4, 4, 4))  # de[mu, c, nu] = d_mu e^c_nu
    de[R_INDEX] = tetrad_derivative_at(r, p)
    term1 = np.einsum("ac,cn,sb,nsm->mab", FLAT_METRIC, e_down, e_up, gamma)
    term2 = np.einsum("ac,nb,mcn->mab", FLAT_METRIC, e_up, de)
    return term1 - term2


def spinor_connection_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """Spinor connection matrices ``Gamma[mu]`` of shape (4, 5, 5)."""
    omega = spin_connection_at(r, p)
    betas = [b.astype(float) for b in dkp_beta_matrices()[:4]]
    out = np.zeros((4, 5, 5))
    for a in range(4):
        for b in range(4):
            # the vector block carries covariant components, so the generator
            # enters as [beta^b, beta^a]
            comm = betas[b] @ betas[a] - betas[a] @ betas[b]
            out += 0.5 * omega[:, a, b, None, None] * comm[None]
    return out


def curved_beta_at(r: float, p: SpacetimeParams) -> np.ndarray:
    """Curved-space matrices beta^mu = e_a^mu beta^a, shape (4, 5, 5)."""
    _, e_up = tetrad_at(r, p)
    betas = np.array([b.astype(float) for b in dkp_beta_matrices()[:4]])
    return np.einsum("ma,aij->mij", e_up, betas)


def spinor_connection_contraction(r: float, p: SpacetimeParams) -> np.ndarray:
    """The 5x5 matrix beta^mu Gamma_mu."""
    return np.einsum("mij,mjk->ik", curved_beta_at(r, p), spinor_connection_at(r, p))
