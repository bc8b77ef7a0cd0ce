import ast
import inspect
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import CAPTION_E, CAPTION_P, CAPTION_QN, CLOSED_P, CLOSED_QN
from dkposc import oracle, spectrum
from dkposc.errors import DomainError, OracleDisagreementError, ResolutionError
from dkposc.params import PhysicsParams, QuantumNumbers


def exact_lambda(n, a, nu):
    return 2 * a * (2 * n + 1 + nu)


@pytest.mark.parametrize("n,a,nu,expected", [(0, 1.0, 1.0, 4.0), (1, 1.0, 1.0, 8.0), (0, 2.0, 0.0, 4.0)])
def test_fd_lambda_examples(n, a, nu, expected):
    assert oracle.fd_lambda(n, a, nu) == pytest.approx(expected, rel=1e-8)


@settings(max_examples=25)
@given(st.integers(0, 4), st.floats(0.2, 10.0), st.floats(0.0, 6.0))
def test_fd_lambda_converges(n, a, nu):
    assert oracle.fd_lambda(n, a, nu) == pytest.approx(exact_lambda(n, a, nu), rel=1e-7)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.5])
def test_second_order_convergence(nu):
    n, a = 1, 1.3
    grid = oracle.adapt_r_max(n, a, nu, oracle.default_grid(n, a, nu, points=401))
    errors = [abs(oracle.fd_lambda(n, a, nu, g, extrapolate=False) - exact_lambda(n, a, nu))
              for g in (grid, grid.refined())]
    assert 3.5 < errors[0] / errors[1] < 4.5


def test_monotone_in_a_and_n():
    grid = oracle.Grid(1e-4, 12.0, 801)
    lam_a = [oracle.fd_lambda(1, a, 1.2, grid, extrapolate=False) for a in (0.8, 1.0, 1.2)]
    lam_n = [oracle.fd_lambda(n, 1.0, 1.2, grid, extrapolate=False) for n in range(4)]
    assert np.all(np.diff(lam_a) > 0) and np.all(np.diff(lam_n) > 0)


def test_sturm_count_matches_dense_solver():
    from scipy import linalg

    grid = oracle.Grid(1e-3, 6.0, 150)
    k_diag, k_off, w_diag = oracle.pencil(1.1, 0.6, grid)
    K = np.diag(k_diag) + np.diag(k_off, 1) + np.diag(k_off, -1)
    eig = linalg.eigh(K, np.diag(w_diag), eigvals_only=True)
    for x in (1.0, 5.0, 17.0, 60.0):
        assert oracle.sturm_count(k_diag, k_off, w_diag, x) == np.count_nonzero(eig < x)
    assert oracle.pencil_eigenvalue(k_diag, k_off, w_diag, 2) == pytest.approx(eig[2], rel=1e-12)


def test_grid_validation():
    with pytest.raises(DomainError):
        oracle.Grid(0.0, 1.0, 200)
    with pytest.raises(DomainError):
        oracle.Grid(1.0, 1.0, 200)
    with pytest.raises(DomainError):
        oracle.Grid(0.1, 1.0, 99)
    g = oracle.Grid(0.1, 10.0, 101)
    assert g.refined().points == 201
    assert g.radii()[0] == pytest.approx(0.1) and g.radii()[-1] == pytest.approx(10.0)
    assert np.allclose(np.diff(g.t()), g.h)


def test_default_grid_outer_radius():
    n, a, nu = 2, 1.5, 0.7
    g = oracle.default_grid(n, a, nu)
    assert g.r_max == pytest.approx(3 * math.sqrt((2 * n + nu + 2) / a))
    assert g.r_min == pytest.approx(1e-4 / math.sqrt(a))


def test_adapted_grid_resolves_tail():
    g = oracle.adapt_r_max(1, 1.0, 1.0, oracle.default_grid(1, 1.0, 1.0))
    assert oracle.tail_ratio(1, 1.0, 1.0, g) <= oracle.TAIL_TOLERANCE


def test_coarse_grid_raises_resolution_error():
    with pytest.raises(ResolutionError):
        oracle.fd_lambda(3, 1.0, 0.5, oracle.Grid(1e-4, 8.0, 100))


def test_pencil_rejects_bad_inputs():
    g = oracle.Grid(0.1, 5.0, 200)
    with pytest.raises(DomainError):
        oracle.pencil(0.0, 1.0, g)
    with pytest.raises(DomainError):
        oracle.pencil(1.0, -0.5, g)


def test_oracle_closed_form():
    result = oracle.oracle_energy(CLOSED_QN, CLOSED_P, 2.0)
    assert result.E_oracle == pytest.approx(2.0, abs=1e-6)
    assert result.E_closed == 2.0
    assert result.lambda_history and result.grid_used is not None


def test_oracle_reference_root():
    E = spectrum.solve_energy(CAPTION_QN, CAPTION_P).lowest_positive().E
    assert E == pytest.approx(CAPTION_E, rel=1e-13)
    assert oracle.oracle_energy(CAPTION_QN, CAPTION_P, E).relative_difference < 1e-6


def test_oracle_negative_branch_and_flux():
    p = PhysicsParams(M=1.0, omega=0.9, Omega=0.4, alpha=0.6, A=1.2, B=0.3, k=0.5, phi=0.4)
    qn = QuantumNumbers(2, -2)
    for root in spectrum.solve_energy(qn, p).roots:
        assert oracle.oracle_energy(qn, p, root.E).relative_difference < 1e-6


def test_oracle_disagreement_is_reported():
    # far from any eigenvalue h(E) keeps one sign over the whole expanding bracket
    with pytest.raises(OracleDisagreementError) as info:
        oracle.oracle_energy(CLOSED_QN, CLOSED_P.with_(Omega=0.0), 1e-9)
    assert info.value.E_guess == 1e-9


def test_oracle_is_independent_of_the_closed_form():
    # structural independence: the oracle never imports or calls the NU engine
    tree = ast.parse(inspect.getsource(oracle))
    imported = {node.module for node in ast.walk(tree) if isinstance(node, ast.ImportFrom)}
    names = {alias.name for node in ast.walk(tree) if isinstance(node, ast.Import) for alias in node.names}
    assert "dkposc.nu" not in imported and "dkposc.spectrum" not in imported
    assert not any("nu" == n.split(".")[-1] for n in names)
    assert "quantization_residual" not in inspect.getsource(oracle)


def test_random_draws_ranges():
    draws = oracle.random_draws(50, seed=7)
    assert draws == oracle.random_draws(50, seed=7)
    for qn, p in draws:
        assert 0.3 <= p.alpha <= 1 and 0 <= p.Omega <= 1 and 0.5 <= p.omega <= 2
        assert 0.5 <= p.A <= 2 and 0 <= p.B <= 1 and p.M == p.k == 1 and p.phi == 0
        assert 0 <= qn.n <= 3 and abs(qn.m) <= 3


@pytest.mark.slow
def test_oracle_batch_agreement():
    for qn, p in oracle.random_draws(20, seed=11):
        E = spectrum.solve_energy(qn, p).lowest_positive().E
        assert oracle.oracle_energy(qn, p, E).relative_difference < 1e-6
