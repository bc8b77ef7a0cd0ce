import math
import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from conftest import (CAPTION_E, CAPTION_E_NEG, CAPTION_P, CAPTION_QN, CLOSED_P, CLOSED_QN, physics_params,
                      quantum_numbers)
from dkposc import nu, reduction, spectrum
from dkposc.errors import DomainError, NoRealRootError, NumericError
from dkposc.params import PhysicsParams, QuantumNumbers


def test_closed_form_roots():
    report = spectrum.solve_energy(CLOSED_QN, CLOSED_P)
    assert [r.E for r in report.roots] == [-2.0, 2.0]
    assert report.lowest_positive().E == 2.0
    assert [r.branch for r in report.roots] == ["negative", "positive"]
    assert not any(r.flagged for r in report.roots)


@given(st.integers(0, 5), st.integers(-4, 4), st.floats(0.5, 2.0), st.floats(0.5, 2.0), st.floats(0.5, 2.0),
       st.floats(0.2, 1.0), st.floats(-2.0, 2.0))
def test_closed_form_family(n, m, M, w, A, alpha, k):
    p = PhysicsParams(M=M, omega=w, A=A, alpha=alpha, k=k, Omega=0.0, B=0.0)
    E = spectrum.solve_energy(QuantumNumbers(n, m), p).lowest_positive().E
    exact = math.sqrt(k**2 + M**2 + 2 * M * w * A * (2 * n + abs(m) / alpha))
    assert E == pytest.approx(exact, rel=1e-12)


def test_reference_roots():
    report = spectrum.solve_energy(CAPTION_QN, CAPTION_P)
    E = [r.E for r in report.roots]
    assert len(E) == 2
    assert E[1] == pytest.approx(CAPTION_E, rel=1e-13)
    assert E[0] == pytest.approx(CAPTION_E_NEG, rel=1e-13)


def test_solver_reports_bracket_and_residuals():
    report = spectrum.solve_energy(CAPTION_QN, CAPTION_P)
    lo, hi = report.bracket_grid["window"]
    assert lo == -hi and hi == spectrum.scan_window(CAPTION_QN, CAPTION_P)
    assert report.bracket_grid["points"] == spectrum.SCAN_POINTS
    assert len(report.iterations) == len(report.roots)
    for root in report.roots:
        assert root.residual <= 1e-12 * spectrum._residual_scale(root.E, CAPTION_QN, CAPTION_P)


def test_branch_selection():
    report = spectrum.solve_energy(CLOSED_QN, CLOSED_P)
    assert [r.E for r in report.branch("negative")] == [-2.0]
    assert len(report.branch("all")) == 2
    with pytest.raises(DomainError):
        report.branch("up")


def test_vanishing_scale_is_rejected():
    # the Gaussian scale needs M w A != 0 or Omega > 0
    with pytest.raises(DomainError):
        spectrum.solve_energy(CLOSED_QN, CLOSED_P.with_(A=0.0))


def test_no_real_root_raises_with_window(monkeypatch):
    monkeypatch.setattr(spectrum.nu, "quantization_residual", lambda E, qn, p: np.ones_like(np.asarray(E, float)))
    with pytest.raises(NoRealRootError) as info:
        spectrum.solve_energy(CLOSED_QN, CLOSED_P)
    assert info.value.window[1] == 2**spectrum.MAX_WINDOW_DOUBLINGS * spectrum.scan_window(CLOSED_QN, CLOSED_P)


def test_double_root_flagged(monkeypatch):
    # g = (E - 1)^2 touches zero at E = 1 without a sign change
    monkeypatch.setattr(spectrum.nu, "quantization_residual", lambda E, qn, p: (np.asarray(E, float) - 1.0) ** 2)
    with pytest.warns(RuntimeWarning, match="double root"):
        report = spectrum.solve_energy(CLOSED_QN, CLOSED_P)
    assert len(report.roots) == 1
    assert report.roots[0].flagged
    assert report.roots[0].E == pytest.approx(1.0, abs=1e-4)


def test_closed_form_is_fast():
    spectrum.solve_energy(CLOSED_QN, CLOSED_P)
    start = time.perf_counter()
    spectrum.solve_energy(CLOSED_QN, CLOSED_P)
    assert time.perf_counter() - start < 0.01


@given(physics_params(), quantum_numbers())
def test_roots_are_zeros_of_the_condition(p, qn):
    report = spectrum.solve_energy(qn, p)
    assert report.roots
    for root in report.roots:
        assert abs(nu.quantization_residual(root.E, qn, p)) <= 1e-12 * spectrum._residual_scale(root.E, qn, p)


@settings(max_examples=25)
@given(physics_params(), st.integers(-3, 3))
def test_spectral_ordering_in_n(p, m):
    E = [spectrum.solve_energy(QuantumNumbers(n, m), p).lowest_positive().E for n in range(6)]
    assert all(b > a for a, b in zip(E, E[1:]))


@pytest.mark.parametrize("n,a,x,expected", [(0, 3.3, 7.1, 1.0), (1, 2.0, 3.0, 0.0), (2, 1.5, 0.5, 2.75)])
def test_laguerre_examples(n, a, x, expected):
    assert spectrum.laguerre(n, a, x) == pytest.approx(expected, abs=1e-15)


@given(st.integers(0, 12), st.floats(-0.9, 6.0), st.floats(0.0, 30.0))
def test_laguerre_matches_scipy(n, a, x):
    ref = special.eval_genlaguerre(n, a, x)
    assert spectrum.laguerre(n, a, x) == pytest.approx(ref, rel=1e-10, abs=1e-10 * max(1.0, abs(ref)))


def test_laguerre_domain():
    with pytest.raises(DomainError):
        spectrum.laguerre(1, -1.0, 0.5)
    with pytest.raises(DomainError):
        spectrum.laguerre(-1, 0.0, 0.5)


def test_wavefunction_vanishes_at_origin():
    spec = spectrum.WavefunctionSpec(n=1, exponent=0.7, scale=1.3)
    assert spectrum.wavefunction(0.0, spec) == 0.0
    assert spectrum.wavefunction(0.0, spectrum.WavefunctionSpec(n=0, exponent=0.0, scale=1.0)) == 1.0


def _sign_changes(values):
    s = np.sign(values[np.abs(values) > 1e-300])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_node_count(n):
    spec = spectrum.WavefunctionSpec(n=n, exponent=1.3, scale=0.8)
    r = np.linspace(1e-6, 12.0, 20001)
    assert _sign_changes(spectrum.wavefunction(r, spec)) == n


def test_wavefunction_derivatives_against_finite_differences():
    spec = spectrum.WavefunctionSpec(n=3, exponent=0.4, scale=1.7, norm=2.0)
    r = np.linspace(0.2, 3.0, 15)
    h = 1e-5
    f, df, d2f = spectrum.wavefunction_derivatives(r, spec)
    np.testing.assert_allclose(f, spectrum.wavefunction(r, spec), rtol=1e-14)
    fp, fm = spectrum.wavefunction(r + h, spec), spectrum.wavefunction(r - h, spec)
    np.testing.assert_allclose(df, (fp - fm) / (2 * h), atol=1e-8)
    np.testing.assert_allclose(d2f, (fp - 2 * f + fm) / h**2, atol=1e-4)


def test_normalization_examples():
    spec = spectrum.WavefunctionSpec(n=0, exponent=0.0, scale=1.0)
    assert spectrum.normalization(spec) == pytest.approx(math.sqrt(2), rel=1e-12)
    doubled = spectrum.WavefunctionSpec(n=2, exponent=1.5, scale=2.0)
    single = spectrum.WavefunctionSpec(n=2, exponent=1.5, scale=1.0)
    # at fixed exponent the integral scales as scale^-(exponent+1)
    ratio = spectrum.normalization(doubled) / spectrum.normalization(single)
    assert ratio == pytest.approx(math.sqrt(2.0 ** (1.5 + 1)), rel=1e-12)


@given(st.integers(0, 4), st.floats(0.0, 4.0), st.floats(0.2, 5.0))
def test_normalized_wavefunction_integrates_to_one(n, exponent, scale):
    spec = spectrum.WavefunctionSpec(n=n, exponent=exponent, scale=scale)
    spec = spectrum.WavefunctionSpec(n=n, exponent=exponent, scale=scale, norm=spectrum.normalization(spec))
    outer = 10 * math.sqrt((2 * n + exponent + 2) / scale)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        total, _ = integrate.quad(lambda r: spectrum.wavefunction(r, spec) ** 2 * r, 0, outer, limit=400,
                                  epsabs=0, epsrel=1e-12)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_normalization_failure_is_numeric_error(monkeypatch):
    def broken(*args, **kwargs):
        raise spectrum.integrate.IntegrationWarning("no convergence")

    monkeypatch.setattr(spectrum.integrate, "quad", broken)
    with pytest.raises(NumericError):
        spectrum.normalization(spectrum.WavefunctionSpec(n=0, exponent=0.0, scale=1.0))


def test_wavefunction_spec_validation():
    with pytest.raises(DomainError):
        spectrum.WavefunctionSpec(n=0, exponent=-0.1, scale=1.0)
    with pytest.raises(DomainError):
        spectrum.WavefunctionSpec(n=0, exponent=0.0, scale=0.0)


@settings(max_examples=30)
@given(physics_params(), quantum_numbers())
def test_eigenfunction_residual_closure(p, qn):
    for root in spectrum.solve_energy(qn, p).roots:
        spec = spectrum.wavefunction_spec(root.E, qn, p)
        outer = 3 * math.sqrt((2 * spec.n + spec.exponent + 2) / spec.scale)
        r = np.geomspace(1e-3 / math.sqrt(spec.scale), outer, 100)
        res = reduction.radial_residual(lambda x: spectrum.wavefunction_derivatives(x, spec), r, root.E, qn, p,
                                        relative=True)
        assert res.max() < 1e-8


def test_charge_density_examples():
    p = PhysicsParams(M=1.0, alpha=1.0, Omega=0.0)
    assert spectrum.charge_density(0.7, 2.0, QuantumNumbers(0, 1), p, 1.0) == 4.0
    assert spectrum.charge_density(0.7, 2.0, QuantumNumbers(0, 1), p, 0.0) == 0.0


def test_charge_density_sign_change_radius():
    p = PhysicsParams(M=1.0, alpha=0.8, Omega=0.5)
    qn, E = QuantumNumbers(0, 1), 3.0
    r_star = math.sqrt((E * p.alpha - qn.m * p.Omega) / (E * p.alpha * p.Omega**2))
    r = np.linspace(0.01, 2 * r_star, 4001)
    J = spectrum.charge_density(r, E, qn, p, np.ones_like(r))
    flip = np.flatnonzero(np.sign(J[1:]) != np.sign(J[:-1]))
    assert flip.size == 1
    assert r[flip[0]] <= r_star <= r[flip[0] + 1]


def test_charge_density_rejects_negative_radius():
    with pytest.raises(DomainError):
        spectrum.charge_density(-1.0, 1.0, CLOSED_QN, CLOSED_P, 1.0)


def test_ab_shift_map_identity_and_equivalence():
    assert spectrum.ab_shift_map(CAPTION_QN, CAPTION_P, 0) == (CAPTION_QN, CAPTION_P)
    a = spectrum.solve_energy(QuantumNumbers(1, 0), CAPTION_P.with_(phi=0.0))
    b = spectrum.solve_energy(QuantumNumbers(1, 1), CAPTION_P.with_(phi=1.0))
    assert [r.E for r in a.roots] == [r.E for r in b.roots]
    with pytest.raises(DomainError):
        spectrum.ab_shift_map(CAPTION_QN, CAPTION_P, 0.5)


@settings(max_examples=50)
@given(physics_params(), quantum_numbers(), st.sampled_from([1, 2, 3]))
def test_flux_periodicity(p, qn, s):
    shifted = spectrum.solve_energy(qn, p.with_(phi=p.phi + s))
    mapped = spectrum.solve_energy(*spectrum.ab_shift_map(qn, p, s))
    assert len(shifted.roots) == len(mapped.roots)
    for x, y in zip(shifted.roots, mapped.roots):
        assert x.E == pytest.approx(y.E, rel=1e-12)
