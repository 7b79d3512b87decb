import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetaspin.chars import character
from zetaspin.errors import PoleError
from zetaspin.phaseop import (
    PhaseBasis,
    aggregate_eigenphases,
    aggregate_period,
    aggregate_phase_diagonal,
    aggregate_phase_matrix,
    aggregate_phase_projector_form,
    aggregate_resolvent_trace,
    chain_for_cutoff,
    covariance_residual,
    exp_phase_operator,
    lattice_index,
    partition_zeros_in_window,
    phase_operator,
    phase_state_matrix,
    resolvent_trace_single,
    spectral_zero_density,
    trace_exp,
    zero_trace_at,
)
from zetaspin.spinchain import ChainConfig, product_trace

CHI4 = character(4, 1)
# frozen from a run of spectral_zero_density on sites {2, 3}, n = 1, phi = -2i
ZERO_DENSITY_AT_M2I = -0.2484906649788


def test_phase_states_examples():
    U = phase_state_matrix(PhaseBasis(1))
    np.testing.assert_allclose(U, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)
    U3 = phase_state_matrix(PhaseBasis(2)) * np.sqrt(3)
    np.testing.assert_allclose(U3**3, np.ones((3, 3)), atol=1e-14)


def test_phase_operator_2x2():
    np.testing.assert_allclose(phase_operator(PhaseBasis(1)), np.pi / 2 * np.array([[1, -1], [-1, 1]]), atol=1e-15)


def test_phase_operator_spectrum_and_trace():
    for basis in (PhaseBasis(4, 0.7), PhaseBasis(3, np.log(5), 0.9)):
        phi = phase_operator(basis)
        np.testing.assert_allclose(np.linalg.eigvalsh(phi), np.sort(basis.eigenvalues), atol=1e-12)
    b = PhaseBasis(5, 1.3)
    assert np.trace(phase_operator(b)).real == pytest.approx(b.phases.sum(), rel=1e-13)


def test_covariance_examples():
    b = PhaseBasis(1)
    rep = covariance_residual(b, 1j * np.pi)
    assert rep.residual < 1e-12 and rep.special and rep.lattice_k == 1
    rep0 = covariance_residual(b, 0)
    assert rep0.residual == 0 and rep0.special and rep0.lattice_k == 0
    rep6 = covariance_residual(b, 0.6j)
    assert rep6.residual > 0.1 and not rep6.special


def test_trace_exp_examples():
    assert abs(trace_exp(PhaseBasis(1), 1j * np.pi)) < 1e-15
    assert trace_exp(PhaseBasis(6, 2.0), 0) == 7
    cfg = ChainConfig((5,), 3)
    assert trace_exp(PhaseBasis(3, np.log(5)), -0.4 + 1j) == pytest.approx(product_trace(cfg, -0.4 + 1j), rel=1e-14)


def test_resolvent_single_examples():
    b = PhaseBasis(1)
    assert resolvent_trace_single(b, np.pi / 2) == pytest.approx(1, abs=1e-15)
    assert abs(resolvent_trace_single(b, np.pi + 1e-3)) > 500
    with pytest.raises(PoleError):
        resolvent_trace_single(b, np.pi + 1e-13)


def test_aggregate_diagonal_two_sites():
    d = aggregate_phase_diagonal(ChainConfig((2, 3), 1))
    want = [1, np.exp(1j * np.pi / np.log(3)), np.exp(1j * np.pi / np.log(2)), 1]
    np.testing.assert_allclose(d, want, atol=1e-15)


def test_aggregate_resolvent_poles():
    cfg = ChainConfig((2, 3), 1)
    for pole in (0.0, np.pi / np.log(2), np.pi / np.log(3)):
        with pytest.raises(PoleError):
            aggregate_resolvent_trace(cfg, pole)
        assert abs(aggregate_resolvent_trace(cfg, pole + 1e-6)) > 1e5


def test_aggregate_single_site_reduces():
    cfg = ChainConfig((7,), 3)
    b = PhaseBasis(3, np.log(7))
    for phi in (0.3, 1.1, 2.9):
        assert aggregate_resolvent_trace(cfg, phi) == pytest.approx(resolvent_trace_single(b, phi), abs=1e-12)


def test_projector_form_matches_eigenbasis():
    for sites, n in (((2, 3), 1), ((2, 3, 5), 2), ((3, 7), 3)):
        cfg = ChainConfig(sites, n)
        assert np.max(np.abs(aggregate_phase_matrix(cfg) - aggregate_phase_projector_form(cfg))) < 1e-12


def test_projector_form_rejects_twist():
    with pytest.raises(ValueError):
        aggregate_phase_projector_form(ChainConfig((3,), 1, twist=CHI4))


def test_twisted_aggregate_uses_shifted_phases():
    cfg = ChainConfig((3, 5), 1, twist=CHI4)
    theta = aggregate_eigenphases(cfg)
    w3 = np.pi / np.log(3)  # chi(3) = -1 is half a turn
    assert theta[0] == 0 and theta[3] == 0
    assert theta[2] == pytest.approx(np.pi / np.log(3) + w3)
    assert theta[1] == pytest.approx(np.pi / np.log(5))


def test_zero_density_example():
    z = spectral_zero_density(chain_for_cutoff(3, 1), -2j)
    assert abs(z.finite_difference - z.closed_form) < 1e-6
    assert abs(z.closed_form - ZERO_DENSITY_AT_M2I) < 1e-12
    assert abs(z.pole_sum - z.closed_form) < 1e-9


def test_zero_density_pole_growth():
    cfg = chain_for_cutoff(2, 1)
    zero = np.pi / np.log(2)
    near = [abs(spectral_zero_density(cfg, zero + d).closed_form) for d in (1e-2, 1e-3, 1e-4)]
    assert near[1] / near[0] == pytest.approx(10, rel=0.05)
    assert near[2] / near[1] == pytest.approx(10, rel=0.01)


def test_zero_density_prime_increment():
    # adding site 5 changes the value by site 5's own log-derivative term only
    a = spectral_zero_density(chain_for_cutoff(3, 2), 0.7 - 1.5j).closed_form
    b = spectral_zero_density(chain_for_cutoff(5, 2), 0.7 - 1.5j).closed_form
    c = spectral_zero_density(ChainConfig((5,), 2), 0.7 - 1.5j).closed_form
    assert b == pytest.approx(a + c, abs=1e-12)


def test_aggregate_period_and_zeros():
    cfg = ChainConfig((2, 3, 5), 2)
    T = aggregate_period(cfg)
    assert T == pytest.approx(2 * np.pi / np.log(5))
    zeros = partition_zeros_in_window(cfg, 0, T)
    assert len(zeros) == 5
    assert max(abs(zero_trace_at(cfg, z)) for z in zeros) < 1e-12


ns = st.integers(1, 64)
fields = st.floats(0.2, 4.0)


@given(st.integers(1, 512), fields)
def test_unitarity(n, B):
    U = phase_state_matrix(PhaseBasis(n, B))
    assert np.linalg.norm(U.conj().T @ U - np.eye(n + 1)) < 1e-12


@given(st.integers(1, 48), fields, st.floats(-np.pi, np.pi))
def test_spectral_reconstruction(n, B, omega):
    b = PhaseBasis(n, B, omega)
    U = phase_state_matrix(b)
    phi = phase_operator(b)
    assert np.linalg.norm(phi - (U * b.eigenvalues) @ U.conj().T) < 1e-12 * max(1, np.linalg.norm(phi))
    assert np.linalg.norm(phi - phi.conj().T) < 1e-12


@given(ns, fields, st.data())
def test_covariance_on_lattice(n, B, data):
    k = data.draw(st.integers(0, n))
    wrap = data.draw(st.integers(-2, 2))
    b = PhaseBasis(n, B)
    beta = -1j * (2 * np.pi * k / (B * (n + 1)) + wrap * 2 * np.pi / B)
    rep = covariance_residual(b, beta)
    assert rep.special and rep.lattice_k == k
    assert rep.residual < 1e-10
    if k:
        assert abs(trace_exp(b, beta)) < 1e-10


@given(ns, fields, st.floats(-1, 1), st.floats(0, 1))
def test_covariance_off_lattice(n, B, re, frac):
    beta = complex(re, frac * 2 * np.pi / B)
    b = PhaseBasis(n, B)
    z = beta * B * (n + 1) / (2j * np.pi)
    if abs(z - round(z.real)) * 2 * np.pi < 0.1:
        return
    rep = covariance_residual(b, beta)
    assert not rep.special and rep.residual > 1e-2


@given(ns, fields, st.complex_numbers(max_magnitude=3))
def test_residual_closed_form(n, B, beta):
    # ||E^-1 V E - e^(-B beta) V|| = |e^(beta B n) - e^(-beta B)| for the untwisted basis
    b = PhaseBasis(n, B)
    want = abs(np.exp(beta * B * n) - np.exp(-beta * B))
    assert covariance_residual(b, beta).residual == pytest.approx(want, rel=1e-9, abs=1e-9)


@given(st.integers(1, 8), st.floats(0.3, 3.0), st.floats(-np.pi, np.pi), st.data())
def test_twisted_lattice_index(n, B, omega, data):
    k = data.draw(st.integers(0, n))
    b = PhaseBasis(n, B, omega)
    beta = -1j * (2 * np.pi * k / (B * (n + 1)) + omega / B)
    assert lattice_index(b, beta) == k
    assert covariance_residual(b, beta).residual < 1e-10


@given(st.integers(1, 8), fields)
def test_exp_phase_unitary(n, B):
    V = exp_phase_operator(PhaseBasis(n, B))
    assert np.linalg.norm(V @ V.conj().T - np.eye(n + 1)) < 1e-12


@given(st.integers(1, 40), fields, st.floats(-np.pi, np.pi))
def test_shift_matches_spectral_sum(n, B, omega):
    b = PhaseBasis(n, B, omega)
    U = phase_state_matrix(b)
    spectral = (U * np.exp(1j * B * b.eigenvalues)) @ U.conj().T
    assert np.max(np.abs(spectral - exp_phase_operator(b))) < 1e-12
