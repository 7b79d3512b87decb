from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from zetaspin.chars import character, trivial
from zetaspin.errors import BasisTooLargeError
from zetaspin.lfunc import TruncationSpec, partition_ratio
from zetaspin.toeplitz import (
    character_vector,
    commutator_identity_check,
    commutator_with_diagonal,
    hermitian_eigs,
    integer_basis,
    phase_from_diagonal,
    similarity_phase,
    subspace_condition_value,
    subspace_defect,
    szego_summary,
    toeplitz_phase,
    total_phase,
)

CHI4 = character(4, 1)


@lru_cache(maxsize=None)
def spectrum(n):
    return hermitian_eigs(toeplitz_phase(n))[0]


def test_toeplitz_2x2():
    T = toeplitz_phase(1)
    np.testing.assert_array_equal(T, [[0, -1j], [1j, 0]])
    np.testing.assert_allclose(hermitian_eigs(T)[0], [-1, 1], atol=1e-15)


def test_toeplitz_3x3_frozen():
    # characteristic polynomial l^3 - (9/4) l
    np.testing.assert_allclose(hermitian_eigs(toeplitz_phase(2))[0], [-1.5, 0, 1.5], atol=1e-14)


def test_toeplitz_hermitian_zero_diagonal():
    T = toeplitz_phase(17)
    assert np.array_equal(T, T.conj().T)
    assert not np.any(np.diag(T))
    with pytest.raises(ValueError):
        toeplitz_phase(0)


def test_commutator_examples():
    chk = commutator_identity_check(toeplitz_phase(1), [0, 1], [1, -1])
    np.testing.assert_allclose(chk.w, [1j, -1j], atol=1e-15)
    basis = integer_basis(3, 1)
    v = np.array([1, -1, -1, 1])
    chk = commutator_identity_check(total_phase(basis), basis.log_values, v)
    np.testing.assert_allclose(chk.w, 1j * v, atol=1e-14)
    d = 5
    chk = commutator_identity_check(toeplitz_phase(d - 1), np.arange(d), np.ones(d))
    np.testing.assert_allclose(chk.w, 1j * (1 - d) * np.ones(d), atol=1e-13)


def test_commutator_rejects_bad_input():
    with pytest.raises(ValueError):
        commutator_identity_check(toeplitz_phase(1), [1, 1], [1, 0])
    with pytest.raises(ValueError):
        commutator_identity_check(toeplitz_phase(2), [0, 1, 3], [1, 0, 0])


def test_eigs_examples():
    w, V = hermitian_eigs(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(w, [1, 2, 3])
    w = spectrum(255)
    assert w.min() >= -np.pi and w.max() <= np.pi


def test_eigs_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigs(np.array([[0, 1], [0, 0]]))


def test_szego_examples():
    s = szego_summary(hermitian_eigs(toeplitz_phase(1))[0])
    assert s.symmetry_defect == 0 and s.max_abs == pytest.approx(1, abs=1e-15)
    with pytest.raises(ValueError):
        szego_summary([1.0, 0.0])


def test_szego_large():
    s = szego_summary(spectrum(255))
    assert abs(s.band_fractions[np.pi / 2] - 0.5) <= 0.05
    assert s.max_abs <= np.pi + 1e-6 and s.symmetry_defect < 1e-8


@pytest.mark.parametrize("n", [63, 127])
def test_spectrum_bounded_symmetric(n):
    w = spectrum(n)
    s = szego_summary(w)
    assert s.max_abs <= np.pi + 1e-6 and s.symmetry_defect < 1e-8
    # zero is an eigenvalue exactly when the dimension is odd
    assert (np.min(np.abs(w)) < 1e-10) == ((n + 1) % 2 == 1)


def test_similarity_examples():
    T = toeplitz_phase(3)
    np.testing.assert_array_equal(similarity_phase(T, np.arange(4), 0), T)
    res, cond = subspace_defect(np.array([0.0, 1.0]), 1j * np.pi, [1, 1])
    assert abs(cond) < 1e-15 and res < 1e-15
    with pytest.raises(OverflowError):
        similarity_phase(T, np.arange(4) * 300.0, 1.0)


def test_integer_basis_examples():
    assert integer_basis(3, 1).members == (1, 2, 3, 6)
    assert integer_basis(2, 3).members == (1, 2, 4, 8)
    b = integer_basis(5, 2)
    assert len(b) == 27 and b.members[-1] == 900
    assert b.exponents[b.index_of(900)] == (2, 2, 2)
    with pytest.raises(BasisTooLargeError):
        integer_basis(29, 2)


def test_total_phase_examples():
    T = total_phase(integer_basis(2, 1))
    np.testing.assert_allclose(T, np.array([[0, -1j], [1j, 0]]) / np.log(2), rtol=1e-15)
    T = total_phase(integer_basis(5, 2))
    assert np.array_equal(T, T.conj().T)


def test_subspace_condition_examples():
    assert abs(subspace_condition_value(1j * np.pi / np.log(2), integer_basis(2, 1), trivial())) < 1e-15
    assert subspace_condition_value(0, integer_basis(3, 1), CHI4) == 0


def test_subspace_condition_equals_partition_ratio():
    for beta in (-2.0, -0.7 + 3j, 0.4 - 1j):
        for chi in (None, CHI4, character(5, 1)):
            b = integer_basis(7, 2)
            want = partition_ratio(beta, TruncationSpec(7, exponent_cutoff=2), chi)
            assert subspace_condition_value(beta, b, chi) == pytest.approx(want, rel=1e-12)


def test_factorized_vector_condition_small():
    # the character vector obeys the Phi_beta law exactly when the condition value vanishes
    b = integer_basis(3, 1)
    h = b.log_values
    for beta, zero in ((1j * np.pi / np.log(2), True), (1j * np.pi / np.log(3), True), (0.3j, False)):
        v = character_vector(b).global_vector(b)
        res, cond = subspace_defect(h, beta, v)
        value = subspace_condition_value(beta, b)
        assert cond == pytest.approx(value, abs=1e-14)
        assert (res < 1e-12) == zero
    # per-factor sums are recorded for diagnosis
    fv = character_vector(b, beta=1j * np.pi / np.log(2))
    assert fv.factor_sums()[0] == pytest.approx(0, abs=1e-15)


increasing = st.integers(2, 512).flatmap(
    lambda d: hnp.arrays(np.float64, d, elements=st.floats(1e-3, 2.0)).map(np.cumsum)
)


@given(increasing, st.data())
def test_commutator_identity_random(h, data):
    d = len(h)
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    chk = commutator_identity_check(phase_from_diagonal(h), h, v)
    assert chk.defect < 1e-10 * (1 + np.linalg.norm(v))
    v0 = v - v.mean()
    w0 = commutator_with_diagonal(phase_from_diagonal(h), h, v0)
    assert np.linalg.norm(w0 - 1j * v0) < 1e-10 * (1 + np.linalg.norm(v0))


@given(st.integers(2, 64), st.complex_numbers(max_magnitude=2), st.data())
def test_similarity_condition_iff(d, beta, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    h = np.cumsum(rng.uniform(0.05, 1.0, d))
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    e = np.exp(beta * h)
    v_good = v - e.conj() * (e @ v) / (e @ e.conj())  # project onto sum e_n v_n = 0
    res, cond = subspace_defect(h, beta, v_good)
    scale = np.linalg.norm(v_good) * np.max(np.abs(e)) / np.min(np.abs(e))
    assert abs(cond) < 1e-12 * np.linalg.norm(e) * np.linalg.norm(v)
    assert res < 1e-9 * (1 + scale)
    res_bad, cond_bad = subspace_defect(h, beta, v)
    # the defect is the rank-one term i (sum e v) E^-1 1
    assert res_bad == pytest.approx(abs(cond_bad) * np.linalg.norm(1 / e), rel=1e-6)


@given(st.integers(1, 40), st.data())
def test_jacobi_matches_lapack(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = A + A.conj().T
    w, V = hermitian_eigs(A)
    norm = np.linalg.norm(A)
    assert np.max(np.linalg.norm(A @ V - V * w, axis=0)) <= 1e-10 * norm
    assert np.linalg.norm(V.conj().T @ V - np.eye(n)) < 1e-10
    np.testing.assert_allclose(w, np.linalg.eigvalsh(A), atol=1e-10 * norm)


@given(st.integers(1, 24), st.data())
def test_jacobi_degenerate_spectrum(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    vals = rng.integers(-2, 3, size=n).astype(float)
    A = (Q * vals) @ Q.conj().T
    A = (A + A.conj().T) / 2
    w, V = hermitian_eigs(A)
    np.testing.assert_allclose(w, np.sort(vals), atol=1e-10)
    assert np.max(np.linalg.norm(A @ V - V * w, axis=0)) <= 1e-10 * max(np.linalg.norm(A), 1)


@given(st.integers(1, 48))
def test_toeplitz_symmetry_any_size(n):
    s = szego_summary(hermitian_eigs(toeplitz_phase(n))[0])
    assert s.symmetry_defect < 1e-8 and s.max_abs <= np.pi


@given(st.integers(2, 7), st.integers(1, 3))
def test_integer_basis_invariants(p_cut, n_cut):
    b = integer_basis(p_cut, n_cut)
    assert b.members[0] == 1 and len(set(b.members)) == len(b)
    assert np.all(np.diff(b.log_values) > 0)
    np.testing.assert_allclose(b.log_values, np.log(b.members), rtol=1e-14, atol=1e-15)
