import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetaspin.chars import character, evaluate, totient
from zetaspin.errors import BasisTooLargeError
from zetaspin.lfunc import predicted_fisher_zeros, single_site_trace
from zetaspin.spinchain import (
    ChainConfig,
    energy,
    enumerate_basis,
    partition_trace,
    product_trace,
    twisted_weight,
)

CHI4 = character(4, 1)
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23]


def test_enumerate_examples():
    assert enumerate_basis(ChainConfig((2,), 1)).tolist() == [[0], [1]]
    assert enumerate_basis(ChainConfig((2, 3), 1)).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert len(enumerate_basis(ChainConfig((2, 3, 5), 2))) == 27


def test_enumerate_guard():
    cfg = ChainConfig(tuple(PRIMES), 7)
    with pytest.raises(BasisTooLargeError):
        enumerate_basis(cfg)
    res = partition_trace(cfg, -1.0)
    assert res.product_only


def test_config_validation():
    for bad in [(), (4,), (3, 2), (2, 2)]:
        with pytest.raises(ValueError):
            ChainConfig(bad, 1)
    with pytest.raises(ValueError):
        ChainConfig((2,), 0)
    with pytest.raises(ValueError):
        ChainConfig((2,), 1, field={2: -1.0})


def test_energy_examples():
    cfg = ChainConfig((2, 3), 1)
    assert energy(cfg, (0, 0)) == 0
    assert energy(cfg, (1, 1)) == pytest.approx(np.log(6), rel=1e-15)
    assert energy(ChainConfig((2,), 3), (3,)) == pytest.approx(np.log(8), rel=1e-15)
    with pytest.raises(ValueError):
        energy(cfg, (2, 0))


def test_trace_examples():
    assert abs(partition_trace(ChainConfig((2,), 1), 1j * np.pi / np.log(2)).value) < 1e-15
    assert partition_trace(ChainConfig((2, 3), 1), -2).value == pytest.approx(25 / 18, rel=1e-14)
    assert partition_trace(ChainConfig((2, 3), 1, twist=CHI4), -1).value == pytest.approx(2 / 3, rel=1e-14)


def test_twisted_weight_examples():
    cfg3 = ChainConfig((3,), 2, twist=CHI4)
    assert twisted_weight(cfg3, (0,)) == 1
    assert twisted_weight(cfg3, (2,)) == 1
    assert twisted_weight(ChainConfig((2,), 1, twist=CHI4), (1,)) == 0


def test_untwisted_weight_is_one():
    cfg = ChainConfig((2, 5), 2)
    assert all(twisted_weight(cfg, idx) == 1 for idx in enumerate_basis(cfg))


chains = st.builds(
    lambda sites, n: ChainConfig(tuple(sorted(sites)), n),
    st.lists(st.sampled_from(PRIMES), min_size=1, max_size=4, unique=True),
    st.integers(1, 6),
).filter(lambda c: c.dimension <= 4096)
characters = st.integers(2, 15).flatmap(lambda k: st.integers(0, totient(k) - 1).map(lambda i: character(k, i)))
betas = st.complex_numbers(max_magnitude=4).filter(lambda b: b.real < 0.7)


@given(chains, betas, st.one_of(st.none(), characters))
def test_two_paths_agree(cfg, beta, chi):
    cfg = ChainConfig(cfg.sites, cfg.n_cut, twist=chi)
    res = partition_trace(cfg, beta)
    assert res.discrepancy < 1e-12


@given(chains, st.data())
def test_trace_vanishes_at_each_site_fisher_zero(cfg, data):
    p = data.draw(st.sampled_from(cfg.sites))
    beta = data.draw(st.sampled_from(predicted_fisher_zeros(p, cfg.n_cut)))
    assert abs(product_trace(cfg, beta)) < 1e-10


@given(chains, betas)
def test_trace_is_product_of_single_sites(cfg, beta):
    want = np.prod([single_site_trace(beta, cfg.n_cut, np.log(p)) for p in cfg.sites])
    assert abs(product_trace(cfg, beta) - want) <= 1e-12 * max(1, abs(want))


@given(chains, characters, st.data())
def test_weight_is_character_of_product(cfg, chi, data):
    cfg = ChainConfig(cfg.sites, cfg.n_cut, twist=chi)
    idx = data.draw(st.sampled_from(enumerate_basis(cfg).tolist()))
    n = int(np.prod([p**e for p, e in zip(cfg.sites, idx)]))
    assert abs(twisted_weight(cfg, idx) - evaluate(chi, n)) < 1e-12


@given(chains, st.data())
def test_energy_additive_over_split(cfg, data):
    idx = data.draw(st.sampled_from(enumerate_basis(cfg).tolist()))
    cut = data.draw(st.integers(0, len(cfg.sites)))
    parts = 0.0
    for lo, hi in ((0, cut), (cut, len(cfg.sites))):
        if hi > lo:
            parts += energy(ChainConfig(cfg.sites[lo:hi], cfg.n_cut), idx[lo:hi])
    assert parts == pytest.approx(energy(cfg, idx), abs=1e-12)
