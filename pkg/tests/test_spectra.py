import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvedq import spectra
from curvedq.model import Coulomb, Oscillator, ProblemSpec, QuantumNumbers, SpaceKind

S = SpaceKind


def osc(space, n, R, nu):
    # omega from nu = sqrt(omega^2 R^4 + 1/4)
    return ProblemSpec(space, n, R, Oscillator(math.sqrt(nu * nu - 0.25) / R**2))


def test_oscillator_nu_examples():
    assert spectra.oscillator_nu(0.0, 1.0) == 0.5
    assert spectra.oscillator_nu(math.sqrt(2.0), 1.0) == pytest.approx(1.5)
    assert spectra.oscillator_nu(math.sqrt(20.0), 1.0) == pytest.approx(4.5)


def test_oscillator_energy_examples():
    e = spectra.oscillator_energy(osc(S.SPHERE, 2, 1.0, 1.5), QuantumNumbers(0, 0, "oscillator"))
    assert e.energy == pytest.approx(2.0, rel=1e-14)
    e = spectra.oscillator_energy(osc(S.TWO_SHEETED, 2, 1.0, 4.5), QuantumNumbers(0, 0, "oscillator"))
    assert e.energy == pytest.approx(4.0, rel=1e-14)


def test_sphere_oscillator_flat_limit():
    q = QuantumNumbers(1, 1, "oscillator")
    for R in (1e2, 1e3):
        e = spectra.oscillator_energy(ProblemSpec(S.SPHERE, 3, R, Oscillator(1.3)), q).energy
        assert abs(e - 1.3 * (3 + 1.5)) < 20 / R**2


def test_coulomb_sigma_examples():
    assert spectra.coulomb_sigma(3, 1.0, 1.0, QuantumNumbers(0, 0)) == 1.0
    assert spectra.coulomb_sigma(3, 1.0, 2.0, QuantumNumbers(0, 0)) == 2.0
    assert spectra.coulomb_sigma(3, 1.0, 1.0, QuantumNumbers(0, 2), S.ONE_SHEETED) == 0.5
    with pytest.raises(ValueError):
        spectra.coulomb_sigma(2, 1.0, 1.0, QuantumNumbers(1, 0), S.ONE_SHEETED)


def test_coulomb_energy_examples():
    assert spectra.coulomb_energy(ProblemSpec(S.SPHERE, 3, 1.0, Coulomb(1.0)),
                                  QuantumNumbers(0, 0)).energy == pytest.approx(-0.5, rel=1e-15)
    assert spectra.coulomb_energy(ProblemSpec(S.TWO_SHEETED, 3, 1.0, Coulomb(2.0)),
                                  QuantumNumbers(0, 0)).energy == pytest.approx(0.0, abs=1e-15)
    assert spectra.coulomb_energy(ProblemSpec(S.ONE_SHEETED, 3, 1.0, Coulomb(1.0)),
                                  QuantumNumbers(0, 2)).energy == pytest.approx(-2.625, rel=1e-15)


def test_unbound_error_names_inequality():
    with pytest.raises(spectra.UnboundStateError, match="nu - L - 2 n_r - n/2"):
        spectra.oscillator_energy(osc(S.TWO_SHEETED, 2, 1.0, 4.5), QuantumNumbers(2, 0, "oscillator"))


def test_bound_count_examples():
    spec = osc(S.TWO_SHEETED, 2, 1.0, 4.5)
    assert [e.quantum.n_r for e in spectra.enumerate_bound_states(spec, 0)] == [0, 1]
    Ns = sorted({e.quantum.N for L in range(6) for e in spectra.enumerate_bound_states(spec, L)})
    assert Ns == [0, 1, 2, 3]
    assert spectra.bound_state_count(ProblemSpec(S.TWO_SHEETED, 3, 1.0, Coulomb(2.0)), 0) == 1
    assert spectra.bound_state_count(ProblemSpec(S.SPHERE, 3, 1.0, Coulomb(0.1)), 0, cap=17) == 17


def test_marginal_state_unbound():
    # nu - L - 2 n_r - n/2 = 0 exactly at nu = 1 + 0 + 1 for n = 2, n_r = 0, L = 1
    spec = osc(S.TWO_SHEETED, 2, 1.0, 2.0)
    assert not spectra.is_bound(spec, QuantumNumbers(0, 1, "oscillator"))
    # one-sheeted Coulomb: q^2 = alpha R exactly
    spec = ProblemSpec(S.ONE_SHEETED, 3, 1.0, Coulomb(4.0))
    assert not spectra.is_bound(spec, QuantumNumbers(0, 2))


@given(st.integers(2, 6), st.floats(0.3, 5.0), st.floats(0.1, 4.0), st.integers(0, 8))
def test_sphere_oscillator_increasing(n, R, omega, N):
    spec = ProblemSpec(S.SPHERE, n, R, Oscillator(omega))
    e = [spectra.oscillator_energy(spec, QuantumNumbers.from_principal(k, k % 2, "oscillator")).energy
         for k in (N, N + 1)]
    assert e[1] > e[0]


@given(st.integers(2, 6), st.floats(0.3, 3.0), st.floats(0.5, 40.0), st.integers(0, 6))
def test_degeneracy_in_N(n, R, g, N):
    for space in (S.SPHERE, S.TWO_SHEETED):
        co = ProblemSpec(space, n, R, Coulomb(g / R))
        es = []
        for L in range(N + 1):
            q = QuantumNumbers(N - L, L)
            if spectra.is_bound(co, q):
                es.append(spectra.coulomb_energy(co, q).energy)
        assert max(es, default=0) - min(es, default=0) <= 1e-12 * max(1.0, *map(abs, es or [0]))
        os = ProblemSpec(space, n, R, Oscillator(g / R**2))
        es = []
        for L in range(N % 2, N + 1, 2):
            q = QuantumNumbers.from_principal(N, L, "oscillator")
            if spectra.is_bound(os, q):
                es.append(spectra.oscillator_energy(os, q).energy)
        assert max(es, default=0) - min(es, default=0) <= 1e-12 * max(1.0, *map(abs, es or [0]))


@given(st.integers(2, 6), st.floats(0.3, 3.0), st.floats(0.05, 3.0), st.integers(0, 4), st.integers(4, 12))
def test_one_sheeted_oscillator_depends_on_2nr_minus_L(n, R, g, n_r, L):
    spec = ProblemSpec(S.ONE_SHEETED, n, R, Oscillator(g / R**2))
    a, b = QuantumNumbers(n_r, L, "oscillator"), QuantumNumbers(n_r + 1, L + 2, "oscillator")
    if spectra.is_bound(spec, a) and spectra.is_bound(spec, b):
        ea = spectra.oscillator_energy(spec, a).energy
        eb = spectra.oscillator_energy(spec, b).energy
        assert ea == pytest.approx(eb, rel=1e-12, abs=1e-12)


@given(st.sampled_from(["oscillator", "coulomb"]), st.sampled_from([S.TWO_SHEETED, S.ONE_SHEETED]),
       st.integers(2, 6), st.floats(0.3, 3.0), st.floats(0.05, 40.0), st.integers(0, 10))
def test_bound_entries_have_negative_epsilon(kind, space, n, R, g, L):
    inter = Oscillator(g / R**2) if kind == "oscillator" else Coulomb(g / R)
    spec = ProblemSpec(space, n, R, inter)
    th = spectra.continuum_threshold(spec)
    for e in spectra.enumerate_bound_states(spec, L, 30):
        assert e.is_bound
        assert e.epsilon < 0
        assert e.etilde < th
