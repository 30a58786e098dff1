import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvedq import spectra, wavefn
from curvedq.model import Coulomb, Oscillator, ProblemSpec, SpaceKind
from curvedq.specfun import integrate

S = SpaceKind

# frozen closed forms for the two anchor states
C_SPHERE = math.sqrt(8.0 / (1.0 - math.exp(-2.0 * math.pi)))  # 2.8310717...
A2_H2 = 24.0


def spec_of(space, kind, n, R, g):
    inter = Oscillator(g) if kind == "oscillator" else Coulomb(g)
    return ProblemSpec(space, n, R, inter)


def test_sphere_coulomb_ground_state():
    st_ = wavefn.coulomb_state(spec_of(S.SPHERE, "coulomb", 3, 1.0, 1.0), 0, 0)
    assert st_.norm_constant == pytest.approx(C_SPHERE, rel=1e-12)
    assert st_.norm_constant == pytest.approx(2.8311, abs=1e-3)
    x = np.linspace(0.1, 3.0, 7)
    assert np.allclose(st_(x), C_SPHERE * np.sin(x) * np.exp(-x), rtol=1e-13)
    assert float(st_(math.pi / 2)) == pytest.approx(0.5886, abs=1e-4)


def test_two_sheeted_coulomb_ground_state():
    st_ = wavefn.coulomb_state(spec_of(S.TWO_SHEETED, "coulomb", 3, 1.0, 2.0), 0, 0)
    assert st_.norm_constant**2 == pytest.approx(A2_H2, abs=1e-6)
    x = np.linspace(0.1, 5.0, 7)
    assert np.allclose(st_(x), math.sqrt(24.0) * np.sinh(x) * np.exp(-2 * x), rtol=1e-12)


def test_sphere_oscillator_ground_state_shape():
    spec = spec_of(S.SPHERE, "oscillator", 2, 1.0, math.sqrt(2.0))  # nu = 3/2
    st_ = wavefn.oscillator_state(spec, 0, 0)
    x = np.linspace(0.1, 1.4, 6)
    ratio = st_(x) / (np.sin(x) ** 0.5 * np.cos(x) ** 2.0)
    assert np.allclose(ratio, ratio[0], rtol=1e-13)
    assert wavefn.overlap(st_, st_) == pytest.approx(1.0, abs=1e-10)


def test_two_sheeted_oscillator_ground_state_shape():
    spec = spec_of(S.TWO_SHEETED, "oscillator", 3, 1.0, math.sqrt(20.0))  # nu = 9/2
    st_ = wavefn.oscillator_state(spec, 0, 0)
    x = np.linspace(0.1, 4.0, 6)
    ratio = st_(x) / (np.sinh(x) * np.cosh(x) ** (-4.0))
    assert np.allclose(ratio, ratio[0], rtol=1e-12)


def test_unbound_state_raises():
    with pytest.raises(spectra.UnboundStateError):
        wavefn.coulomb_state(spec_of(S.TWO_SHEETED, "coulomb", 3, 1.0, 2.0), 1, 0)


def test_evaluate_orders_and_domain():
    st_ = wavefn.coulomb_state(spec_of(S.SPHERE, "coulomb", 3, 1.0, 1.0), 0, 0)
    x = 0.8
    z, z1, z2 = (float(wavefn.evaluate(st_, x, k)) for k in range(3))
    assert z1 == pytest.approx(C_SPHERE * math.exp(-x) * (math.cos(x) - math.sin(x)), rel=1e-13)
    assert z2 == pytest.approx(-2 * C_SPHERE * math.exp(-x) * math.cos(x), rel=1e-13)
    with pytest.raises(wavefn.DomainError):
        wavefn.evaluate(st_, 0.0)
    with pytest.raises(wavefn.DomainError):
        wavefn.evaluate(st_, 3.5)
    with pytest.raises(ValueError):
        wavefn.evaluate(st_, 1.0, 3)


def _sign_changes(st_):
    lo, hi = st_.support(1e-9)
    if st_.parity is not None:
        lo = 1e-6
    x = np.linspace(lo, hi, 20001)[1:-1]
    z = st_(x)
    z = z[np.abs(z) > 1e-12 * np.max(np.abs(z))]
    return int(np.sum(np.sign(z[1:]) != np.sign(z[:-1])))


CASES = [
    (S.SPHERE, "oscillator", 3, 1.0, 1.0, 0),
    (S.SPHERE, "coulomb", 3, 1.0, 1.0, 1),
    (S.TWO_SHEETED, "oscillator", 3, 1.0, math.sqrt(72.0), 0),
    (S.TWO_SHEETED, "coulomb", 3, 1.0, 30.0, 1),
    (S.ONE_SHEETED, "oscillator", 2, 1.0, math.sqrt(2.0), 8),
    (S.ONE_SHEETED, "coulomb", 3, 1.0, 2.0, 4),
]


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c[0].value}-{c[1]}")
def test_node_count(case):
    space, kind, n, R, g, L = case
    spec = spec_of(space, kind, n, R, g)
    for e in spectra.enumerate_bound_states(spec, L, 5):
        st_ = wavefn.state(spec, e.quantum.n_r, L)
        assert _sign_changes(st_) == e.quantum.n_r


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c[0].value}-{c[1]}")
def test_residual_identity(case):
    # Z''/Z = U_eff - Etilde away from nodes
    space, kind, n, R, g, L = case
    spec = spec_of(space, kind, n, R, g)
    st_ = wavefn.state(spec, 1, L)
    x = st_.sample_grid(30)
    z, _, z2 = st_.derivatives(x)
    keep = np.abs(z) > 1e-3 * np.max(np.abs(z))
    lhs = z2[keep] / z[keep]
    rhs = st_.eq.u_eff(x[keep]) - st_.etilde
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.max(np.abs(rhs)))


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c[0].value}-{c[1]}")
def test_boundary_behaviour(case):
    space, kind, n, R, g, L = case
    st_ = wavefn.state(spec_of(space, kind, n, R, g), 0, L)
    lo, hi = st_.domain
    peak = np.max(np.abs(st_(st_.sample_grid(200))))
    ends = []
    if math.isfinite(lo):
        ends.append(lo + 1e-6)
    else:
        ends.append(-60.0)
    if math.isfinite(hi):
        ends.append(hi - 1e-6)
    else:
        ends.append(60.0)
    if st_.parity is not None:
        ends.append(1e-6)
    for x in ends:
        assert abs(float(st_(x))) < 1e-5 * peak


def test_sphere_coulomb_reality_grid():
    spec = spec_of(S.SPHERE, "coulomb", 5, 1.0, 2.0)
    for N in range(1, 8):
        st_ = wavefn.coulomb_state(spec, N, 1)
        assert wavefn.sphere_coulomb_imag_ratio(st_) <= 1e-10


def test_overlap_examples():
    spec = spec_of(S.SPHERE, "coulomb", 3, 2.0, 1.0)
    a, b = wavefn.coulomb_state(spec, 1, 1), wavefn.coulomb_state(spec, 3, 1)
    assert wavefn.overlap(a, a) == pytest.approx(1.0, abs=1e-8)
    assert abs(wavefn.overlap(a, b)) <= 1e-8
    c = wavefn.coulomb_state(spec, 2, 2)
    with pytest.raises(ValueError):
        wavefn.overlap(a, c)


def test_one_sheeted_parity_sectors():
    spec = spec_of(S.ONE_SHEETED, "oscillator", 2, 1.0, math.sqrt(2.0))
    even = wavefn.oscillator_state_parity(spec, 1, 8, +1)
    odd = wavefn.oscillator_state_parity(spec, 1, 8, -1)
    x = np.array([0.3, 1.1, 2.0])
    assert np.allclose(even(-x), even(x))
    assert np.allclose(odd(-x), -odd(x))
    assert wavefn.overlap(even, odd) == 0.0
    assert wavefn.overlap(odd, odd) == pytest.approx(1.0, abs=1e-8)


def test_flat_reference_examples():
    z = wavefn.flat_oscillator_reference(2, 1.0, 0, 0)
    r = np.linspace(0.2, 3.0, 5)
    ratio = z(r) / (r**0.5 * np.exp(-r * r / 2))
    assert np.allclose(ratio, ratio[0], rtol=1e-13)
    for n, N, L in [(2, 0, 0), (3, 2, 0), (5, 3, 1)]:
        f = wavefn.flat_oscillator_reference(n, 1.3, N, L)
        v, _ = integrate(lambda x: f(x) ** 2, 0.0, math.inf)
        assert v == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        wavefn.flat_oscillator_reference(3, 1.0, 1, 0)


def test_with_energy_changes_only_energy():
    st_ = wavefn.coulomb_state(spec_of(S.SPHERE, "coulomb", 3, 1.0, 1.0), 2, 0)
    moved = st_.with_energy(st_.energy + 0.5)
    assert moved.etilde == pytest.approx(st_.etilde + 1.0)
    assert np.array_equal(moved(np.array([0.4, 1.2])), st_(np.array([0.4, 1.2])))


@given(st.sampled_from(CASES), st.integers(0, 3), st.floats(0.5, 2.5))
@settings(max_examples=40, deadline=None)
def test_norm_property(case, n_r, R):
    space, kind, n, _, g, L = case
    # keep the dimensionless coupling fixed so the level stays bound
    if space is not S.SPHERE:
        g = g / R**2 if kind == "oscillator" else g / R
    spec = spec_of(space, kind, n, R, g)
    try:
        st_ = wavefn.state(spec, n_r, L)
    except spectra.UnboundStateError:
        return
    assert wavefn.overlap(st_, st_) == pytest.approx(1.0, abs=1e-8)
