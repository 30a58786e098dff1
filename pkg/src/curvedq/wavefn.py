"""
Closed-form normalized quasiradial wavefunctions.

A state is stored as

    Z(x) = C * exp(sum_i p_i * log f_i(x)) * F(u(x)),

where the f_i are elementary factors (sin, cos, sinh, cosh, exp), F is the
terminating hypergeometric polynomial and u(x) its argument. Derivatives
follow from the logarithmic derivatives of the factors and the derivative
polynomials of F, so Z' and Z'' are exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import spectra
from .model import (
    ProblemSpec,
    QuantumNumbers,
    QuasiradialEq,
    SpaceKind,
    reduce_to_quasiradial,
)
from .specfun import (
    PoleError,
    gamma,
    hyp1f1_terminating,
    hyp2f1_coefficients,
    integrate,
    ln_gamma,
    pochhammer,
)

__all__ = [
    "RealityError",
    "DomainError",
    "RadialState",
    "oscillator_state",
    "oscillator_state_parity",
    "coulomb_state",
    "sphere_coulomb_imag_ratio",
    "state",
    "evaluate",
    "overlap",
    "flat_oscillator_reference",
    "printed_one_sheeted_coulomb",
]

_LN2 = math.log(2.0)


class RealityError(ArithmeticError):
    """The complex-built sphere Coulomb function is not real to tolerance."""


class DomainError(ValueError):
    """Evaluation point outside the open domain of a state."""


# ----------------------------------------------------------------------------
# elementary factors: (log f, (log f)', (log f)'')


def _log_sinh(x):
    ax = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        small = np.log(np.sinh(np.minimum(ax, 1.0)))
        big = ax + np.log1p(-np.exp(-2.0 * ax)) - _LN2
    return np.where(ax < 1.0, small, big)


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - _LN2


def _factor(kind, x):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if kind == "sin":
            s = np.sin(x)
            return np.log(s), np.cos(x) / s, -1.0 / s**2
        if kind == "cos":
            c = np.cos(x)
            return np.log(c), -np.sin(x) / c, -1.0 / c**2
        if kind == "sinh":
            return _log_sinh(x), 1.0 / np.tanh(x), -1.0 / np.sinh(x) ** 2
        if kind == "cosh":
            return _log_cosh(x), np.tanh(x), 1.0 / np.cosh(x) ** 2
    raise ValueError(f"unknown factor {kind!r}")


def _argument(kind, x):
    """u(x), u'(x), u''(x) and 1 - u(x) (None for complex u)."""
    if kind == "sin2":
        return np.sin(x) ** 2, np.sin(2 * x), 2 * np.cos(2 * x), np.cos(x) ** 2
    if kind == "tanh2":
        t = np.tanh(x)
        s2 = 1.0 / np.cosh(x) ** 2
        return t * t, 2 * t * s2, 2 * s2 * s2 - 4 * t * t * s2, s2
    if kind == "one_minus_exp_neg2":
        e = np.exp(-2 * x)
        return -np.expm1(-2 * x), 2 * e, -4 * e, e
    if kind == "one_minus_exp_2i":
        e = np.exp(2j * x)
        return -2j * np.sin(x) * np.exp(1j * x), -2j * e, 4 * e, None
    if kind == "half_one_plus_tanh":
        t = np.tanh(x)
        s2 = 1.0 / np.cosh(x) ** 2
        return 1.0 / (1.0 + np.exp(-2 * x)), 0.5 * s2, -t * s2, 1.0 / (1.0 + np.exp(2 * x))
    raise ValueError(f"unknown argument {kind!r}")


def _series(m: int, b, c):
    """
    Coefficients of 2F1(-m, b; c; u) in u, and of the same polynomial in
    1 - u when the reflected parameter b - c - m + 1 is admissible.

    2F1(-m, b; c; u) = (c-b)_m / (c)_m * 2F1(-m, b; b-c-m+1; 1-u); near
    u = 1 the reflected sum has no cancellation.
    """
    direct = hyp2f1_coefficients(m, b, c)
    if isinstance(b, complex) or isinstance(c, complex) or m == 0:
        return direct, None
    c2 = b - c - m + 1
    if c2 <= 0 and abs(c2 - round(c2)) < 1e-12:
        return direct, None
    k = pochhammer(c - b, m) / pochhammer(c, m)
    return direct, k * hyp2f1_coefficients(m, b, c2)


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialState:
    """
    Closed-form quasiradial eigenfunction.

    ``factors`` holds ``(kind, power)`` pairs for sin/cos/sinh/cosh, and
    ``exp_coeff`` the (possibly complex) coefficient k of an ``exp(k x)``
    factor. ``series`` are the coefficients of F in powers of ``u``.
    When ``complex_form`` is set the physical function is the real part.
    ``parity`` is set for the one-sheeted oscillator, whose states live on
    the full line as even (+1) or odd (-1) extensions of the half-line
    function.
    """

    spec: ProblemSpec
    quantum: QuantumNumbers
    energy: float
    etilde: float
    norm_constant: float
    series: np.ndarray
    argument: str
    factors: tuple
    exp_coeff: complex = 0.0
    eq: QuasiradialEq | None = field(default=None, repr=False)
    domain: tuple = (0.0, math.inf)
    parity: int | None = None
    complex_form: bool = False
    label: str = ""
    reflected: np.ndarray | None = field(default=None, repr=False)

    # -- evaluation ---------------------------------------------------------

    def _raw(self, x):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
            return self._raw_unguarded(np.asarray(x, dtype=float))

    def _raw_unguarded(self, x):
        phi = np.zeros_like(x, dtype=complex if self.complex_form else float)
        d1 = np.zeros_like(phi)
        d2 = np.zeros_like(phi)
        for kind, power in self.factors:
            lf, g1, g2 = _factor(kind, x)
            phi = phi + power * lf
            d1 = d1 + power * g1
            d2 = d2 + power * g2
        if self.exp_coeff != 0:
            phi = phi + self.exp_coeff * x
            d1 = d1 + self.exp_coeff
        u, u1, u2, v = _argument(self.argument, x)
        F, F1, F2 = _poly3(self.series, u)
        if self.reflected is not None:
            G, G1, G2 = _poly3(self.reflected, v)
            far = u > 0.5
            F, F1, F2 = np.where(far, G, F), np.where(far, -G1, F1), np.where(far, G2, F2)
        e = self.norm_constant * np.exp(phi)
        z0 = e * F
        z1 = e * (d1 * F + F1 * u1)
        z2 = e * ((d2 + d1 * d1) * F + 2 * d1 * F1 * u1 + F2 * u1 * u1 + F1 * u2)
        if self.complex_form:
            z0, z1, z2 = z0.real, z1.real, z2.real
        return z0, z1, z2

    def derivatives(self, x):
        """Z, Z', Z'' at x (vectorized)."""
        x = np.asarray(x, dtype=float)
        a, b = self.domain
        if np.any((x <= a) | (x >= b)):
            raise DomainError(f"points outside the open domain ({a}, {b})")
        if self.parity is None:
            return self._raw(x)
        ax = np.abs(x)
        z0, z1, z2 = self._raw(ax)
        sgn = np.where(x < 0, self.parity, 1)
        return sgn * z0, np.where(x < 0, -self.parity, 1) * z1, sgn * z2

    def __call__(self, x):
        return self.derivatives(x)[0]

    def evaluate(self, x, order: int = 0):
        if order not in (0, 1, 2):
            raise ValueError("order must be 0, 1 or 2")
        return self.derivatives(x)[order]

    # -- helpers -----------------------------------------------------------

    def with_energy(self, energy: float) -> "RadialState":
        """Same function, tagged with a different energy (for negative controls)."""
        return replace(self, energy=energy, etilde=self.eq.etilde(energy))

    def residual_terms(self, x):
        """Return Z'' and (Etilde - U_eff) Z at x."""
        z0, _, z2 = self.derivatives(x)
        return z2, (self.etilde - self.eq.u_eff(x)) * z0

    def support(self, tail: float = 1e-12) -> tuple[float, float]:
        """
        Finite sub-interval outside of which |Z| < tail * max|Z|.

        Finite endpoints are returned unchanged.
        """
        a, b = self.domain
        if self.parity is not None:
            a = 0.0
        lo = a if math.isfinite(a) else -_tail_extent(self, -1, tail)
        hi = b if math.isfinite(b) else _tail_extent(self, +1, tail)
        return lo, hi

    def sample_grid(self, count: int, tail: float = 1e-10) -> np.ndarray:
        """``count`` interior points spread over the bulk of the state."""
        lo, hi = self.support(tail)
        return lo + (hi - lo) * (np.arange(count) + 0.5) / count


def _tail_extent(state, direction, tail):
    x = direction * np.linspace(0.0, 10.0, 2001)[1:]
    for _ in range(12):
        with np.errstate(all="ignore"):
            z = np.abs(state(x)) if state.parity is None else np.abs(state._raw(np.abs(x))[0])
        peak = np.nanmax(z)
        above = np.nonzero(z >= tail * peak)[0]
        last = above[-1]
        if last < len(x) - 1:
            return float(abs(x[last + 1]))
        x = direction * np.linspace(0.0, 2 * abs(x[-1]), 2 * len(x) + 1)[1:]
    return float(abs(x[-1]))


def _poly3(coef, u):
    """Polynomial and its first two derivatives at u."""
    pv = np.polynomial.polynomial.polyval
    c1 = np.polynomial.polynomial.polyder(coef) if len(coef) > 1 else np.zeros(1, dtype=coef.dtype)
    c2 = np.polynomial.polynomial.polyder(c1) if len(c1) > 1 else np.zeros(1, dtype=coef.dtype)
    return pv(u, coef), pv(u, c1), pv(u, c2)


def evaluate(state: RadialState, x, order: int = 0):
    """Z, Z' or Z'' of ``state`` at x from the closed form."""
    return state.evaluate(x, order)


# ----------------------------------------------------------------------------
# oscillator


def oscillator_state(spec: ProblemSpec, n_r: int, L: int) -> RadialState:
    """
    Normalized oscillator state on any of the three spaces.

    Sphere: the upper hemisphere (0, pi/2). Two-sheeted: (0, inf).
    One-sheeted: the even extension of the half-line function (use
    :func:`oscillator_state_parity` for the odd one).
    """
    return oscillator_state_parity(spec, n_r, L, +1)


def oscillator_state_parity(spec: ProblemSpec, n_r: int, L: int, parity: int = 1) -> RadialState:
    if not spec.is_oscillator:
        raise ValueError("oscillator_state needs an oscillator system")
    q = QuantumNumbers(n_r, L, "oscillator")
    entry = spectra.oscillator_energy(spec, q)  # raises UnboundStateError
    n, R, nu = spec.n, spec.R, entry.nu
    eq = reduce_to_quasiradial(spec, L)
    s_ang = L + (n - 1) / 2.0
    lg = ln_gamma
    sp = spec.space
    if sp is SpaceKind.SPHERE:
        log_c2 = (
            _LN2 + math.log(2 * n_r + L + nu + n / 2.0) + lg(n_r + L + nu + n / 2.0)
            + lg(n_r + L + n / 2.0) - n * math.log(R) - 2 * lg(L + n / 2.0)
            - lg(n_r + nu + 1) - lg(n_r + 1)
        )
        series, refl = _series(n_r, n_r + L + nu + n / 2.0, L + n / 2.0)
        return RadialState(
            spec, q, entry.energy, entry.etilde, math.exp(0.5 * log_c2), series, "sin2",
            (("sin", s_ang), ("cos", nu + 0.5)), eq=eq, domain=(0.0, math.pi / 2),
            label="sphere-oscillator", reflected=refl,
        )
    if sp is SpaceKind.TWO_SHEETED:
        margin = nu - L - 2 * n_r - n / 2.0
        log_c = -lg(L + n / 2.0) + 0.5 * (
            _LN2 + math.log(margin) + lg(nu - n_r) + lg(n_r + L + n / 2.0)
            - n * math.log(R) - lg(n_r + 1) - lg(nu - L - n_r - n / 2.0 + 1)
        )
        series, refl = _series(n_r, -n_r + nu, L + n / 2.0)
        return RadialState(
            spec, q, entry.energy, entry.etilde, math.exp(log_c), series, "tanh2",
            (("sinh", s_ang), ("cosh", 2 * n_r - nu + 0.5)), eq=eq, domain=(0.0, math.inf),
            label="h2-oscillator", reflected=refl,
        )
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    margin = L - nu - 2 * n_r + n / 2.0 - 2
    log_c = 0.5 * (
        math.log(margin) + lg(L - n_r + n / 2.0 - 1) + lg(n_r + nu + 1) - n * math.log(R)
        - lg(n_r + 1) - 2 * lg(nu + 1) - lg(L - nu - n_r + n / 2.0 - 1)
    )
    series, refl = _series(n_r, -n_r + L + n / 2.0 - 1, nu + 1)
    return RadialState(
        spec, q, entry.energy, entry.etilde, math.exp(log_c), series, "tanh2",
        (("sinh", nu + 0.5), ("cosh", 2 * n_r - L - n / 2.0 + 1.5)), eq=eq,
        domain=(-math.inf, math.inf), parity=parity, label="h1-oscillator", reflected=refl,
    )


# ----------------------------------------------------------------------------
# Coulomb


def coulomb_state(spec: ProblemSpec, N: int, L: int) -> RadialState:
    """
    Normalized Coulomb state with principal number N (n_r = N - L).

    On the one-sheeted hyperboloid N only fixes n_r = N - L; the state is
    built by pulling the dual one-sheeted oscillator function back through
    the substitution e^tau = sinh(mu).
    """
    if not spec.is_coulomb:
        raise ValueError("coulomb_state needs a Coulomb system")
    if N < L:
        raise ValueError(f"need N >= L (N={N}, L={L})")
    n_r = N - L
    q = QuantumNumbers(n_r, L, "coulomb")
    entry = spectra.coulomb_energy(spec, q)  # raises UnboundStateError
    n, R, sigma = spec.n, spec.R, entry.sigma
    alpha = spec.interaction.alpha
    eq = reduce_to_quasiradial(spec, L)
    s_ang = L + (n - 1) / 2.0
    lg = ln_gamma
    sp = spec.space
    if sp is SpaceKind.SPHERE:
        p = N + (n - 1) / 2.0
        log_c = (
            s_ang * _LN2 + math.pi * sigma / 2 + lg(complex(s_ang, -sigma)).real - lg(2 * L + n - 1)
            + 0.5 * (math.log(p * p + sigma * sigma) + lg(N + L + n - 1) - _LN2
                     - n * math.log(R) - math.log(math.pi) - math.log(p) - lg(N - L + 1))
        )
        series = hyp2f1_coefficients(n_r, complex(s_ang, sigma), complex(2 * L + n - 1, 0.0))
        st = RadialState(
            spec, q, entry.energy, entry.etilde, math.exp(log_c), series, "one_minus_exp_2i",
            (("sin", s_ang),), exp_coeff=complex(-sigma, -n_r), eq=eq, domain=(0.0, math.pi),
            complex_form=True, label="sphere-coulomb",
        )
        _check_reality(st)
        return st
    if sp is SpaceKind.TWO_SHEETED:
        p = N + (n - 1) / 2.0
        log_a = s_ang * _LN2 - lg(2 * L + n - 1) + 0.5 * (
            math.log(sigma**2 - p**2) + lg(N + L + n - 1) + lg(sigma + s_ang)
            - n * math.log(R) - math.log(p) - lg(N - L + 1) - lg(sigma - s_ang + 1)
        )
        series, refl = _series(n_r, s_ang + sigma, 2 * L + n - 1)
        return RadialState(
            spec, q, entry.energy, entry.etilde, math.exp(log_a), series, "one_minus_exp_neg2",
            (("sinh", s_ang),), exp_coeff=float(n_r - sigma), eq=eq, domain=(0.0, math.inf),
            label="h2-coulomb", reflected=refl,
        )
    from .duality import Substitution, build_dual_map, pull_back_sinh

    dmap = build_dual_map(sp, n, L, alpha, R, Substitution.ONE_SHEETED_SINH)
    _, nu2 = dmap.param_map(entry.etilde)
    nu = math.sqrt(nu2)
    n_o, L_o = dmap.target_dimension, dmap.target_L
    # dual oscillator: W = sinh^(nu+1/2) cosh^e F(tanh^2 mu)
    cosh_exp_w = 2 * n_r - L_o - n_o / 2.0 + 1.5
    _, exp_coeff, cosh_exp = pull_back_sinh(nu, cosh_exp_w)
    series, refl = _series(n_r, -n_r + L_o + n_o / 2.0 - 1, nu + 1)
    qq = L - n_r + (n - 3) / 2.0
    a, b = qq - sigma, qq + sigma
    m = n_r
    # int (1-y)^(a-1) (1+y)^(b-1) P_m^(a,b)(y)^2 dy, y = tanh(tau)
    log_j = ((a + b - 1) * _LN2 + lg(m + a + 1) + lg(m + b + 1) + math.log(a + b)
             - lg(m + 1) - math.log(a) - math.log(b) - lg(m + a + b + 1))
    log_ratio = lg(m + 1) - math.log(abs(pochhammer(b + 1, m))) if m else 0.0
    log_norm2 = 2 * log_ratio + log_j
    log_a = -0.5 * (n * math.log(R) + log_norm2)
    return RadialState(
        spec, q, entry.energy, entry.etilde, math.exp(log_a), series, "half_one_plus_tanh",
        (("cosh", cosh_exp),), exp_coeff=float(exp_coeff), eq=eq,
        domain=(-math.inf, math.inf), label="h1-coulomb", reflected=refl,
    )


def _check_reality(st: RadialState, tol: float = 1e-10):
    worst = sphere_coulomb_imag_ratio(st)
    if worst > tol:
        raise RealityError(f"imaginary part of G reaches {worst:.3e} (relative)")


def sphere_coulomb_imag_ratio(st: RadialState, points: int = 100) -> float:
    """max |Im G| / (1 + |G|) on a uniform interior grid of (0, pi)."""
    chi = math.pi * (np.arange(points) + 0.5) / points
    u = _argument("one_minus_exp_2i", chi)[0]
    g = np.exp(-1j * st.quantum.n_r * chi) * np.polynomial.polynomial.polyval(u, st.series)
    return float(np.max(np.abs(g.imag) / (1.0 + np.abs(g))))


def state(spec: ProblemSpec, n_r: int, L: int) -> RadialState:
    """State addressed by (n_r, L) regardless of interaction."""
    if spec.is_oscillator:
        return oscillator_state(spec, n_r, L)
    return coulomb_state(spec, n_r + L, L)


# ----------------------------------------------------------------------------


def overlap(a: RadialState, b: RadialState, rule=None) -> float:
    """R^n times the integral of Z_a Z_b over the domain."""
    if a.spec != b.spec or a.quantum.L != b.quantum.L:
        raise ValueError("overlap needs states of the same problem and the same L")
    if a.parity != b.parity:
        return 0.0
    kw = {} if rule is None else {"rule": rule}
    scale = a.spec.R ** a.spec.n

    def f(x):
        return a(x) * b(x)

    if a.parity is not None:
        val, _ = integrate(f, 0.0, math.inf, **kw)
        return 2.0 * scale * val
    lo, hi = a.domain
    val, _ = integrate(f, lo, hi, **kw)
    return scale * val


def flat_oscillator_reference(n: int, omega: float, N: int, L: int):
    """
    Flat n-dimensional oscillator radial function (Z-normalized on r > 0).

    Returns a vectorized callable of r.
    """
    if (N - L) % 2 or N < L:
        raise ValueError(f"flat oscillator needs N - L even and nonnegative (N={N}, L={L})")
    k = (N - L) // 2
    log_c = ((L / 2.0 + n / 4.0) * math.log(omega) - ln_gamma(L + n / 2.0)
             + 0.5 * (_LN2 + ln_gamma((N + L + n) / 2.0) - ln_gamma(k + 1)))
    c = math.exp(log_c)
    s = L + (n - 1) / 2.0

    def z(r):
        r = np.asarray(r, dtype=float)
        return c * r**s * np.exp(-omega * r * r / 2) * hyp1f1_terminating(k, L + n / 2.0, omega * r * r)

    return z


def printed_one_sheeted_coulomb(spec: ProblemSpec, n_r: int, L: int):
    """
    The one-sheeted Coulomb function in its printed closed form, for
    cross-checking only.

    Returns ``(state, constant)``. ``constant`` is NaN when the printed
    constant is not a real positive number (negative radicand or a Gamma
    pole); the state then carries unit normalization.
    """
    n, R = spec.n, spec.R
    q = QuantumNumbers(n_r, L, "coulomb")
    entry = spectra.coulomb_energy(spec, q)
    sigma = entry.sigma
    qq = L - n_r + (n - 3) / 2.0
    try:
        k2 = (4.0 ** (n_r - L - n / 2.0) / gamma(L - n_r + (n - 1) / 2.0) ** 2
              * (qq * qq - sigma * sigma) * gamma(2 * L - n_r + n - 2) * gamma(L + (n - 1) / 2.0)
              / (R**n * qq * math.factorial(n_r) * gamma(L - sigma + 0.5)))
        const = math.sqrt(k2) if k2 > 0 else math.nan
    except PoleError:
        const = math.nan
    series = hyp2f1_coefficients(n_r, -n_r + L + n - 2, qq + sigma)
    st = RadialState(
        spec, q, entry.energy, entry.etilde, const if math.isfinite(const) else 1.0, series,
        "half_one_plus_tanh", (("cosh", n_r - L - (n - 1) / 2.0),), exp_coeff=sigma - 1.0,
        eq=reduce_to_quasiradial(spec, L), domain=(-math.inf, math.inf), label="h1-coulomb-printed",
    )
    return st, const
