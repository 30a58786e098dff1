"""
Coulomb to oscillator correspondences.

Each substitution turns the quasiradial Coulomb equation in dimension
n = d + 1 at angular momentum L into an oscillator (Poschl-Teller type)
equation in dimension 2d at angular momentum 2L. The new quasiradial
function is W = J**(-1/2) Z, J = dx/dy, which is the Liouville gauge that
keeps the equation free of first derivatives.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    Coulomb,
    ProblemSpec,
    SpaceKind,
    energy_from_shifted,
    reduce_to_quasiradial,
)
from .spectra import UnboundStateError

__all__ = [
    "Substitution",
    "DualMap",
    "build_dual_map",
    "verify_potential_identity",
    "verify_operator_conjugation",
    "spectrum_via_duality",
    "solve_nu",
    "pull_back_sinh",
    "compatibility_report",
]


class Substitution(enum.Enum):
    SPHERE_TRIG = "sphere-trig"  # e^{i chi} = cos theta
    TWO_SHEETED_COSH = "h2-cosh"  # e^tau = cosh mu
    TWO_SHEETED_TRIG = "h2-trig"  # e^-tau = cos phi
    ONE_SHEETED_SINH = "h1-sinh"  # e^tau = sinh mu

    @property
    def source_space(self) -> SpaceKind:
        return {
            Substitution.SPHERE_TRIG: SpaceKind.SPHERE,
            Substitution.TWO_SHEETED_COSH: SpaceKind.TWO_SHEETED,
            Substitution.TWO_SHEETED_TRIG: SpaceKind.TWO_SHEETED,
            Substitution.ONE_SHEETED_SINH: SpaceKind.ONE_SHEETED,
        }[self]

    @property
    def target_form(self) -> SpaceKind:
        """Space whose oscillator equation the image coincides with."""
        return {
            Substitution.SPHERE_TRIG: SpaceKind.SPHERE,
            Substitution.TWO_SHEETED_COSH: SpaceKind.TWO_SHEETED,
            Substitution.TWO_SHEETED_TRIG: SpaceKind.SPHERE,
            Substitution.ONE_SHEETED_SINH: SpaceKind.ONE_SHEETED,
        }[self]


_DEFAULT_SUB = {
    SpaceKind.SPHERE: Substitution.SPHERE_TRIG,
    SpaceKind.TWO_SHEETED: Substitution.TWO_SHEETED_COSH,
    SpaceKind.ONE_SHEETED: Substitution.ONE_SHEETED_SINH,
}

# sample ranges of the new variable used by the checks
_Y_RANGE = {
    Substitution.SPHERE_TRIG: (0.0, math.pi / 2),
    Substitution.TWO_SHEETED_COSH: (0.0, 4.0),
    Substitution.TWO_SHEETED_TRIG: (0.0, math.pi / 2),
    Substitution.ONE_SHEETED_SINH: (0.0, 4.0),
}


@dataclass(frozen=True)
class DualMap:
    """
    A Coulomb to oscillator correspondence.

    ``param_map`` sends Etilde to (epsilon, nu^2); both are affine in
    Etilde, ``epsilon = a*Et + b`` and ``nu^2 = c*Et + d``.
    """

    source: ProblemSpec
    L: int
    substitution: Substitution
    target_dimension: int
    target_L: int
    k: complex

    def __post_init__(self):
        if self.target_dimension != 2 * (self.source.n - 1) or self.target_L != 2 * self.L:
            raise ValueError("dual map must pair dimension d+1 with 2d and L with 2L")

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        R = self.source.R
        alpha = self.source.interaction.alpha
        sub = self.substitution
        if sub is Substitution.SPHERE_TRIG:
            return 1.0, 2 * self.k * R, 1.0, -2 * self.k * R
        if sub is Substitution.TWO_SHEETED_COSH:
            return 1.0, 0.0, -1.0, 4 * alpha * R
        if sub is Substitution.TWO_SHEETED_TRIG:
            return -1.0, 4 * alpha * R, -1.0, 0.0
        return 1.0, 4 * alpha * R, -1.0, 0.0

    def param_map(self, etilde):
        """(epsilon, nu^2) for a given Etilde."""
        a, b, c, d = self.coefficients
        eps, nu2 = a * etilde + b, c * etilde + d
        if self.substitution is not Substitution.SPHERE_TRIG:
            eps, nu2 = float(np.real(eps)), float(np.real(nu2))
        return eps, nu2

    # -- coordinates --------------------------------------------------------

    def old_of_new(self, y):
        """Source coordinate x(y) (real maps only)."""
        sub = self.substitution
        # log cos and log cosh through log1p keep digits near y = 0
        if sub is Substitution.TWO_SHEETED_COSH:
            return np.log1p(2.0 * np.sinh(0.5 * y) ** 2)
        if sub is Substitution.TWO_SHEETED_TRIG:
            return -np.log1p(-2.0 * np.sin(0.5 * y) ** 2)
        if sub is Substitution.ONE_SHEETED_SINH:
            return np.log(np.sinh(y))
        # complex contour chi = -i log cos theta
        return -1j * np.log1p(-2.0 * np.sin(0.5 * np.asarray(y, dtype=float)) ** 2).astype(complex)

    def jacobian(self, y):
        """dx/dy."""
        sub = self.substitution
        if sub is Substitution.TWO_SHEETED_COSH:
            return np.tanh(y)
        if sub is Substitution.TWO_SHEETED_TRIG:
            return np.tan(y)
        if sub is Substitution.ONE_SHEETED_SINH:
            return 1.0 / np.tanh(y)
        return 1j * np.tan(np.asarray(y, dtype=complex))

    def gauge(self, y):
        """Factor g with Z = g * W; equal to sqrt(dx/dy)."""
        return np.sqrt(self.jacobian(y))

    def target_potential(self, y, nu2):
        """Oscillator-side U(y) so that W'' + (epsilon - U) W = 0."""
        n_o, L_o = self.target_dimension, self.target_L
        c_o = (L_o + (n_o - 2) / 2.0) ** 2 - 0.25
        form = self.substitution.target_form
        if form is SpaceKind.SPHERE:
            return (nu2 - 0.25) / np.cos(y) ** 2 + c_o / np.sin(y) ** 2
        if form is SpaceKind.TWO_SHEETED:
            return -(nu2 - 0.25) / np.cosh(y) ** 2 + c_o / np.sinh(y) ** 2
        return -c_o / np.cosh(y) ** 2 + (nu2 - 0.25) / np.sinh(y) ** 2


def build_dual_map(space: SpaceKind, n_coulomb: int, L: int, alpha: float, R: float,
                   substitution: Substitution | None = None) -> DualMap:
    if n_coulomb < 2:
        raise ValueError("n_coulomb must be at least 2")
    sub = substitution or _DEFAULT_SUB[space]
    if sub.source_space is not space:
        raise ValueError(f"substitution {sub.value} does not start from {space.value}")
    spec = ProblemSpec(space, n_coulomb, R, Coulomb(alpha))
    k = 1j * alpha if space is SpaceKind.SPHERE else complex(alpha)
    return DualMap(spec, L, sub, 2 * (n_coulomb - 1), 2 * L, k)


# ----------------------------------------------------------------------------
# identity checks


def _residual(lhs, rhs):
    return np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))


def verify_potential_identity(dmap: DualMap, samples: int = 100) -> float:
    """
    Max relative residual of the potential identity behind the substitution.

    Sphere: alpha cot chi = k (1 - 2 / sin^2 theta) on chi = -i log cos theta.
    Hyperbolic maps compare 2 R^2 V(x(y)) with its closed form in y.
    """
    if samples <= 0:
        return 0.0
    lo, hi = _Y_RANGE[dmap.substitution]
    y = lo + (hi - lo) * (np.arange(samples) + 0.5) / samples
    spec = dmap.source
    alpha, R = spec.interaction.alpha, spec.R
    sub = dmap.substitution
    if sub is Substitution.SPHERE_TRIG:
        chi = dmap.old_of_new(y)
        lhs = alpha * np.cos(chi) / np.sin(chi)
        rhs = dmap.k * (1.0 - 2.0 / np.sin(y) ** 2)
        return float(np.max(_residual(lhs, rhs)))
    eq = reduce_to_quasiradial(spec, dmap.L)
    lhs = eq.potential_term(dmap.old_of_new(y))
    B = alpha * R
    if sub is Substitution.TWO_SHEETED_COSH:
        rhs = -4 * B / np.sinh(y) ** 2
    elif sub is Substitution.TWO_SHEETED_TRIG:
        rhs = -4 * B / np.tan(y) ** 2
    else:
        rhs = -4 * B * np.tanh(y) ** 2
    return float(np.max(_residual(lhs, rhs)))


_FD8 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
FD_STEP = 2e-3


def _new_of_old(sub: Substitution, x):
    if sub is Substitution.TWO_SHEETED_COSH:
        return np.arccosh(np.exp(x))
    if sub is Substitution.TWO_SHEETED_TRIG:
        return np.arccos(np.exp(-x))
    return np.arcsinh(np.exp(x))


def verify_operator_conjugation(dmap: DualMap, test_poly_degree: int, samples: int = 50,
                                etilde: float = -0.7, seed: int = 0, step: float = FD_STEP) -> float:
    """
    Check J^{3/2} [Z'' + (Et - U_src) Z] = W'' + (eps - U_tgt) W for a random
    polynomial W, with Z(x) = sqrt(J) W(y(x)).

    The source operator is applied by 8th-order central differences in x;
    the target operator is applied exactly. Returns the max of
    |lhs - rhs| / max(1, max|rhs|, max|W''|).
    """
    if test_poly_degree < 0:
        raise ValueError("degree must be nonnegative")
    sub = dmap.substitution
    if sub is Substitution.SPHERE_TRIG:
        raise ValueError("the sphere map lives on a complex contour; use verify_potential_identity")
    rng = np.random.default_rng(seed)
    coef = rng.uniform(-1.0, 1.0, test_poly_degree + 1)
    poly = np.polynomial.Polynomial(coef)
    d2 = poly.deriv(2)
    lo, hi = (0.3, 2.0) if sub is not Substitution.TWO_SHEETED_TRIG else (0.3, 1.2)
    y = lo + (hi - lo) * (np.arange(samples) + 0.5) / max(samples, 1)
    eq = reduce_to_quasiradial(dmap.source, dmap.L)
    eps, nu2 = dmap.param_map(etilde)

    def z_of_x(x):
        yy = _new_of_old(sub, x)
        return np.sqrt(dmap.jacobian(yy)) * poly(yy)

    x = dmap.old_of_new(y)
    offs = np.arange(-4, 5) * step
    zz = z_of_x(x[:, None] + offs[None, :])
    z2 = zz @ _FD8 / step**2
    z0 = zz[:, 4]
    src = z2 + (etilde - eq.u_eff(x)) * z0
    lhs = dmap.jacobian(y) ** 1.5 * src
    w = poly(y)
    rhs = d2(y) + (eps - dmap.target_potential(y, nu2)) * w
    scale = max(1.0, float(np.max(np.abs(rhs))), float(np.max(np.abs(d2(y)))))
    return float(np.max(np.abs(lhs - rhs)) / scale)


# ----------------------------------------------------------------------------
# spectra through the oscillator image


def _target_quantization(dmap: DualMap, n_r: int):
    """(s, K, t) with epsilon = s (K + t nu)^2 for the target oscillator form."""
    n_o, L_o = dmap.target_dimension, dmap.target_L
    form = dmap.substitution.target_form
    if form is SpaceKind.SPHERE:
        return 1.0, 2 * n_r + L_o + n_o / 2.0, 1.0
    if form is SpaceKind.TWO_SHEETED:
        return -1.0, 2 * n_r + L_o + n_o / 2.0, -1.0
    return -1.0, 2 * n_r - L_o - n_o / 2.0 + 2, 1.0


def _target_margin(dmap: DualMap, n_r: int, nu: float) -> float:
    n_o, L_o = dmap.target_dimension, dmap.target_L
    form = dmap.substitution.target_form
    if form is SpaceKind.TWO_SHEETED:
        return nu - L_o - 2 * n_r - n_o / 2.0
    if form is SpaceKind.ONE_SHEETED:
        return L_o + n_o / 2.0 - nu - 2 * n_r - 2
    return math.inf


def solve_nu(dmap: DualMap, n_r: int) -> complex:
    """
    nu fixed by combining the oscillator quantization with the parameter map.

    Eliminating Etilde from ``param_map`` gives a quadratic in nu whose
    leading coefficient vanishes for all four maps, so the root is unique;
    the general quadratic branch picks Re nu < 0 on the sphere and nu > 0
    otherwise.
    """
    a, b, c, d = dmap.coefficients
    s, K, t = _target_quantization(dmap, n_r)
    # a/c (nu^2 - d) + b = s (K + t nu)^2
    A = a / c - s
    Bq = -2 * s * K * t
    C = -a * d / c + b - s * K * K
    if abs(A) < 1e-14:
        return complex(-C / Bq)
    disc = cmath.sqrt(Bq * Bq - 4 * A * C)
    roots = [(-Bq + disc) / (2 * A), (-Bq - disc) / (2 * A)]
    if dmap.substitution is Substitution.SPHERE_TRIG:
        return min(roots, key=lambda r: r.real)
    return max(roots, key=lambda r: r.real)


def spectrum_via_duality(space: SpaceKind, n_coulomb: int, L: int, alpha: float, R: float,
                         N: int, substitution: Substitution | None = None) -> float:
    """Coulomb energy obtained from the dual oscillator quantization."""
    if N < L:
        raise ValueError(f"need N >= L (N={N}, L={L})")
    dmap = build_dual_map(space, n_coulomb, L, alpha, R, substitution)
    n_r = N - L
    if space is SpaceKind.ONE_SHEETED and L - n_r + (n_coulomb - 3) / 2.0 <= 0:
        raise UnboundStateError("one-sheeted Coulomb needs L - n_r + (n-3)/2 > 0")
    nu = solve_nu(dmap, n_r)
    if space is not SpaceKind.SPHERE:
        if abs(nu.imag) > 1e-12 or not nu.real > 0 or not _target_margin(dmap, n_r, nu.real) > 0:
            raise UnboundStateError(
                f"state n_r={n_r}, L={L} is not bound (dual nu={nu.real:.6g})")
    a, b, c, d = dmap.coefficients
    etilde = (nu * nu - d) / c
    if abs(etilde.imag) > 1e-9 * max(1.0, abs(etilde)):
        raise ArithmeticError(f"complex Etilde {etilde} from the dual quantization")
    return energy_from_shifted(space, n_coulomb, R, etilde.real)


def pull_back_sinh(nu: float, cosh_exp_w: float) -> tuple[float, float, float]:
    """
    Pull back W = sinh(mu)^(nu+1/2) cosh(mu)^e through e^tau = sinh(mu).

    With Z = W sqrt(dx/dy) = W / sqrt(coth mu) and cosh^2 mu = 2 e^tau cosh tau,
    Z = const * exp(k tau) * cosh(tau)^p. Returns (const, k, p).
    """
    g = (cosh_exp_w + 0.5) / 2.0
    return 2.0**g, nu + g, g


# ----------------------------------------------------------------------------


def compatibility_report(spec: ProblemSpec, n_r: int, L: int) -> dict:
    """
    Compare the printed one-sheeted Coulomb function with the state built
    through the sinh substitution. Informational only.
    """
    from .oracle import ode_residual
    from .specfun import integrate
    from .wavefn import coulomb_state, printed_one_sheeted_coulomb

    built = coulomb_state(spec, n_r + L, L)
    printed, const = printed_one_sheeted_coulomb(spec, n_r, L)
    scale = spec.R**spec.n
    inf = math.inf
    with np.errstate(all="ignore"):
        pn, _ = integrate(lambda x: printed(x) ** 2, -inf, inf)
        cross, _ = integrate(lambda x: printed(x) * built(x), -inf, inf)
    pn *= scale
    cross *= scale
    return {
        "n_r": n_r,
        "L": L,
        "printed_constant": const,
        "printed_norm": pn if math.isfinite(const) else math.nan,
        "printed_ode_residual": ode_residual(printed),
        "built_ode_residual": ode_residual(built),
        "shape_mismatch": 1.0 - abs(cross) / math.sqrt(pn),
    }

