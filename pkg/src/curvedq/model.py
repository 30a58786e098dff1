"""
Spaces, central potentials and the reduction to a one-dimensional
quasiradial eigenproblem.

Units are hbar = mass = 1. Coordinates are the angular variables of the
respective space: chi on the sphere, tau on the hyperboloids. The reduced
equation always has the form

    Z''(x) + [Etilde - U_eff(x)] Z(x) = 0,

with U_eff = angular_sign * c / f(x)**2 + 2 R**2 V(x), where f is sin, sinh
or cosh and c = (2L+n-1)(2L+n-3)/4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

__all__ = [
    "SpaceKind",
    "Oscillator",
    "Coulomb",
    "Interaction",
    "ProblemSpec",
    "QuantumNumbers",
    "QuasiradialEq",
    "SingularityError",
    "potential_value",
    "reduce_to_quasiradial",
    "free_quasiradial",
    "weight_transform",
    "energy_from_shifted",
    "shifted_from_energy",
    "centrifugal_coeff",
]


class SingularityError(ValueError):
    """A potential was evaluated at one of its singular points."""

    def __init__(self, point, msg=""):
        super().__init__(msg or f"potential is singular at x={point!r}")
        self.point = point


class SpaceKind(enum.Enum):
    SPHERE = "sphere"
    TWO_SHEETED = "h2"
    ONE_SHEETED = "h1"

    @property
    def coordinate_domain(self) -> tuple[float, float]:
        return {
            SpaceKind.SPHERE: (0.0, math.pi),
            SpaceKind.TWO_SHEETED: (0.0, math.inf),
            SpaceKind.ONE_SHEETED: (-math.inf, math.inf),
        }[self]

    @property
    def shift_sign(self) -> int:
        # Etilde = 2 R^2 E + shift_sign * (n-1)^2 / 4
        return 1 if self is SpaceKind.SPHERE else -1


@dataclass(frozen=True)
class Oscillator:
    omega: float
    kind = "oscillator"

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("oscillator frequency must be positive")

    @property
    def coupling(self) -> float:
        return self.omega


@dataclass(frozen=True)
class Coulomb:
    alpha: float
    kind = "coulomb"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("Coulomb coupling must be positive (attractive)")

    @property
    def coupling(self) -> float:
        return self.alpha


Interaction = Union[Oscillator, Coulomb]


@dataclass(frozen=True)
class ProblemSpec:
    """Space, ambient dimension n, curvature radius R and interaction."""

    space: SpaceKind
    n: int
    R: float
    interaction: Interaction

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")
        if not self.R > 0:
            raise ValueError("curvature radius must be positive")

    @property
    def is_oscillator(self) -> bool:
        return isinstance(self.interaction, Oscillator)

    @property
    def is_coulomb(self) -> bool:
        return isinstance(self.interaction, Coulomb)

    def to_text(self) -> str:
        """Canonical text form, e.g. ``space=h2 potential=coulomb n=3 R=1 alpha=2``."""
        name = "omega" if self.is_oscillator else "alpha"
        return (
            f"space={self.space.value} potential={self.interaction.kind} n={self.n} "
            f"R={self.R!r} {name}={self.interaction.coupling!r}"
        )

    @classmethod
    def from_text(cls, text: str) -> "ProblemSpec":
        kv = dict(item.split("=", 1) for item in text.split())
        space = SpaceKind(kv["space"])
        if kv["potential"] == "oscillator":
            inter = Oscillator(float(kv["omega"]))
        elif kv["potential"] == "coulomb":
            inter = Coulomb(float(kv["alpha"]))
        else:
            raise ValueError(f"unknown potential {kv['potential']!r}")
        return cls(space, int(kv["n"]), float(kv["R"]), inter)


@dataclass(frozen=True)
class QuantumNumbers:
    """
    Quasiradial number n_r and total angular momentum L.

    The principal number is N = 2 n_r + L for oscillators and N = n_r + L for
    Coulomb systems; ``kind`` selects which.
    """

    n_r: int
    L: int
    kind: str = "coulomb"

    def __post_init__(self):
        if self.n_r < 0 or self.L < 0 or int(self.n_r) != self.n_r or int(self.L) != self.L:
            raise ValueError("n_r and L must be nonnegative integers")
        if self.kind not in ("oscillator", "coulomb"):
            raise ValueError(f"unknown system kind {self.kind!r}")

    @property
    def N(self) -> int:
        return 2 * self.n_r + self.L if self.kind == "oscillator" else self.n_r + self.L

    @classmethod
    def from_principal(cls, N: int, L: int, kind: str) -> "QuantumNumbers":
        diff = N - L
        if diff < 0:
            raise ValueError(f"need N >= L (N={N}, L={L})")
        if kind == "oscillator":
            if diff % 2:
                raise ValueError(f"oscillator needs N - L even (N={N}, L={L})")
            return cls(diff // 2, L, kind)
        return cls(diff, L, kind)


def centrifugal_coeff(n: int, L: int) -> float:
    return (2 * L + n - 1) * (2 * L + n - 3) / 4.0


@dataclass(frozen=True)
class QuasiradialEq:
    """
    One-dimensional problem ``Z'' + (Etilde - U_eff(x)) Z = 0``.

    Attributes
    ----------
    domain : (a, b)
        Open interval the quasiradial function lives on.
    centrifugal_coeff : float
        c = (2L+n-1)(2L+n-3)/4.
    angular_sign : int
        +1 for the ``c/sin^2`` and ``c/sinh^2`` barriers, -1 for the
        one-sheeted ``-c/cosh^2`` well.
    potential_term : callable
        x -> 2 R^2 V(x), vectorized.
    etilde_shift : float
        Etilde - 2 R^2 E.
    singularities : tuple
        Points where U_eff blows up (metadata only, never clamped).
    endpoint_exponents : (float | None, float | None)
        Power s with Z ~ d**s at a singular finite endpoint at distance d;
        None for an infinite end.
    asymptotic_limits : (float | None, float | None)
        lim U_eff at an infinite end; None for a finite end.
    interior_exponent : float or None
        Exponent of the regular solution at an interior singular point
        (the one-sheeted oscillator barrier at tau = 0).
    trig_form : callable or None
        For the sphere, U_eff as a function of (sin x, cos x). Lets callers
        evaluate U accurately from endpoint distances, where x itself would
        lose digits.
    """

    space: SpaceKind
    n: int
    R: float
    L: int
    domain: tuple[float, float]
    centrifugal_coeff: float
    angular_sign: int
    potential_term: Callable[[np.ndarray], np.ndarray]
    etilde_shift: float
    singularities: tuple = ()
    endpoint_exponents: tuple = (None, None)
    asymptotic_limits: tuple = (None, None)
    label: str = field(default="")
    interior_exponent: float | None = None
    trig_form: Callable | None = field(default=None, repr=False)

    def angular_term(self, x):
        x = np.asarray(x, dtype=float)
        if self.space is SpaceKind.SPHERE:
            f = np.sin(x)
        elif self.space is SpaceKind.TWO_SHEETED:
            f = np.sinh(x)
        else:
            f = np.cosh(x)
        return self.angular_sign * self.centrifugal_coeff / f**2

    def u_eff(self, x):
        """Effective potential; vectorized over x."""
        return self.angular_term(x) + self.potential_term(np.asarray(x, dtype=float))

    @property
    def continuum_threshold(self) -> float | None:
        """Lowest Etilde at which an infinite end stops decaying (None if compact)."""
        lims = [v for v in self.asymptotic_limits if v is not None]
        return min(lims) if lims else None

    def energy(self, etilde: float) -> float:
        return (etilde - self.etilde_shift) / (2.0 * self.R**2)

    def etilde(self, energy: float) -> float:
        return 2.0 * self.R**2 * energy + self.etilde_shift


def _potential_function(spec: ProblemSpec):
    """V(x) as a vectorized callable plus its singular points."""
    R = spec.R
    sp = spec.space
    if spec.is_oscillator:
        w2 = spec.interaction.omega**2 * R**2 / 2.0
        if sp is SpaceKind.SPHERE:
            return (lambda x: w2 * np.tan(x) ** 2), (math.pi / 2,)
        if sp is SpaceKind.TWO_SHEETED:
            return (lambda x: w2 * np.tanh(x) ** 2), ()
        return (lambda x: w2 / np.tanh(x) ** 2), (0.0,)
    a = spec.interaction.alpha / R
    if sp is SpaceKind.SPHERE:
        return (lambda x: -a / np.tan(x)), (0.0, math.pi)
    if sp is SpaceKind.TWO_SHEETED:
        return (lambda x: -a * (1.0 / np.tanh(x) - 1.0)), (0.0,)
    return (lambda x: -a * (np.tanh(x) + 1.0)), ()


def potential_value(spec: ProblemSpec, x: float) -> float:
    """
    Central potential V at coordinate x.

    Raises
    ------
    SingularityError
        At chi = pi/2 (sphere oscillator), chi in {0, pi} (sphere Coulomb),
        tau = 0 (two-sheeted Coulomb, one-sheeted oscillator).
    ValueError
        If x lies outside the coordinate domain.
    """
    a, b = spec.space.coordinate_domain
    if not (a <= x <= b):
        raise ValueError(f"x={x!r} outside the coordinate domain [{a}, {b}]")
    if math.isinf(x):
        return _potential_limit(spec, x)
    func, sing = _potential_function(spec)
    for s in sing:
        if abs(x - s) < 1e-14:
            raise SingularityError(x)
    with np.errstate(divide="ignore"):
        val = float(func(np.asarray(x)))
    if not math.isfinite(val):
        raise SingularityError(x)
    return val


def _potential_limit(spec: ProblemSpec, x: float) -> float:
    R = spec.R
    if spec.is_oscillator:
        return spec.interaction.omega**2 * R**2 / 2.0
    a = spec.interaction.alpha / R
    if spec.space is SpaceKind.TWO_SHEETED:
        return 0.0
    return -2.0 * a if x > 0 else 0.0


def reduce_to_quasiradial(spec: ProblemSpec, L: int) -> QuasiradialEq:
    """
    Quasiradial equation for angular momentum L.

    The sphere oscillator is reduced to the upper hemisphere (0, pi/2): the
    tan^2 barrier at the equator is impenetrable. The one-sheeted oscillator
    keeps the full line with tau = 0 listed as an interior singularity.
    """
    if L < 0:
        raise ValueError("L must be nonnegative")
    n, R = spec.n, spec.R
    c = centrifugal_coeff(n, L)
    s_ang = L + (n - 1) / 2.0
    func, sing = _potential_function(spec)
    two_r2 = 2.0 * R**2
    pot = lambda x, f=func: two_r2 * f(x)  # noqa: E731
    shift = spec.space.shift_sign * (n - 1) ** 2 / 4.0
    sp = spec.space
    trig = None
    if sp is SpaceKind.SPHERE:
        if spec.is_oscillator:
            nu = math.sqrt(spec.interaction.omega**2 * R**4 + 0.25)
            domain, exps = (0.0, math.pi / 2), (s_ang, nu + 0.5)
            w4 = spec.interaction.omega**2 * R**4
            trig = lambda s, co: c / s**2 + w4 * (s / co) ** 2  # noqa: E731
        else:
            domain, exps = (0.0, math.pi), (s_ang, s_ang)
            b2 = 2.0 * spec.interaction.alpha * R
            trig = lambda s, co: c / s**2 - b2 * co / s  # noqa: E731
        lims = (None, None)
        sign = 1
    elif sp is SpaceKind.TWO_SHEETED:
        domain, exps = (0.0, math.inf), (s_ang, None)
        lim = spec.interaction.omega**2 * R**4 if spec.is_oscillator else 0.0
        lims = (None, lim)
        sign = 1
    else:
        sign = -1
        if spec.is_oscillator:
            nu = math.sqrt(spec.interaction.omega**2 * R**4 + 0.25)
            w4 = spec.interaction.omega**2 * R**4
            return QuasiradialEq(
                sp, n, R, L, (-math.inf, math.inf), c, sign, pot, shift, (0.0,),
                (None, None), (w4, w4), label="h1-oscillator", interior_exponent=nu + 0.5,
            )
        domain, exps = (-math.inf, math.inf), (None, None)
        lims = (0.0, -4.0 * spec.interaction.alpha * R)
    return QuasiradialEq(
        sp, n, R, L, domain, c, sign, pot, shift, tuple(sing), exps, lims,
        label=f"{sp.value}-{spec.interaction.kind}", trig_form=trig,
    )


def free_quasiradial(space: SpaceKind, n: int, R: float, L: int) -> QuasiradialEq:
    """Quasiradial equation with V = 0 (the Laplace-Beltrami operator alone)."""
    c = centrifugal_coeff(n, L)
    s_ang = L + (n - 1) / 2.0
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
    shift = space.shift_sign * (n - 1) ** 2 / 4.0
    if space is SpaceKind.SPHERE:
        return QuasiradialEq(space, n, R, L, (0.0, math.pi), c, 1, zero, shift,
                             (0.0, math.pi), (s_ang, s_ang), (None, None), label="sphere-free",
                             trig_form=lambda s, co: c / s**2)
    if space is SpaceKind.TWO_SHEETED:
        return QuasiradialEq(space, n, R, L, (0.0, math.inf), c, 1, zero, shift,
                             (0.0,), (s_ang, None), (None, 0.0), label="h2-free")
    return QuasiradialEq(space, n, R, L, (-math.inf, math.inf), c, -1, zero, shift,
                         (), (None, None), (0.0, 0.0), label="h1-free")


def weight_transform(space: SpaceKind, n: int):
    """Return x -> w(x) with Z = w * (quasiradial R): sin, sinh or cosh to the (n-1)/2."""
    p = (n - 1) / 2.0
    f = {SpaceKind.SPHERE: np.sin, SpaceKind.TWO_SHEETED: np.sinh,
         SpaceKind.ONE_SHEETED: np.cosh}[space]

    def w(x):
        return np.abs(f(np.asarray(x, dtype=float))) ** p

    return w


def energy_from_shifted(space: SpaceKind, n: int, R: float, etilde: float) -> float:
    if not R > 0:
        raise ValueError("R must be positive")
    return (etilde - space.shift_sign * (n - 1) ** 2 / 4.0) / (2.0 * R**2)


def shifted_from_energy(space: SpaceKind, n: int, R: float, energy: float) -> float:
    if not R > 0:
        raise ValueError("R must be positive")
    return 2.0 * R**2 * energy + space.shift_sign * (n - 1) ** 2 / 4.0
