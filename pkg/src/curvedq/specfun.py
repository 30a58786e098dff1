"""
Special functions and quadrature used throughout the package.

Everything here is self-contained: a complex log-gamma (Lanczos), Pochhammer
symbols, terminating Gauss and confluent hypergeometric series, and
double-exponential / Gauss-Legendre quadrature with level doubling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PoleError",
    "DegenerateParameterError",
    "QuadratureError",
    "QuadratureRule",
    "ln_gamma",
    "gamma",
    "pochhammer",
    "hyp2f1_terminating",
    "hyp2f1_coefficients",
    "hyp1f1_terminating",
    "integrate",
]


class PoleError(ValueError):
    """Argument sits on (or too close to) a pole of the gamma function."""


class DegenerateParameterError(ValueError):
    """A denominator Pochhammer symbol of a hypergeometric series vanishes."""


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, msg, last, previous):
        super().__init__(f"{msg} (last={last!r}, previous={previous!r})")
        self.last = last
        self.previous = previous


# Lanczos coefficients, g = 607/128, 15 terms (Godfrey).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_POLE_TOL = 1e-12


def _lanczos_lngamma(z: complex) -> complex:
    # valid for Re z >= 0.5
    ser = _LANCZOS_COEF[0]
    for j in range(1, len(_LANCZOS_COEF)):
        ser += _LANCZOS_COEF[j] / (z + (j - 1))
    t = z + _LANCZOS_G - 0.5
    return _HALF_LOG_2PI + (z - 0.5) * cmath.log(t) - t + cmath.log(ser)


def ln_gamma(z):
    """
    Principal branch of log Gamma(z).

    Real input in the right half-line returns a float; everything else
    returns a complex number. For Re z < 0.5 the argument is shifted up with
    the recurrence ``lnG(z) = lnG(z+k) - sum(log(z+j))``, which keeps the
    result on the principal branch (the one continuous from the positive
    real axis).

    Raises
    ------
    PoleError
        If z is within 1e-12 of a nonpositive integer.
    """
    zc = complex(z)
    if zc.real <= 0.5:
        nearest = round(zc.real)
        if nearest <= 0 and abs(zc - nearest) < _POLE_TOL:
            raise PoleError(f"ln_gamma: z={z!r} is at a pole of Gamma")
    real_input = isinstance(z, (int, float, np.integer, np.floating))
    if zc.real >= 0.5:
        val = _lanczos_lngamma(zc)
    else:
        k = int(math.ceil(0.5 - zc.real))
        shift = 0j
        for j in range(k):
            shift += cmath.log(zc + j)
        val = _lanczos_lngamma(zc + k) - shift
    if real_input and zc.real > 0:
        return val.real
    return val


def gamma(z):
    """Gamma function via :func:`ln_gamma` (complex for non-positive-real input)."""
    val = cmath.exp(ln_gamma(z))
    if isinstance(z, (int, float, np.integer, np.floating)):
        return val.real
    return val


def pochhammer(a, k: int):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1."""
    if k < 0:
        raise ValueError("pochhammer: k must be nonnegative")
    out = 1.0 if not isinstance(a, complex) else 1.0 + 0j
    for j in range(k):
        out *= a + j
    return out


def hyp2f1_coefficients(m: int, b, c) -> np.ndarray:
    """
    Power-series coefficients of 2F1(-m, b; c; z), lowest order first.

    The coefficient array is real when b and c are real, complex otherwise.
    """
    if m < 0:
        raise ValueError("hyp2f1: m must be nonnegative")
    dtype = complex if isinstance(b, complex) or isinstance(c, complex) else float
    coef = np.empty(m + 1, dtype=dtype)
    coef[0] = 1.0
    for k in range(m):
        denom = (c + k) * (k + 1)
        if abs(c + k) < _POLE_TOL:
            raise DegenerateParameterError(f"hyp2f1: (c)_k vanishes for c={c!r}, k={k + 1}")
        coef[k + 1] = coef[k] * (-m + k) * (b + k) / denom
    return coef


def _kahan_poly(coef, z):
    total = 0.0 * coef[0] * z
    comp = 0.0 * total
    zk = 1.0 + 0.0 * z
    for ck in coef:
        y = ck * zk - comp
        t = total + y
        comp = (t - total) - y
        total = t
        zk = zk * z
    return total


def hyp2f1_terminating(m: int, b, c, z):
    """
    Terminating Gauss series 2F1(-m, b; c; z).

    The degree-m polynomial is summed in ascending order with Kahan
    compensation. Works for scalar or numpy-array ``z`` and complex
    parameters.
    """
    coef = hyp2f1_coefficients(m, b, c)
    return _kahan_poly(coef, z)


def hyp1f1_terminating(m: int, c: float, z):
    """Terminating confluent series 1F1(-m; c; z) for c > 0."""
    if c <= 0:
        raise ValueError("hyp1f1: c must be positive")
    coef = np.empty(m + 1)
    coef[0] = 1.0
    for k in range(m):
        coef[k + 1] = coef[k] * (-m + k) / ((c + k) * (k + 1))
    return _kahan_poly(coef, z)


# ----------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureRule:
    """
    Quadrature settings.

    ``kind`` is one of ``"de"`` (double exponential; the tanh-sinh,
    exp-sinh or sinh-sinh variant is picked from the domain) or
    ``"gauss-legendre"`` (finite intervals only). ``level`` is the maximum
    number of halvings (DE) or doublings of the order (Gauss-Legendre).
    """

    kind: str = "de"
    level: int = 12
    target_abs_tol: float = 1e-12
    start_order: int = 8

    def __post_init__(self):
        if self.kind not in ("de", "gauss-legendre"):
            raise ValueError(f"unknown quadrature kind {self.kind!r}")
        if self.level < 1:
            raise ValueError("level must be positive")


DEFAULT_RULE = QuadratureRule()

_T_MAX = 4.0
_HALF_PI = 0.5 * math.pi


def _de_nodes(a: float, b: float, h: float, offset: bool):
    """Nodes/weights for one DE level; with ``offset`` only the odd multiples of h."""
    if offset:
        k = np.arange(1, int(math.ceil(_T_MAX / h)) + 1, 2)
        t = np.concatenate([-k[::-1], k]) * h
    else:
        k = np.arange(-int(math.ceil(_T_MAX / h)), int(math.ceil(_T_MAX / h)) + 1)
        t = k * h
    s = _HALF_PI * np.sinh(t)
    ds = _HALF_PI * np.cosh(t)
    if math.isfinite(a) and math.isfinite(b):
        half = 0.5 * (b - a)
        # distance to the nearer endpoint without cancellation
        e = np.exp(-2.0 * np.abs(s))
        frac = e / (1.0 + e)
        x = np.where(s < 0, a + (b - a) * frac, b - (b - a) * frac)
        w = half * ds / np.cosh(s) ** 2
    elif math.isfinite(a):
        x = a + np.exp(s)
        w = ds * np.exp(s)
    elif math.isfinite(b):
        x = b - np.exp(s)
        w = ds * np.exp(s)
    else:
        x = np.sinh(s)
        w = ds * np.cosh(s)
    keep = (x > a) & (x < b) & np.isfinite(w) & (w > 0)
    return x[keep], w[keep] * h


def _integrate_de(f, a, b, rule):
    h = 1.0
    x, w = _de_nodes(a, b, h, offset=False)
    fx = np.asarray(f(x), dtype=float)
    total = float(np.sum(w * fx))
    mag = float(np.sum(np.abs(w * fx)))
    prev = total
    for level in range(1, rule.level + 1):
        h *= 0.5
        x, w = _de_nodes(a, b, h, offset=True)
        fx = np.asarray(f(x), dtype=float)
        total = 0.5 * prev + float(np.sum(w * fx))
        mag = 0.5 * mag + float(np.sum(np.abs(w * fx)))
        err = abs(total - prev)
        floor = 64.0 * np.finfo(float).eps * mag
        if level >= 3 and err <= max(rule.target_abs_tol, floor):
            return total, err
        prev = total
    raise QuadratureError("double-exponential quadrature did not converge", total, prev)


def _integrate_gl(f, a, b, rule):
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("Gauss-Legendre needs a finite interval")
    order = rule.start_order
    prev = None
    for _ in range(rule.level):
        t, w = np.polynomial.legendre.leggauss(order)
        x = 0.5 * (b - a) * t + 0.5 * (b + a)
        val = 0.5 * (b - a) * float(np.sum(w * np.asarray(f(x), dtype=float)))
        if prev is not None and abs(val - prev) <= rule.target_abs_tol:
            return val, abs(val - prev)
        prev = val
        order *= 2
    raise QuadratureError("Gauss-Legendre quadrature did not converge", val, prev)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rule: QuadratureRule = DEFAULT_RULE,
) -> tuple[float, float]:
    """
    Integrate a vectorized real function over [a, b].

    ``a`` may be ``-inf`` and ``b`` may be ``inf``. The integrand is never
    evaluated at a finite endpoint, so algebraic endpoint singularities are
    fine. Levels are refined until two successive estimates agree to
    ``rule.target_abs_tol`` (or to the rounding floor of the sum).

    Returns
    -------
    value, abs_err_estimate : float
    """
    if not a < b:
        raise ValueError("integrate: need a < b")
    if rule.kind == "gauss-legendre":
        return _integrate_gl(f, a, b, rule)
    return _integrate_de(f, a, b, rule)
