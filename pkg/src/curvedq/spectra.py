"""
Closed-form bound-state spectra for the six (space, potential) systems.

Bound-state conditions are implemented as strict positivity of the factor
that appears under the square root of each normalization constant; at
marginal equality the state is not normalizable and is reported unbound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ProblemSpec, QuantumNumbers, SpaceKind, shifted_from_energy

__all__ = [
    "UnboundStateError",
    "SpectrumEntry",
    "oscillator_nu",
    "oscillator_energy",
    "coulomb_sigma",
    "coulomb_energy",
    "energy",
    "bound_margin",
    "is_bound",
    "bound_state_count",
    "enumerate_bound_states",
    "continuum_threshold",
]


class UnboundStateError(ValueError):
    """Requested quantum numbers violate the bound-state condition."""


@dataclass(frozen=True)
class SpectrumEntry:
    quantum: QuantumNumbers
    energy: float
    etilde: float
    epsilon: complex | float
    is_bound: bool
    sigma: float | None = None
    nu: float | None = None


def oscillator_nu(omega: float, R: float) -> float:
    """nu = sqrt(omega^2 R^4 + 1/4)."""
    if omega < 0 or not R > 0:
        raise ValueError("need omega >= 0 and R > 0")
    return math.sqrt(omega**2 * R**4 + 0.25)


def _coulomb_denominator(space: SpaceKind, n: int, q: QuantumNumbers) -> float:
    if space is SpaceKind.ONE_SHEETED:
        return q.L - q.n_r + (n - 3) / 2.0
    return q.n_r + q.L + (n - 1) / 2.0


def coulomb_sigma(n: int, R: float, alpha: float, q: QuantumNumbers,
                  space: SpaceKind = SpaceKind.SPHERE) -> float:
    """
    sigma = alpha R / p with p = N + (n-1)/2 (sphere, two-sheeted) or
    p = L - n_r + (n-3)/2 (one-sheeted).
    """
    p = _coulomb_denominator(space, n, q)
    if not p > 0:
        raise ValueError(f"sigma denominator {p} is not positive for {q}")
    return alpha * R / p


def bound_margin(spec: ProblemSpec, q: QuantumNumbers) -> float:
    """
    Quantity that must be strictly positive for a normalizable state.

    Sphere systems always return +inf.
    """
    n, R = spec.n, spec.R
    sp = spec.space
    if sp is SpaceKind.SPHERE:
        return math.inf
    if spec.is_oscillator:
        nu = oscillator_nu(spec.interaction.omega, R)
        if sp is SpaceKind.TWO_SHEETED:
            return nu - q.L - 2 * q.n_r - n / 2.0
        return q.L + n / 2.0 - nu - 2 * q.n_r - 2
    alpha = spec.interaction.alpha
    if sp is SpaceKind.TWO_SHEETED:
        p = q.n_r + q.L + (n - 1) / 2.0
        return alpha * R / p - p
    p = q.L - q.n_r + (n - 3) / 2.0
    if p <= 0:
        return p
    return p * p - alpha * R


def _inequality_text(spec: ProblemSpec) -> str:
    sp = spec.space
    if spec.is_oscillator:
        return ("nu - L - 2 n_r - n/2 > 0" if sp is SpaceKind.TWO_SHEETED
                else "L + n/2 - nu - 2 n_r - 2 > 0")
    return ("sigma - (N + (n-1)/2) > 0" if sp is SpaceKind.TWO_SHEETED
            else "(L - n_r + (n-3)/2)^2 > alpha R with L - n_r + (n-3)/2 > 0")


def is_bound(spec: ProblemSpec, q: QuantumNumbers) -> bool:
    return bound_margin(spec, q) > 0


def _check_kind(spec: ProblemSpec, q: QuantumNumbers):
    if q.kind != spec.interaction.kind:
        raise ValueError(f"quantum numbers of kind {q.kind!r} used with a {spec.interaction.kind} system")


def oscillator_energy(spec: ProblemSpec, q: QuantumNumbers) -> SpectrumEntry:
    """Energy, Etilde and quantized epsilon of an oscillator level."""
    if not spec.is_oscillator:
        raise ValueError("oscillator_energy needs an oscillator system")
    _check_kind(spec, q)
    if not is_bound(spec, q):
        raise UnboundStateError(f"{q} is not bound: requires {_inequality_text(spec)}")
    n, R = spec.n, spec.R
    omega = spec.interaction.omega
    nu = oscillator_nu(omega, R)
    N = q.N
    sp = spec.space
    if sp is SpaceKind.SPHERE:
        E = ((N + 1) * (N + n) + (2 * nu - 1) * (N + n / 2.0)) / (2 * R**2)
        eps = (2 * q.n_r + q.L + nu + n / 2.0) ** 2
    elif sp is SpaceKind.TWO_SHEETED:
        E = (-N * (N + n - 1) + (2 * nu - 1) * (N + n / 2.0)) / (2 * R**2)
        eps = -((2 * q.n_r + q.L - nu + n / 2.0) ** 2)
    else:
        j = 2 * q.n_r - q.L
        E = -((j + 2) * (j - n + 3) + (2 * nu - 1) * (j - n / 2.0 + 2)) / (2 * R**2)
        eps = -((j + nu - n / 2.0 + 2) ** 2)
    et = shifted_from_energy(sp, n, R, E)
    return SpectrumEntry(q, E, et, eps, True, nu=nu)


def coulomb_energy(spec: ProblemSpec, q: QuantumNumbers) -> SpectrumEntry:
    """Energy, Etilde, sigma and epsilon of a Coulomb level."""
    if not spec.is_coulomb:
        raise ValueError("coulomb_energy needs a Coulomb system")
    _check_kind(spec, q)
    if not is_bound(spec, q):
        raise UnboundStateError(f"{q} is not bound: requires {_inequality_text(spec)}")
    n, R = spec.n, spec.R
    alpha = spec.interaction.alpha
    sp = spec.space
    sigma = coulomb_sigma(n, R, alpha, q, sp)
    N = q.N
    if sp is SpaceKind.SPHERE:
        p = N + (n - 1) / 2.0
        E = N * (N + n - 1) / (2 * R**2) - alpha**2 / (2 * p**2)
        # epsilon of the dual oscillator, complex because k = i alpha
        eps = complex(p, sigma) ** 2
    elif sp is SpaceKind.TWO_SHEETED:
        p = N + (n - 1) / 2.0
        E = -N * (N + n - 1) / (2 * R**2) - alpha**2 / (2 * p**2) + alpha / R
        eps = None
    else:
        p = q.L - q.n_r + (n - 3) / 2.0
        E = (-(q.L - q.n_r - 1) * (q.L - q.n_r + n - 2) / (2 * R**2)
             - alpha**2 / (2 * p**2) - alpha / R)
        eps = None
    et = shifted_from_energy(sp, n, R, E)
    if sp is SpaceKind.TWO_SHEETED:
        eps = et
    elif sp is SpaceKind.ONE_SHEETED:
        eps = et + 4 * alpha * R
    return SpectrumEntry(q, E, et, eps, True, sigma=sigma)


def energy(spec: ProblemSpec, q: QuantumNumbers) -> SpectrumEntry:
    if spec.is_oscillator:
        return oscillator_energy(spec, q)
    return coulomb_energy(spec, q)


def continuum_threshold(spec: ProblemSpec) -> float | None:
    """Etilde at which the continuum starts; None on the sphere."""
    sp = spec.space
    if sp is SpaceKind.SPHERE:
        return None
    if spec.is_oscillator:
        return spec.interaction.omega**2 * spec.R**4
    if sp is SpaceKind.TWO_SHEETED:
        return 0.0
    return -4.0 * spec.interaction.alpha * spec.R


def _bound_n_r(spec: ProblemSpec, L: int, cap: int) -> list[int]:
    kind = spec.interaction.kind
    out = []
    for n_r in range(cap):
        q = QuantumNumbers(n_r, L, kind)
        if is_bound(spec, q):
            out.append(n_r)
        elif spec.space is not SpaceKind.SPHERE:
            # all margins decrease with n_r
            break
    return out


def bound_state_count(spec: ProblemSpec, L: int, cap: int = 10_000) -> int:
    """
    Number of bound quasiradial levels at angular momentum L.

    The sphere spectrum is infinite, so ``cap`` is returned there. On the
    one-sheeted oscillator each level is doubly degenerate (even and odd in
    tau); it is counted once.
    """
    if spec.space is SpaceKind.SPHERE:
        return cap
    return len(_bound_n_r(spec, L, cap))


def enumerate_bound_states(spec: ProblemSpec, L: int, cap: int = 10) -> list[SpectrumEntry]:
    """Bound levels at angular momentum L, lowest n_r first, at most ``cap`` of them."""
    kind = spec.interaction.kind
    return [energy(spec, QuantumNumbers(n_r, L, kind)) for n_r in _bound_n_r(spec, L, cap)]

