"""
Numerical ground truth for the closed forms.

The eigenvalue oracle is a Numerov shooting solver. Each quasiradial
equation is moved to a uniform grid in an auxiliary variable t through
x = g(t) and y(t) = Z(g(t)) / sqrt(g'(t)), which turns it into

    y'' + [g'^2 (Etilde - U(g)) + S/2] y = 0,

with S the Schwarzian derivative of g. Singular finite endpoints are pushed
to t = +-inf (logistic map, softplus map), so the grid resolves the
x**s endpoint behavior without clustering tricks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.optimize import brentq

from . import spectra
from .model import Oscillator, ProblemSpec, QuantumNumbers, QuasiradialEq, SpaceKind
from .wavefn import RadialState, flat_oscillator_reference, oscillator_state

__all__ = [
    "BracketError",
    "ConvergenceError",
    "ShootingConfig",
    "ConvergenceReport",
    "numerov_eigenvalues",
    "numerov_eigenvalues_etilde",
    "numerov_count_below",
    "ode_residual",
    "residual_points",
    "rosen_morse_reference",
    "contraction_suite",
]

_TAIL_LOG = math.log(1e14)


class BracketError(RuntimeError):
    """No energy bracket could be found for a requested level."""


class ConvergenceError(RuntimeError):
    """Root refinement failed; carries the last bracket."""

    def __init__(self, msg, bracket):
        super().__init__(f"{msg} (bracket={bracket!r})")
        self.bracket = bracket


@dataclass(frozen=True)
class ShootingConfig:
    """
    Settings of the shooting solver.

    Parameters
    ----------
    grid_points : int
        Minimum number of grid points (the step is also capped by ``max_step``).
    endpoint_t : float
        Singular finite endpoints are cut at |t| = endpoint_t, i.e. at
        distance ~ exp(-endpoint_t) from the endpoint in x.
    x_max : float or None
        Cutoff for infinite ends. None picks it from the decay rate of each
        level so that the tail is below 1e-14 of the peak.
    max_step : float
        Largest allowed step in t.
    energy_bracket : (float, float) or None
        Search window in Etilde; None finds one automatically.
    bisection_tol : float
        Relative width at which node bisection hands over to root refinement.
    """

    grid_points: int = 4000
    endpoint_t: float = 32.0
    x_max: float | None = None
    max_step: float = 0.01
    energy_bracket: tuple | None = None
    bisection_tol: float = 1e-4

    def __post_init__(self):
        if self.grid_points < 1000:
            raise ValueError("grid_points must be at least 1000")
        if not self.endpoint_t > 0 or not self.max_step > 0:
            raise ValueError("endpoint_t and max_step must be positive")


@dataclass(frozen=True)
class ConvergenceReport:
    radii: list
    errors: list
    fitted_exponent: float
    reference: str
    wave_errors: list = field(default_factory=list)
    wave_exponent: float = math.nan


# ----------------------------------------------------------------------------
# kernels


@numba.njit(cache=True, nogil=True)
def _numerov(q, h, y0, y1, stop, out):
    """Integrate y'' + q y = 0 from index 0 to ``stop``; return node count."""
    h12 = h * h / 12.0
    out[0] = y0
    out[1] = y1
    nodes = 0
    f_prev = 1.0 + h12 * q[0]
    f_cur = 1.0 + h12 * q[1]
    for i in range(1, stop):
        f_next = 1.0 + h12 * q[i + 1]
        y = ((12.0 - 10.0 * f_cur) * out[i] - f_prev * out[i - 1]) / f_next
        out[i + 1] = y
        if y * out[i] < 0.0:
            nodes += 1
        if abs(y) > 1e150:
            for j in range(i + 2):
                out[j] *= 1e-150
        f_prev = f_cur
        f_cur = f_next
    return nodes


# ----------------------------------------------------------------------------
# grids


@dataclass
class _Grid:
    t: np.ndarray
    h: float
    x: np.ndarray
    g2: np.ndarray
    p: np.ndarray
    left: tuple  # ("ratio", s) or ("dirichlet", None)
    right: tuple
    u: np.ndarray

    def q(self, et: float) -> np.ndarray:
        return et * self.g2 - self.p


def _sphere_trig(domain, dl, dr):
    near_left = dl <= dr
    b = domain[1]
    if abs(b - math.pi) < 1e-15:
        s = np.where(near_left, np.sin(dl), np.sin(dr))
        c = np.where(near_left, np.cos(dl), -np.cos(dr))
    elif abs(b - math.pi / 2) < 1e-15:
        s = np.where(near_left, np.sin(dl), np.cos(dr))
        c = np.where(near_left, np.cos(dl), np.sin(dr))
    else:
        x = np.where(near_left, dl, b - dr)
        s, c = np.sin(x), np.cos(x)
    return s, c


def _step_count(span, cfg):
    return max(cfg.grid_points, int(math.ceil(span / cfg.max_step)) + 1)


def _expit(t):
    e = np.exp(-np.abs(t))
    return np.where(t >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _build_grid(eq: QuasiradialEq, cfg: ShootingConfig, x_left: float, x_right: float) -> _Grid:
    a, b = eq.domain
    half_line = eq.interior_exponent is not None
    if half_line:
        a = 0.0
    T = cfg.endpoint_t
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if math.isfinite(a) and math.isfinite(b):
            npts = _step_count(2 * T, cfg)
            t = np.linspace(-T, T, npts)
            sl, sr = _expit(t), _expit(-t)
            width = b - a
            dl, dr = width * sl, width * sr
            gp = width * sl * sr
            x = np.where(dl <= dr, a + dl, b - dr)
            if eq.trig_form is not None:
                u = eq.trig_form(*_sphere_trig((a, b), dl, dr))
            else:
                u = eq.u_eff(x)
            s_half = -0.25 * np.ones_like(t)
            left = ("ratio", eq.endpoint_exponents[0])
            right = ("ratio", eq.endpoint_exponents[1])
        elif math.isfinite(a):
            npts = _step_count(T + x_right, cfg)
            t = np.linspace(-T, x_right, npts)
            x = np.logaddexp(0.0, t)
            gp = _expit(t)
            u = eq.u_eff(x)
            s_half = -0.25 * (1.0 - gp**2)
            s0 = eq.interior_exponent if half_line else eq.endpoint_exponents[0]
            left = ("ratio", s0)
            right = ("dirichlet", None)
        else:
            npts = _step_count(x_left + x_right, cfg)
            t = np.linspace(-x_left, x_right, npts)
            x = t
            gp = np.ones_like(t)
            u = eq.u_eff(x)
            s_half = np.zeros_like(t)
            left = ("dirichlet", None)
            right = ("dirichlet", None)
    g2 = gp * gp
    p = g2 * u - s_half
    return _Grid(t, float(t[1] - t[0]), x, g2, p, left, right, u)


def _start(kind, h):
    if kind[0] == "dirichlet":
        return 0.0, 1e-30
    return 1.0, math.exp((kind[1] - 0.5) * h)


class _Shooter:
    def __init__(self, grid: _Grid):
        self.g = grid
        n = len(grid.t)
        self.buf = np.empty(n)
        self.buf2 = np.empty(n)

    def count(self, et: float) -> int:
        """Number of discrete eigenvalues below et."""
        g = self.g
        q = g.q(et)
        y0, y1 = _start(g.left, g.h)
        n = len(q)
        nodes = _numerov(q, g.h, y0, y1, n - 1, self.buf)
        if g.right[0] == "ratio":
            ratio = math.exp((g.right[1] - 0.5) * g.h)
            y = self.buf
            d = y[-1] - y[-2] / ratio
            if d * y[-1] < 0.0:
                nodes += 1
        return nodes

    def mismatch(self, et: float, m: int) -> float:
        g = self.g
        q = g.q(et)
        n = len(q)
        y0, y1 = _start(g.left, g.h)
        _numerov(q, g.h, y0, y1, m + 1, self.buf)
        r0, r1 = _start(g.right, g.h)
        _numerov(q[::-1].copy(), g.h, r0, r1, n - 1 - m, self.buf2)
        yl0, yl1 = self.buf[m], self.buf[m + 1]
        yr0, yr1 = self.buf2[n - 1 - m], self.buf2[n - 2 - m]
        cas = yl0 * yr1 - yl1 * yr0
        return cas / (math.hypot(yl0, yl1) * math.hypot(yr0, yr1))

    def matching_index(self, et: float) -> int:
        q = self.g.q(et)
        n = len(q)
        flips = np.nonzero(np.diff(np.sign(q)) != 0)[0]
        mid = n // 2
        if len(flips) == 0:
            return mid
        m = int(flips[np.argmin(np.abs(flips - mid))])
        return min(max(m, 2), n - 4)


# ----------------------------------------------------------------------------


def _threshold(eq: QuasiradialEq):
    return eq.continuum_threshold


def _lower_bound(sh: _Shooter) -> float:
    lo = -1.0
    for _ in range(200):
        if sh.count(lo) == 0:
            return lo
        lo = 2.0 * lo - 1.0
    raise BracketError("no energy below the ground state found")


def _bisect_count(sh: _Shooter, k: int, lo: float, hi: float, tol: float):
    """Shrink [lo, hi] so that count(lo) <= k < count(hi) and count(lo) == k."""
    while True:
        if hi - lo <= tol * max(1.0, abs(lo), abs(hi)):
            if sh.count(lo) == k:
                return lo, hi
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            return lo, hi
        c = sh.count(mid)
        if c > k:
            hi = mid
        else:
            lo = mid


def _refine(sh: _Shooter, k: int, lo: float, hi: float) -> float:
    m = sh.matching_index(0.5 * (lo + hi))
    f_lo, f_hi = sh.mismatch(lo, m), sh.mismatch(hi, m)
    if f_lo * f_hi < 0:
        return brentq(sh.mismatch, lo, hi, args=(m,), xtol=1e-15, rtol=1e-15, maxiter=200)
    # the matching root sits a hair outside the node bracket: finish by counting
    lo, hi = _bisect_count(sh, k, lo, hi, 1e-15)
    return 0.5 * (lo + hi)


def _solve_on_grid(eq, cfg, grid, count):
    sh = _Shooter(grid)
    thr = _threshold(eq)
    if cfg.energy_bracket is not None:
        lo, hi = cfg.energy_bracket
    else:
        lo = _lower_bound(sh)
        hi = thr if thr is not None else max(1.0, abs(lo))
    if thr is None and cfg.energy_bracket is None:
        for _ in range(200):
            if sh.count(hi) >= count:
                break
            hi *= 2.0
        else:
            raise BracketError(f"could not bracket {count} levels")
    n_hi = sh.count(hi)
    base = sh.count(lo)
    levels = []
    for k in range(base, min(base + count, n_hi)):
        a, b = _bisect_count(sh, k, lo, hi, cfg.bisection_tol)
        levels.append(_refine(sh, k, a, b))
        lo = levels[-1]
    return levels


def _required_extent(eq, grid, et):
    """(x_left, x_right) cutoffs so the tails of a level at et are below 1e-14."""
    need_l = need_r = 0.0
    lims = eq.asymptotic_limits
    allowed = grid.x[grid.u < et]
    if lims[1] is not None and et < lims[1]:
        kappa = math.sqrt(lims[1] - et)
        turn = float(allowed.max()) if allowed.size else 0.0
        need_r = max(turn, 0.0) + _TAIL_LOG / kappa
    if lims[0] is not None and et < lims[0] and eq.interior_exponent is None:
        kappa = math.sqrt(lims[0] - et)
        turn = float(allowed.min()) if allowed.size else 0.0
        need_l = max(-turn, 0.0) + _TAIL_LOG / kappa
    return need_l, need_r


def numerov_eigenvalues_etilde(eq: QuasiradialEq, config: ShootingConfig | None = None,
                               count: int = 1) -> list[float]:
    """Lowest ``count`` eigenvalues of Etilde (fewer if the bound spectrum ends)."""
    cfg = config or ShootingConfig()
    if count < 1:
        raise ValueError("count must be positive")
    if cfg.x_max is not None:
        grid = _build_grid(eq, cfg, cfg.x_max, cfg.x_max)
        return _solve_on_grid(eq, cfg, grid, count)
    xl = xr = 40.0
    for _ in range(6):
        grid = _build_grid(eq, cfg, xl, xr)
        levels = _solve_on_grid(eq, cfg, grid, count)
        if not levels:
            return levels
        need = [_required_extent(eq, grid, et) for et in levels]
        nl = max(v[0] for v in need)
        nr = max(v[1] for v in need)
        if nl <= xl and nr <= xr:
            return levels
        xl, xr = max(xl, 1.2 * nl), max(xr, 1.2 * nr)
    return levels


def numerov_eigenvalues(eq: QuasiradialEq, config: ShootingConfig | None = None,
                        count: int = 1) -> list[float]:
    """
    Lowest ``count`` energies E of the quasiradial problem.

    Levels are bracketed by node counting and refined on the normalized
    Casoratian of the left and right solutions at the turning point nearest
    the middle of the grid. On hyperboloids only levels below the continuum
    threshold are returned, so the list may be shorter than ``count``.
    """
    return [eq.energy(et) for et in numerov_eigenvalues_etilde(eq, config, count)]


def numerov_count_below(eq: QuasiradialEq, etilde: float | None = None, x_max: float = 200.0,
                        config: ShootingConfig | None = None) -> int:
    """Number of eigenvalues below ``etilde`` (default: the continuum threshold)."""
    cfg = config or ShootingConfig()
    et = _threshold(eq) if etilde is None else etilde
    if et is None:
        raise ValueError("compact domain: pass an explicit etilde")
    grid = _build_grid(eq, cfg, x_max, x_max)
    return _Shooter(grid).count(et)


# ----------------------------------------------------------------------------


RESIDUAL_FLOOR = 1e-5


def residual_points(state: RadialState, points: int = 50) -> np.ndarray:
    """
    Interior sample points for residual checks: a uniform grid over the bulk
    of the state with the classical turning points swapped in for the
    nearest grid points.

    Turning points are where the check is most sensitive to a wrong energy,
    since Z'' and (Etilde - U) Z both vanish there for the exact state.
    """
    x = state.sample_grid(points)
    lo, hi = state.support(1e-10)
    fine = np.linspace(lo, hi, 4001)[1:-1]
    with np.errstate(all="ignore"):
        f = state.etilde - state.eq.u_eff(fine)
    ok = np.isfinite(f)
    turns = []
    for i in np.nonzero(ok[:-1] & ok[1:] & (np.sign(f[:-1]) * np.sign(f[1:]) < 0))[0]:
        turns.append(brentq(lambda v: state.etilde - float(state.eq.u_eff(np.array(v))),
                            fine[i], fine[i + 1], xtol=1e-14))
    for tp in turns[: points // 2]:
        x[np.argmin(np.abs(x - tp))] = tp
    return np.sort(x)


def ode_residual(state: RadialState, points: int = 50) -> float:
    """
    Max relative residual of Z'' + (Etilde - U_eff) Z over ``points``
    interior points (see :func:`residual_points`).

    The pointwise scale is max(|Z''|, |Etilde - U_eff| |Z|), floored at
    1e-5 of its largest value on the sample set so that a sample landing on
    a node or a turning point does not turn into 0/0.
    """
    x = residual_points(state, points)
    z2, rest = state.residual_terms(x)
    scale = np.maximum(np.abs(z2), np.abs(rest))
    scale = np.maximum(scale, RESIDUAL_FLOOR * float(np.max(scale)))
    return float(np.max(np.abs(z2 + rest) / scale))


def rosen_morse_reference(s: float, B: float) -> list[float]:
    """
    Bound values of the Rosen-Morse spectral parameter.

    kappa_m = -(s-m)^2 - B^2/(s-m)^2 for integers m >= 0 with s - m > 0 and
    (s-m)^2 > B (strict, so a marginal level is excluded).
    """
    if not (s > 0 and B > 0):
        raise ValueError("need s > 0 and B > 0")
    out = []
    m = 0
    while s - m > 0:
        d = s - m
        if d * d > B:
            out.append(-d * d - B * B / (d * d))
        m += 1
    return out


def _fit_exponent(radii, errors) -> float:
    lr = np.log(np.asarray(radii, dtype=float))
    le = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(lr, le, 1)[0])


def contraction_suite(n: int, omega: float, N: int, L: int, radii, samples: int = 400) -> ConvergenceReport:
    """
    Compare the sphere oscillator with its flat limit as R grows.

    Energy errors |E_N(R) - omega (N + n/2)| and wavefunction sup errors
    |R^{(n-1)/2} Z(r/R) - Z_flat(r)| over r in (0, 4/sqrt(omega)].
    """
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    if (N - L) % 2:
        raise ValueError("N - L must be even")
    flat = flat_oscillator_reference(n, omega, N, L)
    r = (4.0 / math.sqrt(omega)) * np.arange(1, samples + 1) / samples
    e_ref = omega * (N + n / 2.0)
    e_err, w_err = [], []
    for R in radii:
        spec = ProblemSpec(SpaceKind.SPHERE, n, R, Oscillator(omega))
        q = QuantumNumbers.from_principal(N, L, "oscillator")
        e_err.append(abs(spectra.oscillator_energy(spec, q).energy - e_ref))
        st = oscillator_state(spec, q.n_r, L)
        w_err.append(float(np.max(np.abs(R ** ((n - 1) / 2.0) * st(r / R) - flat(r)))))
    return ConvergenceReport(
        radii, e_err, _fit_exponent(radii, e_err),
        f"flat oscillator n={n} omega={omega!r} N={N} L={L}",
        w_err, _fit_exponent(radii, w_err),
    )

