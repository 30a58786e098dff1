"""
Verification suites behind ``curvedq verify``.

Every suite is a list of independent tasks; a task returns a list of
:class:`VerificationReport`. Tasks only read immutable inputs, so the CLI may
run them on a thread pool and sort the reports afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import duality, oracle, spectra, wavefn
from .cases import DeskCase, desk_cases, system_label
from .model import Coulomb, Oscillator, ProblemSpec, QuantumNumbers, SpaceKind, reduce_to_quasiradial

__all__ = ["VerificationReport", "SUITES", "DEFAULT_TOL", "suite_tasks", "CaseFilter"]

DEFAULT_TOL = {
    "ode": 1e-9,
    "negative": 1.0,
    "norm": 1e-8,
    "ortho": 1e-8,
    "duality.identity": 1e-12,
    "duality.conjugation": 1e-8,
    "duality.spectrum": 1e-12,
    "contraction.exponent": 0.1,
    "contraction.sup": 1e-3,
    "oracle": 1e-6,
    "oracle.rosen_morse": 1e-12,
    "bounds": 0.0,
}

SUITES = ("ode", "norm", "ortho", "duality", "contraction", "oracle", "bounds")

STATE_CAP = 10
ORACLE_LEVELS = 4
NEGATIVE_SHIFT = 1e-3
NEGATIVE_THRESHOLD = 1e-4


@dataclass
class VerificationReport:
    check_name: str
    parameters: dict
    max_error: float
    tolerance: float
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def as_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "parameters": self.parameters,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "details": self.details,
        }

    def sort_key(self):
        return (self.check_name, sorted((k, repr(v)) for k, v in self.parameters.items()))


@dataclass(frozen=True)
class CaseFilter:
    """Restricts the desk cases; None means no restriction."""

    space: str | None = None
    potential: str | None = None
    dims: tuple[int, ...] | None = None
    radii: tuple[float, ...] | None = None

    def cases(self) -> list[DeskCase]:
        kw = {}
        if self.dims:
            kw["dims"] = self.dims
        if self.radii:
            kw["radii"] = self.radii
        out = []
        for c in desk_cases(**kw):
            if self.space and c.spec.space.value != self.space:
                continue
            if self.potential and c.spec.interaction.kind != self.potential:
                continue
            out.append(c)
        return out


def _params(spec: ProblemSpec, **extra) -> dict:
    p = {
        "system": system_label(spec),
        "n": spec.n,
        "R": spec.R,
        "coupling": spec.interaction.coupling,
    }
    p.update(extra)
    return p


def _states(spec: ProblemSpec, L: int) -> list[wavefn.RadialState]:
    return [wavefn.state(spec, e.quantum.n_r, L)
            for e in spectra.enumerate_bound_states(spec, L, STATE_CAP)]


# ----------------------------------------------------------------------------
# per-state suites


def _ode_task(case: DeskCase, tol: dict) -> list[VerificationReport]:
    out = []
    for L in case.Ls:
        res, neg = [], []
        for st in _states(case.spec, L):
            res.append({"n_r": st.quantum.n_r, "residual": oracle.ode_residual(st)})
            bad = oracle.ode_residual(st.with_energy(st.energy + NEGATIVE_SHIFT))
            neg.append({"n_r": st.quantum.n_r, "perturbed_residual": bad})
        if not res:
            continue
        p = _params(case.spec, L=L, points=50, floor=oracle.RESIDUAL_FLOOR)
        out.append(VerificationReport("ode.residual", p, max(d["residual"] for d in res),
                                      tol["ode"], res))
        # metric: threshold / perturbed residual, so a pass is <= 1
        worst = max(NEGATIVE_THRESHOLD / d["perturbed_residual"] for d in neg)
        p = dict(p, shift=NEGATIVE_SHIFT, threshold=NEGATIVE_THRESHOLD,
                 metric="threshold_over_perturbed_residual")
        out.append(VerificationReport("ode.negative_control", p, worst, tol["negative"], neg))
    return out


def _norm_task(case: DeskCase, tol: dict) -> list[VerificationReport]:
    out = []
    for L in case.Ls:
        det = [{"n_r": s.quantum.n_r, "norm": wavefn.overlap(s, s)} for s in _states(case.spec, L)]
        if det:
            out.append(VerificationReport("norm", _params(case.spec, L=L, cap=STATE_CAP),
                                          max(abs(d["norm"] - 1.0) for d in det), tol["norm"], det))
    return out


def _ortho_task(case: DeskCase, tol: dict) -> list[VerificationReport]:
    out = []
    for L in case.Ls:
        sts = _states(case.spec, L)
        det = [{"n_r": (a.quantum.n_r, b.quantum.n_r), "overlap": wavefn.overlap(a, b)}
               for i, a in enumerate(sts) for b in sts[:i]]
        if det:
            out.append(VerificationReport("ortho", _params(case.spec, L=L, cap=STATE_CAP),
                                          max(abs(d["overlap"]) for d in det), tol["ortho"], det))
    return out


def _anchor_task(tol: dict) -> list[VerificationReport]:
    sph = wavefn.coulomb_state(ProblemSpec(SpaceKind.SPHERE, 3, 1.0, Coulomb(1.0)), 0, 0)
    h2 = wavefn.coulomb_state(ProblemSpec(SpaceKind.TWO_SHEETED, 3, 1.0, Coulomb(2.0)), 0, 0)
    return [
        VerificationReport("norm.anchor", {"system": "sphere-coulomb", "n": 3, "sigma": 1.0, "target": 2.8311},
                           abs(sph.norm_constant - 2.8311), 1e-3, [{"constant": sph.norm_constant}]),
        VerificationReport("norm.anchor", {"system": "h2-coulomb", "n": 3, "sigma": 2.0, "target": 24.0},
                           abs(h2.norm_constant**2 - 24.0), 1e-6, [{"constant_squared": h2.norm_constant**2}]),
    ]


# ----------------------------------------------------------------------------
# duality


def _coulomb_cases(filt: CaseFilter) -> list[DeskCase]:
    return [c for c in filt.cases() if c.spec.is_coulomb]


def _identity_task(tol: dict, seed: int) -> list[VerificationReport]:
    out = []
    for sub in duality.Substitution:
        dmap = duality.build_dual_map(sub.source_space, 3, 1, 1.5, 1.0, sub)
        out.append(VerificationReport(
            "duality.identity", {"substitution": sub.value, "samples": 100, "n": 3, "L": 1, "alpha": 1.5},
            duality.verify_potential_identity(dmap, 100), tol["duality.identity"]))
    for sub in duality.Substitution:
        if sub is duality.Substitution.SPHERE_TRIG:
            continue
        for n in (2, 3, 5):
            det = []
            for deg in range(2, 7):
                dmap = duality.build_dual_map(sub.source_space, n, 1, 1.5, 1.0, sub)
                det.append({"degree": deg, "residual": duality.verify_operator_conjugation(
                    dmap, deg, 50, seed=seed + deg)})
            out.append(VerificationReport(
                "duality.conjugation",
                {"substitution": sub.value, "n": n, "L": 1, "alpha": 1.5, "samples": 50,
                 "step": duality.FD_STEP, "seed": seed},
                max(d["residual"] for d in det), tol["duality.conjugation"], det))
    return out


def _spectrum_task(case: DeskCase, tol: dict) -> list[VerificationReport]:
    spec = case.spec
    alpha, R, n = spec.interaction.alpha, spec.R, spec.n
    out = []
    for L in case.Ls:
        det = []
        for e in spectra.enumerate_bound_states(spec, L, STATE_CAP):
            N = e.quantum.N
            got = duality.spectrum_via_duality(spec.space, n, L, alpha, R, N)
            d = {"N": N, "formula": e.energy, "duality": got,
                 "error": abs(got - e.energy) / max(1.0, abs(e.energy))}
            if spec.space is SpaceKind.TWO_SHEETED:
                alt = duality.spectrum_via_duality(spec.space, n, L, alpha, R, N,
                                                   duality.Substitution.TWO_SHEETED_TRIG)
                d["trig_route"] = alt
                d["error"] = max(d["error"], abs(alt - got) / max(1.0, abs(got)))
            det.append(d)
        if det:
            out.append(VerificationReport("duality.spectrum", _params(spec, L=L),
                                          max(d["error"] for d in det), tol["duality.spectrum"], det))
    return out


def _compat_task(n: int, alpha: float, L: int) -> list[VerificationReport]:
    spec = ProblemSpec(SpaceKind.ONE_SHEETED, n, 1.0, Coulomb(alpha))
    det = []
    for e in spectra.enumerate_bound_states(spec, L, STATE_CAP):
        det.append(duality.compatibility_report(spec, e.quantum.n_r, L))
    worst = max((d["shape_mismatch"] for d in det), default=0.0)
    return [VerificationReport("duality.compatibility",
                               {"system": "h1-coulomb", "n": n, "alpha": alpha, "R": 1.0, "L": L,
                                "informational": True},
                               worst if math.isfinite(worst) else 0.0, math.inf, det)]


# ----------------------------------------------------------------------------
# oracle, contraction, bounds


def _oracle_task(case: DeskCase, tol: dict) -> list[VerificationReport]:
    spec = case.spec
    out = []
    for L in case.Ls:
        ents = spectra.enumerate_bound_states(spec, L, ORACLE_LEVELS)
        if not ents:
            continue
        cfg = oracle.ShootingConfig()
        got = oracle.numerov_eigenvalues(reduce_to_quasiradial(spec, L), cfg, len(ents))
        det = []
        for i, e in enumerate(ents):
            num = got[i] if i < len(got) else math.nan
            err = abs(num - e.energy) / max(1.0, abs(e.energy))
            det.append({"n_r": e.quantum.n_r, "formula": e.energy, "numerov": num,
                        "error": err if math.isfinite(err) else math.inf})
        out.append(VerificationReport(
            "oracle.numerov", _params(spec, L=L, grid_points=cfg.grid_points, endpoint_t=cfg.endpoint_t),
            max(d["error"] for d in det), tol["oracle"], det))
    return out


def _free_task(tol: dict) -> list[VerificationReport]:
    # Laplacian on S^3: Etilde = (N+1)^2, computed without any potential
    from .model import free_quasiradial

    eq = free_quasiradial(SpaceKind.SPHERE, 3, 1.0, 0)
    got = oracle.numerov_eigenvalues_etilde(eq, count=4)
    det = [{"N": k, "numerov": g, "exact": float((k + 1) ** 2)} for k, g in enumerate(got)]
    err = max(abs(d["numerov"] - d["exact"]) / d["exact"] for d in det)
    return [VerificationReport("oracle.free_sphere", {"n": 3, "R": 1.0, "L": 0}, err, tol["oracle"], det)]


def _rosen_morse_task(case: DeskCase, tol: dict) -> list[VerificationReport]:
    spec = case.spec
    alpha, R, n = spec.interaction.alpha, spec.R, spec.n
    out = []
    for L in case.Ls:
        s = L + (n - 3) / 2.0
        kappas = oracle.rosen_morse_reference(s, alpha * R) if s > 0 else []
        ents = spectra.enumerate_bound_states(spec, L, 10_000)
        det = []
        for m, kap in enumerate(kappas):
            et = ents[m].etilde if m < len(ents) else math.nan
            det.append({"m": m, "kappa": kap, "etilde": et,
                        "error": abs(kap - 2 * alpha * R - et) / max(1.0, abs(et))})
        mismatch = abs(len(kappas) - len(ents))
        err = max([d["error"] for d in det] + [math.inf if mismatch else 0.0])
        out.append(VerificationReport("oracle.rosen_morse", _params(spec, L=L, s=s, B=alpha * R),
                                      err, tol["oracle.rosen_morse"], det))
    return out


CONTRACTION_RADII = (10.0, 20.0, 40.0, 80.0)


def _contraction_task(n: int, N: int, tol: dict) -> list[VerificationReport]:
    rep = oracle.contraction_suite(n, 1.0, N, 0, CONTRACTION_RADII)
    p = {"n": n, "N": N, "L": 0, "omega": 1.0, "radii": list(CONTRACTION_RADII)}
    det = [{"R": r, "energy_error": e, "sup_error": w}
           for r, e, w in zip(rep.radii, rep.errors, rep.wave_errors)]
    return [
        VerificationReport("contraction.energy_exponent", p, abs(rep.fitted_exponent + 2.0),
                           tol["contraction.exponent"], [{"fitted": rep.fitted_exponent}]),
        VerificationReport("contraction.wave_exponent", p, abs(rep.wave_exponent + 2.0),
                           tol["contraction.exponent"], [{"fitted": rep.wave_exponent}]),
        VerificationReport("contraction.sup_error", dict(p, at_R=CONTRACTION_RADII[-1]),
                           rep.wave_errors[-1], tol["contraction.sup"], det),
    ]


BOUND_DRAWS = 10
MARGIN_GUARD = 0.05


def random_bound_draw(rng: np.random.Generator, space: SpaceKind, kind: str):
    """
    One random (spec, L) for the counting check, redrawn until every bound
    margin is at least MARGIN_GUARD away from zero (a marginal level sits
    exactly at the threshold, where a node count is ill-conditioned).
    """
    while True:
        n = int(rng.integers(2, 6))
        R = float(rng.uniform(0.5, 2.0))
        if space is SpaceKind.TWO_SHEETED:
            L = int(rng.integers(0, 4))
            if kind == "oscillator":
                inter = Oscillator(float(rng.uniform(1.0, 15.0)) / R**2)
            else:
                inter = Coulomb(float(rng.uniform(1.0, 30.0)) / R)
        else:
            if kind == "oscillator":
                L = int(rng.integers(3, 11))
                inter = Oscillator(float(rng.uniform(0.1, 6.0)) / R**2)
            else:
                L = int(rng.integers(1, 7))
                inter = Coulomb(float(rng.uniform(0.2, 10.0)) / R)
        spec = ProblemSpec(space, n, R, inter)
        margins = []
        for n_r in range(200):
            m = spectra.bound_margin(spec, QuantumNumbers(n_r, L, kind))
            margins.append(m)
            if m <= 0:
                break
        if min(abs(m) for m in margins) >= MARGIN_GUARD:
            return spec, L


def _bounds_task(space: SpaceKind, kind: str, seed: int, tol: dict) -> list[VerificationReport]:
    rng = np.random.default_rng([seed, 0 if space is SpaceKind.TWO_SHEETED else 1,
                                 0 if kind == "oscillator" else 1])
    det = []
    for _ in range(BOUND_DRAWS):
        spec, L = random_bound_draw(rng, space, kind)
        want = spectra.bound_state_count(spec, L)
        got = oracle.numerov_count_below(reduce_to_quasiradial(spec, L))
        det.append({"spec": spec.to_text(), "L": L, "closed_form": want, "numerov": got})
    err = float(sum(d["closed_form"] != d["numerov"] for d in det))
    return [VerificationReport("bounds.count",
                               {"system": f"{space.value}-{kind}", "draws": BOUND_DRAWS, "seed": seed,
                                "x_max": 200.0, "margin_guard": MARGIN_GUARD},
                               err, tol["bounds"], det)]


# ----------------------------------------------------------------------------


def suite_tasks(name: str, filt: CaseFilter | None = None, seed: int = 0,
                tol_override: float | None = None) -> list[Callable[[], list[VerificationReport]]]:
    """Independent callables making up suite ``name`` ('all' for every suite)."""
    filt = filt or CaseFilter()
    tol = {k: (tol_override if tol_override is not None and k != "negative" else v)
           for k, v in DEFAULT_TOL.items()}
    if name == "all":
        return [t for s in SUITES for t in suite_tasks(s, filt, seed, tol_override)]
    cases = filt.cases()
    if name == "ode":
        return [lambda c=c: _ode_task(c, tol) for c in cases]
    if name == "norm":
        return [lambda c=c: _norm_task(c, tol) for c in cases] + [lambda: _anchor_task(tol)]
    if name == "ortho":
        return [lambda c=c: _ortho_task(c, tol) for c in cases]
    if name == "duality":
        tasks = [lambda: _identity_task(tol, seed)]
        tasks += [lambda c=c: _spectrum_task(c, tol) for c in _coulomb_cases(filt)]
        tasks += [lambda n=n: _compat_task(n, 2.0, 4) for n in (2, 3, 5)]
        return tasks
    if name == "contraction":
        return [lambda n=n, N=N: _contraction_task(n, N, tol) for n in (2, 3) for N in (0, 2)]
    if name == "oracle":
        tasks = [lambda c=c: _oracle_task(c, tol) for c in cases]
        tasks += [lambda c=c: _rosen_morse_task(c, tol)
                  for c in cases if c.spec.space is SpaceKind.ONE_SHEETED and c.spec.is_coulomb]
        tasks.append(lambda: _free_task(tol))
        return tasks
    if name == "bounds":
        return [lambda sp=sp, k=k: _bounds_task(sp, k, seed, tol)
                for sp in (SpaceKind.TWO_SHEETED, SpaceKind.ONE_SHEETED)
                for k in ("oscillator", "coulomb")]
    raise KeyError(f"unknown suite {name!r}")
