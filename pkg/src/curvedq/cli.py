"""
Command-line front end.

    curvedq spectrum --space sphere --potential coulomb --dim 3 --radius 1 --alpha 1 --levels 3
    curvedq wavefn --space h2 --potential coulomb --dim 3 --alpha 2 --N 0 --L 0 --grid 50
    curvedq verify all

Exit codes: 0 success / all checks pass, 1 a check failed or the requested
state is not bound, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import spectra, wavefn
from .model import Coulomb, Oscillator, ProblemSpec, QuantumNumbers, SpaceKind
from .suites import SUITES, CaseFilter, VerificationReport, suite_tasks

__all__ = ["main", "build_parser", "VerificationReport", "dumps"]


def fmt(x) -> str:
    """17 significant digits; lossless for doubles."""
    return "%.17g" % x


def dumps(obj) -> str:
    """Compact JSON with keys sorted and floats written with 17 digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(obj[k])}" for k in sorted(obj)) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return fmt(x)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


# ----------------------------------------------------------------------------
# argument handling


class UsageError(Exception):
    pass


def _read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {raw.rstrip()!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--space", choices=[s.value for s in SpaceKind], required=False)
    p.add_argument("--potential", choices=["coulomb", "oscillator"])
    p.add_argument("--dim", type=int)
    p.add_argument("--radius", type=float)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float)
    g.add_argument("--omega", type=float)
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--config", help="key=value file of defaults; flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvedq", description=__doc__.split("\n\n")[0].strip())
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="table of closed-form levels")
    _common(sp)
    sp.add_argument("--levels", type=int, default=5, help="number of n_r values from 0")
    sp.add_argument("--L", type=int, default=0)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    wp = sub.add_parser("wavefn", help="sample a normalized quasiradial function")
    _common(wp)
    wp.add_argument("--nr", type=int)
    wp.add_argument("--N", type=int)
    wp.add_argument("--L", type=int, default=0)
    wp.add_argument("--grid", type=int, default=200)
    wp.add_argument("--format", choices=["csv", "json"], default="csv")

    vp = sub.add_parser("verify", help="run verification suites (JSON lines)")
    vp.add_argument("suite", choices=list(SUITES) + ["all"])
    _common(vp)
    vp.add_argument("--tol", type=float, help="override every suite tolerance")
    vp.add_argument("--seed", type=int, default=0)
    return ap


_FLOAT_KEYS = {"radius", "alpha", "omega", "tol"}
_INT_KEYS = {"dim", "levels", "L", "nr", "N", "grid", "seed"}


def _parse(argv) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        try:
            cfg = _read_config(args.config)
        except OSError as exc:
            ap.error(f"cannot read config: {exc}")
        except UsageError as exc:
            ap.error(str(exc))
        given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
        for k, v in cfg.items():
            if not hasattr(args, k):
                ap.error(f"unknown config key {k!r}")
            if k in given:
                continue
            try:
                v = float(v) if k in _FLOAT_KEYS else int(v) if k in _INT_KEYS else v
            except ValueError:
                ap.error(f"bad value for config key {k!r}: {v!r}")
            setattr(args, k, v)
    return args


def _spec_from_args(args, ap_error) -> ProblemSpec:
    if args.space is None or args.potential is None:
        ap_error("--space and --potential are required")
    n = args.dim if args.dim is not None else 3
    R = args.radius if args.radius is not None else 1.0
    if args.potential == "coulomb":
        if args.omega is not None:
            ap_error("--omega given for a Coulomb system")
        inter = Coulomb(args.alpha if args.alpha is not None else 1.0)
    else:
        if args.alpha is not None:
            ap_error("--alpha given for an oscillator")
        inter = Oscillator(args.omega if args.omega is not None else 1.0)
    try:
        return ProblemSpec(SpaceKind(args.space), n, R, inter)
    except ValueError as exc:
        ap_error(str(exc))


def _usage(msg):
    raise UsageError(msg)


def _open_out(args):
    if args.out:
        return open(args.out, "w", encoding="utf-8", newline="\n")
    return sys.stdout


# ----------------------------------------------------------------------------
# commands


def cmd_spectrum(args) -> int:
    spec = _spec_from_args(args, _usage)
    if args.levels < 0:
        _usage("--levels must be nonnegative")
    kind = spec.interaction.kind
    rows, skipped = [], []
    for n_r in range(args.levels):
        q = QuantumNumbers(n_r, args.L, kind)
        try:
            e = spectra.energy(spec, q)
        except (spectra.UnboundStateError, ValueError):
            skipped.append(n_r)
            continue
        par = e.sigma if spec.is_coulomb else e.nu
        rows.append((q.n_r, q.L, q.N, e.energy, e.etilde, par, e.is_bound))
    if skipped:
        print(f"warning: skipped unbound states n_r={skipped} at L={args.L} ({spec.to_text()})",
              file=sys.stderr)
    pname = "sigma" if spec.is_coulomb else "nu"
    cols = ["n_r", "L", "N", "E", "Etilde", pname, "bound"]
    fh = _open_out(args)
    try:
        if args.format == "json":
            fh.write(dumps({"spec": spec.to_text(), "columns": cols,
                            "rows": [list(r) for r in rows]}) + "\n")
        else:
            fh.write(",".join(cols) + "\n")
            for r in rows:
                fh.write(f"{r[0]},{r[1]},{r[2]},{fmt(r[3])},{fmt(r[4])},{fmt(r[5])},{str(r[6]).lower()}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def _sample_points(st: wavefn.RadialState, m: int) -> np.ndarray:
    lo, hi = st.domain
    if st.parity is not None or not (math.isfinite(lo) and math.isfinite(hi)):
        slo, shi = st.support(1e-12)
        lo = lo if math.isfinite(lo) else slo
        hi = hi if math.isfinite(hi) else shi
        if st.parity is not None:
            lo = -hi
    # open interior: endpoints never sampled
    return lo + (hi - lo) * np.arange(1, m + 1) / (m + 1)


def cmd_wavefn(args) -> int:
    spec = _spec_from_args(args, _usage)
    if args.grid < 1:
        _usage("--grid must be positive")
    if (args.nr is None) == (args.N is None):
        _usage("give exactly one of --nr and --N")
    L = args.L
    try:
        if args.nr is not None:
            st = wavefn.state(spec, args.nr, L)
        else:
            q = QuantumNumbers.from_principal(args.N, L, spec.interaction.kind)
            st = wavefn.state(spec, q.n_r, L)
    except spectra.UnboundStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        _usage(str(exc))
    x = _sample_points(st, args.grid)
    z, z1, z2 = st.derivatives(x)
    norm = wavefn.overlap(st, st)
    meta = {"spec": spec.to_text(), "n_r": st.quantum.n_r, "L": L, "N": st.quantum.N,
            "energy": st.energy, "norm_check": norm}
    fh = _open_out(args)
    try:
        if args.format == "json":
            meta.update(x=x, Z=z, dZ=z1, d2Z=z2)
            fh.write(dumps({k: (v.tolist() if isinstance(v, np.ndarray) else v)
                            for k, v in meta.items()}) + "\n")
        else:
            for k in ("spec", "n_r", "L", "N", "energy", "norm_check"):
                v = meta[k]
                fh.write(f"# {k}: {fmt(v) if isinstance(v, float) else v}\n")
            fh.write("x,Z,dZ,d2Z\n")
            for row in zip(x, z, z1, z2):
                fh.write(",".join(fmt(v) for v in row) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def _threads() -> int:
    raw = os.environ.get("CURVEDQ_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            _usage(f"CURVEDQ_THREADS must be an integer, got {raw!r}")
    return min(8, os.cpu_count() or 1)


def run_suite(name: str, filt: CaseFilter | None = None, seed: int = 0,
              tol: float | None = None, threads: int = 1) -> list[VerificationReport]:
    """Run a suite and return its reports in canonical order."""
    tasks = suite_tasks(name, filt, seed, tol)
    if threads <= 1:
        results = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda t: t(), tasks))
    reports = [r for batch in results for r in batch]
    return sorted(reports, key=lambda r: r.sort_key())


def cmd_verify(args) -> int:
    dims = (args.dim,) if args.dim is not None else None
    radii = (args.radius,) if args.radius is not None else None
    filt = CaseFilter(args.space, args.potential, dims, radii)
    reports = run_suite(args.suite, filt, args.seed, args.tol, _threads())
    fh = _open_out(args)
    try:
        for r in reports:
            fh.write(dumps(r.as_dict()) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0 if all(r.passed for r in reports) else 1


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _parse(argv)
    handler = {"spectrum": cmd_spectrum, "wavefn": cmd_wavefn, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"curvedq {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
