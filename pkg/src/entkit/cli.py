"""Command-line front end: ``entkit <verb> [flags]``.

Verbs: ``compute``, ``probe``, ``scan-monogamy``, ``scan-polygon`` and
``reproduce``. JSON output is one record per line; CSV output has a header
row and 12 significant digits. Exit status is 0 on success and 2 on
invalid input. ``ENTKIT_LOG`` sets the log level (default ``WARNING``).
"""

from __future__ import annotations

import argparse
import csv
import io
import importlib.resources
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__
from .bipartite import evaluate, isotropic_eof, parse_measure, werner_eof
from .convex_roof import OptimizerOptions, roof_minimize
from .monogamy import (
    LINEAR_THETA,
    POWER_THETA,
    monogamy_exponent_estimate,
    polygon_check,
    scan_monogamy,
    tight_relation_check,
)
from .multipartite import FAMILIES as MULTI_FAMILIES
from .multipartite import evaluate_multi, mixed_via_roof, parse_multi
from .partitions import Partition
from .reduced_fn import concavity_probe, parse_kind, schur_concavity_probe, subadditivity_probe
from .states import load_state, random_pure, state_to_json

log = logging.getLogger("entkit")

_SCHEDULES = {"linear": LINEAR_THETA, "power": POWER_THETA}
_TARGETS = ("isotropic-eof", "werner-eof", "fixtures")


_SCHEMA_FILES = {
    "compute": "compute.json",
    "probe": "probe.json",
    "scan-monogamy": "scan_monogamy.json",
    "scan-polygon": "scan_polygon.json",
    "reproduce": "reproduce.json",
}


def record_schema(verb: str) -> dict:
    """JSON schema of the records emitted by ``verb``."""
    if verb not in _SCHEMA_FILES:
        raise ValueError(f"no schema for verb {verb!r}")
    text = importlib.resources.files("entkit").joinpath("schemas", _SCHEMA_FILES[verb]).read_text(encoding="utf-8")
    return json.loads(text)


class UsageError(ValueError):
    """Invalid user input; reported with exit status 2."""


# ---------------------------------------------------------------------------
# formatting


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (dict, list)):
        return json.dumps(_clean(v), sort_keys=True)
    return str(v)


def _emit(records: Iterable[dict], fmt: str, out) -> None:
    records = [_clean(r) for r in records]
    if fmt == "json":
        for r in records:
            out.write(json.dumps(r, sort_keys=True) + "\n")
        return
    cols: list[str] = []
    for r in records:
        cols.extend(k for k in r if k not in cols)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in records:
        writer.writerow([_fmt(r.get(c)) for c in cols])
    out.write(buf.getvalue())


# ---------------------------------------------------------------------------
# argument helpers


def _dims(text: str | None, default: str = "2,2,2") -> tuple[int, ...]:
    text = text or default
    try:
        dims = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"invalid --system {text!r}: expected comma-separated dimensions") from None
    if not dims or any(d < 2 for d in dims):
        raise UsageError(f"invalid --system {text!r}: dimensions must be at least 2")
    return dims


def _state(text: str | None):
    if not text:
        raise UsageError("--state is required")
    try:
        return load_state(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid --state {text!r}: {exc}") from None


def _side(text: str | None, n: int) -> list[int]:
    if not text:
        return [0]
    try:
        p = Partition.parse(text)
    except ValueError as exc:
        raise UsageError(f"invalid --partition {text!r}: {exc}") from None
    if p.k != 2 or p.ground != frozenset(range(n)):
        raise UsageError(f"invalid --partition {text!r}: need a bipartition of all {n} parties")
    return list(p.blocks[0])


def _measure_tag(text: str) -> str:
    return text.partition(":")[0].strip()


def _check_measure(text: str | None) -> str:
    if not text:
        raise UsageError("--measure is required")
    tag = _measure_tag(text)
    try:
        if tag in MULTI_FAMILIES:
            parse_multi(text)
        else:
            parse_measure(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid --measure {text!r}: unknown or malformed token {tag!r} ({exc})") from None
    return text


# ---------------------------------------------------------------------------
# verbs


def _compute(args) -> list[dict]:
    text = _check_measure(args.measure)
    s = _state(args.state)
    base = {"verb": "compute", "measure": text, "state": args.state}
    tag = _measure_tag(text)
    opts = OptimizerOptions(restarts=args.restarts, seed=args.seed)
    if tag in MULTI_FAMILIES:
        if s.is_pure:
            return [{**base, "value": evaluate_multi(text, s), "method": "exact"}]
        res = mixed_via_roof(lambda t: evaluate_multi(text, t), s, opts)
        return [{**base, "value": res.value, "method": "optimized", "bound": res.bound}]
    side = _side(args.partition, s.n)
    spec = parse_measure(text)
    try:
        res = evaluate(spec, s, side)
        return [{**base, "value": res.value, "method": res.method, "metadata": res.metadata}]
    except ValueError:
        if s.is_pure or spec.family not in ("reduced_fn", "geometric"):
            raise
    roof = roof_minimize(spec, s, opts, side)
    return [{**base, "value": roof.value, "method": "optimized", "bound": roof.bound}]


def _probe(args) -> list[dict]:
    if not args.fn:
        raise UsageError("--fn is required")
    try:
        kind = parse_kind(args.fn)
    except ValueError as exc:
        raise UsageError(f"invalid --fn {args.fn!r}: {exc}") from None
    mode = args.mode or "concavity"
    if mode == "subadditivity":
        dims = _dims(args.system, "2,2")
        if len(dims) != 2:
            raise UsageError(f"invalid --system {args.system!r}: subadditivity needs two parties")
        rep = subadditivity_probe(kind, dims, args.trials, args.seed)
    elif mode in ("concavity", "schur"):
        dim = args.dim
        fn = concavity_probe if mode == "concavity" else schur_concavity_probe
        rep = fn(kind, dim, args.trials, args.seed)
    else:
        raise UsageError(f"invalid --mode {mode!r}: expected concavity, subadditivity or schur")
    body = rep.to_json()
    record = {"verb": "probe", "fn": args.fn, "mode": mode, "seed": args.seed, **body}
    if args.witness_dir:
        folder = Path(args.witness_dir)
        folder.mkdir(parents=True, exist_ok=True)
        files = []
        for group in ("violations", "reverse_violations", "equality_witnesses"):
            for i, wit in enumerate(body[group]):
                path = folder / f"{mode}_{group}_{i}.json"
                path.write_text(json.dumps(_clean(wit), sort_keys=True) + "\n")
                files.append(str(path))
            record[group] = len(body[group])
        record["witness_files"] = files
    return [record]


def _scan_monogamy(args) -> list[dict]:
    text = _check_measure(args.measure)
    dims = _dims(args.system)
    if args.schedule:
        if args.schedule not in _SCHEDULES:
            raise UsageError(f"invalid --schedule {args.schedule!r}: expected one of {sorted(_SCHEDULES)}")
        sched = _SCHEDULES[args.schedule]
        if args.gamma is not None:
            sched = sched.with_gamma(args.gamma)
        seqs = np.random.SeedSequence(args.seed).spawn(args.samples)
        states = [random_pure(dims, np.random.default_rng(ss)) for ss in seqs]
        rep = tight_relation_check(sched, text, states, args.focus, args.tol)
        body = rep.to_json()
        body.pop("residuals")
        body.pop("right_sides")
        return [{"verb": "scan-monogamy", "measure": text, "samples": args.samples, **body}]
    if args.alpha is None:
        rep = monogamy_exponent_estimate(text, dims=dims, samples=args.samples, seed=args.seed, focus=args.focus)
    else:
        rep = scan_monogamy(text, args.alpha, dims, args.samples, args.seed, args.focus, args.tol, args.workers)
    return [{"verb": "scan-monogamy", **rep.to_json()}]


def _scan_polygon(args) -> list[dict]:
    text = _check_measure(args.measure or "concurrence")
    dims = _dims(args.system)
    power = 1.0 if args.alpha is None else args.alpha
    seqs = np.random.SeedSequence(args.seed).spawn(args.samples)
    worst, worst_state, failures = math.inf, None, 0
    for ss in seqs:
        s = random_pure(dims, np.random.default_rng(ss))
        rep = polygon_check(text, s, power, args.tol)
        if rep.min_slack < worst:
            worst, worst_state = rep.min_slack, s
        failures += not rep.holds
    record = {
        "verb": "scan-polygon",
        "measure": text,
        "power": power,
        "samples": args.samples,
        "min_slack": worst,
        "violations": failures,
        "verdict": "violated" if failures else "holds",
    }
    if failures:
        record["worst_state"] = state_to_json(worst_state)
    return [record]


def _isotropic_rows(m: int, points: int) -> list[dict]:
    knots = (1.0 / m, 4.0 * (m - 1) / m**2)
    grid = [i / (points - 1) for i in range(points)] if points > 1 else [0.0]
    ts = sorted(set(grid) | {k for k in knots if 0.0 <= k <= 1.0})
    rows = []
    for t in ts:
        branch = 0 if t <= knots[0] else (1 if (t < knots[1] or m == 2) else 2)
        rows.append({"t": t, "E_f": isotropic_eof(t, m), "m": m, "branch": branch, "knot": t in knots})
    return rows


def _fixture_rows() -> list[dict]:
    from .multipartite import fill_measures, geometric_measure, gmc, meyer_wallach, three_tangle
    from .states import ghz, w

    return [
        {"name": "three_tangle(GHZ3)", "value": three_tangle(ghz(3))},
        {"name": "three_tangle(W3)", "value": three_tangle(w(3))},
        {"name": "gmc(GHZ3)", "value": gmc(ghz(3))},
        {"name": "gmc(W3)", "value": gmc(w(3))},
        {"name": "geometric_measure(W3)", "value": geometric_measure(w(3))},
        {"name": "geometric_measure(GHZ3)", "value": geometric_measure(ghz(3))},
        {"name": "fill(GHZ3)", "value": fill_measures(ghz(3))["F"]},
        {"name": "fill(W3)", "value": fill_measures(w(3))["F"]},
        {"name": "meyer_wallach(GHZ3)", "value": meyer_wallach(ghz(3))},
        {"name": "meyer_wallach(W3)", "value": meyer_wallach(w(3))},
    ]


def _reproduce(args) -> list[dict]:
    if args.target not in _TARGETS:
        raise UsageError(f"invalid --target {args.target!r}: expected one of {', '.join(_TARGETS)}")
    if args.points < 1:
        raise UsageError("--points must be positive")
    if args.target == "isotropic-eof":
        if args.m < 2:
            raise UsageError("--m must be at least 2")
        return _isotropic_rows(args.m, args.points)
    if args.target == "werner-eof":
        xs = [i / (args.points - 1) for i in range(args.points)] if args.points > 1 else [0.0]
        return [{"x": x, "E_f": werner_eof(x), "knot": x == 0.5} for x in xs]
    return _fixture_rows()


_VERBS = {
    "compute": _compute,
    "probe": _probe,
    "scan-monogamy": _scan_monogamy,
    "scan-polygon": _scan_polygon,
    "reproduce": _reproduce,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="entkit", description="Entanglement measures, convex roofs and monogamy scans.")
    p.add_argument("--version", action="version", version=f"entkit {__version__}")
    p.add_argument("verb", choices=sorted(_VERBS))
    p.add_argument("--measure", help='measure spec "family[:param=value,...]"')
    p.add_argument("--state", help="named:<family>?k=v URI or JSON state file")
    p.add_argument("--partition", help='bipartition such as "A|BC" or "1|2,3"')
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, help="monogamy exponent or polygon power")
    p.add_argument("--gamma", type=float, help="exponent for tighter-relation schedules")
    p.add_argument("--schedule", help="tighter-relation schedule: linear (theta = x) or power (theta = 2^x - 1)")
    p.add_argument("--system", help="local dimensions, e.g. 2,2,2 (default 2,2,2; 2,2 for probes)")
    p.add_argument("--focus", type=int, default=0, help="0-based focus party")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--fn", help="reduced function for probe, e.g. h_N or tsallis:q=2")
    p.add_argument("--mode", help="probe mode: concavity, subadditivity or schur")
    p.add_argument("--dim", type=int, default=3, help="dimension for concavity probes")
    p.add_argument("--witness-dir", help="write probe witnesses to this folder")
    p.add_argument("--target", default="isotropic-eof")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", help="write records to this file instead of stdout")
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    logging.basicConfig(level=os.environ.get("ENTKIT_LOG", "WARNING").upper(), stream=stderr)
    try:
        args = build_parser().parse_args(argv)
        if args.samples < 1 or args.trials < 1:
            raise UsageError("--samples and --trials must be positive")
        if args.workers < 1:
            raise UsageError("--workers must be positive")
        log.info("running %s", args.verb)
        records = _VERBS[args.verb](args)
    except UsageError as exc:
        stderr.write(f"entkit: error: {exc}\n")
        return 2
    except ValueError as exc:
        stderr.write(f"entkit: error: {exc}\n")
        return 2
    fmt = args.format or ("csv" if args.verb == "reproduce" else "json")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            _emit(records, fmt, fh)
    else:
        _emit(records, fmt, stdout)
    return 0


def main() -> None:
    sys.exit(run())
