"""Command line: generate workloads, run an algorithm over one with metrics
and optional verification, and stress the counter game.

Exit codes: 0 ok, 2 verification failure, 1 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Sequence

from . import prims
from .algo_amortized import AmortizedOrienter, AmortizedParams
from .algo_reinsertion import ReinsertionOrienter, ReinsertionParams
from .algo_twostage import TwoStageOrienter, WorstCaseParams
from .counter_game import greedy_adversary, play_sequence
from .graph import BatchError
from .verify import AmortizedChecker, VerificationError, Verifier
from .workload import KINDS, Workload, WorkloadError, gen_workload, read_workload, write_workload

COLUMNS = (
    "batch_index", "batch_size", "algorithm", "max_outdegree", "flips", "edges_to_static",
    "skyline_threshold_min", "recursion_depth", "element_touches", "elapsed_ns",
)
ALGORITHMS = ("amortized", "twostage", "reinsertion")

# --params keys and the dataclass fields they set
_ALIASES = {
    "tau*": "tau_star", "tau_star": "tau_star", "τ*": "tau_star",
    "tau'": "tau_prime", "tau_prime": "tau_prime", "τ′": "tau_prime", "τ'": "tau_prime",
    "tau": "tau", "τ": "tau",
    "eps": "eps", "ε": "eps", "delta": "delta", "δ": "delta", "sigma": "sigma", "σ": "sigma",
    "c1": "c1", "c'": "c1", "H": "H", "M": "M", "alpha": "alpha", "α": "alpha", "lam": "lam", "λ": "lam",
}
_INTS = {"delta", "sigma", "c1", "H", "M", "alpha"}


class UsageError(Exception):
    pass


def parse_params(items: Sequence[str]) -> dict:
    out = {}
    for it in items:
        if "=" not in it:
            raise UsageError(f"--params expects key=value, got {it!r}")
        k, v = it.split("=", 1)
        name = _ALIASES.get(k.strip())
        if name is None:
            raise UsageError(f"unknown parameter {k!r}")
        try:
            out[name] = int(v) if name in _INTS else Fraction(v)
        except ValueError as e:
            raise UsageError(f"bad value for {k}: {v!r}") from e
    return out


def make_orienter(algo: str, n: int, c: int, params: dict | None = None):
    params = dict(params or {})
    try:
        if algo == "amortized":
            base = AmortizedParams.default(c)
            kw = {k: params.pop(k) for k in ("tau_star", "tau_prime", "tau") if k in params}
            if params:
                raise UsageError(f"amortized does not take {sorted(params)}")
            if kw:
                ts = kw.get("tau_star", base.tau_star)
                tp = kw.get("tau_prime", base.tau_prime)
                tau = kw.get("tau", 2 * ts + tp + Fraction(c, 5))
                base = AmortizedParams(c, ts, tp, tau)
            return AmortizedOrienter(n, c, base)
        if algo == "twostage":
            if {"alpha", "lam"} & params.keys():
                raise UsageError("alpha and lam only apply to reinsertion")
            return TwoStageOrienter(n, c, WorstCaseParams.twostage(n, c, **params))
        if algo == "reinsertion":
            return ReinsertionOrienter(n, c, ReinsertionParams.default(n, c, **params))
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from e
    raise UsageError(f"unknown algorithm {algo!r}")


@dataclass
class RunResult:
    rows: list[dict] = field(default_factory=list)
    digest: str = ""
    reports: list[str] = field(default_factory=list)
    ok: bool = True


def run_workload(
    w: Workload, algo: str, *, verify: bool = False, deterministic: bool = False, seed: int = 0,
    params: dict | None = None, reference: str = "static", orienter=None,
) -> RunResult:
    """Run every batch; with verify, stop at the first violation (ok=False)."""
    res = RunResult()
    with prims.mode(deterministic=deterministic, seed=seed):
        o = orienter or make_orienter(algo, w.n, w.c, params)
        G = o.graph
        ver = chk = None
        if verify:
            if algo == "amortized":
                chk = AmortizedChecker(o)
            else:
                ver = Verifier(o.params, reference=reference, strict=True).attach(G)
        for i, wb in enumerate(w.batches):
            batch = wb.to_batch()
            t0 = time.perf_counter_ns()
            t_start = prims.COUNTER.n
            try:
                if ver is not None:
                    ver.before_update(batch)
                rep = o.update(batch)
                if ver is not None:
                    ver.after_update(rep)
            except VerificationError as e:
                res.ok = False
                res.reports.append(e.report.to_json(batch=i))
                break
            elapsed = time.perf_counter_ns() - t0
            tmin = rep.threshold_min
            res.rows.append({
                "batch_index": i, "batch_size": len(batch), "algorithm": algo,
                "max_outdegree": rep.max_outdegree, "flips": rep.flips,
                "edges_to_static": rep.edges_to_static,
                "skyline_threshold_min": "" if tmin is None else tmin,
                "recursion_depth": rep.recursion_depth,
                "element_touches": prims.COUNTER.n - t_start,
                "elapsed_ns": 0 if deterministic else elapsed,
            })
            if chk is not None:
                bad = [r for r in chk.after_update(rep) if not r.ok]
                if bad:
                    res.ok = False
                    res.reports += [r.to_json(batch=i) for r in bad]
                    break
            if ver is not None:
                res.reports.append(json.dumps({
                    "batch": i, "check": "summary", "ok": True,
                    "calls": [c.branch for c in rep.calls],
                }))
        if ver is not None and res.ok:
            res.reports.append(json.dumps({"check": "total", "ok": True, **ver.summary()}, sort_keys=True))
        if chk is not None and res.ok:
            res.reports.append(json.dumps({"check": "total", "ok": True, "passed": dict(chk.passed)}, sort_keys=True))
        res.digest = G.digest()
    return res


def write_rows(rows: Sequence[dict], out: IO[str]) -> None:
    wr = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator="\n")
    wr.writeheader()
    for r in rows:
        wr.writerow(r)


def rows_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    write_rows(rows, buf)
    return buf.getvalue()


def counter_stress(n: int, Y, H, moves: int) -> dict:
    seq = greedy_adversary(n, Y, H, moves)
    st = play_sequence(seq, H)
    top = st.max_weight if seq else Fraction(Y)
    scale = Fraction(Y) + Fraction(H) * math.log2(max(n, 2))
    return {
        "n": n, "Y": str(Y), "H": str(H), "moves": len(seq), "max_weight": str(top),
        "ratio": float(top / Fraction(scale)), "final_threshold": str(st.thresholds[-1]) if seq else None,
    }


# -- argument handling ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit with 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="batchorient", description="Batch-dynamic low out-degree orientation.")
    p.add_argument("--counter-stress", nargs=4, metavar=("n", "Y", "H", "moves"),
                   help="run the greedy counter-game adversary and print a JSON summary")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a workload file")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--c", type=int, required=True)
    g.add_argument("--batches", type=int, required=True)
    g.add_argument("--batch-size", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", help="output path (default stdout)")

    r = sub.add_parser("run", help="run an algorithm over a workload file")
    r.add_argument("workload")
    r.add_argument("--algo", choices=ALGORITHMS, default="amortized")
    r.add_argument("--verify", action="store_true")
    r.add_argument("--deterministic", action="store_true")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--params", nargs="*", default=[], metavar="key=val")
    r.add_argument("--reference", choices=("static", "optimal"), default="static",
                   help="reference orientation for potential checks")
    r.add_argument("-o", "--out", help="metrics CSV path (default stdout)")
    r.add_argument("--report", help="verification JSON-lines path (default stderr)")
    r.add_argument("--digest", help="write the final orientation digest here")

    s = sub.add_parser("counter-stress", help="greedy counter-game adversary")
    s.add_argument("n", type=int)
    s.add_argument("Y")
    s.add_argument("H")
    s.add_argument("moves", type=int)
    return p


def _stress(n, Y, H, moves) -> int:
    try:
        n, moves = int(n), int(moves)
        Y, H = Fraction(Y), Fraction(H)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if n < 1 or H <= 0 or Y <= H or moves < 0:
        raise UsageError("counter-stress needs n >= 1, H > 0, Y > H and moves >= 0")
    print(json.dumps(counter_stress(n, Y, H, moves), sort_keys=True))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.counter_stress:
            return _stress(*args.counter_stress)
        if args.cmd == "counter-stress":
            return _stress(args.n, args.Y, args.H, args.moves)
        if args.cmd == "gen":
            try:
                w = gen_workload(args.kind, args.n, args.c, args.batches, args.batch_size, args.seed)
            except WorkloadError as e:
                raise UsageError(str(e)) from e
            if args.out:
                with open(args.out, "w", encoding="utf-8") as f:
                    write_workload(w, f)
            else:
                write_workload(w, sys.stdout)
            return 0
        if args.cmd == "run":
            params = parse_params(args.params)
            with open(args.workload, encoding="utf-8") as f:
                w = read_workload(f)
            res = run_workload(
                w, args.algo, verify=args.verify, deterministic=args.deterministic,
                seed=args.seed, params=params, reference=args.reference,
            )
            if args.out:
                with open(args.out, "w", encoding="utf-8", newline="") as f:
                    write_rows(res.rows, f)
            else:
                write_rows(res.rows, sys.stdout)
            if res.reports:
                text = "".join(line + "\n" for line in res.reports)
                if args.report:
                    with open(args.report, "w", encoding="utf-8") as f:
                        f.write(text)
                else:
                    sys.stderr.write(text)
            if args.digest:
                with open(args.digest, "w", encoding="utf-8") as f:
                    f.write(res.digest + "\n")
            else:
                print(f"digest {res.digest}", file=sys.stderr)
            return 0 if res.ok else 2
        build_parser().print_help(sys.stderr)
        return 1
    except UsageError as e:
        print(f"batchorient: {e}", file=sys.stderr)
        return 1
    except (OSError, WorkloadError, BatchError) as e:
        print(f"batchorient: {e}", file=sys.stderr)
        return 1
