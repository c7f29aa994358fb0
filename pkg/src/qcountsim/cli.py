"""Command-line front end: compile, run, compare, dummy, net build.

Every command prints a JSON report on standard output. ``run`` exits with 0
for an accept verdict, 1 for reject and 2 on any error.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from qcountsim.core.gates import is_universal, unitarity_check
from qcountsim.corpus import CorpusBounds, random_input, random_program
from qcountsim.crosscheck import compare_backends
from qcountsim.pathcount import backend
from qcountsim.pathcount.counting import m_plus_minus
from qcountsim.pathcount.threshold import (
    count_branches,
    dummy_path_counts,
    enumerate_dummy_paths,
    threshold_decide,
)
from qcountsim.program.dsl import format_program, parse_program
from qcountsim.program.model import ProgramError
from qcountsim.program.passes import gate_profile, normalize
from qcountsim.statevec import DEFAULT_MAX_BRANCHES, EXACT, GENERAL, enumerate_branches

EXIT_ACCEPT, EXIT_REJECT, EXIT_ERROR = 0, 1, 2

DEFAULTS = {"max-branches": DEFAULT_MAX_BRANCHES, "net-depth": 12, "precision-bits": 36}


class CLIError(Exception):
    pass


def load_config(path: str | None) -> dict:
    """key=value caps; unknown keys are rejected."""
    cfg = dict(DEFAULTS)
    if not path:
        return cfg
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",))
    try:
        parser.read_string("[caps]\n" + Path(path).read_text())
    except (OSError, configparser.Error) as exc:
        raise CLIError(f"cannot read config {path}: {exc}") from exc
    for key, value in parser["caps"].items():
        if key not in DEFAULTS:
            raise CLIError(f"unknown config key {key!r}")
        try:
            cfg[key] = int(value)
        except ValueError as exc:
            raise CLIError(f"config key {key!r} needs an integer") from exc
    return cfg


def digest(p) -> str:
    return hashlib.sha256(format_program(p).encode()).hexdigest()[:16]


def _frac(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


@contextmanager
def _timed(timing: dict, key: str):
    start = time.perf_counter()
    yield
    timing[key] = round(time.perf_counter() - start, 6)


def _read_program(path: str, precision_bits: int):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}") from exc
    p = parse_program(text)
    tol = 2.0 ** -(precision_bits - 4)
    for name, m in p.gates.items():
        if not unitarity_check(m, tol):
            raise CLIError(f"gate {name} is not unitary within {tol:.3g}")
    return p


def _emit(report: dict, out=None):
    text = json.dumps(report, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ------------------------------------------------------------------ commands

def cmd_compile(args, cfg) -> int:
    from qcountsim.skcompile import build_net, compile_with_report
    from qcountsim.skcompile.pipeline import decomposed_length

    p = _read_program(args.program, cfg["precision-bits"])
    universal = all(is_universal(g) for path in p.paths() for g in path.gates)
    depth = args.net_depth or cfg["net-depth"]
    net = None if universal else build_net(depth)
    eps = args.eps
    if args.eps_budget_override is not None:
        if eps is not None:
            raise CLIError("--eps and --eps-budget-override are exclusive")
        # spread the budget evenly so that 2 * t' * eps equals it
        eps = args.eps_budget_override / (2 * max(decomposed_length(p), 1))
    rep = compile_with_report(p, eps, net)
    out = args.output or str(Path(args.program).with_suffix(".compiled.qprog"))
    Path(out).write_text(format_program(rep.program))
    report = {"command": "compile", "input_digest": digest(p), "output": out,
              "output_digest": digest(rep.program), "universal_input": universal}
    report.update(rep.record())
    if net is not None:
        report["net"] = {"depth": net.max_length, "entries": len(net),
                         "covering_radius": net.covering_radius, "digest": net.digest()}
    _emit(report, args.report)
    return 0


def cmd_run(args, cfg) -> int:
    p = _read_program(args.program, cfg["precision-bits"])
    x = args.input
    if any(c not in "01" for c in x):
        raise CLIError("--input must be a bit string")
    universal = all(is_universal(g) for path in p.paths(x) for g in path.gates)
    if not universal and (args.backend != "statevec" or args.exact):
        raise CLIError("path counting and exact mode need a program over {CNOT, F, F†, H, I}; "
                       "compile it first")
    timing: dict = {}
    report: dict = {"command": "run", "digest": digest(p), "input": x, "backend": args.backend}
    q = normalize(p) if universal else p
    report["normalized"] = q is not p
    kernels = backend.select(args.kernels)
    max_branches = cfg["max-branches"]

    branches = {}
    prob = None
    if args.backend in ("statevec", "both"):
        with _timed(timing, "statevec"):
            sv = enumerate_branches(q, x, EXACT if universal else GENERAL, max_branches)
        branches["statevec"] = [b.record() for b in sv]
        prob = sum((b.p for b in sv if b.accept), Fraction(0) if universal else 0.0)
    counted = None
    if args.backend in ("pathcount", "both"):
        with _timed(timing, "pathcount"):
            counted = count_branches(q, x, kernels, max_branches)
        branches["pathcount"] = [
            {"mu": "".join(map(str, b.mu)), "p_num": str(b.p.numerator),
             "p_den": str(b.p.denominator), "verdict": "accept" if b.accept else "reject",
             "counts": {str(s): list(c) for s, c in b.counts.items()}}
            for b in counted
        ]
        if prob is None:
            prob = sum((b.p for b in counted if b.accept), Fraction(0))
    report["branches"] = branches

    prof = gate_profile(q, x)
    report["profile"] = {"t": prof.t, "s": prof.s, "m": prof.m, "f": prof.f, "h": prof.h, "g": None}
    threshold = None
    if counted is not None:
        n_plus = n_minus = 0
        for b in counted:
            if b.accept:
                for c in b.counts.values():
                    mp, mm = m_plus_minus(c)
                    n_plus, n_minus = n_plus + mp, n_minus + mm
        with _timed(timing, "threshold"):
            threshold = threshold_decide(q, x, kernels, max_branches, (n_plus, n_minus))
        report["threshold"] = threshold.record()
        report["profile"]["g"] = threshold.g

    if args.backend == "both":
        sv_p = {r["mu"]: (r["p_num"], r["p_den"]) for r in branches["statevec"]}
        pc_p = {r["mu"]: (r["p_num"], r["p_den"]) for r in branches["pathcount"]}
        report["comparison"] = "exact-match" if sv_p == pc_p else "mismatch"
    else:
        report["comparison"] = "n/a"

    if isinstance(prob, Fraction):
        report["accept_probability"] = _frac(prob)
        tie = prob == Fraction(1, 2)
        accept = prob > Fraction(1, 2)
    else:
        report["accept_probability"] = prob
        tie = False
        accept = prob > 0.5
    if threshold is not None:
        accept, tie = threshold.accept, threshold.tie
    report["verdict"] = "accept" if accept else "reject"
    report["tie"] = tie
    report["timing"] = timing
    _emit(report)
    if report["comparison"] == "mismatch":
        print("error: simulators disagree", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ACCEPT if accept else EXIT_REJECT


def cmd_compare(args, cfg) -> int:
    rng = random.Random(args.seed)
    bounds = CorpusBounds(args.max_qubits, args.max_gates, args.max_measurements, args.max_input)
    fixed = _read_program(args.program, cfg["precision-bits"]) if args.program else None
    kernels = backend.select(args.kernels)
    matches = 0
    counterexamples = []
    start = time.perf_counter()
    for trial in range(args.trials):
        p = fixed if fixed is not None else random_program(rng, bounds)
        x = random_input(rng, p.input_length)
        cmp = compare_backends(p, x, kernels, cfg["max-branches"],
                               inject_fault=args.inject_fault and trial == 0)
        if cmp.exact_match:
            matches += 1
            continue
        counterexamples.append({
            "trial": trial, "input": x, "program": format_program(p),
            "mismatches": [{"mu": "".join(map(str, mu)),
                            "statevec": _frac(cmp.statevec[mu]) if mu in cmp.statevec else None,
                            "pathcount": _frac(cmp.pathcount[mu]) if mu in cmp.pathcount else None}
                           for mu in cmp.mismatches],
        })
    report = {"command": "compare", "seed": args.seed, "trials": args.trials,
              "exact_matches": matches, "summary": f"{matches}/{args.trials} exact",
              "counterexamples": counterexamples,
              "seconds": round(time.perf_counter() - start, 3)}
    _emit(report)
    return 0 if matches == args.trials else 1


def cmd_dummy(args, cfg) -> int:
    acc, rej = dummy_path_counts(args.f, args.h, args.g)
    report = {"command": "dummy", "f": args.f, "h": args.h, "g": args.g,
              "accepting": str(acc), "rejecting": str(rej),
              "expected_rejecting": str(2**args.g + 25**args.f * 2 ** (args.h - 1))}
    if args.enumerate:
        e_acc, e_rej = enumerate_dummy_paths(args.f, args.h, args.g)
        report["enumerated"] = {"accepting": str(e_acc), "rejecting": str(e_rej)}
    _emit(report)
    return 0


def cmd_net_build(args, cfg) -> int:
    from qcountsim.skcompile.net import build_net, cache_dir, cache_key

    depth = args.net_depth or cfg["net-depth"]
    start = time.perf_counter()
    net = build_net(depth, samples=args.samples)
    _emit({"command": "net build", "depth": depth, "entries": len(net),
           "covering_radius": net.covering_radius, "digest": net.digest(),
           "cache": str(cache_dir() / f"net-{cache_key(depth)}.npz"),
           "seconds": round(time.perf_counter() - start, 3)})
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcountsim", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key=value file with max-branches, net-depth, precision-bits")
    ap.add_argument("--kernels", choices=("auto", "python", "cython"), default="auto",
                    help="path-counting kernel implementation")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile to {CNOT, F, F†, H, I}")
    c.add_argument("program")
    c.add_argument("-o", "--output")
    c.add_argument("--report", help="write the JSON report here instead of stdout")
    c.add_argument("--eps", type=float, help="per-gate accuracy (default 1/(20 t'))")
    c.add_argument("--eps-budget-override", type=float,
                   help="total drift budget B; per-gate accuracy becomes B/(2 t')")
    c.add_argument("--net-depth", type=int)
    c.set_defaults(func=cmd_compile)

    r = sub.add_parser("run", help="simulate and report p_mu and the verdict")
    r.add_argument("program")
    r.add_argument("--backend", choices=("statevec", "pathcount", "both"), default="both")
    r.add_argument("--input", default="", help="classical input bit string x")
    r.add_argument("--exact", action="store_true", help="require exact rational arithmetic")
    r.set_defaults(func=cmd_run)

    k = sub.add_parser("compare", help="cross-check both simulators on random programs")
    k.add_argument("program", nargs="?", help="use this program for every trial")
    k.add_argument("--trials", type=int, default=100)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--max-qubits", type=int, default=5)
    k.add_argument("--max-gates", type=int, default=14)
    k.add_argument("--max-measurements", type=int, default=3)
    k.add_argument("--max-input", type=int, default=3)
    k.add_argument("--inject-fault", action="store_true",
                   help="corrupt one path count in the first trial")
    k.set_defaults(func=cmd_compare)

    d = sub.add_parser("dummy", help="path counts of the dummy gadget")
    d.add_argument("f", type=int)
    d.add_argument("h", type=int)
    d.add_argument("g", type=int)
    d.add_argument("--enumerate", action="store_true", help="also enumerate every guess string")
    d.set_defaults(func=cmd_dummy)

    n = sub.add_parser("net", help="epsilon-net management")
    nsub = n.add_subparsers(dest="net_command", required=True)
    nb = nsub.add_parser("build", help="build and cache the net")
    nb.add_argument("--net-depth", type=int)
    nb.add_argument("--samples", type=int, default=1000)
    nb.set_defaults(func=cmd_net_build)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (CLIError, ProgramError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
