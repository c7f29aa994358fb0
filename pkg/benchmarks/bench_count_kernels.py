"""Compiled vs pure-Python count-table kernels on random H/F/CNOT circuits.

    python benchmarks/bench_count_kernels.py [--width 10] [--gates 24] [--repeat 3]
"""

import argparse
import random
import time

from qcountsim.core.gates import Gate
from qcountsim.pathcount import backend
from qcountsim.pathcount.counting import run_counts
from qcountsim.program.model import Apply, BranchingProgram, Verdict


def random_circuit(rng, width, gates):
    body = []
    for _ in range(gates):
        kind = rng.choice(["H", "F", "Fdg", "CNOT"])
        if kind == "CNOT":
            body.append(Apply(Gate.unitary("CNOT", *rng.sample(range(width), 2))))
        else:
            body.append(Apply(Gate.unitary(kind, rng.randrange(width))))
    return BranchingProgram(width, 0, tuple(body) + (Verdict(True),))


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--width", type=int, default=10)
    ap.add_argument("--gates", type=int, default=24)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    p = random_circuit(random.Random(args.seed), args.width, args.gates)
    gates = [ins.gate for ins in p.body[:-1]]
    if backend.compiled is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    t_py, rows_py = best_time(lambda: run_counts(p, "", gates, (), backend.pure), args.repeat)
    t_c, rows_c = best_time(lambda: run_counts(p, "", gates, (), backend.compiled), args.repeat)
    assert rows_py == rows_c, "kernels disagree"
    print(f"width={args.width} gates={args.gates} states={1 << args.width}")
    print(f"python  {t_py * 1e3:9.2f} ms")
    print(f"cython  {t_c * 1e3:9.2f} ms")
    print(f"speedup {t_py / t_c:9.1f}x")


if __name__ == "__main__":
    main()
