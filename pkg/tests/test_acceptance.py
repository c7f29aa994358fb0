"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import math
import random
import statistics
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import HFH
from oracles import dense_probabilities, tree_walk
from qcountsim.core.gates import is_universal
from qcountsim.core.linalg import op_norm, random_unitary
from qcountsim.corpus import CorpusBounds, random_general_program, random_input, random_program
from qcountsim.decompose import ancilla_leakage, decompose_gate, induced_unitary
from qcountsim.pathcount import (
    CountVector,
    branch_probability,
    count_paths,
    dummy_path_counts,
    enumerate_dummy_paths,
    m_plus_minus,
    path_gates,
    threshold_decide,
)
from qcountsim.program import gate_profile, parse_program
from qcountsim.skcompile import compile_with_report, proj_distance, sk_search
from qcountsim.statevec import EXACT, GENERAL, enumerate_branches

CORPUS_SIZE = 500
CORPUS_SEED = 1


@pytest.fixture
def report(capsys):
    def emit(criterion: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    return emit


@pytest.fixture(scope="module")
def corpus():
    rng = random.Random(CORPUS_SEED)
    bounds = CorpusBounds(max_qubits=5, max_gates=14, max_measurements=3)
    out = []
    for _ in range(CORPUS_SIZE):
        p = random_program(rng, bounds)
        out.append((p, random_input(rng, p.input_length)))
    return out


def test_path_counts_equal_statevector(corpus, report):
    start = time.perf_counter()
    branches = mismatches = 0
    for p, x in corpus:
        prof = gate_profile(p, x)
        sv = {b.mu: b.p for b in enumerate_branches(p, x)}
        pc = {path.mu: branch_probability(count_paths(p, x, path.mu), prof.f, prof.h)
              for path in p.paths(x)}
        branches += len(sv)
        mismatches += sum(sv.get(mu) != pc.get(mu) for mu in sv.keys() | pc.keys())
        assert all(isinstance(v, Fraction) for v in sv.values())
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed <= 60
    report(1, ok, f"{len(corpus)} programs, {branches} branches, {mismatches} mismatches, "
                  f"{elapsed:.1f}s")
    assert ok


def test_worked_example(report):
    p = parse_program(HFH)
    prof = gate_profile(p)
    sv = {b.mu: b.p for b in enumerate_branches(p)}
    counts = {mu: count_paths(p, "", mu) for mu in ((0,), (1,))}
    tree = {mu: tree_walk(path_gates(p, "", mu)[0], 1, mu) for mu in counts}
    pc = {mu: branch_probability(c, prof.f, prof.h) for mu, c in counts.items()}
    rep = threshold_decide(p)
    ok = (sv == pc == {(0,): Fraction(4, 5), (1,): Fraction(1, 5)}
          and counts == tree == {(0,): {0: (8, 0, 4, 0)}, (1,): {1: (5, 3, 0, 4)}}
          and (rep.n_plus - rep.n_minus, rep.threshold) == (80, 50) and rep.accept)
    report(2, ok, f"p={sv}, counts={counts}, diff/threshold="
                  f"{(rep.n_plus - rep.n_minus, rep.threshold)}")
    assert ok


def drift_programs(count: int, max_t: int = 200):
    rng = random.Random(11)
    while count:
        p = random_general_program(rng, num_qubits=rng.choice([2, 3]), max_gates=4,
                                   max_measurements=2)
        if all(is_universal(g) for path in p.paths() for g in path.gates):
            continue
        yield p
        count -= 1


def test_compiled_drift(net, report):
    start = time.perf_counter()
    worst, worst_num, compiled = 0.0, 0.0, 0
    failures = []
    for p in drift_programs(20):
        rep = compile_with_report(p, net=net)
        assert rep.t_prime <= 200
        assert rep.error_budget == pytest.approx(0.1)
        want = enumerate_branches(p, mode=GENERAL)
        pr = sum(b.p for b in want if b.accept)
        dense = dense_probabilities(p)
        # compiled programs use only library gates, so an exact rational run exists
        exact = sum(b.p for b in enumerate_branches(rep.program, mode=EXACT) if b.accept)
        approx = sum(b.p for b in enumerate_branches(rep.program, mode=GENERAL) if b.accept)
        num = max(max(abs(b.p - dense[b.mu]) for b in want), abs(approx - float(exact)))
        drift = abs(float(exact) - pr)
        worst, worst_num = max(worst, drift), max(worst_num, num)
        if drift > min(0.1, rep.error_budget):
            failures.append((rep.t_prime, drift))
        compiled += 1
    elapsed = time.perf_counter() - start
    ok = not failures and compiled >= 20 and worst_num <= 1e-9 and elapsed <= 600
    report(3, ok, f"{compiled} programs, worst drift {worst:.2e} (bound 0.1), "
                  f"simulator agreement {worst_num:.1e}, {elapsed:.1f}s")
    assert ok


EPS_LADDER = (0.2, 0.1, 0.05, 0.02, 0.01, 0.005)


def test_sk_ladder(net, report):
    nrng = np.random.default_rng(4)
    targets = [random_unitary(nrng, 2) for _ in range(50)]
    lengths = {eps: [] for eps in EPS_LADDER}
    misses = 0
    for eps in EPS_LADDER:
        for u in targets:
            res = sk_search(u, eps, net)
            # independent check on the exactly evaluated word
            misses += proj_distance(res.word.exact_matrix(), u) > eps
            lengths[eps].append(len(res.word))
    curve = ", ".join(f"ln(1/eps)={math.log(1 / e):.2f}:{statistics.median(lengths[e]):.0f}"
                      for e in EPS_LADDER)
    ok = misses == 0
    report(4, ok, f"{len(targets)}x{len(EPS_LADDER)} pairs, {misses} misses; median length {curve}")
    assert ok


def test_decomposition_reconstructs(report):
    nrng = np.random.default_rng(5)
    dims = [2] * 34 + [4] * 33 + [8] * 33
    worst_rec = worst_leak = 0.0
    for dim in dims:
        u = random_unitary(nrng, dim)
        frag = decompose_gate(u)
        assert frag.is_final()
        worst_rec = max(worst_rec, op_norm(induced_unitary(frag) - u))
        worst_leak = max(worst_leak, ancilla_leakage(frag))
    ok = worst_rec <= 1e-9 and worst_leak <= 1e-9
    report(5, ok, f"{len(dims)} unitaries, reconstruction {worst_rec:.1e}, leakage {worst_leak:.1e}")
    assert ok


def test_dummy_gadget(report):
    start = time.perf_counter()
    cases = bad = 0
    for f in range(3):
        for h in range(1, 5):
            for g in range(h - 1 + 6 * f, 17):
                expected = 2**g + 25**f * 2 ** (h - 1)
                acc, rej = enumerate_dummy_paths(f, h, g)
                bad += (rej != expected or acc + rej != 2 ** (g + 1)
                        or dummy_path_counts(f, h, g) != (acc, rej))
                cases += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 5
    report(6, ok, f"{cases} layouts, {bad} wrong, {elapsed:.2f}s")
    assert ok


def test_threshold_coherence(corpus, report):
    agree = ties = 0
    for p, x in corpus:
        pr = sum(b.p for b in enumerate_branches(p, x) if b.accept)
        rep = threshold_decide(p, x)
        if pr == Fraction(1, 2):
            ties += 1
            agree += rep.tie and not rep.accept
        else:
            agree += (not rep.tie) and rep.accept == (pr > Fraction(1, 2))
    ok = agree == len(corpus)
    report(7, ok, f"{agree}/{len(corpus)} agree, {ties} ties flagged")
    assert ok


def test_m_plus_minus_identity(report):
    rng = random.Random(8)
    bad = 0
    for k in range(10_000):
        bits = rng.choice([8, 64, 256])
        c = tuple(rng.getrandbits(bits) for _ in range(4))
        mp, mm = m_plus_minus(c)
        c1, cm1, ci, cmi = c
        # |sum alpha c_alpha|^2 with alpha in {1, -1, i, -i}
        bad += mp - mm != (c1 - cm1) ** 2 + (ci - cmi) ** 2
        bad += mp - mm != CountVector(*c).amplitude().norm_sq()
    report(8, bad == 0, f"10000 tuples, {bad} violations")
    assert bad == 0
