"""Acceptance criteria, one PASS/FAIL line each.

Run with ``python3 tests/test_acceptance.py`` for the bare report, or under
pytest, where the same lines go straight to the terminal.
"""
import json
import os
import subprocess
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from heartknit.arquiver import decompose, emit_json, iso_test, knit, label_string, verify_almost_split
from heartknit.arquiver import almost_split_conflation
from heartknit.dsl import parse_algebra, parse_module
from heartknit.heart import Heart
from heartknit.sigma import sigma_one

import reference_values as pv
from conftest import data, read

HERE = os.path.dirname(os.path.abspath(__file__))


def _ex():
    return parse_algebra(read("kronecker.hk"))


def _d4():
    return parse_algebra(read("d4.hk"))


def c1():
    t = time.perf_counter()
    A = _ex()
    H = Heart.of(A, 2)
    M = H.member(parse_module(read("M.hk"), A))
    a, b = H.tau(M), H.tau_sigma(M)
    dt = time.perf_counter() - t
    S = H.simple("2", 1)
    ok = iso_test(a, S) and iso_test(b, S) and dt < 1
    return ok, f"tau(M) = {label_string(a)}, via Sigma {label_string(b)}, {dt:.2f}s"


def c2():
    t = time.perf_counter()
    A = _ex()
    H = Heart.of(A, 2)
    M = H.member(parse_module(read("M.hk"), A))
    s = sigma_one(H, M)
    ok = iso_test(s, H.direct_sum([H.simple("1"), H.simple("1", 1)]))
    dt = time.perf_counter() - t
    parts = sorted(label_string(y) for y, k in decompose(s) for _ in range(k))
    return ok and dt < 1, "Sigma^1 = " + " + ".join(parts) + f", {dt:.2f}s"


def c3():
    t = time.perf_counter()
    q = knit(_ex(), 2)
    js = emit_json(q)
    dt = time.perf_counter() - t
    golden = open(data("golden_h2.json"), "rb").read()
    ok = q.status == "complete" and len(q.vertices) == 10 and js == golden and dt < 5
    return ok, f"{q.status}, {len(q.vertices)} vertices, golden {'match' if js == golden else 'MISMATCH'}, {dt:.2f}s"


def c4():
    t = time.perf_counter()
    q = knit(_ex(), 3)
    dt = time.perf_counter() - t
    labels = {label_string(x) for x in q.objects()}
    ok = q.status == "complete" and len(q.vertices) == 21 and labels == pv.H3_VERTICES and dt < 10
    return ok, f"{q.status}, {len(q.vertices)} vertices, {dt:.2f}s"


def c5():
    t = time.perf_counter()
    A = _d4()
    by = {}
    for (_s, _t, i), n in A.cohomology.items():
        by[i] = by.get(i, 0) + n
    q = knit(A, 2)
    dt = time.perf_counter() - t
    labels = {label_string(x) for x in q.objects()}
    ok = by.get(0) == 7 and by.get(-1) == 1 and len(q.vertices) == 19 and labels == pv.D4_VERTICES and dt < 30
    return ok, f"dim H0 = {by.get(0)}, dim H-1 = {by.get(-1)}, {len(q.vertices)} vertices, {dt:.2f}s"


def c6():
    q = knit(_ex(), 2)
    objs = {label_string(x): x for x in q.objects()}
    res, times = [], []
    for left, mid, right in ((pv.S2, [pv.E1A], pv.TOP1_RED2), (pv.S1, [pv.S2_1], pv.P1_1),
                             (pv.S2_1, [pv.E1A, pv.P1_1], pv.M)):
        t = time.perf_counter()
        c = almost_split_conflation(objs[right])
        got = sorted(label_string(y) for y, k in decompose(c.middle) for _ in range(k))
        res.append(label_string(c.left) == left and got == sorted(mid)
                   and verify_almost_split(c, q.objects()).ok)
        times.append(time.perf_counter() - t)
    ok = all(res) and max(times) < 2
    return ok, " ".join(f"{'ok' if r else 'FAIL'} {dt:.2f}s" for r, dt in zip(res, times))


PROPERTY_TESTS = [
    "test_arquiver.py::test_invariant_report",
    "test_semifree.py::test_serre_duality",
    "test_semifree.py::test_proj_dim_vanishing",
    "test_semifree.py::test_trunc_iso",
    "test_heart.py::test_ars_pair_for_m",
    "test_dgmodule.py::test_long_exact_sequence",
    "test_dgmodule.py::test_truncation",
    "test_dgmodule.py::test_double_dual",
    "test_dgmodule.py::test_cohomology_matches_reference",
]


def c7():
    t = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_TESTS],
                       cwd=HERE, capture_output=True, text=True)
    tail = p.stdout.strip().splitlines()[-1] if p.stdout.strip() else p.stderr.strip()[-200:]
    return p.returncode == 0, f"{tail} ({time.perf_counter() - t:.1f}s)"


def c8():
    outs = set()
    for A in (_ex(), _d4()):
        runs = {emit_json(knit(A, 2, workers=w)) for w in (1, 1, 2, 4)}
        outs.add(len(runs))
        json.loads(next(iter(runs)))
    return outs == {1}, "identical over runs and workers 1, 2, 4"


CRITERIA = [
    (1, "tau(M) = S2[1] via Nakayama and via Sigma", c1),
    (2, "Sigma^1 = S1 + S1[1]", c2),
    (3, "H2 knit: 10 vertices, golden JSON", c3),
    (4, "H3 knit: 21 vertices", c4),
    (5, "D4: cohomology 7/1, 19 vertices", c5),
    (6, "three almost-split conflations", c6),
    (7, "property suite", c7),
    (8, "byte-identical JSON", c8),
]


def report(n, title, fn):
    try:
        ok, detail = fn()
    except Exception as e:  # a crash is a failure, not an error in the harness
        ok, detail = False, f"{type(e).__name__}: {e}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title} | {detail}"
    return ok, line


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion{n}" for n, _, _ in CRITERIA])
def test_criterion(n, title, fn, capsys):
    ok, line = report(n, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
