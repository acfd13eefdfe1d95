"""Acceptance suite: the quantitative desk checks behind the library.

Each test prints a single pass/fail line for its criterion; the heavy
verification sweeps run once in session fixtures and are shared.
"""
import itertools
import json
import math
import time

import numpy as np
import pytest

from oracles import circle_cosine_constant, seg_juxtaposed, seg_linked, seg_precedes

from grassint.cli import main as cli_main
from grassint.functions import PolynomialObservable, QuadratureSpec, TransformOp
from grassint.harmonics import range_predicate
from grassint.sampling import SeededSampler
from grassint.subspaces import Subspace, complement_frames, cos_angle, haar_frames, sin_angle
from grassint.transforms import apply_transform, estimate_composition_constant
from grassint.valuations import check_axioms, make_projection_valuation, theorem13_residual
from grassint.verify import verify_range_theorem
from grassint.zelevinsky import (Multisegment, Segment, classify_image,
                                 grassmannian_segments, juxtaposed, linked, precedes)

SUITE = [(3, 1, 1), (3, 2, 1), (4, 2, 2), (4, 2, 1), (4, 3, 1), (5, 2, 2)]
DEFAULT_N = 50000


def _line(num, ok, detail):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")


def _default_q():
    return QuadratureSpec(DEFAULT_N, SeededSampler(0))


@pytest.fixture(scope="session")
def six_reports():
    reports = {}
    t0 = time.perf_counter()
    for n, i, j in SUITE:
        reports[(n, i, j)] = verify_range_theorem(n, i, j, 4, q=_default_q())
    return reports, time.perf_counter() - t0


@pytest.fixture(scope="session")
def sine_report():
    return verify_range_theorem(4, 2, 2, 4, q=_default_q(), kind="sine")


def test_criterion_01_angle_identities():
    t0 = time.perf_counter()
    rng = SeededSampler(11).next_rng()
    combos = [(n, i, j) for n in range(2, 7)
              for i in range(1, n) for j in range(1, n)]
    per_combo = -(-10000 // len(combos))
    failures = []
    checked = 0
    for n, i, j in combos:
        es = haar_frames(n, i, per_combo, rng)
        fs = haar_frames(n, j, per_combo, rng)
        ecs = complement_frames(es)
        fcs = complement_frames(fs)
        for a, b, ac, bc in zip(es, fs, ecs, fcs):
            e, f = Subspace(a), Subspace(b)
            c = cos_angle(e, f)
            s = sin_angle(e, f)
            if not (-1e-9 <= c <= 1 + 1e-9 and -1e-9 <= s <= 1 + 1e-9):
                failures.append(("range", n, i, j, c, s))
            if abs(c - cos_angle(f, e)) > 1e-9:
                failures.append(("symmetry", n, i, j))
            if abs(c - cos_angle(Subspace(ac), Subspace(bc))) > 1e-9:
                failures.append(("complement", n, i, j))
            if abs(s - cos_angle(e, Subspace(bc))) > 1e-9:
                failures.append(("sine", n, i, j))
            small, big = (e, f) if i <= j else (f, e)
            gram = small.frame.T @ big.projector() @ small.frame
            ratio = math.sqrt(max(float(np.linalg.det(gram)), 0.0))
            if abs(ratio - c) > 1e-8:
                failures.append(("volume-ratio", n, i, j, ratio, c))
            checked += 1
    elapsed = time.perf_counter() - t0
    ok = not failures and checked >= 10000 and elapsed < 30.0
    _line(1, ok, f"{checked} pairs, {elapsed:.1f}s")
    assert ok, failures[:5] or elapsed


def test_criterion_02_circle_constant():
    t0 = time.perf_counter()
    op = TransformOp("cosine", 2, 1, 1)
    q = QuadratureSpec(100000, SeededSampler(0))
    e = Subspace(haar_frames(2, 1, 1, SeededSampler(1).next_rng())[0])
    value, _ = apply_transform(op, PolynomialObservable.constant(2, 1, 1.0), e, q)
    elapsed = time.perf_counter() - t0
    target = circle_cosine_constant()
    rel = abs(value - target) / target
    ok = rel < 0.01 and elapsed < 5.0
    _line(2, ok, f"value {value:.5f} vs 2/pi, rel err {rel:.2e}, {elapsed:.1f}s")
    assert ok


def test_criterion_03_range_theorem_suite(six_reports):
    reports, elapsed = six_reports
    failures = []
    for key, rep in reports.items():
        n, i, j = key
        inconclusive = sum(v.verdict == "Inconclusive" for v in rep.verdicts)
        if inconclusive > 0.2 * len(rep.verdicts):
            failures.append((key, "inconclusive", inconclusive))
        if not rep.agreement:
            failures.append((key, "agreement"))
        for v in rep.verdicts:
            if v.verdict == "Inconclusive":
                continue
            if (v.verdict == "InImage") != range_predicate(n, i, j, v.weight):
                failures.append((key, "mismatch", v.weight.entries))
            if v.verdict == "Kernel" and not v.measured_ratio < 0.05:
                failures.append((key, "kernel-ratio", v.weight.entries))
            if v.verdict == "InImage" and not v.measured_ratio > 0.2:
                failures.append((key, "image-ratio", v.weight.entries))
    ok = not failures and elapsed <= 900.0
    _line(3, ok, f"6 reports, {elapsed:.0f}s total")
    assert ok, (failures[:5], elapsed)


def test_criterion_04_sine_matches_cosine(six_reports, sine_report):
    cosine = six_reports[0][(4, 2, 2)]
    same_weights = [v.weight for v in cosine.verdicts] == \
        [v.weight for v in sine_report.verdicts]
    same_verdicts = [v.verdict for v in cosine.verdicts] == \
        [v.verdict for v in sine_report.verdicts]
    ok = same_weights and same_verdicts
    _line(4, ok, f"{len(cosine.verdicts)} weights compared")
    assert ok


def test_criterion_05_composition_constant():
    failures = []
    summary = []
    for n, i, j in [(3, 2, 1), (4, 2, 1)]:
        constant, spread, details = estimate_composition_constant(
            n, i, j, _default_q(), trials=10, return_details=True)
        if not spread < 0.05:
            failures.append((n, i, j, "spread", spread))
        for d in details:
            resid = abs(d["lhs"] - constant * d["rhs"])
            tol = 5.0 * math.hypot(d["lhs_se"], constant * d["rhs_se"])
            if not resid <= tol:
                failures.append((n, i, j, "residual", resid, tol))
        summary.append(f"({n},{i},{j}) c={constant:.4f} spread={spread:.3f}")
    ok = not failures
    _line(5, ok, "; ".join(summary))
    assert ok, failures[:5]


def test_criterion_06_radon_spot_checks(six_reports):
    rep = six_reports[0][(4, 2, 1)]
    rows = {v.weight.entries: v for v in rep.verdicts}
    killed = rows[(2, 2)]
    survives = rows[(2, 0)]
    ok = killed.measured_ratio < 0.05 and killed.verdict == "Kernel" \
        and survives.measured_ratio > 0.2 and survives.verdict == "InImage"
    _line(6, ok, f"(2,2) ratio {killed.measured_ratio:.2e}, "
                 f"(2,0) ratio {survives.measured_ratio:.3f}")
    assert ok


def test_criterion_07_restriction_bridge():
    t0 = time.perf_counter()
    failures = []
    for n, i in [(3, 1), (3, 2), (4, 2)]:
        k = n - i
        sampler = SeededSampler(100 + 10 * n + i)
        for trial in range(5):
            p = PolynomialObservable.random_homogeneous(n, k, 2, 6,
                                                        sampler.next_rng())
            bound = p.coeff_bound()
            if bound > 0:
                p = p.scaled(0.5 / bound)
            f = p.plus(PolynomialObservable.constant(n, k, 1.0))
            residual, stderr = theorem13_residual(
                f, QuadratureSpec(800, sampler.fork()), probes=10)
            if not (residual < 5.0 * stderr or residual < 1e-9):
                failures.append((n, i, trial, residual, stderr))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300.0
    _line(7, ok, f"15 functions x 10 probes, {elapsed:.0f}s")
    assert ok, (failures[:5], elapsed)


def test_criterion_08_valuation_axioms():
    failures = []
    for n, k, degree in [(3, 1, 2), (3, 2, 1), (4, 2, 2)]:
        sampler = SeededSampler(200 + 10 * n + k)
        p = PolynomialObservable.random_homogeneous(n, k, 2, 6,
                                                    sampler.next_rng())
        bound = p.coeff_bound()
        if bound > 0:
            p = p.scaled(0.5 / bound)
        f = p.plus(PolynomialObservable.constant(n, k, 1.0))
        phi = make_projection_valuation(f, QuadratureSpec(500, sampler))
        report = check_axioms(phi, sampler=sampler.fork(), trials=20)
        if not report["ok"]:
            failures.append((n, k, {name: entry["ok"]
                                    for name, entry in report.items()
                                    if isinstance(entry, dict)}))
        for slope in report["homogeneity"]["slopes"]:
            if abs(slope - degree) > 0.01:
                failures.append((n, k, "slope", slope))
    ok = not failures
    _line(8, ok, "3 valuations x 20 random cases")
    assert ok, failures


def test_criterion_09_segment_calculus_exact():
    t0 = time.perf_counter()
    failures = []
    for n in range(2, 11):
        for i in range(1, n):
            desc, image = classify_image(n, i)
            if (desc.kind == "Irreducible") != (i in (1, n - 1)):
                failures.append((n, i, desc.kind))
            d1, d1p, _, _ = grassmannian_segments(n, i)
            if image != Multisegment([d1, d1p]):
                failures.append((n, i, "image"))
    _, image = classify_image(4, 2)
    if image != Multisegment([Segment(-3, -1), Segment(-1, 1)]):
        failures.append(("pinned image", str(image)))
    for lo2, hi2 in [(-8, 8), (-7, 7)]:
        segs = [Segment(a, b) for a in range(lo2, hi2 + 1)
                for b in range(a, hi2 + 1, 2) if (a - lo2) % 2 == 0]
        for s1, s2 in itertools.product(segs, repeat=2):
            t1, t2 = (s1.start2, s1.end2), (s2.start2, s2.end2)
            if linked(s1, s2) != seg_linked(t1, t2) or \
               juxtaposed(s1, s2) != seg_juxtaposed(t1, t2) or \
               precedes(s1, s2) != seg_precedes(t1, t2):
                failures.append(("relation", t1, t2))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 1.0
    _line(9, ok, f"n<=10 classifications + exhaustive pairs, {elapsed:.2f}s")
    assert ok, (failures[:5], elapsed)


def test_criterion_10_byte_identical_reports(tmp_path):
    commands = [
        ["angle", "--n", "4", "--i", "2", "--j", "1", "--seed", "5"],
        ["transform", "--kind", "cosine", "--n", "3", "--i", "1", "--j", "1",
         "--samples", "2000"],
        ["verify-range", "--n", "3", "--i", "1", "--j", "1", "--cap", "2",
         "--samples", "2500"],
        ["verify-range", "--n", "3", "--i", "1", "--j", "1", "--cap", "2",
         "--samples", "2500", "--format", "csv"],
        ["verify-radon", "--n", "4", "--i", "2", "--j", "1", "--cap", "2",
         "--samples", "2500"],
        ["verify-composition", "--n", "3", "--i", "2", "--j", "1",
         "--samples", "1500", "--trials", "3"],
        ["valuation-check", "--n", "3", "--i", "2", "--samples", "300",
         "--trials", "4"],
        ["theorem13", "--n", "3", "--i", "2", "--samples", "250",
         "--probes", "3"],
        ["segments", "--n", "6", "--i", "3"],
    ]
    failures = []
    for idx, argv in enumerate(commands):
        first = tmp_path / f"{idx}_a.out"
        second = tmp_path / f"{idx}_b.out"
        code_a = cli_main(argv + ["--output", str(first)])
        code_b = cli_main(argv + ["--output", str(second)])
        if code_a != code_b:
            failures.append((argv[0], "exit codes", code_a, code_b))
        if first.read_bytes() != second.read_bytes():
            failures.append((argv[0], "bytes differ"))
    ok = not failures
    _line(10, ok, f"{len(commands)} commands re-run")
    assert ok, failures
