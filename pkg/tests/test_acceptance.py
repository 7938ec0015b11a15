"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""

import json
import time
from functools import lru_cache

import numpy
import pytest

from conftest import (haar_unitary, hausdorff_to_shape, nearest_match, random_matrix,
                      random_normal, subset_hull_intersection)
from hrnr import ranges
from hrnr.cli import cli_dispatch
from hrnr.errors import NumericalError
from hrnr.gallery import NAMED, diag_pair, nine_point_diagonal, superdiag
from hrnr.geometry import hausdorff_convex
from hrnr.io import write_matrix
from hrnr.kippenhahn import TrivariatePoly, kippenhahn_poly, kippenhahn_poly_exact, poly_equal, poly_eval
from hrnr.linalg import commutator_norm, frobenius_norm
from hrnr.ranges import rank_k_range, support_profile
from hrnr.structure import normality_test, real_linear_factors, theorem1_check, v_sets

SUITE_GRID = 128
PAIR_GRID = 128
PAIRS_PER_CLASS = 200


def record(log, number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    print(line)
    log.append(line)
    return ok


def cold_caches():
    ranges._sweep_cached.cache_clear()
    ranges._planes_cached.cache_clear()


# the random draws are shared with the invariant checks (criteria 8 and 9)

@lru_cache(maxsize=None)
def equivalence_pairs():
    rng = numpy.random.default_rng(101)
    pairs = {'unitary': [], 'perturbed': [], 'transpose': []}
    for i in range(PAIRS_PER_CLASS):
        n = 2 + i % 7
        A = random_matrix(rng, n)
        U = haar_unitary(rng, n)
        pairs['unitary'].append((A, U @ A @ U.conj().T))
        pairs['transpose'].append((A, A.T.copy()))
        while True:
            B = U @ A @ U.conj().T + 0.01 * random_matrix(rng, n)
            if not poly_equal(kippenhahn_poly(A), kippenhahn_poly(B))[0]:
                break
        pairs['perturbed'].append((A, B))
    return pairs


@lru_cache(maxsize=None)
def fit_draws():
    rng = numpy.random.default_rng(202)
    return [random_matrix(rng, 1 + i % 6) * rng.uniform(0.1, 10) for i in range(100)]


@lru_cache(maxsize=None)
def normal_range_draws():
    rng = numpy.random.default_rng(303)
    out = []
    for i in range(50):
        n = 2 + i % 7
        ev = None
        if i % 5 == 4:
            # lattice eigenvalues: repeats and collinear triples
            ev = rng.integers(-2, 3, size=n) + 1j * rng.integers(-2, 3, size=n)
        out.append(random_normal(rng, n, ev))
    return out


@lru_cache(maxsize=None)
def normality_draws():
    rng = numpy.random.default_rng(404)
    out = []
    for i in range(500):
        n = 1 + i % 8
        kind = i % 4
        if kind == 0:
            A, _ = random_normal(rng, n)
        elif kind == 1:
            ev = rng.integers(-2, 3, size=n) + 1j * rng.integers(-2, 3, size=n)
            A, _ = random_normal(rng, n, ev.astype(complex))
        elif kind == 2:
            A = random_matrix(rng, n)
        else:
            # non-normal with a repeated eigenvalue: a unitarily hidden Jordan-type block
            T = numpy.triu(random_matrix(rng, n))
            numpy.fill_diagonal(T, rng.integers(-1, 2, size=n))
            U = haar_unitary(rng, n)
            A = U @ T @ U.conj().T
        out.append(A)
    return out


def suite_matrices():
    mats = [make() for make in NAMED.values()]
    for cls in equivalence_pairs().values():
        for A, B in cls:
            mats += [A, B]
    mats += list(fit_draws())
    mats += [A for A, _ in normal_range_draws()]
    mats += list(normality_draws())
    return mats


def test_criterion_1_superdiagonal_pair(acceptance_log, tmp_path):
    A, B = superdiag(1.0, 2.0), superdiag(2.0, 1.0)
    pa, pb = str(tmp_path / 'a.json'), str(tmp_path / 'b.json')
    write_matrix(pa, A)
    write_matrix(pb, B)
    cold_caches()
    start = time.perf_counter()
    code = cli_dispatch(['compare', pa, pb, '--report', str(tmp_path / 'r.json')])
    elapsed = time.perf_counter() - start
    report = json.load(open(tmp_path / 'r.json'))
    conds = all(report['conditions'][c]['holds'] for c in 'abc') and report['consistent']

    target = TrivariatePoly.from_terms(3, [(0, 0, 3, 1.0), (2, 0, 1, -1.25), (0, 2, 1, -1.25)])
    coeff_dev = max(float(numpy.max(numpy.abs(kippenhahn_poly(M).coeffs - target.coeffs)))
                    for M in (A, B))
    R1, R2, R3 = (rank_k_range(A, k) for k in (1, 2, 3))
    radius_err = abs(R1.chebyshev_radius - numpy.sqrt(5) / 2)
    point_ok = R2.classification == 'point' and abs(R2.vertices[0]) <= 1e-6
    ok = (code == 0 and conds and coeff_dev <= 1e-9 and radius_err <= 1e-6 and point_ok
          and R3.is_empty and elapsed < 1.0)
    record(acceptance_log, 1, ok,
           f'conditions all true={conds}, coeff dev {coeff_dev:.1e}, radius err {radius_err:.1e}, '
           f'Lambda_2 {R2.classification}, Lambda_3 {R3.classification}, compare {elapsed:.3f} s')
    assert ok


def test_criterion_2_diagonal_pair(acceptance_log):
    A, B = diag_pair()
    RA, RB = rank_k_range(A, 1), rank_k_range(B, 1)
    seg = max(hausdorff_convex(R.vertices, [0, 1]) for R in (RA, RB))
    segs = RA.classification == RB.classification == 'segment'
    QA, QB = rank_k_range(A, 2), rank_k_range(B, 2)
    pts = nearest_match(QA.vertices, [1], 1e-6) and nearest_match(QB.vertices, [0], 1e-6)
    residual = ranges.region_distance(QA, QB)
    report = theorem1_check(A, B, strict=False)
    all_false = not (report.cond_a or report.cond_b or report.cond_c)
    # z (x + z)^2 and z^2 (x + z)
    pa = TrivariatePoly.from_terms(3, [(0, 0, 3, 1.0), (1, 0, 2, 2.0), (2, 0, 1, 1.0)])
    pb = TrivariatePoly.from_terms(3, [(0, 0, 3, 1.0), (1, 0, 2, 1.0)])
    dev = max(float(numpy.max(numpy.abs(kippenhahn_poly(A).coeffs - pa.coeffs))),
              float(numpy.max(numpy.abs(kippenhahn_poly(B).coeffs - pb.coeffs))))
    ok = (segs and seg <= 1e-6 and pts and abs(residual - 1) <= 1e-6 and all_false
          and report.consistent and dev <= 1e-9)
    record(acceptance_log, 2, ok,
           f'segments {segs} (Hausdorff {seg:.1e}), Lambda_2 residual {residual:.9f}, '
           f'all conditions false={all_false}, coeff dev {dev:.1e}')
    assert ok


def test_criterion_3_nine_point_diagonal(acceptance_log):
    D = nine_point_diagonal()
    c = (1 + 1j) / 3
    hulls = {1: [1, 1j, -1, -1j],
             2: [0.5, 0.5j, -0.5, -0.5j, c, c * 1j, -c, -c * 1j],
             3: [0, 0.25, 0.25j, c],
             4: [0]}
    cold_caches()
    start = time.perf_counter()
    regions = {k: rank_k_range(D, k, 1024) for k in range(1, 10)}
    V = v_sets(D, 1024)
    factors = real_linear_factors(D)
    elapsed = time.perf_counter() - start

    verts = all(nearest_match(regions[k].vertices, pts, 1e-6) for k, pts in hulls.items())
    cornered = all(nearest_match(regions[k].corners, pts, 1e-6) for k, pts in hulls.items() if k < 4)
    empty = all(regions[k].is_empty for k in range(5, 10))
    vs = (nearest_match(V.sets[1], hulls[1], 1e-6)
          and nearest_match(V.sets[2], [0.5, 0.5j, -0.5, -0.5j], 1e-6)
          and nearest_match(V.sets[3], [c], 1e-6) and V.sets[4] == ())
    mult = [f.multiplicity for f in factors if abs(f.point - c) < 1e-9]
    ok = verts and cornered and empty and vs and mult == [1] and elapsed < 5.0
    record(acceptance_log, 3, ok,
           f'vertex sets {verts}, corner sets {cornered}, empty for k>=5 {empty}, V-sets {vs}, '
           f'multiplicity of (1+i)/3 {mult}, {elapsed:.2f} s at N=1024')
    assert ok


def test_criterion_4_equivalence_suite(acceptance_log):
    pairs = equivalence_pairs()
    counts = {}
    consistent = total = 0
    for cls, items in pairs.items():
        true = 0
        for A, B in items:
            r = theorem1_check(A, B, PAIR_GRID, strict=False)
            consistent += r.consistent
            total += 1
            true += r.verdict
        counts[cls] = true
    ok = (consistent == total and counts['unitary'] == len(pairs['unitary'])
          and counts['perturbed'] == 0)
    record(acceptance_log, 4, ok,
           f'consistent {consistent}/{total}; all-true unitary {counts["unitary"]}/{PAIRS_PER_CLASS}, '
           f'perturbed {counts["perturbed"]}/{PAIRS_PER_CLASS}, transpose {counts["transpose"]}/'
           f'{PAIRS_PER_CLASS} (N={PAIR_GRID})')
    assert ok


def test_criterion_5_fit_matches_expansion(acceptance_log):
    worst = 0.0
    for A in fit_draws():
        _, residual = poly_equal(kippenhahn_poly(A), kippenhahn_poly_exact(A))
        worst = max(worst, residual)
    ok = worst <= 1e-9
    record(acceptance_log, 5, ok, f'worst relative coefficient deviation {worst:.2e} over 100 matrices')
    assert ok


def test_criterion_6_normal_ranges(acceptance_log):
    worst = 0.0
    mismatched = 0
    for A, ev in normal_range_draws():
        n = len(ev)
        for k in range(1, n + 1):
            R = rank_k_range(A, k)
            ref = subset_hull_intersection(ev, k)
            if ref is None or R.is_empty:
                mismatched += (ref is None) != R.is_empty
                continue
            worst = max(worst, hausdorff_to_shape(R.vertices, ref))
    ok = mismatched == 0 and worst <= 1e-5
    record(acceptance_log, 6, ok,
           f'worst Hausdorff {worst:.2e}, emptiness mismatches {mismatched} over 50 matrices')
    assert ok


def test_criterion_7_normality(acceptance_log):
    agree = 0
    raised = 0
    draws = normality_draws()
    for A in draws:
        truth = commutator_norm(A) <= 1e-10
        try:
            agree += normality_test(A) == truth
        except NumericalError:
            raised += 1
    ok = agree == len(draws)
    record(acceptance_log, 7, ok,
           f'agreement {agree}/{len(draws)} ({raised} numerical errors)')
    assert ok


def test_criterion_8_weyl_bound(acceptance_log):
    violations = profiles = 0
    gallery = [(make(), 1024) for make in NAMED.values()]
    for A, N in gallery + [(A, SUITE_GRID) for A in suite_matrices()]:
        for k in range(1, A.shape[0] + 1):
            violations += support_profile(A, k, N).weyl_violations()
            profiles += 1
    ok = violations == 0
    record(acceptance_log, 8, ok, f'{violations} violations over {profiles} support profiles')
    assert ok


def test_criterion_9_root_consistency(acceptance_log):
    worst = 0.0
    count = 0
    for A in suite_matrices():
        n = A.shape[0]
        p = kippenhahn_poly(A)
        thetas = ranges.uniform_grid(SUITE_GRID)
        c, s = numpy.cos(thetas), numpy.sin(thetas)
        bound = 1e-8 * (1 + frobenius_norm(A)) ** n
        for k in range(1, n + 1):
            alpha = support_profile(A, k, SUITE_GRID).values
            worst = max(worst, float(numpy.max(numpy.abs(poly_eval(p, c, s, -alpha)))) / bound)
        count += 1
    ok = worst <= 1.0
    record(acceptance_log, 9, ok,
           f'worst |p(cos, sin, -alpha_k)| / bound = {worst:.2e} over {count} matrices')
    assert ok
