"""Exit criteria, one test each, with their tolerances and runtime budgets.

A PASS/FAIL line per criterion is printed in the terminal summary (see conftest.py).
Run alone with ``pytest tests/test_acceptance.py``.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from bellwit.bisep import (
    biseparable_closed,
    biseparable_upper_bruteforce,
    d_sums,
    mod_circulant_spectrum,
    planar_vector_lower_bound,
)
from bellwit.optimize import seesaw_quantum_max
from bellwit.quantum import bell_value, canonical_angles, ghz_correlators, no_signalling_limit, quantum_lower_bound
from bellwit.tensor import build_cosine_tensor, build_parity_tensor, nonzero_count
from bellwit.witness import Verdict, certify, simulate_noisy_ghz, sweep, threshold_for, threshold_visibility

pytestmark = pytest.mark.acceptance


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, budget {seconds}s"


def test_ac01_mermin_recovery(record_property):
    record_property("criterion", "AC1 Mermin recovery (m=2, delta=0)")
    with budget(1):
        t = build_cosine_tensor(2, 0.0)
        q = bell_value(t, ghz_correlators(canonical_angles(t)))
        assert abs(quantum_lower_bound(t) - 4) < 1e-9 and abs(q - 4) < 1e-9
        b = biseparable_upper_bruteforce(t).value
        assert abs(b - 2 * math.sqrt(2)) < 1e-9
        assert abs(biseparable_closed(t) - 2 * math.sqrt(2)) < 1e-9
        assert abs(threshold_visibility(t) - 1 / math.sqrt(2)) < 1e-9


def test_ac02_bancal_recovery(record_property):
    record_property("criterion", "AC2 Bancal recovery (m=3, delta=-1/2)")
    with budget(1):
        t = build_cosine_tensor(3, -0.5)
        assert abs(biseparable_closed(t) - 9) < 1e-9
        assert abs(biseparable_upper_bruteforce(t).value - 9) < 1e-9
        assert abs(quantum_lower_bound(t) - 13.5) < 1e-9
        assert abs(bell_value(t, ghz_correlators(canonical_angles(t))) - 13.5) < 1e-9
        assert abs(threshold_visibility(t) - 2 / 3) < 1e-9
        assert nonzero_count(t) == 18


def test_ac03_cosine_three_way_agreement(record_property):
    record_property("criterion", "AC3 cosine bounds agree three ways, m=2..8")
    with budget(60):
        for m in range(2, 9):
            t = build_cosine_tensor(m)
            brute = biseparable_upper_bruteforce(t).value
            closed = m**2 / (2 * math.sin(math.pi / (2 * m)))
            planar = planar_vector_lower_bound(t)
            assert abs(brute - closed) < 1e-9, m
            assert abs(closed - planar) < 1e-9, m
            assert abs(brute - planar) < 1e-9, m
            assert abs(biseparable_closed(t) - closed) < 1e-9, m


def test_ac04_parity_family(record_property):
    record_property("criterion", "AC4 parity family, m in {2,4,8}")
    with budget(60):
        for m in (2, 4, 8):
            t = build_parity_tensor(m)
            q = bell_value(t, ghz_correlators(canonical_angles(t)))
            assert abs(q - m * m) < 1e-9
            assert quantum_lower_bound(t) == nonzero_count(t) == no_signalling_limit(t) == m * m
            closed = m / math.sin(math.pi / (2 * m))
            assert abs(biseparable_closed(t) - closed) < 1e-9
            assert abs(biseparable_upper_bruteforce(t).value - closed) < 1e-9
            assert abs(planar_vector_lower_bound(t) - closed) < 1e-9
        assert nonzero_count(build_parity_tensor(4)) == 16
        assert abs(threshold_visibility(build_parity_tensor(4)) - 0.65328) <= 1e-5


def test_ac05_odd_parity_degeneracy(record_property):
    record_property("criterion", "AC5 odd-m parity bound reaches no-signalling limit")
    with budget(10):
        for m in (3, 5, 7):
            t = build_parity_tensor(m)
            assert abs(biseparable_upper_bruteforce(t).value - m * m) < 1e-9
            assert no_signalling_limit(t) == m * m


def test_ac06_asymptotics(record_property):
    record_property("criterion", "AC6 threshold tends to 2/pi; strictly decreasing m=2..100")
    with budget(1):
        assert abs(threshold_for("cosine", 10**6) - 2 / math.pi) < 1e-10
        v = np.array([row[3] for row in sweep("cosine", 2, 100)])
        assert np.all(np.diff(v) < 0)


def _negacyclic(c):
    m = len(c)
    return np.array([[c[g - b] if g >= b else -c[m + g - b] for g in range(m)] for b in range(m)])


def test_ac07_negacyclic_spectrum(record_property):
    record_property("criterion", "AC7 negacyclic spectrum: eigen-equation and SVD, 200 matrices")
    rng = np.random.default_rng(7)
    with budget(10):
        for k in range(200):
            m = int(rng.integers(2, 13))
            row = rng.choice([-1.0, 1.0], m) if k % 2 else rng.normal(size=m)
            mat = _negacyclic(row)[:, ::-1]
            spec = mod_circulant_spectrum(mat)
            for j in range(m):
                v = spec.eigenvector(j)
                assert np.max(np.abs(spec.reordered @ v - spec.eigenvalues[j] * v)) < 1e-9
            sv = np.linalg.svd(mat, compute_uv=False)
            assert np.max(np.abs(np.sort(np.abs(spec.eigenvalues)) - np.sort(sv))) < 1e-9


def test_ac08_d_sum_cancellations(record_property):
    record_property("criterion", "AC8 trigonometric D-sum identities, m=2..12")
    with budget(1):
        for m in range(2, 13):
            d1, d2, d3, d4 = d_sums(m)
            assert np.max(np.abs(d2)) < 1e-9 and np.max(np.abs(d3)) < 1e-9
            if m > 2:
                assert np.max(np.abs(d1[1:m - 1])) < 1e-9 and np.max(np.abs(d4[1:m - 1])) < 1e-9
            assert abs(d1[0] - m / 2) < 1e-9 and abs(d4[0] - m / 2) < 1e-9
            assert abs(d1[m - 1] - m / 2) < 1e-9 and abs(d4[m - 1] + m / 2) < 1e-9


def test_ac09_seesaw_evidence(record_property):
    record_property("criterion", "AC9 see-saw reaches lower bound, stays under no-signalling limit")
    with budget(120):
        for m in range(2, 6):
            t = build_cosine_tensor(m)
            r = seesaw_quantum_max(t, restarts=20, seed=2024)
            assert r.value >= m**3 / 2 - 1e-6, (m, r.value)
            assert r.value <= no_signalling_limit(t) + 1e-9
        for m in (2, 4):
            t = build_parity_tensor(m)
            r = seesaw_quantum_max(t, restarts=20, seed=2024)
            assert r.value >= m * m - 1e-6
            assert r.value <= no_signalling_limit(t) + 1e-9


def test_ac10_certification_flip_point(record_property):
    record_property("criterion", "AC10 certification flips at the threshold visibility, m=2..6")
    with budget(10):
        for m in range(2, 7):
            t = build_cosine_tensor(m)
            lo, hi = 0.0, 1.0
            while hi - lo > 1e-10:
                mid = 0.5 * (lo + hi)
                if certify(t, simulate_noisy_ghz(t, mid)).verdict is Verdict.GENUINE:
                    hi = mid
                else:
                    lo = mid
            assert abs(hi - threshold_visibility(t)) < 1e-8, m
