import numpy as np
import pytest

import lowrank


def test_svd_roundtrip():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((8, 5)) + 1j * rng.standard_normal((8, 5))
    u, s, v, rank = lowrank.svd(a)
    assert rank == 5
    recon = u @ np.diag(s) @ np.conj(v).T
    assert np.linalg.norm(recon - a) < 1e-10 * np.linalg.norm(a)


def test_rank1_example():
    p = np.diag([4.0, 1.0])
    assert lowrank.heavy_split([4.0, 1.0], 1) == 0
    plan = lowrank.build_plan([4.0, 1.0], 1)
    assert plan["k"] == 0
    assert plan["c"] == pytest.approx(5.0)
    assert plan["inclusion_prob"] == pytest.approx([0.8, 0.2])

    q, index_set, diag, s = lowrank.sample_low_rank(p, 1, seed=7)
    assert index_set in ([0], [1])
    expected = np.diag([5.0, 0.0]) if index_set == [0] else np.diag([0.0, 5.0])
    assert np.allclose(q, expected, atol=1e-12)
    assert 0.0 <= s < 1.0

    assert lowrank.expected_distortion([4.0, 1.0], 1) == pytest.approx(8.0)
    assert lowrank.lower_bound([4.0, 1.0], 1) == pytest.approx(8.0)

    outcomes = lowrank.enumerate_outcomes([4.0, 1.0], 1)
    assert outcomes[0] == ([0], pytest.approx(0.8))
    assert outcomes[1] == ([1], pytest.approx(0.2))


def test_unbiasedness_and_distortion():
    p = np.diag([4.0, 1.0]).astype(complex)
    mean, stderr = lowrank.empirical_distortion(p, 1, 20000, seed=5)
    assert abs(mean - 8.0) < 4 * 12.0 / np.sqrt(20000)
    rep = lowrank.empirical_unbiasedness(p, 1, 20000, seed=5)
    assert rep["exceedances"] <= 1


def test_determinism():
    rng = np.random.default_rng(1)
    p = rng.standard_normal((6, 6))
    q1, i1, d1, s1 = lowrank.sample_low_rank(p, 2, seed=42, stream=3)
    q2, i2, d2, s2 = lowrank.sample_low_rank(p, 2, seed=42, stream=3)
    assert np.array_equal(q1, q2)
    assert i1 == i2 and s1 == s2


def test_verify_optimality_sweep():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(1, 10))
        d = np.sort(rng.uniform(0.1, 10.0, n))[::-1].tolist()
        for r in range(1, n + 1):
            rep = lowrank.verify_optimality(d, r)
            assert rep["expected_distortion"] == pytest.approx(
                rep["lower_bound"], rel=1e-10, abs=1e-10
            )
