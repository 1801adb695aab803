import math

import numpy as np
import pandas as pd
import pytest

from src.construct.matrices import Provenance, ProvenanceKind, SignMatrix, build_bernoulli_baseline
from src.recovery.omp import RecoveryError, omp_recover
from src.recovery.sweep import SWEEP_COLUMNS, phase_sweep
from src.verify.rip import rip_constant


def from_signs(signs):
    return SignMatrix.from_signs(np.asarray(signs, dtype=np.int8),
                                 Provenance(ProvenanceKind.SMALL_BIAS, q=1, draw=0))


def hadamard(order):
    h = np.array([[1]])
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return h


# --- OMP ---------------------------------------------------------------------

def test_exact_recovery_with_orthonormal_columns():
    matrix = from_signs(hadamard(8))
    x = np.zeros(8)
    x[[1, 4, 6]] = [2.0, -1.5, 0.5]
    result = omp_recover(matrix, matrix.dense() @ x, 3)
    assert result.support == (1, 4, 6)
    assert result.selection_order == (1, 4, 6)
    assert np.allclose(result.values, [2.0, -1.5, 0.5])
    assert np.allclose(result.dense(), x)
    assert result.residual_norms[-1] == pytest.approx(0.0, abs=1e-12)


def test_zero_measurement_gives_empty_support():
    matrix = build_bernoulli_baseline(6, 10, 3)
    result = omp_recover(matrix, np.zeros(6), 4)
    assert result.support == ()
    assert result.residual_norms == (0.0,)
    assert not result.dense().any()


def test_residual_is_nonincreasing_and_deterministic():
    matrix = build_bernoulli_baseline(16, 32, 21)
    y = np.random.default_rng(4).standard_normal(16)
    first = omp_recover(matrix, y, 8)
    norms = first.residual_norms
    assert len(norms) == 9
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))
    assert omp_recover(matrix, y, 8) == first
    assert list(first.support) == sorted(first.selection_order)


def test_noise_tolerance_stops_early():
    matrix = from_signs(hadamard(4))
    y = matrix.dense()[:, 2] * 3
    result = omp_recover(matrix, y, 4, noise_tol=1e-9)
    assert result.support == (2,)
    assert len(result.residual_norms) == 2


@pytest.mark.parametrize("K,kwargs", [(5, {}), (-1, {}), (2, {"noise_tol": -1.0})])
def test_omp_rejects_bad_arguments(K, kwargs):
    matrix = build_bernoulli_baseline(4, 6, 0)
    with pytest.raises(ValueError):
        omp_recover(matrix, np.ones(4), K, **kwargs)


def test_omp_rejects_wrong_length():
    with pytest.raises(ValueError):
        omp_recover(build_bernoulli_baseline(4, 6, 0), np.ones(5), 1)


def test_singular_selection_raises():
    matrix = from_signs(np.ones((4, 2)))
    y = hadamard(4)[:, 1] / 2.0
    with pytest.raises(RecoveryError) as info:
        omp_recover(matrix, y, 2)
    assert info.value.partial_support == (0,)
    assert info.value.column == 1


def test_condition_ceiling_applies_to_gram_matrix():
    # cond(A_S) = √3, cond(A_S^T A_S) = 3
    matrix = from_signs([[1, 1], [1, 1], [1, 1], [1, -1]])
    dense = matrix.dense()
    y = dense[:, 0] + dense[:, 1]
    with pytest.raises(RecoveryError) as info:
        omp_recover(matrix, y, 2, max_condition=2.0)
    assert info.value.partial_support == (0,)
    assert info.value.column == 1
    assert info.value.condition == pytest.approx(3.0)
    result = omp_recover(matrix, y, 2, max_condition=4.0)
    assert result.support == (0, 1)
    assert np.allclose(result.values, [1.0, 1.0])


def test_recovery_guaranteed_by_small_rip_constant():
    cases = [(from_signs(hadamard(32)), 32), (build_bernoulli_baseline(30, 60, 2024), 60)]
    for matrix, N in cases:
        delta4 = rip_constant(matrix, 4).delta_exact
        assert 0.0 <= delta4 < 4.0
        rng = np.random.default_rng(N)
        for _ in range(10):
            support = tuple(sorted(rng.choice(N, size=2, replace=False).tolist()))
            x = np.zeros(N)
            x[list(support)] = rng.choice([-1.0, 1.0], size=2)
            try:
                result = omp_recover(matrix, matrix.dense() @ x, 2)
            except RecoveryError:
                assert delta4 >= 0.3
                continue
            if delta4 < 0.3:
                assert result.support == support
                assert np.allclose(result.dense(), x, atol=1e-8)


# --- barrido de fase ---------------------------------------------------------

def test_phase_sweep_table():
    table = phase_sweep("bernoulli", 8, 16, [0, 1, 2, 9], trials=5, rng_seed=17)
    assert list(table.columns) == SWEEP_COLUMNS
    assert table["K"].tolist() == [0, 1, 2, 9]
    zero = table.iloc[0]
    assert zero["success_rate"] == 1.0 and zero["successes"] == 5
    skipped = table.iloc[3]
    assert math.isnan(skipped["success_rate"])
    assert skipped["note"] == "skipped: K > min(M, N)"
    assert table["success_rate"].iloc[:3].between(0.0, 1.0).all()


def test_phase_sweep_is_reproducible():
    kwargs = dict(M=8, N=12, K_range=range(1, 4), trials=6, rng_seed=99)
    one = phase_sweep("legendre-seeded", workers=1, H=8, **kwargs)
    again = phase_sweep("legendre-seeded", workers=3, H=8, **kwargs)
    pd.testing.assert_frame_equal(one, again)


def test_phase_sweep_rejects_bad_arguments():
    with pytest.raises(ValueError):
        phase_sweep("bernoulli", 4, 8, [1], trials=0, rng_seed=1)
    with pytest.raises(ValueError):
        phase_sweep("bernoulli", 4, 8, [-1], trials=1, rng_seed=1)
    with pytest.raises(ValueError):
        phase_sweep("gaussian", 4, 8, [1], trials=1, rng_seed=1)


def test_phase_sweep_describes_family():
    table = phase_sweep("bernoulli", 4, 8, [1], trials=1, rng_seed=3)
    assert table.attrs["ensemble"] == {"ensemble": "bernoulli"}
    table = phase_sweep("legendre-deterministic", 4, 8, [1], trials=1, rng_seed=3)
    assert table.attrs["ensemble"] == {"ensemble": "legendre-deterministic", "p": None}
    table = phase_sweep("legendre-seeded", 4, 8, [1], trials=1, rng_seed=3, H=8, p=1021)
    assert table.attrs["ensemble"] == {"ensemble": "legendre-seeded", "H": 8, "p": hex(1021)}
