import math

import numpy as np
import pytest

from src.codes.biased import legendre_biased_set
from src.construct.ensemble_factory import EnsembleFactory
from src.construct.ensembles import LegendreDeterministicEnsemble
from src.construct.matrices import (
    Provenance,
    ProvenanceKind,
    Seed,
    SeedSource,
    SignMatrix,
    build_bernoulli_baseline,
    build_legendre_deterministic,
    build_legendre_seeded,
    build_small_bias,
    desk_params,
    rederive,
)
from src.construct.matrix_io import MatrixFormatError, dumps_matrix, loads_matrix, read_matrix, write_matrix
from src.construct.params import count_disjoint_pairs, plan_parameters
from src.construct.rng import make_rng, random_bits, random_support
from src.ntheory.modular import legendre_symbol
from src.ntheory.primes import next_prime_geq


def chain_holds(N, K, delta, H):
    L = max(math.log(K), 1.0)
    lhs = math.log(4) + 2 * math.log(N) - (H / 3) * math.log(2)
    rhs = -40 * K * math.log((150 / delta) * K * L) * math.log(N)
    return lhs <= rhs


# --- planificación -----------------------------------------------------------

def test_plan_parameters_formulas():
    N, K, delta = 1000, 5, 0.5
    params = plan_parameters(N, K, delta)
    expected_M = math.ceil((5760000 / delta ** 2) * K * math.log(K) ** 2 * math.log(N))
    assert params.M == expected_M
    assert chain_holds(N, K, delta, params.H)
    assert not chain_holds(N, K, delta, params.H - 1)
    assert params.p_min == 2 ** params.H + params.M * N
    assert params.clamps == []
    assert params.failure_probability == pytest.approx(2 * N ** (-2 * K))
    assert params.theta_target == pytest.approx(delta / (150 * math.log(K)))
    assert params.eps_required == 0.0 or params.eps_required == pytest.approx(math.exp(params.log_eps_required))


def test_plan_clamps_small_k():
    params = plan_parameters(100, 2, 1.0)
    assert len(params.clamps) == 1
    assert params.M == math.ceil(5760000 * 2 * math.log(100))


def test_plan_is_monotone_in_k():
    plans = [plan_parameters(1000, K, 0.5) for K in range(1, 9)]
    for smaller, larger in zip(plans, plans[1:]):
        assert larger.M >= smaller.M
        assert larger.H >= smaller.H


def test_plan_overrides_are_flagged():
    params = plan_parameters(50, 3, 0.5, M_override=10, H_override=20)
    assert (params.M, params.H) == (10, 20)
    assert params.m_overridden and params.h_overridden
    assert params.to_dict()["p_min"] == hex(2 ** 20 + 500)


@pytest.mark.parametrize("N,K,delta", [(10, 2, 0.0), (10, 2, 1.5), (4, 8, 0.5), (1, 1, 0.5), (10, 0, 0.5)])
def test_plan_rejects_invalid(N, K, delta):
    with pytest.raises(ValueError):
        plan_parameters(N, K, delta)


def test_count_disjoint_pairs():
    assert count_disjoint_pairs(3, 1) == 6
    brute = 0
    N, K = 5, 2
    for I in range(1, 2 ** N):
        for J in range(1, 2 ** N):
            if I & J == 0 and bin(I).count("1") <= K and bin(J).count("1") <= K:
                brute += 1
    assert count_disjoint_pairs(N, K) == brute


# --- construcción ------------------------------------------------------------

def test_seeded_squares_mod_23():
    matrix = build_legendre_seeded(desk_params(2, 2, 4), Seed(0, 4), 23)
    assert matrix.signs.tolist() == [[1, 1], [1, 1]]


def test_deterministic_squares_mod_7():
    matrix = build_legendre_deterministic(1, 6, 7)
    assert matrix.signs.tolist() == [[1, 1, -1, 1, -1, -1]]


def test_column_major_layout():
    M, N, X, H = 3, 4, 5, 3
    p, _ = next_prime_geq(2 ** H + M * N)
    matrix = build_legendre_seeded(desk_params(M, N, H), Seed(X, H), p)
    for m in range(M):
        for n in range(N):
            assert matrix.signs[m, n] == legendre_symbol(X + M * n + m + 1, p)
    assert matrix.stream().tolist() == [legendre_symbol(X + i + 1, p) for i in range(M * N)]


def test_construction_refusals():
    with pytest.raises(ValueError):
        build_legendre_deterministic(2, 3, 5)
    with pytest.raises(ValueError):
        build_legendre_deterministic(1, 6, 9)
    with pytest.raises(ValueError):
        build_legendre_seeded(desk_params(2, 2, 4), Seed(0, 4), 19)
    with pytest.raises(ValueError):
        build_legendre_seeded(desk_params(2, 2, 4), Seed(0, 5), 23)
    with pytest.raises(ValueError):
        Seed(16, 4)


def test_seed_sources():
    seed = Seed.from_hex("ff", 8)
    assert seed.X == 255 and seed.source is SeedSource.EXTERNAL_HEX
    with pytest.raises(ValueError):
        Seed.from_hex("100", 8)
    with pytest.raises(ValueError):
        Seed.from_hex("zz", 8)
    a, b = Seed.generate(70, 3), Seed.generate(70, 3)
    assert a.X == b.X and a.source is SeedSource.GENERATED
    assert 0 <= a.X < 2 ** 70


def test_no_zero_entries_on_random_constructions():
    rng = np.random.default_rng(12345)
    for _ in range(100):
        M = int(rng.integers(1, 20))
        N = int(rng.integers(1, 20))
        H = int(rng.integers(1, 13))
        p, _ = next_prime_geq(2 ** H + M * N)
        X = int(rng.integers(0, 2 ** H))
        matrix = build_legendre_seeded(desk_params(M, N, H), Seed(X, H), p)
        symbols = [legendre_symbol(X + i + 1, p) for i in range(M * N)]
        assert 0 not in symbols
        assert matrix.stream().tolist() == symbols


def test_sign_matrix_packing_and_gram():
    signs = np.array([[1, -1, 1], [-1, -1, 1]], dtype=np.int8)
    matrix = SignMatrix.from_signs(signs, Provenance(ProvenanceKind.SMALL_BIAS, q=1, draw=0))
    assert matrix.signs.tolist() == signs.tolist()
    assert matrix.gram.tolist() == (signs.T.astype(int) @ signs.astype(int)).tolist()
    assert np.allclose(np.linalg.norm(matrix.dense(), axis=0), 1.0)
    with pytest.raises(ValueError):
        SignMatrix.from_signs(np.array([[1, 0]]), matrix.provenance)


def test_bernoulli_is_reproducible():
    a = build_bernoulli_baseline(8, 8, 7)
    b = build_bernoulli_baseline(8, 8, 7)
    c = build_bernoulli_baseline(8, 8, 8)
    assert a.signs.tolist() == b.signs.tolist()
    assert a.signs.tolist() != c.signs.tolist()
    assert a.provenance.generator == "philox"


def test_bernoulli_column_is_balanced():
    for seed in range(5):
        matrix = build_bernoulli_baseline(1000, 1, seed)
        assert set(np.unique(matrix.signs).tolist()) <= {-1, 1}
        assert -0.15 <= float(matrix.signs.mean()) <= 0.15


def test_small_bias_matches_seeded_legendre():
    M, N, H = 2, 3, 3
    p, _ = next_prime_geq(2 ** H + M * N)
    biased = legendre_biased_set(p, H, M * N)
    for draw in range(2 ** H):
        small = build_small_bias(M, N, biased, draw)
        seeded = build_legendre_seeded(desk_params(M, N, H), Seed(draw, H), p)
        assert small.signs.tolist() == seeded.signs.tolist()
    with pytest.raises(ValueError):
        build_small_bias(M, N, biased, 2 ** H)
    with pytest.raises(ValueError):
        build_small_bias(3, 3, biased, 0)


def test_rederive():
    seeded = build_legendre_seeded(desk_params(3, 3, 5), Seed(7, 5), next_prime_geq(41)[0])
    assert rederive(seeded) == seeded
    assert rederive(build_legendre_deterministic(2, 2, 5)).signs.tolist() == [[1, -1], [-1, 1]]
    assert rederive(build_bernoulli_baseline(3, 4, 1)) == build_bernoulli_baseline(3, 4, 1)
    small = SignMatrix.from_signs(np.ones((1, 1)), Provenance(ProvenanceKind.SMALL_BIAS, q=1, draw=0))
    assert rederive(small) is None


# --- formato RIPM v1 ---------------------------------------------------------

def test_ripm_text_for_seeded_matrix():
    matrix = build_legendre_seeded(desk_params(2, 2, 4), Seed(0, 4), 23)
    assert dumps_matrix(matrix) == "RIPM 1 2 2 legendre-seeded\np 17\nx 0\nh 4\n+ +\n+ +\n"


def test_ripm_file_round_trip(tmp_path):
    path = tmp_path / "m.ripm"
    for matrix in (
        build_legendre_deterministic(3, 5, 17),
        build_bernoulli_baseline(4, 6, 99),
        build_legendre_seeded(desk_params(2, 3, 6), Seed(0x2a, 6), next_prime_geq(70)[0]),
    ):
        write_matrix(matrix, path)
        assert read_matrix(path) == matrix


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("RIPM 2 1 1 legendre-deterministic\np 5\n+\n", 1),
    ("RIPM 1 1 1 unknown\n+\n", 1),
    ("RIPM 1 1 2 legendre-deterministic\np 5\n+ x\n", 3),
    ("RIPM 1 2 1 legendre-deterministic\np 5\n+\n", 4),
    ("RIPM 1 1 1 legendre-deterministic\np 1D\n+\n", 2),
    ("RIPM 1 1 1 legendre-deterministic\nq 5\n+\n", 2),
    ("RIPM 1 1 1 legendre-deterministic\np 5\n+\nextra\n", 4),
])
def test_ripm_parse_errors_carry_line(text, line):
    with pytest.raises(MatrixFormatError) as info:
        loads_matrix(text)
    assert info.value.line == line


# --- generadores y familias --------------------------------------------------

def test_rng_streams():
    a = make_rng(5, 1, 2)
    b = make_rng(5, 1, 2)
    c = make_rng(5, 2, 1)
    assert random_bits(a, 200) == random_bits(b, 200)
    assert random_bits(make_rng(5, 1, 2), 64) != random_bits(c, 64)
    assert random_bits(a, 0) == 0
    support = random_support(make_rng(1), 10, 4)
    assert len(set(support)) == 4 and list(support) == sorted(support)
    with pytest.raises(ValueError):
        make_rng(-1)


def test_ensemble_factory():
    factory = EnsembleFactory()
    assert factory.names == ["bernoulli", "legendre-deterministic", "legendre-seeded"]
    with pytest.raises(ValueError):
        factory.get_ensemble("gaussian")

    seeded = factory.get_ensemble("legendre-seeded", H=6, p=None)
    assert seeded.H == 6 and seeded.p is None
    trial = seeded.build_trial(3, 4, make_rng(0))
    assert trial.provenance.kind is ProvenanceKind.LEGENDRE_SEEDED
    assert trial.provenance.p >= 2 ** 6 + 12

    bern = factory.get_ensemble("bernoulli", H=6, p=7)
    assert bern.build_trial(3, 4, make_rng(1)) == bern.build_trial(3, 4, make_rng(1))

    det = factory.get_ensemble("legendre-deterministic")
    assert isinstance(det, LegendreDeterministicEnsemble)
    first = det.build_trial(2, 3, make_rng(0))
    assert det.build_trial(2, 3, make_rng(1)) is first
    assert first.provenance.p == 7
