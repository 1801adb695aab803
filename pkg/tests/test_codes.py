from fractions import Fraction

import numpy as np
import pytest

from src.codes.biased import (
    BiasedSet,
    BinaryCode,
    WeightWindowError,
    biased_to_code,
    code_to_biased,
    entropy_lower_bound,
    legendre_biased_set,
    welch_entropy_check,
)
from src.codes.code_io import (
    CodeFormatError,
    dumps_biased,
    dumps_code,
    loads_biased,
    loads_code,
    read_code,
    write_code,
)
from src.ntheory.modular import legendre_symbol
from src.ntheory.primes import next_prime_geq
from src.verify.enumeration import BudgetExceededError


def random_code(rng, n, q):
    while True:
        try:
            return BinaryCode(rng.integers(0, 2, size=(n, q)))
        except ValueError:
            continue


def brute_bias(vectors):
    """max sobre I no vacío de |(1/q) Σ_x ∏ x_i| recorriendo todas las máscaras."""
    q, n = vectors.shape
    best = Fraction(0)
    for mask in range(1, 2 ** n):
        cols = [i for i in range(n) if mask >> i & 1]
        total = int(np.prod(vectors[:, cols].astype(int), axis=1).sum())
        best = max(best, Fraction(abs(total), q))
    return best


# --- conversión código <-> conjunto sesgado ----------------------------------

def test_code_to_biased_matches_weight_window():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(1, 8))
        q = int(rng.integers(n, 40))
        code = random_code(rng, n, q)
        biased, eps = code_to_biased(code)
        worst = max(abs(q - 2 * sum(code.codeword(m))) for m in range(1, 2 ** n))
        assert eps == Fraction(worst, q)
        assert biased.exact_bias()[0] == eps
        assert brute_bias(biased.vectors) == eps


def test_round_trip_up_to_column_order():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(1, 11))
        q = int(rng.integers(n, 65))
        code = random_code(rng, n, q)
        biased, eps = code_to_biased(code)
        conversion = biased_to_code(biased)
        assert not conversion.degenerate
        assert conversion.eps_star == eps
        assert conversion.code.generator.tolist() == code.canonical().generator.tolist()


def test_weight_window_violation():
    code = BinaryCode(np.array([[1, 1, 1]]))
    with pytest.raises(WeightWindowError) as info:
        code_to_biased(code, Fraction(1, 2))
    assert info.value.weight == 3
    assert info.value.codeword == (1, 1, 1)
    biased, eps = code_to_biased(code, Fraction(1))
    assert eps == 1


def test_degenerate_set_returns_certificate():
    biased = BiasedSet(np.array([[1, 1, -1], [-1, -1, 1], [1, 1, 1]]))
    conversion = biased_to_code(biased)
    assert conversion.degenerate
    assert conversion.certificate == (0, 1)
    assert conversion.certificate_bias == 1


def test_dependent_generator_rejected():
    with pytest.raises(ValueError):
        BinaryCode(np.array([[1, 0, 1], [1, 0, 1]]))
    with pytest.raises(ValueError):
        BinaryCode(np.array([[0, 2]]))


def test_exhaustive_limit():
    biased = BiasedSet(np.ones((2, 21), dtype=np.int8))
    with pytest.raises(BudgetExceededError):
        biased.exact_bias()


# --- Welch y entropía --------------------------------------------------------

def test_welch_entropy_on_random_sets():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(2, 8))
        q = int(rng.integers(1, 2 ** n + 8))
        vectors = rng.choice(np.array([-1, 1], dtype=np.int8), size=(q, n))
        check = welch_entropy_check(BiasedSet(vectors))
        assert check.holds
        assert check.lhs == check.eps_star ** 2
        if q <= 2 ** (n - 1):
            assert check.corollary_applies and check.corollary_holds
        else:
            assert check.corollary_holds is None
        assert check.entropy_holds


def test_welch_is_tight_for_full_cube():
    n = 4
    cube = np.array([[1 - 2 * (x >> i & 1) for i in range(n)] for x in range(2 ** n)])
    check = welch_entropy_check(BiasedSet(cube))
    assert check.eps_star == 0
    assert check.rhs == 0
    assert check.entropy_bound == n - 1


def test_entropy_lower_bound():
    assert entropy_lower_bound(10, 0.25) == 2.0
    assert entropy_lower_bound(3, 2 ** -10) == 2
    with pytest.raises(ValueError):
        entropy_lower_bound(4, 0.0)


def test_legendre_biased_set():
    H, n = 3, 5
    p, _ = next_prime_geq(2 ** H + n)
    biased = legendre_biased_set(p, H, n)
    assert biased.q == 2 ** H and biased.n == n
    for x in range(2 ** H):
        assert biased.vectors[x].tolist() == [legendre_symbol(x + i, p) for i in range(1, n + 1)]
    with pytest.raises(ValueError):
        legendre_biased_set(11, 3, 4)


# --- formatos CODE y BIASED --------------------------------------------------

def test_code_text_format():
    code = BinaryCode(np.array([[1, 0, 1], [0, 1, 1]]))
    text = dumps_code(code)
    assert text == "CODE v1 2 3\n101\n011\n"
    assert loads_code(text).generator.tolist() == code.generator.tolist()


def test_biased_text_format():
    biased = BiasedSet(np.array([[1, -1], [-1, -1], [1, 1]]))
    text = dumps_biased(biased)
    assert text == "BIASED v1 2 3\n+-\n--\n++\n"
    assert loads_biased(text).vectors.tolist() == biased.vectors.tolist()


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("CODE v2 1 2\n10\n", 1),
    ("CODE v1 x 2\n10\n", 1),
    ("CODE v1 2 2\n10\n", 3),
    ("CODE v1 1 2\n1a\n", 2),
    ("CODE v1 1 2\n10\n01\n", 3),
    ("CODE v1 2 2\n11\n11\n", 2),
])
def test_code_parse_errors_carry_line(text, line):
    with pytest.raises(CodeFormatError) as info:
        loads_code(text)
    assert info.value.line == line


def test_biased_parse_errors_carry_line():
    with pytest.raises(CodeFormatError) as info:
        loads_biased("BIASED v1 2 2\n++\n+x\n")
    assert info.value.line == 3


def test_code_file(tmp_path):
    code = random_code(np.random.default_rng(0), 4, 12)
    path = tmp_path / "g.code"
    write_code(code, path)
    assert read_code(path).generator.tolist() == code.generator.tolist()
