"""
Correspondencia entre conjuntos ε-sesgados y códigos lineales binarios
balanceados, y cota inferior de entropía derivada de la cota de Welch.

Todos los sesgos se calculan con sumas enteras exactas (transformada de
Walsh-Hadamard del histograma de patrones) y se dividen al final como
``Fraction``.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from config.config import VERIFY_CONFIG
from src.ntheory.modular import legendre_stream
from src.verify.enumeration import BudgetExceededError, walsh_hadamard

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_VARS = 20


class WeightWindowError(ValueError):
    """Un codeword no nulo cae fuera de la ventana de pesos [(1-ε)q/2, (1+ε)q/2]."""

    def __init__(self, message: Tuple[int, ...], codeword: Tuple[int, ...], weight: int, eps: Fraction):
        self.message = message
        self.codeword = codeword
        self.weight = weight
        self.eps = eps
        q = len(codeword)
        super().__init__(
            f"Codeword {''.join(map(str, codeword))} (mensaje {message}) tiene peso {weight}, "
            f"fuera de [{(1 - eps) * q / 2}, {(1 + eps) * q / 2}]"
        )


def _require_exhaustive(n: int) -> None:
    if n > MAX_EXHAUSTIVE_VARS:
        raise BudgetExceededError(2 ** n, 2 ** MAX_EXHAUSTIVE_VARS, "un n menor (enumeración exhaustiva)")


def _pattern_histogram(patterns: np.ndarray, n: int) -> np.ndarray:
    """Histograma de enteros de n bits."""
    return np.bincount(patterns, minlength=2 ** n).astype(np.int64)


def _bits_to_ints(bits: np.ndarray) -> np.ndarray:
    """Filas de bits (q, n) a enteros con el bit i en la posición i."""
    weights = (1 << np.arange(bits.shape[1], dtype=np.int64))
    return (bits.astype(np.int64) * weights).sum(axis=1)


@dataclass(frozen=True, eq=False)
class BiasedSet:
    """Multiconjunto explícito de q vectores de signos de longitud n."""

    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.int8)
        if vectors.ndim != 2 or vectors.shape[0] < 1 or vectors.shape[1] < 1:
            raise ValueError(f"Se esperaba un arreglo (q, n) no vacío, forma {vectors.shape}")
        if not np.all(np.abs(vectors) == 1):
            raise ValueError("Los vectores deben tener entradas ±1")
        vectors = vectors.copy()
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @property
    def q(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def n(self) -> int:
        return int(self.vectors.shape[1])

    def correlation_sums(self) -> np.ndarray:
        """S[I] = Σ_x ∏_{i∈I} x_i para todo I (como máscara de bits), exacto."""
        _require_exhaustive(self.n)
        patterns = _bits_to_ints(self.vectors < 0)
        return walsh_hadamard(_pattern_histogram(patterns, self.n))

    def exact_bias(self) -> Tuple[Fraction, Tuple[int, ...]]:
        """
        Sesgo exacto ε* = max_{I no vacío} |(1/q) Σ_x ∏_{i∈I} x_i|.

        Returns:
            Tupla (ε*, I) con I el menor conjunto (como máscara) que lo alcanza.
        """
        sums = np.abs(self.correlation_sums())
        sums[0] = -1
        mask = int(np.argmax(sums))
        return Fraction(int(sums[mask]), self.q), mask_to_indices(mask)

    def bias_of(self, index_set: Tuple[int, ...]) -> Fraction:
        """Sesgo con signo de un único conjunto de índices."""
        if not index_set:
            raise ValueError("El sesgo se define para conjuntos no vacíos")
        product = np.prod(self.vectors[:, list(index_set)].astype(np.int64), axis=1)
        return Fraction(int(product.sum()), self.q)


def mask_to_indices(mask: int) -> Tuple[int, ...]:
    """Máscara de bits a tupla de índices ordenada."""
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _gf2_reduce(rows: List[int]) -> Tuple[int, Optional[Tuple[int, ...]]]:
    """
    Eliminación gaussiana sobre GF(2) con filas como enteros.

    Returns:
        Tupla (rango, dependencia) donde la dependencia es el primer conjunto
        de filas cuya suma es cero, o None si son independientes.
    """
    pivots = {}
    dependency = None
    for index, row in enumerate(rows):
        tag = 1 << index
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = (row, tag)
                break
            prow, ptag = pivots[top]
            row ^= prow
            tag ^= ptag
        if not row and dependency is None:
            dependency = mask_to_indices(tag)
    return len(pivots), dependency


@dataclass(frozen=True, eq=False)
class BinaryCode:
    """Código lineal binario de dimensión n y longitud q dado por su generadora n x q."""

    generator: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=np.uint8)
        if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
            raise ValueError(f"Se esperaba una generadora (n, q) no vacía, forma {g.shape}")
        if not np.all(g <= 1):
            raise ValueError("La generadora debe contener solo 0 y 1")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)
        rank, dependency = _gf2_reduce(self.row_ints())
        if dependency is not None:
            raise ValueError(f"Las filas de la generadora son dependientes: {dependency}")

    @property
    def n(self) -> int:
        return int(self.generator.shape[0])

    @property
    def q(self) -> int:
        return int(self.generator.shape[1])

    def row_ints(self) -> List[int]:
        return [int("".join(map(str, row[::-1])), 2) for row in self.generator]

    def signed_weights(self) -> np.ndarray:
        """W[x] = q - 2 peso(xG) para cada mensaje x (como máscara de bits)."""
        _require_exhaustive(self.n)
        columns = _bits_to_ints(self.generator.T)
        return walsh_hadamard(_pattern_histogram(columns, self.n))

    @property
    def weight_spectrum(self) -> np.ndarray:
        """Pesos de los 2^n codewords, indexados por mensaje."""
        return (self.q - self.signed_weights()) // 2

    def codeword(self, message_mask: int) -> Tuple[int, ...]:
        """Codeword xG para el mensaje dado como máscara de bits."""
        selected = [i for i in range(self.n) if message_mask >> i & 1]
        word = np.bitwise_xor.reduce(self.generator[selected], axis=0) if selected else np.zeros(self.q, np.uint8)
        return tuple(int(b) for b in word)

    def canonical(self) -> "BinaryCode":
        """Generadora con las columnas ordenadas lexicográficamente."""
        order = sorted(range(self.q), key=lambda j: tuple(self.generator[:, j]))
        return BinaryCode(self.generator[:, order])


def code_to_biased(code: BinaryCode, eps: Optional[Fraction] = None) -> Tuple[BiasedSet, Fraction]:
    """
    Código a conjunto sesgado: las q columnas de G, con b -> (-1)^b, forman un conjunto
    ε-sesgado.

    Args:
        code: Código con generadora n x q.
        eps: Ventana de pesos declarada; por defecto la mínima posible.

    Returns:
        Tupla (conjunto, ε* exacto), con ε* <= eps.
    """
    signed = code.signed_weights()
    spread = np.abs(signed)
    spread[0] = -1
    worst = int(np.argmax(spread))
    eps_star = Fraction(int(spread[worst]), code.q)
    if eps is not None:
        eps = Fraction(eps)
        if eps_star > eps:
            word = code.codeword(worst)
            logger.error(f"Ventana de pesos violada por el mensaje {mask_to_indices(worst)}")
            raise WeightWindowError(mask_to_indices(worst), word, sum(word), eps)

    biased = BiasedSet(1 - 2 * code.generator.T.astype(np.int8))
    exact, _ = biased.exact_bias()
    if exact != eps_star:
        raise ArithmeticError(f"Sesgo {exact} distinto de la ventana de pesos {eps_star}")
    return biased, eps_star


@dataclass(frozen=True)
class CodeConversion:
    """Resultado de biased_to_code: código canónico o certificado de degeneración."""

    code: Optional[BinaryCode]
    eps_star: Fraction
    certificate: Optional[Tuple[int, ...]] = None
    certificate_bias: Optional[Fraction] = None

    @property
    def degenerate(self) -> bool:
        return self.code is None


def biased_to_code(biased: BiasedSet) -> CodeConversion:
    """
    Conjunto sesgado a código: la matriz cuyas columnas son los patrones g (x_i = (-1)^{g_i})
    genera un código de dimensión n con pesos en la ventana de ε*.

    Si las filas son dependientes se devuelve el certificado I con sesgo 1.
    """
    eps_star, _ = biased.exact_bias()
    generator = (biased.vectors < 0).astype(np.uint8).T
    rows = [int("".join(map(str, row[::-1])), 2) for row in generator]
    _, dependency = _gf2_reduce(rows)
    if dependency is not None:
        bias = abs(biased.bias_of(dependency))
        logger.warning(f"Conjunto degenerado: índices {dependency} perfectamente correlacionados")
        return CodeConversion(None, eps_star, dependency, bias)

    code = BinaryCode(generator).canonical()
    weights = code.weight_spectrum[1:]
    q = code.q
    low, high = (1 - eps_star) * q / 2, (1 + eps_star) * q / 2
    if np.any(weights < low) or np.any(weights > high):
        raise ArithmeticError("Pesos fuera de la ventana de ε*")
    return CodeConversion(code, eps_star)


def entropy_lower_bound(n: int, eps: float) -> float:
    """
    Cota de entropía H >= min(log2(1/ε), n - 1), en bits.

    Args:
        n: Número de variables.
        eps: Sesgo en (0, 1].
    """
    if not 0 < eps <= 1:
        raise ValueError(f"eps debe estar en (0, 1]: {eps}")
    return min(math.log2(1 / eps), n - 1)


@dataclass(frozen=True)
class WelchEntropyCheck:
    n: int
    q: int
    eps_star: Fraction
    lhs: Fraction
    rhs: Fraction
    holds: bool
    corollary_applies: bool
    corollary_holds: Optional[bool]
    entropy_bits: float
    entropy_bound: float
    entropy_holds: bool


def welch_entropy_check(biased: BiasedSet) -> WelchEntropyCheck:
    """
    Comprueba ε*^2 >= (2^n - q) / (q (2^n - 1)) con aritmética racional y,
    si q <= 2^(n-1), el corolario ε*^2 >= 1/(2q).
    """
    n, q = biased.n, biased.q
    eps_star, _ = biased.exact_bias()
    lhs = eps_star ** 2
    rhs = Fraction(2 ** n - q, q * (2 ** n - 1)) if n >= 1 else Fraction(0)
    applies = q <= 2 ** (n - 1)
    corollary = lhs >= Fraction(1, 2 * q) if applies else None
    bound = float(n - 1) if eps_star == 0 else entropy_lower_bound(n, float(eps_star))
    bits = math.log2(q)
    return WelchEntropyCheck(
        n=n, q=q, eps_star=eps_star, lhs=lhs, rhs=rhs, holds=lhs >= rhs,
        corollary_applies=applies, corollary_holds=corollary,
        entropy_bits=bits, entropy_bound=bound, entropy_holds=bits >= bound - 1e-12,
    )


def legendre_biased_set(p: int, H: int, n: int) -> BiasedSet:
    """
    Conjunto {(((x+i)/p))_{i=1..n} : x = 0..2^H-1}, de tamaño q = 2^H.

    Args:
        p: Primo impar con n + 2^H - 1 < p.
        H: Bits de entropía.
        n: Longitud de los vectores.
    """
    if H > VERIFY_CONFIG["bias_bits_budget"]:
        raise BudgetExceededError(2 ** H, 2 ** VERIFY_CONFIG["bias_bits_budget"], "un H menor")
    if n < 1:
        raise ValueError(f"n debe ser >= 1: {n}")
    if n + 2 ** H - 1 >= p:
        raise ValueError(f"Se requiere n + 2^H - 1 < p (n={n}, H={H}, p={p})")
    stream = legendre_stream(1, 2 ** H + n - 1, p)
    windows = np.lib.stride_tricks.sliding_window_view(stream, n)[: 2 ** H]
    return BiasedSet(np.ascontiguousarray(windows))
