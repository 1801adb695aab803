"""
Sumas de caracteres de Legendre y sesgo del flujo de símbolos con semilla.

Todas las sumas se acumulan como enteros exactos; la división por 2^H se
hace al final con ``Fraction``.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from config.config import PLAN_CONFIG, VERIFY_CONFIG
from src.construct.rng import make_rng, random_bits
from src.ntheory.modular import jacobi_symbol, legendre_stream, table_pays_off
from src.ntheory.primes import is_prime
from src.verify.enumeration import BudgetExceededError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CharSumCheck:
    p: int
    k: int
    offsets: Tuple[int, ...]
    t: int
    sum_value: int
    bound_value: float
    soft: bool

    @property
    def passed(self) -> bool:
        return abs(self.sum_value) <= self.bound_value


@dataclass(frozen=True)
class BiasReport:
    index_set: Tuple[int, ...]
    p: int
    H: int
    exact_bias: Optional[Fraction]
    sampled_bias: Optional[float]
    standard_error: Optional[float]
    theorem3_bound: float
    chain_bound: Optional[float]
    in_chain_regime: bool
    n_samples: Optional[int] = None
    rng_seed: Optional[int] = None

    @property
    def value(self) -> float:
        """Valor absoluto del sesgo (exacto o estimado)."""
        if self.exact_bias is not None:
            return float(abs(self.exact_bias))
        return abs(self.sampled_bias)

    @property
    def theorem3_holds(self) -> bool:
        return self.value <= self.theorem3_bound

    @property
    def chain_holds(self) -> Optional[bool]:
        if self.chain_bound is None:
            return None
        return self.value <= self.chain_bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index_set": list(self.index_set),
            "p": self.p,
            "H": self.H,
            "exact_bias": None if self.exact_bias is None else str(self.exact_bias),
            "sampled_bias": self.sampled_bias,
            "standard_error": self.standard_error,
            "theorem3_bound": self.theorem3_bound,
            "chain_bound": self.chain_bound,
            "in_chain_regime": self.in_chain_regime,
        }


def charsum_bound(p: int, k: int) -> float:
    """9 k √p log p (logaritmo natural)."""
    return PLAN_CONFIG["charsum_constant"] * k * math.sqrt(p) * math.log(p)


def _require_odd_prime(p: int) -> None:
    prime, _ = is_prime(p)
    if not prime or p % 2 == 0:
        raise ValueError(f"p debe ser un primo impar: {p}")


def _symbols(start: int, count: int, p: int) -> np.ndarray:
    return legendre_stream(start, count, p).astype(np.int64)


def charsum_check(p: int, offsets: Sequence[int], t: int) -> CharSumCheck:
    """
    Suma Σ_{n=0}^{t-1} ∏_k ((n + d_k)/p) comparada con 9 k √p log p.

    Args:
        p: Primo impar.
        offsets: 0 < d_1 < ... < d_k < p.
        t: 1 <= t <= p - d_k.

    Returns:
        CharSumCheck; por debajo de p = 10^4 el resultado es informativo.
    """
    offsets = tuple(int(d) for d in offsets)
    _require_odd_prime(p)
    if not offsets:
        raise ValueError("Se requiere al menos un desplazamiento")
    if any(b <= a for a, b in zip(offsets, offsets[1:])):
        raise ValueError(f"Los desplazamientos deben ser estrictamente crecientes: {offsets}")
    if offsets[0] <= 0 or offsets[-1] >= p:
        raise ValueError(f"Se requiere 0 < d_1 y d_k < p: {offsets}")
    if not 1 <= t <= p - offsets[-1]:
        raise ValueError(f"Se requiere 1 <= t <= p - d_k: t={t}")

    stream = _symbols(offsets[0], t + offsets[-1] - offsets[0], p)
    product = np.ones(t, dtype=np.int64)
    for d in offsets:
        start = d - offsets[0]
        product *= stream[start:start + t]
    total = int(product.sum())
    check = CharSumCheck(
        p=p, k=len(offsets), offsets=offsets, t=t, sum_value=total,
        bound_value=charsum_bound(p, len(offsets)),
        soft=p < VERIFY_CONFIG["charsum_soft_below"],
    )
    if not check.passed:
        level = logging.INFO if check.soft else logging.ERROR
        logger.log(level, f"Cota de suma de caracteres violada: p={p}, offsets={offsets}, t={t}, suma={total}")
    return check


def _validate_bias_args(p: int, H: int, index_set: Sequence[int]) -> Tuple[int, ...]:
    index_set = tuple(sorted(set(int(i) for i in index_set)))
    if not index_set:
        raise ValueError("El sesgo ε se define para conjuntos I no vacíos")
    if H < 1:
        raise ValueError(f"H debe ser >= 1: {H}")
    if index_set[0] < 1:
        raise ValueError(f"Los índices de I deben ser >= 1: {index_set}")
    _require_odd_prime(p)
    if index_set[-1] + 2 ** H - 1 >= p:
        raise ValueError(f"max(I) + 2^H - 1 >= p: un símbolo nulo sería posible (p={p}, H={H})")
    return index_set


def _bounds(p: int, H: int, size: int, N: Optional[int]) -> Tuple[float, Optional[float]]:
    theorem3 = size * math.sqrt(p) * math.log(p) / 2 ** H
    chain = None if N is None else 4 * N ** 2 * 2 ** (-H / 3)
    return theorem3, chain


def bias_exact(p: int, H: int, index_set: Sequence[int], N: Optional[int] = None,
               max_bits: Optional[int] = None) -> BiasReport:
    """
    Sesgo exacto |(1/2^H) Σ_{x=0}^{2^H-1} ∏_{i∈I} ((x+i)/p)|.

    Args:
        p: Primo impar.
        H: Bits de la semilla.
        index_set: Conjunto I no vacío de enteros >= 1.
        N: Columnas, para adjuntar la cota 4 N^2 2^(-H/3).
        max_bits: Presupuesto de enumeración en bits.

    Returns:
        BiasReport con el sesgo como fracción exacta.
    """
    index_set = _validate_bias_args(p, H, index_set)
    max_bits = VERIFY_CONFIG["bias_bits_budget"] if max_bits is None else max_bits
    if H > max_bits:
        raise BudgetExceededError(2 ** H, 2 ** max_bits, "bias_sampled")

    size = 2 ** H
    first = index_set[0]
    stream = _symbols(first, size + index_set[-1] - first, p)
    product = np.ones(size, dtype=np.int64)
    for i in index_set:
        start = i - first
        product *= stream[start:start + size]
    exact = Fraction(int(product.sum()), size)
    theorem3, chain = _bounds(p, H, len(index_set), N)
    report = BiasReport(
        index_set=index_set, p=p, H=H, exact_bias=exact, sampled_bias=None,
        standard_error=None, theorem3_bound=theorem3, chain_bound=chain,
        in_chain_regime=p <= 4 * size,
    )
    if not report.theorem3_holds:
        logger.warning(f"Sesgo {exact} por encima de la cota de suma de caracteres (p={p}, H={H})")
    return report


def bias_sampled(p: int, H: int, index_set: Sequence[int], n_samples: int, rng_seed: int,
                 N: Optional[int] = None) -> BiasReport:
    """
    Estimación Monte Carlo del sesgo con x uniforme en [0, 2^H).

    Args:
        p: Primo impar.
        H: Bits de la semilla (sin presupuesto de enumeración).
        index_set: Conjunto I no vacío de enteros >= 1.
        n_samples: Número de muestras.
        rng_seed: Semilla del generador Philox.
        N: Columnas, para adjuntar la cota de la cadena.

    Returns:
        BiasReport con la media muestral y su error estándar.
    """
    index_set = _validate_bias_args(p, H, index_set)
    if n_samples < 1:
        raise ValueError(f"n_samples debe ser >= 1: {n_samples}")
    rng = make_rng(rng_seed)
    use_table = table_pays_off(n_samples * (index_set[-1] + 1), p)
    values = np.empty(n_samples, dtype=np.int64)
    for s in range(n_samples):
        x = random_bits(rng, H)
        if use_table:
            values[s] = int(np.prod(legendre_stream(x, index_set[-1] + 1, p, use_table=True)[list(index_set)].astype(np.int64)))
        else:
            values[s] = math.prod(jacobi_symbol(x + i, p) for i in index_set)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    theorem3, chain = _bounds(p, H, len(index_set), N)
    return BiasReport(
        index_set=index_set, p=p, H=H, exact_bias=None, sampled_bias=mean,
        standard_error=stderr, theorem3_bound=theorem3, chain_bound=chain,
        in_chain_regime=p <= 4 * 2 ** H, n_samples=n_samples, rng_seed=rng_seed,
    )
