"""
Enumeración de soportes en orden colex, troceado para ejecución paralela y
reducción determinista (máximo con desempate lexicográfico).
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from config.config import VERIFY_CONFIG

logger = logging.getLogger(__name__)

T = TypeVar("T")

Support = Tuple[int, ...]


class BudgetExceededError(ValueError):
    """La enumeración exhaustiva supera el presupuesto configurado."""

    def __init__(self, required: int, budget: int, alternative: str):
        self.required = required
        self.budget = budget
        self.alternative = alternative
        super().__init__(
            f"Se requieren {required} casos y el presupuesto es {budget}; use {alternative}"
        )


def count_supports(N: int, K: int) -> int:
    """C(N,1) + ... + C(N,K)."""
    return sum(math.comb(N, k) for k in range(1, min(K, N) + 1))


def check_budget(required: int, budget: Optional[int], alternative: str) -> None:
    """Lanza BudgetExceededError si ``required`` supera el presupuesto."""
    budget = VERIFY_CONFIG["support_budget"] if budget is None else budget
    if required > budget:
        logger.error(f"Presupuesto excedido: {required} > {budget}")
        raise BudgetExceededError(required, budget, alternative)


def colex_combinations(N: int, k: int) -> Iterator[Support]:
    """
    Combinaciones de tamaño k de range(N) en orden colexicográfico.

    Cada combinación se devuelve ordenada de forma creciente.
    """
    if k == 0:
        yield ()
        return
    for top in range(k - 1, N):
        for rest in colex_combinations(top, k - 1):
            yield rest + (top,)


def chunked(items: Iterable[T], size: int) -> Iterator[List[T]]:
    """Agrupa un iterable en listas de tamaño ``size``."""
    iterator = iter(items)
    while True:
        chunk = list(itertools.islice(iterator, size))
        if not chunk:
            return
        yield chunk


def rounded(value: float) -> float:
    """Redondea a las cifras significativas de los informes."""
    if value == 0 or not math.isfinite(value):
        return value
    digits = VERIFY_CONFIG["significant_digits"]
    return float(f"{value:.{digits}g}")


Candidate = Tuple[float, Tuple]


def better(a: Optional[Candidate], b: Optional[Candidate]) -> Optional[Candidate]:
    """
    Reducción asociativa y conmutativa: mayor valor (redondeado) y, a
    igualdad, el testigo lexicográficamente menor.
    """
    if a is None:
        return b
    if b is None:
        return a
    ra, rb = rounded(a[0]), rounded(b[0])
    if ra != rb:
        return a if ra > rb else b
    return a if a[1] <= b[1] else b


def parallel_reduce(chunks: Iterable[Sequence[T]],
                    evaluate: Callable[[Sequence[T]], Optional[Candidate]],
                    workers: Optional[int] = None) -> Optional[Candidate]:
    """
    Evalúa cada trozo (posiblemente en hilos) y reduce con ``better``.

    El resultado no depende del número de hilos porque la reducción es
    asociativa y conmutativa.

    Args:
        chunks: Trozos de trabajo.
        evaluate: Función que devuelve el mejor candidato de un trozo.
        workers: Número de hilos; por defecto VERIFY_CONFIG['workers'].

    Returns:
        El mejor candidato global o None si no hubo trabajo.
    """
    workers = VERIFY_CONFIG["workers"] if workers is None else workers
    best: Optional[Candidate] = None
    if workers <= 1:
        for chunk in chunks:
            best = better(best, evaluate(chunk))
        return best
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for candidate in pool.map(evaluate, chunks):
            best = better(best, candidate)
    return best


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """
    Transformada de Walsh-Hadamard entera (sin normalizar) de un arreglo de
    longitud 2^n: W[I] = Σ_g values[g] (-1)^{|g & I|}.
    """
    a = np.asarray(values, dtype=np.int64).copy()
    size = a.shape[0]
    if size & (size - 1):
        raise ValueError(f"La longitud debe ser potencia de 2: {size}")
    h = 1
    while h < size:
        a = a.reshape((-1, 2, h))
        x, y = a[:, 0, :], a[:, 1, :]
        a = np.stack((x + y, x - y), axis=1).reshape(-1)
        h *= 2
    return a
