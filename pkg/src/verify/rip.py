"""
Verificación de coherencia (cota de Welch), constantes RIP exactas o
muestreadas y ortogonalidad restringida plana (FRO).

Las submatrices de Gram son diminutas (tamaño <= 2K), así que cada lote de
soportes se resuelve con un único ``numpy.linalg.eigvalsh`` apilado.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config.config import PLAN_CONFIG, VERIFY_CONFIG
from src.construct.matrices import SignMatrix
from src.construct.params import clamped_log, count_disjoint_pairs
from src.construct.rng import make_rng, random_support
from src.verify.enumeration import (
    Candidate,
    Support,
    better,
    check_budget,
    chunked,
    colex_combinations,
    count_supports,
    parallel_reduce,
    rounded,
)

logger = logging.getLogger(__name__)

WELCH_SLACK = 1e-12


class RipMode(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class CoherenceReport:
    mu: float
    welch_floor: float
    worst_pair: Tuple[int, int]

    @property
    def holds(self) -> bool:
        return self.mu >= self.welch_floor - WELCH_SLACK


@dataclass(frozen=True)
class RipReport:
    K_checked: int
    delta_exact: Optional[float]
    delta_lower_bound: float
    worst_support: Support
    mode: RipMode
    supports_checked: int
    n_samples: Optional[int] = None
    rng_seed: Optional[int] = None


@dataclass(frozen=True)
class FroReport:
    K_checked: int
    theta_emp: float
    worst_pair: Tuple[Support, Support]
    delta_via_thm2: float
    pairs_checked: int


def welch_floor(M: int, N: int) -> float:
    """√max(0, (N - M) / (M (N - 1)))."""
    return math.sqrt(max(0.0, (N - M) / (M * (N - 1))))


def coherence(matrix: SignMatrix) -> CoherenceReport:
    """
    Coherencia μ = max_{n≠n'} |<φ_n, φ_n'>| y su cota de Welch.

    Args:
        matrix: Matriz de signos con al menos dos columnas.

    Returns:
        CoherenceReport con el par de columnas que alcanza μ.
    """
    M, N = matrix.rows, matrix.cols
    if N < 2:
        raise ValueError(f"La coherencia requiere N >= 2: {N}")
    off = np.abs(matrix.gram).copy()
    np.fill_diagonal(off, -1)
    # argmax recorre en orden de filas: primer par lexicográfico
    flat = int(np.argmax(off))
    i, j = divmod(flat, N)
    mu = int(off[i, j]) / M
    return CoherenceReport(mu=mu, welch_floor=welch_floor(M, N), worst_pair=(i, j))


def _gram_deviation(matrix: SignMatrix, supports: np.ndarray) -> np.ndarray:
    """||G_S - I|| espectral para un lote de soportes del mismo tamaño."""
    sub = matrix.gram[supports[:, :, None], supports[:, None, :]] / matrix.rows
    eig = np.linalg.eigvalsh(sub)
    return np.maximum(np.maximum(eig[:, -1] - 1.0, 1.0 - eig[:, 0]), 0.0)


def _best_in_batch(values: np.ndarray, witness_at: Callable[[int], Tuple]) -> Optional[Candidate]:
    if len(values) == 0:
        return None
    top = float(values.max())
    near = np.nonzero(values >= top - abs(top) * 1e-9)[0]
    best = None
    for index in near:
        best = better(best, (float(values[index]), witness_at(int(index))))
    return best


def _support_chunks(N: int, K: int, size: int) -> Iterator[List[Support]]:
    for k in range(1, K + 1):
        yield from chunked(colex_combinations(N, k), size)


def _evaluate_supports(matrix: SignMatrix):
    def evaluate(chunk: Sequence[Support]) -> Optional[Candidate]:
        # Todos los soportes de un trozo comparten tamaño
        supports = np.asarray(chunk, dtype=np.int64)
        return _best_in_batch(_gram_deviation(matrix, supports), chunk.__getitem__)
    return evaluate


def rip_constant(matrix: SignMatrix, K: int, mode: RipMode = RipMode.EXHAUSTIVE,
                 n_samples: int = 1000, rng_seed: int = 0,
                 budget: Optional[int] = None, workers: Optional[int] = None) -> RipReport:
    """
    Constante de isometría restringida δ_K.

    En modo exhaustivo recorre todos los soportes |S| <= K (orden colex) y
    devuelve el valor exacto; en modo muestreado evalúa ``n_samples``
    soportes uniformes de tamaño K y devuelve una cota inferior.

    Args:
        matrix: Matriz de signos.
        K: Tamaño máximo de soporte.
        mode: exhaustive o sampled.
        n_samples: Soportes a muestrear en modo sampled.
        rng_seed: Semilla del muestreo.
        budget: Tope de soportes en modo exhaustivo.
        workers: Hilos para la enumeración.

    Returns:
        RipReport con el soporte peor (desempate lexicográfico).
    """
    mode = RipMode(mode)
    if K < 1:
        raise ValueError(f"K debe ser >= 1: {K}")
    N = matrix.cols
    K_eff = min(K, N)
    chunk_size = VERIFY_CONFIG["chunk_size"]
    evaluate = _evaluate_supports(matrix)

    if mode is RipMode.EXHAUSTIVE:
        required = count_supports(N, K_eff)
        check_budget(required, budget, "el modo sampled")
        logger.info(f"RIP exhaustivo: {required} soportes, K={K_eff}, matriz {matrix.rows}x{N}")
        best = parallel_reduce(_support_chunks(N, K_eff, chunk_size), evaluate, workers)
        value = rounded(best[0])
        return RipReport(K_eff, value, value, best[1], mode, required)

    if n_samples < 1:
        raise ValueError(f"n_samples debe ser >= 1: {n_samples}")
    rng = make_rng(rng_seed)
    supports = [random_support(rng, N, K_eff) for _ in range(n_samples)]
    best = parallel_reduce(chunked(supports, chunk_size), evaluate, workers)
    logger.info(f"RIP muestreado: {n_samples} soportes, cota inferior {best[0]:.6g}")
    return RipReport(K_eff, None, rounded(best[0]), best[1], mode, n_samples, n_samples, rng_seed)


def fro_constant(matrix: SignMatrix, K: int, budget: Optional[int] = None,
                 workers: Optional[int] = None) -> FroReport:
    """
    Constante empírica de ortogonalidad restringida plana:
    θ = max |<Σ_I φ_i, Σ_J φ_j>| / √(|I||J|) sobre pares disjuntos no vacíos
    con |I|, |J| <= K.

    Args:
        matrix: Matriz de signos.
        K: Tamaño máximo de cada conjunto.
        budget: Tope de pares (ordenados).
        workers: Hilos para la enumeración.

    Returns:
        FroReport con el par peor y la conversión δ = 150 θ max(log K, 1).
    """
    if K < 1:
        raise ValueError(f"K debe ser >= 1: {K}")
    M, N = matrix.rows, matrix.cols
    if N < 2:
        raise ValueError(f"FRO requiere N >= 2: {N}")
    K_eff = min(K, N - 1)
    required = count_disjoint_pairs(N, K_eff)
    check_budget(required, budget, "un K menor")
    gram = matrix.gram
    candidates = {b: np.array(list(colex_combinations(N, b)), dtype=np.int64) for b in range(1, K_eff + 1)}

    def evaluate(chunk: Sequence[Support]) -> Optional[Candidate]:
        best = None
        for I in chunk:
            row = gram[list(I)].sum(axis=0)
            for b, J in candidates.items():
                disjoint = ~np.isin(J, I).any(axis=1)
                if not disjoint.any():
                    continue
                Jd = J[disjoint]
                theta = np.abs(row[Jd].sum(axis=1)) / M / math.sqrt(len(I) * b)
                best = better(best, _best_in_batch(theta, lambda i: (I, tuple(int(j) for j in Jd[i]))))
        return best

    logger.info(f"FRO exhaustivo: {required} pares ordenados, K={K_eff}")
    sets = (I for k in range(1, K_eff + 1) for I in colex_combinations(N, k))
    best = parallel_reduce(chunked(sets, 64), evaluate, workers)
    theta = rounded(best[0])
    delta = PLAN_CONFIG["fro_to_rip"] * theta * clamped_log(K_eff)
    return FroReport(K_eff, theta, best[1], rounded(delta), required)
