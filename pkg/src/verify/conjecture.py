"""
Barrido descriptivo de la matriz determinista conjeturada sobre un rango de
primos, comparado con la línea base Bernoulli.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import pandas as pd

from src.construct.matrices import build_bernoulli_baseline, build_legendre_deterministic
from src.ntheory.primes import next_prime_geq
from src.verify.enumeration import check_budget, count_supports
from src.verify.rip import RipMode, rip_constant

logger = logging.getLogger(__name__)

DEFAULT_TARGET_DELTA = math.sqrt(2) - 1
QUANTILES = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class ConjectureScan:
    M: int
    N: int
    K: int
    target_delta: float
    table: pd.DataFrame
    baseline: pd.DataFrame
    summary: pd.DataFrame

    @property
    def fraction_meeting_target(self) -> float:
        return float(self.table["meets_target"].mean())


def primes_in_range(lower: int, upper: int, limit: Optional[int] = None):
    """Primos impares en [lower, upper], en orden ascendente."""
    candidate = max(lower, 3)
    found = 0
    while candidate <= upper and (limit is None or found < limit):
        p, _ = next_prime_geq(candidate)
        if p > upper:
            return
        yield int(p)
        found += 1
        candidate = p + 1


def _summary(table: pd.DataFrame, baseline: pd.DataFrame) -> pd.DataFrame:
    rows = []
    for name, values in (("legendre-deterministic", table["delta"]), ("bernoulli", baseline["delta"])):
        if values.empty:
            continue
        row = {"ensemble": name, "count": int(values.size)}
        for q in QUANTILES:
            row[f"q{int(q * 100)}"] = float(values.quantile(q))
        rows.append(row)
    return pd.DataFrame(rows)


def conjecture_scan(M: int, N: int, K: int, prime_range: Tuple[int, int],
                    limit: Optional[int] = None,
                    target_delta: float = DEFAULT_TARGET_DELTA,
                    baseline_seeds: int = 20,
                    budget: Optional[int] = None,
                    workers: Optional[int] = None) -> ConjectureScan:
    """
    Calcula δ_2K exacto de la matriz determinista para cada primo p > M N
    del rango y la distribución de δ_2K de matrices Bernoulli.

    Args:
        M: Filas.
        N: Columnas.
        K: Esparcidad; se verifica min(2K, N).
        prime_range: Intervalo cerrado (inferior, superior) de primos.
        limit: Número máximo de primos (los más pequeños).
        target_delta: Umbral para la fracción de primos que lo cumplen.
        baseline_seeds: Semillas 0..baseline_seeds-1 de la línea base.
        budget: Tope de soportes por matriz.
        workers: Hilos para la enumeración.

    Returns:
        ConjectureScan con la tabla por primo (orden ascendente), la línea
        base y los cuantiles de ambas distribuciones.
    """
    if K < 1:
        raise ValueError(f"K debe ser >= 1: {K}")
    if M < 1:
        raise ValueError(f"M debe ser >= 1: {M}")
    if baseline_seeds < 0:
        raise ValueError(f"baseline_seeds debe ser >= 0: {baseline_seeds}")
    lower, upper = prime_range
    check_budget(count_supports(N, min(2 * K, N)), budget, "rip_constant en modo sampled")

    primes = list(primes_in_range(max(lower, M * N + 1), upper, limit))
    if not primes:
        raise ValueError(f"No hay primos p > {M * N} en [{lower}, {upper}]")
    logger.info(f"Barrido de la conjetura: {len(primes)} primos, M={M}, N={N}, 2K={2 * K}")

    rows = []
    for p in primes:
        report = rip_constant(build_legendre_deterministic(M, N, p), 2 * K,
                              RipMode.EXHAUSTIVE, budget=budget, workers=workers)
        rows.append({"p": p, "delta": report.delta_exact,
                     "meets_target": report.delta_exact <= target_delta,
                     "worst_support": " ".join(map(str, report.worst_support))})
    table = pd.DataFrame(rows, columns=["p", "delta", "meets_target", "worst_support"])

    base_rows = []
    for seed in range(baseline_seeds):
        report = rip_constant(build_bernoulli_baseline(M, N, seed), 2 * K,
                              RipMode.EXHAUSTIVE, budget=budget, workers=workers)
        base_rows.append({"seed": seed, "delta": report.delta_exact})
    baseline = pd.DataFrame(base_rows, columns=["seed", "delta"])

    scan = ConjectureScan(M=M, N=N, K=K, target_delta=target_delta, table=table,
                          baseline=baseline, summary=_summary(table, baseline))
    logger.info(f"Fracción de primos con δ_2K <= {target_delta:.6g}: {scan.fraction_meeting_target:.3f}")
    return scan
