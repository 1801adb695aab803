"""
Barrido de transición de fase: tasa de recuperación exacta de OMP en
función de K para una familia de matrices.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Iterable, Optional

import numpy as np
import pandas as pd

from config.config import RECOVERY_CONFIG, VERIFY_CONFIG
from src.construct.ensemble_factory import EnsembleFactory
from src.construct.ensembles import BaseEnsemble
from src.construct.rng import make_rng, random_support
from src.recovery.omp import RecoveryError, omp_recover

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["ensemble", "K", "trials", "successes", "success_rate", "note"]


def run_trial(ensemble: BaseEnsemble, M: int, N: int, K: int, rng_seed: int, trial: int) -> bool:
    """
    Un ensayo: matriz de la familia, señal K-dispersa con valores ±1 y
    recuperación sin ruido.

    El generador se deriva de (rng_seed, K, trial), así que el resultado no
    depende del orden de ejecución.
    """
    rng = make_rng(rng_seed, K, trial)
    matrix = ensemble.build_trial(M, N, rng)
    support = random_support(rng, N, K)
    values = rng.choice(np.array([-1.0, 1.0]), size=K)
    x = np.zeros(N)
    x[list(support)] = values
    y = matrix.dense() @ x
    try:
        result = omp_recover(matrix, y, K)
    except RecoveryError:
        return False
    if result.support != support:
        return False
    return bool(np.max(np.abs(np.asarray(result.values) - values)) <= RECOVERY_CONFIG["exact_tolerance"])


def phase_sweep(ensemble: str, M: int, N: int, K_range: Iterable[int], trials: int,
                rng_seed: int, workers: Optional[int] = None, **options: Any) -> pd.DataFrame:
    """
    Tasa de éxito de OMP por K.

    Args:
        ensemble: Nombre registrado en EnsembleFactory.
        M: Filas.
        N: Columnas.
        K_range: Valores de K a evaluar.
        trials: Ensayos por K.
        rng_seed: Semilla base.
        workers: Hilos para los ensayos.
        options: Opciones de la familia (p, H).

    Returns:
        DataFrame con columnas ensemble, K, trials, successes, success_rate, note;
        attrs["ensemble"] guarda los parámetros de la familia.
    """
    if trials < 1:
        raise ValueError(f"trials debe ser >= 1: {trials}")
    if M < 1 or N < 1:
        raise ValueError(f"M y N deben ser >= 1 (M={M}, N={N})")
    family = EnsembleFactory().get_ensemble(ensemble, **options)
    workers = VERIFY_CONFIG["workers"] if workers is None else workers

    rows = []
    for K in K_range:
        row = {"ensemble": family.name, "K": K, "trials": trials, "successes": trials,
               "success_rate": 1.0, "note": ""}
        if K < 0:
            raise ValueError(f"K debe ser >= 0: {K}")
        if K > min(M, N):
            logger.warning(f"K={K} omitido: OMP requiere K <= M y K <= N")
            row.update(successes=0, success_rate=float("nan"), note="skipped: K > min(M, N)")
            rows.append(row)
            continue
        if K > 0:
            def trial_fn(t, K=K):
                return run_trial(family, M, N, K, rng_seed, t)

            if workers <= 1:
                outcomes = [trial_fn(t) for t in range(trials)]
            else:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    outcomes = list(pool.map(trial_fn, range(trials)))
            successes = sum(outcomes)
            row.update(successes=successes, success_rate=successes / trials)
        logger.info(f"{family.name}: K={K}, tasa de éxito {row['success_rate']:.3f}")
        rows.append(row)
    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    table.attrs["ensemble"] = family.describe()
    return table
