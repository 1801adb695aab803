"""
Recuperación de señales dispersas por búsqueda ortogonal de coincidencias
(OMP).
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from config.config import RECOVERY_CONFIG
from src.construct.matrices import SignMatrix

logger = logging.getLogger(__name__)


class RecoveryError(RuntimeError):
    """La submatriz seleccionada es numéricamente singular."""

    def __init__(self, partial_support: Tuple[int, ...], column: int, condition: float):
        self.partial_support = partial_support
        self.column = column
        self.condition = condition
        super().__init__(
            f"Submatriz singular al añadir la columna {column} "
            f"(condición {condition:.3g}); soporte parcial {list(partial_support)}"
        )


@dataclass(frozen=True)
class SparseSignal:
    N: int
    support: Tuple[int, ...]
    values: Tuple[float, ...]
    selection_order: Tuple[int, ...] = ()
    residual_norms: Tuple[float, ...] = field(default=())

    def dense(self) -> np.ndarray:
        """Vector de longitud N con ceros fuera del soporte."""
        x = np.zeros(self.N)
        x[list(self.support)] = self.values
        return x


def omp_recover(matrix: SignMatrix, y: np.ndarray, K: int, noise_tol: float = 0.0,
                max_condition: Optional[float] = None) -> SparseSignal:
    """
    Búsqueda ortogonal de coincidencias con a lo sumo K iteraciones.

    En cada iteración se elige la columna de mayor correlación absoluta con
    el residuo (empate: índice menor) y se reajustan por mínimos cuadrados
    todos los coeficientes del soporte acumulado.

    Args:
        matrix: Matriz de signos (se usa con la escala 1/√M).
        y: Medidas, vector de longitud M.
        K: Iteraciones máximas, 0 <= K <= M.
        noise_tol: Se detiene cuando la norma del residuo es <= noise_tol.
        max_condition: Condición máxima admitida de la submatriz de Gram A_S^T A_S.

    Returns:
        SparseSignal con el soporte ordenado y las normas del residuo.
    """
    A = matrix.dense()
    M, N = A.shape
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (M,):
        raise ValueError(f"y debe tener longitud {M}, forma {y.shape}")
    if not 0 <= K <= M:
        raise ValueError(f"Se requiere 0 <= K <= M (K={K}, M={M})")
    if noise_tol < 0:
        raise ValueError(f"noise_tol debe ser no negativo: {noise_tol}")
    max_condition = RECOVERY_CONFIG["max_condition"] if max_condition is None else max_condition

    selected = []
    coef = np.zeros(0)
    residual = y.copy()
    norms = [float(np.linalg.norm(residual))]
    for _ in range(min(K, N)):
        if norms[-1] <= noise_tol:
            break
        corr = np.abs(A.T @ residual)
        corr[selected] = -np.inf
        column = int(np.argmax(corr))
        sub = A[:, selected + [column]]
        condition = float(np.linalg.cond(sub)) ** 2
        if not np.isfinite(condition) or condition > max_condition:
            logger.error(f"OMP detenido: condición {condition:.3g} al añadir la columna {column}")
            raise RecoveryError(tuple(sorted(selected)), column, condition)
        selected.append(column)
        coef, *_ = np.linalg.lstsq(sub, y, rcond=None)
        residual = y - sub @ coef
        norms.append(float(np.linalg.norm(residual)))

    order = np.argsort(selected, kind="stable")
    support = tuple(int(selected[i]) for i in order)
    values = tuple(float(coef[i]) for i in order)
    return SparseSignal(N=N, support=support, values=values,
                        selection_order=tuple(selected), residual_norms=tuple(norms))
