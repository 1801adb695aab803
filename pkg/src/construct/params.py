"""
Planificación de parámetros (M, H, ε, p_min) a partir de (N, K, δ).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config.config import PLAN_CONFIG
from src.ntheory.modular import BigNat

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DesignParams:
    """Parámetros de diseño planificados o forzados por el usuario."""

    N: int
    K: int
    delta: float
    M: int
    H: int
    eps_required: float
    log_eps_required: float
    p_min: BigNat
    c1: int = PLAN_CONFIG["c1"]
    m_overridden: bool = False
    h_overridden: bool = False
    clamps: List[str] = field(default_factory=list)
    theta_target: float = 0.0
    failure_probability: float = 0.0
    union_pairs: int = 0
    log_chain_bound: float = 0.0
    log_chain_intermediate: float = 0.0

    def __post_init__(self):
        if not 1 <= self.K <= self.N:
            raise ValueError(f"Se requiere 1 <= K <= N (K={self.K}, N={self.N})")
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta debe estar en (0, 1]: {self.delta}")
        if self.M < 1 or self.H < 1:
            raise ValueError(f"M y H deben ser >= 1 (M={self.M}, H={self.H})")
        if self.p_min != 2 ** self.H + self.M * self.N:
            raise ValueError("p_min debe ser exactamente 2^H + M*N")

    def to_dict(self) -> Dict[str, Any]:
        """Convierte los parámetros a un diccionario serializable."""
        return {
            "N": self.N,
            "K": self.K,
            "delta": self.delta,
            "M": self.M,
            "H": self.H,
            "c1": self.c1,
            "eps_required": self.eps_required,
            "log_eps_required": self.log_eps_required,
            "p_min": hex(self.p_min),
            "p_min_bits": self.p_min.bit_length(),
            "m_overridden": self.m_overridden,
            "h_overridden": self.h_overridden,
            "clamps": list(self.clamps),
            "theta_target": self.theta_target,
            "failure_probability": self.failure_probability,
            "union_pairs": self.union_pairs,
            "log_chain_bound": self.log_chain_bound,
            "log_chain_intermediate": self.log_chain_intermediate,
            "log_convention": "natural",
        }


def clamped_log(k: int) -> float:
    """max(log k, 1): mantiene positivas las fórmulas para K <= e."""
    return max(math.log(k), 1.0)


def log_eps_bound(N: int, K: int, delta: float) -> float:
    """Logaritmo de la cota de sesgo exp(-40 K log((150/δ) K log K) log N)."""
    inner = (PLAN_CONFIG["fro_to_rip"] / delta) * K * clamped_log(K)
    return -PLAN_CONFIG["bias_exponent"] * K * math.log(inner) * math.log(N)


def chain_log_bound(N: int, H: int) -> float:
    """Logaritmo de la cota 4 N^2 2^(-H/3) de la cadena de sesgo."""
    return math.log(4) + 2 * math.log(N) - (H / 3) * math.log(2)


def entropy_satisfies(N: int, K: int, delta: float, H: int) -> bool:
    """Comprueba la desigualdad suficiente log 4 + 2 log N - (H/3) log 2 <= log ε."""
    return chain_log_bound(N, H) <= log_eps_bound(N, K, delta)


def solve_entropy(N: int, K: int, delta: float) -> int:
    """
    Menor H entero que satisface la desigualdad suficiente de la cadena.

    Args:
        N: Número de columnas.
        K: Nivel de dispersión.
        delta: Constante RIP objetivo.

    Returns:
        H en bits.
    """
    rhs = log_eps_bound(N, K, delta)
    estimate = 3 * (math.log(4) + 2 * math.log(N) - rhs) / math.log(2)
    H = max(1, math.ceil(estimate))
    # Corrección por redondeo en coma flotante
    while not entropy_satisfies(N, K, delta, H):
        H += 1
    while H > 1 and entropy_satisfies(N, K, delta, H - 1):
        H -= 1
    return H


def count_disjoint_pairs(N: int, K: int) -> int:
    """Número de pares disjuntos (I, J) con 1 <= |I|, |J| <= K."""
    return sum(
        math.comb(N, a) * math.comb(N - a, b)
        for a in range(1, K + 1)
        for b in range(1, K + 1)
    )


def plan_parameters(N: int, K: int, delta: float,
                    M_override: Optional[int] = None,
                    H_override: Optional[int] = None,
                    c1: int = PLAN_CONFIG["c1"]) -> DesignParams:
    """
    Planifica M, H, ε y p_min para (N, K, δ).

    Las sustituciones de M y H se aceptan tal cual y quedan marcadas.

    Args:
        N: Número de columnas, >= 2.
        K: Nivel de dispersión, 1 <= K <= N.
        delta: Constante RIP objetivo en (0, 1].
        M_override: M fijado por el usuario.
        H_override: H fijado por el usuario.
        c1: Constante de planificación.

    Returns:
        DesignParams completos.
    """
    if N < 2:
        raise ValueError(f"N debe ser >= 2: {N}")
    if not 1 <= K <= N:
        raise ValueError(f"Se requiere 1 <= K <= N (K={K}, N={N})")
    if not 0 < delta <= 1:
        raise ValueError(f"delta debe estar en (0, 1]: {delta}")

    clamps = []
    L = clamped_log(K)
    if math.log(K) < 1.0:
        clamps.append(f"log K fijado a 1 (log {K} = {math.log(K):.6g})")
        logger.info(f"Se aplicó la cota inferior log K = 1 para K={K}")

    if M_override is not None:
        if M_override < 1:
            raise ValueError(f"M debe ser >= 1: {M_override}")
        M = int(M_override)
    else:
        M = math.ceil((c1 / delta ** 2) * K * L ** 2 * math.log(N))

    if H_override is not None:
        if H_override < 1:
            raise ValueError(f"H debe ser >= 1: {H_override}")
        H = int(H_override)
    else:
        H = solve_entropy(N, K, delta)

    log_eps = log_eps_bound(N, K, delta)
    # 4 M N H 2^(-H/2), paso intermedio de la cadena
    log_intermediate = math.log(4 * M * N * H) - (H / 2) * math.log(2)

    params = DesignParams(
        N=N,
        K=K,
        delta=delta,
        M=M,
        H=H,
        eps_required=math.exp(log_eps),
        log_eps_required=log_eps,
        p_min=BigNat(2 ** H + M * N),
        c1=c1,
        m_overridden=M_override is not None,
        h_overridden=H_override is not None,
        clamps=clamps,
        theta_target=delta / (PLAN_CONFIG["fro_to_rip"] * L),
        failure_probability=2.0 * math.exp(-2 * K * math.log(N)),
        union_pairs=count_disjoint_pairs(N, K),
        log_chain_bound=chain_log_bound(N, H),
        log_chain_intermediate=log_intermediate,
    )
    logger.info(f"Parámetros planificados: M={M}, H={H}, bits de p_min={params.p_min.bit_length()}")
    return params
