"""
Matrices de signos: la construcción de Legendre con semilla, la variante
determinista conjeturada, la línea base Bernoulli iid y el relleno a partir
de un conjunto de sesgo pequeño arbitrario.
"""
import enum
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Optional

import numpy as np

from src.codes.biased import BiasedSet
from src.construct.params import DesignParams, plan_parameters
from src.construct.rng import GENERATOR_ID, make_rng, random_bits
from src.ntheory.modular import BigNat, as_bignat, legendre_stream
from src.ntheory.primes import is_prime

logger = logging.getLogger(__name__)


class ProvenanceKind(str, enum.Enum):
    LEGENDRE_SEEDED = "legendre-seeded"
    LEGENDRE_DETERMINISTIC = "legendre-deterministic"
    BERNOULLI_IID = "bernoulli-iid"
    SMALL_BIAS = "small-bias"


@dataclass(frozen=True)
class Provenance:
    """Origen de una matriz; basta para reconstruirla salvo en small-bias."""

    kind: ProvenanceKind
    p: Optional[int] = None
    x: Optional[int] = None
    h: Optional[int] = None
    rng_seed: Optional[int] = None
    generator: Optional[str] = None
    q: Optional[int] = None
    draw: Optional[int] = None

    @property
    def tag(self) -> str:
        return self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        """Convierte la procedencia a un diccionario serializable."""
        result: Dict[str, Any] = {"kind": self.tag}
        if self.p is not None:
            result["p"] = hex(self.p)
        if self.x is not None:
            result["x"] = hex(self.x)
        if self.h is not None:
            result["h"] = self.h
        if self.rng_seed is not None:
            result["seed"] = self.rng_seed
            result["generator"] = self.generator
        if self.q is not None:
            result["q"] = self.q
            result["draw"] = self.draw
        return result


class SeedSource(str, enum.Enum):
    EXTERNAL_HEX = "external-hex"
    GENERATED = "generated"


@dataclass(frozen=True)
class Seed:
    """Semilla X uniforme en {0, ..., 2^H - 1}."""

    X: BigNat
    H: int
    source: SeedSource = SeedSource.EXTERNAL_HEX
    rng_seed: Optional[int] = None

    def __post_init__(self):
        if self.H < 1:
            raise ValueError(f"H debe ser >= 1: {self.H}")
        if not 0 <= self.X < 2 ** self.H:
            raise ValueError(f"X debe cumplir 0 <= X < 2^H (H={self.H})")

    @classmethod
    def from_hex(cls, text: str, H: int) -> "Seed":
        """Crea una semilla a partir de su representación hexadecimal."""
        try:
            value = int(text, 16)
        except ValueError:
            raise ValueError(f"Semilla hexadecimal inválida: {text!r}")
        return cls(as_bignat(value, "X"), H, SeedSource.EXTERNAL_HEX)

    @classmethod
    def generate(cls, H: int, rng_seed: int) -> "Seed":
        """Extrae X uniforme con H bits de un flujo Philox reproducible."""
        rng = make_rng(rng_seed)
        return cls(BigNat(random_bits(rng, H)), H, SeedSource.GENERATED, rng_seed)


@dataclass(frozen=True, eq=True)
class SignMatrix:
    """
    Matriz M x N de signos ±1 con escala implícita 1/√M.

    Los signos se guardan empaquetados por bits en orden de columnas
    (bit 1 representa -1).
    """

    rows: int
    cols: int
    packed: bytes
    provenance: Provenance

    @classmethod
    def from_signs(cls, signs: np.ndarray, provenance: Provenance) -> "SignMatrix":
        """
        Empaqueta una matriz de signos.

        Args:
            signs: Arreglo (M, N) con entradas ±1.
            provenance: Origen de la matriz.

        Returns:
            SignMatrix inmutable.
        """
        signs = np.asarray(signs)
        if signs.ndim != 2 or signs.shape[0] < 1 or signs.shape[1] < 1:
            raise ValueError(f"Se esperaba una matriz no vacía, forma {signs.shape}")
        if not np.all(np.abs(signs) == 1):
            raise ValueError("Todas las entradas deben ser ±1")
        bits = (signs.ravel(order="F") < 0).astype(np.uint8)
        return cls(int(signs.shape[0]), int(signs.shape[1]), np.packbits(bits).tobytes(), provenance)

    @cached_property
    def signs(self) -> np.ndarray:
        """Arreglo int8 (M, N) de solo lectura."""
        bits = np.unpackbits(np.frombuffer(self.packed, dtype=np.uint8), count=self.rows * self.cols)
        signs = (1 - 2 * bits.astype(np.int8)).reshape((self.rows, self.cols), order="F")
        signs.setflags(write=False)
        return signs

    @cached_property
    def gram(self) -> np.ndarray:
        """Gram entera A^T A de los signos (la Gram normalizada es gram / M)."""
        a = self.signs.astype(np.int64)
        g = a.T @ a
        g.setflags(write=False)
        return g

    def dense(self) -> np.ndarray:
        """Matriz en coma flotante con la escala 1/√M aplicada."""
        return self.signs.astype(np.float64) / math.sqrt(self.rows)

    def stream(self) -> np.ndarray:
        """Signos en orden de columnas (el flujo consecutivo original)."""
        return self.signs.ravel(order="F")


def desk_params(M: int, N: int, H: int, K: int = 1, delta: float = 1.0) -> DesignParams:
    """
    Parámetros de escritorio con M y H forzados.

    Para N = 1 el planificador no aplica, así que se construyen directamente.
    """
    if N >= 2:
        return plan_parameters(N, min(K, N), delta, M_override=M, H_override=H)
    return DesignParams(
        N=N, K=1, delta=delta, M=M, H=H, eps_required=0.0, log_eps_required=-math.inf,
        p_min=BigNat(2 ** H + M * N), m_overridden=True, h_overridden=True,
    )


def _require_prime(p: int) -> None:
    prime, _ = is_prime(p)
    if not prime or p % 2 == 0:
        raise ValueError(f"p debe ser un primo impar: {p}")


def _fill(M: int, N: int, first: int, p: int) -> np.ndarray:
    stream = legendre_stream(first, M * N, p)
    if np.any(stream == 0):
        raise ArithmeticError(f"Símbolo nulo en la matriz (p={p}); invariante violado")
    return stream.reshape((M, N), order="F")


def build_legendre_seeded(params: DesignParams, seed: Seed, p: int) -> SignMatrix:
    """
    Matriz de Legendre con semilla: entrada (m, n) = ((X + M n + m + 1)/p)
    con índices desde 0, rellenando columna a columna.

    Args:
        params: Parámetros con M, N y H.
        seed: Semilla X < 2^H.
        p: Primo certificado >= 2^H + M N.

    Returns:
        SignMatrix con procedencia legendre-seeded.
    """
    p = as_bignat(p, "p")
    if seed.H != params.H:
        raise ValueError(f"La semilla usa H={seed.H} pero los parámetros H={params.H}")
    if seed.X >= 2 ** params.H:
        raise ValueError(f"X >= 2^H (H={params.H})")
    if p < params.p_min:
        raise ValueError(f"p={p} < p_min={params.p_min}: un símbolo nulo sería posible")
    _require_prime(p)

    signs = _fill(params.M, params.N, seed.X + 1, p)
    logger.info(f"Matriz de Legendre con semilla construida: {params.M}x{params.N}, p={p}")
    return SignMatrix.from_signs(
        signs, Provenance(ProvenanceKind.LEGENDRE_SEEDED, p=p, x=int(seed.X), h=params.H)
    )


def build_legendre_deterministic(M: int, N: int, p: int) -> SignMatrix:
    """
    Matriz determinista conjeturada: símbolos consecutivos de 1..MN.

    Args:
        M: Filas.
        N: Columnas.
        p: Primo con p > M N.

    Returns:
        SignMatrix con procedencia legendre-deterministic.
    """
    p = as_bignat(p, "p")
    if M < 1 or N < 1:
        raise ValueError(f"M y N deben ser >= 1 (M={M}, N={N})")
    if p <= M * N:
        raise ValueError(f"p={p} <= M*N={M * N}: un símbolo nulo sería posible")
    _require_prime(p)
    signs = _fill(M, N, 1, p)
    return SignMatrix.from_signs(signs, Provenance(ProvenanceKind.LEGENDRE_DETERMINISTIC, p=p))


def build_bernoulli_baseline(M: int, N: int, rng_seed: int) -> SignMatrix:
    """
    Línea base Bernoulli iid con un generador Philox identificado por
    ``rng_seed``.
    """
    if M < 1 or N < 1:
        raise ValueError(f"M y N deben ser >= 1 (M={M}, N={N})")
    rng = make_rng(rng_seed)
    bits = rng.integers(0, 2, size=M * N, dtype=np.int8)
    signs = (1 - 2 * bits).reshape((M, N), order="F")
    return SignMatrix.from_signs(
        signs, Provenance(ProvenanceKind.BERNOULLI_IID, rng_seed=int(rng_seed), generator=GENERATOR_ID)
    )


def build_small_bias(M: int, N: int, biased_set: BiasedSet, draw: int) -> SignMatrix:
    """
    Rellena una matriz M x N, columna a columna, con el vector ``draw`` de
    un conjunto sesgado de longitud n = M N.
    """
    if biased_set.n != M * N:
        raise ValueError(f"El conjunto tiene n={biased_set.n}, se requiere M*N={M * N}")
    if not 0 <= draw < biased_set.q:
        raise ValueError(f"draw fuera de rango: {draw} (q={biased_set.q})")
    signs = np.asarray(biased_set.vectors[draw]).reshape((M, N), order="F")
    return SignMatrix.from_signs(
        signs, Provenance(ProvenanceKind.SMALL_BIAS, q=biased_set.q, draw=int(draw))
    )


def rederive(matrix: SignMatrix) -> Optional[SignMatrix]:
    """
    Reconstruye la matriz a partir de su procedencia.

    Returns:
        La matriz reconstruida, o None si la procedencia no basta
        (small-bias).
    """
    prov = matrix.provenance
    M, N = matrix.rows, matrix.cols
    if prov.kind is ProvenanceKind.LEGENDRE_SEEDED:
        params = desk_params(M, N, prov.h)
        return build_legendre_seeded(params, Seed(BigNat(prov.x), prov.h), prov.p)
    if prov.kind is ProvenanceKind.LEGENDRE_DETERMINISTIC:
        return build_legendre_deterministic(M, N, prov.p)
    if prov.kind is ProvenanceKind.BERNOULLI_IID:
        return build_bernoulli_baseline(M, N, prov.rng_seed)
    return None
