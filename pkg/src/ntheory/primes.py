"""
Certificación de primalidad por Miller-Rabin y búsqueda de primos en el
intervalo de Bertrand.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.config import PRIME_CONFIG
from src.ntheory.modular import BigNat, as_bignat, mod_pow

logger = logging.getLogger(__name__)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class CertMethod(str, enum.Enum):
    DETERMINISTIC_SMALL = "deterministic-small"
    MILLER_RABIN = "miller-rabin"


@dataclass(frozen=True)
class PrimeCert:
    """Registro de cómo se certificó un primo."""

    p: BigNat
    method: CertMethod
    rounds: int = 0

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0:
            raise ValueError(f"Un certificado requiere un primo impar >= 3: {self.p}")

    def to_dict(self):
        """Convierte el certificado a un diccionario serializable."""
        return {"p": hex(self.p), "method": self.method.value, "rounds": self.rounds}


def _is_strong_probable_prime(n: int, d: int, s: int, a: int) -> bool:
    x = mod_pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = (x * x) % n
        if x == n - 1:
            return True
    return False


def _random_bases(n: int, rounds: int):
    # Bases reproducibles: flujo Philox con clave derivada de n
    key = [int(w) for w in n.to_bytes((n.bit_length() + 7) // 8, "little")]
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))
    nbytes = (n.bit_length() + 7) // 8 + 8
    for _ in range(rounds):
        yield 2 + int.from_bytes(rng.bytes(nbytes), "little") % (n - 3)


def is_prime(n: int) -> Tuple[bool, Optional[PrimeCert]]:
    """
    Prueba de primalidad de Miller-Rabin.

    Determinista para n < 2^64 (conjunto fijo de testigos); por encima es
    probabilística con error < 4^(-rounds).

    Args:
        n: Entero a probar.

    Returns:
        Tupla (es_primo, certificado). El certificado es None si n no es un
        primo impar.
    """
    n = int(n)
    if n < 2:
        return False, None
    for small in _SMALL_PRIMES:
        if n == small:
            if n == 2:
                return True, None
            return True, PrimeCert(BigNat(n), CertMethod.DETERMINISTIC_SMALL, 0)
        if n % small == 0:
            return False, None

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    if n < 2 ** 64:
        bases = PRIME_CONFIG["deterministic_witnesses"]
        method, rounds = CertMethod.DETERMINISTIC_SMALL, 0
    else:
        rounds = PRIME_CONFIG["mr_rounds"]
        bases = _random_bases(n, rounds)
        method = CertMethod.MILLER_RABIN

    for a in bases:
        if not _is_strong_probable_prime(n, d, s, a):
            return False, None
    return True, PrimeCert(BigNat(n), method, rounds)


def next_prime_geq(lower: int) -> Tuple[BigNat, Optional[PrimeCert]]:
    """
    Menor primo certificado p >= lower, buscando en orden ascendente.

    Por el postulado de Bertrand el resultado cumple p <= 2*lower.

    Args:
        lower: Cota inferior, >= 2.

    Returns:
        Tupla (p, certificado). El certificado es None solo para p = 2.
    """
    lower = as_bignat(lower, "lower")
    if lower < 2:
        raise ValueError(f"lower debe ser >= 2: {lower}")
    if lower == 2:
        return BigNat(2), None

    candidate = lower if lower % 2 else lower + 1
    while True:
        prime, cert = is_prime(candidate)
        if prime:
            if candidate > 2 * lower:
                raise ArithmeticError(f"Bertrand violado: {candidate} > 2*{lower}")
            logger.debug(f"Primo encontrado: {candidate} (desde {lower})")
            return BigNat(candidate), cert
        candidate += 2
