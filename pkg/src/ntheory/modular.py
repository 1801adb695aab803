"""
Aritmética modular de precisión arbitraria y símbolos de Legendre/Jacobi.

Los enteros de Python ya son de precisión arbitraria, así que ``BigNat`` es
solo un alias tipado que marca los valores que deben ser no negativos
(p, X, 2^H y los argumentos de los símbolos).
"""
import logging
from functools import lru_cache
from typing import NewType, Optional

import numpy as np

from config.config import PRIME_CONFIG

logger = logging.getLogger(__name__)

BigNat = NewType("BigNat", int)


def as_bignat(value: int, name: str = "valor") -> BigNat:
    """
    Valida y convierte un entero a ``BigNat``.

    Args:
        value: Entero a convertir.
        name: Nombre del parámetro para el mensaje de error.

    Returns:
        El mismo valor tipado como BigNat.
    """
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} debe ser un entero, se recibió {type(value).__name__}")
    value = int(value)
    if value < 0:
        raise ValueError(f"{name} debe ser no negativo: {value}")
    return BigNat(value)


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """
    Exponenciación modular por cuadrados sucesivos, reduciendo módulo
    ``modulus`` en cada paso.

    Args:
        base: Base.
        exponent: Exponente no negativo.
        modulus: Módulo positivo.

    Returns:
        base^exponent mod modulus.
    """
    if exponent < 0:
        raise ValueError(f"El exponente debe ser no negativo: {exponent}")
    if modulus == 1:
        return 0
    result = 1
    base %= modulus
    while exponent > 0:
        if exponent & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        exponent >>= 1
    return result


def jacobi_symbol(a: int, n: int) -> int:
    """
    Símbolo de Jacobi (a/n) mediante reciprocidad cuadrática.

    Coincide con el símbolo de Legendre cuando n es primo.

    Args:
        a: Numerador (cualquier entero).
        n: Denominador impar, n >= 3.

    Returns:
        -1, 0 o +1.
    """
    n = int(n)
    if n < 3 or n % 2 == 0:
        raise ValueError(f"El denominador del símbolo de Jacobi debe ser impar y >= 3: {n}")
    a = int(a) % n
    acc = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                acc = -acc
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            acc = -acc
        a %= n
    return acc if n == 1 else 0


def _require_odd_prime(p: int) -> None:
    # Importación diferida: primes depende de este módulo
    from src.ntheory.primes import is_prime

    if p < 3 or p % 2 == 0:
        raise ValueError(f"p debe ser un primo impar: {p}")
    prime, _ = is_prime(p)
    if not prime:
        raise ValueError(f"p no es primo: {p}")


def legendre_euler(a: int, p: int) -> int:
    """Símbolo de Legendre por el criterio de Euler, sin certificar p."""
    r = mod_pow(a, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def legendre_symbol(a: int, p: int) -> int:
    """
    Símbolo de Legendre (a/p) para un primo impar certificado.

    Se calcula por el criterio de Euler y por las identidades de Jacobi;
    ambos caminos deben coincidir.

    Args:
        a: Numerador.
        p: Primo impar.

    Returns:
        +1 si a es residuo cuadrático no nulo, -1 si no lo es, 0 si p | a.
    """
    a = int(a)
    p = int(p)
    _require_odd_prime(p)
    euler = legendre_euler(a, p)
    jacobi = jacobi_symbol(a, p)
    if euler != jacobi:
        # Solo puede ocurrir si la certificación de p fue errónea
        raise ArithmeticError(f"Criterio de Euler y Jacobi discrepan para a={a}, p={p}")
    return euler


@lru_cache(maxsize=8)
def legendre_table(p: int) -> np.ndarray:
    """
    Tabla completa de símbolos (a/p) para a en [0, p), construida marcando
    los cuadrados x^2 mod p.

    Args:
        p: Primo impar por debajo de ``PRIME_CONFIG['table_limit']``.

    Returns:
        Arreglo int8 de longitud p, de solo lectura.
    """
    if p > PRIME_CONFIG["table_limit"]:
        raise ValueError(f"p={p} excede el límite de la tabla de residuos")
    _require_odd_prime(p)
    x = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    table = np.full(p, -1, dtype=np.int8)
    table[(x * x) % p] = 1
    table[0] = 0
    table.setflags(write=False)
    logger.debug(f"Tabla de residuos cuadráticos construida para p={p}")
    return table


def table_pays_off(count: int, p: int) -> bool:
    """La tabla de p símbolos compensa si se piden al menos p / table_ratio."""
    return p <= PRIME_CONFIG["table_limit"] and count * PRIME_CONFIG["table_ratio"] >= p


def legendre_stream(start: int, count: int, p: int, use_table: Optional[bool] = None) -> np.ndarray:
    """
    Símbolos consecutivos ((start + i)/p) para i = 0..count-1.

    Usa la tabla de residuos cuando count es comparable a p y el camino de
    Jacobi elemento a elemento en otro caso.

    Args:
        start: Primer argumento.
        count: Número de símbolos.
        p: Primo impar.
        use_table: Forzar (o prohibir) la tabla; por defecto table_pays_off.

    Returns:
        Arreglo int8 de longitud count.
    """
    start = int(start)
    p = int(p)
    if count < 0:
        raise ValueError(f"count debe ser no negativo: {count}")
    if use_table is None:
        use_table = table_pays_off(count, p)
    if use_table and p <= PRIME_CONFIG["table_limit"]:
        table = legendre_table(p)
        idx = (np.arange(count, dtype=np.int64) + (start % p)) % p
        return table[idx]
    _require_odd_prime(p)
    return np.fromiter(
        (jacobi_symbol(start + i, p) for i in range(count)), dtype=np.int8, count=count
    )
