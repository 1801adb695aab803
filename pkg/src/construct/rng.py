"""Generadores pseudoaleatorios reproducibles basados en contador (Philox)."""
from typing import Tuple

import numpy as np

GENERATOR_ID = "philox"


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    """
    Crea un generador Philox a partir de una semilla y una clave de
    derivación.

    Cada clave distinta produce un flujo independiente, de modo que los
    resultados no dependen del orden en que se ejecutan los ensayos.

    Args:
        seed: Semilla base (entero no negativo).
        spawn_key: Índices de derivación (por ejemplo, K y número de ensayo).

    Returns:
        Instancia de numpy.random.Generator.
    """
    if seed < 0:
        raise ValueError(f"La semilla debe ser no negativa: {seed}")
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.Philox(sequence))


def random_bits(rng: np.random.Generator, bits: int) -> int:
    """Entero uniforme en [0, 2^bits), de precisión arbitraria."""
    if bits <= 0:
        return 0
    nbytes = (bits + 7) // 8
    value = int.from_bytes(rng.bytes(nbytes), "little")
    return value & ((1 << bits) - 1)


def random_support(rng: np.random.Generator, n: int, k: int) -> Tuple[int, ...]:
    """Soporte uniforme de tamaño k en [0, n), ordenado."""
    return tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False)))
