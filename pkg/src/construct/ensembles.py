import abc
import logging
from typing import Any, Dict, Optional

import numpy as np

from src.construct.matrices import (
    Seed,
    SignMatrix,
    build_bernoulli_baseline,
    build_legendre_deterministic,
    build_legendre_seeded,
    desk_params,
)
from src.construct.rng import random_bits
from src.ntheory.modular import BigNat
from src.ntheory.primes import next_prime_geq

logger = logging.getLogger(__name__)


class BaseEnsemble(abc.ABC):
    """
    Clase base abstracta para familias de matrices de medición.
    """

    name: str = ""

    @abc.abstractmethod
    def build_trial(self, M: int, N: int, rng: np.random.Generator) -> SignMatrix:
        """
        Construye la matriz de un ensayo.

        Args:
            M: Filas.
            N: Columnas.
            rng: Generador propio del ensayo.

        Returns:
            Matriz de signos.
        """
        pass

    def describe(self) -> Dict[str, Any]:
        """Parámetros de la familia para el encabezado de los informes."""
        return {"ensemble": self.name}


class LegendreDeterministicEnsemble(BaseEnsemble):
    """Matriz determinista conjeturada; la misma en todos los ensayos."""

    name = "legendre-deterministic"

    def __init__(self, p: Optional[int] = None):
        self.p = p
        self._cache: Dict[tuple, SignMatrix] = {}

    def prime_for(self, M: int, N: int) -> int:
        if self.p is not None:
            return self.p
        p, _ = next_prime_geq(M * N + 1)
        return p

    def build_trial(self, M: int, N: int, rng: np.random.Generator) -> SignMatrix:
        key = (M, N)
        if key not in self._cache:
            self._cache[key] = build_legendre_deterministic(M, N, self.prime_for(M, N))
        return self._cache[key]

    def describe(self) -> Dict[str, Any]:
        return {"ensemble": self.name, "p": None if self.p is None else hex(self.p)}


class LegendreSeededEnsemble(BaseEnsemble):
    """Matriz de Legendre con una semilla X nueva en cada ensayo."""

    name = "legendre-seeded"

    def __init__(self, H: int = 16, p: Optional[int] = None):
        self.H = H
        self.p = p

    def build_trial(self, M: int, N: int, rng: np.random.Generator) -> SignMatrix:
        params = desk_params(M, N, self.H)
        p = self.p
        if p is None:
            p, _ = next_prime_geq(params.p_min)
        seed = Seed(BigNat(random_bits(rng, self.H)), self.H)
        return build_legendre_seeded(params, seed, p)

    def describe(self) -> Dict[str, Any]:
        return {"ensemble": self.name, "H": self.H, "p": None if self.p is None else hex(self.p)}


class BernoulliEnsemble(BaseEnsemble):
    """Línea base Bernoulli iid; la semilla del ensayo se deriva de su generador."""

    name = "bernoulli"

    def build_trial(self, M: int, N: int, rng: np.random.Generator) -> SignMatrix:
        return build_bernoulli_baseline(M, N, random_bits(rng, 63))
