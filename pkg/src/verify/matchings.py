"""
Identidad de coloreo de emparejamientos perfectos:
Σ_{M2} M^{#componentes(M0 ∪ M2)} = (M+q-2)!! / (M-2)!!.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, List, Tuple

logger = logging.getLogger(__name__)

MAX_Q = 12

Matching = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class MatchingCheck:
    q: int
    M: int
    brute: int
    formula: int
    matchings: int

    @property
    def matchings_expected(self) -> int:
        return double_factorial(self.q - 1)

    @property
    def passed(self) -> bool:
        return self.brute == self.formula and self.matchings == self.matchings_expected


def double_factorial(n: int) -> int:
    """n!! para n >= -1, con (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError(f"Doble factorial no definido para {n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def perfect_matchings(points: List[int]) -> Iterator[Matching]:
    """Todos los emparejamientos perfectos de ``points`` (longitud par)."""
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for tail in perfect_matchings(remaining):
            yield ((first, partner),) + tail


def count_components(q: int, *matchings: Matching) -> int:
    """Componentes conexas del multigrafo unión sobre {0..q-1}."""
    parent = list(range(q))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    components = q
    for matching in matchings:
        for a, b in matching:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                components -= 1
    return components


def matching_coloring_count(q: int, M: int) -> MatchingCheck:
    """
    Compara por fuerza bruta la suma de coloreos con el cociente de dobles
    factoriales.

    Args:
        q: Número par de puntos, 2 <= q <= 12.
        M: Número de colores, M >= 1.

    Returns:
        MatchingCheck con ambos conteos y el número de emparejamientos.
    """
    if q % 2:
        raise ValueError(f"q debe ser par: {q}")
    if not 2 <= q <= MAX_Q:
        raise ValueError(f"q fuera del rango de fuerza bruta [2, {MAX_Q}]: {q}")
    if M < 1:
        raise ValueError(f"M debe ser >= 1: {M}")

    base = tuple((2 * i, 2 * i + 1) for i in range(q // 2))
    brute = 0
    total = 0
    for matching in perfect_matchings(list(range(q))):
        brute += M ** count_components(q, base, matching)
        total += 1
    formula = double_factorial(M + q - 2) // double_factorial(M - 2)
    check = MatchingCheck(q=q, M=M, brute=brute, formula=formula, matchings=total)
    if not check.passed:
        logger.error(f"Identidad de emparejamientos violada: q={q}, M={M}, {brute} != {formula}")
    return check
