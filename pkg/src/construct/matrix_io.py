"""
Formato de archivo de matrices ``RIPM v1``.

    RIPM 1 <M> <N> <procedencia>
    <clave> <valor>          (campos de procedencia; p y x en hexadecimal)
    + - + ...                (M filas de N signos separados por espacios)
"""
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from src.construct.matrices import Provenance, ProvenanceKind, SignMatrix

logger = logging.getLogger(__name__)

MAGIC = "RIPM"
VERSION = "1"

# Campos de procedencia por etiqueta, en el orden en que se escriben
PROVENANCE_FIELDS: Dict[ProvenanceKind, Tuple[str, ...]] = {
    ProvenanceKind.LEGENDRE_SEEDED: ("p", "x", "h"),
    ProvenanceKind.LEGENDRE_DETERMINISTIC: ("p",),
    ProvenanceKind.BERNOULLI_IID: ("seed", "generator"),
    ProvenanceKind.SMALL_BIAS: ("q", "draw"),
}

HEX_FIELDS = {"p", "x"}


class MatrixFormatError(ValueError):
    """Error de formato con el número de línea (desde 1)."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"línea {line}: {message}")


def _field_value(prov: Provenance, key: str) -> str:
    value = {
        "p": prov.p, "x": prov.x, "h": prov.h, "seed": prov.rng_seed,
        "generator": prov.generator, "q": prov.q, "draw": prov.draw,
    }[key]
    if key in HEX_FIELDS:
        return format(value, "x")
    return str(value)


def dumps_matrix(matrix: SignMatrix) -> str:
    """Serializa una matriz en formato RIPM v1."""
    prov = matrix.provenance
    lines = [f"{MAGIC} {VERSION} {matrix.rows} {matrix.cols} {prov.tag}"]
    for key in PROVENANCE_FIELDS[prov.kind]:
        lines.append(f"{key} {_field_value(prov, key)}")
    for row in matrix.signs:
        lines.append(" ".join("+" if s > 0 else "-" for s in row))
    return "\n".join(lines) + "\n"


def _parse_provenance(kind: ProvenanceKind, lines: List[str], first_line: int) -> Provenance:
    values = {}
    for offset, (key, line) in enumerate(zip(PROVENANCE_FIELDS[kind], lines)):
        line_no = first_line + offset
        parts = line.split()
        if len(parts) != 2 or parts[0] != key:
            raise MatrixFormatError(line_no, f"se esperaba el campo '{key} <valor>'")
        raw = parts[1]
        if key == "generator":
            values[key] = raw
            continue
        try:
            values[key] = int(raw, 16) if key in HEX_FIELDS else int(raw)
        except ValueError:
            raise MatrixFormatError(line_no, f"valor inválido para '{key}': {raw!r}")
        if key in HEX_FIELDS and raw != raw.lower():
            raise MatrixFormatError(line_no, f"'{key}' debe estar en hexadecimal en minúsculas")
    return Provenance(
        kind=kind, p=values.get("p"), x=values.get("x"), h=values.get("h"),
        rng_seed=values.get("seed"), generator=values.get("generator"),
        q=values.get("q"), draw=values.get("draw"),
    )


def loads_matrix(text: str) -> SignMatrix:
    """
    Analiza una matriz en formato RIPM v1.

    Args:
        text: Contenido del archivo.

    Returns:
        SignMatrix con su procedencia.
    """
    lines = text.splitlines()
    if not lines:
        raise MatrixFormatError(1, "archivo vacío")
    header = lines[0].split()
    if len(header) != 5 or header[0] != MAGIC or header[1] != VERSION:
        raise MatrixFormatError(1, f"cabecera inválida: {lines[0]!r}")
    try:
        M, N = int(header[2]), int(header[3])
    except ValueError:
        raise MatrixFormatError(1, f"dimensiones inválidas: {lines[0]!r}")
    if M < 1 or N < 1:
        raise MatrixFormatError(1, f"dimensiones no positivas: M={M}, N={N}")
    try:
        kind = ProvenanceKind(header[4])
    except ValueError:
        raise MatrixFormatError(1, f"procedencia desconocida: {header[4]!r}")

    n_fields = len(PROVENANCE_FIELDS[kind])
    if len(lines) < 1 + n_fields:
        raise MatrixFormatError(len(lines) + 1, "faltan campos de procedencia")
    provenance = _parse_provenance(kind, lines[1:1 + n_fields], 2)

    first_row = 2 + n_fields
    rows = lines[1 + n_fields:]
    if len(rows) < M:
        raise MatrixFormatError(len(lines) + 1, f"se esperaban {M} filas, hay {len(rows)}")
    signs = np.empty((M, N), dtype=np.int8)
    for m, line in enumerate(rows[:M]):
        tokens = line.split()
        if len(tokens) != N or set(tokens) - {"+", "-"}:
            raise MatrixFormatError(first_row + m, f"se esperaban {N} signos '+'/'-'")
        signs[m] = [1 if t == "+" else -1 for t in tokens]
    for offset, line in enumerate(rows[M:]):
        if line.strip():
            raise MatrixFormatError(first_row + M + offset, "contenido inesperado tras las filas")
    return SignMatrix.from_signs(signs, provenance)


def write_matrix(matrix: SignMatrix, path: Union[str, Path]) -> None:
    """Escribe la matriz en un archivo RIPM v1."""
    Path(path).write_text(dumps_matrix(matrix), encoding="utf-8")
    logger.info(f"Matriz {matrix.rows}x{matrix.cols} ({matrix.provenance.tag}) guardada en {path}")


def read_matrix(path: Union[str, Path]) -> SignMatrix:
    """Lee una matriz RIPM v1 desde un archivo."""
    return loads_matrix(Path(path).read_text(encoding="utf-8"))
