"""Lectura y escritura de generadoras en formato de texto ``CODE v1``."""
import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.codes.biased import BiasedSet, BinaryCode

logger = logging.getLogger(__name__)

HEADER = "CODE"
VERSION = "v1"


class CodeFormatError(ValueError):
    """Error de formato con el número de línea (desde 1)."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"línea {line}: {message}")


def dumps_code(code: BinaryCode) -> str:
    """Serializa la generadora: cabecera y n filas de caracteres 0/1."""
    lines = [f"{HEADER} {VERSION} {code.n} {code.q}"]
    lines.extend("".join(str(int(b)) for b in row) for row in code.generator)
    return "\n".join(lines) + "\n"


def loads_code(text: str) -> BinaryCode:
    """
    Analiza una generadora en formato CODE v1.

    Args:
        text: Contenido del archivo.

    Returns:
        BinaryCode validado (filas independientes).
    """
    lines = text.splitlines()
    if not lines:
        raise CodeFormatError(1, "archivo vacío")
    parts = lines[0].split()
    if len(parts) != 4 or parts[0] != HEADER or parts[1] != VERSION:
        raise CodeFormatError(1, f"cabecera inválida: {lines[0]!r}")
    try:
        n, q = int(parts[2]), int(parts[3])
    except ValueError:
        raise CodeFormatError(1, f"dimensiones inválidas: {lines[0]!r}")
    if n < 1 or q < 1:
        raise CodeFormatError(1, f"dimensiones no positivas: n={n}, q={q}")

    body = lines[1:]
    if len(body) < n:
        raise CodeFormatError(len(lines) + 1, f"se esperaban {n} filas, hay {len(body)}")
    rows = []
    for offset, line in enumerate(body[:n]):
        line_no = offset + 2
        row = line.strip()
        if len(row) != q or set(row) - {"0", "1"}:
            raise CodeFormatError(line_no, f"se esperaban {q} caracteres 0/1")
        rows.append([int(c) for c in row])
    for offset, line in enumerate(body[n:]):
        if line.strip():
            raise CodeFormatError(n + 2 + offset, "contenido inesperado tras las filas")

    try:
        return BinaryCode(np.array(rows, dtype=np.uint8))
    except ValueError as e:
        raise CodeFormatError(2, str(e))


def write_code(code: BinaryCode, path: Union[str, Path]) -> None:
    """Escribe la generadora en un archivo."""
    Path(path).write_text(dumps_code(code), encoding="utf-8")
    logger.info(f"Generadora {code.n}x{code.q} guardada en {path}")


def read_code(path: Union[str, Path]) -> BinaryCode:
    """Lee una generadora desde un archivo."""
    return loads_code(Path(path).read_text(encoding="utf-8"))


BIASED_HEADER = "BIASED"


def dumps_biased(biased: BiasedSet) -> str:
    """Serializa un conjunto sesgado: cabecera y q filas de caracteres +/-."""
    lines = [f"{BIASED_HEADER} {VERSION} {biased.n} {biased.q}"]
    lines.extend("".join("+" if s > 0 else "-" for s in row) for row in biased.vectors)
    return "\n".join(lines) + "\n"


def loads_biased(text: str) -> BiasedSet:
    """Analiza un conjunto sesgado en formato BIASED v1."""
    lines = text.splitlines()
    if not lines:
        raise CodeFormatError(1, "archivo vacío")
    parts = lines[0].split()
    if len(parts) != 4 or parts[0] != BIASED_HEADER or parts[1] != VERSION:
        raise CodeFormatError(1, f"cabecera inválida: {lines[0]!r}")
    try:
        n, q = int(parts[2]), int(parts[3])
    except ValueError:
        raise CodeFormatError(1, f"dimensiones inválidas: {lines[0]!r}")
    body = [line.strip() for line in lines[1:]]
    if len(body) < q:
        raise CodeFormatError(len(lines) + 1, f"se esperaban {q} vectores, hay {len(body)}")
    vectors = []
    for offset, row in enumerate(body[:q]):
        if len(row) != n or set(row) - {"+", "-"}:
            raise CodeFormatError(offset + 2, f"se esperaban {n} caracteres +/-")
        vectors.append([1 if c == "+" else -1 for c in row])
    return BiasedSet(np.array(vectors, dtype=np.int8))
