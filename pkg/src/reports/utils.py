import logging
from pathlib import Path
from typing import Any, Union

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def write_text(text: str, filename: Union[str, Path]) -> None:
    """Escribe un informe de texto en UTF-8."""
    Path(filename).write_text(text, encoding="utf-8")
    logger.info(f"Informe guardado en {filename}")


def table_to_csv(table: pd.DataFrame) -> str:
    """Tabla como texto CSV con cabecera fija y formato %.12g."""
    return table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def save_table(table: pd.DataFrame, filename: Union[str, Path]) -> None:
    """
    Guarda una tabla en CSV.

    Args:
        table: DataFrame a guardar.
        filename: Nombre del archivo.
    """
    Path(filename).write_text(table_to_csv(table), encoding="utf-8")
    logger.info(f"Tabla de {len(table)} filas guardada en {filename}")
