"""
Registros de verificación: construcción, validación con JSON Schema y
renderizado en texto o JSON.
"""
import enum
import json
import logging
import math
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import jsonschema
import numpy as np

from config.config import APP_CONFIG

logger = logging.getLogger(__name__)

RECORD_FIELDS = ("check", "params", "value", "bound", "pass", "witness", "mode", "seed", "severity")

RECORD_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": list(RECORD_FIELDS),
    "properties": {
        "check": {"type": "string", "minLength": 1},
        "params": {"type": "object"},
        "value": {"type": ["number", "string", "null"]},
        "bound": {"type": ["number", "null"]},
        "pass": {"type": ["boolean", "null"]},
        "witness": {"type": ["array", "object", "string", "null"]},
        "mode": {"type": "string"},
        "seed": {"type": ["integer", "null"]},
        "severity": {"enum": ["hard", "soft"]},
    },
}

_VALIDATOR = jsonschema.Draft7Validator(RECORD_SCHEMA)


def to_plain(value: Any) -> Any:
    """Convierte tipos de numpy, tuplas y fracciones a tipos JSON."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, enum.Enum):
        return value.value
    return value


def make_record(check: str, params: Dict[str, Any], value: Any = None, bound: Optional[float] = None,
                passed: Optional[bool] = None, witness: Any = None, mode: str = "exact",
                seed: Optional[int] = None, severity: str = "hard") -> Dict[str, Any]:
    """
    Construye un registro con los campos estables de los informes.

    Args:
        check: Nombre de la comprobación.
        params: Parámetros de la comprobación.
        value: Valor medido.
        bound: Cota con la que se compara.
        passed: Resultado; None si la comprobación es solo descriptiva.
        witness: Soporte, par o conjunto que alcanza el valor.
        mode: exact, exhaustive, sampled, descriptive, unavailable o refused.
        seed: Semilla utilizada, si la hay.
        severity: hard (afecta al código de salida) o soft.

    Returns:
        Diccionario validado.
    """
    record = {
        "check": check,
        "params": to_plain(params),
        "value": to_plain(value),
        "bound": to_plain(bound),
        "pass": None if passed is None else bool(passed),
        "witness": to_plain(witness),
        "mode": mode,
        "seed": None if seed is None else int(seed),
        "severity": severity,
    }
    valid, errors = validate_record(record)
    if not valid:
        raise ValueError(f"Registro inválido para '{check}': {errors}")
    return record


def validate_record(record: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """
    Valida un registro contra RECORD_SCHEMA.

    Returns:
        Tupla (válido, lista_errores).
    """
    errors = [error.message for error in _VALIDATOR.iter_errors(record)]
    return len(errors) == 0, errors


def hard_failures(records: Iterable[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Registros 'hard' cuyo resultado es False."""
    return [r for r in records if r["severity"] == "hard" and r["pass"] is False]


def _compact(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def render_text(config: Dict[str, Any], records: Sequence[Dict[str, Any]]) -> str:
    """
    Informe de texto: cabecera con herramienta, versión, convención de
    logaritmos y configuración resuelta; después una línea clave=valor por
    registro.
    """
    lines = [
        f"# tool {APP_CONFIG['name']}",
        f"# version {APP_CONFIG['version']}",
        f"# log {APP_CONFIG['log_convention']}",
        f"# config {_compact(to_plain(config))}",
    ]
    for record in records:
        lines.append(" ".join(f"{key}={_compact(record[key])}" for key in RECORD_FIELDS))
    return "\n".join(lines) + "\n"


def render_json(config: Dict[str, Any], records: Sequence[Dict[str, Any]]) -> str:
    """Informe JSON con claves ordenadas y sangría de 2 espacios."""
    document = {
        "tool": APP_CONFIG["name"],
        "version": APP_CONFIG["version"],
        "log_convention": APP_CONFIG["log_convention"],
        "config": to_plain(config),
        "records": list(records),
    }
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render(config: Dict[str, Any], records: Sequence[Dict[str, Any]], fmt: str = "text") -> str:
    if fmt == "json":
        return render_json(config, records)
    if fmt == "text":
        return render_text(config, records)
    raise ValueError(f"Formato de informe desconocido: {fmt}")
