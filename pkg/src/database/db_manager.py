"""
Módulo para gestionar el almacén opcional de ejecuciones y registros.
"""
import json
import logging
from typing import Any, Dict, List, Optional, Sequence

from sqlalchemy import create_engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import sessionmaker

from config.config import APP_CONFIG, DB_CONFIG
from src.database.models import Base, CheckRecordRow, RunRecord
from src.reports.records import hard_failures, validate_record

logger = logging.getLogger(__name__)


def _dump(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


class DatabaseManager:
    """
    Clase para gestionar las operaciones de base de datos.
    """

    def __init__(self, url: Optional[str] = None):
        """
        Inicializa el gestor de base de datos.

        Args:
            url: URL de SQLAlchemy; por defecto DB_CONFIG['url'].
        """
        self.url = url or DB_CONFIG["url"]
        self.engine = create_engine(self.url, echo=DB_CONFIG["echo"])
        self.Session = sessionmaker(bind=self.engine)

    def create_tables(self) -> None:
        """
        Crea las tablas en la base de datos si no existen.
        """
        try:
            Base.metadata.create_all(self.engine)
            logger.info("Tablas creadas o verificadas exitosamente")
        except SQLAlchemyError as e:
            logger.error(f"Error al crear tablas: {str(e)}")
            raise

    def insert_run(self, command: str, config: Dict[str, Any],
                   records: Sequence[Dict[str, Any]]) -> Optional[int]:
        """
        Inserta una ejecución y todos sus registros.

        Args:
            command: Subcomando de la CLI.
            config: Configuración resuelta.
            records: Registros de verificación.

        Returns:
            ID de la ejecución insertada o None si hubo un error.
        """
        for record in records:
            valid, errors = validate_record(record)
            if not valid:
                logger.error(f"Registro inválido, no se guarda la ejecución: {errors}")
                return None

        session = self.Session()
        try:
            run = RunRecord(
                command=command,
                tool=APP_CONFIG["name"],
                version=APP_CONFIG["version"],
                log_convention=APP_CONFIG["log_convention"],
                config=_dump(config),
                passed=not hard_failures(records),
            )
            session.add(run)
            session.flush()  # Para obtener el ID generado

            for position, record in enumerate(records):
                session.add(CheckRecordRow(
                    run_id=run.id,
                    position=position,
                    check_name=record["check"],
                    params=_dump(record["params"]),
                    value=_dump(record["value"]),
                    bound=_dump(record["bound"]),
                    passed=record["pass"],
                    witness=_dump(record["witness"]),
                    mode=record["mode"],
                    seed=None if record["seed"] is None else str(record["seed"]),
                    severity=record["severity"],
                ))

            session.commit()
            logger.info(f"Ejecución insertada exitosamente, ID: {run.id}")
            return run.id

        except SQLAlchemyError as e:
            session.rollback()
            logger.error(f"Error al insertar la ejecución: {str(e)}")
            return None
        finally:
            session.close()

    def get_run(self, run_id: int) -> Optional[Dict[str, Any]]:
        """
        Obtiene una ejecución con sus registros en el orden original.

        Args:
            run_id: ID de la ejecución.

        Returns:
            Diccionario con la ejecución y sus registros o None si no existe.
        """
        session = self.Session()
        try:
            run = session.query(RunRecord).filter_by(id=run_id).first()
            if not run:
                return None

            rows = (session.query(CheckRecordRow)
                    .filter_by(run_id=run_id)
                    .order_by(CheckRecordRow.position)
                    .all())
            records: List[Dict[str, Any]] = [{
                "check": row.check_name,
                "params": json.loads(row.params),
                "value": json.loads(row.value),
                "bound": json.loads(row.bound),
                "pass": row.passed,
                "witness": json.loads(row.witness),
                "mode": row.mode,
                "seed": None if row.seed is None else int(row.seed),
                "severity": row.severity,
            } for row in rows]

            run_info = run.to_dict()
            run_info["config"] = json.loads(run.config)
            return {"run": run_info, "records": records}

        except SQLAlchemyError as e:
            logger.error(f"Error al obtener la ejecución ID {run_id}: {str(e)}")
            return None
        finally:
            session.close()
