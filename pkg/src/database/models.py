from typing import Any, Dict

from sqlalchemy import Boolean, Column, ForeignKey, Integer, String, Text
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class RunRecord(Base):
    """Modelo de tabla runs (una ejecución de la CLI)."""

    __tablename__ = 'runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    command = Column(String(32), nullable=False)
    tool = Column(String(64))
    version = Column(String(16))
    log_convention = Column(String(16))
    config = Column(Text)
    passed = Column(Boolean)

    def to_dict(self) -> Dict[str, Any]:
        """Convierte el modelo a un diccionario."""
        return {c.name: getattr(self, c.name) for c in self.__table__.columns}


class CheckRecordRow(Base):
    """Modelo de tabla check_records (un registro de verificación)."""

    __tablename__ = 'check_records'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('runs.id'))
    position = Column(Integer, default=0)
    check_name = Column(String(64), nullable=False)
    params = Column(Text)
    value = Column(Text)
    bound = Column(Text)
    passed = Column(Boolean)
    witness = Column(Text)
    mode = Column(String(32))
    seed = Column(String(64))
    severity = Column(String(8))

    def to_dict(self) -> Dict[str, Any]:
        """Convierte el modelo a un diccionario."""
        return {c.name: getattr(self, c.name) for c in self.__table__.columns}
