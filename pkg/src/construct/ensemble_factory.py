import inspect
import logging
from typing import Any, Dict, Type

from src.construct.ensembles import (
    BaseEnsemble,
    BernoulliEnsemble,
    LegendreDeterministicEnsemble,
    LegendreSeededEnsemble,
)

logger = logging.getLogger(__name__)


class EnsembleFactory:
    """
    Fábrica que proporciona la familia de matrices adecuada según su nombre.
    """

    def __init__(self):
        """Inicializa el registro de familias."""
        self.ensembles_by_name: Dict[str, Type[BaseEnsemble]] = {}
        self._register_ensembles()

    def _register_ensembles(self):
        """Registra todas las familias conocidas."""
        self.register_ensemble(LegendreDeterministicEnsemble)
        self.register_ensemble(LegendreSeededEnsemble)
        self.register_ensemble(BernoulliEnsemble)

    def register_ensemble(self, ensemble_class: Type[BaseEnsemble]):
        """
        Registra una familia bajo su nombre.

        Args:
            ensemble_class: Clase de la familia a registrar.
        """
        self.ensembles_by_name[ensemble_class.name] = ensemble_class

    @property
    def names(self):
        return sorted(self.ensembles_by_name)

    def get_ensemble(self, name: str, **options: Any) -> BaseEnsemble:
        """
        Obtiene una instancia de la familia indicada.

        Args:
            name: Nombre registrado.
            options: Argumentos del constructor (p, H).

        Returns:
            Instancia de la familia.
        """
        if name not in self.ensembles_by_name:
            raise ValueError(f"Familia desconocida: {name}. Opciones: {', '.join(self.names)}")
        ensemble_class = self.ensembles_by_name[name]
        params = inspect.signature(ensemble_class.__init__).parameters
        accepted = {k: v for k, v in options.items() if v is not None and k in params}
        logger.info(f"Usando la familia {ensemble_class.__name__} con opciones {accepted}")
        return ensemble_class(**accepted)
