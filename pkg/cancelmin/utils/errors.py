"""
Exceptions de l'application.

Toutes dérivent de ValueError : un appelant qui attrape ValueError
continue de fonctionner.
"""

from typing import Optional


class CancelminError(ValueError):
    """Erreur de base du domaine (rapportée par la CLI avec le code 1)."""


class ContractError(CancelminError):
    """Précondition d'une opération non respectée (n = 0, k > |ST|, etc.)."""


class ConfigError(CancelminError):
    """Fichier ou valeur de configuration invalide."""


class TemplateParseError(CancelminError):
    """
    Ligne mal formée dans un fichier .xyt.

    Attributs:
        line_number (int): Numéro de la ligne fautive (à partir de 1)
    """

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"Ligne {line_number} : {message}")


class TemplateValidationError(CancelminError):
    """
    Minutie invalide pour le gabarit (hors bornes, angle invalide, doublon).

    Attributs:
        minutia: La minutie fautive (ou None)
        index (int, optional): Position de la minutie dans le gabarit
    """

    def __init__(self, message: str, minutia=None, index: Optional[int] = None):
        self.minutia = minutia
        self.index = index
        super().__init__(message)


class ReportFormatError(CancelminError):
    """Rapport CSV illisible (en-tête ou ligne invalide)."""
