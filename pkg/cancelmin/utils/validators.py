"""
Utilitaires de validation (bornes, entiers positifs, probabilités, listes).
"""

from typing import List

from cancelmin.utils.constants import ANGLE_RANGE
from cancelmin.utils.errors import ConfigError, ContractError


def lattice_size(width: int, height: int) -> int:
    """
    Retourne le nombre de triplets (x, y, theta) distincts d'un gabarit.

    Args:
        width (int): Largeur en pixels
        height (int): Hauteur en pixels

    Returns:
        int: width * height * 360 (borne des tiroirs pour des minuties distinctes)
    """
    return width * height * ANGLE_RANGE


def validate_dimensions(width: int, height: int):
    """
    Vérifie que les dimensions d'un gabarit sont strictement positives.

    Raises:
        ContractError: Si une dimension est nulle ou négative
    """
    if width < 1 or height < 1:
        raise ContractError(
            f"Dimensions invalides : {width}x{height}. Largeur et hauteur doivent être >= 1."
        )


def validate_positive(value: int, name: str):
    """
    Vérifie qu'un entier est >= 1.

    Args:
        value (int): Valeur à vérifier
        name (str): Nom du paramètre (pour le message d'erreur)

    Raises:
        ContractError: Si la valeur est < 1
    """
    if value < 1:
        raise ContractError(f"Le paramètre {name} doit être >= 1 (reçu : {value}).")


def validate_non_negative(value: float, name: str):
    """Vérifie qu'une valeur est >= 0."""
    if value < 0:
        raise ContractError(f"Le paramètre {name} doit être >= 0 (reçu : {value}).")


def validate_probability(value: float, name: str):
    """Vérifie qu'une probabilité est dans [0, 1]."""
    if not 0.0 <= value <= 1.0:
        raise ContractError(f"Le paramètre {name} doit être dans [0, 1] (reçu : {value}).")


def parse_int_list(text: str, name: str) -> List[int]:
    """
    Parse une liste d'entiers séparés par des virgules (ex: "50,150,2000").

    Args:
        text (str): Texte à parser
        name (str): Nom de la clé de configuration

    Returns:
        List[int]: Liste des entiers, dans l'ordre du texte

    Raises:
        ConfigError: Si un élément n'est pas un entier ou si la liste est vide
    """
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ConfigError(f"La clé {name} ne peut pas être vide.")
    try:
        return [int(item) for item in items]
    except ValueError:
        raise ConfigError(f"La clé {name} attend des entiers séparés par des virgules (reçu : {text!r}).")


def parse_bool(text: str, name: str) -> bool:
    """Parse un booléen de configuration (true/false, yes/no, 1/0)."""
    value = text.strip().lower()
    if value in ("true", "yes", "1", "oui"):
        return True
    if value in ("false", "no", "0", "non"):
        return False
    raise ConfigError(f"La clé {name} attend un booléen (reçu : {text!r}).")
