"""
Modèle représentant une minutie (x, y, theta) et l'arithmétique des angles.

Convention de coordonnées : x croît vers la droite, y croît vers le bas
(coordonnées image), theta est mesuré en degrés dans le sens trigonométrique
à partir de l'axe +x.
"""

from typing import NamedTuple

from cancelmin.utils.constants import ANGLE_RANGE


class Minutia(NamedTuple):
    """
    Une minutie : position entière en pixels et orientation entière en degrés.

    Attributs:
        x (int): Abscisse (>= 0)
        y (int): Ordonnée (>= 0)
        theta (int): Orientation dans [0, 360)
    """
    x: int
    y: int
    theta: int

    def __str__(self) -> str:
        return f"({self.x}, {self.y}, {self.theta})"


def angle_diff(a: float, b: float) -> float:
    """
    Écart angulaire minimal entre deux orientations.

    Les entrées sont normalisées modulo 360 avant le calcul.

    Args:
        a (float): Premier angle en degrés
        b (float): Second angle en degrés

    Returns:
        float: min(|a-b|, 360-|a-b|), dans [0, 180]

    Exemples:
        >>> angle_diff(350, 10)
        20
        >>> angle_diff(90, 271)
        179
    """
    delta = abs(a % ANGLE_RANGE - b % ANGLE_RANGE)
    return min(delta, ANGLE_RANGE - delta)
