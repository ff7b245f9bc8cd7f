"""
Service de synthèse des gabarits synthétiques (ST).
"""

from typing import Callable, List, Optional, Set

from cancelmin.models.minutia import Minutia
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.generator import SeededGenerator
from cancelmin.services.logger import Logger
from cancelmin.utils.constants import ANGLE_RANGE
from cancelmin.utils.errors import ContractError
from cancelmin.utils.validators import lattice_size, validate_dimensions


def draw_distinct_minutiae(
    g: SeededGenerator,
    width: int,
    height: int,
    n: int,
    exclude: Optional[Set[Minutia]] = None,
    inside: Optional[Callable[[int, int], bool]] = None
) -> List[Minutia]:
    """
    Tire n minuties uniformes et distinctes, dans l'ordre de tirage.

    Ordre des tirages par minutie : x, puis y, puis theta. Un triplet déjà
    obtenu est rejeté et retiré.

    Args:
        g (SeededGenerator): Générateur
        width (int): Largeur
        height (int): Hauteur
        n (int): Nombre de minuties
        exclude (Set[Minutia], optional): Triplets interdits en plus des doublons
        inside (Callable, optional): Filtre sur (x, y) ; les tirages refusés sont perdus

    Returns:
        List[Minutia]: Minuties tirées
    """
    seen: Set[Minutia] = set(exclude) if exclude else set()
    minutiae: List[Minutia] = []
    while len(minutiae) < n:
        m = Minutia(g.next_uniform(width), g.next_uniform(height), g.next_uniform(ANGLE_RANGE))
        if m in seen or (inside is not None and not inside(m.x, m.y)):
            continue
        seen.add(m)
        minutiae.append(m)
    return minutiae


def synthesize(g: SeededGenerator, width: int, height: int, n: int) -> Template:
    """
    Génère un gabarit synthétique de n minuties distinctes.

    Args:
        g (SeededGenerator): Générateur (sa graine est enregistrée dans la provenance)
        width (int): Largeur en pixels (>= 1)
        height (int): Hauteur en pixels (>= 1)
        n (int): Nombre de minuties (0 <= n <= width * height * 360)

    Returns:
        Template: ST de exactement n minuties

    Raises:
        ContractError: Dimensions nulles ou n au-delà de la borne des tiroirs
    """
    validate_dimensions(width, height)
    if n < 0:
        raise ContractError(f"Le nombre de minuties doit être >= 0 (reçu : {n}).")
    if n > lattice_size(width, height):
        raise ContractError(
            f"Impossible de tirer {n} minuties distinctes sur une grille {width}x{height}x360."
        )

    minutiae = draw_distinct_minutiae(g, width, height, n)
    provenance = Provenance(st_seed=g.seed, st_size=n)
    Logger.log_synth_action("Synthèse de ST", f"graine: {g.seed}, dimensions: {width}x{height}, N: {n}")
    return Template(minutiae, width, height, TemplateKind.SYNTHETIC, provenance)


def synthesize_from_seed(seed: int, width: int, height: int, n: int) -> Template:
    """Raccourci : synthétise le ST d'une graine donnée."""
    return synthesize(SeededGenerator(seed), width, height, n)
