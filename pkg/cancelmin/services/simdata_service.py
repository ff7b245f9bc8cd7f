"""
Service de simulation des doigts "réels" et de leurs impressions successives.

Remplace les bases FVC/PolyU (non redistribuables) : un doigt est un gabarit
réel aléatoire, ses impressions sont des perturbations de ce gabarit.
"""

import math
from functools import lru_cache
from typing import Callable, List, Optional

import numpy as np

from cancelmin.models.experiment import FingerProfile, PerturbationModel
from cancelmin.models.minutia import Minutia
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.generator import SeededGenerator, derive_seed
from cancelmin.services.logger import Logger
from cancelmin.services.synth_service import draw_distinct_minutiae
from cancelmin.utils.constants import (
    ANGLE_RANGE,
    FINGER_PROFILES,
    PERTURBATION_PRESETS,
    ROLE_FINGER,
    ROLE_IMPRESSION,
)
from cancelmin.utils.errors import ConfigError
from cancelmin.utils.validators import lattice_size


def get_profile(name: str) -> FingerProfile:
    """
    Retourne le profil de base nommé.

    Args:
        name (str): 'fvc2004', 'fvc2006' ou 'polyu'

    Returns:
        FingerProfile: Profil correspondant

    Raises:
        ConfigError: Si le profil est inconnu
    """
    key = name.strip().lower()
    if key not in FINGER_PROFILES:
        raise ConfigError(f"Profil inconnu : {name!r} (disponibles : {', '.join(sorted(FINGER_PROFILES))}).")
    mean, std, minimum, width, height, impressions, footprint = FINGER_PROFILES[key]
    return FingerProfile(mean, std, minimum, width, height, impressions, footprint)


def get_perturbation(name: str) -> PerturbationModel:
    """
    Retourne le préréglage de perturbation nommé ('default', 'none', 'calibrated').

    Raises:
        ConfigError: Si le préréglage est inconnu
    """
    key = name.strip().lower()
    if key not in PERTURBATION_PRESETS:
        raise ConfigError(
            f"Perturbation inconnue : {name!r} (disponibles : {', '.join(sorted(PERTURBATION_PRESETS))})."
        )
    return PerturbationModel(*PERTURBATION_PRESETS[key])


def footprint_filter(profile: FingerProfile) -> Optional[Callable[[int, int], bool]]:
    """
    Retourne le test d'appartenance à l'ellipse du doigt (None si elle couvre toute l'image).

    L'ellipse est centrée sur l'image, de demi-axes footprint * width / 2
    et footprint * height / 2.
    """
    if profile.footprint >= 1:
        return None
    cx, cy = profile.width / 2, profile.height / 2
    a, b = profile.footprint * cx, profile.footprint * cy

    def inside(x: int, y: int) -> bool:
        return ((x - cx) / a) ** 2 + ((y - cy) / b) ** 2 <= 1

    return inside


@lru_cache(maxsize=16)
def footprint_capacity(profile: FingerProfile) -> int:
    """Nombre de triplets (x, y, theta) distincts disponibles dans l'emprise du doigt."""
    if profile.footprint >= 1:
        return lattice_size(profile.width, profile.height)
    cx, cy = profile.width / 2, profile.height / 2
    a, b = profile.footprint * cx, profile.footprint * cy
    x, y = np.meshgrid(np.arange(profile.width), np.arange(profile.height))
    cells = int(np.count_nonzero(((x - cx) / a) ** 2 + ((y - cy) / b) ** 2 <= 1))
    return cells * ANGLE_RANGE


def make_finger(g: SeededGenerator, profile: FingerProfile, finger_id: str = "") -> Template:
    """
    Simule le gabarit de référence d'un doigt.

    Le nombre de minuties suit une loi normale arrondie, bornée à
    [min_minutiae, capacité de l'emprise]. Les positions sont uniformes dans
    l'ellipse du doigt (voir footprint_filter), les orientations sont
    uniformes ; les doublons sont retirés.

    Args:
        g (SeededGenerator): Générateur propre au doigt
        profile (FingerProfile): Profil de la base simulée
        finger_id (str): Étiquette du doigt enregistrée dans la provenance

    Returns:
        Template: Gabarit réel (RT)
    """
    count = int(round(g.normal(profile.mean_minutiae, profile.std_minutiae)))
    count = min(max(count, profile.min_minutiae), footprint_capacity(profile))
    minutiae = draw_distinct_minutiae(g, profile.width, profile.height, count, inside=footprint_filter(profile))
    return Template(
        minutiae,
        profile.width,
        profile.height,
        TemplateKind.REAL,
        Provenance(finger_id=finger_id),
    )


def _symmetric(g: SeededGenerator, bound: float) -> float:
    """Tirage uniforme dans [-bound, bound] (0 exactement si bound = 0)."""
    if bound == 0:
        return 0.0
    return g.uniform(-bound, bound)


def perturb(rt: Template, m: PerturbationModel, g: SeededGenerator, impression_id: str = "") -> Template:
    """
    Produit une nouvelle impression plausible du même doigt.

    Étapes, dans cet ordre :
    1. rotation globale autour du centre de l'image, angle U[-max_rotation, max_rotation],
       appliquée aux coordonnées et ajoutée aux orientations ;
    2. translation globale U[-max_translation, max_translation] sur chaque axe ;
    3. bruit gaussien par minutie sur la position (jitter_sigma) et l'orientation
       (theta_jitter_sigma), arrondi à la grille entière, theta modulo 360 ;
    4. perte indépendante de chaque minutie avec la probabilité drop_prob ;
    5. ajout de U[0, spurious_count_max] minuties parasites uniformes ;
    6. suppression des minuties sorties de l'image.

    Le modèle nul rend exactement le gabarit d'entrée.

    Args:
        rt (Template): Gabarit réel d'origine
        m (PerturbationModel): Modèle de perturbation
        g (SeededGenerator): Générateur propre à l'impression
        impression_id (str): Étiquette de l'impression

    Returns:
        Template: Gabarit réel (RT), éventuellement plus court que l'entrée
    """
    width, height = rt.width, rt.height
    angle = _symmetric(g, m.max_rotation)
    tx = _symmetric(g, m.max_translation)
    ty = _symmetric(g, m.max_translation)
    cos_a, sin_a = math.cos(math.radians(angle)), math.sin(math.radians(angle))
    cx, cy = width / 2, height / 2

    moved: List[Minutia] = []
    for minutia in rt:
        # Repère mathématique (v vers le haut) pour garder theta trigonométrique
        u, v = minutia.x - cx, cy - minutia.y
        ru, rv = u * cos_a - v * sin_a, u * sin_a + v * cos_a
        x = cx + ru + tx + g.normal(0.0, m.jitter_sigma)
        y = cy - rv + ty + g.normal(0.0, m.jitter_sigma)
        theta = minutia.theta + angle + g.normal(0.0, m.theta_jitter_sigma)
        moved.append(Minutia(int(round(x)), int(round(y)), int(round(theta)) % ANGLE_RANGE))

    kept = [minutia for minutia in moved if not g.random() < m.drop_prob]

    spurious_count = g.next_uniform(m.spurious_count_max + 1)
    for _ in range(spurious_count):
        kept.append(Minutia(g.next_uniform(width), g.next_uniform(height), g.next_uniform(ANGLE_RANGE)))

    inside = [minutia for minutia in kept if 0 <= minutia.x < width and 0 <= minutia.y < height]
    provenance = Provenance(finger_id=rt.provenance.finger_id, impression_id=impression_id)
    return Template(inside, width, height, TemplateKind.REAL, provenance)


def finger_seed(master_seed: int, finger: int) -> int:
    """Sous-graine du gabarit de référence d'un doigt."""
    return derive_seed(master_seed, finger, ROLE_FINGER)


def impression_seed(master_seed: int, finger: int, impression: int) -> int:
    """Sous-graine de la perturbation d'une impression."""
    return derive_seed(master_seed, finger, impression, ROLE_IMPRESSION)


def simulate_finger(
    master_seed: int,
    finger: int,
    impressions: int,
    profile: FingerProfile,
    model: PerturbationModel
) -> List[Template]:
    """
    Simule toutes les impressions d'un doigt.

    Chaque impression est une perturbation du gabarit de référence du doigt,
    avec sa propre sous-graine.

    Returns:
        List[Template]: Impressions 0..impressions-1
    """
    base = make_finger(SeededGenerator(finger_seed(master_seed, finger)), profile, str(finger))
    return [
        perturb(base, model, SeededGenerator(impression_seed(master_seed, finger, j)), str(j))
        for j in range(impressions)
    ]


def simulate_database(
    master_seed: int,
    fingers: int,
    impressions: int,
    profile: FingerProfile,
    model: PerturbationModel
) -> List[List[Template]]:
    """
    Simule une base complète : fingers doigts x impressions impressions.

    Args:
        master_seed (int): Graine maître
        fingers (int): Nombre de doigts (>= 1)
        impressions (int): Impressions par doigt (>= 1)
        profile (FingerProfile): Profil de la base
        model (PerturbationModel): Variations entre impressions

    Returns:
        List[List[Template]]: database[i][j] = impression j du doigt i

    Raises:
        ConfigError: Si fingers ou impressions < 1
    """
    if fingers < 1 or impressions < 1:
        raise ConfigError(f"Base invalide : {fingers} doigt(s) x {impressions} impression(s).")
    database = [simulate_finger(master_seed, i, impressions, profile, model) for i in range(fingers)]
    Logger.log_simulate_action(
        "Simulation de base",
        f"graine: {master_seed}, doigts: {fingers}, impressions: {impressions}, "
        f"dimensions: {profile.width}x{profile.height}",
    )
    return database
