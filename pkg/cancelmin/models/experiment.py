"""
Modèles du protocole d'évaluation : profils de doigts, modèle de perturbation,
configuration d'expérience et lignes de rapport.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from cancelmin.models.matching import MatcherParams
from cancelmin.utils.constants import (
    CHILD_L_VALUES,
    DEFAULT_DROP_PROB,
    DEFAULT_FOOTPRINT,
    DEFAULT_HEIGHT,
    DEFAULT_JITTER_SIGMA,
    DEFAULT_MAX_ROTATION,
    DEFAULT_MAX_TRANSLATION,
    DEFAULT_SPURIOUS_COUNT_MAX,
    DEFAULT_THETA_JITTER_SIGMA,
    DEFAULT_WIDTH,
    FIRST_GENERATION_L,
    FIRST_GENERATION_N,
)
from cancelmin.utils.errors import ConfigError, ContractError
from cancelmin.utils.validators import (
    validate_dimensions,
    validate_non_negative,
    validate_positive,
    validate_probability,
)


class ExperimentKind(Enum):
    """Énumération des expériences (et des étiquettes de lignes de rapport)."""
    GENUINE_VT = "GenuineVt"
    RT_VS_VT = "RtVsVt"
    IMPOSTOR_VT = "ImpostorVt"
    DIVERSITY_VT = "DiversityVt"
    SECOND_GENERATION = "SecondGeneration"
    CROSS_GENERATION = "CrossGeneration"
    SIBLING_MATCHING = "SiblingMatching"
    REAL_GENUINE = "RealGenuine"
    FIRST_GENERATION = "FirstGeneration"


@dataclass(frozen=True)
class FingerProfile:
    """
    Profil statistique d'une base de doigts simulés.

    Attributs:
        mean_minutiae (float): Nombre moyen de minuties par doigt (> 0)
        std_minutiae (float): Écart-type du nombre de minuties (>= 0)
        min_minutiae (int): Nombre minimal de minuties (>= 2)
        width (int): Largeur de l'image en pixels
        height (int): Hauteur de l'image en pixels
        impressions (int): Nombre d'impressions par doigt dans la base d'origine
        footprint (float): Fraction de chaque axe de l'image couverte par l'ellipse
            centrée du doigt, dans (0, 1] (1 = toute l'image)
    """
    mean_minutiae: float = 58.0
    std_minutiae: float = 18.0
    min_minutiae: int = 2
    width: int = DEFAULT_WIDTH
    height: int = DEFAULT_HEIGHT
    impressions: int = 8
    footprint: float = DEFAULT_FOOTPRINT

    def __post_init__(self):
        if not self.mean_minutiae > 0:
            raise ContractError(f"mean_minutiae doit être > 0 (reçu : {self.mean_minutiae}).")
        validate_non_negative(self.std_minutiae, "std_minutiae")
        if self.min_minutiae < 2:
            raise ContractError(f"min_minutiae doit être >= 2 (reçu : {self.min_minutiae}).")
        validate_dimensions(self.width, self.height)
        if not 0 < self.footprint <= 1:
            raise ContractError(f"footprint doit être dans (0, 1] (reçu : {self.footprint}).")


@dataclass(frozen=True)
class PerturbationModel:
    """
    Variations entre deux impressions d'un même doigt.

    Attributs:
        max_rotation (float): Rotation globale maximale en degrés
        max_translation (float): Translation globale maximale en pixels (par axe)
        jitter_sigma (float): Écart-type du bruit de position en pixels
        theta_jitter_sigma (float): Écart-type du bruit d'orientation en degrés
        drop_prob (float): Probabilité de perdre une minutie
        spurious_count_max (int): Nombre maximal de minuties parasites ajoutées
    """
    max_rotation: float = DEFAULT_MAX_ROTATION
    max_translation: float = DEFAULT_MAX_TRANSLATION
    jitter_sigma: float = DEFAULT_JITTER_SIGMA
    theta_jitter_sigma: float = DEFAULT_THETA_JITTER_SIGMA
    drop_prob: float = DEFAULT_DROP_PROB
    spurious_count_max: int = DEFAULT_SPURIOUS_COUNT_MAX

    def __post_init__(self):
        validate_non_negative(self.max_rotation, "max_rotation")
        validate_non_negative(self.max_translation, "max_translation")
        validate_non_negative(self.jitter_sigma, "jitter_sigma")
        validate_non_negative(self.theta_jitter_sigma, "theta_jitter_sigma")
        validate_probability(self.drop_prob, "drop_prob")
        validate_non_negative(self.spurious_count_max, "spurious_count_max")


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Configuration complète d'une expérience.

    Toute expérience est une fonction pure de cette configuration
    (master_seed compris).
    """
    experiment: ExperimentKind = ExperimentKind.GENUINE_VT
    master_seed: int = 0
    fingers: int = 10
    impressions: int = 4
    profile: FingerProfile = field(default_factory=FingerProfile)
    perturbation: PerturbationModel = field(default_factory=PerturbationModel)
    n_values: Tuple[int, ...] = (50, 150, 2000)
    l_values: Tuple[int, ...] = (1,)
    matcher: MatcherParams = field(default_factory=MatcherParams)
    first_generation_n: int = FIRST_GENERATION_N
    first_generation_l: int = FIRST_GENERATION_L
    child_l_values: Tuple[int, ...] = CHILD_L_VALUES
    include_first_generation: bool = False
    workers: int = 1

    def validate(self):
        """
        Vérifie les invariants de la configuration pour l'expérience choisie.

        Raises:
            ConfigError: Si la configuration ne permet pas l'expérience
        """
        if self.master_seed < 0 or self.master_seed >= 2 ** 64:
            raise ConfigError(f"master_seed doit tenir sur 64 bits non signés (reçu : {self.master_seed}).")
        if self.fingers < 1:
            raise ConfigError("Il faut au moins un doigt.")
        if self.impressions < 1:
            raise ConfigError("Il faut au moins une impression par doigt.")
        if self.workers < 1:
            raise ConfigError("workers doit être >= 1.")
        if not self.n_values:
            raise ConfigError("n_values ne peut pas être vide.")
        for n in self.n_values:
            validate_positive(n, "n_values")
        for l in tuple(self.l_values) + tuple(self.child_l_values):
            validate_positive(l, "l_values")
        validate_positive(self.first_generation_n, "first_generation_n")
        validate_positive(self.first_generation_l, "first_generation_l")

        kind = self.experiment
        if kind == ExperimentKind.IMPOSTOR_VT and self.fingers < 2:
            raise ConfigError("L'expérience ImpostorVt exige au moins 2 doigts.")
        genuine_kinds = (
            ExperimentKind.GENUINE_VT,
            ExperimentKind.SECOND_GENERATION,
            ExperimentKind.REAL_GENUINE,
        )
        if kind in genuine_kinds and self.impressions < 2:
            raise ConfigError(f"L'expérience {kind.value} exige au moins 2 impressions par doigt.")
        if not self.l_values and kind in (
            ExperimentKind.GENUINE_VT,
            ExperimentKind.RT_VS_VT,
            ExperimentKind.IMPOSTOR_VT,
            ExperimentKind.DIVERSITY_VT,
        ):
            raise ConfigError("l_values ne peut pas être vide.")

        # Le rang L ne peut pas dépasser la taille du ST
        smallest_n = min(self.n_values)
        if kind in (
            ExperimentKind.GENUINE_VT,
            ExperimentKind.RT_VS_VT,
            ExperimentKind.IMPOSTOR_VT,
            ExperimentKind.DIVERSITY_VT,
        ) and max(self.l_values) > smallest_n:
            raise ConfigError(f"Un rang de l_values dépasse la plus petite taille de ST ({smallest_n}).")
        if kind in (
            ExperimentKind.SECOND_GENERATION,
            ExperimentKind.CROSS_GENERATION,
            ExperimentKind.SIBLING_MATCHING,
        ):
            if not self.child_l_values:
                raise ConfigError("child_l_values ne peut pas être vide.")
            if max(self.child_l_values) > smallest_n:
                raise ConfigError(f"Un rang de child_l_values dépasse la plus petite taille de ST ({smallest_n}).")
            if self.first_generation_l > self.first_generation_n:
                raise ConfigError("first_generation_l dépasse first_generation_n.")
            if self.include_first_generation and self.first_generation_l > smallest_n:
                raise ConfigError(f"first_generation_l dépasse la plus petite taille de ST ({smallest_n}).")


@dataclass(frozen=True)
class ReportRow:
    """
    Unité d'agrégation du rapport (une case d'un tableau N x L).

    Attributs:
        experiment (str): Étiquette de l'expérience
        n (int): Taille du ST
        l (int): Rang L (rang enfant pour les expériences croisées)
        l2 (int, optional): Second rang (paires croisées ou sœurs), None sinon
        mean (float): Score moyen
        std (float): Écart-type (formule de population)
        trials (int): Nombre d'appariements agrégés
    """
    experiment: str
    n: int
    l: int
    l2: Optional[int]
    mean: float
    std: float
    trials: int

    def __post_init__(self):
        if self.trials < 1:
            raise ContractError(f"Une ligne de rapport exige au moins un essai (reçu : {self.trials}).")
        if self.std < 0:
            raise ContractError(f"Écart-type négatif : {self.std}.")

    def sort_key(self) -> tuple:
        """Clé de tri (experiment, n, l, l2), l2 absent en premier."""
        return (self.experiment, self.n, self.l, -1 if self.l2 is None else self.l2)
