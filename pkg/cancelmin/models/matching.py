"""
Modèles du matcher : table de comparaison (CT), entrées de compatibilité,
paramètres et résultat d'un appariement.
"""

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from cancelmin.utils.constants import DEFAULT_BETA_TOL, DEFAULT_D_MAX, DEFAULT_D_TOL, STRICT_BETA_TOL, STRICT_D_TOL
from cancelmin.utils.errors import ContractError


@dataclass(frozen=True)
class MatcherParams:
    """
    Seuils du matcher.

    Attributs:
        d_tol (float): Tolérance relative sur les longueurs,
            |sqrt(dp) - sqrt(dg)| <= d_tol * max(sqrt(dp), sqrt(dg))
        beta_tol (float): Tolérance angulaire en degrés, dans [0, 180]
        d_max (float): Distance au carré maximale d'une paire dans la CT (math.inf = pas de coupure)
    """
    d_tol: float = DEFAULT_D_TOL
    beta_tol: float = DEFAULT_BETA_TOL
    d_max: float = DEFAULT_D_MAX

    def __post_init__(self):
        if self.d_tol < 0:
            raise ContractError(f"d_tol doit être >= 0 (reçu : {self.d_tol}).")
        if not 0 <= self.beta_tol <= 180:
            raise ContractError(f"beta_tol doit être dans [0, 180] (reçu : {self.beta_tol}).")
        if not self.d_max > 0:
            raise ContractError(f"d_max doit être > 0 (reçu : {self.d_max}).")

    @classmethod
    def uncut(cls, d_tol: float = DEFAULT_D_TOL, beta_tol: float = DEFAULT_BETA_TOL) -> 'MatcherParams':
        """Paramètres sans coupure de distance dans la CT."""
        return cls(d_tol=d_tol, beta_tol=beta_tol, d_max=math.inf)

    @classmethod
    def strict(cls) -> 'MatcherParams':
        """Seuils serrés des campagnes d'évaluation (coupure d_max par défaut)."""
        return cls(d_tol=STRICT_D_TOL, beta_tol=STRICT_BETA_TOL)

    def to_dict(self) -> dict:
        return {"d_tol": self.d_tol, "beta_tol": self.beta_tol, "d_max": self.d_max}


class CTEntry(NamedTuple):
    """
    Entrée à cinq variables d'une table de comparaison.

    Attributs:
        alpha1 (int): Indice de la première minutie (alpha1 < alpha2)
        alpha2 (int): Indice de la seconde minutie
        d (int): Distance au carré entre les deux minuties
        beta1 (float): Orientation de alpha1 relative à la droite orientée alpha1 -> alpha2, [0, 360)
        beta2 (float): Orientation de alpha2 relative à la même droite, [0, 360)
    """
    alpha1: int
    alpha2: int
    d: int
    beta1: float
    beta2: float


class ComparisonTable:
    """
    Table de comparaison intra-gabarit, stockée en colonnes numpy.

    Les entrées sont triées par d croissant, puis par (alpha1, alpha2).
    Elle contient toutes les paires de distance au carré <= d_max, et rien d'autre.
    """

    def __init__(
        self,
        size: int,
        alpha1: np.ndarray,
        alpha2: np.ndarray,
        d: np.ndarray,
        beta1: np.ndarray,
        beta2: np.ndarray,
        d_max: float
    ):
        self._size = size
        self._alpha1 = alpha1
        self._alpha2 = alpha2
        self._d = d
        self._beta1 = beta1
        self._beta2 = beta2
        self._d_max = d_max
        self._sqrt_d = np.sqrt(d.astype(np.float64))

    @property
    def size(self) -> int:
        """Nombre de minuties du gabarit d'origine."""
        return self._size

    @property
    def d_max(self) -> float:
        return self._d_max

    @property
    def alpha1(self) -> np.ndarray:
        return self._alpha1

    @property
    def alpha2(self) -> np.ndarray:
        return self._alpha2

    @property
    def d(self) -> np.ndarray:
        return self._d

    @property
    def sqrt_d(self) -> np.ndarray:
        """Longueurs des segments (racine de d), triées croissantes."""
        return self._sqrt_d

    @property
    def beta1(self) -> np.ndarray:
        return self._beta1

    @property
    def beta2(self) -> np.ndarray:
        return self._beta2

    @property
    def entries(self) -> List[CTEntry]:
        """Retourne les entrées sous forme de liste de CTEntry."""
        return [
            CTEntry(int(a1), int(a2), int(d), float(b1), float(b2))
            for a1, a2, d, b1, b2 in zip(self._alpha1, self._alpha2, self._d, self._beta1, self._beta2)
        ]

    def __len__(self) -> int:
        return len(self._d)

    def __repr__(self) -> str:
        return f"ComparisonTable(size={self._size}, entries={len(self)}, d_max={self._d_max})"


class CompatEntry(NamedTuple):
    """
    Entrée de la table de compatibilité inter-gabarits.

    Attributs:
        probe_ct_idx (int): Indice dans la CT de la sonde
        gallery_ct_idx (int): Indice dans la CT de la galerie
        correspondence (Tuple[Tuple[int, int], Tuple[int, int]]):
            ((sonde alpha1, galerie), (sonde alpha2, galerie))
        swapped (bool): True si l'appariement croisé (alpha1 <-> alpha2 de la galerie) a été utilisé
    """
    probe_ct_idx: int
    gallery_ct_idx: int
    correspondence: Tuple[Tuple[int, int], Tuple[int, int]]
    swapped: bool = False


@dataclass(frozen=True)
class MatchResult:
    """
    Résultat d'un appariement.

    Attributs:
        score (int): Nombre de correspondances de minuties distinctes dans la meilleure toile
        compat_count (int): Nombre total d'entrées de compatibilité
        params (MatcherParams): Seuils utilisés
    """
    score: int
    compat_count: int
    params: Optional[MatcherParams] = field(default=None)

    def __int__(self) -> int:
        return self.score
