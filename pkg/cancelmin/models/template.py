"""
Modèle représentant un gabarit de minuties (RT, ST ou VT) et sa provenance.
"""

from enum import Enum
from typing import FrozenSet, Iterable, Iterator, Optional, Tuple

from cancelmin.models.minutia import Minutia
from cancelmin.utils.constants import ANGLE_RANGE
from cancelmin.utils.errors import TemplateValidationError
from cancelmin.utils.validators import validate_dimensions


class TemplateKind(Enum):
    """Énumération des types de gabarits."""
    REAL = "RT"
    SYNTHETIC = "ST"
    VERIFICATION = "VT"


class Provenance:
    """
    Origine d'un gabarit.

    Attributs:
        finger_id (str): Étiquette opaque du doigt
        impression_id (str): Étiquette opaque de l'impression
        generation (int): 0 = réel, 1 = VT de 1re génération, 2 = VT de 2e génération, ...
        st_seed (int, optional): Graine du ST parent (ou du ST lui-même pour un ST)
        ordinal_l (int, optional): Rang L du voisin sélectionné
        st_size (int, optional): Taille N du ST parent
    """

    def __init__(
        self,
        finger_id: str = "",
        impression_id: str = "",
        generation: int = 0,
        st_seed: Optional[int] = None,
        ordinal_l: Optional[int] = None,
        st_size: Optional[int] = None
    ):
        if generation < 0:
            raise TemplateValidationError(f"Génération invalide : {generation} (doit être >= 0).")
        if generation >= 1 and (st_seed is None or ordinal_l is None):
            raise TemplateValidationError(
                "Une provenance de génération >= 1 doit indiquer la graine du ST et le rang L."
            )
        if ordinal_l is not None and ordinal_l < 1:
            raise TemplateValidationError(f"Rang L invalide : {ordinal_l} (doit être >= 1).")
        self._finger_id = str(finger_id)
        self._impression_id = str(impression_id)
        self._generation = generation
        self._st_seed = st_seed
        self._ordinal_l = ordinal_l
        self._st_size = st_size

    @property
    def finger_id(self) -> str:
        return self._finger_id

    @property
    def impression_id(self) -> str:
        return self._impression_id

    @property
    def generation(self) -> int:
        return self._generation

    @property
    def st_seed(self) -> Optional[int]:
        return self._st_seed

    @property
    def ordinal_l(self) -> Optional[int]:
        return self._ordinal_l

    @property
    def st_size(self) -> Optional[int]:
        return self._st_size

    def _key(self) -> tuple:
        return (
            self._finger_id,
            self._impression_id,
            self._generation,
            self._st_seed,
            self._ordinal_l,
            self._st_size,
        )

    def to_dict(self) -> dict:
        """
        Convertit la provenance en dictionnaire pour la sérialisation.

        Returns:
            dict: Dictionnaire contenant tous les champs
        """
        return {
            "finger_id": self._finger_id,
            "impression_id": self._impression_id,
            "generation": self._generation,
            "st_seed": self._st_seed,
            "ordinal_l": self._ordinal_l,
            "st_size": self._st_size,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Provenance':
        """Crée une Provenance à partir d'un dictionnaire."""
        return cls(
            finger_id=data.get("finger_id", ""),
            impression_id=data.get("impression_id", ""),
            generation=data.get("generation", 0),
            st_seed=data.get("st_seed"),
            ordinal_l=data.get("ordinal_l"),
            st_size=data.get("st_size"),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Provenance):
            return False
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return (
            f"Provenance(finger_id='{self._finger_id}', impression_id='{self._impression_id}', "
            f"generation={self._generation}, st_seed={self._st_seed}, ordinal_l={self._ordinal_l})"
        )


class Template:
    """
    Gabarit de minuties borné, immuable après construction.

    Invariants vérifiés à la construction :
    - chaque minutie vérifie 0 <= x < width, 0 <= y < height, 0 <= theta < 360 ;
    - pour un ST ou un VT, aucun triplet (x, y, theta) n'apparaît deux fois.

    Attributs:
        minutiae (Tuple[Minutia, ...]): Minuties dans l'ordre d'origine
        width (int): Largeur en pixels
        height (int): Hauteur en pixels
        kind (TemplateKind): RT, ST ou VT
        provenance (Provenance): Origine du gabarit
    """

    def __init__(
        self,
        minutiae: Iterable[Minutia],
        width: int,
        height: int,
        kind: TemplateKind = TemplateKind.REAL,
        provenance: Optional[Provenance] = None
    ):
        validate_dimensions(width, height)
        self._minutiae: Tuple[Minutia, ...] = tuple(Minutia(*m) for m in minutiae)
        self._width = width
        self._height = height
        self._kind = kind if isinstance(kind, TemplateKind) else TemplateKind(kind)
        self._provenance = provenance if provenance is not None else Provenance()
        self._minutia_set: Optional[FrozenSet[Minutia]] = None
        self._validate()

    def _validate(self):
        """Vérifie les bornes et l'unicité des triplets (ST/VT)."""
        seen = set()
        check_duplicates = self._kind in (TemplateKind.SYNTHETIC, TemplateKind.VERIFICATION)
        for index, m in enumerate(self._minutiae):
            if not (0 <= m.x < self._width and 0 <= m.y < self._height):
                raise TemplateValidationError(
                    f"Minutie {index} {m} hors des bornes {self._width}x{self._height}.",
                    minutia=m,
                    index=index,
                )
            if not 0 <= m.theta < ANGLE_RANGE:
                raise TemplateValidationError(
                    f"Minutie {index} {m} : theta doit être dans [0, 360).",
                    minutia=m,
                    index=index,
                )
            if check_duplicates:
                if m in seen:
                    raise TemplateValidationError(
                        f"Minutie {index} {m} en double dans un gabarit {self._kind.value}.",
                        minutia=m,
                        index=index,
                    )
                seen.add(m)

    @property
    def minutiae(self) -> Tuple[Minutia, ...]:
        """Retourne les minuties dans l'ordre d'origine."""
        return self._minutiae

    @property
    def width(self) -> int:
        return self._width

    @property
    def height(self) -> int:
        return self._height

    @property
    def kind(self) -> TemplateKind:
        return self._kind

    @property
    def provenance(self) -> Provenance:
        return self._provenance

    @property
    def generation(self) -> int:
        """Raccourci vers provenance.generation."""
        return self._provenance.generation

    def minutia_set(self) -> FrozenSet[Minutia]:
        """Retourne l'ensemble des triplets (calculé une seule fois)."""
        if self._minutia_set is None:
            self._minutia_set = frozenset(self._minutiae)
        return self._minutia_set

    def same_dimensions(self, other: 'Template') -> bool:
        """Vérifie que deux gabarits partagent les mêmes dimensions."""
        return self._width == other.width and self._height == other.height

    def to_dict(self, include_minutiae: bool = True) -> dict:
        """
        Convertit le gabarit en dictionnaire pour la sérialisation.

        Args:
            include_minutiae (bool): Inclure la liste des minuties (False pour un fichier de provenance)

        Returns:
            dict: Dictionnaire décrivant le gabarit
        """
        data = {
            "kind": self._kind.value,
            "width": self._width,
            "height": self._height,
            "count": len(self._minutiae),
            "provenance": self._provenance.to_dict(),
        }
        if include_minutiae:
            data["minutiae"] = [list(m) for m in self._minutiae]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'Template':
        """Crée un Template à partir d'un dictionnaire produit par to_dict()."""
        return cls(
            minutiae=[Minutia(*m) for m in data.get("minutiae", [])],
            width=data["width"],
            height=data["height"],
            kind=TemplateKind(data.get("kind", "RT")),
            provenance=Provenance.from_dict(data.get("provenance", {})),
        )

    def __len__(self) -> int:
        return len(self._minutiae)

    def __iter__(self) -> Iterator[Minutia]:
        return iter(self._minutiae)

    def __getitem__(self, index: int) -> Minutia:
        return self._minutiae[index]

    def __str__(self) -> str:
        return f"Gabarit {self._kind.value} [{self._width}x{self._height}] - {len(self._minutiae)} minutie(s)"

    def __repr__(self) -> str:
        return (
            f"Template(kind={self._kind}, width={self._width}, height={self._height}, "
            f"count={len(self._minutiae)}, provenance={self._provenance!r})"
        )

    def __eq__(self, other) -> bool:
        """Compare deux gabarits (minuties, dimensions, type et provenance)."""
        if not isinstance(other, Template):
            return False
        return (
            self._minutiae == other._minutiae
            and self._width == other._width
            and self._height == other._height
            and self._kind == other._kind
            and self._provenance == other._provenance
        )

    def __hash__(self) -> int:
        return hash((self._minutiae, self._width, self._height, self._kind))
