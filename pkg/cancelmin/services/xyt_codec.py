"""
Service de lecture/écriture du format texte .xyt.

Format : une minutie par ligne, `x y theta [qualité]`, entiers décimaux ASCII
séparés par des blancs. La qualité est tolérée et ignorée. En écriture :
`x y theta`, espaces simples, fins de ligne '\\n'.
"""

from pathlib import Path
from typing import List, Optional, Union

from cancelmin.models.minutia import Minutia
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.file_manager import FileManager
from cancelmin.utils.constants import PROVENANCE_SUFFIX
from cancelmin.utils.errors import TemplateParseError

TextLike = Union[bytes, str]


def parse_xyt(
    text: TextLike,
    width: int,
    height: int,
    kind: TemplateKind = TemplateKind.REAL,
    provenance: Optional[Provenance] = None
) -> Template:
    """
    Parse un flux .xyt en gabarit.

    Args:
        text (bytes | str): Contenu du fichier
        width (int): Largeur du gabarit
        height (int): Hauteur du gabarit
        kind (TemplateKind): Type du gabarit (RT, ST ou VT)
        provenance (Provenance, optional): Provenance à attacher

    Returns:
        Template: Gabarit dont les minuties suivent l'ordre du fichier

    Raises:
        TemplateParseError: Ligne mal formée (jeton non entier, mauvaise arité)
        TemplateValidationError: Minutie hors bornes, theta invalide, doublon dans un ST/VT
    """
    raw = text if isinstance(text, bytes) else text.encode("utf-8")
    minutiae: List[Minutia] = []

    for line_number, raw_line in enumerate(raw.split(b"\n"), start=1):
        try:
            line = raw_line.decode("ascii")
        except UnicodeDecodeError:
            raise TemplateParseError(line_number, "caractère non ASCII.")
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) not in (3, 4):
            raise TemplateParseError(
                line_number, f"3 ou 4 entiers attendus (x y theta [qualité]), {len(tokens)} reçu(s)."
            )
        try:
            values = [int(token) for token in tokens]
        except ValueError:
            raise TemplateParseError(line_number, f"jeton non entier dans {line.strip()!r}.")
        minutiae.append(Minutia(values[0], values[1], values[2]))

    return Template(minutiae, width, height, kind, provenance)


def serialize_xyt(template: Template) -> bytes:
    """
    Sérialise un gabarit au format .xyt.

    Args:
        template (Template): Gabarit valide

    Returns:
        bytes: Une ligne `x y theta\\n` par minutie (vide si aucune minutie)
    """
    return "".join(f"{m.x} {m.y} {m.theta}\n" for m in template).encode("ascii")


def provenance_path(path: Union[str, Path]) -> Path:
    """Retourne le chemin du fichier de provenance associé à un .xyt."""
    path = Path(path)
    return path.with_name(path.name + PROVENANCE_SUFFIX)


def save_template(path: Union[str, Path], template: Template, with_provenance: bool = False):
    """
    Écrit un gabarit dans un fichier .xyt (écriture atomique).

    Args:
        path (PathLike): Destination
        template (Template): Gabarit à écrire
        with_provenance (bool): Écrire aussi `<path>.json` (provenance, sans les minuties)
    """
    FileManager.save_bytes(path, serialize_xyt(template))
    if with_provenance:
        FileManager.save_json(provenance_path(path), template.to_dict(include_minutiae=False))


def load_template(
    path: Union[str, Path],
    width: int,
    height: int,
    kind: TemplateKind = TemplateKind.REAL
) -> Template:
    """
    Charge un gabarit .xyt, avec sa provenance si un fichier `<path>.json` existe.

    Returns:
        Template: Gabarit chargé
    """
    provenance = None
    side = provenance_path(path)
    if side.exists():
        data = FileManager.load_json(side)
        provenance = Provenance.from_dict(data.get("provenance", {}))
    return parse_xyt(FileManager.load_bytes(path), width, height, kind, provenance)
