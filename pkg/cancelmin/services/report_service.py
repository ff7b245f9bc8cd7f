"""
Service de génération des rapports CSV d'évaluation.

Format : en-tête `experiment,n,l,l2,mean,std,trials`, une ligne par case
(N, L) ; `l2` vide sauf pour les lignes croisées ou sœurs ; moyennes et
écarts-types à 4 décimales ; lignes triées par (experiment, n, l, l2).
"""

import csv
import io
from pathlib import Path
from typing import BinaryIO, List, Optional, Sequence, Union

from cancelmin.models.experiment import ReportRow
from cancelmin.services.file_manager import FileManager
from cancelmin.utils.constants import REPORT_DECIMALS, REPORT_HEADER
from cancelmin.utils.errors import ReportFormatError

Destination = Union[str, Path, BinaryIO]


def format_report(rows: Sequence[ReportRow]) -> bytes:
    """
    Produit le contenu CSV d'un ensemble de lignes.

    Args:
        rows (Sequence[ReportRow]): Lignes du rapport (dans n'importe quel ordre)

    Returns:
        bytes: CSV avec fins de ligne '\\n', identique octet pour octet pour des lignes identiques
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in sorted(rows, key=ReportRow.sort_key):
        writer.writerow([
            row.experiment,
            row.n,
            row.l,
            "" if row.l2 is None else row.l2,
            f"{row.mean:.{REPORT_DECIMALS}f}",
            f"{row.std:.{REPORT_DECIMALS}f}",
            row.trials,
        ])
    return buffer.getvalue().encode("ascii")


def write_report(rows: Sequence[ReportRow], destination: Optional[Destination] = None) -> bytes:
    """
    Écrit le rapport CSV.

    Args:
        rows (Sequence[ReportRow]): Lignes du rapport
        destination (PathLike | BinaryIO, optional): Fichier (écriture atomique) ou flux binaire

    Returns:
        bytes: Contenu écrit

    Raises:
        OSError: Si la destination n'est pas accessible en écriture
    """
    content = format_report(rows)
    if destination is None:
        return content
    if isinstance(destination, (str, Path)):
        FileManager.save_bytes(destination, content)
    else:
        destination.write(content)
    return content


def _parse_optional_int(text: str) -> Optional[int]:
    return int(text) if text else None


def parse_report(content: Union[bytes, str]) -> List[ReportRow]:
    """
    Relit un rapport CSV produit par write_report.

    Raises:
        ReportFormatError: En-tête inattendu ou ligne mal formée
    """
    text = content.decode("ascii") if isinstance(content, bytes) else content
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != REPORT_HEADER:
        raise ReportFormatError(f"En-tête de rapport inattendu : {header}.")

    rows = []
    for line_number, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(REPORT_HEADER):
            raise ReportFormatError(f"Ligne {line_number} : {len(REPORT_HEADER)} colonnes attendues.")
        try:
            experiment, n, l, l2, mean, std, trials = record
            rows.append(ReportRow(
                experiment=experiment,
                n=int(n),
                l=int(l),
                l2=_parse_optional_int(l2),
                mean=float(mean),
                std=float(std),
                trials=int(trials),
            ))
        except ValueError as e:
            raise ReportFormatError(f"Ligne {line_number} : {e}")
    return rows


def read_report(path: Union[str, Path]) -> List[ReportRow]:
    """Charge un rapport CSV depuis un fichier."""
    return parse_report(FileManager.load_bytes(path))
