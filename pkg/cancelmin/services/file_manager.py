"""
Service de gestion de la persistance des fichiers (écriture atomique, JSON).
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Union

PathLike = Union[str, Path]


class FileManager:
    """
    Classe utilitaire pour la lecture et l'écriture des fichiers.

    Toutes les écritures sont atomiques : le contenu est écrit dans un fichier
    temporaire du même dossier, puis renommé sur la destination.
    """

    @staticmethod
    def ensure_directory_exists(file_path: Path):
        """
        S'assure que le dossier parent du fichier existe.

        Args:
            file_path (Path): Chemin du fichier
        """
        file_path.parent.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def save_bytes(path: PathLike, content: bytes):
        """
        Écrit des octets de façon atomique.

        Args:
            path (PathLike): Destination
            content (bytes): Contenu à écrire

        Raises:
            OSError: Si la destination n'est pas accessible en écriture
        """
        file_path = Path(path)
        FileManager.ensure_directory_exists(file_path)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{file_path.name}.", suffix=".tmp", dir=file_path.parent)
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(content)
            os.replace(tmp_name, file_path)
        except BaseException:
            # Nettoie le fichier temporaire en cas d'échec
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    @staticmethod
    def save_text(path: PathLike, content: str):
        """Écrit un texte ASCII/UTF-8 de façon atomique (fins de ligne '\\n' conservées)."""
        FileManager.save_bytes(path, content.encode("utf-8"))

    @staticmethod
    def load_bytes(path: PathLike) -> bytes:
        """
        Lit le contenu brut d'un fichier.

        Raises:
            OSError: Si le fichier est absent ou illisible
        """
        with open(path, "rb") as f:
            return f.read()

    @staticmethod
    def load_text(path: PathLike) -> str:
        """Lit un fichier texte UTF-8."""
        return FileManager.load_bytes(path).decode("utf-8")

    @staticmethod
    def save_json(path: PathLike, data: Dict[str, Any]):
        """
        Sauvegarde un dictionnaire dans un fichier JSON (écriture atomique).

        Args:
            path (PathLike): Destination
            data (Dict): Données à sauvegarder
        """
        FileManager.save_text(path, json.dumps(data, indent=4, ensure_ascii=False) + "\n")

    @staticmethod
    def load_json(path: PathLike) -> Dict[str, Any]:
        """
        Charge un dictionnaire depuis un fichier JSON.

        Returns:
            Dict: Données chargées (dictionnaire vide si le fichier est vide)
        """
        content = FileManager.load_text(path)
        if not content.strip():
            return {}
        return json.loads(content)
