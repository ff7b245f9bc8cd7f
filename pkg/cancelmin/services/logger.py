"""
Service de journalisation (logging) des actions de l'application.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Dict, Optional

from cancelmin.utils.constants import LOG_DATE_FORMAT, LOG_DIR_ENV, LOG_LEVEL_ENV


class Logger:
    """
    Service de journalisation pour enregistrer les actions dans des fichiers de log.

    Chaque catégorie (synth, transform, match, simulate, eval) a son propre
    logger `cancelmin.<catégorie>` et son fichier `<log_dir>/<catégorie>/<catégorie>.log`.
    La catégorie eval écrit aussi une ligne par expérience sur la sortie d'erreur.
    """

    STDERR_CATEGORIES = ("eval",)

    _log_dir: Optional[Path] = None
    _loggers: Dict[str, logging.Logger] = {}

    @staticmethod
    def get_log_dir() -> Path:
        """
        Retourne le dossier racine des logs.

        Ordre de priorité : Logger.configure(), variable CANCELMIN_LOG_DIR,
        puis le dossier 'files' du paquet.

        Returns:
            Path: Dossier des logs
        """
        if Logger._log_dir is not None:
            return Logger._log_dir
        env_dir = os.getenv(LOG_DIR_ENV)
        if env_dir:
            return Path(env_dir)
        return Path(__file__).parent.parent / "files"

    @staticmethod
    def get_log_path(category: str) -> Path:
        """
        Retourne le chemin absolu du fichier de log d'une catégorie.

        Args:
            category (str): Nom de la catégorie (ex: 'match')

        Returns:
            Path: Chemin complet du fichier de log
        """
        return Logger.get_log_dir() / category / f"{category}.log"

    @staticmethod
    def configure(log_dir: Optional[Path] = None):
        """
        Change le dossier des logs et ferme les fichiers déjà ouverts.

        Args:
            log_dir (Path, optional): Nouveau dossier (None = retour au défaut)
        """
        for logger in Logger._loggers.values():
            for handler in list(logger.handlers):
                handler.close()
                logger.removeHandler(handler)
        Logger._loggers = {}
        Logger._log_dir = Path(log_dir) if log_dir is not None else None

    @staticmethod
    def _get_logger(category: str) -> logging.Logger:
        """Crée (une seule fois) le logger d'une catégorie avec ses handlers."""
        if category in Logger._loggers:
            return Logger._loggers[category]

        logger = logging.getLogger(f"cancelmin.{category}")
        logger.propagate = False
        logger.setLevel(os.getenv(LOG_LEVEL_ENV, "INFO").upper())
        formatter = logging.Formatter("[%(asctime)s] %(message)s", datefmt=LOG_DATE_FORMAT)

        log_path = Logger.get_log_path(category)
        # Crée le dossier s'il n'existe pas
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        if category in Logger.STDERR_CATEGORIES:
            stream_handler = logging.StreamHandler(sys.stderr)
            stream_handler.setFormatter(formatter)
            logger.addHandler(stream_handler)

        Logger._loggers[category] = logger
        return logger

    @staticmethod
    def log_action(
        category: str,
        action: str,
        details: Optional[str] = None,
        level: int = logging.INFO
    ) -> bool:
        """
        Enregistre une action dans le fichier de log de sa catégorie.

        Args:
            category (str): Catégorie (ex: 'synth')
            action (str): Description de l'action effectuée
            details (str, optional): Détails supplémentaires
            level (int): Niveau logging (INFO par défaut)

        Returns:
            bool: True si l'écriture a réussi, False sinon
        """
        try:
            message = action
            if details:
                message += f" - {details}"
            Logger._get_logger(category).log(level, message)
            return True
        except Exception as e:
            print(f"Erreur lors de l'écriture du log: {e}", file=sys.stderr)
            return False

    @staticmethod
    def log_synth_action(action: str, details: Optional[str] = None) -> bool:
        """
        Enregistre une action de synthèse dans synth.log.

        Args:
            action (str): Description de l'action (ex: "Synthèse de ST")
            details (str, optional): Détails (ex: "graine: 7, N: 200")
        """
        return Logger.log_action("synth", action, details)

    @staticmethod
    def log_transform_action(action: str, details: Optional[str] = None, level: int = logging.INFO) -> bool:
        """Enregistre une construction de VT dans transform.log."""
        return Logger.log_action("transform", action, details, level)

    @staticmethod
    def log_match_action(action: str, details: Optional[str] = None) -> bool:
        """Enregistre un appariement dans match.log."""
        return Logger.log_action("match", action, details, logging.DEBUG)

    @staticmethod
    def log_simulate_action(action: str, details: Optional[str] = None) -> bool:
        """Enregistre une simulation de base dans simulate.log."""
        return Logger.log_action("simulate", action, details)

    @staticmethod
    def log_eval_action(action: str, details: Optional[str] = None, level: int = logging.INFO) -> bool:
        """
        Enregistre une étape d'évaluation dans eval.log (et sur la sortie d'erreur).

        Args:
            action (str): Description de l'action (ex: "Expérience GenuineVt")
            details (str, optional): Détails supplémentaires (ex: "N: 200, L: 1, essais: 300")
        """
        return Logger.log_action("eval", action, details, level)
