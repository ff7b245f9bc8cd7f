"""
Service de chargement des fichiers de configuration d'expérience.

Format : fichier plat `clé=valeur` (syntaxe .env, lu par python-dotenv).
Les clés sont les noms des champs d'ExperimentConfig. Les champs composés
(profile, perturbation, matcher) prennent un nom de préréglage et peuvent être
affinés par des clés pointées, appliquées après le préréglage quel que soit
leur ordre dans le fichier :

    experiment=GenuineVt
    master_seed=2024
    n_values=50,150,2000
    profile=fvc2004
    perturbation=calibrated
    perturbation.drop_prob=0.1
    matcher.d_tol=0.04

Toute clé inconnue est une erreur.
"""

import dataclasses
import io
import math
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Union

from dotenv import dotenv_values

from cancelmin.models.experiment import ExperimentConfig, ExperimentKind
from cancelmin.models.matching import MatcherParams
from cancelmin.services.simdata_service import get_perturbation, get_profile
from cancelmin.utils.constants import DEFAULT_PROFILE
from cancelmin.utils.errors import ConfigError, ContractError
from cancelmin.utils.validators import parse_bool, parse_int_list

MATCHER_PRESETS = ("default", "strict", "uncut")


def _parse_int(text: str, name: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"La clé {name} attend un entier (reçu : {text!r}).")


def _parse_float(text: str, name: str) -> float:
    value = text.strip().lower()
    if value in ("inf", "infinity", "none"):
        return math.inf
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"La clé {name} attend un nombre (reçu : {text!r}).")


def _parse_experiment(text: str, name: str) -> ExperimentKind:
    wanted = text.strip().lower()
    for kind in ExperimentKind:
        if kind.value.lower() == wanted:
            return kind
    available = ", ".join(kind.value for kind in ExperimentKind)
    raise ConfigError(f"Expérience inconnue : {text!r} (disponibles : {available}).")


def _parse_int_tuple(text: str, name: str) -> tuple:
    return tuple(parse_int_list(text, name))


# Clés simples -> analyseur de valeur
SCALAR_KEYS: Dict[str, Callable[[str, str], object]] = {
    "experiment": _parse_experiment,
    "master_seed": _parse_int,
    "fingers": _parse_int,
    "impressions": _parse_int,
    "n_values": _parse_int_tuple,
    "l_values": _parse_int_tuple,
    "first_generation_n": _parse_int,
    "first_generation_l": _parse_int,
    "child_l_values": _parse_int_tuple,
    "include_first_generation": parse_bool,
    "workers": _parse_int,
}

COMPOSITE_KEYS = ("profile", "perturbation", "matcher")


def _matcher_preset(name: str) -> MatcherParams:
    key = name.strip().lower()
    if key == "default":
        return MatcherParams()
    if key == "strict":
        return MatcherParams.strict()
    if key == "uncut":
        return MatcherParams.uncut()
    raise ConfigError(f"Préréglage de matcher inconnu : {name!r} (disponibles : {', '.join(MATCHER_PRESETS)}).")


def _refine(base, prefix: str, overrides: Dict[str, str]):
    """Applique les clés pointées `prefix.champ` à une dataclass figée."""
    names = {field.name for field in dataclasses.fields(base)}
    changes = {}
    for field_name, text in overrides.items():
        if field_name not in names:
            raise ConfigError(f"Clé inconnue : {prefix}.{field_name}.")
        current = getattr(base, field_name)
        key = f"{prefix}.{field_name}"
        if isinstance(current, bool):
            changes[field_name] = parse_bool(text, key)
        elif isinstance(current, int):
            changes[field_name] = _parse_int(text, key)
        else:
            changes[field_name] = _parse_float(text, key)
    try:
        return dataclasses.replace(base, **changes)
    except ContractError as e:
        raise ConfigError(f"Valeur invalide pour {prefix} : {e}")


def parse_experiment_config(values: Mapping[str, Optional[str]]) -> ExperimentConfig:
    """
    Construit une ExperimentConfig à partir de paires clé/valeur.

    Args:
        values (Mapping[str, str]): Paires lues dans le fichier

    Returns:
        ExperimentConfig: Configuration validée

    Raises:
        ConfigError: Clé inconnue, valeur absente ou invalide, configuration incohérente
    """
    scalars = {}
    presets = {"profile": DEFAULT_PROFILE, "perturbation": "default", "matcher": "default"}
    refinements: Dict[str, Dict[str, str]] = {name: {} for name in COMPOSITE_KEYS}

    for raw_key, text in values.items():
        key = raw_key.strip()
        if text is None:
            raise ConfigError(f"La clé {key} n'a pas de valeur.")
        if key in SCALAR_KEYS:
            scalars[key] = SCALAR_KEYS[key](text, key)
        elif key in COMPOSITE_KEYS:
            presets[key] = text
        elif "." in key and key.split(".", 1)[0] in COMPOSITE_KEYS:
            prefix, field_name = key.split(".", 1)
            refinements[prefix][field_name] = text
        else:
            raise ConfigError(f"Clé inconnue : {key}.")

    composites = {
        "profile": _refine(get_profile(presets["profile"]), "profile", refinements["profile"]),
        "perturbation": _refine(
            get_perturbation(presets["perturbation"]), "perturbation", refinements["perturbation"]
        ),
        "matcher": _refine(_matcher_preset(presets["matcher"]), "matcher", refinements["matcher"]),
    }

    cfg = ExperimentConfig(**scalars, **composites)
    try:
        cfg.validate()
    except ContractError as e:
        raise ConfigError(str(e))
    return cfg


def parse_config_text(text: str) -> ExperimentConfig:
    """Analyse le contenu d'un fichier de configuration."""
    return parse_experiment_config(dotenv_values(stream=io.StringIO(text)))


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Charge un fichier de configuration d'expérience.

    Args:
        path (PathLike): Fichier `clé=valeur`

    Returns:
        ExperimentConfig: Configuration validée

    Raises:
        ConfigError: Fichier absent ou contenu invalide
    """
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"Fichier de configuration introuvable : {config_path}.")
    return parse_experiment_config(dotenv_values(config_path))
