"""
Module des modèles de l'application.
Contient les classes principales : Minutia, Template, Provenance, tables du matcher,
configuration d'expérience et lignes de rapport.
"""

from cancelmin.models.minutia import Minutia, angle_diff
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.models.matching import (
    CompatEntry,
    ComparisonTable,
    CTEntry,
    MatcherParams,
    MatchResult,
)
from cancelmin.models.experiment import (
    ExperimentConfig,
    ExperimentKind,
    FingerProfile,
    PerturbationModel,
    ReportRow,
)

__all__ = [
    'Minutia',
    'angle_diff',
    'Provenance',
    'Template',
    'TemplateKind',
    'CompatEntry',
    'ComparisonTable',
    'CTEntry',
    'MatcherParams',
    'MatchResult',
    'ExperimentConfig',
    'ExperimentKind',
    'FingerProfile',
    'PerturbationModel',
    'ReportRow',
]
