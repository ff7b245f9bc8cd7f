"""
Fixtures communes de la suite de tests.
"""

import pytest

from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.logger import Logger
from cancelmin.services.synth_service import synthesize_from_seed


@pytest.fixture(autouse=True, scope="session")
def isolated_logs(tmp_path_factory):
    """Redirige tous les fichiers de log vers un dossier temporaire."""
    Logger.configure(tmp_path_factory.mktemp("logs"))
    yield
    Logger.configure(None)


@pytest.fixture
def st_200():
    """ST de 200 minuties (graine 7, 640x480)."""
    return synthesize_from_seed(7, 640, 480, 200)


@pytest.fixture
def rt_58():
    """Gabarit réel de 58 minuties tiré d'une autre graine."""
    source = synthesize_from_seed(1234, 640, 480, 58)
    return Template(source.minutiae, 640, 480, TemplateKind.REAL, Provenance(finger_id="0"))
