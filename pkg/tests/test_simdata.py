import numpy as np
import pytest

from cancelmin.models.experiment import FingerProfile, PerturbationModel
from cancelmin.models.matching import MatcherParams
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.generator import SeededGenerator
from cancelmin.services.matcher_service import match
from cancelmin.services.simdata_service import (
    get_perturbation,
    get_profile,
    footprint_capacity,
    footprint_filter,
    make_finger,
    perturb,
    simulate_database,
    simulate_finger,
)
from cancelmin.utils.errors import ConfigError, ContractError
from cancelmin.utils.validators import lattice_size

NO_PERTURBATION = PerturbationModel(0.0, 0.0, 0.0, 0.0, 0.0, 0)


def test_named_profiles():
    fvc = get_profile("FVC2004")
    assert (fvc.mean_minutiae, fvc.std_minutiae, fvc.width, fvc.height) == (58.0, 18.0, 640, 480)
    assert get_profile("fvc2006").width == 400
    assert get_profile("polyu").mean_minutiae == 136.0
    assert {get_profile(name).footprint for name in ("fvc2004", "fvc2006", "polyu")} == {0.7}
    with pytest.raises(ConfigError):
        get_profile("casia")


def test_named_perturbations():
    assert get_perturbation("none") == NO_PERTURBATION
    assert get_perturbation("default") == PerturbationModel()
    assert get_perturbation("calibrated").max_rotation == 2.0
    with pytest.raises(ConfigError):
        get_perturbation("heavy")


@pytest.mark.parametrize("kwargs", [
    {"mean_minutiae": 0}, {"std_minutiae": -1}, {"min_minutiae": 1}, {"footprint": 0}, {"footprint": 1.5},
])
def test_profile_validation(kwargs):
    with pytest.raises(ContractError):
        FingerProfile(**kwargs)


def test_perturbation_validation():
    with pytest.raises(ContractError):
        PerturbationModel(drop_prob=1.5)
    with pytest.raises(ContractError):
        PerturbationModel(max_rotation=-1)


def test_fixed_size_profile():
    profile = FingerProfile(58.0, 0.0, 2, 640, 480)
    for seed in range(5):
        finger = make_finger(SeededGenerator(seed), profile, "3")
        assert len(finger) == 58
        assert finger.kind == TemplateKind.REAL
        assert finger.provenance.finger_id == "3"
        assert len(finger.minutia_set()) == 58


def test_minimum_size_is_enforced():
    profile = FingerProfile(2.0, 0.0, 2, 640, 480)
    assert len(make_finger(SeededGenerator(1), profile)) == 2
    wide = FingerProfile(3.0, 50.0, 2, 640, 480)
    assert all(len(make_finger(SeededGenerator(seed), wide)) >= 2 for seed in range(50))


@pytest.mark.slow
def test_finger_sizes_follow_profile():
    profile = get_profile("fvc2004")
    sizes = [len(make_finger(SeededGenerator(seed), profile)) for seed in range(1000)]
    assert abs(np.mean(sizes) - 58) < 2


def test_zero_model_is_identity(rt_58):
    for seed in range(5):
        impression = perturb(rt_58, NO_PERTURBATION, SeededGenerator(seed), "1")
        assert impression.minutiae == rt_58.minutiae
        assert impression.provenance.impression_id == "1"
        assert impression.provenance.finger_id == rt_58.provenance.finger_id


def test_dropping_everything_leaves_empty_template(rt_58):
    model = PerturbationModel(0.0, 0.0, 0.0, 0.0, 1.0, 0)
    assert len(perturb(rt_58, model, SeededGenerator(3))) == 0


def test_pure_translation_moves_every_minutia_alike():
    rt = Template(
        [(100 + 7 * i, 100 + 5 * i, (11 * i) % 360) for i in range(40)],
        640, 480, TemplateKind.REAL,
    )
    model = PerturbationModel(0.0, 20.0, 0.0, 0.0, 0.0, 0)
    for seed in range(10):
        impression = perturb(rt, model, SeededGenerator(seed))
        assert len(impression) == len(rt)
        shifts = {(b.x - a.x, b.y - a.y) for a, b in zip(rt, impression)}
        assert len(shifts) == 1
        (dx, dy), = shifts
        assert abs(dx) <= 20 and abs(dy) <= 20
        assert [m.theta for m in impression] == [m.theta for m in rt]


def test_spurious_minutiae_are_bounded(rt_58):
    model = PerturbationModel(0.0, 0.0, 0.0, 0.0, 0.0, 5)
    for seed in range(20):
        impression = perturb(rt_58, model, SeededGenerator(seed))
        assert 58 <= len(impression) <= 63
        assert impression.minutiae[:58] == rt_58.minutiae


def test_perturbation_stays_inside_image(rt_58):
    for seed in range(20):
        impression = perturb(rt_58, PerturbationModel(), SeededGenerator(seed))
        assert all(0 <= m.x < 640 and 0 <= m.y < 480 and 0 <= m.theta < 360 for m in impression)


def test_simulation_is_deterministic():
    profile = get_profile("fvc2004")
    first = simulate_database(9, 3, 4, profile, PerturbationModel())
    second = simulate_database(9, 3, 4, profile, PerturbationModel())
    assert first == second
    assert len(first) == 3 and all(len(finger) == 4 for finger in first)
    assert simulate_finger(9, 1, 4, profile, PerturbationModel()) == first[1]
    assert simulate_database(10, 3, 4, profile, PerturbationModel()) != first


def test_zero_model_impressions_are_identical():
    impressions = simulate_finger(4, 0, 3, get_profile("fvc2004"), NO_PERTURBATION)
    assert impressions[0].minutiae == impressions[1].minutiae == impressions[2].minutiae
    assert [t.provenance.impression_id for t in impressions] == ["0", "1", "2"]


@pytest.mark.parametrize("fingers, impressions", [(0, 4), (3, 0)])
def test_simulate_database_rejects_empty_shapes(fingers, impressions):
    with pytest.raises(ConfigError):
        simulate_database(1, fingers, impressions, get_profile("fvc2004"), PerturbationModel())


def test_impressions_of_one_finger_match_better_than_other_fingers():
    profile = FingerProfile(58.0, 0.0, 2, 640, 480)
    params = MatcherParams()
    wins = 0
    for trial in range(100):
        genuine = simulate_finger(trial, 0, 2, profile, PerturbationModel())
        other = simulate_finger(trial, 1, 1, profile, PerturbationModel())
        genuine_score = match(genuine[0], genuine[1], params).score
        impostor_score = match(genuine[0], other[0], params).score
        wins += genuine_score > impostor_score
    assert wins >= 95


@pytest.mark.slow
def test_default_model_separates_genuine_from_impostor():
    profile = get_profile("fvc2004")
    database = simulate_database(31, 200, 2, profile, PerturbationModel())
    genuine = [match(a, b).score for a, b in database]
    impostor = [match(database[i][0], database[i + 1][1]).score for i in range(len(database) - 1)]
    assert np.mean(genuine) > 3 * np.mean(impostor)


def test_provenance_of_simulated_finger():
    rt = simulate_finger(2, 5, 1, get_profile("fvc2004"), NO_PERTURBATION)[0]
    assert rt.provenance == Provenance(finger_id="5", impression_id="0")


@pytest.mark.parametrize("name", ["fvc2004", "fvc2006", "polyu"])
def test_finger_minutiae_lie_inside_footprint(name):
    profile = get_profile(name)
    cx, cy = profile.width / 2, profile.height / 2
    a, b = profile.footprint * cx, profile.footprint * cy
    for seed in range(5):
        finger = make_finger(SeededGenerator(seed), profile)
        assert all(((m.x - cx) / a) ** 2 + ((m.y - cy) / b) ** 2 <= 1 for m in finger)


def test_full_footprint_covers_the_image():
    profile = FingerProfile(footprint=1.0)
    assert footprint_filter(profile) is None
    assert footprint_capacity(profile) == lattice_size(640, 480)
    xs = [m.x for seed in range(10) for m in make_finger(SeededGenerator(seed), profile)]
    assert max(xs) > 560


def test_footprint_capacity_matches_ellipse_area():
    profile = FingerProfile(footprint=0.5)
    area = np.pi * (0.5 * 320) * (0.5 * 240)
    assert footprint_capacity(profile) / 360 == pytest.approx(area, rel=0.02)
    inside = footprint_filter(profile)
    assert inside(320, 240)
    assert not inside(0, 0)


def test_size_is_clamped_to_footprint_capacity():
    # Ellipse de demi-axes 1 x 1 centrée en (2, 2) : cinq pixels
    profile = FingerProfile(5000.0, 0.0, 2, 4, 4, footprint=0.5)
    finger = make_finger(SeededGenerator(3), profile)
    assert len(finger) == footprint_capacity(profile) == 5 * 360
    assert len(finger.minutia_set()) == len(finger)
