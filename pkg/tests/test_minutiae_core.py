import pytest
from hypothesis import given, settings, strategies as st

from cancelmin.models.minutia import Minutia, angle_diff
from cancelmin.models.template import Provenance, Template, TemplateKind
from cancelmin.services.xyt_codec import (
    load_template,
    parse_xyt,
    provenance_path,
    save_template,
    serialize_xyt,
)
from cancelmin.utils.errors import TemplateParseError, TemplateValidationError

from tests.strategies import distinct_templates, real_templates


@pytest.mark.parametrize("a, b, expected", [
    (0, 0, 0),
    (350, 10, 20),
    (90, 271, 179),
    (0, 180, 180),
    (720, 0, 0),
])
def test_angle_diff_examples(a, b, expected):
    assert angle_diff(a, b) == expected


@given(st.integers(0, 359), st.integers(0, 359))
def test_angle_diff_is_symmetric_and_bounded(a, b):
    assert angle_diff(a, b) == angle_diff(b, a)
    assert 0 <= angle_diff(a, b) <= 180
    assert angle_diff(a, a) == 0


def test_parse_empty_file():
    template = parse_xyt(b"", 640, 480, TemplateKind.REAL)
    assert len(template) == 0


def test_parse_transcribes_lines_in_order():
    template = parse_xyt(b"100 200 45\n300 10 359\n", 640, 480, TemplateKind.REAL)
    assert template.minutiae == (Minutia(100, 200, 45), Minutia(300, 10, 359))
    assert template.kind == TemplateKind.REAL


def test_parse_ignores_quality_and_blank_lines():
    template = parse_xyt("\n100 200 45 87\n\n  1 2 3  \n", 640, 480)
    assert template.minutiae == (Minutia(100, 200, 45), Minutia(1, 2, 3))


def test_parse_rejects_theta_360():
    with pytest.raises(TemplateValidationError) as excinfo:
        parse_xyt(b"100 200 360\n", 640, 480, TemplateKind.REAL)
    assert excinfo.value.minutia == Minutia(100, 200, 360)
    assert excinfo.value.index == 0


@pytest.mark.parametrize("text", [b"1 2 640\n10 480 0\n", b"640 0 0\n"])
def test_parse_rejects_out_of_bounds(text):
    with pytest.raises(TemplateValidationError):
        parse_xyt(text, 640, 480)


@pytest.mark.parametrize("text, line", [
    (b"1 2 3\n4 5\n", 2),
    (b"1 2 3 4 5\n", 1),
    (b"1 2 3\n\n1 x 3\n", 3),
    (b"1.5 2 3\n", 1),
])
def test_parse_errors_carry_line_number(text, line):
    with pytest.raises(TemplateParseError) as excinfo:
        parse_xyt(text, 640, 480)
    assert excinfo.value.line_number == line
    assert f"Ligne {line}" in str(excinfo.value)


def test_duplicates_rejected_only_for_synthetic_and_verification():
    text = b"5 5 5\n5 5 5\n"
    assert len(parse_xyt(text, 640, 480, TemplateKind.REAL)) == 2
    with pytest.raises(TemplateValidationError):
        parse_xyt(text, 640, 480, TemplateKind.SYNTHETIC)
    with pytest.raises(TemplateValidationError):
        parse_xyt(text, 640, 480, TemplateKind.VERIFICATION, Provenance(generation=1, st_seed=1, ordinal_l=1))


def test_serialize_examples():
    assert serialize_xyt(Template([], 640, 480)) == b""
    assert serialize_xyt(Template([(100, 200, 45)], 640, 480)) == b"100 200 45\n"


@given(real_templates())
@settings(max_examples=100)
def test_parse_inverts_serialize(template):
    assert parse_xyt(serialize_xyt(template), 640, 480) == template


def test_provenance_requires_seed_and_ordinal_from_generation_one():
    with pytest.raises(TemplateValidationError):
        Provenance(generation=1, st_seed=7)
    with pytest.raises(TemplateValidationError):
        Provenance(generation=1, ordinal_l=1)
    with pytest.raises(TemplateValidationError):
        Provenance(generation=-1)
    assert Provenance(generation=2, st_seed=7, ordinal_l=6).generation == 2


def test_template_dict_round_trip():
    provenance = Provenance("3", "1", 1, st_seed=99, ordinal_l=6, st_size=200)
    template = Template([(1, 2, 3), (4, 5, 6)], 640, 480, TemplateKind.VERIFICATION, provenance)
    assert Template.from_dict(template.to_dict()) == template
    assert "minutiae" not in template.to_dict(include_minutiae=False)


def test_save_and_load_with_provenance(tmp_path):
    provenance = Provenance(st_seed=7, st_size=2)
    template = Template([(10, 20, 30), (40, 50, 60)], 640, 480, TemplateKind.SYNTHETIC, provenance)
    path = tmp_path / "st.xyt"

    save_template(path, template, with_provenance=True)

    assert path.read_bytes() == b"10 20 30\n40 50 60\n"
    assert provenance_path(path).name == "st.xyt.json"
    assert load_template(path, 640, 480, TemplateKind.SYNTHETIC) == template


def test_load_without_sidecar_has_default_provenance(tmp_path):
    path = tmp_path / "rt.xyt"
    path.write_bytes(b"1 1 1\n")
    template = load_template(path, 640, 480)
    assert template.provenance == Provenance()
    assert template.generation == 0


@given(distinct_templates(kind=TemplateKind.SYNTHETIC))
def test_minutia_set_matches_minutiae(template):
    assert template.minutia_set() == frozenset(template.minutiae)
    assert len(template.minutia_set()) == len(template)
