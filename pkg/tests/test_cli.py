import pytest

from cancelmin.main import content_seed, main
from cancelmin.models.template import Template, TemplateKind
from cancelmin.services.report_service import read_report
from cancelmin.services.synth_service import synthesize_from_seed
from cancelmin.services.xyt_codec import load_template, serialize_xyt


@pytest.fixture
def rt_file(tmp_path):
    path = tmp_path / "rt.xyt"
    path.write_bytes(serialize_xyt(synthesize_from_seed(1234, 640, 480, 10)))
    return path


def test_synth_is_deterministic(tmp_path):
    first, second = tmp_path / "a.xyt", tmp_path / "b.xyt"
    assert main(["synth", "--seed", "42", "-n", "200", "-o", str(first)]) == 0
    assert main(["synth", "--seed", "42", "-n", "200", "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert len(first.read_bytes().splitlines()) == 200
    assert (tmp_path / "a.xyt.json").exists()
    st = load_template(first, 640, 480, TemplateKind.SYNTHETIC)
    assert st.provenance.st_seed == 42


def test_transform_from_file_or_seed(tmp_path, rt_file):
    st_path = tmp_path / "st.xyt"
    main(["synth", "--seed", "42", "-n", "200", "-o", str(st_path)])
    from_file, from_seed = tmp_path / "vt1.xyt", tmp_path / "vt2.xyt"

    assert main(["transform", "--rt", str(rt_file), "--st", str(st_path), "-l", "2", "-o", str(from_file)]) == 0
    assert main(["transform", "--rt", str(rt_file), "--seed", "42", "-n", "200", "-l", "2", "-o", str(from_seed)]) == 0

    assert from_file.read_bytes() == from_seed.read_bytes()
    st = load_template(st_path, 640, 480, TemplateKind.SYNTHETIC)
    vt = load_template(from_file, 640, 480, TemplateKind.VERIFICATION)
    assert vt.minutia_set() <= st.minutia_set()
    assert vt.provenance.ordinal_l == 2
    assert vt.provenance.st_seed == 42


def test_transform_with_bare_st_file(tmp_path, rt_file):
    st = synthesize_from_seed(77, 640, 480, 200)
    st_path = tmp_path / "bare.xyt"
    st_path.write_bytes(serialize_xyt(st))
    first, second = tmp_path / "vt1.xyt", tmp_path / "vt2.xyt"

    assert main(["transform", "--rt", str(rt_file), "--st", str(st_path), "-l", "1", "-o", str(first)]) == 0
    assert main(["transform", "--rt", str(rt_file), "--st", str(st_path), "-l", "1", "-o", str(second)]) == 0

    assert first.read_bytes() == second.read_bytes()
    vt = load_template(first, 640, 480, TemplateKind.VERIFICATION)
    assert vt.provenance.st_seed == content_seed(load_template(st_path, 640, 480, TemplateKind.SYNTHETIC))
    assert vt.minutia_set() <= st.minutia_set()


def test_content_seed_follows_the_points():
    st = synthesize_from_seed(77, 640, 480, 50)
    moved = Template([(x, y, (theta + 1) % 360) for x, y, theta in st], 640, 480, TemplateKind.SYNTHETIC)
    assert content_seed(st) == content_seed(synthesize_from_seed(77, 640, 480, 50))
    assert content_seed(st) != content_seed(moved)


def test_match_prints_score(rt_file, capsys):
    assert main(["match", str(rt_file), str(rt_file), "--d-max", "inf"]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_compact_self_match_under_default_flags(tmp_path, capsys):
    # Toutes les paires sont à moins de 125 px : la coupure par défaut ne retire rien
    compact = tmp_path / "compact.xyt"
    compact.write_bytes(serialize_xyt(synthesize_from_seed(1234, 80, 80, 10)))
    assert main(["match", str(compact), str(compact), "--width", "80", "--height", "80"]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_simulate_writes_every_impression(tmp_path):
    out = tmp_path / "db"
    assert main(["simulate", "--seed", "3", "--fingers", "2", "--impressions", "2", "-o", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["finger0_imp0.xyt", "finger0_imp1.xyt", "finger1_imp0.xyt", "finger1_imp1.xyt"]


def test_eval_writes_report(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "experiment=GenuineVt\nmaster_seed=5\nfingers=2\nimpressions=2\n"
        "perturbation=calibrated\nn_values=60\nl_values=1\n"
    )
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["eval", "--config", str(cfg), "-o", str(first)]) == 0
    assert main(["eval", "--config", str(cfg), "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    (row,) = read_report(first)
    assert (row.experiment, row.n, row.l, row.trials) == ("GenuineVt", 60, 1, 2)


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["explode"])
    assert excinfo.value.code == 2


def test_missing_required_option_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["synth", "--seed", "1"])
    assert excinfo.value.code == 2


@pytest.mark.parametrize("args", [
    ["transform", "--rt", "RT", "-l", "1", "-o", "OUT"],
    ["match", "RT", "absent.xyt"],
    ["synth", "--seed", "1", "--width", "1", "--height", "1", "-n", "361", "-o", "OUT"],
    ["eval", "--config", "absent.cfg", "-o", "OUT"],
    ["simulate", "--seed", "1", "--fingers", "1", "--profile", "casia", "-o", "OUT"],
])
def test_domain_errors_exit_with_one(tmp_path, rt_file, capsys, args):
    args = [
        str(rt_file) if a == "RT" else str(tmp_path / a) if a in ("OUT", "absent.xyt", "absent.cfg") else a
        for a in args
    ]
    assert main(args) == 1
    assert capsys.readouterr().err.startswith("Erreur")


def test_invalid_template_file_exits_with_one(tmp_path, capsys):
    bad = tmp_path / "bad.xyt"
    bad.write_bytes(b"1 2 3\n4 5\n")
    assert main(["match", str(bad), str(bad)]) == 1
    assert "Ligne 2" in capsys.readouterr().err
