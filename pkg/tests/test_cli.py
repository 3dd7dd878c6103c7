import pytest

from csgen.cli import main
from csgen.fixtures import fixture_dir


@pytest.fixture
def pair1_file(tmp_path):
    path = tmp_path / "pair1.txt"
    path.write_text((fixture_dir() / "pair1.txt").read_text("utf-8"))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_project(capsys, pair1_file):
    code, out, _ = run(capsys, "project", "--pair", pair1_file)
    assert code == 0
    assert "TREE1:" in out and "ALIGN:" in out
    code, out, _ = run(capsys, "project", "--pair", pair1_file, "--dump-trees")
    assert code == 0
    assert "\n  (NP" in out


def test_generate(capsys, pair1_file):
    code, out, _ = run(capsys, "generate", "--pair", pair1_file, "--model", "ml0")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 8 and lines == sorted(lines)
    assert "Shanivar neeras hai from that perspective" in lines
    code, out, _ = run(capsys, "generate", "--pair", pair1_file, "--model", "ec0")
    assert len(out.splitlines()) == 22


def test_generate_matrix(capsys, pair1_file):
    _, l1, _ = run(capsys, "generate", "--pair", pair1_file, "--model", "ml1", "--matrix", "l1")
    _, both, _ = run(capsys, "generate", "--pair", pair1_file, "--model", "ml1", "--matrix", "both")
    assert set(l1.splitlines()) < set(both.splitlines())


@pytest.mark.parametrize("model, sentence, code, stage", [
    ("ec0", "Shanivar neeras hai from that perspective", 0, None),
    ("ec0", "Shanivar neeras hai that perspective se", 1, "position clash"),
    ("ec0", "Shanivar neeras hai", 1, "production rule 1"),
    ("ml0", "Shanivar neeras hai from that nazariye", 1, "not derivable"),
    ("ml1", "Shanivar neeras hai from that nazariye", 0, None),
])
def test_validate(capsys, pair1_file, model, sentence, code, stage):
    got, out, _ = run(capsys, "validate", "--pair", pair1_file, "--model", model,
                      "--sentence", sentence)
    assert got == code
    if stage is None:
        assert out.strip() == "accept"
    else:
        assert out.startswith(f"reject: {stage}")


def test_validate_rule2_pair2(capsys):
    code, out, _ = run(capsys, "validate", "--pair", "pair2", "--model", "ec1",
                       "--sentence", "Iss jung mein hamare bachne ki chance low hai")
    assert code == 1 and "production rule 2" in out


def test_compare(capsys, pair1_file):
    code, out, _ = run(capsys, "compare", "--pair", pair1_file, "--models", "ml0,ec0")
    assert code == 0
    rows = dict(line.split("\t") for line in out.splitlines() if "\t" in line)
    assert rows["ML0"] == "8" and rows["EC0"] == "22" and rows["ML0&EC0"] == "6"
    assert rows["ML0-EC0"] == "2" and rows["EC0-ML0"] == "16"


def test_report(capsys, tmp_path, pair1_file):
    code, out, _ = run(capsys, "report", "--corpus", str(tmp_path))
    assert code == 0
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows == ["pair1\t6\t11\t4\t3\t22\t22\t8(6)\t32(22)\t28(22)"]


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["generate", "--pair", "pair1"],
    ["generate", "--pair", "pair1", "--model", "ml9"],
    ["compare", "--pair", "pair1", "--models", "ml0"],
    ["generate", "--pair", "/nonexistent/file.txt", "--model", "ml0"],
    ["report", "--corpus", "/nonexistent/dir"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 2


def test_malformed_pair_file(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("TREE1: (S (NN a)\n")
    code, _, err = run(capsys, "project", "--pair", str(bad))
    assert code == 2 and "error" in err


def test_config_env_and_flag(capsys, tmp_path, monkeypatch, pair1_file):
    everything = tmp_path / "all.cfg"
    everything.write_text("deny: S NP VP PP NNP VBG VBZ DT NN IN\n")
    monkeypatch.setenv("CSGEN_CONFIG", str(everything))
    _, out, _ = run(capsys, "generate", "--pair", pair1_file, "--model", "ml0")
    assert out.splitlines() == ["Shanivar neeras hai uss nazariye se"]
    empty = tmp_path / "none.cfg"
    empty.write_text("")
    _, out, _ = run(capsys, "generate", "--pair", pair1_file, "--model", "ml0", "--config", str(empty))
    assert len(out.splitlines()) > 1


def test_bad_config_exits_2(capsys, tmp_path, pair1_file, monkeypatch):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense: 1\n")
    code, _, err = run(capsys, "generate", "--pair", pair1_file, "--model", "ml0", "--config", str(bad))
    assert code == 2 and "unknown key" in err
    monkeypatch.setenv("CSGEN_CONFIG", str(tmp_path / "missing.cfg"))
    code, _, _ = run(capsys, "generate", "--pair", pair1_file, "--model", "ml0")
    assert code == 2
