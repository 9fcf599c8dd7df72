import subprocess
import sys

import pytest

from omlkit.cli import main
from omlkit.formats import parse_lattice, parse_poset


@pytest.fixture
def b3(tmp_path):
    path = tmp_path / "b3.oml"
    assert main(["build", "--family", "boolean", "--n", "3", "-o", str(path)]) == 0
    return path


def test_build_then_verify(b3, capsys):
    assert parse_lattice(b3.read_text()).size == 8
    assert main(["verify", str(b3)]) == 0
    out = capsys.readouterr().out
    assert "size 8  atoms 3" in out
    assert "FAIL" not in out


def test_verify_reports_failure(tmp_path, capsys):
    from omlkit.builders import o6
    from omlkit.formats import serialize_lattice

    path = tmp_path / "o6.oml"
    path.write_text(serialize_lattice(o6()))
    assert main(["verify", str(path)]) == 1
    assert "orthomodular" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--family", "mo", "--n", "3"],
        ["build", "--family", "bowtie"],
        ["build", "--family", "chain", "--n", "2"],
        ["build", "--family", "product", "--parts", "boolean:1", "mo:2"],
        ["build", "--family", "hsum", "--parts", "boolean:2", "boolean:2"],
    ],
)
def test_build_families(argv, capsys):
    assert main(argv) == 0
    assert parse_lattice(capsys.readouterr().out).size in (8, 12, 12, 12, 6)


def test_build_greechie(tmp_path, capsys):
    gd = tmp_path / "t.gd"
    gd.write_text("atoms: a b c d e\nblock: a b c\nblock: c d e\n")
    assert main(["build", "--family", "greechie", "--gd", str(gd)]) == 0
    assert parse_lattice(capsys.readouterr().out).size == 12


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--family", "boolean"],
        ["build", "--family", "greechie"],
        ["build", "--family", "hsum", "--parts", "boolean:2"],
        ["build", "--family", "boolean", "--n", "0"],
        ["build", "--family", "product", "--parts", "foo:1", "mo:2"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == 2


def test_bad_flag_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["roundtrip"])
    assert exc.value.code == 2


def test_missing_file(capsys):
    assert main(["verify", "/nonexistent/x.oml"]) == 1


def test_bsas_and_reconstruct(b3, tmp_path, capsys):
    poset = tmp_path / "b3.poset"
    assert main(["bsas", str(b3), "-o", str(poset)]) == 0
    assert "nodes 5  covers 6  maximal 1  by-dimension 1:1 2:3 3:1" in capsys.readouterr().out
    size, covers, dims = parse_poset(poset.read_text())
    assert size == 5 and dims == [1, 2, 2, 2, 3]

    anon = tmp_path / "b3.anon.poset"
    assert main(["bsas", str(b3), "--anonymize", "4", "-o", str(anon)]) == 0
    assert parse_poset(anon.read_text())[2] is None

    out, report = tmp_path / "c.oml", tmp_path / "c.txt"
    assert main(["reconstruct", str(anon), "-o", str(out), "--report", str(report)]) == 0
    assert parse_lattice(out.read_text()).size == 8
    assert "gap rule: on (6 relations)" in report.read_text()


def test_reconstruct_failure_names_stage(b3, tmp_path, capsys):
    poset = tmp_path / "b3.poset"
    main(["bsas", str(b3), "-o", str(poset)])
    capsys.readouterr()
    assert main(["reconstruct", str(poset), "--no-gap-rule"]) == 1
    assert "reconstruction failure in stage order" in capsys.readouterr().err


def test_roundtrip(b3, capsys):
    assert main(["roundtrip", str(b3), "--seed", "7"]) == 0
    assert capsys.readouterr().out == "isomorphic\n"
    assert main(["roundtrip", str(b3), "--seed", "7", "--no-gap-rule"]) == 1
    assert capsys.readouterr().out.startswith("reconstruction failure: missing atom-coatom relations")


def test_roundtrip_ten_seeds_agree(b3, capsys):
    argv = ["roundtrip", str(b3)]
    for s in range(10):
        argv += ["--seed", str(s)]
    assert main(argv) == 0
    assert capsys.readouterr().out.splitlines() == ["isomorphic"] * 10


def test_outputs_are_byte_identical(tmp_path):
    paths = []
    for k in range(2):
        lat, poset, rec = (tmp_path / f"{x}{k}" for x in ("l", "p", "r"))
        main(["build", "--family", "product", "--parts", "boolean:2", "mo:2", "-o", str(lat)])
        main(["bsas", str(lat), "--anonymize", "3", "-o", str(poset)])
        main(["reconstruct", str(poset), "-o", str(rec)])
        paths.append((lat, poset, rec))
    for a, b in zip(*paths):
        assert a.read_bytes() == b.read_bytes()


def test_corpus_file(tmp_path, capsys):
    gd = tmp_path / "bt.gd"
    gd.write_text("atoms: a b c d e\nblock: a b c\nblock: c d e\n")
    spec = tmp_path / "small.corpus"
    spec.write_text("seeds 0 1\nboolean 3\nmo 2\ngreechie bt.gd\n")
    assert main(["corpus", str(spec), "--out-dir", str(tmp_path / "out")]) == 0
    out = capsys.readouterr().out
    assert "3/3 lattices isomorphic" in out
    assert (tmp_path / "out" / "bt.gd.txt").read_text().count("isomorphic") == 2
    assert main(["corpus", str(spec), "--no-gap-rule"]) == 1


def test_corpus_bad_spec(tmp_path):
    spec = tmp_path / "bad.corpus"
    spec.write_text("widget 3\n")
    assert main(["corpus", str(spec)]) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "omlkit", "build", "--family", "mo", "--n", "2"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.startswith("oml 1\nsize 6\n")
