from importlib import resources

import pytest

from omlkit.builders import GreechieDiagram, boolean_algebra, bowtie, mo
from omlkit.errors import ParseError, StructuralError
from omlkit.formats import (
    parse_greechie,
    parse_lattice,
    parse_poset,
    serialize_greechie,
    serialize_lattice,
    serialize_poset,
)

from conftest import CORPUS, corpus_lattice


@pytest.mark.parametrize("name", CORPUS)
def test_lattice_roundtrip(name):
    l = corpus_lattice(name)
    text = serialize_lattice(l)
    assert parse_lattice(text) == l
    assert serialize_lattice(parse_lattice(text)) == text


def test_b3_text():
    text = serialize_lattice(boolean_algebra(3))
    assert text.startswith("oml 1\nsize 8\n")
    assert "up 1 : 3 5\n" in text
    assert "ortho : 7 6 5 4 3 2 1 0\n" in text


def test_non_involutive_ortho_names_element():
    text = serialize_lattice(mo(2)).replace("ortho : 5 2 1 4 3 0", "ortho : 5 2 3 4 1 0")
    with pytest.raises(ParseError, match="element 1"):
        parse_lattice(text)


def test_packaged_bowtie_file():
    text = resources.files("omlkit").joinpath("data/bowtie.oml").read_text()
    l = parse_lattice(text)
    assert l.size == 12 and l == bowtie()
    gd = parse_greechie(resources.files("omlkit").joinpath("data/bowtie.gd").read_text())
    assert gd.blocks == (("a", "b", "c"), ("c", "d", "e"))


def test_line_order_irrelevant():
    lines = serialize_lattice(bowtie()).splitlines()
    shuffled = lines[:2] + list(reversed(lines[2:]))
    assert parse_lattice("\n".join(shuffled)) == bowtie()


@pytest.mark.parametrize(
    "text, line",
    [
        ("oml 2\n", 1),
        ("oml 1\nsize 2\nup 0 : 5\n", 3),
        ("oml 1\nsize 2\nfrobnicate\n", 3),
        ("oml 1\nsize x\n", 2),
        ("oml 1\nsize 2\nup 0 : 1\northo : 1 0 0\nbottom 0\ntop 1\n", 4),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_lattice(text)
    assert err.value.line == line


def test_parse_rejects_non_oml():
    from omlkit.builders import o6

    text = serialize_lattice(o6())
    with pytest.raises(StructuralError):
        parse_lattice(text)
    assert parse_lattice(text, check=False).size == 6


def test_parse_rejects_wrong_bounds():
    text = serialize_lattice(boolean_algebra(2)).replace("bottom 0", "bottom 1")
    with pytest.raises(StructuralError):
        parse_lattice(text)


def test_poset_roundtrip():
    covers = ((0, 1), (0, 2), (1, 3), (2, 3))
    text = serialize_poset(4, covers, [1, 2, 2, 3])
    assert parse_poset(text) == (4, covers, [1, 2, 2, 3])
    assert parse_poset(serialize_poset(4, covers)) == (4, covers, None)


@pytest.mark.parametrize("text", ["poset 1\ncover 0 1\n", "poset 1\nsize 2\ncover 0 2\n", "poset 1\nsize 2\ncover 1 1\n", "graph 1\n"])
def test_poset_parse_errors(text):
    with pytest.raises(ParseError):
        parse_poset(text)


def test_greechie_roundtrip():
    g = GreechieDiagram("abcde", ["abc", "cde"])
    assert parse_greechie(serialize_greechie(g)) == g
    with pytest.raises(ParseError):
        parse_greechie("block: a b\n")
