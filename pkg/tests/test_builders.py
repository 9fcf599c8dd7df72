import pytest

from omlkit.builders import (
    GreechieDiagram,
    boolean_algebra,
    bowtie,
    direct_product,
    family,
    from_greechie,
    greechie_chain,
    horizontal_sum,
    mo,
)
from omlkit.errors import StructuralError
from omlkit.iso import are_isomorphic
from omlkit.lattice import verify

from oracles import closure_elements


def test_boolean_algebra_examples():
    b1 = boolean_algebra(1)
    assert b1.size == 2 and b1.leq(b1.bottom, b1.top)
    b3 = boolean_algebra(3)
    assert b3.size == 8 and len(b3.atoms()) == 3 and verify(b3).ok
    assert boolean_algebra(4).rank() == 4


@pytest.mark.parametrize("n", [0, 17])
def test_boolean_algebra_range(n):
    with pytest.raises(ValueError):
        boolean_algebra(n)


def test_mo_examples():
    assert are_isomorphic(mo(1), boolean_algebra(2))
    m2 = mo(2)
    assert m2.size == 6 and verify(m2).ok
    m3 = mo(3)
    assert m3.size == 8
    assert not are_isomorphic(m3, boolean_algebra(3))
    with pytest.raises(ValueError):
        mo(0)


def test_single_block_is_boolean():
    l = from_greechie(GreechieDiagram("abc", ["abc"]))
    assert are_isomorphic(l, boolean_algebra(3))


def test_bowtie():
    l = bowtie()
    assert l.size == 12
    assert len(l.atoms()) == 5
    coatoms = [x for x in range(l.size) if l.height(x) == 2]
    assert len(coatoms) == 5
    assert verify(l).ok
    # closure oracle: the five atoms generate everything
    assert closure_elements(l, l.atoms()) == set(range(l.size))


def test_chain_of_three_blocks():
    l = greechie_chain(3)
    assert l.size == 16 and len(l.atoms()) == 7 and verify(l).ok


def test_triangle_rejected():
    with pytest.raises(StructuralError) as err:
        from_greechie(GreechieDiagram("abcdef", ["abc", "cde", "efa"]))
    assert err.value.witness is not None


@pytest.mark.parametrize(
    "atoms, blocks",
    [
        ("abc", ["ab", "c"]),  # block too small
        ("abcd", ["abc", "abd"]),  # two shared atoms
        ("abcd", ["abc"]),  # atom in no block
        ("ab", ["abx"]),  # undeclared atom
    ],
)
def test_invalid_diagrams(atoms, blocks):
    with pytest.raises(StructuralError):
        from_greechie(GreechieDiagram(atoms, blocks))


@pytest.mark.parametrize("n", range(1, 6))
def test_horizontal_sum_of_squares_is_mo(n):
    squares = [boolean_algebra(2)] * n
    l = squares[0] if n == 1 else horizontal_sum(*squares)
    assert are_isomorphic(l, mo(n))


def test_horizontal_sum_requires_two():
    with pytest.raises(ValueError):
        horizontal_sum(boolean_algebra(2))


def test_direct_products():
    assert are_isomorphic(direct_product(boolean_algebra(1), boolean_algebra(1)), boolean_algebra(2))
    l = direct_product(mo(2), boolean_algebra(1))
    assert l.size == 12 and verify(l).ok


def test_family_specs():
    assert family("boolean:3").size == 8
    assert family("mo:2").size == 6
    assert family("bowtie").size == 12
    assert family("chain:2").size == 12
    for bad in ["nope", "boolean:x", "mo"]:
        with pytest.raises(ValueError):
            family(bad)
