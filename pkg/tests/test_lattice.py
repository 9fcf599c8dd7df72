import pytest
from hypothesis import given, settings, strategies as st

from omlkit.builders import boolean_algebra, bowtie, mo, o6
from omlkit.errors import ElementError, StructuralError
from omlkit.lattice import Lattice, transitive_closure, verify

from conftest import CORPUS, corpus_lattice
from oracles import brute_join, brute_meet, closure_elements, leq_matrix, longest_chain_height


def test_leq_examples():
    b3 = boolean_algebra(3)
    p1, p12 = b3.index("p1"), b3.index("p1|p2")
    assert b3.leq(p1, p12)
    assert not b3.leq(b3.top, b3.bottom)
    m2 = mo(2)
    assert not m2.leq(m2.index("a1"), m2.index("a2'"))


def test_leq_bounds_and_range():
    l = bowtie()
    assert all(l.leq(l.bottom, x) and l.leq(x, l.top) for x in range(l.size))
    with pytest.raises(ElementError):
        l.leq(0, l.size)
    with pytest.raises(ElementError):
        l.ortho(-1)


def test_meet_join_examples():
    m2 = mo(2)
    a, b = m2.index("a1"), m2.index("a2")
    assert m2.join(a, b) == m2.top
    assert brute_join(leq_matrix(m2), a, b) == m2.top
    for x in range(m2.size):
        assert m2.meet(x, m2.ortho(x)) == m2.bottom
        assert m2.join(x, m2.bottom) == x


def test_ortho_examples():
    b3 = boolean_algebra(3)
    assert b3.ortho(b3.index("p1")) == b3.index("p2|p3")
    assert b3.ortho(b3.bottom) == b3.top
    assert all(b3.ortho(b3.ortho(x)) == x for x in range(b3.size))


def test_orthogonal_examples():
    b3 = boolean_algebra(3)
    assert b3.orthogonal(b3.index("p1"), b3.index("p2"))
    m2 = mo(2)
    a, b = m2.index("a1"), m2.index("a2")
    assert m2.orthogonal(a, m2.ortho(a))
    assert not m2.orthogonal(a, b)


def test_height_examples():
    b4 = boolean_algebra(4)
    assert b4.height(b4.bottom) == 0
    x = b4.index("p1|p2")
    assert b4.height(x) == 2 == longest_chain_height(leq_matrix(b4), x)
    assert b4.height(b4.top) == 4
    m3 = mo(3)
    assert all(m3.is_atom(x) for x in range(m3.size) if x not in (m3.bottom, m3.top))


@pytest.mark.parametrize("name", ["2^3", "2^4", "MO(3)", "bowtie", "chain3", "2^3+2^3"])
def test_heights_match_chain_oracle(name):
    l = corpus_lattice(name)
    le = leq_matrix(l)
    assert list(l.heights) == [longest_chain_height(le, a) for a in range(l.size)]


def test_verify_examples():
    for n in range(1, 5):
        assert verify(boolean_algebra(n)).ok
    assert verify(mo(3)).ok
    report = verify(o6())
    assert report["ortholattice"].passed
    om = report["orthomodular"]
    assert om.passed is False
    a, b = om.witness
    l = o6()
    assert l.leq(a, b) and l.join(a, l.meet(l.ortho(a), b)) != b


def test_verify_reports_non_poset():
    # 1 and 2 above each other: antisymmetry fails
    up = transitive_closure([0b1111, 0b1110, 0b1110, 0b1000])
    l = Lattice(up, [3, 2, 1, 0])
    report = verify(l)
    assert report["poset"].passed is False
    assert report["lattice"].passed is None
    assert not report.ok


def test_meet_missing_raises():
    # 0 < a, b < c, d < 1: a and b have two minimal upper bounds
    up = transitive_closure([0b11111 << 0 | 1 << 5, 1 << 3 | 1 << 4, 1 << 3 | 1 << 4, 1 << 5, 1 << 5, 0])
    l = Lattice(up, [5, 2, 1, 4, 3, 0])
    with pytest.raises(StructuralError):
        l.join(1, 2)
    assert verify(l)["lattice"].passed is False


def test_atom_decomposition_examples():
    b3 = boolean_algebra(3)
    p1 = b3.index("p1")
    assert b3.atom_decomposition(p1) == [p1]
    assert b3.atom_decomposition(b3.index("p1|p2")) == [p1, b3.index("p2")]
    bt = bowtie()
    c_perp = bt.ortho(bt.index("c"))
    parts = bt.atom_decomposition(c_perp)
    valid = [sorted([bt.index("a"), bt.index("b")]), sorted([bt.index("d"), bt.index("e")])]
    assert parts in valid
    for option in valid:
        # both decompositions close to the same four-element subalgebra {0, c, c', 1} plus the parts
        assert c_perp in closure_elements(bt, option)
    with pytest.raises(ElementError):
        bt.atom_decomposition(bt.bottom)


def test_atom_decomposition_fails_on_non_oml():
    l = o6()
    with pytest.raises(StructuralError):
        l.atom_decomposition(l.index("y"))


@pytest.mark.parametrize("name", [n for n in CORPUS if n != "2^5"])
def test_meet_join_agree_with_bruteforce(name):
    l = corpus_lattice(name)
    le = leq_matrix(l)
    for a in range(l.size):
        for b in range(l.size):
            assert l.meet(a, b) == brute_meet(le, a, b)
            assert l.join(a, b) == brute_join(le, a, b)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(CORPUS), st.data())
def test_lattice_laws(name, data):
    l = corpus_lattice(name)
    elem = st.integers(0, l.size - 1)
    a, b = data.draw(elem), data.draw(elem)
    assert l.orthogonal(a, b) == l.orthogonal(b, a)
    if l.orthogonal(a, b):
        assert l.meet(a, b) == l.bottom
    assert l.meet(a, b) == l.meet(b, a) and l.join(a, b) == l.join(b, a)
    assert l.meet(a, a) == a == l.join(a, a)
    if l.leq(a, b):
        assert l.join(a, l.meet(l.ortho(a), b)) == b
    if a != l.bottom:
        parts = l.atom_decomposition(a)
        assert all(l.is_atom(p) for p in parts)
        assert all(l.orthogonal(p, q) for p in parts for q in parts if p != q)
        assert l.join_all(parts) == a


def test_is_atom_iff_height_one():
    l = bowtie()
    assert [l.is_atom(x) for x in range(l.size)] == [h == 1 for h in l.heights]
