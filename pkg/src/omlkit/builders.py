"""Constructors for the finite orthomodular lattices used as test corpus.

Every constructor passes its output through :func:`omlkit.lattice.verify` and
raises :class:`StructuralError` if any axiom fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import StructuralError
from .lattice import Lattice, bits, require_oml, transitive_closure, verify

MAX_BOOLEAN_ATOMS = 16


def _subset_label(names, mask, top_mask):
    if mask == 0:
        return "0"
    if mask == top_mask:
        return "1"
    return "|".join(n for i, n in enumerate(names) if mask >> i & 1)


def boolean_algebra(n: int) -> Lattice:
    """The power-set lattice on ``n`` atoms; element id = subset bitmask."""
    if not 1 <= n <= MAX_BOOLEAN_ATOMS:
        raise ValueError(f"boolean_algebra needs 1 <= n <= {MAX_BOOLEAN_ATOMS}, got {n}")
    size = 1 << n
    full = size - 1
    up = []
    for s in range(size):
        free = full & ~s
        row = 0
        sub = free
        while True:
            row |= 1 << (s | sub)
            if sub == 0:
                break
            sub = (sub - 1) & free
        up.append(row)
    ortho = [full ^ s for s in range(size)]
    names = [f"p{i + 1}" for i in range(n)]
    labels = [_subset_label(names, s, full) for s in range(size)]
    return require_oml(Lattice(up, ortho, labels), f"boolean_algebra({n})")


def mo(n: int) -> Lattice:
    """MO(n): 0, 1 and ``n`` complementary atom pairs, all atoms pairwise incomparable."""
    if n < 1:
        raise ValueError(f"mo needs n >= 1, got {n}")
    size = 2 * n + 2
    top = size - 1
    covers: list[list[int]] = [list(range(1, top))]
    covers += [[top] for _ in range(2 * n)]
    covers.append([])
    ortho = [top] + [i + 1 if i % 2 else i - 1 for i in range(1, top)] + [0]
    labels = ["0"]
    for i in range(1, n + 1):
        labels += [f"a{i}", f"a{i}'"]
    labels.append("1")
    return require_oml(Lattice.from_covers(covers, ortho, labels), f"mo({n})")


def o6() -> Lattice:
    """The hexagon (benzene) ortholattice: an ortholattice that is not orthomodular.

    Not verified on construction; it exists to exercise failure paths.
    """
    # 0 < x < y < 1 and 0 < y' < x' < 1
    covers = [[1, 3], [2], [5], [4], [5], []]
    ortho = [5, 4, 3, 2, 1, 0]
    return Lattice.from_covers(covers, ortho, ["0", "x", "y", "y'", "x'", "1"])


@dataclass(frozen=True)
class GreechieDiagram:
    """Atoms plus the atom sets of the maximal Boolean blocks."""

    atoms: tuple[str, ...]
    blocks: tuple[tuple[str, ...], ...]

    def __init__(self, atoms: Sequence[str], blocks: Sequence[Sequence[str]]):
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in blocks))

    def validate(self):
        known = set(self.atoms)
        if len(known) != len(self.atoms):
            raise StructuralError("duplicate atom names", self.atoms)
        seen = set()
        for b in self.blocks:
            if len(b) < 2:
                raise StructuralError(f"block {b} has fewer than 2 atoms", b)
            if len(set(b)) != len(b):
                raise StructuralError(f"block {b} repeats an atom", b)
            unknown = set(b) - known
            if unknown:
                raise StructuralError(f"block {b} uses undeclared atoms {sorted(unknown)}", b)
            seen.update(b)
        if seen != known:
            raise StructuralError(f"atoms {sorted(known - seen)} lie in no block", sorted(known - seen))
        for b1, b2 in combinations(self.blocks, 2):
            if len(set(b1) & set(b2)) > 1:
                raise StructuralError(f"blocks {b1} and {b2} share more than one atom", (b1, b2))
        return self


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def from_greechie(diagram: GreechieDiagram) -> Lattice:
    """Paste the Boolean blocks of ``diagram`` along shared atoms.

    An element is a pair (block, subset of block); two pairs are identified
    when their subsets coincide or their complements within their blocks
    coincide.  The order is generated by blockwise inclusion.  The result is
    brute-force verified; diagrams with short loops are rejected.
    """
    diagram.validate()
    atom_index = {a: i for i, a in enumerate(diagram.atoms)}
    blocks = [frozenset(atom_index[a] for a in b) for b in diagram.blocks]

    uf = _UnionFind()
    members = []
    for bi, b in enumerate(blocks):
        for k in range(len(b) + 1):
            for s in combinations(sorted(b), k):
                members.append((bi, frozenset(s)))
    by_subset: dict[frozenset, list] = {}
    by_complement: dict[frozenset, list] = {}
    for bi, s in members:
        by_subset.setdefault(s, []).append((bi, s))
        by_complement.setdefault(blocks[bi] - s, []).append((bi, s))
    for group in list(by_subset.values()) + list(by_complement.values()):
        for m in group[1:]:
            uf.union(group[0], m)

    classes: dict = {}
    for m in members:
        classes.setdefault(uf.find(m), []).append(m)

    def canon(reps):
        return min((len(s), sorted(s)) for _, s in reps)

    empty = uf.find((0, frozenset()))
    full = uf.find((0, blocks[0]))
    if empty == full:
        raise StructuralError("pasting identifies 0 with 1")

    def key(root):
        kind = 0 if root == empty else 2 if root == full else 1
        return (kind, canon(classes[root]))

    roots = sorted(classes, key=key)
    ids = {r: i for i, r in enumerate(roots)}
    elem = {m: ids[uf.find(m)] for m in members}
    size = len(roots)

    rows = [0] * size
    ortho = [None] * size
    for bi, s in members:
        a = elem[(bi, s)]
        comp = elem[(bi, blocks[bi] - s)]
        if ortho[a] is not None and ortho[a] != comp:
            raise StructuralError("pasting gives an element two orthocomplements", (a, ortho[a], comp))
        ortho[a] = comp
        for k in range(len(s), len(blocks[bi]) + 1):
            for extra in combinations(sorted(blocks[bi] - s), k - len(s)):
                rows[a] |= 1 << elem[(bi, s | frozenset(extra))]
    rows = transitive_closure(rows)

    names = diagram.atoms
    labels = []
    for r in roots:
        if r == empty:
            labels.append("0")
        elif r == full:
            labels.append("1")
        else:
            labels.append("|".join(names[i] for i in canon(classes[r])[1]))
    return require_oml(Lattice(rows, ortho, labels), "Greechie pasting")


def bowtie() -> Lattice:
    """Two three-atom blocks sharing one atom (12 elements)."""
    return from_greechie(GreechieDiagram("abcde", ["abc", "cde"]))


def greechie_chain(k: int = 3) -> Lattice:
    """``k`` three-atom blocks, each sharing one atom with the next."""
    if k < 1:
        raise ValueError("chain needs at least one block")
    names = [chr(ord("a") + i) for i in range(2 * k + 1)]
    blocks = [names[2 * i:2 * i + 3] for i in range(k)]
    return from_greechie(GreechieDiagram(names, blocks))


def direct_product(l1: Lattice, l2: Lattice) -> Lattice:
    """Componentwise order and orthocomplement; element (i, j) has id ``i * |l2| + j``."""
    n2 = l2.size
    up = []
    for i in range(l1.size):
        for j in range(n2):
            row = 0
            for k in bits(l1.up[i]):
                base = k * n2
                for m in bits(l2.up[j]):
                    row |= 1 << (base + m)
            up.append(row)
    ortho = [l1.ortho(i) * n2 + l2.ortho(j) for i in range(l1.size) for j in range(n2)]
    labels = [f"({l1.label(i)},{l2.label(j)})" for i in range(l1.size) for j in range(n2)]
    return require_oml(Lattice(up, ortho, labels), "direct product")


def horizontal_sum(*lattices: Lattice) -> Lattice:
    """Disjoint union of the lattices with all bottoms and all tops identified."""
    if len(lattices) < 2:
        raise ValueError("horizontal_sum needs at least two lattices")
    for l in lattices:
        if l.size < 2:
            raise ValueError("horizontal_sum summands need at least 2 elements")
    ids = []
    size = 1
    for l in lattices:
        local = {}
        for a in range(l.size):
            if a not in (l.bottom, l.top):
                local[a] = size
                size += 1
        ids.append(local)
    top = size
    size += 1

    def gid(k, a):
        l = lattices[k]
        if a == l.bottom:
            return 0
        if a == l.top:
            return top
        return ids[k][a]

    up = [0] * size
    ortho = [0] * size
    labels = [""] * size
    up[0] = (1 << size) - 1
    up[top] = 1 << top
    ortho[0], ortho[top] = top, 0
    labels[0], labels[top] = "0", "1"
    for k, l in enumerate(lattices):
        for a, g in ids[k].items():
            row = 0
            for b in bits(l.up[a]):
                row |= 1 << gid(k, b)
            up[g] = row
            ortho[g] = gid(k, l.ortho(a))
            labels[g] = f"s{k + 1}.{l.label(a)}"
    return require_oml(Lattice(up, ortho, labels), "horizontal sum")


def family(spec: str) -> Lattice:
    """Build a lattice from a compact family spec such as ``boolean:3`` or ``mo:2``.

    Recognised names: ``boolean:n``, ``mo:n``, ``bowtie``, ``chain:k``.
    """
    name, _, arg = spec.partition(":")
    try:
        if name == "boolean":
            return boolean_algebra(int(arg))
        if name == "mo":
            return mo(int(arg))
        if name == "bowtie" and not arg:
            return bowtie()
        if name == "chain":
            return greechie_chain(int(arg) if arg else 3)
    except ValueError as exc:
        if "invalid literal" in str(exc):
            raise ValueError(f"bad family parameter in {spec!r}") from None
        raise
    raise ValueError(f"unknown lattice family {spec!r}")


__all__ = [
    "GreechieDiagram",
    "boolean_algebra",
    "bowtie",
    "direct_product",
    "family",
    "from_greechie",
    "greechie_chain",
    "horizontal_sum",
    "mo",
    "o6",
    "verify",
]
