"""Boolean subalgebras of a finite atomic OML and their inclusion poset.

In a finite OML every Boolean subalgebra is generated by its atoms, which
form a family of pairwise orthogonal nonzero elements joining to 1.  Such a
family (an orthopartition) is used as the canonical name of the subalgebra,
and its size is the subalgebra's dimension.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ResourceError
from .formats import serialize_poset
from .lattice import Lattice, bits, transitive_reduction

DEFAULT_BUDGET = 2_000_000


def default_budget() -> int:
    env = os.environ.get("OMLKIT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True, order=True)
class OrthoPartition:
    blocks: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.blocks)

    def is_valid(self, l: Lattice) -> bool:
        if not self.blocks or len(set(self.blocks)) != len(self.blocks):
            return False
        if any(b == l.bottom for b in self.blocks):
            return False
        for i, a in enumerate(self.blocks):
            for b in self.blocks[i + 1:]:
                if not l.orthogonal(a, b):
                    return False
        return l.join_all(self.blocks) == l.top

    def describe(self, l: Lattice) -> str:
        return "{" + ", ".join(l.label(b) for b in self.blocks) + "}"


@dataclass(frozen=True)
class NodeTruth:
    """Lattice-side classification of one subalgebra; never shown to the reconstructor."""

    is_mbsa: bool
    is_sub_mbsa: bool
    is_spiked: bool
    leading: int | None
    generator_heights: tuple[int, ...]


@dataclass
class BSAPoset:
    """The inclusion poset of all Boolean subalgebras of ``lattice``.

    Nodes are sorted by (dimension, blocks); node 0 is the trivial
    subalgebra {0, 1}.  ``up[i]`` is the bitmask of nodes strictly above
    node ``i``; ``covers`` lists pairs (i, j) with j covering i.
    """

    lattice: Lattice
    nodes: list[OrthoPartition]
    elements: list[int]
    up: list[int]
    covers: tuple[tuple[int, int], ...]
    truth: list[NodeTruth] | None = None

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def dims(self) -> list[int]:
        return [p.dimension for p in self.nodes]

    def index(self, blocks) -> int:
        return self.nodes.index(OrthoPartition(tuple(sorted(blocks))))

    def includes(self, v: int, w: int) -> bool:
        """True iff subalgebra ``v`` is contained in subalgebra ``w``."""
        return v == w or bool(self.up[v] >> w & 1)

    def to_text(self) -> str:
        return serialize_poset(self.size, self.covers, self.dims)


@dataclass(frozen=True)
class AbstractPoset:
    """A bare finite poset given by its cover relation.

    ``origin`` maps each node back to the BSAPoset node it was made from; it
    is bookkeeping for test harnesses and is ignored by the reconstructor.
    """

    size: int
    covers: tuple[tuple[int, int], ...]
    origin: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def to_text(self) -> str:
        return serialize_poset(self.size, self.covers)

    @classmethod
    def from_text(cls, text: str) -> "AbstractPoset":
        from .formats import parse_poset

        size, covers, _ = parse_poset(text)
        return cls(size, covers)


def subalgebra_elements(l: Lattice, p: OrthoPartition) -> int:
    """Bitmask of the joins of all sub-families of ``p``'s blocks."""
    joins = {l.bottom}
    for b in p.blocks:
        joins |= {l.join(j, b) for j in joins}
    mask = 0
    for j in joins:
        mask |= 1 << j
    return mask


def grouping_includes(l: Lattice, v: OrthoPartition, w: OrthoPartition) -> bool:
    """True iff every block of ``v`` is the join of the blocks of ``w`` below it."""
    used = 0
    for q in v.blocks:
        below = [b for b in w.blocks if l.leq(b, q)]
        if not below or l.join_all(below) != q:
            return False
        for b in below:
            bit = 1 << w.blocks.index(b)
            if used & bit:
                return False
            used |= bit
    return True


def orthopartitions(l: Lattice, budget: int | None = None) -> list[OrthoPartition]:
    """All orthopartitions of the top element, blocks chosen in increasing id order."""
    budget = default_budget() if budget is None else budget
    n = l.size
    orth = []
    for a in range(n):
        orth.append(l.down[l.ortho(a)] & ~(1 << l.bottom))
    nonzero = ((1 << n) - 1) & ~(1 << l.bottom)
    found: list[OrthoPartition] = []
    states = 0

    stack = [((), l.bottom, nonzero)]
    while stack:
        chosen, acc, cand = stack.pop()
        states += 1
        if states > budget:
            raise ResourceError(f"subalgebra enumeration exceeded budget of {budget} states")
        rest = l.ortho(acc)
        # every later block lies below the complement of what is chosen
        cand &= l.down[rest]
        for c in bits(cand):
            j = l.join(acc, c)
            if j == l.top:
                found.append(OrthoPartition(chosen + (c,)))
            else:
                higher = cand & orth[c] & ~((1 << (c + 1)) - 1)
                if higher:
                    stack.append((chosen + (c,), j, higher))
    found.sort(key=lambda p: (p.dimension, p.blocks))
    return found


def enumerate_bsas(l: Lattice, budget: int | None = None, annotate: bool = True) -> BSAPoset:
    """Enumerate every Boolean subalgebra of ``l`` and build the inclusion poset.

    Inclusion is tested on element sets; the cover relation is the
    transitive reduction of inclusion.
    """
    nodes = orthopartitions(l, budget)
    elements = [subalgebra_elements(l, p) for p in nodes]
    up = []
    for i, ei in enumerate(elements):
        row = 0
        for j, ej in enumerate(elements):
            if i != j and ei & ~ej == 0:
                row |= 1 << j
        up.append(row)
    cover_rows = transitive_reduction(up)
    covers = tuple((i, j) for i, r in enumerate(cover_rows) for j in bits(r))
    poset = BSAPoset(l, nodes, elements, up, covers)
    if annotate:
        poset.truth = ground_truth(l, poset)
    return poset


def successors(poset, v: int) -> list[int]:
    """Nodes covering ``v`` in any poset exposing ``size`` and ``covers``."""
    return sorted(j for i, j in poset.covers if i == v)


def double_successors(poset, v: int) -> list[int]:
    succ = {}
    for i, j in poset.covers:
        succ.setdefault(i, set()).add(j)
    out = set()
    for s in succ.get(v, ()):
        out |= succ.get(s, set())
    return sorted(out)


def ground_truth(l: Lattice, poset: BSAPoset) -> list[NodeTruth]:
    """Classify each node from the heights of its generators in ``l``."""
    h = l.heights
    out = []
    for p in poset.nodes:
        non_atoms = [b for b in p.blocks if h[b] > 1]
        spiked = len(non_atoms) <= 1
        out.append(
            NodeTruth(
                is_mbsa=not non_atoms,
                is_sub_mbsa=len(non_atoms) == 1 and h[non_atoms[0]] == 2,
                is_spiked=spiked,
                leading=non_atoms[0] if len(non_atoms) == 1 else None,
                generator_heights=tuple(h[b] for b in p.blocks),
            )
        )
    return out


def anonymize(poset, seed: int) -> AbstractPoset:
    """Relabel nodes by a seeded random permutation, keeping only the covers."""
    perm = list(range(poset.size))
    random.Random(seed).shuffle(perm)
    covers = tuple(sorted((perm[i], perm[j]) for i, j in poset.covers))
    origin = [0] * poset.size
    for old, new in enumerate(perm):
        origin[new] = old
    return AbstractPoset(poset.size, covers, tuple(origin))


def relabel(poset: AbstractPoset, perm: Sequence[int]) -> AbstractPoset:
    """Rename node ``i`` to ``perm[i]``."""
    covers = tuple(sorted((perm[i], perm[j]) for i, j in poset.covers))
    origin = None
    if poset.origin is not None:
        origin = [0] * poset.size
        for old, new in enumerate(perm):
            origin[new] = poset.origin[old]
        origin = tuple(origin)
    return AbstractPoset(poset.size, covers, origin)


def bsa_stats(poset: BSAPoset) -> dict:
    dims = poset.dims
    hist: dict[int, int] = {}
    for d in dims:
        hist[d] = hist.get(d, 0) + 1
    maximal = sum(1 for r in poset.up if r == 0)
    return {
        "nodes": poset.size,
        "covers": len(poset.covers),
        "maximal": maximal,
        "by_dimension": dict(sorted(hist.items())),
    }


__all__ = [
    "AbstractPoset",
    "BSAPoset",
    "NodeTruth",
    "OrthoPartition",
    "anonymize",
    "bsa_stats",
    "double_successors",
    "enumerate_bsas",
    "grouping_includes",
    "ground_truth",
    "orthopartitions",
    "relabel",
    "subalgebra_elements",
    "successors",
]
