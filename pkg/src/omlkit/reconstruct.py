"""Rebuild an atomic orthomodular lattice from the bare poset of its Boolean subalgebras.

The input is only a cover relation over opaque node ids.  The pipeline:

1. grade the poset (dimension = 1 + longest chain from the bottom node);
2. profile every node: maximal, sub-maximal, spiked;
3. for each 2-dimensional node V, collect M_V, its minimal spiked
   super-algebras, and split M_V into two cells, one per generator of V;
4. order the cells, add 0 and 1, close transitively and check the result is
   an atomic orthomodular lattice.

Nodes are identified with their ids in the input poset throughout.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from .errors import NotBSAPosetError, ReconstructionError, StructuralError
from .lattice import Lattice, bits, popcount, transitive_closure, verify

RULE_NAMES = {
    1: "maximal pair (apair atoms)",
    2: "spiked: mBSAs vs itself",
    3: "sub-mBSAs vs 3-dim members",
    4: "no common maximal bound",
    5: "leading-element witnesses",
}


class GradedPoset:
    """A finite poset with a unique bottom whose covers all raise the grade by one.

    ``succ``/``pred`` hold cover rows as bitmasks; ``up``/``down`` hold the
    strict principal filters/ideals.  Spikedness is computed on first use.
    """

    def __init__(self, poset):
        n = poset.size
        self.size = n
        succ = [0] * n
        pred = [0] * n
        for i, j in poset.covers:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise NotBSAPosetError(f"bad cover ({i}, {j})", (i, j))
            succ[i] |= 1 << j
            pred[j] |= 1 << i
        self.succ = succ
        self.pred = pred

        closed = transitive_closure(succ)
        for i in range(n):
            for j in bits(closed[i] & ~(1 << i)):
                if closed[j] >> i & 1:
                    raise NotBSAPosetError(f"cover relation has a cycle through {i} and {j}", (i, j))
        self.up = [row & ~(1 << i) for i, row in enumerate(closed)]
        down = [0] * n
        for i, row in enumerate(self.up):
            for j in bits(row):
                down[j] |= 1 << i
        self.down = down

        minima = [i for i in range(n) if pred[i] == 0]
        if len(minima) != 1:
            raise NotBSAPosetError(f"expected a unique minimum, found {len(minima)}", minima)
        self.bottom = minima[0]

        dims = [0] * n
        for i in sorted(range(n), key=lambda x: popcount(down[x])):
            dims[i] = 1 + max((dims[j] for j in bits(pred[i])), default=0)
        for i, j in poset.covers:
            if dims[j] != dims[i] + 1:
                raise NotBSAPosetError(
                    f"cover {i} < {j} jumps from dimension {dims[i]} to {dims[j]}; poset is not graded", (i, j)
                )
        self.dims = dims
        self._spiked: list[bool] | None = None

    def nodes_of_dim(self, d: int) -> list[int]:
        return [i for i in range(self.size) if self.dims[i] == d]

    def successors(self, v: int) -> list[int]:
        return list(bits(self.succ[v]))

    def double_successors(self, v: int) -> list[int]:
        out = 0
        for s in bits(self.succ[v]):
            out |= self.succ[s]
        return list(bits(out))

    def is_maximal(self, v: int) -> bool:
        return self.succ[v] == 0

    def is_sub_mbsa(self, v: int) -> bool:
        """Non-maximal, and every successor is maximal."""
        return self.succ[v] != 0 and all(self.succ[s] == 0 for s in bits(self.succ[v]))

    def successor_counts(self, v: int) -> dict[int, int]:
        """For each double successor of ``v``, how many successors of ``v`` it contains."""
        return {d: popcount(self.pred[d] & self.succ[v]) for d in self.double_successors(v)}

    def is_spiked(self, v: int) -> bool:
        if self._spiked is None:
            self._spiked = [self._spiked_uncached(i) for i in range(self.size)]
        return self._spiked[v]

    def _spiked_uncached(self, v):
        if self.is_maximal(v) or self.is_sub_mbsa(v):
            return True
        return all(c == 3 for c in self.successor_counts(v).values())

    def spiked_mask(self) -> int:
        mask = 0
        for i in range(self.size):
            if self.is_spiked(i):
                mask |= 1 << i
        return mask


def grade(poset) -> list[int]:
    """Dimension of every node; raises :class:`NotBSAPosetError` if the poset is not graded."""
    return GradedPoset(poset).dims


def _graded(p) -> GradedPoset:
    return p if isinstance(p, GradedPoset) else GradedPoset(p)


def detect_mbsa(p, v: int) -> bool:
    return _graded(p).is_maximal(v)


def detect_sub_mbsa(p, v: int) -> bool:
    return _graded(p).is_sub_mbsa(v)


def detect_spiked(p, v: int) -> bool:
    """Maximal and sub-maximal nodes are spiked; otherwise every double
    successor must contain exactly three successors of ``v``."""
    return _graded(p).is_spiked(v)


def generator_case(p, v: int) -> str:
    """Classify a 2-dimensional node purely from the order.

    ``i``: maximal.  ``ii``: covered by a maximal 3-dimensional node.
    ``iii-atomic``: every 4-dimensional node above contains exactly three
    3-dimensional nodes above ``v``.  ``iii-nonatomic``: otherwise.
    """
    gp = _graded(p)
    if gp.dims[v] != 2:
        return "not-2dim"
    if gp.is_maximal(v):
        return "i"
    if any(gp.is_maximal(s) and gp.dims[s] == 3 for s in bits(gp.succ[v])):
        return "ii"
    above = gp.up[v]
    three = 0
    for s in bits(above):
        if gp.dims[s] == 3:
            three |= 1 << s
    fours = [w for w in bits(above) if gp.dims[w] == 4]
    if all(popcount(gp.down[w] & three) == 3 for w in fours):
        return "iii-atomic"
    return "iii-nonatomic"


@dataclass(frozen=True)
class NodeProfile:
    node: int
    dimension: int
    is_maximal: bool
    is_sub_mbsa: bool
    is_spiked: bool
    generator_case: str


def profile(p, v: int) -> NodeProfile:
    gp = _graded(p)
    return NodeProfile(
        node=v,
        dimension=gp.dims[v],
        is_maximal=gp.is_maximal(v),
        is_sub_mbsa=gp.is_sub_mbsa(v),
        is_spiked=gp.is_spiked(v),
        generator_case=generator_case(gp, v),
    )


def minimal_spiked_supbsas(p, v: int) -> tuple[str, tuple[int, ...]]:
    """The set M_V for a 2-dimensional node, with its case tag.

    ``d``: v is maximal, M_V = {v}.  ``b``/``c``: v is spiked (``c`` when
    sub-maximal), M_V = maximal nodes above v plus v.  ``a``: v is not
    spiked, M_V = minimal spiked nodes strictly above v.
    """
    gp = _graded(p)
    if gp.dims[v] != 2:
        raise ValueError(f"node {v} has dimension {gp.dims[v]}, expected 2")
    if gp.is_maximal(v):
        return "d", (v,)
    if gp.is_spiked(v):
        tops = [w for w in bits(gp.up[v]) if gp.is_maximal(w)]
        return ("c" if gp.is_sub_mbsa(v) else "b"), tuple(sorted(tops + [v]))
    spiked_above = gp.up[v] & gp.spiked_mask()
    minimal = [w for w in bits(spiked_above) if not gp.down[w] & spiked_above]
    return "a", tuple(minimal)


@dataclass(frozen=True)
class ClassElement:
    """One element of the reconstructed lattice.

    ``kind`` is ``zero``, ``one``, ``apair`` or ``class``.  Class elements
    belong to a 2-dimensional ``owner`` node and hold one cell of its M_V;
    ``index`` 1/2 distinguishes the two partners (for spiked owners, 1 is the
    atom side R_V and 2 the coatom side S_V).
    """

    kind: str
    owner: int | None = None
    members: frozenset = frozenset()
    index: int = 0
    rule: int = 0

    @property
    def sort_key(self):
        kind_rank = {"zero": 0, "apair": 1, "class": 2, "one": 3}[self.kind]
        return (kind_rank, -1 if self.owner is None else self.owner, self.index)

    @property
    def label(self) -> str:
        if self.kind == "zero":
            return "0"
        if self.kind == "one":
            return "1"
        if self.kind == "apair":
            return f"A{self.owner}.{self.index}"
        return f"V{self.owner}.{self.index}"


def _two_cells(owner, cells, rule, witness_msg):
    cells = [frozenset(c) for c in cells if c]
    if len(cells) != 2:
        raise ReconstructionError(
            "partition",
            f"node {owner}: {RULE_NAMES[rule]} gave {len(cells)} cells, expected 2 ({witness_msg})",
            (owner, tuple(sorted(tuple(sorted(c)) for c in cells))),
        )
    cells.sort(key=min)
    return tuple(ClassElement("class", owner, c, k + 1, rule) for k, c in enumerate(cells))


def _components(members, same):
    """Connected components of the graph on ``members`` with edges ``same(a, b)``."""
    parent = {m: m for m in members}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if same(a, b):
                parent[find(a)] = find(b)
    groups: dict = {}
    for m in members:
        groups.setdefault(find(m), set()).add(m)
    return list(groups.values())


def partition_classes(p, v: int, mv: dict | None = None) -> tuple[ClassElement, ClassElement]:
    """Split M_V into the two cells that stand for the generators of ``v``.

    ``mv`` maps every 2-dimensional node to its ``(case, members)``; it is
    computed on demand when omitted (only the leading-element witness rule
    looks at other nodes).
    """
    gp = _graded(p)
    case, members = mv[v] if mv is not None else minimal_spiked_supbsas(gp, v)

    if case == "d":
        return ClassElement("apair", v, frozenset(), 1, 1), ClassElement("apair", v, frozenset(), 2, 1)

    if case in ("b", "c"):
        tops = frozenset(m for m in members if m != v)
        return ClassElement("class", v, tops, 1, 2), ClassElement("class", v, frozenset([v]), 2, 2)

    sub = [m for m in members if gp.is_sub_mbsa(m)]
    rest = [m for m in members if not gp.is_sub_mbsa(m)]
    if sub and rest:
        return _two_cells(v, [sub, rest], 3, "mixed sub-mBSA members")

    if sub and all(gp.dims[m] == 3 for m in members):
        maximal = 0
        for w in range(gp.size):
            if gp.is_maximal(w):
                maximal |= 1 << w

        def share_max(a, b):
            return bool(gp.up[a] & gp.up[b] & maximal)

        cells = _components(list(members), lambda a, b: not share_max(a, b))
        result = _two_cells(v, cells, 4, "all members 3-dim sub-mBSAs")
        first, second = result
        for a in first.members:
            for b in second.members:
                if not share_max(a, b):
                    raise ReconstructionError(
                        "partition", f"node {v}: members {a} and {b} lie in different cells but share no maximal bound", (v, a, b)
                    )
        return result

    if sub:
        raise ReconstructionError("partition", f"node {v}: sub-mBSA members of mixed dimension", (v, members))

    if mv is None:
        mv = {w: minimal_spiked_supbsas(gp, w) for w in gp.nodes_of_dim(2)}
    # A and B share a leading element iff some other non-spiked 2-dim W has
    # C, D in M_W with A <= C and B <= D.
    reach = []
    for w, (wcase, wmembers) in mv.items():
        if w == v or wcase != "a":
            continue
        above = 0
        for c in wmembers:
            above |= gp.down[c] | (1 << c)
        hit = frozenset(a for a in members if above >> a & 1)
        if hit:
            reach.append(hit)

    def same(a, b):
        return any(a in h and b in h for h in reach)

    return _two_cells(v, _components(list(members), same), 5, "leading-element witnesses")


@dataclass
class Relations:
    """Generating relations of the reconstructed order and their closure.

    Pairs ``(i, j)`` mean element ``i`` lies below element ``j``; indices refer
    to the canonical element list.  ``gap`` lists the atom-below-coatom pairs
    contributed by shared maximal nodes.
    """

    generating: set
    closed: list[int]
    gap: list[tuple[int, int]] = field(default_factory=list)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.closed[i] >> j & 1)


def order_relations(p, elements: list[ClassElement], gap_rule: bool = True) -> Relations:
    """Impose the order on ``elements`` (a canonical list including 0 and 1)."""
    gp = _graded(p)
    n = len(elements)
    rel: set[tuple[int, int]] = set()
    zero = next(i for i, e in enumerate(elements) if e.kind == "zero")
    one = next(i for i, e in enumerate(elements) if e.kind == "one")
    for i in range(n):
        rel.add((zero, i))
        rel.add((i, one))

    by_owner: dict[int, list[int]] = {}
    for i, e in enumerate(elements):
        if e.kind == "class":
            by_owner.setdefault(e.owner, []).append(i)
    spiked_owners = {o: ids for o, ids in by_owner.items() if elements[ids[0]].rule == 2}
    plain_owners = {o: ids for o, ids in by_owner.items() if elements[ids[0]].rule != 2}

    # [X] <= [Y] when some A in X contains some B in Y
    plain_cells = [i for ids in plain_owners.values() for i in ids]
    reach_down = {}
    member_mask = {}
    for i in plain_cells:
        below = 0
        mask = 0
        for a in elements[i].members:
            below |= gp.down[a] | (1 << a)
            mask |= 1 << a
        reach_down[i] = below
        member_mask[i] = mask
    for x in plain_cells:
        for y in plain_cells:
            if x != y and reach_down[x] & member_mask[y]:
                rel.add((x, y))

    # atom R_V below [X] when V lies in a member of the partner cell of [X];
    # then the partner cell lies below S_V
    for v, (r, s) in spiked_owners.items():
        v_up = gp.up[v] | (1 << v)
        for w, cells in plain_owners.items():
            x, x_partner = cells
            for cell, partner in ((x, x_partner), (x_partner, x)):
                if v_up & member_mask[partner]:
                    rel.add((r, cell))
                    rel.add((partner, s))

    gap = []
    if gap_rule:
        items = sorted(spiked_owners.items())
        for v, (rv, sv) in items:
            rv_mask = _mask(elements[rv].members)
            for w, (rw, sw) in items:
                if v != w and rv_mask & _mask(elements[rw].members):
                    rel.add((rv, sw))
                    gap.append((rv, sw))

    rows = [0] * n
    for i, j in rel:
        rows[i] |= 1 << j
    closed = transitive_closure(rows)
    for i in range(n):
        for j in bits(closed[i] & ~(1 << i)):
            if closed[j] >> i & 1:
                raise ReconstructionError(
                    "order", f"elements {elements[i].label} and {elements[j].label} lie below each other", (i, j)
                )
    return Relations(rel, closed, sorted(gap))


def _mask(nodes) -> int:
    m = 0
    for a in nodes:
        m |= 1 << a
    return m


def _check_maximal_nodes(gp: GradedPoset, elements, relations: Relations):
    """Each maximal node of dimension >= 3 must be realised as an orthogonal family of atoms."""
    index = {(e.owner, e.index): i for i, e in enumerate(elements) if e.kind == "class" and e.rule == 2}
    for m in range(gp.size):
        if not gp.is_maximal(m) or gp.dims[m] < 3:
            continue
        atoms = sorted(
            (e.owner, i) for i, e in enumerate(elements) if e.kind == "class" and e.rule == 2 and e.index == 1 and m in e.members
        )
        if len(atoms) != gp.dims[m]:
            raise ReconstructionError(
                "order", f"maximal node {m} of dimension {gp.dims[m]} has {len(atoms)} atom classes", (m, atoms)
            )
        for va, ra in atoms:
            for vb, _ in atoms:
                if va != vb and not relations.leq(ra, index[(vb, 2)]):
                    raise ReconstructionError(
                        "order",
                        f"missing atom-coatom relations: atoms of nodes {va} and {vb} share maximal node {m} but are not orthogonal",
                        (m, va, vb),
                    )


@dataclass
class Reconstruction:
    """Everything produced by one reconstruction run."""

    lattice: Lattice
    elements: list[ClassElement]
    profiles: list[NodeProfile]
    mv: dict[int, tuple[str, tuple[int, ...]]]
    relations: Relations
    timings: dict[str, float]
    gap_rule: bool = True

    @property
    def case_histogram(self) -> dict[str, int]:
        return dict(sorted(Counter(case for case, _ in self.mv.values()).items()))

    @property
    def rule_histogram(self) -> dict[int, int]:
        counts = Counter(e.rule for e in self.elements if e.kind in ("class", "apair") and e.index == 1)
        return dict(sorted(counts.items()))

    def report(self) -> str:
        lines = [f"poset nodes: {len(self.profiles)}", f"lattice elements: {self.lattice.size}"]
        lines.append("cases: " + " ".join(f"{k}={v}" for k, v in self.case_histogram.items()))
        lines.append("rules: " + " ".join(f"{k}={v}" for k, v in self.rule_histogram.items()))
        lines.append(f"gap rule: {'on' if self.gap_rule else 'off'} ({len(self.relations.gap)} relations)")
        lines.append("timings: " + " ".join(f"{k}={v:.4f}s" for k, v in self.timings.items()))
        lines.append("classes:")
        for i, e in enumerate(self.elements):
            members = " ".join(str(m) for m in sorted(e.members))
            ortho = self.elements[self.lattice.ortho(i)].label
            lines.append(f"  {i:>4} {e.label:<10} {e.kind:<6} rule={e.rule} ortho={ortho:<10} members: {members}")
        return "\n".join(lines) + "\n"


def reconstruct(poset, gap_rule: bool = True) -> Reconstruction:
    """Run the full pipeline on a poset given by ``size`` and ``covers`` only."""
    timings = {}
    t0 = time.perf_counter()
    gp = GradedPoset(poset)
    profiles = [profile(gp, v) for v in range(gp.size)]
    timings["grade"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    two = gp.nodes_of_dim(2)
    mv = {v: minimal_spiked_supbsas(gp, v) for v in two}
    elements = [ClassElement("zero"), ClassElement("one")]
    for v in two:
        elements.extend(partition_classes(gp, v, mv))
    elements.sort(key=lambda e: e.sort_key)
    timings["classes"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    relations = order_relations(gp, elements, gap_rule)
    _check_maximal_nodes(gp, elements, relations)
    timings["order"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    position = {(e.kind, e.owner, e.index): i for i, e in enumerate(elements)}
    ortho = []
    for e in elements:
        if e.kind == "zero":
            ortho.append(position[("one", None, 0)])
        elif e.kind == "one":
            ortho.append(position[("zero", None, 0)])
        else:
            ortho.append(position[(e.kind, e.owner, 3 - e.index)])
    try:
        lattice = Lattice(relations.closed, ortho, [e.label for e in elements])
    except StructuralError as exc:
        raise ReconstructionError("assemble", str(exc), exc.witness) from exc
    report = verify(lattice)
    if not report.ok:
        bad = report.failures()[0] if report.failures() else report.checks[-1]
        raise ReconstructionError("verify", f"output fails {bad.name}: {bad.note}", bad.witness)
    timings["assemble"] = time.perf_counter() - t0
    return Reconstruction(lattice, elements, profiles, mv, relations, timings, gap_rule)


def assemble(poset, gap_rule: bool = True) -> Lattice:
    """The reconstructed lattice C(L) for the Boolean-subalgebra poset of L."""
    return reconstruct(poset, gap_rule).lattice
