"""Finite bounded ortholattices over dense integer element ids.

The order is stored as one bitset row per element: ``up[a]`` is a Python int
whose bit ``b`` is set iff ``a <= b`` (the principal filter of ``a``).  The
transposed rows ``down[b]`` (principal ideals) are derived at construction.
Lattice values are immutable; meets and joins are computed on demand and
memoized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import ElementError, StructuralError


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def transitive_closure(rows: Sequence[int]) -> list[int]:
    """Reflexive-transitive closure of a relation given as successor bitsets."""
    closed = [r | (1 << i) for i, r in enumerate(rows)]
    n = len(closed)
    for k in range(n):
        kbit = 1 << k
        row_k = closed[k]
        for i in range(n):
            if closed[i] & kbit:
                closed[i] |= row_k
    return closed


def transitive_reduction(strict_up: Sequence[int]) -> list[int]:
    """Cover rows of a strict order given by its (transitively closed) up-sets."""
    covers = []
    for row in strict_up:
        implied = 0
        for j in bits(row):
            implied |= strict_up[j]
        covers.append(row & ~implied)
    return covers


class Lattice:
    """A finite bounded ortholattice.

    Parameters
    ----------
    up : sequence of int
        ``up[a]`` has bit ``b`` set iff ``a <= b``.  Must be reflexive and
        transitive for the query methods to be meaningful; :func:`verify`
        checks this and everything else.
    ortho : sequence of int
        The orthocomplement as a permutation of element ids.
    labels : sequence of str, optional
        Human-readable element names (whitespace-free).
    """

    def __init__(self, up: Sequence[int], ortho: Sequence[int], labels: Sequence[str] | None = None):
        self.size = len(up)
        if len(ortho) != self.size:
            raise StructuralError("ortho map length differs from lattice size")
        if labels is not None and len(labels) != self.size:
            raise StructuralError("label count differs from lattice size")
        self.up = tuple(up)
        self.ortho_map = tuple(ortho)
        self.labels = tuple(labels) if labels is not None else None
        full = (1 << self.size) - 1
        down = [0] * self.size
        for a, row in enumerate(self.up):
            for b in bits(row):
                down[b] |= 1 << a
        self.down = tuple(down)
        self.full = full

        bottoms = [a for a in range(self.size) if self.up[a] == full]
        tops = [a for a in range(self.size) if self.down[a] == full]
        if len(bottoms) != 1 or len(tops) != 1:
            raise StructuralError("order has no unique bottom and top", (bottoms, tops))
        self.bottom = bottoms[0]
        self.top = tops[0]
        self._meets: dict[tuple[int, int], int] = {}
        self._joins: dict[tuple[int, int], int] = {}
        self._heights: tuple[int, ...] | None = None

    @classmethod
    def from_covers(cls, covers: Sequence[Iterable[int]], ortho, labels=None) -> "Lattice":
        """Build from upper-cover lists; the order is their reflexive-transitive closure."""
        rows = []
        for cs in covers:
            r = 0
            for c in cs:
                r |= 1 << c
            rows.append(r)
        return cls(transitive_closure(rows), ortho, labels)

    @classmethod
    def from_leq(cls, size: int, leq, ortho, labels=None) -> "Lattice":
        rows = []
        for a in range(size):
            r = 0
            for b in range(size):
                if leq(a, b):
                    r |= 1 << b
            rows.append(r)
        return cls(rows, ortho, labels)

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return (self.up, self.ortho_map, self.labels) == (other.up, other.ortho_map, other.labels)

    def __hash__(self):
        return hash((self.up, self.ortho_map))

    def __repr__(self):
        return f"Lattice(size={self.size}, atoms={len(self.atoms())})"

    def _check(self, a):
        if not (isinstance(a, int) and 0 <= a < self.size):
            raise ElementError(f"element id {a!r} out of range 0..{self.size - 1}")

    def label(self, a: int) -> str:
        self._check(a)
        return self.labels[a] if self.labels is not None else str(a)

    def index(self, label: str) -> int:
        if self.labels is None:
            raise KeyError(label)
        return self.labels.index(label)

    # order queries

    def leq(self, a: int, b: int) -> bool:
        self._check(a)
        self._check(b)
        return bool(self.up[a] >> b & 1)

    def ortho(self, a: int) -> int:
        self._check(a)
        return self.ortho_map[a]

    def orthogonal(self, a: int, b: int) -> bool:
        return self.leq(a, self.ortho(b))

    def _greatest(self, mask: int, what: str, pair) -> int:
        best = max(bits(mask), key=lambda x: popcount(self.down[x]), default=None)
        if best is None or mask & ~self.down[best]:
            raise StructuralError(f"no {what} for elements {pair}", pair)
        return best

    def _least(self, mask: int, what: str, pair) -> int:
        best = max(bits(mask), key=lambda x: popcount(self.up[x]), default=None)
        if best is None or mask & ~self.up[best]:
            raise StructuralError(f"no {what} for elements {pair}", pair)
        return best

    def meet(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        key = (a, b) if a <= b else (b, a)
        m = self._meets.get(key)
        if m is None:
            m = self._meets[key] = self._greatest(self.down[a] & self.down[b], "meet", key)
        return m

    def join(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        key = (a, b) if a <= b else (b, a)
        j = self._joins.get(key)
        if j is None:
            j = self._joins[key] = self._least(self.up[a] & self.up[b], "join", key)
        return j

    def join_all(self, elements: Iterable[int]) -> int:
        acc = self.bottom
        for e in elements:
            acc = self.join(acc, e)
        return acc

    def meet_all(self, elements: Iterable[int]) -> int:
        acc = self.top
        for e in elements:
            acc = self.meet(acc, e)
        return acc

    # height and atoms

    @property
    def heights(self) -> tuple[int, ...]:
        """Longest-chain length from the bottom, per element (gradedness not assumed)."""
        if self._heights is None:
            order = sorted(range(self.size), key=lambda x: popcount(self.down[x]))
            h = [0] * self.size
            for x in order:
                below = self.down[x] & ~(1 << x)
                h[x] = max((h[y] + 1 for y in bits(below)), default=0)
            self._heights = tuple(h)
        return self._heights

    def height(self, a: int) -> int:
        self._check(a)
        return self.heights[a]

    def is_atom(self, a: int) -> bool:
        return self.height(a) == 1

    def atoms(self) -> list[int]:
        return [a for a, h in enumerate(self.heights) if h == 1]

    def rank(self) -> int:
        return self.heights[self.top]

    def atom_decomposition(self, a: int) -> list[int]:
        """Pairwise orthogonal atoms whose join is ``a``.

        Greedy: take the lowest-id atom ``q <= a`` and continue with
        ``q⊥ ∧ a``.  Decompositions are not unique in general.
        """
        self._check(a)
        if a == self.bottom:
            raise ElementError("bottom has no atom decomposition")
        atom_mask = 0
        for q in self.atoms():
            atom_mask |= 1 << q
        parts: list[int] = []
        rest = a
        while rest != self.bottom:
            below = self.down[rest] & atom_mask
            if not below:
                raise StructuralError(f"element {rest} dominates no atom", rest)
            q = next(bits(below))
            nxt = self.meet(self.ortho(q), rest)
            if nxt == rest or any(not self.orthogonal(q, p) for p in parts):
                raise StructuralError(f"atom decomposition of {a} made no progress", (a, q))
            parts.append(q)
            rest = nxt
        if self.join_all(parts) != a:
            raise StructuralError(f"atoms {parts} do not join to {a}; lattice is not orthomodular", (a, parts))
        return sorted(parts)

    def covers(self) -> list[list[int]]:
        """Upper covers of each element (the Hasse diagram)."""
        strict = [row & ~(1 << i) for i, row in enumerate(self.up)]
        return [list(bits(r)) for r in transitive_reduction(strict)]


@dataclass
class AxiomCheck:
    name: str
    passed: bool | None
    witness: object = None
    note: str = ""

    def __str__(self):
        status = {True: "pass", False: "FAIL", None: "skip"}[self.passed]
        text = f"{self.name:<14} {status}"
        if self.note:
            text += f"  {self.note}"
        if self.passed is False and self.witness is not None:
            text += f"  witness={self.witness}"
        return text


@dataclass
class VerifyReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if c.passed is False]

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)


def _check_poset(l: Lattice) -> AxiomCheck:
    n = l.size
    for a in range(n):
        if not l.up[a] >> a & 1:
            return AxiomCheck("poset", False, (a,), "not reflexive")
    for a in range(n):
        for b in bits(l.up[a] & ~(1 << a)):
            if l.up[b] >> a & 1:
                return AxiomCheck("poset", False, (a, b), "not antisymmetric")
    for a in range(n):
        for b in bits(l.up[a]):
            extra = l.up[b] & ~l.up[a]
            if extra:
                return AxiomCheck("poset", False, (a, b, next(bits(extra))), "not transitive")
    return AxiomCheck("poset", True)


def _check_lattice(l: Lattice) -> AxiomCheck:
    for a in range(l.size):
        for b in range(a + 1, l.size):
            try:
                l.meet(a, b)
                l.join(a, b)
            except StructuralError as exc:
                return AxiomCheck("lattice", False, (a, b), str(exc))
    return AxiomCheck("lattice", True)


def _check_ortho(l: Lattice) -> AxiomCheck:
    o = l.ortho_map
    if sorted(o) != list(range(l.size)):
        return AxiomCheck("ortholattice", False, None, "ortho is not a permutation")
    for a in range(l.size):
        if o[o[a]] != a:
            return AxiomCheck("ortholattice", False, (a,), "ortho is not an involution")
    for a in range(l.size):
        for b in bits(l.up[a]):
            if not l.up[o[b]] >> o[a] & 1:
                return AxiomCheck("ortholattice", False, (a, b), "ortho is not order-reversing")
    for a in range(l.size):
        if l.meet(a, o[a]) != l.bottom or l.join(a, o[a]) != l.top:
            return AxiomCheck("ortholattice", False, (a,), "ortho is not a complement")
    return AxiomCheck("ortholattice", True)


def _check_orthomodular(l: Lattice) -> AxiomCheck:
    for a in range(l.size):
        oa = l.ortho_map[a]
        for b in bits(l.up[a]):
            if l.join(a, l.meet(oa, b)) != b:
                return AxiomCheck("orthomodular", False, (a, b), "a <= b but a v (a' ^ b) != b")
    return AxiomCheck("orthomodular", True)


def _check_atomic(l: Lattice) -> AxiomCheck:
    atom_mask = 0
    for q in l.atoms():
        atom_mask |= 1 << q
    for a in range(l.size):
        if a != l.bottom and not l.down[a] & atom_mask:
            return AxiomCheck("atomic", False, (a,), "nonzero element above no atom")
    return AxiomCheck("atomic", True)


def verify(l: Lattice) -> VerifyReport:
    """Check the ortholattice axioms, orthomodularity and atomicity.

    Later checks are skipped when an earlier one they depend on fails.
    """
    report = VerifyReport()
    poset = _check_poset(l)
    report.checks.append(poset)
    lattice = _check_lattice(l) if poset.passed else AxiomCheck("lattice", None, note="needs poset")
    report.checks.append(lattice)
    if lattice.passed:
        ortho = _check_ortho(l)
        report.checks.append(ortho)
        report.checks.append(
            _check_orthomodular(l) if ortho.passed else AxiomCheck("orthomodular", None, note="needs ortholattice")
        )
        report.checks.append(_check_atomic(l))
    else:
        for name in ("ortholattice", "orthomodular", "atomic"):
            report.checks.append(AxiomCheck(name, None, note="needs lattice"))
    return report


def require_oml(l: Lattice, what: str = "lattice") -> Lattice:
    """Return ``l`` unchanged if it is an atomic OML, else raise with the first witness."""
    report = verify(l)
    if not report.ok:
        bad = next(c for c in report.checks if not c.passed)
        raise StructuralError(f"{what} fails {bad.name}: {bad.note}", bad.witness)
    return l
