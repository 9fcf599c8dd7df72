"""Ortholattice isomorphism: invariants, backtracking search, brute force, and the end-to-end check."""

from __future__ import annotations

import os
import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations

from .errors import OMLError, ReconstructionError, ResourceError
from .lattice import Lattice, popcount

DEFAULT_SEARCH_BUDGET = 10_000_000


@dataclass
class IsoResult:
    isomorphic: bool
    mapping: dict[int, int] | None = None
    reason: str | None = None

    @property
    def verdict(self) -> str:
        return "isomorphic" if self.isomorphic else "not-isomorphic"

    def __bool__(self):
        return self.isomorphic


def _signatures(l: Lattice) -> list[tuple]:
    h = l.heights
    return [
        (h[a], popcount(l.up[a]), popcount(l.down[a]), h[l.ortho(a)], a == l.ortho(a))
        for a in range(l.size)
    ]


def fingerprint(l: Lattice) -> tuple:
    """A relabeling-invariant summary; isomorphic lattices have equal fingerprints."""
    h = l.heights
    per_height = Counter(h)
    return (
        l.size,
        max(h),
        tuple(sorted(per_height.items())),
        len(l.atoms()),
        tuple(sorted(Counter(_signatures(l)).items())),
    )


def is_isomorphism(l1: Lattice, l2: Lattice, mapping) -> bool:
    """Check that ``mapping`` is a bijection preserving order both ways and commuting with ortho."""
    if l1.size != l2.size or sorted(mapping[a] for a in range(l1.size)) != list(range(l2.size)):
        return False
    for a in range(l1.size):
        if mapping[l1.ortho(a)] != l2.ortho(mapping[a]):
            return False
        ma = mapping[a]
        for b in range(l1.size):
            if l1.leq(a, b) != l2.leq(ma, mapping[b]):
                return False
    return True


def _budget(budget):
    if budget is not None:
        return budget
    env = os.environ.get("OMLKIT_BUDGET")
    return int(env) if env else DEFAULT_SEARCH_BUDGET


def are_isomorphic(l1: Lattice, l2: Lattice, budget: int | None = None) -> IsoResult:
    """Search for an order isomorphism commuting with the orthocomplements.

    Candidates for each element are restricted to elements with the same
    local signature; mapping ``a`` to ``b`` also maps ``a'`` to ``b'``.
    """
    if l1.size != l2.size:
        return IsoResult(False, reason=f"sizes differ ({l1.size} vs {l2.size})")
    f1, f2 = fingerprint(l1), fingerprint(l2)
    if f1 != f2:
        names = ["size", "height", "per-height counts", "atom count", "signature multiset"]
        field_name = next(n for n, x, y in zip(names, f1, f2) if x != y)
        return IsoResult(False, reason=f"fingerprints differ in {field_name}")

    budget = _budget(budget)
    s1, s2 = _signatures(l1), _signatures(l2)
    by_sig: dict[tuple, list[int]] = {}
    for b, s in enumerate(s2):
        by_sig.setdefault(s, []).append(b)
    class_size = Counter(s1)
    order = []
    seen = set()
    for a in sorted(range(l1.size), key=lambda x: (class_size[s1[x]], s1[x][0], x)):
        if a not in seen:
            order.append(a)
            seen.add(a)
            seen.add(l1.ortho(a))

    fwd: dict[int, int] = {}
    used: set[int] = set()
    nodes = 0

    def consistent(a, b):
        for c, d in fwd.items():
            if l1.leq(a, c) != l2.leq(b, d) or l1.leq(c, a) != l2.leq(d, b):
                return False
        return True

    def extend(k):
        nonlocal nodes
        if k == len(order):
            return True
        a = order[k]
        oa = l1.ortho(a)
        for b in by_sig[s1[a]]:
            if b in used:
                continue
            ob = l2.ortho(b)
            if (a == oa) != (b == ob) or (oa != a and ob in used):
                continue
            nodes += 1
            if nodes > budget:
                raise ResourceError(f"isomorphism search exceeded budget of {budget} nodes")
            if not consistent(a, b):
                continue
            fwd[a] = b
            used.add(b)
            if oa != a:
                if not consistent(oa, ob):
                    del fwd[a]
                    used.discard(b)
                    continue
                fwd[oa] = ob
                used.add(ob)
            if extend(k + 1):
                return True
            del fwd[a]
            used.discard(b)
            if oa != a:
                del fwd[oa]
                used.discard(ob)
        return False

    if extend(0):
        mapping = dict(sorted(fwd.items()))
        return IsoResult(True, mapping)
    return IsoResult(False, reason="exhaustive search found no ortho-isomorphism")


def brute_force_isomorphic(l1: Lattice, l2: Lattice) -> bool:
    """Try every bijection fixing bottom and top; only for small lattices."""
    if l1.size != l2.size:
        return False
    inner1 = [a for a in range(l1.size) if a not in (l1.bottom, l1.top)]
    inner2 = [b for b in range(l2.size) if b not in (l2.bottom, l2.top)]
    for perm in permutations(inner2):
        mapping = dict(zip(inner1, perm))
        mapping[l1.bottom] = l2.bottom
        mapping[l1.top] = l2.top
        if is_isomorphism(l1, l2, mapping):
            return True
    return False


def harness_mapping(recon, bsa_poset, abstract) -> list[int]:
    """Map each reconstructed element to the lattice element it should stand for.

    Uses the hidden ``abstract.origin`` link and lattice-side annotations, so
    it is for verification only.  Raises ``ValueError`` when a cell mixes
    leading elements.
    """
    l = bsa_poset.lattice
    truth = bsa_poset.truth
    origin = abstract.origin
    if origin is None or truth is None:
        raise ValueError("harness mapping needs an annotated poset and the anonymization origin")
    out = []
    for e in recon.elements:
        if e.kind == "zero":
            out.append(l.bottom)
        elif e.kind == "one":
            out.append(l.top)
        else:
            blocks = bsa_poset.nodes[origin[e.owner]].blocks
            if e.kind == "apair":
                out.append(blocks[e.index - 1])
            elif e.rule == 2:
                atom = next(b for b in blocks if l.is_atom(b))
                coatom = next(b for b in blocks if b != atom)
                out.append(atom if e.index == 1 else coatom)
            else:
                leads = {truth[origin[m]].leading for m in e.members}
                if len(leads) != 1 or None in leads:
                    raise ValueError(f"cell {e.label} mixes leading elements {leads}")
                out.append(leads.pop())
    return out


@dataclass
class RoundtripReport:
    name: str
    lattice_size: int
    seed: int
    nodes: int = 0
    result_size: int | None = None
    cases: dict = field(default_factory=dict)
    verdict: str = "not-run"
    error: str | None = None
    seconds: float = 0.0

    stage: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "isomorphic"

    @property
    def outcome(self) -> str:
        """The verdict, followed by the failure reason when there is one."""
        return f"{self.verdict}: {self.error}" if self.error else self.verdict

    def __str__(self):
        cases = ",".join(f"{k}={v}" for k, v in self.cases.items()) or "-"
        return (
            f"{self.name}: |L|={self.lattice_size} nodes={self.nodes} |C(L)|={self.result_size} "
            f"cases={cases} seed={self.seed} {self.outcome}"
        )


def check_reconstruction(l: Lattice, seed: int = 0, gap_rule: bool = True, name: str = "lattice", bsa_poset=None) -> RoundtripReport:
    """Enumerate, anonymize, reconstruct, and compare with the original."""
    from .bsa import anonymize, enumerate_bsas
    from .reconstruct import reconstruct

    t0 = time.perf_counter()
    report = RoundtripReport(name, l.size, seed)
    try:
        poset = bsa_poset if bsa_poset is not None else enumerate_bsas(l, annotate=False)
        report.nodes = poset.size
        abstract = anonymize(poset, seed)
        recon = reconstruct(abstract, gap_rule=gap_rule)
        report.result_size = recon.lattice.size
        report.cases = recon.case_histogram
        result = are_isomorphic(l, recon.lattice)
        report.verdict = result.verdict
        if not result:
            report.error = result.reason
    except ReconstructionError as exc:
        report.verdict = "reconstruction failure"
        report.stage = exc.stage
        report.error = f"{exc.reason} (stage {exc.stage})"
    except ResourceError as exc:
        report.verdict = "resource error"
        report.error = str(exc)
    except OMLError as exc:
        report.verdict = "error"
        report.error = str(exc)
    report.seconds = time.perf_counter() - t0
    return report
