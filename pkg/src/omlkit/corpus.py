"""Batch corpus specifications (.corpus files).

One entry per line; ``#`` starts a comment::

    seeds 0-9                  # or an explicit list: seeds 0 3 7
    boolean 3
    mo 2
    bowtie
    chain 3
    product boolean:2 mo:2
    hsum boolean:3 boolean:3
    greechie diagrams/bowtie.gd
    file lattices/b3.oml

Relative paths are resolved against the directory of the corpus file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .builders import direct_product, family, from_greechie, horizontal_sum
from .errors import ParseError
from .lattice import Lattice

DEFAULT_SEEDS = tuple(range(10))


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    args: tuple[str, ...]
    base: str = "."

    def build(self) -> Lattice:
        if self.kind in ("boolean", "mo", "chain"):
            return family(f"{self.kind}:{self.args[0]}" if self.args else self.kind)
        if self.kind == "bowtie":
            return family("bowtie")
        if self.kind == "product":
            parts = [family(a) for a in self.args]
            out = parts[0]
            for p in parts[1:]:
                out = direct_product(out, p)
            return out
        if self.kind == "hsum":
            return horizontal_sum(*[family(a) for a in self.args])
        from .formats import parse_greechie, parse_lattice

        path = Path(self.base) / self.args[0]
        text = path.read_text(encoding="utf-8")
        if self.kind == "greechie":
            return from_greechie(parse_greechie(text))
        return parse_lattice(text)


@dataclass
class CorpusSpec:
    entries: list[CorpusEntry] = field(default_factory=list)
    seeds: tuple[int, ...] = DEFAULT_SEEDS


_ARITY = {"boolean": (1, 1), "mo": (1, 1), "bowtie": (0, 0), "chain": (0, 1),
          "product": (2, None), "hsum": (2, None), "greechie": (1, 1), "file": (1, 1)}


def _entry_name(kind, args):
    if kind == "boolean":
        return f"2^{args[0]}"
    if kind == "mo":
        return f"MO({args[0]})"
    if kind == "chain":
        return f"chain({args[0] if args else 3})"
    if kind in ("product", "hsum"):
        sep = "x" if kind == "product" else "+"
        return sep.join(_entry_name(*(a.split(":", 1)[0], a.split(":", 1)[1:])) for a in args)
    if kind in ("greechie", "file"):
        return Path(args[0]).name
    return kind


def parse_corpus(text: str, base: str = ".") -> CorpusSpec:
    spec = CorpusSpec()
    for no, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        kind, args = toks[0], tuple(toks[1:])
        if kind == "seeds":
            seeds = []
            for a in args:
                lo, dash, hi = a.partition("-")
                try:
                    seeds.extend(range(int(lo), int(hi) + 1) if dash else [int(lo)])
                except ValueError:
                    raise ParseError(f"bad seed {a!r}", no) from None
            if not seeds:
                raise ParseError("'seeds' needs at least one seed", no)
            spec.seeds = tuple(seeds)
            continue
        if kind not in _ARITY:
            raise ParseError(f"unknown corpus entry {kind!r}", no)
        lo, hi = _ARITY[kind]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ParseError(f"wrong number of arguments for {kind!r}", no)
        spec.entries.append(CorpusEntry(_entry_name(kind, args), kind, args, base))
    return spec


def load_corpus(path: str | None = None) -> CorpusSpec:
    """Read a corpus file, or the packaged default corpus when ``path`` is None."""
    if path is None:
        text = resources.files("omlkit").joinpath("data/default.corpus").read_text(encoding="utf-8")
        return parse_corpus(text, str(resources.files("omlkit").joinpath("data")))
    p = Path(path)
    return parse_corpus(p.read_text(encoding="utf-8"), str(p.parent))
