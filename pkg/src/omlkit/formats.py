"""Line-based text formats: lattices (.oml), posets (.poset), Greechie diagrams (.gd).

All formats are UTF-8 with whitespace-separated tokens; ``#`` starts a
comment and line order after the header does not matter.

.oml::

    oml 1
    size N
    label i name          (optional)
    up i : j k ...        (strict upper covers of i, one line per element)
    ortho : o0 o1 ... o(N-1)
    bottom i
    top i

.poset::

    poset 1
    size N
    cover i j             (i is covered by j)
    dim i d               (optional)

.gd::

    atoms: a b c d e
    block: a b c
    block: c d e
"""

from __future__ import annotations

from .builders import GreechieDiagram
from .errors import ParseError, StructuralError
from .lattice import Lattice, require_oml, transitive_closure


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok, no, what="integer"):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok!r}", no) from None


def _header(lines, magic):
    try:
        no, toks = next(lines)
    except StopIteration:
        raise ParseError("empty input") from None
    if toks != [magic, "1"]:
        raise ParseError(f"expected header '{magic} 1', got {' '.join(toks)!r}", no)


def serialize_lattice(l: Lattice) -> str:
    out = ["oml 1", f"size {l.size}"]
    if l.labels is not None:
        for i, name in enumerate(l.labels):
            if not name or any(ch.isspace() for ch in name) or "#" in name:
                raise ValueError(f"label {name!r} of element {i} is not a single token")
            out.append(f"label {i} {name}")
    for i, cs in enumerate(l.covers()):
        out.append(" ".join([f"up {i} :"] + [str(c) for c in cs]))
    out.append(" ".join(["ortho :"] + [str(o) for o in l.ortho_map]))
    out.append(f"bottom {l.bottom}")
    out.append(f"top {l.top}")
    return "\n".join(out) + "\n"


def parse_lattice(text: str, check: bool = True) -> Lattice:
    """Parse an .oml document.

    With ``check`` (the default) the result must be an atomic orthomodular
    lattice, otherwise :class:`StructuralError` is raised.  Pass
    ``check=False`` to load ortholattices that are to be diagnosed.
    """
    lines = _lines(text)
    _header(lines, "oml")
    size = None
    labels: dict[int, str] = {}
    covers: dict[int, list[int]] = {}
    ortho = None
    ortho_line = None
    bottom = top = None

    def elem(tok, no):
        v = _int(tok, no, "element id")
        if size is None:
            raise ParseError("'size' must precede element references", no)
        if not 0 <= v < size:
            raise ParseError(f"element id {v} out of range 0..{size - 1}", no)
        return v

    for no, toks in lines:
        kw = toks[0]
        if kw == "size":
            if len(toks) != 2:
                raise ParseError("usage: size N", no)
            size = _int(toks[1], no)
            if size < 2:
                raise ParseError("size must be at least 2", no)
        elif kw == "label":
            if len(toks) != 3:
                raise ParseError("usage: label i name", no)
            labels[elem(toks[1], no)] = toks[2]
        elif kw == "up":
            if len(toks) < 3 or toks[2] != ":":
                raise ParseError("usage: up i : j k ...", no)
            i = elem(toks[1], no)
            if i in covers:
                raise ParseError(f"duplicate 'up' line for element {i}", no)
            covers[i] = [elem(t, no) for t in toks[3:]]
        elif kw == "ortho":
            if len(toks) < 2 or toks[1] != ":":
                raise ParseError("usage: ortho : o0 o1 ...", no)
            ortho = [elem(t, no) for t in toks[2:]]
            ortho_line = no
        elif kw in ("bottom", "top"):
            if len(toks) != 2:
                raise ParseError(f"usage: {kw} i", no)
            if kw == "bottom":
                bottom = elem(toks[1], no)
            else:
                top = elem(toks[1], no)
        else:
            raise ParseError(f"unknown keyword {kw!r}", no)

    if size is None:
        raise ParseError("missing 'size' line")
    if ortho is None:
        raise ParseError("missing 'ortho' line")
    if len(ortho) != size:
        raise ParseError(f"ortho lists {len(ortho)} entries, expected {size}", ortho_line)
    for i in range(size):
        if ortho[ortho[i]] != i:
            raise ParseError(f"ortho is not an involution at element {i} ({i} -> {ortho[i]} -> {ortho[ortho[i]]})", ortho_line)
    if bottom is None or top is None:
        raise ParseError("missing 'bottom' or 'top' line")
    label_list = None
    if labels:
        if len(labels) != size:
            raise ParseError(f"labels given for {len(labels)} of {size} elements")
        label_list = [labels[i] for i in range(size)]

    rows = []
    for i in range(size):
        r = 0
        for c in covers.get(i, ()):
            r |= 1 << c
        rows.append(r)
    lat = Lattice(transitive_closure(rows), ortho, label_list)
    if (lat.bottom, lat.top) != (bottom, top):
        raise StructuralError(
            f"declared bottom/top {bottom}/{top} differ from the order's {lat.bottom}/{lat.top}",
            (bottom, top),
        )
    if check:
        require_oml(lat, "parsed lattice")
    return lat


def serialize_poset(size: int, covers, dims=None) -> str:
    out = ["poset 1", f"size {size}"]
    out += [f"cover {i} {j}" for i, j in sorted(covers)]
    if dims is not None:
        out += [f"dim {i} {d}" for i, d in enumerate(dims)]
    return "\n".join(out) + "\n"


def parse_poset(text: str):
    """Parse a .poset document into ``(size, covers, dims)``; ``dims`` is None if absent."""
    lines = _lines(text)
    _header(lines, "poset")
    size = None
    covers = set()
    dims = {}
    for no, toks in lines:
        kw = toks[0]
        if kw == "size" and len(toks) == 2:
            size = _int(toks[1], no)
            if size < 1:
                raise ParseError("size must be positive", no)
        elif kw in ("cover", "dim") and len(toks) == 3:
            if size is None:
                raise ParseError("'size' must precede node references", no)
            a, b = _int(toks[1], no), _int(toks[2], no)
            if not 0 <= a < size or (kw == "cover" and not 0 <= b < size):
                raise ParseError(f"node id out of range 0..{size - 1}", no)
            if kw == "cover":
                if a == b:
                    raise ParseError(f"node {a} covers itself", no)
                covers.add((a, b))
            else:
                dims[a] = b
        else:
            raise ParseError(f"unrecognised line {' '.join(toks)!r}", no)
    if size is None:
        raise ParseError("missing 'size' line")
    dim_list = None
    if dims:
        if len(dims) != size:
            raise ParseError(f"dim given for {len(dims)} of {size} nodes")
        dim_list = [dims[i] for i in range(size)]
    return size, tuple(sorted(covers)), dim_list


def parse_greechie(text: str) -> GreechieDiagram:
    atoms = None
    blocks = []
    for no, toks in _lines(text):
        if toks[0] == "atoms:":
            if atoms is not None:
                raise ParseError("duplicate 'atoms:' line", no)
            atoms = toks[1:]
        elif toks[0] == "block:":
            blocks.append(toks[1:])
        else:
            raise ParseError(f"expected 'atoms:' or 'block:', got {toks[0]!r}", no)
    if atoms is None:
        raise ParseError("missing 'atoms:' line")
    return GreechieDiagram(atoms, blocks).validate()


def serialize_greechie(g: GreechieDiagram) -> str:
    out = ["atoms: " + " ".join(g.atoms)]
    out += ["block: " + " ".join(b) for b in g.blocks]
    return "\n".join(out) + "\n"


__all__ = [
    "parse_greechie",
    "parse_lattice",
    "parse_poset",
    "serialize_greechie",
    "serialize_lattice",
    "serialize_poset",
]
