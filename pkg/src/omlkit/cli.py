"""omlkit command line.

Exit status: 0 when every check passes, 1 when a stage fails or a verdict is
negative, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import builders
from .bsa import AbstractPoset, anonymize, bsa_stats, enumerate_bsas
from .corpus import load_corpus
from .errors import OMLError, ReconstructionError
from .formats import parse_greechie, parse_lattice, serialize_lattice
from .iso import check_reconstruction
from .lattice import verify
from .reconstruct import reconstruct

FAMILIES = ("boolean", "mo", "bowtie", "chain", "greechie", "product", "hsum")


class UsageError(Exception):
    pass


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read_lattice(path: str, check: bool = True):
    return parse_lattice(Path(path).read_text(encoding="utf-8"), check=check)


def cmd_build(args) -> int:
    fam = args.family
    if fam in ("boolean", "mo") and args.n is None:
        raise UsageError(f"--family {fam} needs --n")
    if fam == "boolean":
        l = builders.boolean_algebra(args.n)
    elif fam == "mo":
        l = builders.mo(args.n)
    elif fam == "chain":
        l = builders.greechie_chain(args.n or 3)
    elif fam == "bowtie":
        l = builders.bowtie()
    elif fam == "greechie":
        if not args.gd:
            raise UsageError("--family greechie needs --gd FILE")
        l = builders.from_greechie(parse_greechie(Path(args.gd).read_text(encoding="utf-8")))
    else:
        if not args.parts or len(args.parts) < 2:
            raise UsageError(f"--family {fam} needs --parts SPEC SPEC ...")
        parts = [builders.family(p) for p in args.parts]
        if fam == "hsum":
            l = builders.horizontal_sum(*parts)
        else:
            l = parts[0]
            for p in parts[1:]:
                l = builders.direct_product(l, p)
    _write(serialize_lattice(l), args.output)
    return 0


def cmd_verify(args) -> int:
    l = _read_lattice(args.file, check=False)
    report = verify(l)
    print(f"size {l.size}  atoms {len(l.atoms())}")
    print(report)
    return 0 if report.ok else 1


def cmd_bsas(args) -> int:
    l = _read_lattice(args.file)
    poset = enumerate_bsas(l, annotate=False)
    if args.anonymize is not None:
        text = anonymize(poset, args.anonymize).to_text()
    else:
        text = poset.to_text()
    _write(text, args.output)
    if args.output not in (None, "-") or args.stats:
        stats = bsa_stats(poset)
        dims = " ".join(f"{d}:{c}" for d, c in stats["by_dimension"].items())
        print(f"nodes {stats['nodes']}  covers {stats['covers']}  maximal {stats['maximal']}  by-dimension {dims}",
              file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return 0


def cmd_reconstruct(args) -> int:
    poset = AbstractPoset.from_text(Path(args.file).read_text(encoding="utf-8"))
    recon = reconstruct(poset, gap_rule=not args.no_gap_rule)
    _write(serialize_lattice(recon.lattice), args.output)
    report = recon.report()
    if args.report:
        Path(args.report).write_text(report, encoding="utf-8")
    elif args.output not in (None, "-"):
        sys.stdout.write(report)
    return 0


def cmd_roundtrip(args) -> int:
    l = _read_lattice(args.file)
    poset = enumerate_bsas(l, annotate=False)
    ok = True
    for seed in args.seed or [0]:
        r = check_reconstruction(l, seed, gap_rule=not args.no_gap_rule, name=Path(args.file).name, bsa_poset=poset)
        if args.verbose:
            print(r)
        else:
            print(r.outcome)
        ok &= r.ok
    return 0 if ok else 1


def _run_entry(job):
    entry, seeds, gap_rule = job
    t0 = time.perf_counter()
    try:
        l = entry.build()
        poset = enumerate_bsas(l, annotate=False)
    except OMLError as exc:
        return entry.name, None, None, {}, f"build failed: {exc}", time.perf_counter() - t0, ""
    verdicts = set()
    cases = {}
    lines = []
    for seed in seeds:
        r = check_reconstruction(l, seed, gap_rule=gap_rule, name=entry.name, bsa_poset=poset)
        verdicts.add(r.outcome)
        cases = cases or r.cases
        lines.append(str(r) + "\n")
    verdict = verdicts.pop() if len(verdicts) == 1 else "inconsistent: " + "; ".join(sorted(verdicts))
    return entry.name, l.size, poset.size, cases, verdict, time.perf_counter() - t0, "".join(lines)


def _file_stem(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9.+-]+", "_", name).strip("_")


def cmd_corpus(args) -> int:
    spec = load_corpus(args.spec)
    jobs = [(e, spec.seeds, not args.no_gap_rule) for e in spec.entries]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_run_entry, jobs))
    else:
        rows = [_run_entry(j) for j in jobs]
    print(f"{'lattice':<16} {'|L|':>5} {'nodes':>6}  {'cases':<16} {'seconds':>8}  verdict ({len(spec.seeds)} seeds)")
    ok = True
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    for name, size, nodes, cases, verdict, secs, detail in rows:
        if args.out_dir:
            (Path(args.out_dir) / f"{_file_stem(name)}.txt").write_text(detail or verdict + "\n", encoding="utf-8")
        case_text = ",".join(f"{k}={v}" for k, v in cases.items()) or "-"
        print(f"{name:<16} {size if size is not None else '-':>5} {nodes if nodes is not None else '-':>6}  "
              f"{case_text:<16} {secs:>8.3f}  {verdict}")
        ok &= verdict == "isomorphic"
    print(f"{sum(r[4] == 'isomorphic' for r in rows)}/{len(rows)} lattices isomorphic")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omlkit", description="Reconstruct orthomodular lattices from their subalgebra posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a lattice and write it as .oml")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, help="atom count (boolean), pair count (mo) or block count (chain)")
    p.add_argument("--gd", help="Greechie diagram file for --family greechie")
    p.add_argument("--parts", nargs="+", help="family specs such as boolean:2 mo:2 for product/hsum")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check the OML axioms of an .oml file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bsas", help="enumerate Boolean subalgebras and write the .poset")
    p.add_argument("file")
    p.add_argument("--anonymize", type=int, metavar="SEED", help="shuffle node ids and drop dimensions")
    p.add_argument("--stats", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bsas)

    p = sub.add_parser("reconstruct", help="rebuild a lattice from a .poset file")
    p.add_argument("file")
    p.add_argument("--no-gap-rule", action="store_true")
    p.add_argument("--report", help="write the stage report here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("roundtrip", help="enumerate, anonymize, reconstruct and compare")
    p.add_argument("file")
    p.add_argument("--seed", type=int, action="append", help="repeatable; default 0")
    p.add_argument("--no-gap-rule", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("corpus", help="roundtrip every lattice of a .corpus file")
    p.add_argument("spec", nargs="?", help="corpus file (default: the packaged corpus)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", help="write one per-seed report file per lattice here")
    p.add_argument("--no-gap-rule", action="store_true")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"omlkit {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ReconstructionError as exc:
        print(f"reconstruction failure in stage {exc.stage}: {exc.reason}", file=sys.stderr)
        return 1
    except (OMLError, OSError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
