"""Command line front end.

Exit codes: 0 success / zero-sum present, 1 absent or a violated claim,
2 usage or parse error, 3 incomplete search.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from . import _kernels
from .algebra import ModuleSpec
from .cache import CACHE_ENV, CertificateCache
from .checker import CONSECUTIVE, ANY_NONEMPTY, FULL_SEQUENCE, exact_length, find_subsequence
from .errors import SearchIncomplete, WZSError
from .search import ConstantKind, compute_constant
from .suite import SuiteConfig, report_json, report_text, run_suite, scan_conjectures
from .weights import WeightConfig, parse_weight_set

EXIT_OK, EXIT_ABSENT, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2, 3

log = logging.getLogger("wzsconst")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def parse_sequence(tokens: list[str], module: ModuleSpec):
    """Terms separated by commas or whitespace; coordinates joined by ':'."""
    parts = [p for tok in tokens for p in tok.replace(",", " ").split()]
    seq = []
    for pos, p in enumerate(parts, start=1):
        try:
            coords = [int(c) for c in p.split(":")]
        except ValueError:
            raise UsageError(f"term {pos} ({p!r}): not an integer tuple") from None
        if len(coords) != module.rank:
            raise UsageError(f"term {pos} ({p!r}): expected {module.rank} coordinate(s)")
        seq.append(module.element(coords))
    if not seq:
        raise UsageError("empty sequence")
    return tuple(seq)


def parse_moduli(text: str) -> list[int]:
    """``"3..8"``, ``"3,5"`` or mixtures like ``"2..4,8"``; empty gives []."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _weights(args, modulus: int) -> WeightConfig:
    try:
        a = parse_weight_set(args.a, modulus)
        b = None if args.b is None else parse_weight_set(args.b, modulus)
        return WeightConfig(modulus, a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cache(args):
    if getattr(args, "no_cache", False):
        return None
    return CertificateCache(args.cache_dir) if args.cache_dir else CertificateCache()


def _fmt_elem(x) -> str:
    return str(x[0]) if len(x) == 1 else "(" + ",".join(map(str, x)) + ")"


def _fmt_seq(seq) -> str:
    return "(" + ", ".join(_fmt_elem(x) for x in seq) + ")"


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    module = ModuleSpec(args.mod, args.rank)
    cfg = _weights(args, args.mod)
    seq = parse_sequence(args.sequence, module)
    if args.exact_len is not None:
        constraint = exact_length(args.exact_len)
    elif args.consecutive:
        constraint = CONSECUTIVE
    elif args.full:
        constraint = FULL_SEQUENCE
    else:
        constraint = ANY_NONEMPTY
    w = find_subsequence(module, seq, cfg, constraint)
    if args.json:
        print(json.dumps({"present": w is not None, "witness": None if w is None else w.to_json()}))
    elif w is None:
        print("absent")
    else:
        print("present")
        print("indices:", " ".join(map(str, w.indices)))
        print("terms:  ", _fmt_seq(seq[i] for i in w.indices))
        print("a:      ", " ".join(map(str, w.a_weights)))
        if w.b_weights is not None:
            print("b:      ", " ".join(map(str, w.b_weights)))
    return EXIT_OK if w is not None else EXIT_ABSENT


def cmd_compute(args) -> int:
    module = ModuleSpec(args.mod, args.rank)
    cfg = _weights(args, args.mod)
    try:
        cert = compute_constant(
            cfg, module, ConstantKind(args.kind), cap=args.cap, symmetry=not args.no_symmetry,
            threads=args.threads, node_limit=args.node_limit,
            cache=None if args.cap is not None else _cache(args),
        )
        code = EXIT_OK
    except SearchIncomplete as exc:
        cert = exc.certificate
        code = EXIT_INCOMPLETE
        print(f"incomplete: {exc}", file=sys.stderr)
    if args.json:
        print(json.dumps(cert.to_json(), indent=1))
        return code
    bound = "" if cert.exhaustive else ">="
    print(f"{cert.kind.value}({module}, {cfg.label()}) = {bound}{cert.value}")
    print(f"extremal: {_fmt_seq(cert.extremal)}")
    print(f"nodes explored: {cert.nodes_explored}")
    print(f"symmetries: {', '.join(cert.symmetries_used) or 'none'}")
    return code


def _load_config(path) -> SuiteConfig:
    if path is None:
        return SuiteConfig()
    text = Path(path).read_text()
    try:
        if str(path).endswith((".yaml", ".yml")):
            import yaml

            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
        return SuiteConfig.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad config {path}: {exc}") from None


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    if args.threads is not None:
        cfg.threads = args.threads
    if args.budget is not None:
        cfg.budget = args.budget
    rows = run_suite(cfg)
    conj = scan_conjectures(cfg.conjecture_moduli, cfg) if args.conjectures else []
    stamp = datetime.now(timezone.utc).isoformat()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report_json(rows, cfg, conj, timestamp=stamp))
    text = report_text(rows, conj)
    (out / "report.txt").write_text(text)
    if not args.quiet:
        sys.stdout.write(text)
    skipped = sum(r.status == "skipped" for r in rows)
    if skipped:
        log.warning("%d claim rows skipped", skipped)
    violated = [r for r in rows if r.status == "violated"]
    for r in violated:
        print(f"VIOLATED {r.claim_id} {r.parameters}: {r.lhs} {r.relation} {r.rhs}", file=sys.stderr)
    return EXIT_ABSENT if violated else EXIT_OK


def cmd_table(args) -> int:
    kinds = [ConstantKind(k.strip()) for k in args.kinds.split(",") if k.strip()]
    mods = parse_moduli(args.mods)
    cache = _cache(args)
    records = []
    for m in mods:
        module = ModuleSpec(m, args.rank)
        cfg = _weights(args, m)
        for kind in kinds:
            try:
                cert = compute_constant(cfg, module, kind, threads=args.threads,
                                        node_limit=args.node_limit, cache=cache)
                value = cert.value
            except SearchIncomplete as exc:
                value = f">={exc.certificate.value}"
            records.append({"modulus": m, "kind": kind.value, "value": value})
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["modulus", "kind", "value"], lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        sys.stdout.write(buf.getvalue())
    elif args.format == "json":
        print(json.dumps(records, indent=1))
    else:
        header = ["modulus"] + [k.value for k in kinds]
        lines = ["  ".join(f"{h:>7}" for h in header)]
        for m in mods:
            vals = [str(r["value"]) for r in records if r["modulus"] == m]
            lines.append("  ".join(f"{v:>7}" for v in [str(m)] + vals))
        print("\n".join(lines))
    return EXIT_OK


def cmd_extract(args) -> int:
    from . import proofs

    module = ModuleSpec(args.mod, args.rank)
    seq = parse_sequence(args.sequence, module)
    if args.method == "even":
        w = proofs.extract_even_length(module, seq, args.target or module.cardinality)
    elif args.method == "z2":
        w = proofs.extract_z2(module, seq)
    else:
        w = proofs.pigeonhole_witness(module, seq)
    if args.json:
        print(json.dumps(w.to_json()))
    else:
        print("indices:", " ".join(map(str, w.indices)))
        print("terms:  ", _fmt_seq(seq[i] for i in w.indices))
        print("a:      ", " ".join(map(str, w.a_weights)))
        if w.b_weights is not None:
            print("b:      ", " ".join(map(str, w.b_weights)))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wzs", description="Weighted zero-sum constants over Z_m^r.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_kernels.backend()})")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def weights(sp, mod_required=True):
        if mod_required:
            sp.add_argument("--mod", type=int, required=True, help="modulus m >= 2")
        sp.add_argument("--rank", type=int, default=1, help="rank r of Z_m^r")
        sp.add_argument("--a", default="+-1", help='A-set, e.g. "+-1" or "1,3"')
        sp.add_argument("--b", default=None, help="B-set; omit for the classical A-weighted case")

    def searching(sp):
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--node-limit", type=int, default=-1)
        sp.add_argument("--cache-dir", default=None, help=f"overrides ${CACHE_ENV}")
        sp.add_argument("--no-cache", action="store_true")

    sp = sub.add_parser("check", help="find a weighted zero-sum subsequence")
    weights(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exact-len", type=int, default=None)
    g.add_argument("--consecutive", action="store_true")
    g.add_argument("--full", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("sequence", nargs="+")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("compute", help="compute D, C or E exactly")
    sp.add_argument("kind", choices=["D", "C", "E"])
    weights(sp)
    searching(sp)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--no-symmetry", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("verify", help="run the theorem suite")
    sp.add_argument("--config", default=None, help="JSON or YAML suite config")
    sp.add_argument("--out", default="wzs-report")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None, help="node budget per search")
    sp.add_argument("--conjectures", action="store_true", help="append conjecture evidence rows")
    sp.add_argument("--quiet", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("table", help="tabulate constants over moduli")
    sp.add_argument("kinds", help='e.g. "D" or "D,E"')
    weights(sp, mod_required=False)
    searching(sp)
    sp.add_argument("--mods", required=True, help='e.g. "3..8" or "3,5"')
    sp.add_argument("--format", choices=["csv", "json", "text"], default="text")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("extract", help="run a constructive extractor")
    sp.add_argument("method", choices=["even", "z2", "pigeonhole"])
    sp.add_argument("--mod", type=int, required=True)
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--target", type=int, default=None, help="even target length (default |M|)")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("sequence", nargs="+")
    sp.set_defaults(func=cmd_extract)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, WZSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
