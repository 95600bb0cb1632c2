"""Command-line interface: ``pgsearch <command> ...``.

Exit status is 0 on success, 1 on a contract violation (bad arguments or
inconsistent data) and 2 on a malformed input file.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import textio
from .analyze import form_report, verify_pairs, zero_paf_scan
from .compress import UncompressionSchedule, uncompress, uncompress_filtered
from .equiv import PARTIAL_OPS, SymmetryGroup, filter_canonical, partial_filter
from .errors import ContractViolation, MalformedInputError
from .generate import STRATEGIES, GenerationSpec, generate
from .match import match_with_stats
from .pipeline import SearchConfig, cmd_search, census_path, default_workers, load_config
from .seqcore import check_sequence, sum_of_two_squares


def _emit(lines, out):
    """Write lines to ``out`` (a path) or stdout."""
    if out:
        textio._write_lines(out, lines)
    else:
        for line in lines:
            print(line)


def _ops(text):
    ops = frozenset(t.strip() for t in text.split(",") if t.strip())
    bad = ops - PARTIAL_OPS
    if bad:
        raise ContractViolation(f"unsupported ops {sorted(bad)}; choose from {sorted(PARTIAL_OPS)}")
    return ops


def cmd_search_cli(args):
    opts = load_config(args.config) if args.config else {}

    def pick(name, flag, conv=str):
        if flag is not None:
            return flag
        if name in opts:
            try:
                return conv(opts[name])
            except ValueError:
                raise ContractViolation(f"config: bad value for {name}: {opts[name]!r}") from None
        return None

    v = pick("v", args.length, int) or pick("length", None, int)
    if v is None:
        raise ContractViolation("search needs --length")
    schedule = pick("schedule", args.schedule)
    ops = pick("partial_filter_ops", args.partial_ops)
    resume = args.resume or opts.get("resume", "false").lower() in ("1", "true", "yes")
    cfg = SearchConfig(
        v=v,
        schedule=UncompressionSchedule.parse(schedule) if schedule else None,
        strategy=pick("strategy", args.strategy) or "hybrid",
        workers=pick("workers", args.workers, int) or default_workers(),
        output_dir=Path(pick("out", args.out) or "out"),
        resume=resume,
        partial_filter_ops=_ops(ops) if ops is not None else SearchConfig.__dataclass_fields__[
            "partial_filter_ops"].default,
        stop_after=args.stop_after,
    )
    report = cmd_search(cfg)
    for line in report.lines():
        print(line)
    if cfg.stop_after is None:
        print(census_path(cfg.output_dir, v))
    return 0


def cmd_generate(args):
    rowsums = [int(t) for t in args.rowsums.split(",")] if args.rowsums else None
    kw = dict(strategy=args.strategy, orderly_depth=args.depth)
    if rowsums is None:
        spec = GenerationSpec.all_rowsums(args.d, args.m, **kw)
    else:
        spec = GenerationSpec(args.d, args.m, frozenset(rowsums), **kw)
    seqs = list(generate(spec))
    report = f"# generated={len(seqs)} strategy={spec.strategy} d={spec.d} m={spec.m}"
    if args.out:
        textio.write_sequences(args.out, seqs)
        textio._write_lines(str(args.out) + ".report", [report])
        print(report)
    else:
        for s in seqs:
            print(textio.format_sequence(s))
        print(report, file=sys.stderr)
    return 0


def cmd_match(args):
    A = textio.read_sequences(args.a_file)
    B = textio.read_sequences(args.b_file)
    pairs, stats = match_with_stats(args.length, A, B, chunk_size=args.chunk_size)
    line = stats.report_line()
    if args.out:
        textio.write_pairs(args.out, pairs, header=[line])
        print(line)
    else:
        print(line)
        for p in pairs:
            print(textio.format_pair(p))
    return 0


def cmd_uncompress(args):
    seqs = textio.read_sequences(args.file)
    out = []
    for s in seqs:
        check_sequence(s, args.d * args.e)
        if args.length:
            out.extend(uncompress_filtered(s, args.e, args.d, args.length))
        else:
            out.extend(uncompress(s, args.e, args.d))
    lines = [f"# uncompressed={len(out)} input={len(seqs)} e={args.e} d={args.d}"]
    _emit(lines + [textio.format_sequence(s) for s in out], args.out)
    return 0


def cmd_filter(args):
    pairs = textio.read_pairs(args.file)
    if args.partial is not None:
        res = partial_filter(pairs, _ops(args.partial))
    else:
        v = len(pairs[0][0]) if pairs else 2
        res = filter_canonical(pairs, SymmetryGroup(v), workers=args.workers or 1)
    line = f"# classes={len(res)} input={len(pairs)}"
    if args.out:
        textio.write_pairs(args.out, res, header=[line])
        print(line)
    else:
        print(line)
        for p in res:
            print(textio.format_pair(p))
    return 0


def cmd_verify(args):
    pairs = textio.read_pairs(args.file)
    ok, n = verify_pairs(pairs)
    print(f"{ok}/{n} valid")
    return 0


def cmd_analyze(args):
    pairs = textio.read_pairs(args.file)
    v = len(pairs[0][0]) if pairs else int(textio.read_headers(args.file).get("v", 0))
    if not pairs:
        print(f"# no pairs in {args.file}")
        return 0
    lines = form_report(v, pairs)
    for d in args.zero_paf or ():
        found = sorted(zero_paf_scan(pairs, v, d))
        lines.append(f"# zero_paf d={d} count={len(found)}")
        lines.extend(textio.format_pair(p) for p in found)
    _emit(lines, args.out)
    return 0


def cmd_decompose(args):
    for a, b in sum_of_two_squares(args.v):
        print(f"{a} {b}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="pgsearch", description="Periodic Golay pair search tools")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="exhaustive PG(v) census")
    s.add_argument("-v", "--length", type=int)
    s.add_argument("--schedule", help="compression factors, e.g. 8,4,2,1")
    s.add_argument("--strategy", choices=STRATEGIES)
    s.add_argument("--workers", type=int, help="default: $PGSEARCH_WORKERS or CPU count")
    s.add_argument("--out", help="output directory (default ./out)")
    s.add_argument("--resume", action="store_true")
    s.add_argument("--partial-ops", help="ops for intermediate filtering, e.g. shift,swap,negate")
    s.add_argument("--config", help="key = value file; flags override it")
    s.add_argument("--stop-after", type=int, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_search_cli)

    g = sub.add_parser("generate", help="candidate sequences")
    g.add_argument("-d", type=int, required=True, help="sequence length")
    g.add_argument("-m", type=int, default=1, help="compression factor")
    g.add_argument("--rowsums", help="comma-separated target rowsums (default: all)")
    g.add_argument("--strategy", choices=STRATEGIES, default="hybrid")
    g.add_argument("--depth", type=int, help="orderly depth (default d/2)")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("match", help="pair two candidate files")
    m.add_argument("-v", "--length", type=int, required=True, help="full length v")
    m.add_argument("a_file")
    m.add_argument("b_file")
    m.add_argument("--chunk-size", type=int, help="external sort run size")
    m.add_argument("--out")
    m.set_defaults(func=cmd_match)

    u = sub.add_parser("uncompress", help="preimages of compressed sequences")
    u.add_argument("file")
    u.add_argument("-e", type=int, required=True, help="uncompression factor")
    u.add_argument("-d", type=int, default=1, help="compression factor of the result")
    u.add_argument("-v", "--length", type=int, help="apply PSD filters for this full length")
    u.add_argument("--out")
    u.set_defaults(func=cmd_uncompress)

    f = sub.add_parser("filter", help="reduce pairs up to equivalence")
    f.add_argument("file")
    f.add_argument("--partial", help="only these ops (shift,swap,reverse,negate)")
    f.add_argument("--workers", type=int)
    f.add_argument("--out")
    f.set_defaults(func=cmd_filter)

    vf = sub.add_parser("verify", help="check pairs are PG")
    vf.add_argument("file")
    vf.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="half-compression forms and zero-PAF compressions")
    a.add_argument("file")
    a.add_argument("--zero-paf", type=int, action="append", metavar="D")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    dc = sub.add_parser("decompose", help="solutions of a^2 + b^2 = 2v")
    dc.add_argument("v", type=int)
    dc.set_defaults(func=cmd_decompose)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
