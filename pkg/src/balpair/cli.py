"""Command-line interface.

Subcommands: info (spectral data), bpa (one cell), verdict (full analysis),
batch (verdict over a directory). Exit codes: 0 ok, 1 usage/parse error,
2 at least one budget-exceeded cell, 3 undecidable numerics, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import Budgets, pair_graph
from .equivalence import LengthSpec, Relation, letter_equiv_classes
from .errors import (BalpairError, EmptyConfig, InternalInvariantError,
                     RuleSyntaxError, Undecidable)
from .linalg import (char_poly, classify_spectrum, integer_form,
                     left_pf_eigenvector, perron_data)
from .report import render_dot, render_json
from .substitution import parse_substitution
from .verdict import AnalysisConfig, RelationSpec, analyze

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_UNDECIDABLE = 3
EXIT_INTERNAL = 4


def _bool_flag(text):
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="balpair",
        description="Balanced pair analysis of primitive substitutions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--json", type=Path, default=None,
                       help="write the JSON report here")
        p.add_argument("--precision", type=int, default=1024,
                       help="max bits for numeric eigenvalue enclosures")

    def add_run_flags(p):
        p.add_argument("--prefix", default=None,
                       help="explicit fixed-word prefix w")
        p.add_argument("--prefix-auto", type=int, default=8, metavar="MAXLEN",
                       help="collect admissible prefixes up to this length")
        p.add_argument("--require-return", type=_bool_flag, default=True,
                       metavar="BOOL",
                       help="keep only prefixes with u_{m+1} = u_0")
        p.add_argument("--length", action="append", default=None,
                       metavar="SPEC",
                       help="length vector: ones | lambda | a,b,c (repeatable)")
        p.add_argument("--mode", choices=("plain", "letters", "general"),
                       default=None,
                       help="balance notion (default: general over --length, "
                            "or over lambda and ones)")
        p.add_argument("--max-iter", type=int, default=None)
        p.add_argument("--max-pairs", type=int, default=None)
        p.add_argument("--max-word-len", type=int, default=None)
        p.add_argument("--dot", type=Path, default=None,
                       help="write the pair graph of the first terminated "
                            "cell as DOT")
        p.add_argument("--density-levels", type=int, default=None,
                       metavar="L", help="also compute densities for 0..L")

    p_info = sub.add_parser("info", help="matrix, spectral and letter-class data")
    p_info.add_argument("input", type=Path)
    add_common(p_info)

    p_bpa = sub.add_parser("bpa", help="run a single (prefix, relation) cell")
    p_bpa.add_argument("input", type=Path)
    add_common(p_bpa)
    add_run_flags(p_bpa)

    p_verdict = sub.add_parser("verdict", help="full analysis and verdicts")
    p_verdict.add_argument("input", type=Path)
    add_common(p_verdict)
    add_run_flags(p_verdict)

    p_batch = sub.add_parser("batch", help="verdicts for every .sub in a directory")
    p_batch.add_argument("input", type=Path, help="directory of .sub files")
    p_batch.add_argument("--out-dir", type=Path, default=None,
                         help="write one JSON report per input file here")
    add_common(p_batch)
    add_run_flags(p_batch)

    return parser


def _relation_specs(args):
    if args.mode == "plain":
        return [RelationSpec.plain()]
    if args.mode == "letters":
        return [RelationSpec.letters()]
    lengths = args.length
    if lengths is None:
        lengths = ["lambda", "ones"]
    return [RelationSpec.general(LengthSpec.parse(text)) for text in lengths]


def _budgets(args):
    budgets = Budgets()
    if args.max_iter is not None:
        budgets.max_iterations = args.max_iter
    if args.max_pairs is not None:
        budgets.max_pairs = args.max_pairs
    if args.max_word_len is not None:
        budgets.max_word_length = args.max_word_len
    return budgets


def _config(args, subst):
    prefixes = []
    if args.prefix is not None:
        prefixes = [subst.alphabet.word_from_text(args.prefix)]
    return AnalysisConfig(
        prefixes=prefixes,
        auto_max_len=args.prefix_auto,
        require_return=args.require_return,
        relations=_relation_specs(args),
        budgets=_budgets(args),
        density_levels=args.density_levels,
        precision_bits=args.precision,
    )


def _load(path: Path):
    return parse_substitution(path.read_text(encoding="utf-8"))


def _exit_code_for(report):
    if report.undecidable:
        return EXIT_UNDECIDABLE
    for cell in report.cells:
        if cell.error and "Undecidable" in cell.error:
            return EXIT_UNDECIDABLE
    for cell in report.cells:
        if cell.outcome is not None and not cell.outcome.terminated:
            return EXIT_BUDGET
    return EXIT_OK


def _print_cells(report, out):
    alphabet = report.subst.alphabet
    for cell in report.cells:
        prefix = alphabet.render(cell.prefix)
        if cell.error:
            print(f"  w={prefix} {cell.relation_label}: ERROR {cell.error}",
                  file=out)
            continue
        outcome = cell.outcome
        if outcome.terminated:
            status = (f"terminated: {len(outcome.pairs)} pairs by iteration "
                      f"{outcome.closure_iteration}")
        else:
            status = (f"budget exceeded ({outcome.which}) after "
                      f"{outcome.iterations_done} iterations, "
                      f"{outcome.pair_count} pairs")
        v = cell.verdict
        verdict_text = v.kind + (f" ({v.reason})" if v.reason else "")
        print(f"  w={prefix} {cell.relation_label}: {status} -> {verdict_text}",
              file=out)


def _write_outputs(report, args, out):
    if args.json is not None:
        args.json.write_bytes(render_json(report))
        print(f"wrote {args.json}", file=out)
    dot_path = getattr(args, "dot", None)
    if dot_path is not None:
        target = None
        for cell in report.cells:
            if cell.outcome is not None and cell.outcome.terminated:
                target = cell
                break
        if target is None:
            print("no terminated cell; DOT graph not written", file=out)
        else:
            rel = _relation_for_cell(report, target)
            graph = pair_graph(report.subst, rel, target.outcome.pairs)
            dot_path.write_text(render_dot(graph, report.subst.alphabet),
                                encoding="utf-8")
            print(f"wrote {dot_path}", file=out)


def _relation_for_cell(report, cell):
    label = cell.relation_label
    if label == "plain":
        return Relation.plain(report.subst)
    if label == "letters":
        return Relation.letter_classes(report.subst)
    spec_text = label[len("general["):-1]
    return Relation.generalized(report.subst, LengthSpec.parse(spec_text))


def cmd_info(args, out):
    subst = _load(args.input)
    alphabet = subst.alphabet
    print(f"alphabet: {' '.join(alphabet.tokens)}", file=out)
    for i, image in enumerate(subst.rules):
        print(f"  {alphabet.tokens[i]} -> {alphabet.render(image)}", file=out)
    matrix = subst.transition_matrix()
    print("transition matrix (rows = letter counted):", file=out)
    for row in matrix:
        print("  " + " ".join(str(v) for v in row), file=out)
    cp = char_poly(matrix)
    print(f"char poly: {cp}", file=out)
    print(f"primitive: {subst.is_primitive()}", file=out)
    print(f"constant length: {subst.is_constant_length()}", file=out)
    classes = letter_equiv_classes(subst)
    rendered = ", ".join("{" + " ".join(alphabet.tokens[i] for i in cls) + "}"
                         for cls in classes)
    print(f"letter classes: {rendered}", file=out)
    if not subst.is_primitive():
        print("matrix is not primitive; spectral data skipped", file=out)
        if args.json is not None:
            _write_info_json(args.json, subst, cp, classes, None, None, None,
                             out)
        return EXIT_OK
    eigen = classify_spectrum(matrix,
                              constant_length=subst.is_constant_length(),
                              precision_bits=args.precision)
    for fac, mult in eigen.factors:
        print(f"factor: ({fac})^{mult}", file=out)
    nf = perron_data(matrix)
    print(f"perron eigenvalue: root of {nf.min_poly} ~ {nf.approx_str()}",
          file=out)
    vec = left_pf_eigenvector(matrix, nf)
    approx = ", ".join(v.decimal(8) for v in vec)
    print(f"left PF eigenvector: ({approx})", file=out)
    ints = integer_form(vec)
    if ints:
        print(f"  integer form: {ints}", file=out)
    print(f"pisot type (literal): {eigen.pisot_type_literal}", file=out)
    print(f"pisot type (allowing zero eigenvalues): "
          f"{eigen.pisot_type_allowing_zero}", file=out)
    print(f"charpoly irreducible: {eigen.charpoly_irreducible}", file=out)
    print(f"dim large / small eigenspaces: {eigen.dim_large} / "
          f"{eigen.dim_small}", file=out)
    if args.json is not None:
        _write_info_json(args.json, subst, cp, classes, eigen, nf, vec, out)
    return EXIT_OK


def _write_info_json(path, subst, cp, classes, eigen, nf, vec, out):
    import json

    alphabet = subst.alphabet
    doc = {
        "rules": {alphabet.tokens[i]: alphabet.render(img)
                  for i, img in enumerate(subst.rules)},
        "matrix": [list(row) for row in subst.transition_matrix()],
        "char_poly": [str(c) for c in cp.coeffs],
        "primitive": subst.is_primitive(),
        "constant_length": subst.is_constant_length(),
        "letter_classes": [[alphabet.tokens[i] for i in cls]
                           for cls in classes],
    }
    if eigen is not None:
        doc["factors"] = [{"poly": [str(c) for c in f.coeffs],
                           "multiplicity": m} for f, m in eigen.factors]
        doc["perron"] = {"min_poly": [str(c) for c in nf.min_poly.coeffs],
                         "interval": [str(b) for b in nf.canonical_interval()],
                         "approx": nf.approx_str()}
        doc["l_lambda_approx"] = [v.decimal() for v in vec]
        ints = integer_form(vec)
        doc["l_lambda_integer"] = list(ints) if ints else None
        doc["pisot_type_literal"] = eigen.pisot_type_literal
        doc["pisot_type_allowing_zero"] = eigen.pisot_type_allowing_zero
        doc["charpoly_irreducible"] = eigen.charpoly_irreducible
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}", file=out)


def cmd_bpa(args, out):
    subst = _load(args.input)
    config = _config(args, subst)
    # one cell: first prefix, first relation
    config.relations = config.relations[:1]
    report = analyze(subst, config)
    if not config.prefixes:
        report.cells = report.cells[:1]
    _print_cells(report, out)
    _write_outputs(report, args, out)
    return _exit_code_for(report)


def cmd_verdict(args, out):
    subst = _load(args.input)
    config = _config(args, subst)
    report = analyze(subst, config)
    _print_cells(report, out)
    _write_outputs(report, args, out)
    return _exit_code_for(report)


def cmd_batch(args, out):
    directory = args.input
    if not directory.is_dir():
        print(f"not a directory: {directory}", file=sys.stderr)
        return EXIT_USAGE
    files = sorted(directory.glob("*.sub"))
    if not files:
        print(f"no .sub files in {directory}", file=sys.stderr)
        return EXIT_USAGE
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    worst = EXIT_OK
    for path in files:
        print(f"== {path.name}", file=out)
        try:
            subst = _load(path)
            config = _config(args, subst)
            report = analyze(subst, config)
        except BalpairError as exc:
            print(f"  error: {exc}", file=out)
            worst = max(worst, EXIT_USAGE)
            continue
        _print_cells(report, out)
        if args.out_dir is not None:
            target = args.out_dir / (path.stem + ".json")
            target.write_bytes(render_json(report))
            print(f"  wrote {target}", file=out)
        worst = max(worst, _exit_code_for(report))
    return worst


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    handler = {"info": cmd_info, "bpa": cmd_bpa,
               "verdict": cmd_verdict, "batch": cmd_batch}[args.command]
    try:
        return handler(args, out)
    except (RuleSyntaxError, EmptyConfig, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Undecidable as exc:
        print(f"undecidable numerics: {exc}", file=sys.stderr)
        return EXIT_UNDECIDABLE
    except InternalInvariantError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except BalpairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
