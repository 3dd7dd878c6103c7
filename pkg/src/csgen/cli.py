"""Command-line interface: ``csgen project|generate|validate|compare|report``."""
from __future__ import annotations

import argparse
import sys

from .analysis import MODELS, REPORT_HEADER, compare, report_row
from .config import ENV_VAR, ConfigError, load_config
from .core import (PairFormatError, TreeNode, check_congruence, parse_pair_file, serialize_pair,
                   skeleton_of)
from .ec import explain, generate_ec0, generate_ec1, segmentations
from .fixtures import corpus_files, load_pair
from .ml import generate_ml0, generate_ml1, generate_ml2
from .projection import prepare

EXIT_REJECT = 1
EXIT_USAGE = 2


def _generate(pair, model, matrix, config):
    if model == "ec0":
        return generate_ec0(pair)
    if model == "ec1":
        return generate_ec1(pair, config)
    if matrix is None:
        matrix = config.matrix_ml0 if model == "ml0" else config.matrix_nested
    gen = {"ml0": generate_ml0, "ml1": generate_ml1, "ml2": generate_ml2}[model]
    return gen(pair, matrix, config)


def _dump(node: TreeNode, depth: int = 0, out=None):
    out = [] if out is None else out
    pad = "  " * depth
    if node.is_preterminal:
        out.append(f"{pad}({node.label} {' '.join(node.tokens())})")
    else:
        out.append(f"{pad}({node.label}")
        for c in node.children:
            _dump(c, depth + 1, out)
        out[-1] += ")"
    return out


def cmd_project(args, config):
    pair = load_pair(args.pair)
    if args.dump_trees:
        for title, tree in (("TREE1", pair.tree1), ("TREE2", pair.tree2)):
            print(f"{title}:")
            print("\n".join(_dump(tree)))
    else:
        sys.stdout.write(serialize_pair(pair))
    report = check_congruence(pair)
    for v in report.violations + report.rule_conflicts:
        print(f"warning: {v}", file=sys.stderr)
    return 0


def cmd_generate(args, config):
    pair = load_pair(args.pair)
    for s in sorted({s.text for s in _generate(pair, args.model, args.matrix, config)}):
        print(s)
    return 0


def _validate_ml(pair, model, matrix, config, sentence):
    words = sentence.split()
    sk = skeleton_of(pair)
    if next(segmentations(sk, words), None) is None:
        return "production rule 1", "words cannot be read as one unit per slot"
    texts = {s.text for s in _generate(pair, model, matrix, config)}
    if " ".join(words) in texts:
        return None
    if model == "ml2" and " ".join(words) in {s.text for s in _generate(pair, "ml1", matrix, config)}:
        return "production rule 2", "monolingual fragment out of order"
    return "not derivable", f"no switch-site set yields this sentence under {model.upper()}"


def cmd_validate(args, config):
    pair = load_pair(args.pair)
    if args.model in ("ec0", "ec1"):
        sub = frozenset(config.substitutable) if args.model == "ec1" else frozenset()
        rejection = explain(pair, args.sentence, sub)
        outcome = None if rejection is None else (rejection.stage, rejection.detail)
    else:
        outcome = _validate_ml(pair, args.model, args.matrix, config, args.sentence)
    if outcome is None:
        print("accept")
        return 0
    stage, detail = outcome
    print(f"reject: {stage}" + (f" ({detail})" if detail else ""))
    return EXIT_REJECT


def cmd_compare(args, config):
    names = [m.strip().lower() for m in args.models.split(",")]
    if len(names) != 2 or any(m not in MODELS for m in names):
        raise UsageError(f"--models expects two of {','.join(MODELS)}, got {args.models!r}")
    pair = load_pair(args.pair)
    a, b = (_generate(pair, m, args.matrix, config) for m in names)
    c = compare(a, b)
    na, nb = (m.upper() for m in names)
    print(f"{na}\t{len({s.text for s in a})}")
    print(f"{nb}\t{len({s.text for s in b})}")
    print(f"{na}&{nb}\t{len(c.common)}")
    print(f"{na}-{nb}\t{len(c.only_a)}")
    for s in sorted(c.only_a):
        print(f"  {s}")
    print(f"{nb}-{na}\t{len(c.only_b)}")
    for s in sorted(c.only_b):
        print(f"  {s}")
    return 0


def cmd_report(args, config):
    sys.stdout.write(REPORT_HEADER)
    for name, text in corpus_files(args.corpus):
        pair = prepare(parse_pair_file(text, name))
        print(report_row(pair, config).row())
    return 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csgen", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config", help=f"model config file (default: ${ENV_VAR} or bundled)")
        return p

    p = add("project", cmd_project, "project TREE1 onto the TREE2 sentence")
    p.add_argument("--pair", required=True)
    p.add_argument("--dump-trees", action="store_true", help="print both trees indented")

    model_choices = list(MODELS)
    matrix_choices = ["l1", "l2", "both"]

    p = add("generate", cmd_generate, "print all sentences a model generates")
    p.add_argument("--pair", required=True)
    p.add_argument("--model", required=True, choices=model_choices)
    p.add_argument("--matrix", choices=matrix_choices)

    p = add("validate", cmd_validate, "accept or reject one sentence")
    p.add_argument("--pair", required=True)
    p.add_argument("--model", required=True, choices=model_choices)
    p.add_argument("--matrix", choices=matrix_choices)
    p.add_argument("--sentence", required=True)

    p = add("compare", cmd_compare, "set differences between two models")
    p.add_argument("--pair", required=True)
    p.add_argument("--models", required=True, help="two models, e.g. ml2,ec1")
    p.add_argument("--matrix", choices=matrix_choices)

    p = add("report", cmd_report, "one count row per pair file")
    p.add_argument("--corpus", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, PairFormatError, ConfigError, UnicodeDecodeError) as exc:
        print(f"csgen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
