"""Model comparison, report rows and exhaustive reference enumerators."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .config import MLConfig
from .core import AlignedPair, CSSentence, Lang, SkelNode, Skeleton, skeleton_of
from .ec import check_sequence, generate_ec_both
from .ml import (MATRICES, MLDerivation, check_well_formed, eligible, generate_ml0,
                 generate_ml1, generate_ml2)

MODELS = ("ec0", "ec1", "ml0", "ml1", "ml2")

REPORT_HEADER = (
    "# pair\tlength\tcategories\tdepth\tbranching\tEC0\tEC1\tML0(EC1)\tML1(EC1)\tML2(EC1)\n"
    "# length: words of the TREE1 sentence; categories: constituent and preterminal\n"
    "# nodes of the projected TREE1; depth: edges from root to deepest preterminal;\n"
    "# ML cells give the count and, in parentheses, the overlap with EC1.\n"
)


@dataclass(frozen=True)
class Comparison:
    common: frozenset[str]
    only_a: frozenset[str]
    only_b: frozenset[str]

    @property
    def a_subset_of_b(self) -> bool:
        return not self.only_a


def compare(a, b) -> Comparison:
    """Intersection and both differences of two generated sets, as strings."""
    ids = {s.pair_id for s in list(a) + list(b) if isinstance(s, CSSentence)}
    if len(ids) > 1:
        raise ValueError(f"sentences come from different pairs: {sorted(ids)}")
    ta = {s.text if isinstance(s, CSSentence) else s for s in a}
    tb = {s.text if isinstance(s, CSSentence) else s for s in b}
    return Comparison(frozenset(ta & tb), frozenset(ta - tb), frozenset(tb - ta))


@dataclass
class ComparisonReport:
    pair_id: str
    length: int
    categories: int
    depth: int
    branching: int
    counts: dict[str, int] = field(default_factory=dict)
    intersections: dict[str, int] = field(default_factory=dict)
    outputs: dict[str, list[CSSentence]] = field(default_factory=dict, repr=False)

    def subsumed(self, a: str, b: str) -> bool:
        return compare(self.outputs[a], self.outputs[b]).a_subset_of_b

    def cell(self, model: str) -> str:
        if model in self.intersections:
            return f"{self.counts[model]}({self.intersections[model]})"
        return str(self.counts[model])

    def row(self) -> str:
        cells = [self.pair_id, self.length, self.categories, self.depth, self.branching]
        cells += [self.cell(m) for m in MODELS]
        return "\t".join(str(c) for c in cells)


def tree_stats(pair: AlignedPair) -> tuple[int, int, int, int]:
    tree = pair.tree1
    internal = list(tree.internal_nodes())
    length = sum(len(u.surface) for u in pair.units1)
    return length, len(internal), tree.depth(), max(len(n.children) for n in internal)


def run_models(pair: AlignedPair, config: MLConfig) -> dict[str, list[CSSentence]]:
    ec0, ec1 = generate_ec_both(pair, config)
    return {
        "ec0": ec0,
        "ec1": ec1,
        "ml0": generate_ml0(pair, config.matrix_ml0, config),
        "ml1": generate_ml1(pair, config.matrix_nested, config),
        "ml2": generate_ml2(pair, config.matrix_nested, config),
    }


def report_row(pair: AlignedPair, config: MLConfig) -> ComparisonReport:
    length, cats, depth, bf = tree_stats(pair)
    outputs = run_models(pair, config)
    ec1 = outputs["ec1"]
    return ComparisonReport(
        pair.pair_id, length, cats, depth, bf,
        counts={m: len(out) for m, out in outputs.items()},
        intersections={m: len(compare(outputs[m], ec1).common) for m in ("ml0", "ml1", "ml2")},
        outputs=outputs,
    )


# ---------------------------------------------------------------- brute force

EC_SLOT_LIMIT = 10
ML_NODE_LIMIT = 12


def _ec_orders(sk: Skeleton):
    """Slot orders where every constituent forms one block, by plain search."""
    order: list[int] = []

    def ok() -> bool:
        # each constituent touched so far must be a block, and an unfinished one
        # must run to the end of the prefix
        at = {s: i for i, s in enumerate(order)}
        for node in sk.nodes:
            hit = sorted(at[s] for s in node.slots if s in at)
            if not hit:
                continue
            if hit[-1] - hit[0] + 1 != len(hit):
                return False
            if len(hit) < len(node.slots) and hit[-1] != len(order) - 1:
                return False
        return True

    def step():
        if len(order) == sk.n:
            yield tuple(order)
            return
        for s in range(sk.n):
            if s in order:
                continue
            order.append(s)
            if ok():
                yield from step()
            order.pop()

    yield from step()


def _lang_choices(sk: Skeleton, order):
    """Language assignments to ``order`` whose monolingual runs are well formed."""
    choice: list[Lang] = []

    def step(i):
        if i == len(order):
            yield tuple(zip(order, choice))
            return
        for lang in (Lang.L1, Lang.L2):
            if i and choice[-1] is lang and sk.pos[lang][order[i]] != sk.pos[lang][order[i - 1]] + 1:
                continue
            choice.append(lang)
            yield from step(i + 1)
            choice.pop()

    yield from step(0)


def _ec_brute(sk: Skeleton, substitutable) -> list[CSSentence]:
    if sk.n > EC_SLOT_LIMIT:
        raise ValueError(f"{sk.n} slots exceeds the brute-force limit of {EC_SLOT_LIMIT}")
    found = {}
    for order in _ec_orders(sk):
        for seq in _lang_choices(sk, order):
            if check_sequence(sk, seq, substitutable) is None:
                found.setdefault(sk.text(seq), seq)
    return [sk.sentence(found[t]) for t in sorted(found)]


def _render(sk: Skeleton, sites, matrix: Lang, config: MLConfig):
    """Sequence for a set of switch sites, or None if some site may not switch."""
    out = []

    def visit(node: SkelNode, lang: Lang) -> bool:
        if node in sites:
            if not eligible(node, lang, sk, config):
                return False
            lang = lang.other
        if node.is_preterminal:
            out.append((node.slot, lang))
            return True
        return all(visit(node.kids[i], lang) for i in node.order(lang))

    return out if visit(sk.root, matrix) else None


def _is_antichain(sites) -> bool:
    for a in sites:
        p = a.parent
        while p is not None:
            if p in sites:
                return False
            p = p.parent
    return True


def _ml_brute(sk: Skeleton, model: str, matrix: str, config: MLConfig) -> list[CSSentence]:
    found = {}
    for m in MATRICES[matrix]:
        if model == "ml0":
            pool = [n for n in sk.nodes if eligible(n, m, sk, config)]
        else:
            pool = [n for n in sk.nodes
                    if eligible(n, Lang.L1, sk, config) or eligible(n, Lang.L2, sk, config)]
        if len(pool) > ML_NODE_LIMIT:
            raise ValueError(f"{len(pool)} eligible nodes exceeds the limit of {ML_NODE_LIMIT}")
        for k in range(len(pool) + 1):
            for sites in combinations(pool, k):
                sites = frozenset(sites)
                if not sites and not config.include_monolingual:
                    continue
                if model == "ml0" and not _is_antichain(sites):
                    continue
                seq = _render(sk, sites, m, config)
                if seq is None:
                    continue
                s = sk.sentence(seq)
                if model == "ml2" and not check_well_formed(s, sk.pair):
                    continue
                key = s.text if config.dedup == "strings" else (s.units, m, sites)
                found.setdefault(key, CSSentence(s.units, s.pair_id, MLDerivation(m, sites)))
    return sorted(found.values(), key=lambda s: (s.text, s.languages))


def brute_force(pair: AlignedPair, model: str, config: MLConfig,
                matrix: str | None = None) -> list[CSSentence]:
    """Exhaustive reference enumeration for ``model``.

    EC models search all slot orders and language choices and filter them with
    the declarative rules; ML models try every set of switch sites.
    """
    sk = skeleton_of(pair)
    if model == "ec0":
        return _ec_brute(sk, frozenset())
    if model == "ec1":
        return _ec_brute(sk, frozenset(config.substitutable))
    if model in ("ml0", "ml1", "ml2"):
        if matrix is None:
            matrix = config.matrix_ml0 if model == "ml0" else config.matrix_nested
        return _ml_brute(sk, model, matrix, config)
    raise ValueError(f"unknown model {model!r}")
