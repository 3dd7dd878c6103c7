"""Matrix-language generators.

A mixed sentence is obtained from a monolingual frame (the matrix tree) by
replacing constituents with their congruent counterparts from the other tree.
ML0 replaces whole constituents and never looks inside them again; ML1 lets
the replaced constituent switch back, recursively; ML2 keeps the ML1 outputs
whose monolingual stretches occur verbatim in their source sentences.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .config import MLConfig
from .core import AlignedPair, CSSentence, Lang, SkelNode, Skeleton, skeleton_of

MATRICES = {"l1": (Lang.L1,), "l2": (Lang.L2,), "both": (Lang.L1, Lang.L2)}


@dataclass(frozen=True)
class MLDerivation:
    """The frame language and the constituents that were switched."""

    matrix: Lang
    sites: frozenset[SkelNode]


def _denied_preterminal(node: SkelNode, lang: Lang, sk: Skeleton, config: MLConfig) -> bool:
    if node.label in config.deny(lang):
        return True
    if node.label.startswith(("VB", "MD")):
        unit = sk.unit(node.slot, lang)
        return any(t.lower() in config.aux_lexicon(lang) for t in unit.tokens)
    return False


def eligible(node: SkelNode, lang: Lang, sk: Skeleton, config: MLConfig) -> bool:
    """Whether ``node``, currently rendered in ``lang``, may switch to the other language."""
    if node is sk.root:
        return False
    if node.is_preterminal:
        return not _denied_preterminal(node, lang, sk, config)
    if node.label in config.deny(lang):
        return False
    if config.deny_composite_functional:
        pre = [n for n in node.walk() if n.is_preterminal]
        if all(_denied_preterminal(n, lang, sk, config) for n in pre):
            return False
    return True


def _ml_derivations(sk: Skeleton, matrix: Lang, config: MLConfig, nested: bool):
    """All (sequence, switch sites) derivations with ``matrix`` as frame."""
    memo = {}

    def frame(node: SkelNode, lang: Lang):
        # node rendered in lang, each child either kept or switched
        if node.is_preterminal:
            return [(((node.slot, lang),), frozenset())]
        parts = [options(node.kids[i], lang) for i in node.order(lang)]
        out = []
        for combo in product(*parts):
            seq = tuple(x for s, _ in combo for x in s)
            out.append((seq, frozenset().union(*(sites for _, sites in combo))))
        return out

    def options(node: SkelNode, lang: Lang):
        key = (node, lang)
        if key in memo:
            return memo[key]
        out = frame(node, lang)
        if eligible(node, lang, sk, config):
            other = lang.other
            if nested:
                switched = frame(node, other)
            else:
                switched = [(tuple(sk.linearize(node, other)), frozenset())]
            out = out + [(seq, sites | {node}) for seq, sites in switched]
        memo[key] = out
        return out

    return frame(sk.root, matrix)


def _collect(sk: Skeleton, derivations, config: MLConfig, keep=None) -> list[CSSentence]:
    seen = {}
    for matrix, seq, sites in derivations:
        if not sites and not config.include_monolingual:
            continue
        if keep is not None and not keep(seq):
            continue
        s = CSSentence(sk.sentence(seq).units, sk.pair.pair_id, MLDerivation(matrix, sites))
        key = s.text if config.dedup == "strings" else (s.units, matrix, sites)
        seen.setdefault(key, s)
    return sorted(seen.values(), key=lambda s: (s.text, s.languages))


def _generate(pair, matrix, config, nested, keep=None):
    sk = skeleton_of(pair)
    derivations = [(m, seq, sites)
                   for m in MATRICES[matrix]
                   for seq, sites in _ml_derivations(sk, m, config, nested)]
    return _collect(sk, derivations, config, keep)


def generate_ml0(pair: AlignedPair, matrix: str, config: MLConfig) -> list[CSSentence]:
    """Switch any set of non-overlapping eligible constituents, no switching back."""
    return _generate(pair, matrix, config, nested=False)


def generate_ml1(pair: AlignedPair, matrix: str, config: MLConfig) -> list[CSSentence]:
    """Like :func:`generate_ml0`, but switched constituents may switch back inside."""
    return _generate(pair, matrix, config, nested=True)


def generate_ml2(pair: AlignedPair, matrix: str, config: MLConfig) -> list[CSSentence]:
    """ML1 outputs whose monolingual fragments are well formed."""
    sk = skeleton_of(pair)
    return _generate(pair, matrix, config, nested=True, keep=sk.well_formed)


def check_well_formed(sentence: CSSentence, pair: AlignedPair) -> bool:
    """True iff each maximal monolingual run occurs contiguously and in order in its source."""
    for u in sentence.units:
        if not pair.owns(u):
            raise ValueError(f"unit {u!s} does not belong to pair {pair.pair_id!r}")
    for a, b in zip(sentence.units, sentence.units[1:]):
        if a.lang is b.lang and b.index != a.index + 1:
            return False
    return True
