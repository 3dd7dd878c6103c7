"""Equivalence-constraint generator and validator.

Candidates are produced word by word under three production rules: every
alignment slot is filled by exactly one of its two units; each monolingual
stretch appears contiguously and in order in its own sentence; and once a
constituent has been entered it is finished before anything outside it is
emitted. Each candidate is then checked bottom-up: constituents get a
language label, every child must sit where its language's rule puts it, and
at every language junction the material to the left must be the same set of
constituents under both languages' rules.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

from .config import MLConfig
from .core import AlignedPair, CSSentence, Lang, SkelNode, Skeleton, skeleton_of

STRICT = frozenset()


class MixedNode(NamedTuple):
    """A constituent of a candidate, children in generated order.

    ``index`` is the position of ``skel`` among its parent's kids in L1 order.
    """

    skel: SkelNode
    children: tuple["MixedNode", ...]
    index: int
    lang: Lang = Lang.X

    @property
    def label(self) -> str:
        return self.skel.label

    def to_bracketed(self) -> str:
        tag = f"{self.label}_{self.lang.value}"
        if not self.children:
            return f"({tag} {self.skel.slot})"
        return "(%s %s)" % (tag, " ".join(c.to_bracketed() for c in self.children))


@dataclass(frozen=True)
class MixedTree:
    """A candidate's derivation: the constituent tree in generated order."""

    root: MixedNode
    seq: tuple[tuple[int, Lang], ...]

    def nodes(self):
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(n.children)


def mixed_tree(sk: Skeleton, seq) -> MixedTree:
    """Derivation tree of a sequence that satisfies the constituent-block property."""
    at = {s: i for i, (s, _) in enumerate(seq)}
    langs = dict(seq)

    def build(node: SkelNode, index: int) -> MixedNode:
        if node.is_preterminal:
            return MixedNode(node, (), index, langs[node.slot])
        kids = sorted(range(len(node.kids)), key=lambda i: min(at[s] for s in node.kids[i].slots))
        return MixedNode(node, tuple(build(node.kids[i], i) for i in kids), index)

    return MixedTree(build(sk.root, 0), tuple(seq))


# ---------------------------------------------------------------- candidates

def candidate_sequences(sk: Skeleton):
    """Yield every ``(slot, lang)`` sequence allowed by the three production rules."""
    chains = {}
    for node in sk.nodes:
        if node.is_preterminal:
            chain, n = [], node
            while n is not None:
                chain.append(n)
                n = n.parent
            chains[node.slot] = chain[::-1]
    size = {n: len(n.slots) for n in sk.nodes}
    emitted_under = {n: 0 for n in sk.nodes}
    seq: list[tuple[int, Lang]] = []
    open_chain: list[SkelNode] = []
    free = set(range(sk.n))
    pos = sk.pos

    def belongs(w: int) -> bool:
        return not open_chain or open_chain[-1] in chains[w]

    def step():
        if not free:
            yield tuple(seq)
            return
        last = seq[-1] if seq else None
        for w in sorted(free):
            if not belongs(w):
                continue
            for lang in (Lang.L1, Lang.L2):
                if last is not None and last[1] is lang and pos[lang][w] != pos[lang][last[0]] + 1:
                    continue
                saved = list(open_chain)
                free.remove(w)
                seq.append((w, lang))
                for a in chains[w]:
                    emitted_under[a] += 1
                open_chain[:] = [a for a in chains[w] if emitted_under[a] < size[a]]
                yield from step()
                for a in chains[w]:
                    emitted_under[a] -= 1
                seq.pop()
                free.add(w)
                open_chain[:] = saved

    yield from step()


def generate_candidates(pair: AlignedPair) -> list[CSSentence]:
    sk = skeleton_of(pair)
    out = []
    for seq in candidate_sequences(sk):
        s = sk.sentence(seq)
        out.append(replace(s, derivation=mixed_tree(sk, seq)))
    return out


# ---------------------------------------------------------------- verification

def assign_languages(tree: MixedTree, substitutable=STRICT) -> MixedTree:
    """Label every constituent L1, L2 or X bottom-up.

    Preterminals whose category is in ``substitutable`` are relabeled EITHER;
    they are ignored when labeling their parent unless every child is EITHER.
    """

    def visit(n: MixedNode) -> MixedNode:
        if not n.children:
            if n.skel.label in substitutable:
                return MixedNode(n.skel, (), n.index, Lang.EITHER)
            return n
        kids = tuple(visit(c) for c in n.children)
        langs = {c.lang for c in kids}
        if langs == {Lang.EITHER}:
            lang = Lang.EITHER
        else:
            langs.discard(Lang.EITHER)
            lang = langs.pop() if len(langs) == 1 else Lang.X
        return MixedNode(n.skel, kids, n.index, lang)

    return MixedTree(visit(tree.root), tree.seq)


class Rejection(Exception):
    def __init__(self, stage: str, detail: str = ""):
        super().__init__(f"{stage}: {detail}" if detail else stage)
        self.stage = stage
        self.detail = detail


def _resolve(parent: SkelNode, child: MixedNode, at: int) -> Lang:
    p1 = child.index
    p2 = parent.pos2[child.index]
    lang = child.lang
    if lang is Lang.L1 or lang is Lang.L2:
        if at != (p1 if lang is Lang.L1 else p2):
            raise Rejection("position clash",
                            f"{child.label} labeled {lang.value} at position {at} of {parent.label}")
        return lang
    if at not in (p1, p2):
        raise Rejection("position clash",
                        f"{child.label} at position {at} of {parent.label} fits neither rule")
    if lang is Lang.X and p1 != p2:
        return Lang.L1 if at == p1 else Lang.L2
    return lang


def verify_positions(tree: MixedTree) -> MixedTree:
    """Check every child against its rule position; raises :class:`Rejection`."""

    def visit(n: MixedNode) -> MixedNode:
        kids = tuple(visit(MixedNode(c.skel, c.children, c.index, _resolve(n.skel, c, at)))
                     for at, c in enumerate(n.children))
        return MixedNode(n.skel, kids, n.index, n.lang)

    return MixedTree(visit(tree.root), tree.seq)


def check_equivalence_constraint(tree: MixedTree) -> None:
    """Raise :class:`Rejection` at the first junction whose left context differs by rule."""
    for n in tree.nodes():
        kids = n.children
        for i in range(len(kids) - 1):
            if {kids[i].lang, kids[i + 1].lang} != {Lang.L1, Lang.L2}:
                continue
            if set(range(i + 1)) != set(n.skel.order2[:i + 1]):
                raise Rejection("equivalence constraint",
                                f"switch after {kids[i].label} under {n.label}")


def verify(tree: MixedTree, substitutable=STRICT) -> MixedTree:
    checked = verify_positions(assign_languages(tree, substitutable))
    check_equivalence_constraint(checked)
    return checked


def _accept(tree: MixedTree, substitutable) -> MixedTree | None:
    try:
        return verify(tree)
    except Rejection:
        pass
    if substitutable:
        try:
            return verify(tree, substitutable)
        except Rejection:
            pass
    return None


class _Checker:
    """Memoized verification of candidate sequences.

    Labeling, position checks and junction checks at a node depend only on
    the words emitted under it, so results are cached per (node, segment).
    This gives the same verdicts as :func:`verify` without rebuilding trees.
    """

    def __init__(self, sk: Skeleton, substitutable):
        self.sk = sk
        self.substitutable = substitutable
        self.kid_of = {n: {s: i for i, k in enumerate(n.kids) for s in k.slots}
                       for n in sk.nodes if not n.is_preterminal}
        self.memo = {}

    def label(self, node: SkelNode, seg) -> Lang | None:
        key = (node, seg)
        if key in self.memo:
            return self.memo[key]
        if node.is_preterminal:
            lang = Lang.EITHER if node.label in self.substitutable else seg[0][1]
            self.memo[key] = lang
            return lang
        kid_of = self.kid_of[node]
        groups = []
        start = 0
        for j in range(1, len(seg) + 1):
            if j == len(seg) or kid_of[seg[j][0]] != kid_of[seg[start][0]]:
                groups.append((kid_of[seg[start][0]], seg[start:j]))
                start = j
        result = self._check(node, groups)
        self.memo[key] = result
        return result

    def _check(self, node: SkelNode, groups) -> Lang | None:
        labels = []
        for i, g in groups:
            lang = self.label(node.kids[i], g)
            if lang is None:
                return None
            labels.append(lang)
        present = set(labels)
        if present == {Lang.EITHER}:
            own = Lang.EITHER
        else:
            present.discard(Lang.EITHER)
            own = present.pop() if len(present) == 1 else Lang.X
        resolved = []
        for at, ((i, _), lang) in enumerate(zip(groups, labels)):
            p2 = node.pos2[i]
            if lang is Lang.L1 or lang is Lang.L2:
                if at != (i if lang is Lang.L1 else p2):
                    return None
            elif at != i and at != p2:
                return None
            elif lang is Lang.X and i != p2:
                lang = Lang.L1 if at == i else Lang.L2
            resolved.append(lang)
        for at in range(len(resolved) - 1):
            if {resolved[at], resolved[at + 1]} == {Lang.L1, Lang.L2}:
                if set(range(at + 1)) != set(node.order2[:at + 1]):
                    return None
        return own

    def accepts(self, seq) -> bool:
        return self.label(self.sk.root, seq) is not None


def _run(sk: Skeleton, sequences, substitutable):
    """Split candidates into strict accepts and relaxation-only accepts."""
    strict = _Checker(sk, STRICT)
    relaxed = _Checker(sk, substitutable) if substitutable else None
    ec0, extra = {}, {}
    for seq in sequences:
        if strict.accepts(seq):
            ec0.setdefault(sk.text(seq), seq)
        elif relaxed is not None and relaxed.accepts(seq):
            extra.setdefault(sk.text(seq), seq)
    return ec0, extra


def _sentences(sk: Skeleton, found: dict, substitutable) -> list[CSSentence]:
    out = []
    for text in sorted(found):
        seq = found[text]
        tree = _accept(mixed_tree(sk, seq), substitutable)
        out.append(replace(sk.sentence(seq), derivation=tree))
    return out


def filter_candidates(sk: Skeleton, sequences, substitutable=STRICT) -> list[CSSentence]:
    ec0, extra = _run(sk, sequences, substitutable)
    return _sentences(sk, {**extra, **ec0}, substitutable)


def generate_ec0(pair: AlignedPair) -> list[CSSentence]:
    sk = skeleton_of(pair)
    return filter_candidates(sk, candidate_sequences(sk))


def generate_ec1(pair: AlignedPair, config: MLConfig) -> list[CSSentence]:
    """EC0 plus candidates rescued by treating substitutable words as language-neutral."""
    sk = skeleton_of(pair)
    return filter_candidates(sk, candidate_sequences(sk), frozenset(config.substitutable))


def generate_ec_both(pair: AlignedPair, config: MLConfig):
    """``(EC0, EC1)`` from a single pass over the candidates."""
    sk = skeleton_of(pair)
    sub = frozenset(config.substitutable)
    ec0, extra = _run(sk, candidate_sequences(sk), sub)
    return _sentences(sk, ec0, STRICT), _sentences(sk, {**extra, **ec0}, sub)


# ---------------------------------------------------------------- validation

def block_property(sk: Skeleton, seq) -> bool:
    """Every constituent's slots occupy one contiguous stretch of ``seq``."""
    at = {s: i for i, (s, _) in enumerate(seq)}
    for node in sk.nodes:
        where = sorted(at[s] for s in node.slots if s in at)
        if where and where[-1] - where[0] + 1 != len(where):
            return False
    return True


STAGES = ("production rule 1", "production rule 2", "production rule 3",
          "position clash", "equivalence constraint")


def check_sequence(sk: Skeleton, seq, substitutable=STRICT) -> Rejection | None:
    """Run a full slot sequence through every stage; ``None`` means accepted."""
    if sorted(s for s, _ in seq) != list(range(sk.n)):
        return Rejection("production rule 1", "not exactly one unit per slot")
    if not sk.well_formed(seq):
        return Rejection("production rule 2", "monolingual fragment out of order")
    if not block_property(sk, seq):
        return Rejection("production rule 3", "constituent interrupted")
    tree = mixed_tree(sk, seq)
    try:
        verify(tree)
        return None
    except Rejection as strict:
        if not substitutable:
            return strict
        try:
            verify(tree, substitutable)
            return None
        except Rejection:
            return strict


def segmentations(sk: Skeleton, words: list[str]):
    """All ways to read ``words`` as one unit per slot (units may be silent)."""
    options = [(s, lang, sk.unit(s, lang).surface) for s in range(sk.n) for lang in (Lang.L1, Lang.L2)]
    seen = set()
    seq: list[tuple[int, Lang]] = []
    used: set[int] = set()

    def step(i: int):
        if i == len(words) and len(used) == sk.n:
            t = tuple(seq)
            if t not in seen:
                seen.add(t)
                yield t
        for s, lang, surface in options:
            if s in used or tuple(words[i:i + len(surface)]) != surface:
                continue
            used.add(s)
            seq.append((s, lang))
            yield from step(i + len(surface))
            seq.pop()
            used.remove(s)

    yield from step(0)


def explain(pair: AlignedPair, sentence: str, substitutable=STRICT) -> Rejection | None:
    """Why ``sentence`` is rejected by the EC pipeline, or ``None`` if accepted.

    When several readings exist the one that got furthest is reported.
    """
    sk = skeleton_of(pair)
    best = Rejection("production rule 1", "words cannot be read as one unit per slot")
    for seq in segmentations(sk, sentence.split()):
        outcome = check_sequence(sk, seq, substitutable)
        if outcome is None:
            return None
        if STAGES.index(outcome.stage) > STAGES.index(best.stage):
            best = outcome
    return best
