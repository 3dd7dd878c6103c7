"""Parse trees, lexical units and aligned sentence pairs.

A pair file looks like::

    #L1: hi
    #L2: en
    TREE1: (S (NP (NNP Shanivar)) (VP ...))
    TREE2: (S (NP (NNP Saturday)) (VP ...))
    ALIGN: 0-0 1-2 2-1 ...

Alignment indices are 0-based token positions in each tree's yield.
"""
from __future__ import annotations

import enum
import re
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Iterator

NULL_TOKEN = "-NULL-"


class PairFormatError(ValueError):
    """Raised for malformed pair files or inconsistent alignments."""


class Lang(str, enum.Enum):
    L1 = "l1"
    L2 = "l2"
    X = "x"
    EITHER = "either"

    @property
    def other(self) -> "Lang":
        if self is Lang.L1:
            return Lang.L2
        if self is Lang.L2:
            return Lang.L1
        raise ValueError(f"{self} has no partner language")


class TreeNode:
    """Constituency tree node.

    Leaves carry a ``token`` and no children; everything else is internal.
    ``congruent`` points at the matching node of the partner tree once
    congruence has been attached (see :func:`link`).
    """

    __slots__ = ("label", "children", "token", "span", "lang", "congruent")

    def __init__(self, label: str, children: Iterable["TreeNode"] = (),
                 token: str | None = None, lang: Lang = Lang.L1,
                 span: tuple[int, int] = (0, 0)):
        self.label = label
        self.children = tuple(children)
        self.token = token
        self.lang = lang
        self.span = span
        self.congruent: TreeNode | None = None
        if (token is None) == (not self.children):
            raise ValueError(f"node {label!r} must be either a leaf or have children")

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    @property
    def is_preterminal(self) -> bool:
        return bool(self.children) and all(c.is_leaf for c in self.children)

    def leaves(self) -> list["TreeNode"]:
        if self.is_leaf:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def tokens(self) -> list[str]:
        return [leaf.token for leaf in self.leaves()]

    def walk(self) -> Iterator["TreeNode"]:
        """Pre-order traversal."""
        yield self
        for c in self.children:
            yield from c.walk()

    def internal_nodes(self) -> Iterator["TreeNode"]:
        return (n for n in self.walk() if not n.is_leaf)

    def depth(self) -> int:
        """Edges from this node down to the deepest preterminal."""
        if self.is_leaf or self.is_preterminal:
            return 0
        return 1 + max(c.depth() for c in self.children)

    def shape(self):
        """Hashable structural signature (labels, tokens and nesting)."""
        if self.is_leaf:
            return self.token
        return (self.label, tuple(c.shape() for c in self.children))

    def to_bracketed(self) -> str:
        if self.is_leaf:
            return self.token
        return "(%s %s)" % (self.label, " ".join(c.to_bracketed() for c in self.children))

    def __repr__(self):
        return f"TreeNode({self.to_bracketed()})"


def link(a: TreeNode, b: TreeNode) -> None:
    """Make ``a`` and ``b`` mutually congruent."""
    a.congruent = b
    b.congruent = a


def build_tree(shape, lang: Lang = Lang.L1, start: int = 0) -> TreeNode:
    """Build a tree with spans from a nested ``(label, [children])`` / token shape."""
    if isinstance(shape, str):
        return TreeNode(shape, token=shape, lang=lang, span=(start, start + 1))
    label, kids = shape
    children = []
    pos = start
    for k in kids:
        child = build_tree(k, lang, pos)
        children.append(child)
        pos = child.span[1]
    return TreeNode(label, children, lang=lang, span=(start, pos))


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def parse_tree(text: str, lang: Lang = Lang.L1) -> TreeNode:
    """Parse a Penn-style bracketed tree such as ``(S (NP (NN dogs)) (VP (VBP bark)))``."""
    toks = _TOKEN_RE.findall(text)
    if not toks:
        raise PairFormatError("empty tree")
    pos = 0

    def parse():
        nonlocal pos
        if toks[pos] != "(":
            tok = toks[pos]
            pos += 1
            return tok
        pos += 1
        if pos >= len(toks) or toks[pos] in "()":
            raise PairFormatError(f"missing label after '(' in {text!r}")
        label = toks[pos]
        pos += 1
        kids = []
        while True:
            if pos >= len(toks):
                raise PairFormatError(f"unbalanced brackets in {text!r}")
            if toks[pos] == ")":
                pos += 1
                break
            kids.append(parse())
        if not kids:
            raise PairFormatError(f"constituent {label!r} has no children")
        return (label, kids)

    shape = parse()
    if pos != len(toks):
        raise PairFormatError(f"trailing material after tree: {' '.join(toks[pos:])!r}")
    if isinstance(shape, str):
        raise PairFormatError("tree must start with '('")
    return build_tree(shape, lang)


@dataclass(frozen=True)
class LexicalUnit:
    """A contiguous token group occupying one alignment slot."""

    lang: Lang
    index: int
    tokens: tuple[str, ...]
    start: int
    partner: int

    @property
    def is_null(self) -> bool:
        return all(t == NULL_TOKEN for t in self.tokens)

    @property
    def surface(self) -> tuple[str, ...]:
        return tuple(t for t in self.tokens if t != NULL_TOKEN)

    @property
    def end(self) -> int:
        return self.start + len(self.tokens)

    def __str__(self):
        return " ".join(self.tokens)


@dataclass(frozen=True)
class GrammarRule:
    lhs: str
    rhs: tuple[str, ...]
    congruent: "GrammarRule | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.rhs:
            raise ValueError("rule right-hand side must be non-empty")

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs)}"


@dataclass(eq=False)
class AlignedPair:
    tree1: TreeNode
    tree2: TreeNode
    units1: tuple[LexicalUnit, ...]
    units2: tuple[LexicalUnit, ...]
    lang1: str = "l1"
    lang2: str = "l2"
    pair_id: str = ""

    def tree(self, lang: Lang) -> TreeNode:
        return self.tree1 if lang is Lang.L1 else self.tree2

    def units(self, lang: Lang) -> tuple[LexicalUnit, ...]:
        return self.units1 if lang is Lang.L1 else self.units2

    def partner(self, unit: LexicalUnit) -> LexicalUnit:
        return self.units(unit.lang.other)[unit.partner]

    def owns(self, unit: LexicalUnit) -> bool:
        units = self.units(unit.lang)
        return 0 <= unit.index < len(units) and units[unit.index] == unit

    def sentence(self, lang: Lang) -> str:
        return " ".join(t for u in self.units(lang) for t in u.surface)

    @property
    def n_slots(self) -> int:
        return len(self.units1)

    def slot_unit(self, slot: int, lang: Lang) -> LexicalUnit:
        """Unit for alignment slot ``slot`` (slots follow L1 order)."""
        u = self.units1[slot]
        return u if lang is Lang.L1 else self.units2[u.partner]

    def swapped(self) -> "AlignedPair":
        """The same pair with the two languages exchanged."""
        t1 = _relang(self.tree2, Lang.L1)
        t2 = _relang(self.tree1, Lang.L2)
        u1 = tuple(LexicalUnit(Lang.L1, u.index, u.tokens, u.start, u.partner) for u in self.units2)
        u2 = tuple(LexicalUnit(Lang.L2, u.index, u.tokens, u.start, u.partner) for u in self.units1)
        pair = AlignedPair(t1, t2, u1, u2, self.lang2, self.lang1, self.pair_id + "~")
        if self.tree1.congruent is not None:
            copy_congruence(self.tree2, self.tree1, t1, t2)
        return pair


def _relang(node: TreeNode, lang: Lang) -> TreeNode:
    if node.is_leaf:
        return TreeNode(node.label, token=node.token, lang=lang, span=node.span)
    return TreeNode(node.label, [_relang(c, lang) for c in node.children], lang=lang, span=node.span)


def copy_congruence(old1: TreeNode, old2: TreeNode, new1: TreeNode, new2: TreeNode) -> None:
    """Replay the congruence links of (old1, old2) onto structural copies."""
    index2 = {id(n): m for n, m in zip(old2.walk(), new2.walk())}
    for n, m in zip(old1.walk(), new1.walk()):
        if n.congruent is not None and id(n.congruent) in index2:
            link(m, index2[id(n.congruent)])


# ---------------------------------------------------------------- pair files

def _group_links(links, n1, n2):
    """Connected components of the bipartite link graph, as (set1, set2)."""
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in links:
        parent[find((1, i))] = find((2, j))
    comps = {}
    for side, n in ((1, n1), (2, n2)):
        for k in range(n):
            if (side, k) not in parent:
                continue
            comps.setdefault(find((side, k)), (set(), set()))[side - 1].add(k)
    return list(comps.values())


def _contiguous(idx: set[int]) -> bool:
    return max(idx) - min(idx) + 1 == len(idx)


def make_units(tokens1, tokens2, links) -> tuple[tuple[LexicalUnit, ...], tuple[LexicalUnit, ...]]:
    """Group token-level links into aligned unit pairs."""
    n1, n2 = len(tokens1), len(tokens2)
    for i, j in links:
        if not (0 <= i < n1):
            raise PairFormatError(f"alignment index {i} out of range for TREE1 ({n1} tokens)")
        if not (0 <= j < n2):
            raise PairFormatError(f"alignment index {j} out of range for TREE2 ({n2} tokens)")
    groups = _group_links(links, n1, n2)
    covered1 = set().union(*(g[0] for g in groups)) if groups else set()
    covered2 = set().union(*(g[1] for g in groups)) if groups else set()
    if len(covered1) != n1:
        raise PairFormatError(f"unaligned TREE1 tokens: {sorted(set(range(n1)) - covered1)}")
    if len(covered2) != n2:
        raise PairFormatError(f"unaligned TREE2 tokens: {sorted(set(range(n2)) - covered2)}")
    for g1, g2 in groups:
        if not _contiguous(g1) or not _contiguous(g2):
            raise PairFormatError(
                f"non-contiguous alignment group: TREE1 {sorted(g1)} <-> TREE2 {sorted(g2)}")
    groups.sort(key=lambda g: min(g[0]))
    order2 = sorted(range(len(groups)), key=lambda k: min(groups[k][1]))
    pos2 = {k: p for p, k in enumerate(order2)}
    units1 = tuple(
        LexicalUnit(Lang.L1, k, tuple(tokens1[t] for t in sorted(g1)), min(g1), pos2[k])
        for k, (g1, _) in enumerate(groups))
    units2 = tuple(
        LexicalUnit(Lang.L2, p, tuple(tokens2[t] for t in sorted(groups[k][1])),
                    min(groups[k][1]), k)
        for p, k in enumerate(order2))
    return units1, units2


def parse_pair_file(text: str, pair_id: str = "") -> AlignedPair:
    headers = {}
    trees = {}
    links = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        m = re.match(r"#\s*(L1|L2)\s*:\s*(\S+)", line)
        if m:
            headers[m.group(1)] = m.group(2)
            continue
        if line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip().upper()
        if not sep or key not in ("TREE1", "TREE2", "ALIGN"):
            raise PairFormatError(f"line {lineno}: unrecognised line {line!r}")
        if key == "ALIGN":
            links = []
            for item in value.split():
                a, dash, b = item.partition("-")
                if not dash or not a.isdigit() or not b.isdigit():
                    raise PairFormatError(f"line {lineno}: bad alignment link {item!r}")
                links.append((int(a), int(b)))
        else:
            trees[key] = value.strip()
    for key in ("TREE1", "TREE2"):
        if key not in trees:
            raise PairFormatError(f"missing {key} line")
    if links is None:
        raise PairFormatError("missing ALIGN line")
    tree1 = parse_tree(trees["TREE1"], Lang.L1)
    tree2 = parse_tree(trees["TREE2"], Lang.L2)
    units1, units2 = make_units(tree1.tokens(), tree2.tokens(), links)
    return AlignedPair(tree1, tree2, units1, units2,
                       headers.get("L1", "l1"), headers.get("L2", "l2"), pair_id)


def serialize_pair(pair: AlignedPair) -> str:
    links = []
    for u in pair.units1:
        p = pair.units2[u.partner]
        links.extend(f"{i}-{j}" for i in range(u.start, u.end) for j in range(p.start, p.end))
    return "\n".join([
        f"#L1: {pair.lang1}",
        f"#L2: {pair.lang2}",
        f"TREE1: {pair.tree1.to_bracketed()}",
        f"TREE2: {pair.tree2.to_bracketed()}",
        f"ALIGN: {' '.join(links)}",
    ]) + "\n"


# ---------------------------------------------------------------- grammar

def extract_rules(tree: TreeNode) -> set[GrammarRule]:
    """One rule per internal node above the preterminal level."""
    return {GrammarRule(n.label, tuple(c.label for c in n.children))
            for n in tree.internal_nodes() if not n.is_preterminal}


def rule_congruence(pair: AlignedPair) -> dict[GrammarRule, set[GrammarRule]]:
    """Map every L1 rule to the set of L2 rules found at congruent nodes."""
    h: dict[GrammarRule, set[GrammarRule]] = {}
    for n in pair.tree1.internal_nodes():
        if n.is_preterminal:
            continue
        r1 = GrammarRule(n.label, tuple(c.label for c in n.children))
        m = n.congruent
        if m is None or m.is_leaf or m.is_preterminal:
            h.setdefault(r1, set())
            continue
        h.setdefault(r1, set()).add(GrammarRule(m.label, tuple(c.label for c in m.children), r1))
    return h


@dataclass
class CongruenceReport:
    """Node-level ``violations`` break the models; ``rule_conflicts`` only mean that
    one L1 rule is reordered differently at different nodes."""

    violations: list[str] = field(default_factory=list)
    rule_conflicts: list[str] = field(default_factory=list)

    @property
    def nodes_ok(self) -> bool:
        return not self.violations

    @property
    def ok(self) -> bool:
        return not self.violations and not self.rule_conflicts

    def __bool__(self):
        return self.ok


def check_congruence(pair: AlignedPair) -> CongruenceReport:
    """Check node-level bijection and rule-level congruence of a linked pair."""
    report = CongruenceReport()
    v = report.violations
    nodes1 = [n for n in pair.tree1.internal_nodes()]
    nodes2 = [n for n in pair.tree2.internal_nodes()]
    ids2 = {id(n) for n in nodes2}
    ids1 = {id(n) for n in nodes1}
    for n in nodes1:
        if n.congruent is None or id(n.congruent) not in ids2:
            v.append(f"orphan L1 node {n.label} {n.span}: {' '.join(n.tokens())}")
        elif n.congruent.congruent is not n:
            v.append(f"non-mutual congruence at L1 node {n.label} {n.span}")
    for n in nodes2:
        if n.congruent is None or id(n.congruent) not in ids1:
            v.append(f"orphan L2 node {n.label} {n.span}: {' '.join(n.tokens())}")
    for n in nodes1:
        m = n.congruent
        if m is None or n.is_preterminal:
            continue
        if n.label != m.label:
            v.append(f"category mismatch {n.label} vs {m.label} at {n.span}")
        if len(n.children) != len(m.children) or m.is_preterminal:
            v.append(f"rule {n.label} has {len(n.children)} children but its image has "
                     f"{len(m.children)}")
            continue
        kids2 = {id(c) for c in m.children}
        if any(c.congruent is None or id(c.congruent) not in kids2 for c in n.children):
            v.append(f"rule at {n.label} {n.span} is not a permutation of its image")
    # h must be a function: each L1 rule maps to exactly one L2 rule
    for r1, images in rule_congruence(pair).items():
        if len(images) > 1:
            report.rule_conflicts.append(f"rule {r1} maps to {len(images)} different L2 rules")
    # every unit must be the yield of one preterminal per side
    for lang in (Lang.L1, Lang.L2):
        pre_spans = {n.span for n in pair.tree(lang).internal_nodes() if n.is_preterminal}
        for u in pair.units(lang):
            if (u.start, u.end) not in pre_spans:
                v.append(f"unit {u} ({lang.value}) is not the yield of a single preterminal")
    return report


@dataclass(frozen=True)
class CSSentence:
    """A code-switched word sequence drawn from an aligned pair."""

    units: tuple[LexicalUnit, ...]
    pair_id: str = field(default="", compare=False)
    derivation: object = field(default=None, compare=False, repr=False)

    @property
    def words(self) -> list[str]:
        return [t for u in self.units for t in u.surface]

    @property
    def text(self) -> str:
        return " ".join(self.words)

    @property
    def languages(self) -> tuple[Lang, ...]:
        return tuple(u.lang for u in self.units)

    @property
    def switch_points(self) -> tuple[int, ...]:
        """Indices ``i`` such that units ``i`` and ``i+1`` differ in language."""
        return tuple(i for i in range(len(self.units) - 1)
                     if self.units[i].lang is not self.units[i + 1].lang)

    def __str__(self):
        return self.text


def canonical(sentences: Iterable[CSSentence]) -> set[str]:
    return {s.text for s in sentences}


# ---------------------------------------------------------------- skeleton

class SkelNode:
    """A congruent node pair reduced to what the generators need.

    ``kids`` are in L1 order; ``order2`` lists the same kids' indices in
    L2 order. Preterminals carry the alignment ``slot`` they dominate.
    """

    __slots__ = ("label", "kids", "order2", "pos2", "slot", "slots", "node1", "node2", "parent")

    def __init__(self, label, kids, order2, slot, node1, node2):
        self.label = label
        self.kids = tuple(kids)
        self.order2 = tuple(order2)
        self.pos2 = tuple(sorted(range(len(self.order2)), key=self.order2.__getitem__))
        self.slot = slot
        self.node1 = node1
        self.node2 = node2
        self.parent = None
        self.slots = (slot,) if slot is not None else tuple(s for k in self.kids for s in k.slots)
        for k in self.kids:
            k.parent = self

    @property
    def is_preterminal(self) -> bool:
        return self.slot is not None

    def order(self, lang: Lang) -> tuple[int, ...]:
        return tuple(range(len(self.kids))) if lang is Lang.L1 else self.order2

    def position(self, kid_index: int, lang: Lang) -> int:
        """Position the kid occupies in this node's ``lang`` rule."""
        return kid_index if lang is Lang.L1 else self.pos2[kid_index]

    def walk(self):
        yield self
        for k in self.kids:
            yield from k.walk()

    def __repr__(self):
        return f"SkelNode({self.label}, slots={self.slots})"


class Skeleton:
    """Slot-indexed view of a linked, congruent pair.

    Slots are numbered by L1 unit order, so ``pos[L1][s] == s``.
    """

    def __init__(self, pair: AlignedPair):
        if pair.tree1.congruent is None:
            raise ValueError("pair has no congruence links; run projection first")
        self.pair = pair
        starts1 = {u.start: u.index for u in pair.units1}
        self.root = self._build(pair.tree1, starts1)
        self.n = len(pair.units1)
        self.pos = {
            Lang.L1: {s: s for s in range(self.n)},
            Lang.L2: {s: pair.units1[s].partner for s in range(self.n)},
        }
        self.nodes = list(self.root.walk())

    def _build(self, n1: TreeNode, starts1):
        n2 = n1.congruent
        if n1.is_preterminal:
            slot = starts1.get(n1.span[0])
            if slot is None or self.pair.units1[slot].end != n1.span[1]:
                raise PairFormatError(f"preterminal {n1.label} {n1.span} does not cover one unit")
            return SkelNode(n1.label, (), (), slot, n1, n2)
        kids = [self._build(c, starts1) for c in n1.children]
        where = {id(c.congruent): i for i, c in enumerate(n1.children)}
        order2 = [where[id(c)] for c in n2.children]
        return SkelNode(n1.label, kids, order2, None, n1, n2)

    def unit(self, slot: int, lang: Lang) -> LexicalUnit:
        return self.pair.slot_unit(slot, lang)

    def sentence(self, seq) -> CSSentence:
        """CSSentence for a sequence of ``(slot, lang)`` choices."""
        return CSSentence(tuple(self.unit(s, l) for s, l in seq), self.pair.pair_id)

    def text(self, seq) -> str:
        return " ".join(t for s, l in seq for t in self.unit(s, l).surface)

    def linearize(self, node: SkelNode, lang: Lang) -> list[tuple[int, Lang]]:
        """Monolingual rendering of ``node`` in ``lang``."""
        if node.is_preterminal:
            return [(node.slot, lang)]
        return [x for i in node.order(lang) for x in self.linearize(node.kids[i], lang)]

    def well_formed(self, seq) -> bool:
        """Adjacent same-language units must be adjacent, in order, in their source."""
        for (s1, l1), (s2, l2) in zip(seq, seq[1:]):
            if l1 is l2 and self.pos[l1][s2] != self.pos[l1][s1] + 1:
                return False
        return True

    def to_seq(self, sentence: CSSentence) -> list[tuple[int, Lang]]:
        out = []
        for u in sentence.units:
            if not self.pair.owns(u):
                raise ValueError(f"unit {u} does not belong to pair {self.pair.pair_id!r}")
            out.append((u.index if u.lang is Lang.L1 else u.partner, u.lang))
        return out


_SKELETONS: "weakref.WeakKeyDictionary[AlignedPair, Skeleton]" = weakref.WeakKeyDictionary()


def skeleton_of(pair: AlignedPair) -> Skeleton:
    """Cached :class:`Skeleton` for a linked pair."""
    sk = _SKELETONS.get(pair)
    if sk is None:
        sk = _SKELETONS[pair] = Skeleton(pair)
    return sk
