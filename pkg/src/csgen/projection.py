"""Project a source parse onto its translation through the unit alignment.

A source constituent survives only if the partners of its units form a
contiguous block in the target. Constituents that fail are removed from the
source tree as well (their children are spliced into the parent), so the two
resulting trees are isomorphic node for node.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (AlignedPair, Lang, PairFormatError, TreeNode, build_tree, link,
                   make_units)


@dataclass
class ProjectionResult:
    modified_source: TreeNode
    projected_target: TreeNode
    node_map: dict[int, TreeNode]

    def image(self, node: TreeNode) -> TreeNode:
        return self.node_map[id(node)]


def _unit_of_preterminals(tree: TreeNode, units) -> dict[int, int]:
    """Map id(preterminal) -> unit index, checking one unit per preterminal."""
    by_start = {u.start: u for u in units}
    out = {}
    covered = set()
    for n in tree.internal_nodes():
        if not n.is_preterminal:
            continue
        u = by_start.get(n.span[0])
        if u is None or u.end != n.span[1]:
            raise PairFormatError(
                f"preterminal {n.label} over {' '.join(n.tokens())!r} is not exactly one aligned unit")
        out[id(n)] = u.index
        covered.add(u.index)
    if len(covered) != len(units):
        missing = [str(u) for u in units if u.index not in covered]
        raise PairFormatError(f"units spanning several preterminals: {missing}")
    return out


def project(source: TreeNode, source_units, target_units) -> ProjectionResult:
    """Project ``source`` onto the sentence made of ``target_units``.

    ``source_units[i].partner`` indexes ``target_units``.
    """
    pre_unit = _unit_of_preterminals(source, source_units)

    # bottom-up: returns a list of (source_shape, target_shape, target_key, units)
    # items; a dropped node returns its kept children, a kept node returns itself.
    def visit(n: TreeNode, is_root: bool):
        if n.is_preterminal:
            u = source_units[pre_unit[id(n)]]
            p = target_units[u.partner]
            item = ((n.label, list(u.tokens)), (n.label, list(p.tokens)), p.index, [p.index])
            return [item]
        parts = [it for c in n.children for it in visit(c, False)]
        partners = sorted(i for it in parts for i in it[3])
        contiguous = partners[-1] - partners[0] + 1 == len(partners)
        if not (contiguous or is_root):
            return parts
        src = (n.label, [it[0] for it in parts])
        tgt = (n.label, [it[1] for it in sorted(parts, key=lambda it: it[2])])
        return [(src, tgt, partners[0], partners)]

    [(src_shape, tgt_shape, _, _)] = visit(source, True)
    new_src = build_tree(src_shape, source.lang)
    new_tgt = build_tree(tgt_shape, Lang.L2 if source.lang is Lang.L1 else Lang.L1)
    node_map = _match(new_src, new_tgt, source_units, target_units)
    return ProjectionResult(new_src, new_tgt, node_map)


def _match(src: TreeNode, tgt: TreeNode, source_units, target_units) -> dict[int, TreeNode]:
    """Pair up nodes of the two projected trees by the unit sets they dominate."""
    src_units = {u.start: u for u in source_units}
    tgt_index = {u.start: u.index for u in target_units}

    def src_key(n):
        return frozenset(src_units[leaf.span[0]].partner for leaf in n.leaves()
                         if leaf.span[0] in src_units)

    def tgt_key(n):
        return frozenset(tgt_index[leaf.span[0]] for leaf in n.leaves()
                         if leaf.span[0] in tgt_index)

    # unary chains share a key, so match them by depth within the chain
    tgt_by_key: dict = {}
    for n in tgt.internal_nodes():
        tgt_by_key.setdefault(tgt_key(n), []).append(n)
    node_map = {}
    used: dict = {}
    for n in src.internal_nodes():
        k = src_key(n)
        i = used.get(k, 0)
        m = tgt_by_key[k][i]
        used[k] = i + 1
        node_map[id(n)] = m
    return node_map


def attach_congruence(result: ProjectionResult, pair: AlignedPair) -> AlignedPair:
    """Return ``pair`` rebuilt on the projected trees with mutual congruence links."""
    for n in result.modified_source.internal_nodes():
        link(n, result.image(n))
    if pair.tree1.lang is Lang.L1:
        t1, t2 = result.modified_source, result.projected_target
    else:
        t1, t2 = result.projected_target, result.modified_source
    u1, u2 = make_units(t1.tokens(), t2.tokens(), _links(pair))
    return AlignedPair(t1, t2, u1, u2, pair.lang1, pair.lang2, pair.pair_id)


def _links(pair: AlignedPair):
    return [(i, j) for u in pair.units1 for p in [pair.units2[u.partner]]
            for i in range(u.start, u.end) for j in range(p.start, p.end)]


def prepare(pair: AlignedPair) -> AlignedPair:
    """Project TREE1 onto the TREE2 sentence and link the two trees.

    Only the yield of TREE2 is used; its bracketing is replaced by the
    projection so that the pair is congruent by construction.
    """
    result = project(pair.tree1, pair.units1, pair.units2)
    return attach_congruence(result, pair)
