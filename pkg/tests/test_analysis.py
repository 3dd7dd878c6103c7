import pytest
from hypothesis import given, settings

from csgen.analysis import (EC_SLOT_LIMIT, REPORT_HEADER, brute_force, compare, report_row,
                            tree_stats)
from csgen.config import MLConfig
from csgen.core import parse_pair_file
from csgen.ec import generate_ec0
from csgen.ml import generate_ml0
from csgen.projection import prepare

from .strategies import configs, congruent_pairs


def test_compare_basic():
    c = compare(["a", "b", "c"], ["b", "c", "d"])
    assert c.common == {"b", "c"}
    assert c.only_a == {"a"} and c.only_b == {"d"}
    assert not c.a_subset_of_b
    assert compare(["b"], ["b", "c"]).a_subset_of_b


def test_compare_rejects_mixed_pairs(pair1, pair2):
    with pytest.raises(ValueError):
        compare(generate_ec0(pair1), generate_ec0(pair2))


@settings(max_examples=40)
@given(congruent_pairs(), configs())
def test_compare_invariants(pair, cfg):
    a, b = generate_ec0(pair), generate_ml0(pair, "l1", cfg)
    c = compare(a, b)
    ta, tb = {s.text for s in a}, {s.text for s in b}
    assert c.common | c.only_a == ta
    assert c.common | c.only_b == tb
    assert not (c.only_a & c.only_b)
    assert compare(b, a).only_a == c.only_b


def test_report_row_pair1(pair1, config):
    rep = report_row(pair1, config)
    assert rep.counts == {"ec0": 22, "ec1": 22, "ml0": 8, "ml1": 32, "ml2": 28}
    assert rep.intersections == {"ml0": 6, "ml1": 22, "ml2": 22}
    assert rep.row().split("\t")[5:] == ["22", "22", "8(6)", "32(22)", "28(22)"]
    assert rep.subsumed("ec1", "ml2")
    assert tree_stats(pair1) == (6, 11, 4, 3)


def test_report_header_columns():
    cols = REPORT_HEADER.splitlines()[0].lstrip("# ").split("\t")
    assert cols[:5] == ["pair", "length", "categories", "depth", "branching"]
    assert len(cols) == 10


def test_degenerate_one_word_pair():
    pair = prepare(parse_pair_file("TREE1: (S (NN a))\nTREE2: (S (NN b))\nALIGN: 0-0\n", "one"))
    rep = report_row(pair, MLConfig(substitutable=frozenset({"NN"})))
    length, _, depth, _ = tree_stats(pair)
    assert (length, depth) == (1, 1)
    # the lone word may switch even though the root may not
    assert set(rep.counts.values()) == {2}


def test_brute_force_limits(fixtures, config):
    pair5 = fixtures["pair5"]
    with pytest.raises(ValueError):
        brute_force(pair5, "ec0", config)
    with pytest.raises(ValueError):
        brute_force(fixtures["pair1"], "ec9", config)
    assert pair5.n_slots > EC_SLOT_LIMIT
