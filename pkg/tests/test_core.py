import pytest
from hypothesis import given

from csgen.core import (CSSentence, GrammarRule, Lang, PairFormatError, check_congruence,
                        extract_rules, parse_pair_file, parse_tree, serialize_pair)
from csgen.projection import prepare

from .strategies import congruent_pair_texts

PAIR1 = """#L1: hi
#L2: en
TREE1: (S (NP (NNP Shanivar)) (VP (VBG neeras) (VBZ hai) (PP (NP (DT uss) (NN nazariye)) (IN se))))
TREE2: (S (NP (NNP Saturday)) (VP (VBZ is) (VBG boring) (PP (IN from) (NP (DT that) (NN perspective)))))
ALIGN: 0-0 1-2 2-1 3-4 4-5 5-3
"""


def test_parse_tree_spans_and_tokens():
    t = parse_tree("(S (NP (DT the) (NN dog)) (VP (VBZ barks)))")
    assert t.tokens() == ["the", "dog", "barks"]
    assert t.span == (0, 3)
    np_, vp = t.children
    assert np_.span == (0, 2) and vp.span == (2, 3)
    assert t.depth() == 2


@pytest.mark.parametrize("text", [
    "(S (NP (NN a))",
    "(S (NP (NN a))))",
    "(S ()",
    "()",
    "word",
    "",
    "(S (NP))",
])
def test_parse_tree_rejects_malformed(text):
    with pytest.raises(PairFormatError):
        parse_tree(text)


def test_pair1_units():
    pair = parse_pair_file(PAIR1)
    assert pair.lang1 == "hi" and pair.lang2 == "en"
    assert len(pair.units1) == len(pair.units2) == 6
    neeras = pair.units1[1]
    assert pair.partner(neeras).tokens == ("boring",)
    assert pair.partner(pair.partner(neeras)) == neeras


def test_identity_alignment():
    text = "TREE1: (S (A x) (B y))\nTREE2: (S (A x) (B y))\nALIGN: 0-0 1-1\n"
    pair = parse_pair_file(text)
    assert [u.partner for u in pair.units1] == [0, 1]


def test_crossing_alignment_accepted():
    pair = parse_pair_file(open_fixture("pair2"))
    chance = pair.units1[1]
    assert chance.tokens == ("chance",)
    assert pair.partner(chance).tokens == ("sambhavna",)
    assert pair.partner(chance).index == 6


def open_fixture(name):
    from csgen.fixtures import fixture_dir
    return (fixture_dir() / f"{name}.txt").read_text("utf-8")


def test_multiword_units_grouped():
    text = ("TREE1: (S (NP (NN time)) (VBP waste))\n"
            "TREE2: (S (NP (NN samay)) (VBP barbaad karte hain))\n"
            "ALIGN: 0-0 1-1 1-2 1-3\n")
    pair = parse_pair_file(text)
    assert pair.units2[1].tokens == ("barbaad", "karte", "hain")
    assert len(pair.units1) == 2


def test_null_unit_has_no_surface():
    pair = parse_pair_file(open_fixture("pair8"))
    kya = [u for u in pair.units2 if u.tokens == ("Kya",)][0]
    null = pair.partner(kya)
    assert null.is_null and null.surface == ()
    assert "-NULL-" not in pair.sentence(Lang.L1)


@pytest.mark.parametrize("align, fragment", [
    ("0-0 1-1 2-5", "out of range"),
    ("0-0 1-1", "unaligned TREE1"),
    ("0-0 0-2 1-1 2-1", "non-contiguous"),
])
def test_alignment_errors(align, fragment):
    text = f"TREE1: (S (A x) (B y) (C z))\nTREE2: (S (A p) (B q) (C r))\nALIGN: {align}\n"
    with pytest.raises(PairFormatError, match=fragment):
        parse_pair_file(text)


@pytest.mark.parametrize("text", [
    "TREE1: (S (A x))\nALIGN: 0-0\n",
    "TREE1: (S (A x))\nTREE2: (S (A y))\n",
    "TREE1: (S (A x))\nTREE2: (S (A y))\nALIGN: 0:0\n",
    "NOPE: what\n",
])
def test_pair_file_errors(text):
    with pytest.raises(PairFormatError):
        parse_pair_file(text)


def test_extract_rules_1e():
    rules = {str(r) for r in extract_rules(parse_pair_file(PAIR1).tree2)}
    assert {"S -> NP VP", "NP -> NNP", "VP -> VBZ VBG PP", "PP -> IN NP", "NP -> DT NN"} <= rules


def test_extract_rules_modified_2e(pair2):
    assert GrammarRule("NP", ("PRP", "NN", "IN", "NP", "PP")) in extract_rules(pair2.tree1)


def test_extract_rules_single_preterminal():
    assert extract_rules(parse_tree("(NN dog)")) == set()


def test_grammar_rule_needs_rhs():
    with pytest.raises(ValueError):
        GrammarRule("S", ())


def test_congruence_of_fixtures(fixtures):
    for name, pair in fixtures.items():
        report = check_congruence(pair)
        assert report.ok, (name, report.violations)


def test_congruence_reports_orphans():
    pair = parse_pair_file(PAIR1)
    report = check_congruence(pair)
    assert not report.ok
    assert any("orphan" in v for v in report.violations)


def test_switch_points(pair1):
    u = pair1.units1
    e = pair1.units2
    s = CSSentence((u[0], u[1], e[u[2].partner], u[3]))
    assert s.switch_points == (1, 2)
    assert s.languages == (Lang.L1, Lang.L1, Lang.L2, Lang.L1)


def test_lang_other():
    assert Lang.L1.other is Lang.L2 and Lang.L2.other is Lang.L1
    with pytest.raises(ValueError):
        Lang.X.other


@given(congruent_pair_texts())
def test_round_trip(text):
    pair = parse_pair_file(text)
    again = parse_pair_file(serialize_pair(pair))
    assert again.tree1.shape() == pair.tree1.shape()
    assert again.tree2.shape() == pair.tree2.shape()
    assert again.units1 == pair.units1 and again.units2 == pair.units2


@given(congruent_pair_texts())
def test_partner_map_is_involution(text):
    pair = parse_pair_file(text)
    for u in pair.units1 + pair.units2:
        assert pair.partner(pair.partner(u)) == u


@given(congruent_pair_texts())
def test_spans_and_rule_count(text):
    pair = prepare(parse_pair_file(text))
    for tree in (pair.tree1, pair.tree2):
        for n in tree.internal_nodes():
            spans = [c.span for c in n.children]
            assert spans[0][0] == n.span[0] and spans[-1][1] == n.span[1]
            assert all(a[1] == b[0] for a, b in zip(spans, spans[1:]))
        assert len(extract_rules(tree)) <= sum(1 for _ in tree.internal_nodes())
    assert check_congruence(pair).ok


def test_fixtures_round_trip(fixtures):
    for pair in fixtures.values():
        again = parse_pair_file(serialize_pair(pair))
        assert again.tree1.shape() == pair.tree1.shape()
        assert again.tree2.shape() == pair.tree2.shape()
