"""Generators: bounds, determinism, and the enumeration helpers."""

import math
import random

import pytest

from treefst import testgen, treemodel
from treefst.errors import EnumerationBudgetError, TreefstError
from treefst.semiring import ZERO
from treefst.symbols import PairSymbol
from treefst.testgen import (GenConfig, enumerate_pairs, gen_forest,
                             gen_forest_files, gen_rule, oracle_rule_weight,
                             small_alphabet)


def test_config_bounds_checked():
    with pytest.raises(TreefstError):
        GenConfig(num_input_symbols=5)
    with pytest.raises(TreefstError):
        GenConfig(outputs_per_symbol=0)
    with pytest.raises(TreefstError):
        GenConfig(max_depth=4)
    with pytest.raises(TreefstError):
        GenConfig(max_string_len=6)
    GenConfig()


def test_gen_forest_is_deterministic():
    cfg = GenConfig(seed=12)
    assert gen_forest_files(cfg) == gen_forest_files(cfg)
    f1, f2 = gen_forest(cfg), gen_forest(cfg)
    assert [t.phone for t in f1.trees] == [t.phone for t in f2.trees]


def test_gen_forest_varies_with_seed():
    files = {gen_forest_files(GenConfig(seed=s))["forest.trees"] for s in range(6)}
    assert len(files) > 1


def test_gen_forest_validates_clean():
    for seed in range(8):
        forest = gen_forest(GenConfig(seed=seed))
        assert treemodel.validate_forest(forest, max_len=3) == []


def test_gen_forest_depth_zero_gives_leaf_roots():
    forest = gen_forest(GenConfig(seed=4, max_depth=0))
    for tree in forest.trees:
        assert tree.num_leaves == 1
        assert not tree.nodes


def test_gen_forest_declares_segments():
    forest = gen_forest(GenConfig(seed=9, num_input_symbols=3))
    assert set(forest.segments()) == {"a", "b", "c"}


def test_small_alphabet_shape():
    alphabet = small_alphabet(2, 3)
    assert len(alphabet.non_boundary_pairs()) == 6
    names = {alphabet.table.name(p.inp) for p in alphabet.non_boundary_pairs()}
    assert names == {"a", "b"}


def test_enumerate_pairs_counts():
    alphabet = small_alphabet(2, 1)
    assert len(alphabet.non_boundary_pairs()) == 2
    strings = list(enumerate_pairs(alphabet, 2))
    assert len(strings) == 6
    bp = alphabet.boundary_pair
    for s in strings:
        assert s[0] == bp and s[-1] == bp
        assert 1 <= len(s) - 2 <= 2


def test_enumerate_pairs_budget():
    alphabet = small_alphabet(2, 3)
    with pytest.raises(EnumerationBudgetError, match="9330"):
        list(enumerate_pairs(alphabet, 5, budget=100))


def test_gen_rule_distributions_normalized():
    alphabet = small_alphabet(2, 3)
    rng = random.Random(0)
    for _ in range(10):
        rule = gen_rule(rng, alphabet)
        total = sum(math.exp(-w) for w in rule.psi.values())
        assert math.isclose(total, 1.0, rel_tol=1e-9)
        assert len(rule.lam_parts) == 1 and len(rule.rho_parts) == 1


def test_oracle_rule_weight_hand_case():
    alphabet = small_alphabet(2, 2)
    table = alphabet.table
    from treefst import fsa, regexes
    lam = regexes.parse_regex("#", table)
    rho = regexes.parse_regex(".*", table)
    ustar = fsa.universal(alphabet)
    rule = testgen.WeightedRule(
        phi="a", psi={"a1": 0.5},
        lam=fsa.concat(ustar, regexes.compile_regex(lam, alphabet)),
        rho=fsa.concat(regexes.compile_regex(rho, alphabet), ustar),
        lam_parts=(lam,), rho_parts=(rho,))
    h, a, a1 = table.id("#"), table.id("a"), table.id("a1")
    bp = PairSymbol(h, h)
    # the context matches only the word-initial position
    s = (bp, PairSymbol(a, a1), PairSymbol(a, a), bp)
    assert oracle_rule_weight(rule, s, table) == 0.5
    # word-initial output outside the support: rejected outright
    s = (bp, PairSymbol(a, a), PairSymbol(a, a1), bp)
    assert oracle_rule_weight(rule, s, table) == ZERO
    # no occurrence of the rule's input at the matched position
    b = table.id("b")
    s = (bp, PairSymbol(b, b), PairSymbol(a, a), bp)
    assert oracle_rule_weight(rule, s, table) == 0.0


def test_selftest_passes_and_reports(capsys):
    assert testgen.selftest(seed=1, cases=2)
    out = capsys.readouterr().out
    assert out.count("PASS") >= 5
    assert "FAIL" not in out
