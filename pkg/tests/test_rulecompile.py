"""Rule extraction, the compiled product machines, verification, decode."""

import math
import random

import pytest

from treefst import fsa, fstio, rulecompile, testgen, treemodel
from treefst.errors import NoParseError, UnreachableLeafError
from treefst.rulecompile import (compile_forest, compile_report, compile_rule,
                                 compile_tree, decode, dictionary_closure,
                                 extract_rule, verify_forest)
from treefst.semiring import ZERO
from treefst.testgen import GenConfig, enumerate_pairs, oracle_rule_weight

from conftest import pkg_data_path


def toy_alphabet():
    return testgen.small_alphabet(2, 2)


def weights_equal(a, b, tol=1e-9):
    if a == ZERO or b == ZERO:
        return a == b
    return abs(a - b) <= tol


# ---------------------------------------------------------------------------
# rule extraction


def test_extract_rule_from_fragment(aa_forest):
    tree = aa_forest.tree_for["aa"]
    rule = extract_rule(tree, 4, aa_forest.alphabet)
    assert rule.phi == "aa"
    assert rule.leaf_id == 4
    assert len(rule.lam_parts) == 2
    assert set(rule.psi) == {"ao", "aa", "q+aa", "q+ao", "ah", "ax"}
    assert math.isclose(rule.psi["ao"], -math.log(0.385), rel_tol=1e-12)
    assert not rule.lam.is_empty
    assert not rule.rho.is_empty


def test_extract_rule_unreachable_leaf():
    files = {
        "s": "\n".join(f"{n} {i}" for i, n in enumerate(["#", "a", "b", "u"])) + "\n",
        "c": "SEG: a b\n",
    }
    text = '(symbols "s")\n(classes "c")\n' + """
(tree a
  (node 1
    (left  :lambda "# (a .*)" :rho "." 2)
    (right :lambda "# !(a .*)" :rho "." 5))
  (node 2
    (left  :lambda "# (b .*)" :rho "." 3)
    (right :lambda "# !(b .*)" :rho "." 4))
  (leaf 3 (u 1.0))
  (leaf 4 (u 1.0))
  (leaf 5 (u 1.0)))
"""
    forest = treemodel.parse_tree_file(text, loader=files.__getitem__)
    tree = forest.tree_for["a"]
    # leaf 3 needs a prefix starting with both a and b
    with pytest.raises(UnreachableLeafError):
        extract_rule(tree, 3, forest.alphabet)
    extract_rule(tree, 4, forest.alphabet)


# ---------------------------------------------------------------------------
# compiled rule machines


def test_compile_rule_matches_positional_oracle():
    alphabet = toy_alphabet()
    rng = random.Random(2024)
    for _ in range(10):
        rule = testgen.gen_rule(rng, alphabet)
        machine = compile_rule(rule, alphabet)
        for s in enumerate_pairs(alphabet, 4):
            got = fsa.weight_of(machine, s)
            want = oracle_rule_weight(rule, s, alphabet.table)
            assert weights_equal(got, want), (rule.phi, s)


def test_rule_machines_are_unambiguous():
    alphabet = toy_alphabet()
    rng = random.Random(55)
    for _ in range(8):
        rule = testgen.gen_rule(rng, alphabet)
        machine = compile_rule(rule, alphabet)
        for s in enumerate_pairs(alphabet, 3):
            assert fsa.count_accepting_paths(machine, s) <= 1


def test_tree_machine_is_unambiguous(aa_forest):
    machine = compile_tree(aa_forest.tree_for["aa"], aa_forest.alphabet)
    rng = random.Random(3)
    pairs = aa_forest.alphabet.pairs
    bp = aa_forest.alphabet.boundary_pair
    for _ in range(200):
        core = [rng.choice(pairs) for _ in range(rng.randint(0, 4))]
        assert fsa.count_accepting_paths(machine, [bp, *core, bp]) <= 1


def test_compile_tree_uses_one_intersection_per_extra_leaf(aa_forest, monkeypatch):
    calls = []
    real = fsa.intersect

    def counting(a, b):
        calls.append(1)
        return real(a, b)

    monkeypatch.setattr(fsa, "intersect", counting)
    tree = aa_forest.tree_for["aa"]
    compile_tree(tree, aa_forest.alphabet)
    assert len(calls) == tree.num_leaves - 1


def test_compile_order_invariant():
    forest = testgen.gen_forest(GenConfig(seed=3, num_input_symbols=2,
                                          outputs_per_symbol=2, max_depth=2))
    tree = forest.trees[0]
    machines = [compile_rule(extract_rule(tree, leaf, forest.alphabet), forest.alphabet)
                for leaf in sorted(tree.leaves)]
    fwd = machines[0]
    for m in machines[1:]:
        fwd = fsa.intersect(fwd, m)
    rev = machines[-1]
    for m in reversed(machines[:-1]):
        rev = fsa.intersect(rev, m)
    assert fsa.enumerate_strings(fwd, 4) == fsa.enumerate_strings(rev, 4)


def test_identity_distribution_compiles_to_free_pass():
    files = {"s": "# 0\na 1\nb 2\n", "c": "SEG: a b\n"}
    text = '(symbols "s")\n(classes "c")\n(tree a (leaf 1 (a 1.0)))'
    forest = treemodel.parse_tree_file(text, loader=files.__getitem__)
    machine = compile_forest(forest)
    want = fsa.universal(forest.alphabet)
    assert fsa.enumerate_strings(machine, 3) == fsa.enumerate_strings(want, 3)


def test_forest_machine_restricts_untreed_to_identity(aa_forest):
    machine = compile_forest(aa_forest)
    table = aa_forest.table
    restricted = fsa.apply_to_string(machine, ["t"])
    outs = {tuple(table.name(p.out) for p in s[1:-1])
            for s in fsa.enumerate_strings(restricted, 3)}
    assert outs == {("t",)}


# ---------------------------------------------------------------------------
# verification


def test_verify_fragment_clean(aa_forest):
    assert verify_forest(aa_forest, max_len=2) == []


def test_verify_catches_wrong_machine(aa_forest):
    wrong = fsa.universal(aa_forest.alphabet)
    mismatches = verify_forest(aa_forest, max_len=1, machine=wrong)
    assert mismatches
    m = mismatches[0]
    assert m.compiled != m.oracle
    assert len(m.word) == len(m.outputs)


# ---------------------------------------------------------------------------
# decode


def decode_toy(name):
    alphabet = fstio.read_alphabet(pkg_data_path("decode_toy"))
    return fstio.read_fst(pkg_data_path("decode_toy", name), alphabet)


def test_dictionary_closure_shapes():
    d = decode_toy("dict.fst")
    table = d.alphabet.table
    closure = dictionary_closure(d)
    strings = fsa.enumerate_strings(closure, 7)
    for s in strings:
        assert table.name(s[0].inp) == "#" and table.name(s[-1].inp) == "#"
    ins = {tuple(table.name(p.inp) for p in s) for s in strings}
    assert ("#", "word_az", "_", "#") in ins
    assert ("#", "word_si", "_", "#", "word_da", "_", "#") in ins
    assert ("#", "word_az", "#") not in ins


def test_decode_weighted_lattice_prefers_cheapest_chain():
    g = decode_toy("g.fst")
    d = decode_toy("dict.fst")
    a = decode_toy("lattice_weighted.fst")
    identity = compile_forest(treemodel.load_forest(pkg_data_path("decode_toy", "identity.trees")))
    words, weight = decode(g, d, identity, a)
    assert words == ("word_da",)
    assert math.isclose(weight, 2.0, abs_tol=1e-9)


def test_decode_empty_chain_raises():
    g = decode_toy("g.fst")
    d = decode_toy("dict.fst")
    alphabet = g.alphabet
    table = alphabet.table
    identity = compile_forest(treemodel.load_forest(pkg_data_path("decode_toy", "identity.trees")))
    # no dictionary word has a one-phone pronunciation
    lattice = fsa.output_restriction(alphabet, [table.id("iy")])
    with pytest.raises(NoParseError):
        decode(g, d, identity, lattice)


# ---------------------------------------------------------------------------
# reporting


def test_compile_report_rows(aa_forest):
    report = compile_report(aa_forest)
    assert [r.phone for r in report.rows] == ["aa"]
    row = report.rows[0]
    assert row.leaves == 3
    assert row.states == report.trees["aa"].num_states
    assert row.arcs == report.trees["aa"].num_arcs
    assert row.seconds >= 0.0
    assert report.forest.num_states > 0


def test_compile_report_empty_forest():
    forest = treemodel.load_forest(pkg_data_path("decode_toy", "identity.trees"))
    report = compile_report(forest)
    assert report.rows == []
    assert not report.forest.is_empty
