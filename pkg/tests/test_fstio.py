"""Text formats: weights, machines, and alphabet sidecars."""

import random

import pytest

from treefst import fsa, fstio
from treefst.errors import TreefstError
from treefst.symbols import (PairAlphabet, PairSymbol, SymbolTable,
                             format_symbols, parse_symbols)

from conftest import random_machine


@pytest.mark.parametrize("w", [
    0.0, 1.0, 0.9545, 2.19, 1 / 3, 0.1 + 0.2, 1e-20, 12345.678901234567,
    float.fromhex("0x1.e8a9eb4b9a76ap-1"),
])
def test_weight_text_round_trips_exactly(w):
    assert float(fstio.format_weight(w)) == w


def test_weight_prefers_fixed_six_decimals():
    assert fstio.format_weight(0.0) == "0.000000"
    assert fstio.format_weight(2.0) == "2.000000"
    assert fstio.format_weight(0.5) == "0.500000"


def test_machine_round_trip_preserves_language(ab_alphabet):
    rng = random.Random(19)
    for _ in range(25):
        m = fsa.trim(random_machine(rng, ab_alphabet, num_states=5, num_arcs=10))
        if m.is_empty:
            continue
        text = fstio.format_fst(m)
        back = fstio.parse_fst(text, ab_alphabet)
        assert fsa.stats(back) == fsa.stats(m)
        assert fsa.enumerate_strings(back, 4) == fsa.enumerate_strings(m, 4)


def test_format_is_stable_under_round_trip(ab_alphabet):
    rng = random.Random(29)
    m = fsa.trim(random_machine(rng, ab_alphabet, num_states=5, num_arcs=12))
    text = fstio.format_fst(m)
    assert fstio.format_fst(fstio.parse_fst(text, ab_alphabet)) == text


def test_first_line_names_the_initial_state(ab_alphabet):
    p = ab_alphabet.pairs[1]
    m = fsa.single_string(ab_alphabet, [p], weight=0.5)
    first = fstio.format_fst(m).splitlines()[0]
    assert first.split()[0] == "0"
    # single accepting state, no arcs: the final line must lead
    eps = fsa.epsilon_machine(ab_alphabet)
    assert fstio.format_fst(eps).splitlines() == ["0 0.000000"]


def test_parse_reports_line_numbers(ab_alphabet):
    with pytest.raises(TreefstError, match="line 1"):
        fstio.parse_fst("0 1 a\n", ab_alphabet)
    with pytest.raises(TreefstError, match="line 2"):
        fstio.parse_fst("0 1 a a 0.5\n0 1 zz a 0.5\n", ab_alphabet)


def test_parse_rejects_undeclared_pair(ab_alphabet):
    # (b:u) is not in the inventory
    with pytest.raises(TreefstError):
        fstio.parse_fst("0 1 b u 0.0\n1 0.0\n", ab_alphabet)


def test_alphabet_round_trip(tmp_path, ab_alphabet):
    fstio.write_alphabet(str(tmp_path), ab_alphabet)
    assert (tmp_path / "symbols.txt").exists()
    assert (tmp_path / "pairs.txt").exists()
    back = fstio.read_alphabet(str(tmp_path))
    assert back == ab_alphabet


def test_alphabet_round_trip_with_classes(tmp_path):
    table = SymbolTable(["#", "a", "b"], {"SEG": ["a", "b"]})
    al = PairAlphabet(table, [PairSymbol(0, 0), PairSymbol(1, 1), PairSymbol(2, 2)])
    fstio.write_alphabet(str(tmp_path), al)
    assert (tmp_path / "classes.txt").exists()
    back = fstio.read_alphabet(str(tmp_path))
    assert back.table.members("SEG") == frozenset({"a", "b"})


def test_write_read_fst_files(tmp_path, ab_alphabet):
    m = fsa.universal(ab_alphabet)
    path = tmp_path / "m.fst"
    fstio.write_fst(m, str(path))
    back = fstio.read_fst(str(path), ab_alphabet)
    assert fsa.enumerate_strings(back, 2) == fsa.enumerate_strings(m, 2)


def test_symbol_table_text_round_trip():
    table = SymbolTable(["#", "'", "aa", "q+aa"])
    assert parse_symbols(format_symbols(table)) == table
