"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's own dynamic
programming: machine weights are recomputed by exhaustive path
enumeration, so agreement is meaningful.
"""

import os
import random

import pytest

from treefst import fsa, treemodel
from treefst.semiring import ZERO
from treefst.symbols import BOUNDARY, PairAlphabet, PairSymbol, SymbolTable

DATA = os.path.join(os.path.dirname(__file__), "data")
PKG_DATA = os.path.join(os.path.dirname(__file__), os.pardir, "src", "treefst", "data")


def data_path(*parts: str) -> str:
    return os.path.join(DATA, *parts)


def pkg_data_path(*parts: str) -> str:
    return os.path.abspath(os.path.join(PKG_DATA, *parts))


# ---------------------------------------------------------------------------
# independent oracles


def brute_force_weight(m: fsa.Wfsa, s) -> float:
    """Weight by enumerating every accepting path, no merging."""
    if m.is_empty:
        return ZERO

    def walk(state, i):
        if i == len(s):
            w = m.finals.get(state)
            if w is not None:
                yield w
            return
        for arc in m.arcs_from(state):
            if arc.pair == s[i]:
                for rest in walk(arc.dst, i + 1):
                    yield arc.weight + rest

    weights = list(walk(m.initial, 0))
    return min(weights) if weights else ZERO


def brute_force_language(m: fsa.Wfsa, max_len: int) -> dict:
    """All (string, weight) pairs up to max_len by bounded path walks."""
    out = {}
    if m.is_empty:
        return out

    def walk(state, prefix):
        w = m.finals.get(state)
        if w is not None:
            total = sum(a.weight for a in prefix) + w
            key = tuple(a.pair for a in prefix)
            if key not in out or total < out[key]:
                out[key] = total
        if len(prefix) == max_len:
            return
        for arc in m.arcs_from(state):
            walk(arc.dst, prefix + [arc])

    walk(m.initial, [])
    return out


def random_machine(rng: random.Random, alphabet: PairAlphabet, num_states: int = 5,
                   num_arcs: int = 10, acyclic: bool = False,
                   weighted: bool = True) -> fsa.Wfsa:
    """A random trim-able machine; acyclic ones only have forward arcs."""
    arcs = []
    for _ in range(num_arcs):
        if acyclic:
            src = rng.randrange(num_states - 1)
            dst = rng.randrange(src + 1, num_states)
        else:
            src = rng.randrange(num_states)
            dst = rng.randrange(num_states)
        pair = rng.choice(alphabet.pairs)
        weight = round(rng.uniform(0, 3), 3) if weighted else 0.0
        arcs.append((src, pair, weight, dst))
    finals = {}
    for q in range(num_states):
        if rng.random() < 0.4:
            finals[q] = round(rng.uniform(0, 2), 3) if weighted else 0.0
    if not finals:
        finals[num_states - 1] = 0.0
    return fsa.Wfsa(alphabet, num_states, 0, arcs, finals)


# ---------------------------------------------------------------------------
# fixtures


@pytest.fixture(scope="session")
def ab_alphabet() -> PairAlphabet:
    """Two identity pairs plus one crossing rewrite: enough structure for
    machine-level properties."""
    table = SymbolTable([BOUNDARY, "a", "b", "u"])
    a, b, u = table.id("a"), table.id("b"), table.id("u")
    pairs = [PairSymbol(table.boundary, table.boundary),
             PairSymbol(a, a), PairSymbol(b, b), PairSymbol(a, u)]
    return PairAlphabet(table, pairs)


@pytest.fixture(scope="session")
def aa_forest() -> treemodel.Forest:
    return treemodel.load_forest(pkg_data_path("aa_fragment", "forest.trees"))


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run

_CRITERIA = {
    "test_criterion_1": "leaf weight table via interpret",
    "test_criterion_2": "compiled machines match the interpreter",
    "test_criterion_3": "rule machines match the positional oracle",
    "test_criterion_4": "semiring laws and intersection additivity",
    "test_criterion_5": "validation passes good forests, rejects broken",
    "test_criterion_6": "best path consistent with per-position argmin",
    "test_criterion_7": "decode demo returns verified best words",
    "test_criterion_8": "stats report shape and forest size bound",
    "test_criterion_9": "FST text format round-trip",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if status == "passed" and getattr(report, "when", None) != "call":
                continue
            name = report.nodeid.split("::")[-1]
            for key in _CRITERIA:
                if name.startswith(key):
                    results[key] = results.get(key, True) and status == "passed"
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k.rsplit("_", 1)[1])):
        if key in results:
            num = key.rsplit("_", 1)[1]
            verdict = "PASS" if results[key] else "FAIL"
            terminalreporter.write_line(f"criterion {num} ({_CRITERIA[key]}): {verdict}")
