"""Compiling decision trees to weighted machines.

One weighted rewrite rule is extracted per leaf: its left context is
the intersection of the suffix-normalized per-branch left contexts
along the root-to-leaf path, its right context the intersection of the
prefix-normalized right contexts, and its output distribution the
leaf's weights. Each rule compiles to an unambiguous weighted machine;
a tree is the intersection of its leaf machines, and a forest the
intersection of its tree machines plus an identity constraint for
symbols without a tree.

The rule machine is a product of a deterministic left-context matcher
and a co-deterministic right-context matcher (the determinized reversal
of rho U*, read backwards), so every accepted string has exactly one
path and path weight equals string weight.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from . import fsa, regexes, treemodel
from .errors import DegenerateForestError, NoParseError, UnreachableLeafError
from .fsa import Wfsa, intersect as _intersect
from .regexes import Regex
from .semiring import ZERO
from .symbols import BOUNDARY, PAD, PairAlphabet, PairSymbol
from .treemodel import DecisionTree, Forest


@dataclass
class WeightedRule:
    phi: str
    psi: dict[str, float]  # output symbol -> weight (-ln p)
    lam: Wfsa   # unweighted, suffix-normalized: U* λ
    rho: Wfsa   # unweighted, prefix-normalized: ρ U*
    lam_parts: tuple[Regex, ...] = field(default_factory=tuple)
    rho_parts: tuple[Regex, ...] = field(default_factory=tuple)
    leaf_id: int | None = None


def extract_rule(tree: DecisionTree, leaf_id: int, alphabet: PairAlphabet) -> WeightedRule:
    """Fold the partial contexts along the root-to-leaf path."""
    path = tree.path_to(leaf_id)
    ustar = fsa.universal(alphabet)
    lam, rho = ustar, ustar
    lam_parts, rho_parts = [], []
    for branch in path:
        lam = _intersect(lam, fsa.concat(ustar, regexes.compile_regex(branch.lam, alphabet)))
        rho = _intersect(rho, fsa.concat(regexes.compile_regex(branch.rho, alphabet), ustar))
        lam_parts.append(branch.lam)
        rho_parts.append(branch.rho)
    if lam.is_empty or rho.is_empty:
        raise UnreachableLeafError(
            f"tree {tree.phone!r} leaf {leaf_id}: intersected context is empty")
    leaf = tree.leaves[leaf_id]
    return WeightedRule(
        phi=tree.phone, psi=dict(leaf.weights), lam=lam, rho=rho,
        lam_parts=tuple(lam_parts), rho_parts=tuple(rho_parts), leaf_id=leaf_id,
    )


def compile_rule(rule: WeightedRule, alphabet: PairAlphabet) -> Wfsa:
    """Weighted machine for one rule over the declared inventory.

    Weight of a string: the sum of psi weights at positions whose input
    is phi and whose contexts satisfy (lam, rho); +infinity if any such
    position outputs outside psi's support. Everything else passes at
    weight zero. The result is unambiguous.
    """
    table = alphabet.table
    phi_id = table.id(rule.phi)
    psi_by_id = {table.id(name): w for name, w in rule.psi.items()}

    left = fsa.complete(fsa.determinize_unweighted(rule.lam))
    delta_left: dict[tuple[int, PairSymbol], int] = {}
    for src, arc in left.all_arcs():
        delta_left[(src, arc.pair)] = arc.dst
    left_flag = set(left.finals)

    rdfa = fsa.complete(fsa.determinize_unweighted(fsa.reverse(rule.rho)))
    rev_pre: dict[tuple[PairSymbol, int], list[int]] = {}
    for src, arc in rdfa.all_arcs():
        rev_pre.setdefault((arc.pair, arc.dst), []).append(src)
    right_flag = set(rdfa.finals)
    right_states = range(rdfa.num_states)

    def arc_weight(pair: PairSymbol, l_state: int, r_next: int) -> float | None:
        """None means the arc is forbidden (output outside support)."""
        if pair.inp == phi_id and l_state in left_flag and r_next in right_flag:
            return psi_by_id.get(pair.out)
        return 0.0

    index: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []

    def state_id(key: tuple[int, int]) -> int:
        sid = index.get(key)
        if sid is None:
            sid = index[key] = len(order) + 1  # 0 is the fresh initial
            order.append(key)
        return sid

    arcs: list[tuple[int, PairSymbol, float, int]] = []
    for pair in alphabet.pairs:
        l_next = delta_left[(left.initial, pair)]
        for r_next in right_states:
            w = arc_weight(pair, left.initial, r_next)
            if w is not None:
                arcs.append((0, pair, w, state_id((l_next, r_next))))
    i = 0
    while i < len(order):
        l_state, r_state = order[i]
        sid = i + 1
        i += 1
        for pair in alphabet.pairs:
            l_next = delta_left[(l_state, pair)]
            for r_next in rev_pre.get((pair, r_state), ()):
                w = arc_weight(pair, l_state, r_next)
                if w is not None:
                    arcs.append((sid, pair, w, state_id((l_next, r_next))))

    finals = {0: 0.0}
    for (l_state, r_state), sid in ((k, index[k]) for k in order):
        if r_state == rdfa.initial:
            finals[sid] = 0.0
    return fsa.trim(Wfsa(alphabet, len(order) + 1, 0, arcs, finals))


def compile_tree(tree: DecisionTree, alphabet: PairAlphabet) -> Wfsa:
    """Intersection of the rule machines of all leaves."""
    machines = [
        compile_rule(extract_rule(tree, leaf_id, alphabet), alphabet)
        for leaf_id in sorted(tree.leaves)
    ]
    out = machines[0]
    for m in machines[1:]:
        out = fsa.intersect(out, m)
    return out


def identity_constraint(forest: Forest) -> Wfsa:
    """One-state machine restricting symbols without a tree to identity."""
    al = forest.alphabet
    table = forest.table
    treed = {table.id(p) for p in forest.tree_for}
    allowed = [p for p in al.pairs if p.inp in treed or p.inp == p.out]
    return fsa.universal(al, allowed)


def compile_forest(forest: Forest) -> Wfsa:
    """Intersection of all tree machines and the identity constraint."""
    out = identity_constraint(forest)
    for tree in forest.trees:
        out = fsa.intersect(out, compile_tree(tree, forest.alphabet))
    if out.is_empty:
        raise DegenerateForestError("forest machine accepts nothing")
    return out


# ---------------------------------------------------------------------------
# verification against the interpreter


class Mismatch(NamedTuple):
    word: tuple[str, ...]
    outputs: tuple[str, ...]
    compiled: float
    oracle: float


def _output_choices(forest: Forest, word: Sequence[str]) -> list[list[str]]:
    table = forest.table
    return [
        [table.name(p.out) for p in forest.alphabet.pairs_for_input(table.id(sym))]
        for sym in word
    ]


def verify_forest(forest: Forest, max_len: int, machine: Wfsa | None = None,
                  tolerance: float = 1e-9, max_mismatches: int = 10) -> list[Mismatch]:
    """Exhaustive oracle-vs-compiled comparison over every (word, outputs)
    pair up to max_len input symbols. Empty result means agreement."""
    if machine is None:
        machine = compile_forest(forest)
    table = forest.table
    boundary_pair = forest.alphabet.boundary_pair
    mismatches: list[Mismatch] = []
    for word in treemodel.phonotactic_words(forest, max_len):
        dists = treemodel.interpret_forest(forest, word)
        ids = [table.id(s) for s in word]
        restricted = fsa.apply_to_string(machine, list(word))
        choices = _output_choices(forest, word)

        def rec(i: int, outs: list[str], oracle_sum: float):
            if i == len(word):
                pairs = [boundary_pair] + [
                    PairSymbol(ids[k], table.id(outs[k])) for k in range(len(word))
                ] + [boundary_pair]
                compiled = fsa.weight_of(restricted, pairs)
                ok = (compiled == oracle_sum if ZERO in (compiled, oracle_sum)
                      else abs(compiled - oracle_sum) <= tolerance)
                if not ok:
                    mismatches.append(Mismatch(tuple(word), tuple(outs), compiled, oracle_sum))
                return
            for out in choices[i]:
                if len(mismatches) >= max_mismatches:
                    return
                rec(i + 1, outs + [out], oracle_sum + dists[i].get(out, ZERO))

        rec(0, [], 0.0)
        if len(mismatches) >= max_mismatches:
            break
    return mismatches


# ---------------------------------------------------------------------------
# decoding: BestPath(G . D* . Phi . A)


def dictionary_closure(d: Wfsa) -> Wfsa:
    """Boundary-wrapped transitive closure of the dictionary: one or more
    word blocks, each followed by a boundary."""
    bp = fsa.single_string(d.alphabet, [d.alphabet.boundary_pair])
    return fsa.concat(bp, fsa.plus(fsa.concat(d, bp)))


def decode(g: Wfsa, d: Wfsa, phi: Wfsa, a: Wfsa) -> tuple[tuple[str, ...], float]:
    """Best word string and weight of the composition chain.

    The grammar reads the padded word track (one word symbol, then pad
    symbols, one per extra phoneme), the dictionary maps that track to
    phoneme strings, phi maps phonemes to phones, and the lattice scores
    phone strings. All machines are same-length; the word string is
    recovered from the input side by dropping pads and boundaries.
    """
    chain = fsa.compose(fsa.compose(fsa.compose(g, dictionary_closure(d)), phi), a)
    if chain.is_empty:
        raise NoParseError("composition is empty: the lattice has no parse")
    (pairs, weight), = fsa.shortest_path(chain, 1)
    table = chain.alphabet.table
    words = tuple(
        table.name(p.inp) for p in pairs
        if table.name(p.inp) not in (BOUNDARY, PAD)
    )
    return words, weight


# ---------------------------------------------------------------------------
# compile report


@dataclass
class ReportRow:
    phone: str
    leaves: int
    states: int
    arcs: int
    seconds: float


class CompiledForest(NamedTuple):
    rows: list[ReportRow]
    trees: dict[str, Wfsa]
    forest: Wfsa


def compile_report(forest: Forest) -> CompiledForest:
    """Compile every tree, timing each, then the full forest machine."""
    rows = []
    trees = {}
    for tree in forest.trees:
        t0 = time.perf_counter()
        m = compile_tree(tree, forest.alphabet)
        dt = time.perf_counter() - t0
        trees[tree.phone] = m
        rows.append(ReportRow(tree.phone, tree.num_leaves, m.num_states, m.num_arcs, dt))
    out = identity_constraint(forest)
    for tree in forest.trees:
        out = fsa.intersect(out, trees[tree.phone])
    if out.is_empty:
        raise DegenerateForestError("forest machine accepts nothing")
    return CompiledForest(rows, trees, out)
