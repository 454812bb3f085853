"""Seeded random forests and rules, plus a machine-free rule oracle.

Generated forests are valid by construction: every internal node splits
on a single anchored predicate (the word prefix for a lambda split, the
word suffix for a rho split), with the right branch carrying the exact
complement. Leaves that end up with an unsatisfiable context are dealt
with by resampling the whole forest.

The rule oracle scans a pair string position by position with the
derivative matcher and never builds an automaton, so it shares no code
with the compiler it checks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import fsa, matcher, regexes, rulecompile, treemodel
from .errors import EnumerationBudgetError, TreefstError, UnreachableLeafError
from .regexes import parse_regex
from .rulecompile import WeightedRule
from .semiring import ZERO, from_probability
from .symbols import (BOUNDARY, PairAlphabet, PairSymbol, SymbolTable,
                      format_classes, format_symbols)
from .treemodel import Forest

_INPUT_NAMES = ("a", "b", "c", "d")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    num_input_symbols: int = 3
    outputs_per_symbol: int = 2
    max_depth: int = 2
    max_string_len: int = 4

    def __post_init__(self):
        checks = [
            ("num_input_symbols", self.num_input_symbols, 1, len(_INPUT_NAMES)),
            ("outputs_per_symbol", self.outputs_per_symbol, 1, 3),
            ("max_depth", self.max_depth, 0, 3),
            ("max_string_len", self.max_string_len, 1, 5),
        ]
        for field, value, lo, hi in checks:
            if not lo <= value <= hi:
                raise TreefstError(f"{field} must be in {lo}..{hi}, got {value}")


def _output_pool(name: str, k: int) -> tuple[str, ...]:
    return (name, name + "1", name + "2")[:k]


def small_alphabet(num_inputs: int = 2, outputs_per_symbol: int = 3) -> PairAlphabet:
    """Fixed tiny inventory for rule-level testing: num_inputs segments,
    each rewritable to outputs_per_symbol variants."""
    inputs = _INPUT_NAMES[:num_inputs]
    symbols = [BOUNDARY, *inputs]
    for s in inputs:
        for o in _output_pool(s, outputs_per_symbol):
            if o not in symbols:
                symbols.append(o)
    table = SymbolTable(symbols, {"SEG": inputs})
    pairs = [PairSymbol(table.boundary, table.boundary)]
    for s in inputs:
        sid = table.id(s)
        pairs.extend(PairSymbol(sid, table.id(o)) for o in _output_pool(s, outputs_per_symbol))
    return PairAlphabet(table, pairs)


# ---------------------------------------------------------------------------
# forest generation


def _rand_pred(rng: random.Random, segs: Sequence[str]) -> str:
    """A predicate over segment strings, as regex text."""

    def atom() -> str:
        if len(segs) > 1 and rng.random() < 0.35:
            members = rng.sample(segs, rng.randint(1, len(segs) - 1))
            return "[" + " ".join(members) + "]"
        return rng.choice(segs)

    kind = rng.randrange(5)
    if kind == 0:
        return f"{atom()} .*"
    if kind == 1:
        return f".* {atom()}"
    if kind == 2:
        return f".* {atom()} .*"
    if kind == 3:
        return ". .*"
    return f"{atom()} {atom()} .*"


def _gen_tree_text(rng: random.Random, phone: str, segs: Sequence[str],
                   pool: Sequence[str], max_depth: int) -> str:
    nodes: list[str] = []
    leaves: list[str] = []
    counter = itertools.count(1)

    def leaf_def() -> int:
        lid = next(counter)
        outs = rng.sample(list(pool), rng.randint(1, len(pool)))
        raw = [rng.uniform(0.1, 1.0) for _ in outs]
        total = sum(raw)
        dist = " ".join(f"({o} {w / total!r})" for o, w in zip(outs, raw))
        leaves.append(f"  (leaf {lid} {dist})")
        return lid

    def node_def(depth: int) -> int:
        if depth >= max_depth or (depth > 0 and rng.random() < 0.3):
            return leaf_def()
        nid = next(counter)
        pred = _rand_pred(rng, segs)
        if rng.random() < 0.5:
            lspec = f'(left :lambda "# ({pred})" :rho "."'
            rspec = f'(right :lambda "# !({pred})" :rho "."'
        else:
            lspec = f'(left :lambda "." :rho "({pred}) #"'
            rspec = f'(right :lambda "." :rho "!({pred}) #"'
        lchild = node_def(depth + 1)
        rchild = node_def(depth + 1)
        nodes.append(f"  (node {nid}\n    {lspec} {lchild})\n    {rspec} {rchild}))")
        return nid

    node_def(0)
    body = "\n".join(nodes + leaves)
    return f"(tree {phone}\n{body})"


def gen_forest_files(config: GenConfig) -> dict[str, str]:
    """Tree, symbol, and class files for a random valid forest. Resamples
    until every leaf's intersected context is satisfiable."""
    rng = random.Random(config.seed)
    last_error: UnreachableLeafError | None = None
    for _ in range(50):
        inputs = list(_INPUT_NAMES[:config.num_input_symbols])
        treed = rng.sample(inputs, rng.randint(1, len(inputs)))
        pools = {s: _output_pool(s, config.outputs_per_symbol) for s in treed}
        symbols = [BOUNDARY, *inputs]
        for s in treed:
            symbols.extend(o for o in pools[s] if o not in symbols)
        table = SymbolTable(symbols, {"SEG": inputs})
        trees = "\n\n".join(
            _gen_tree_text(rng, s, inputs, pools[s], config.max_depth) for s in treed)
        files = {
            "symbols.txt": format_symbols(table),
            "classes.txt": format_classes(table),
            "forest.trees": '(symbols "symbols.txt")\n(classes "classes.txt")\n\n' + trees + "\n",
        }
        forest = treemodel.parse_tree_file(files["forest.trees"], loader=files.__getitem__)
        try:
            for tree in forest.trees:
                for leaf_id in tree.leaves:
                    rulecompile.extract_rule(tree, leaf_id, forest.alphabet)
        except UnreachableLeafError as e:
            last_error = e
            continue
        return files
    raise TreefstError(f"no satisfiable forest after 50 attempts: {last_error}")


def gen_forest(config: GenConfig) -> Forest:
    files = gen_forest_files(config)
    return treemodel.parse_tree_file(files["forest.trees"], loader=files.__getitem__)


# ---------------------------------------------------------------------------
# rule generation and the positional oracle


def _rand_context(rng: random.Random, names: Sequence[str], depth: int = 2) -> str:
    r = rng.random()
    if depth == 0 or r < 0.4:
        c = rng.randrange(6)
        if c == 0:
            return "."
        if c == 1:
            return "#"
        if c == 2 and len(names) > 1:
            return "[" + " ".join(rng.sample(names, 2)) + "]"
        return rng.choice(names)
    if r < 0.6:
        return f"({_rand_context(rng, names, depth - 1)}){rng.choice('*+?')}"
    if r < 0.7:
        return f"!({_rand_context(rng, names, depth - 1)})"
    a = _rand_context(rng, names, depth - 1)
    b = _rand_context(rng, names, depth - 1)
    op = rng.choice([" ", " | ", " & "])
    return f"({a}){op}({b})"


def gen_rule(rng: random.Random, alphabet: PairAlphabet) -> WeightedRule:
    """One random weighted rewrite rule over the given inventory."""
    table = alphabet.table
    phis = sorted({table.name(p.inp) for p in alphabet.pairs
                   if table.name(p.inp) != BOUNDARY})
    names = phis
    ustar = fsa.universal(alphabet)
    rule = None
    for _ in range(20):
        phi = rng.choice(phis)
        outs = [table.name(p.out) for p in alphabet.pairs_for_input(table.id(phi))]
        support = rng.sample(outs, rng.randint(1, len(outs)))
        raw = [rng.uniform(0.1, 1.0) for _ in support]
        psi = {o: from_probability(w / sum(raw)) for o, w in zip(support, raw)}
        lam_ast = parse_regex(_rand_context(rng, names), table)
        rho_ast = parse_regex(_rand_context(rng, names), table)
        lam = fsa.concat(ustar, regexes.compile_regex(lam_ast, alphabet))
        rho = fsa.concat(regexes.compile_regex(rho_ast, alphabet), ustar)
        rule = WeightedRule(phi, psi, lam, rho, (lam_ast,), (rho_ast,), None)
        if not lam.is_empty and not rho.is_empty:
            break
    assert rule is not None
    return rule


def oracle_rule_weight(rule: WeightedRule, pairs: Sequence[PairSymbol],
                       table: SymbolTable) -> float:
    """Weight the rule machine must assign to a boundary-wrapped pair
    string, computed by per-position derivative matching."""
    cms = [matcher.ContextMatcher(l, r, table)
           for l, r in zip(rule.lam_parts, rule.rho_parts)]
    phi_id = table.id(rule.phi)
    psi_by_id = {table.id(n): w for n, w in rule.psi.items()}
    ins = [p.inp for p in pairs]
    total = 0.0
    for i, p in enumerate(pairs):
        if p.inp != phi_id:
            continue
        if all(cm.left_ok(ins[:i]) and cm.right_ok(ins[i + 1:]) for cm in cms):
            w = psi_by_id.get(p.out)
            if w is None:
                return ZERO
            total += w
    return total


def enumerate_pairs(alphabet: PairAlphabet, max_len: int,
                    budget: int = 10 ** 6) -> Iterator[tuple[PairSymbol, ...]]:
    """Every boundary-wrapped pair string with 1..max_len interior pairs."""
    core = list(alphabet.non_boundary_pairs())
    n = len(core)
    total = sum(n ** k for k in range(1, max_len + 1))
    if total > budget:
        raise EnumerationBudgetError(
            f"enumeration would yield {total} strings, over the budget of {budget}")
    bp = alphabet.boundary_pair
    for k in range(1, max_len + 1):
        for combo in itertools.product(core, repeat=k):
            yield (bp, *combo, bp)


# ---------------------------------------------------------------------------
# self-test driver


def _weights_agree(a: float, b: float, tolerance: float = 1e-9) -> bool:
    if a == ZERO or b == ZERO:
        return a == b
    return abs(a - b) <= tolerance


def selftest(seed: int = 0, cases: int = 5, out=print) -> bool:
    """Random forests through the full verify pipeline plus random rules
    against the positional oracle. Prints one line per case."""
    all_ok = True
    for i in range(cases):
        config = GenConfig(
            seed=seed + i,
            num_input_symbols=2 + i % 3,
            outputs_per_symbol=1 + i % 3,
            max_depth=1 + i % 3,
            max_string_len=3,
        )
        forest = gen_forest(config)
        issues = treemodel.validate_forest(forest, max_len=3)
        mismatches = rulecompile.verify_forest(forest, max_len=config.max_string_len)
        ok = not issues and not mismatches
        all_ok &= ok
        out(f"forest seed={config.seed}: {'PASS' if ok else 'FAIL'} "
            f"({len(issues)} validation issues, {len(mismatches)} weight mismatches)")

    alphabet = small_alphabet(2, 3)
    rng = random.Random(seed)
    for i in range(cases):
        rule = gen_rule(rng, alphabet)
        machine = rulecompile.compile_rule(rule, alphabet)
        bad = sum(
            not _weights_agree(fsa.weight_of(machine, s),
                               oracle_rule_weight(rule, s, alphabet.table))
            for s in enumerate_pairs(alphabet, 3))
        all_ok &= bad == 0
        out(f"rule {i} (phi={rule.phi}): {'PASS' if bad == 0 else 'FAIL'} "
            f"({bad} weight mismatches)")
    out("selftest: " + ("PASS" if all_ok else "FAIL"))
    return all_ok
