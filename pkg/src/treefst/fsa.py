"""Weighted finite-state acceptors over a declared pair alphabet.

Machines are epsilon-free acceptors over PairSymbols, which makes every
machine a length-preserving transducer and keeps intersection a plain
product construction. Weights live in the tropical semiring: the weight
of a string is the minimum over accepting paths of the sum of arc
weights plus the final weight. Machines are immutable after
construction; every operation returns a new machine.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    AlphabetMismatchError,
    EnumerationBudgetError,
    RequiresDeterministicError,
    RequiresUnweightedError,
    TreefstError,
    UnknownSymbolError,
)
from .semiring import ONE, ZERO, check_weight
from .symbols import BOUNDARY, PairAlphabet, PairSymbol

PairString = tuple[PairSymbol, ...]


class Arc(NamedTuple):
    pair: PairSymbol
    weight: float
    dst: int


class Wfsa:
    """Immutable weighted acceptor: dense states, one initial, weighted finals.

    The canonical empty machine has zero states and ``initial is None``.
    Parallel arcs with equal (src, pair, dst) are merged to their minimum
    weight at construction; arcs or finals with weight +inf are dropped.
    """

    __slots__ = ("alphabet", "num_states", "initial", "finals", "_out", "_by_pair")

    def __init__(
        self,
        alphabet: PairAlphabet,
        num_states: int,
        initial: int | None,
        arcs: Iterable[tuple[int, PairSymbol, float, int]],
        finals: dict[int, float],
    ):
        self.alphabet = alphabet
        self.num_states = num_states
        if num_states == 0:
            if initial is not None:
                raise TreefstError("empty machine cannot have an initial state")
            self.initial = None
            self.finals: dict[int, float] = {}
            self._out: tuple[tuple[Arc, ...], ...] = ()
            self._by_pair = None
            return
        if initial is None or not 0 <= initial < num_states:
            raise TreefstError(f"initial state out of range: {initial}")
        self.initial = initial
        merged: list[dict[tuple[PairSymbol, int], float]] = [dict() for _ in range(num_states)]
        for src, pair, weight, dst in arcs:
            pair = PairSymbol(*pair)
            if pair not in alphabet:
                raise TreefstError(f"arc pair not in alphabet: {alphabet.pair_name(pair)}")
            if not (0 <= src < num_states and 0 <= dst < num_states):
                raise TreefstError(f"arc endpoint out of range: {src}->{dst}")
            check_weight(weight)
            if weight == ZERO:
                continue
            key = (pair, dst)
            prev = merged[src].get(key)
            if prev is None or weight < prev:
                merged[src][key] = weight
        self._out = tuple(
            tuple(Arc(pair, w, dst) for (pair, dst), w in sorted(state.items()))
            for state in merged
        )
        fin: dict[int, float] = {}
        for q, w in finals.items():
            if not 0 <= q < num_states:
                raise TreefstError(f"final state out of range: {q}")
            check_weight(w)
            if w != ZERO:
                fin[q] = w
        self.finals = fin
        self._by_pair = None

    @property
    def is_empty(self) -> bool:
        return self.num_states == 0

    @property
    def num_arcs(self) -> int:
        return sum(len(out) for out in self._out)

    def arcs_from(self, state: int) -> tuple[Arc, ...]:
        return self._out[state]

    def all_arcs(self):
        for src, out in enumerate(self._out):
            for arc in out:
                yield src, arc

    def arcs_by_pair(self, state: int) -> dict[PairSymbol, tuple[Arc, ...]]:
        if self._by_pair is None:
            by_pair = []
            for out in self._out:
                d: dict[PairSymbol, list[Arc]] = {}
                for arc in out:
                    d.setdefault(arc.pair, []).append(arc)
                by_pair.append({p: tuple(a) for p, a in d.items()})
            self._by_pair = tuple(by_pair)
        return self._by_pair[state]

    def __repr__(self):
        return f"<Wfsa states={self.num_states} arcs={self.num_arcs} finals={len(self.finals)}>"


# ---------------------------------------------------------------------------
# basic constructors


def empty_machine(alphabet: PairAlphabet) -> Wfsa:
    """The machine accepting nothing."""
    return Wfsa(alphabet, 0, None, (), {})


def epsilon_machine(alphabet: PairAlphabet, weight: float = ONE) -> Wfsa:
    """The machine accepting exactly the empty string."""
    return Wfsa(alphabet, 1, 0, (), {0: weight})


def universal(alphabet: PairAlphabet, pairs: Iterable[PairSymbol] | None = None) -> Wfsa:
    """One-state closure over the given pairs (default: the whole inventory)."""
    loop = alphabet.pairs if pairs is None else tuple(pairs)
    return Wfsa(alphabet, 1, 0, [(0, p, ONE, 0) for p in loop], {0: ONE})


def single_string(alphabet: PairAlphabet, pairs: Sequence[PairSymbol], weight: float = ONE) -> Wfsa:
    """Linear machine accepting exactly one pair-string at the given weight."""
    arcs = [(i, p, ONE, i + 1) for i, p in enumerate(pairs)]
    return Wfsa(alphabet, len(pairs) + 1, 0, arcs, {len(pairs): weight})


def pair_set_machine(alphabet: PairAlphabet, pairs: Iterable[PairSymbol]) -> Wfsa:
    """Two-state machine accepting any single pair from the given set."""
    arcs = [(0, p, ONE, 1) for p in pairs]
    return Wfsa(alphabet, 2, 0, arcs, {1: ONE})


# ---------------------------------------------------------------------------
# structural predicates and evaluation


def is_unweighted(a: Wfsa) -> bool:
    return all(arc.weight == ONE for _, arc in a.all_arcs()) and all(
        w == ONE for w in a.finals.values()
    )


def is_deterministic(a: Wfsa) -> bool:
    for q in range(a.num_states):
        seen = set()
        for arc in a.arcs_from(q):
            if arc.pair in seen:
                return False
            seen.add(arc.pair)
    return True


def weight_of(a: Wfsa, s: Sequence[PairSymbol]) -> float:
    """Tropical weight the machine assigns to a pair-string (+inf if rejected)."""
    if a.is_empty:
        return ZERO
    front = {a.initial: 0.0}
    for pair in s:
        nxt: dict[int, float] = {}
        for q, w in front.items():
            for arc in a.arcs_by_pair(q).get(PairSymbol(*pair), ()):
                nw = w + arc.weight
                if nw < nxt.get(arc.dst, ZERO):
                    nxt[arc.dst] = nw
        if not nxt:
            return ZERO
        front = nxt
    return min((w + a.finals[q] for q, w in front.items() if q in a.finals), default=ZERO)


def accepts(a: Wfsa, s: Sequence[PairSymbol]) -> bool:
    return weight_of(a, s) != ZERO


def count_accepting_paths(a: Wfsa, s: Sequence[PairSymbol]) -> int:
    """Number of distinct accepting paths for a string (ambiguity probe)."""
    if a.is_empty:
        return 0
    front = {a.initial: 1}
    for pair in s:
        nxt: dict[int, int] = {}
        for q, count in front.items():
            for arc in a.arcs_by_pair(q).get(PairSymbol(*pair), ()):
                nxt[arc.dst] = nxt.get(arc.dst, 0) + count
        if not nxt:
            return 0
        front = nxt
    return sum(c for q, c in front.items() if q in a.finals)


def enumerate_strings(a: Wfsa, max_len: int, budget: int = 10**6) -> dict[PairString, float]:
    """All accepted pair-strings of length <= max_len with their weights."""
    out: dict[PairString, float] = {}
    if a.is_empty:
        return out
    layer: dict[PairString, dict[int, float]] = {(): {a.initial: 0.0}}
    for length in range(max_len + 1):
        for s, front in layer.items():
            w = min((wq + a.finals[q] for q, wq in front.items() if q in a.finals), default=ZERO)
            if w != ZERO:
                out[s] = w
        if length == max_len:
            break
        nxt: dict[PairString, dict[int, float]] = {}
        for s, front in layer.items():
            for q, wq in front.items():
                for arc in a.arcs_from(q):
                    key = s + (arc.pair,)
                    tgt = nxt.setdefault(key, {})
                    nw = wq + arc.weight
                    if nw < tgt.get(arc.dst, ZERO):
                        tgt[arc.dst] = nw
        if sum(len(f) for f in nxt.values()) > budget:
            raise EnumerationBudgetError(f"enumeration exceeds budget at length {length + 1}")
        layer = nxt
    return out


def stats(a: Wfsa) -> tuple[int, int]:
    """(num_states, num_arcs) of the trimmed machine."""
    t = trim(a)
    return t.num_states, t.num_arcs


# ---------------------------------------------------------------------------
# trim


def trim(a: Wfsa) -> Wfsa:
    """Drop states that are not both accessible and co-accessible.

    States are renumbered in BFS order from the initial state, which
    makes trimmed machines canonical enough for golden files.
    """
    if a.is_empty:
        return a
    forward = {a.initial}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        for arc in a.arcs_from(q):
            if arc.dst not in forward:
                forward.add(arc.dst)
                queue.append(arc.dst)
    rev: dict[int, set[int]] = {}
    for src, arc in a.all_arcs():
        rev.setdefault(arc.dst, set()).add(src)
    backward = set(a.finals)
    queue = deque(backward)
    while queue:
        q = queue.popleft()
        for src in rev.get(q, ()):
            if src not in backward:
                backward.add(src)
                queue.append(src)
    keep = forward & backward
    if a.initial not in keep:
        return empty_machine(a.alphabet)
    order: dict[int, int] = {a.initial: 0}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        for arc in a.arcs_from(q):
            if arc.dst in keep and arc.dst not in order:
                order[arc.dst] = len(order)
                queue.append(arc.dst)
    arcs = [
        (order[src], arc.pair, arc.weight, order[arc.dst])
        for src, arc in a.all_arcs()
        if src in order and arc.dst in order
    ]
    finals = {order[q]: w for q, w in a.finals.items() if q in order}
    return Wfsa(a.alphabet, len(order), 0, arcs, finals)


# ---------------------------------------------------------------------------
# binary operations


def _check_same_alphabet(a: Wfsa, b: Wfsa) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError("machines do not share a pair inventory")


def intersect(a: Wfsa, b: Wfsa) -> Wfsa:
    """Weighted intersection: assigns every string a(s) + b(s) (tropical product)."""
    _check_same_alphabet(a, b)
    if a.is_empty or b.is_empty:
        return empty_machine(a.alphabet)
    start = (a.initial, b.initial)
    index = {start: 0}
    queue = deque([start])
    arcs = []
    finals = {}
    while queue:
        qa, qb = pair_state = queue.popleft()
        sid = index[pair_state]
        if qa in a.finals and qb in b.finals:
            finals[sid] = a.finals[qa] + b.finals[qb]
        b_by_pair = b.arcs_by_pair(qb)
        for arc_a in a.arcs_from(qa):
            for arc_b in b_by_pair.get(arc_a.pair, ()):
                tgt = (arc_a.dst, arc_b.dst)
                tid = index.get(tgt)
                if tid is None:
                    tid = index[tgt] = len(index)
                    queue.append(tgt)
                arcs.append((sid, arc_a.pair, arc_a.weight + arc_b.weight, tid))
    return trim(Wfsa(a.alphabet, len(index), 0, arcs, finals))


def compose(a: Wfsa, b: Wfsa) -> Wfsa:
    """Same-length relational composition: match a's outputs to b's inputs.

    The result reads pairs (a-input, b-output) and assigns weight
    min over shared middle strings of a + b. The result's inventory is
    derived by joining the two declared inventories.
    """
    if a.alphabet.table != b.alphabet.table:
        raise AlphabetMismatchError("composition requires a shared symbol table")
    joined = {
        PairSymbol(pa.inp, pb.out)
        for pa in a.alphabet.pairs
        for pb in b.alphabet.pairs
        if pa.out == pb.inp
    }
    alphabet = PairAlphabet(a.alphabet.table, joined)
    if a.is_empty or b.is_empty:
        return empty_machine(alphabet)
    b_in: dict[tuple[int, int], list[Arc]] = {}
    for src, arc in b.all_arcs():
        b_in.setdefault((src, arc.pair.inp), []).append(arc)
    start = (a.initial, b.initial)
    index = {start: 0}
    queue = deque([start])
    arcs = []
    finals = {}
    while queue:
        qa, qb = pair_state = queue.popleft()
        sid = index[pair_state]
        if qa in a.finals and qb in b.finals:
            finals[sid] = a.finals[qa] + b.finals[qb]
        for arc_a in a.arcs_from(qa):
            for arc_b in b_in.get((qb, arc_a.pair.out), ()):
                tgt = (arc_a.dst, arc_b.dst)
                tid = index.get(tgt)
                if tid is None:
                    tid = index[tgt] = len(index)
                    queue.append(tgt)
                arcs.append(
                    (sid, PairSymbol(arc_a.pair.inp, arc_b.pair.out),
                     arc_a.weight + arc_b.weight, tid)
                )
    return trim(Wfsa(alphabet, len(index), 0, arcs, finals))


# ---------------------------------------------------------------------------
# determinization, completion, complement


def _subset_construction(a: Wfsa) -> Wfsa:
    start = frozenset([a.initial])
    index = {start: 0}
    queue = deque([start])
    arcs = []
    finals = {}
    final_states = set(a.finals)
    while queue:
        subset = queue.popleft()
        sid = index[subset]
        if subset & final_states:
            finals[sid] = ONE
        move: dict[PairSymbol, set[int]] = {}
        for q in subset:
            for arc in a.arcs_from(q):
                move.setdefault(arc.pair, set()).add(arc.dst)
        for pair in sorted(move):
            tgt = frozenset(move[pair])
            tid = index.get(tgt)
            if tid is None:
                tid = index[tgt] = len(index)
                queue.append(tgt)
            arcs.append((sid, pair, ONE, tid))
    return Wfsa(a.alphabet, len(index), 0, arcs, finals)


def determinize_unweighted(a: Wfsa) -> Wfsa:
    """Subset construction; defined only for unweighted acceptors."""
    if not is_unweighted(a):
        raise RequiresUnweightedError("determinization requires an unweighted acceptor")
    if a.is_empty:
        return a
    return trim(_subset_construction(a))


def complete(a: Wfsa) -> Wfsa:
    """Make the transition function total by adding a non-final sink."""
    pairs = a.alphabet.pairs
    if a.is_empty:
        arcs = [(0, p, ONE, 0) for p in pairs]
        return Wfsa(a.alphabet, 1, 0, arcs, {})
    missing = []
    for q in range(a.num_states):
        have = {arc.pair for arc in a.arcs_from(q)}
        missing.extend((q, p) for p in pairs if p not in have)
    if not missing:
        return a
    sink = a.num_states
    arcs = [(src, arc.pair, arc.weight, arc.dst) for src, arc in a.all_arcs()]
    arcs.extend((q, p, ONE, sink) for q, p in missing)
    arcs.extend((sink, p, ONE, sink) for p in pairs)
    return Wfsa(a.alphabet, a.num_states + 1, a.initial, arcs, dict(a.finals))


def complement(a: Wfsa) -> Wfsa:
    """Language complement of a deterministic unweighted acceptor."""
    if not is_unweighted(a):
        raise RequiresUnweightedError("complement requires an unweighted acceptor")
    if not is_deterministic(a):
        raise RequiresDeterministicError("complement requires a deterministic acceptor")
    c = complete(a)
    finals = {q: ONE for q in range(c.num_states) if q not in c.finals}
    flipped = Wfsa(c.alphabet, c.num_states, c.initial, list(
        (src, arc.pair, arc.weight, arc.dst) for src, arc in c.all_arcs()
    ), finals)
    return trim(flipped)


# ---------------------------------------------------------------------------
# rational operations (epsilon-free by construction)


def union(a: Wfsa, b: Wfsa) -> Wfsa:
    """Accepts L(a) or L(b); string weight is the minimum of the two."""
    _check_same_alphabet(a, b)
    if a.is_empty:
        return trim(b)
    if b.is_empty:
        return trim(a)
    off_a, off_b = 1, 1 + a.num_states
    arcs = []
    for src, arc in a.all_arcs():
        arcs.append((src + off_a, arc.pair, arc.weight, arc.dst + off_a))
    for src, arc in b.all_arcs():
        arcs.append((src + off_b, arc.pair, arc.weight, arc.dst + off_b))
    for arc in a.arcs_from(a.initial):
        arcs.append((0, arc.pair, arc.weight, arc.dst + off_a))
    for arc in b.arcs_from(b.initial):
        arcs.append((0, arc.pair, arc.weight, arc.dst + off_b))
    finals = {q + off_a: w for q, w in a.finals.items()}
    finals.update({q + off_b: w for q, w in b.finals.items()})
    eps = min(a.finals.get(a.initial, ZERO), b.finals.get(b.initial, ZERO))
    if eps != ZERO:
        finals[0] = eps
    return trim(Wfsa(a.alphabet, 1 + a.num_states + b.num_states, 0, arcs, finals))


def concat(a: Wfsa, b: Wfsa) -> Wfsa:
    """Concatenation; final weights of a are folded into the junction arcs."""
    _check_same_alphabet(a, b)
    if a.is_empty or b.is_empty:
        return empty_machine(a.alphabet)
    off_b = a.num_states
    arcs = [(src, arc.pair, arc.weight, arc.dst) for src, arc in a.all_arcs()]
    for src, arc in b.all_arcs():
        arcs.append((src + off_b, arc.pair, arc.weight, arc.dst + off_b))
    b_init_arcs = b.arcs_from(b.initial)
    for f, wf in a.finals.items():
        for arc in b_init_arcs:
            arcs.append((f, arc.pair, wf + arc.weight, arc.dst + off_b))
    finals = {q + off_b: w for q, w in b.finals.items()}
    w0 = b.finals.get(b.initial, ZERO)
    if w0 != ZERO:
        for f, wf in a.finals.items():
            prev = finals.get(f, ZERO)
            finals[f] = min(prev, wf + w0)
    return trim(Wfsa(a.alphabet, a.num_states + b.num_states, a.initial, arcs, finals))


def star(a: Wfsa) -> Wfsa:
    """Kleene closure; always accepts the empty string at weight zero."""
    if a.is_empty:
        return epsilon_machine(a.alphabet)
    off = 1
    arcs = [(src + off, arc.pair, arc.weight, arc.dst + off) for src, arc in a.all_arcs()]
    init_arcs = a.arcs_from(a.initial)
    for arc in init_arcs:
        arcs.append((0, arc.pair, arc.weight, arc.dst + off))
    for f, wf in a.finals.items():
        for arc in init_arcs:
            arcs.append((f + off, arc.pair, wf + arc.weight, arc.dst + off))
    finals = {q + off: w for q, w in a.finals.items()}
    finals[0] = ONE
    return trim(Wfsa(a.alphabet, a.num_states + 1, 0, arcs, finals))


def plus(a: Wfsa) -> Wfsa:
    """One or more concatenated copies of a."""
    if a.is_empty:
        return empty_machine(a.alphabet)
    arcs = [(src, arc.pair, arc.weight, arc.dst) for src, arc in a.all_arcs()]
    init_arcs = a.arcs_from(a.initial)
    for f, wf in a.finals.items():
        for arc in init_arcs:
            arcs.append((f, arc.pair, wf + arc.weight, arc.dst))
    return trim(Wfsa(a.alphabet, a.num_states, a.initial, arcs, dict(a.finals)))


def optional(a: Wfsa) -> Wfsa:
    """Zero or one copies of a; the empty string gets weight zero."""
    if a.is_empty:
        return epsilon_machine(a.alphabet)
    off = 1
    arcs = [(src + off, arc.pair, arc.weight, arc.dst + off) for src, arc in a.all_arcs()]
    for arc in a.arcs_from(a.initial):
        arcs.append((0, arc.pair, arc.weight, arc.dst + off))
    finals = {q + off: w for q, w in a.finals.items()}
    finals[0] = ONE
    return trim(Wfsa(a.alphabet, a.num_states + 1, 0, arcs, finals))


def reverse(a: Wfsa) -> Wfsa:
    """Accepts the reversals of L(a) with identical weights."""
    if a.is_empty:
        return a
    s0 = a.num_states
    arcs = []
    into_final: list[tuple[int, Arc]] = []
    for src, arc in a.all_arcs():
        arcs.append((arc.dst, arc.pair, arc.weight, src))
        if arc.dst in a.finals:
            into_final.append((src, arc))
    for src, arc in into_final:
        arcs.append((s0, arc.pair, arc.weight + a.finals[arc.dst], src))
    finals = {a.initial: ONE}
    if a.initial in a.finals:
        finals[s0] = a.finals[a.initial]
    return trim(Wfsa(a.alphabet, a.num_states + 1, s0, arcs, finals))


# ---------------------------------------------------------------------------
# shortest strings


def _backward_distances(a: Wfsa) -> dict[int, float]:
    """Dijkstra distances from each state to acceptance (final weight included)."""
    dist = dict(a.finals)
    rev: dict[int, list[tuple[int, float]]] = {}
    for src, arc in a.all_arcs():
        rev.setdefault(arc.dst, []).append((src, arc.weight))
    heap = [(w, q) for q, w in dist.items()]
    heapq.heapify(heap)
    settled = set()
    while heap:
        w, q = heapq.heappop(heap)
        if q in settled:
            continue
        settled.add(q)
        for src, aw in rev.get(q, ()):
            nw = w + aw
            if nw < dist.get(src, ZERO):
                dist[src] = nw
                heapq.heappush(heap, (nw, src))
    return dist


def shortest_path(a: Wfsa, n: int) -> list[tuple[PairString, float]]:
    """The n minimum-weight accepted strings, ascending by weight.

    Ties are broken by shortlex order of the output-symbol id sequence,
    then of the input sequence (lexicographic comparison alone is not a
    well-order once weight ties span unboundedly many strings). A* over
    weighted prefix subsets with exact completion distances guarantees
    strings come out in sorted order; distinct prefixes map to distinct
    search nodes, so each string is reported at most once.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if a.is_empty:
        return []
    h = _backward_distances(a)
    if a.initial not in h:
        return []
    results: list[tuple[PairString, float]] = []
    counter = itertools.count()
    # entry: (priority_weight, length, outs, ins, kind, seq, statemap)
    # kind 0 = emit (statemap unused), kind 1 = prefix to expand
    root = {a.initial: 0.0}
    heap = [(h[a.initial], 0, (), (), 1, next(counter), root)]
    while heap and len(results) < n:
        f, length, outs, ins, kind, _, front = heapq.heappop(heap)
        if kind == 0:
            s = tuple(PairSymbol(i, o) for i, o in zip(ins, outs))
            results.append((s, f))
            continue
        acc = min((w + a.finals[q] for q, w in front.items() if q in a.finals), default=ZERO)
        if acc != ZERO:
            heapq.heappush(heap, (acc, length, outs, ins, 0, next(counter), None))
        move: dict[PairSymbol, dict[int, float]] = {}
        for q, w in front.items():
            for arc in a.arcs_from(q):
                tgt = move.setdefault(arc.pair, {})
                nw = w + arc.weight
                if nw < tgt.get(arc.dst, ZERO):
                    tgt[arc.dst] = nw
        for pair, child in move.items():
            cf = min((w + h[q] for q, w in child.items() if q in h), default=ZERO)
            if cf == ZERO:
                continue
            heapq.heappush(
                heap,
                (cf, length + 1, outs + (pair.out,), ins + (pair.inp,), 1, next(counter), child),
            )
    return results


# ---------------------------------------------------------------------------
# string application


def input_restriction(alphabet: PairAlphabet, input_ids: Sequence[int]) -> Wfsa:
    """Linear machine fixing the input side to `# ids #`, outputs free."""
    b = alphabet.table.boundary
    positions = [b, *input_ids, b]
    arcs = []
    for i, sym in enumerate(positions):
        for pair in alphabet.pairs_for_input(sym):
            arcs.append((i, pair, ONE, i + 1))
    return Wfsa(alphabet, len(positions) + 1, 0, arcs, {len(positions): ONE})


def output_restriction(alphabet: PairAlphabet, output_ids: Sequence[int],
                       weights: Sequence[float] | None = None) -> Wfsa:
    """Linear machine fixing the output side to `# ids #`, inputs free.

    Optional per-position weights model a toy acoustic lattice.
    """
    b = alphabet.table.boundary
    positions = [b, *output_ids, b]
    pos_weights = [ONE] + list(weights or [ONE] * len(output_ids)) + [ONE]
    by_output: dict[int, list[PairSymbol]] = {}
    for pair in alphabet.pairs:
        by_output.setdefault(pair.out, []).append(pair)
    arcs = []
    for i, (sym, w) in enumerate(zip(positions, pos_weights)):
        for pair in by_output.get(sym, ()):
            arcs.append((i, pair, w, i + 1))
    return Wfsa(alphabet, len(positions) + 1, 0, arcs, {len(positions): ONE})


def apply_to_string(phi: Wfsa, x: Sequence[str]) -> Wfsa:
    """Restrict phi's input side to the boundary-wrapped symbol string x."""
    table = phi.alphabet.table
    ids = []
    for name in x:
        if name == BOUNDARY:
            raise UnknownSymbolError("input string may not contain the boundary symbol")
        ids.append(table.id(name))
    return intersect(phi, input_restriction(phi.alphabet, ids))
