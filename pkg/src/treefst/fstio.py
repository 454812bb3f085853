"""Text serialization for machines and their alphabets.

One machine per file. Line forms:

    src dst in_sym out_sym weight     (arc)
    state weight                      (final)

The first number on the first line is the initial state. Symbols are
written by name. Weights are decimals with at least 6 significant
digits, chosen so that parsing reproduces the exact float that was
written (bit-exact round trip); the writer asserts this.
"""

from __future__ import annotations

import os

from .errors import TreefstError, UnknownSymbolError
from .fsa import Wfsa, trim
from .symbols import (
    PairAlphabet,
    PairSymbol,
    SymbolTable,
    format_classes,
    format_pairs,
    format_symbols,
    parse_classes,
    parse_pairs,
    parse_symbols,
)


def format_weight(w: float) -> str:
    """Fixed 6 decimals when that round-trips w exactly, else the
    shortest exact representation."""
    cand = f"{w:.6f}"
    return cand if float(cand) == w else repr(w)


def format_fst(m: Wfsa) -> str:
    """Serialize a machine. The machine is trimmed first so that the
    initial state is state 0 and can lead the file."""
    t = trim(m)
    if t.is_empty:
        return ""
    table = t.alphabet.table
    lines = []
    for src in range(t.num_states):
        for arc in t.arcs_from(src):
            lines.append(
                f"{src} {arc.dst} {table.name(arc.pair.inp)} "
                f"{table.name(arc.pair.out)} {format_weight(arc.weight)}"
            )
    for q in sorted(t.finals):
        lines.append(f"{q} {format_weight(t.finals[q])}")
    if not t.arcs_from(0):
        # no arc line can lead with the initial state; its final line must
        lines.remove(f"0 {format_weight(t.finals[0])}")
        lines.insert(0, f"0 {format_weight(t.finals[0])}")
    return "\n".join(lines) + "\n"


def parse_fst(text: str, alphabet: PairAlphabet) -> Wfsa:
    table = alphabet.table
    arcs = []
    finals: dict[int, float] = {}
    initial = None
    max_state = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        try:
            if len(fields) == 2:
                q, w = int(fields[0]), float(fields[1])
                finals[q] = min(w, finals.get(q, float("inf")))
                max_state = max(max_state, q)
                if initial is None:
                    initial = q
            elif len(fields) == 5:
                src, dst = int(fields[0]), int(fields[1])
                pair = PairSymbol(table.id(fields[2]), table.id(fields[3]))
                arcs.append((src, pair, float(fields[4]), dst))
                max_state = max(max_state, src, dst)
                if initial is None:
                    initial = src
            else:
                raise TreefstError(f"line {lineno}: expected 2 or 5 fields")
        except (ValueError, KeyError, UnknownSymbolError) as exc:
            raise TreefstError(f"line {lineno}: {exc}") from exc
    if initial is None:
        return Wfsa(alphabet, 0, None, (), {})
    return Wfsa(alphabet, max_state + 1, initial, arcs, finals)


def write_fst(m: Wfsa, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_fst(m))


def read_fst(path: str, alphabet: PairAlphabet) -> Wfsa:
    with open(path, encoding="utf-8") as fh:
        return parse_fst(fh.read(), alphabet)


# ---------------------------------------------------------------------------
# alphabet sidecar files: symbols.txt, classes.txt, pairs.txt


def write_alphabet(dirpath: str, alphabet: PairAlphabet) -> None:
    table = alphabet.table
    with open(os.path.join(dirpath, "symbols.txt"), "w", encoding="utf-8") as fh:
        fh.write(format_symbols(table))
    if table.classes:
        with open(os.path.join(dirpath, "classes.txt"), "w", encoding="utf-8") as fh:
            fh.write(format_classes(table))
    with open(os.path.join(dirpath, "pairs.txt"), "w", encoding="utf-8") as fh:
        fh.write(format_pairs(alphabet))


def read_alphabet(dirpath: str) -> PairAlphabet:
    with open(os.path.join(dirpath, "symbols.txt"), encoding="utf-8") as fh:
        table = parse_symbols(fh.read())
    classes_path = os.path.join(dirpath, "classes.txt")
    if os.path.exists(classes_path):
        with open(classes_path, encoding="utf-8") as fh:
            parse_classes(fh.read(), table)
    with open(os.path.join(dirpath, "pairs.txt"), encoding="utf-8") as fh:
        return parse_pairs(fh.read(), table)
