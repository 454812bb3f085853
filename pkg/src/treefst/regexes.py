"""Symbolic regular expressions over input-symbol classes.

Atoms name sets of input symbols (single symbols, named classes, or
ad-hoc `[a b c]` sets). `.` is any non-boundary symbol, `#` the
boundary. Compilation lifts every atom to the set of declared pairs
whose input side falls in the atom's set, so a regex over input symbols
denotes a language of pair-strings.

Grammar, loosest to tightest: `|` union, `&` intersection,
juxtaposition concatenation, `!` complement, postfix `* + ?`.
`Opt(X)` is a synonym for `X?`. Postfix binds tighter than `!`, so
`!a*` is the complement of `a*`.

A `+` between two name characters is part of the name (`q+aa` is one
symbol); write `a+ b` to apply a postfix plus before another atom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union as TUnion

from . import fsa
from .errors import EmptyAtomError, RegexSyntaxError, UnknownSymbolError
from .fsa import Wfsa
from .symbols import BOUNDARY, PairAlphabet, SymbolTable


@dataclass(frozen=True)
class Atom:
    members: tuple[str, ...]  # resolved symbol names, sorted
    label: str | None = None  # class name, if written as one

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))


@dataclass(frozen=True)
class Any:
    pass


@dataclass(frozen=True)
class Boundary:
    pass


@dataclass(frozen=True)
class Concat:
    parts: tuple["Regex", ...]


@dataclass(frozen=True)
class Union:
    parts: tuple["Regex", ...]


@dataclass(frozen=True)
class Intersect:
    parts: tuple["Regex", ...]


@dataclass(frozen=True)
class Complement:
    child: "Regex"


@dataclass(frozen=True)
class Star:
    child: "Regex"


@dataclass(frozen=True)
class Plus:
    child: "Regex"


@dataclass(frozen=True)
class Opt:
    child: "Regex"


Regex = TUnion[Atom, Any, Boundary, Concat, Union, Intersect, Complement, Star, Plus, Opt]


# ---------------------------------------------------------------------------
# tokenizer

_PUNCT = {
    ".": "DOT", "#": "HASH", "[": "LBRACK", "]": "RBRACK", "(": "LPAREN",
    ")": "RPAREN", "*": "STAR", "+": "PLUS", "?": "QMARK", "!": "BANG",
    "&": "AMP", "|": "PIPE",
}


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c in "_'-@"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if _is_name_char(c):
            j = i + 1
            while j < len(text):
                if _is_name_char(text[j]):
                    j += 1
                elif text[j] == "+" and j + 1 < len(text) and _is_name_char(text[j + 1]):
                    j += 2  # `+` joining two name parts, as in q+aa
                else:
                    break
            tokens.append(("NAME", text[i:j], i))
            i = j
        elif c in _PUNCT:
            tokens.append((_PUNCT[c], c, i))
            i += 1
        else:
            raise RegexSyntaxError(f"unexpected character {c!r}", position=i)
    tokens.append(("EOF", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str, table: SymbolTable):
        self.tokens = _tokenize(text)
        self.table = table
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            raise RegexSyntaxError(f"expected {kind}, got {tok[1]!r}", position=tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Regex:
        r = self.union()
        tok = self.peek()
        if tok[0] != "EOF":
            raise RegexSyntaxError(f"trailing input at {tok[1]!r}", position=tok[2])
        return r

    def union(self) -> Regex:
        parts = [self.inter()]
        while self.peek()[0] == "PIPE":
            self.take("PIPE")
            parts.append(self.inter())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def inter(self) -> Regex:
        parts = [self.seq()]
        while self.peek()[0] == "AMP":
            self.take("AMP")
            parts.append(self.seq())
        return parts[0] if len(parts) == 1 else Intersect(tuple(parts))

    _SEQ_START = {"NAME", "DOT", "HASH", "LBRACK", "LPAREN", "BANG"}

    def seq(self) -> Regex:
        parts = [self.prefixed()]
        while self.peek()[0] in self._SEQ_START:
            parts.append(self.prefixed())
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def prefixed(self) -> Regex:
        if self.peek()[0] == "BANG":
            self.take("BANG")
            return Complement(self.prefixed())
        return self.postfixed()

    def postfixed(self) -> Regex:
        r = self.primary()
        while True:
            kind = self.peek()[0]
            if kind == "STAR":
                self.take("STAR")
                r = Star(r)
            elif kind == "PLUS":
                self.take("PLUS")
                r = Plus(r)
            elif kind == "QMARK":
                self.take("QMARK")
                r = Opt(r)
            else:
                return r

    def primary(self) -> Regex:
        kind, value, pos = self.peek()
        if kind == "DOT":
            self.take("DOT")
            return Any()
        if kind == "HASH":
            self.take("HASH")
            return Boundary()
        if kind == "LPAREN":
            self.take("LPAREN")
            r = self.union()
            self.take("RPAREN")
            return r
        if kind == "LBRACK":
            self.take("LBRACK")
            names = []
            while self.peek()[0] == "NAME":
                names.append(self.take("NAME"))
            self.take("RBRACK")
            if not names:
                raise RegexSyntaxError("empty [...] class", position=pos)
            members: set[str] = set()
            for _, name, npos in names:
                members |= self._resolve(name, npos)
            return Atom(tuple(members))
        if kind == "NAME":
            self.take("NAME")
            if value == "Opt" and self.peek()[0] == "LPAREN":
                self.take("LPAREN")
                r = self.union()
                self.take("RPAREN")
                return Opt(r)
            label = value if value in self.table.classes else None
            return Atom(tuple(self._resolve(value, pos)), label=label)
        raise RegexSyntaxError(f"expected an atom, got {value!r}", position=pos)

    def _resolve(self, name: str, pos: int) -> frozenset[str]:
        try:
            return self.table.members(name)
        except UnknownSymbolError:
            raise UnknownSymbolError(f"unknown symbol or class {name!r} at position {pos}") from None


def parse_regex(text: str, table: SymbolTable) -> Regex:
    if not text.strip():
        raise RegexSyntaxError("empty regex", position=0)
    return _Parser(text, table).parse()


# ---------------------------------------------------------------------------
# canonical printer

_POSTFIX = {Star: "*", Plus: "+", Opt: "?"}


def _print(r: Regex, parent: int) -> str:
    # precedence levels: 0 union, 1 intersect, 2 concat, 3 prefix, 4 postfix/atom
    if isinstance(r, Atom):
        if r.label is not None:
            return r.label
        if len(r.members) == 1:
            return r.members[0]
        return "[" + " ".join(r.members) + "]"
    if isinstance(r, Any):
        return "."
    if isinstance(r, Boundary):
        return "#"
    if isinstance(r, (Star, Plus, Opt)):
        return _print(r.child, 4) + _POSTFIX[type(r)]
    if isinstance(r, Complement):
        text = "!" + _print(r.child, 3)
        return text if parent <= 3 else "(" + text + ")"
    if isinstance(r, Concat):
        text = " ".join(_print(p, 3) for p in r.parts)
        return text if parent <= 2 else "(" + text + ")"
    if isinstance(r, Intersect):
        text = " & ".join(_print(p, 2) for p in r.parts)
        return text if parent <= 1 else "(" + text + ")"
    if isinstance(r, Union):
        text = " | ".join(_print(p, 1) for p in r.parts)
        return text if parent <= 0 else "(" + text + ")"
    raise TypeError(f"not a regex node: {r!r}")


def print_regex(r: Regex) -> str:
    return _print(r, 0)


# ---------------------------------------------------------------------------
# compilation to acceptors


def _lift(members: tuple[str, ...], alphabet: PairAlphabet, what: str):
    table = alphabet.table
    pairs = []
    for name in members:
        pairs.extend(alphabet.pairs_for_input(table.id(name)))
    if not pairs:
        raise EmptyAtomError(f"{what} lifts to no declared pairs")
    return sorted(set(pairs))


def compile_regex(r: Regex, alphabet: PairAlphabet) -> Wfsa:
    """Unweighted acceptor over pair-strings via input-side lifting."""
    if isinstance(r, Atom):
        return fsa.pair_set_machine(alphabet, _lift(r.members, alphabet, r.label or str(r.members)))
    if isinstance(r, Any):
        pairs = alphabet.non_boundary_pairs()
        if not pairs:
            raise EmptyAtomError("`.` lifts to no declared pairs")
        return fsa.pair_set_machine(alphabet, pairs)
    if isinstance(r, Boundary):
        return fsa.pair_set_machine(alphabet, (alphabet.boundary_pair,))
    if isinstance(r, Concat):
        out = compile_regex(r.parts[0], alphabet)
        for part in r.parts[1:]:
            out = fsa.concat(out, compile_regex(part, alphabet))
        return out
    if isinstance(r, Union):
        out = compile_regex(r.parts[0], alphabet)
        for part in r.parts[1:]:
            out = fsa.union(out, compile_regex(part, alphabet))
        return out
    if isinstance(r, Intersect):
        out = compile_regex(r.parts[0], alphabet)
        for part in r.parts[1:]:
            out = fsa.intersect(out, compile_regex(part, alphabet))
        return out
    if isinstance(r, Complement):
        inner = compile_regex(r.child, alphabet)
        return fsa.complement(fsa.determinize_unweighted(inner))
    if isinstance(r, Star):
        return fsa.star(compile_regex(r.child, alphabet))
    if isinstance(r, Plus):
        return fsa.plus(compile_regex(r.child, alphabet))
    if isinstance(r, Opt):
        return fsa.optional(compile_regex(r.child, alphabet))
    raise TypeError(f"not a regex node: {r!r}")
