"""Reference regex matcher used by the tree interpreter and the oracles.

Deliberately independent of the automata layer: regular expressions are
evaluated by symbolic derivatives over a small hash-consed term algebra
on input-symbol ids. Agreement between this matcher and the compiled
acceptors is evidence of correctness, not a tautology.

Terms are nested tuples:

    ("empty",)            the empty language
    ("eps",)              the empty string
    ("set", ids)          one symbol drawn from a frozenset of ids
    ("cat", (t1, t2))     concatenation
    ("alt", {t...})       union
    ("and", {t...})       intersection
    ("not", t)            complement
    ("star", t)
"""

from __future__ import annotations

from typing import Sequence

from . import regexes
from .symbols import SymbolTable

Term = tuple

EMPTY: Term = ("empty",)
EPS: Term = ("eps",)


def sym_set(ids) -> Term:
    ids = frozenset(ids)
    return ("set", ids) if ids else EMPTY


def cat(a: Term, b: Term) -> Term:
    if a == EMPTY or b == EMPTY:
        return EMPTY
    if a == EPS:
        return b
    if b == EPS:
        return a
    parts = (a[1] if a[0] == "cat" else (a,)) + (b[1] if b[0] == "cat" else (b,))
    return ("cat", parts)


def alt(*terms: Term) -> Term:
    flat: set[Term] = set()
    for t in terms:
        if t[0] == "alt":
            flat |= t[1]
        elif t != EMPTY:
            flat.add(t)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return next(iter(flat))
    return ("alt", frozenset(flat))


def both(*terms: Term) -> Term:
    flat: set[Term] = set()
    for t in terms:
        if t == EMPTY:
            return EMPTY
        if t[0] == "and":
            flat |= t[1]
        else:
            flat.add(t)
    if len(flat) == 1:
        return next(iter(flat))
    return ("and", frozenset(flat))


def neg(t: Term) -> Term:
    if t[0] == "not":
        return t[1]
    return ("not", t)


def star(t: Term) -> Term:
    if t in (EMPTY, EPS):
        return EPS
    if t[0] == "star":
        return t
    return ("star", t)


_NULLABLE: dict[Term, bool] = {}
_DERIV: dict[tuple[Term, int], Term] = {}


def nullable(t: Term) -> bool:
    got = _NULLABLE.get(t)
    if got is not None:
        return got
    kind = t[0]
    if kind == "empty" or kind == "set":
        v = False
    elif kind == "eps" or kind == "star":
        v = True
    elif kind == "cat":
        v = all(nullable(p) for p in t[1])
    elif kind == "alt":
        v = any(nullable(p) for p in t[1])
    elif kind == "and":
        v = all(nullable(p) for p in t[1])
    else:  # not
        v = not nullable(t[1])
    _NULLABLE[t] = v
    return v


def derivative(t: Term, sym: int) -> Term:
    key = (t, sym)
    got = _DERIV.get(key)
    if got is not None:
        return got
    kind = t[0]
    if kind in ("empty", "eps"):
        v = EMPTY
    elif kind == "set":
        v = EPS if sym in t[1] else EMPTY
    elif kind == "cat":
        head, rest = t[1][0], t[1][1:]
        tail = rest[0] if len(rest) == 1 else ("cat", rest)
        v = cat(derivative(head, sym), tail)
        if nullable(head):
            v = alt(v, derivative(tail, sym))
    elif kind == "alt":
        v = alt(*(derivative(p, sym) for p in t[1]))
    elif kind == "and":
        v = both(*(derivative(p, sym) for p in t[1]))
    elif kind == "not":
        v = neg(derivative(t[1], sym))
    else:  # star
        v = cat(derivative(t[1], sym), t)
    _DERIV[key] = v
    return v


def match(t: Term, seq: Sequence[int]) -> bool:
    for sym in seq:
        t = derivative(t, sym)
        if t == EMPTY:
            return False
    return nullable(t)


def reverse_term(t: Term) -> Term:
    """Reverses the denoted language; commutes with not/and structurally."""
    kind = t[0]
    if kind in ("empty", "eps", "set"):
        return t
    if kind == "cat":
        out = EPS
        for p in reversed(t[1]):
            out = cat(out, reverse_term(p))
        return out
    if kind == "alt":
        return alt(*(reverse_term(p) for p in t[1]))
    if kind == "and":
        return both(*(reverse_term(p) for p in t[1]))
    if kind == "not":
        return neg(reverse_term(t[1]))
    return star(reverse_term(t[1]))


# ---------------------------------------------------------------------------
# from regex ASTs


def term_of(r: regexes.Regex, table: SymbolTable) -> Term:
    """Translate a regex AST to a term over input-symbol ids."""
    if isinstance(r, regexes.Atom):
        ids = set()
        for name in r.members:
            ids.add(table.id(name))
        return sym_set(ids)
    if isinstance(r, regexes.Any):
        return sym_set(table.non_boundary_ids())
    if isinstance(r, regexes.Boundary):
        return sym_set((table.boundary,))
    if isinstance(r, regexes.Concat):
        out = term_of(r.parts[0], table)
        for p in r.parts[1:]:
            out = cat(out, term_of(p, table))
        return out
    if isinstance(r, regexes.Union):
        return alt(*(term_of(p, table) for p in r.parts))
    if isinstance(r, regexes.Intersect):
        return both(*(term_of(p, table) for p in r.parts))
    if isinstance(r, regexes.Complement):
        return neg(term_of(r.child, table))
    if isinstance(r, regexes.Star):
        return star(term_of(r.child, table))
    if isinstance(r, regexes.Plus):
        inner = term_of(r.child, table)
        return cat(inner, star(inner))
    if isinstance(r, regexes.Opt):
        return alt(EPS, term_of(r.child, table))
    raise TypeError(f"not a regex node: {r!r}")


def universe_star(table: SymbolTable) -> Term:
    return star(sym_set(range(len(table))))


class ContextMatcher:
    """Anchored membership tests for one branch's (lambda, rho) pair.

    A left context x[0..i-1] satisfies lambda iff it belongs to U* L(λ)
    where U is the whole symbol universe (boundary included); a right
    context x[i+1..] satisfies rho iff it belongs to L(ρ) U*. The right
    side is tested on the reversed string against the reversed term so
    both directions scan outward from the rewrite site.
    """

    def __init__(self, lam: regexes.Regex, rho: regexes.Regex, table: SymbolTable):
        ustar = universe_star(table)
        self.left_term = cat(ustar, term_of(lam, table))
        self.right_term_rev = reverse_term(cat(term_of(rho, table), ustar))

    def left_ok(self, left_ids: Sequence[int]) -> bool:
        return match(self.left_term, left_ids)

    def right_ok(self, right_ids: Sequence[int]) -> bool:
        return match(self.right_term_rev, tuple(reversed(right_ids)))
