"""Symbol tables, symbol classes, and the declared pair inventory."""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import TreefstError, UnknownSymbolError

BOUNDARY = "#"
STRESS = "'"
PAD = "_"


class PairSymbol(NamedTuple):
    """An (input symbol, output symbol) pair, by symbol id."""

    inp: int
    out: int


class SymbolTable:
    """Ordered inventory of symbol names with dense ids and named classes.

    The boundary symbol "#" is always present. Classes are named,
    non-empty subsets of the inventory; class names may not collide
    with symbol names.
    """

    def __init__(self, symbols: Iterable[str], classes: Mapping[str, Iterable[str]] | None = None):
        names = list(symbols)
        if BOUNDARY not in names:
            names.insert(0, BOUNDARY)
        self._names: tuple[str, ...] = tuple(names)
        self._ids: dict[str, int] = {}
        for i, name in enumerate(self._names):
            if not name or any(c.isspace() for c in name):
                raise TreefstError(f"bad symbol name: {name!r}")
            if name in self._ids:
                raise TreefstError(f"duplicate symbol: {name!r}")
            self._ids[name] = i
        self.classes: dict[str, frozenset[str]] = {}
        for cname, members in (classes or {}).items():
            self.add_class(cname, members)

    def add_class(self, name: str, members: Iterable[str]) -> None:
        if name in self._ids:
            raise TreefstError(f"class name collides with a symbol: {name!r}")
        mset = frozenset(members)
        if not mset:
            raise TreefstError(f"class {name!r} is empty")
        for m in mset:
            if m not in self._ids:
                raise UnknownSymbolError(f"class {name!r} member {m!r} not in symbol table")
        self.classes[name] = mset

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymbolTable)
            and self._names == other._names
            and self.classes == other.classes
        )

    def __hash__(self):
        return hash(self._names)

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def boundary(self) -> int:
        return self._ids[BOUNDARY]

    def id(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol: {name!r}") from None

    def name(self, sym_id: int) -> str:
        return self._names[sym_id]

    def members(self, name: str) -> frozenset[str]:
        """Resolve a symbol or class name to a set of symbol names."""
        if name in self.classes:
            return self.classes[name]
        if name in self._ids:
            return frozenset((name,))
        raise UnknownSymbolError(f"unknown symbol or class: {name!r}")

    def member_ids(self, name: str) -> frozenset[int]:
        return frozenset(self._ids[m] for m in self.members(name))

    def non_boundary_ids(self) -> frozenset[int]:
        b = self.boundary
        return frozenset(i for i in range(len(self._names)) if i != b)


class PairAlphabet:
    """The declared, finite inventory of pair symbols for a machine family.

    The boundary pair ("#", "#") is always a member and "#" may not
    appear on either side of any other pair.
    """

    def __init__(self, table: SymbolTable, pairs: Iterable[PairSymbol]):
        self.table = table
        b = table.boundary
        pset = {PairSymbol(*p) for p in pairs}
        pset.add(PairSymbol(b, b))
        for p in pset:
            if (p.inp == b) != (p.out == b):
                raise TreefstError(
                    f"boundary may only pair with itself: "
                    f"({table.name(p.inp)}, {table.name(p.out)})"
                )
            if not (0 <= p.inp < len(table) and 0 <= p.out < len(table)):
                raise TreefstError(f"pair ids out of range: {p}")
        self.pairs: tuple[PairSymbol, ...] = tuple(sorted(pset))
        self._pairset = frozenset(self.pairs)
        self._by_input: dict[int, tuple[PairSymbol, ...]] = {}
        for p in self.pairs:
            self._by_input.setdefault(p.inp, ())
            self._by_input[p.inp] += (p,)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: PairSymbol) -> bool:
        return pair in self._pairset

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PairAlphabet)
            and self.table == other.table
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return hash((self.table, self.pairs))

    @property
    def boundary_pair(self) -> PairSymbol:
        b = self.table.boundary
        return PairSymbol(b, b)

    def pairs_for_input(self, inp: int) -> tuple[PairSymbol, ...]:
        return self._by_input.get(inp, ())

    def non_boundary_pairs(self) -> tuple[PairSymbol, ...]:
        bp = self.boundary_pair
        return tuple(p for p in self.pairs if p != bp)

    def pair_name(self, pair: PairSymbol) -> str:
        return f"({self.table.name(pair.inp)}:{self.table.name(pair.out)})"

    def string_name(self, pairs: Sequence[PairSymbol]) -> str:
        return " ".join(self.pair_name(p) for p in pairs)


def parse_symbols(text: str) -> SymbolTable:
    """Parse a symbol-table file: one `name id` per line, dense ids from 0."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#!"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TreefstError(f"symbols line {lineno}: expected `name id`, got {raw!r}")
        name, id_text = parts
        try:
            sym_id = int(id_text)
        except ValueError:
            raise TreefstError(f"symbols line {lineno}: bad id {id_text!r}") from None
        entries.append((sym_id, name, lineno))
    entries.sort()
    names = []
    for want, (sym_id, name, lineno) in enumerate(entries):
        if sym_id != want:
            raise TreefstError(f"symbols line {lineno}: ids must be dense from 0, got {sym_id}")
        names.append(name)
    return SymbolTable(names)


def format_symbols(table: SymbolTable) -> str:
    return "".join(f"{name} {i}\n" for i, name in enumerate(table.names))


def parse_classes(text: str, table: SymbolTable) -> None:
    """Parse a class file (`classname: sym sym ...`) into the table."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if ":" not in line:
            raise TreefstError(f"classes line {lineno}: expected `name: members`, got {raw!r}")
        cname, _, rest = line.partition(":")
        cname = cname.strip()
        members = rest.split()
        if not cname:
            raise TreefstError(f"classes line {lineno}: empty class name")
        table.add_class(cname, members)


def format_classes(table: SymbolTable) -> str:
    lines = []
    for cname in sorted(table.classes):
        members = " ".join(sorted(table.classes[cname], key=table.id))
        lines.append(f"{cname}: {members}\n")
    return "".join(lines)


def parse_pairs(text: str, table: SymbolTable) -> PairAlphabet:
    """Parse a pair-inventory file: one `in_sym out_sym` per line."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TreefstError(f"pairs line {lineno}: expected `in out`, got {raw!r}")
        pairs.append(PairSymbol(table.id(parts[0]), table.id(parts[1])))
    return PairAlphabet(table, pairs)


def format_pairs(alphabet: PairAlphabet) -> str:
    t = alphabet.table
    return "".join(f"{t.name(p.inp)} {t.name(p.out)}\n" for p in alphabet.pairs)
