"""Decision-tree model, tree-file parsing, the direct interpreter, and
branch-complementarity validation.

The interpreter is the verification oracle for the compiled machines:
it walks a tree per input position, deciding branch membership with the
derivative matcher, and never touches the automata layer.

Tree file format (line-oriented s-expressions, `;` comments):

    (symbols "symbols.txt")
    (classes "classes.txt")
    (tree aa
      (node 1
        (left  :lambda "# '?"         :rho "."  2)
        (right :lambda "('? SEG)+ '?" :rho "."  3))
      (leaf 2 (ao 0.5) (aa 0.5))
      (leaf 3 (aa 1.0)))

A lone `.` as a branch regex is shorthand for an unconstrained context.
Node children are resolved by id; the root is the node no branch points
to. A tree with no internal nodes is a single leaf.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

from . import fsa, matcher, regexes
from .errors import PartitionViolationError, TreeFileError, TreefstError
from .regexes import Regex
from .symbols import BOUNDARY, STRESS, PairAlphabet, PairSymbol, SymbolTable, parse_classes, parse_symbols

NO_CONSTRAINT = regexes.Star(regexes.Any())


@dataclass
class Branch:
    lam: Regex
    rho: Regex
    child: int
    lam_text: str = ""
    rho_text: str = ""
    _matcher: matcher.ContextMatcher | None = field(default=None, repr=False, compare=False)

    def context_matcher(self, table: SymbolTable) -> matcher.ContextMatcher:
        if self._matcher is None:
            self._matcher = matcher.ContextMatcher(self.lam, self.rho, table)
        return self._matcher


@dataclass
class Leaf:
    id: int
    dist: dict[str, float]

    @property
    def weights(self) -> dict[str, float]:
        return {name: -math.log(p) for name, p in self.dist.items()}

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self.dist)


@dataclass
class Node:
    id: int
    left: Branch
    right: Branch


@dataclass
class DecisionTree:
    phone: str
    root: int
    nodes: dict[int, Node]
    leaves: dict[int, Leaf]

    @property
    def num_leaves(self) -> int:
        return len(self.leaves)

    def outputs(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for leaf in self.leaves.values():
            for name in leaf.dist:
                seen.setdefault(name)
        return tuple(seen)

    def path_to(self, leaf_id: int) -> list[Branch]:
        """Branches taken from the root down to the given leaf."""
        found: list[list[Branch]] | None = None

        def walk(nid: int, acc: list[Branch]):
            nonlocal found
            if nid == leaf_id:
                found = list(acc)
                return
            node = self.nodes.get(nid)
            if node is None:
                return
            for br in (node.left, node.right):
                acc.append(br)
                walk(br.child, acc)
                acc.pop()

        walk(self.root, [])
        if found is None:
            raise TreefstError(f"leaf {leaf_id} not in tree for {self.phone!r}")
        return found


class Forest:
    """Trees plus the shared symbol table and the derived pair inventory.

    The inventory contains the boundary pair, one (phone, output) pair
    per output a tree can produce, and an identity pair for every
    non-boundary symbol without a tree.
    """

    def __init__(self, trees: Sequence[DecisionTree], table: SymbolTable):
        self.trees = list(trees)
        self.table = table
        self.tree_for: dict[str, DecisionTree] = {}
        for tree in self.trees:
            if tree.phone in self.tree_for:
                raise TreeFileError(f"duplicate tree for phone {tree.phone!r}")
            self.tree_for[tree.phone] = tree
        pairs = set()
        for tree in self.trees:
            pid = table.id(tree.phone)
            for out in tree.outputs():
                pairs.add(PairSymbol(pid, table.id(out)))
        for name in table.names:
            if name != BOUNDARY and name not in self.tree_for:
                sid = table.id(name)
                pairs.add(PairSymbol(sid, sid))
        self.alphabet = PairAlphabet(table, pairs)

    def segments(self) -> tuple[str, ...]:
        """Input symbols that may fill word positions: the SEG class when
        declared, else every non-boundary, non-stress symbol."""
        if "SEG" in self.table.classes:
            return tuple(sorted(self.table.classes["SEG"], key=self.table.id))
        return tuple(
            n for n in self.table.names if n not in (BOUNDARY, STRESS)
        )


# ---------------------------------------------------------------------------
# s-expression reader


class _Tok(NamedTuple):
    text: str
    pos: int
    quoted: bool


def _line_col(text: str, pos: int) -> str:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line} col {col}"


def _read_sexps(text: str):
    """Parse to nested lists of _Tok atoms; raises on unbalanced forms."""
    stack: list[list] = [[]]
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == ";":
            i = text.find("\n", i)
            i = n if i < 0 else i
        elif c.isspace():
            i += 1
        elif c == "(":
            new: list = []
            stack[-1].append(new)
            stack.append(new)
            i += 1
        elif c == ")":
            if len(stack) == 1:
                raise TreeFileError(f"unbalanced ')' at {_line_col(text, i)}")
            stack.pop()
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise TreeFileError(f"unterminated string at {_line_col(text, i)}")
            stack[-1].append(_Tok(text[i + 1:j], i, True))
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '();"':
                j += 1
            stack[-1].append(_Tok(text[i:j], i, False))
            i = j
    if len(stack) != 1:
        raise TreeFileError("unclosed '(' at end of file")
    return stack[0]


def _expect_atom(form, idx: int, text: str, what: str) -> _Tok:
    if idx >= len(form) or not isinstance(form[idx], _Tok):
        pos = form[0].pos if form and isinstance(form[0], _Tok) else 0
        raise TreeFileError(f"expected {what} at {_line_col(text, pos)}")
    return form[idx]


# ---------------------------------------------------------------------------
# tree-file parsing


def _parse_branch(form: list, table: SymbolTable, text: str) -> tuple[str, Branch]:
    head = _expect_atom(form, 0, text, "left/right")
    if head.text not in ("left", "right"):
        raise TreeFileError(f"expected left or right at {_line_col(text, head.pos)}")
    opts = {"lambda": None, "rho": None}
    child = None
    i = 1
    while i < len(form):
        tok = form[i]
        if isinstance(tok, _Tok) and tok.text.startswith(":"):
            key = tok.text[1:]
            if key not in opts:
                raise TreeFileError(f"unknown option :{key} at {_line_col(text, tok.pos)}")
            val = _expect_atom(form, i + 1, text, f"regex after :{key}")
            opts[key] = val
            i += 2
        else:
            child_tok = _expect_atom(form, i, text, "child id")
            try:
                child = int(child_tok.text)
            except ValueError:
                raise TreeFileError(
                    f"bad child id {child_tok.text!r} at {_line_col(text, child_tok.pos)}"
                ) from None
            i += 1
    if opts["lambda"] is None or opts["rho"] is None or child is None:
        raise TreeFileError(
            f"branch needs :lambda, :rho and a child id at {_line_col(text, head.pos)}"
        )

    def build(tok: _Tok) -> Regex:
        if tok.text.strip() == ".":
            return NO_CONSTRAINT
        try:
            return regexes.parse_regex(tok.text, table)
        except TreefstError as exc:
            raise TreeFileError(f"{exc} (regex at {_line_col(text, tok.pos)})") from exc

    branch = Branch(
        lam=build(opts["lambda"]), rho=build(opts["rho"]), child=child,
        lam_text=opts["lambda"].text, rho_text=opts["rho"].text,
    )
    return head.text, branch


def _parse_tree(form: list, table: SymbolTable, text: str) -> DecisionTree:
    phone_tok = _expect_atom(form, 1, text, "phone name")
    phone = phone_tok.text
    if phone not in table or phone == BOUNDARY:
        raise TreeFileError(f"tree phone {phone!r} not a usable symbol at "
                            f"{_line_col(text, phone_tok.pos)}")
    nodes: dict[int, Node] = {}
    leaves: dict[int, Leaf] = {}
    for sub in form[2:]:
        if not isinstance(sub, list) or not sub or not isinstance(sub[0], _Tok):
            raise TreeFileError(f"bad form in tree {phone!r}")
        kind = sub[0].text
        id_tok = _expect_atom(sub, 1, text, "node id")
        try:
            nid = int(id_tok.text)
        except ValueError:
            raise TreeFileError(
                f"bad id {id_tok.text!r} at {_line_col(text, id_tok.pos)}") from None
        if nid in nodes or nid in leaves:
            raise TreeFileError(f"duplicate id {nid} at {_line_col(text, id_tok.pos)}")
        if kind == "node":
            sides: dict[str, Branch] = {}
            for bform in sub[2:]:
                if not isinstance(bform, list):
                    raise TreeFileError(f"bad branch in node {nid}")
                side, branch = _parse_branch(bform, table, text)
                if side in sides:
                    raise TreeFileError(f"node {nid} has two {side} branches")
                sides[side] = branch
            if set(sides) != {"left", "right"}:
                raise TreeFileError(f"node {nid} needs exactly left and right branches")
            nodes[nid] = Node(nid, sides["left"], sides["right"])
        elif kind == "leaf":
            dist: dict[str, float] = {}
            for entry in sub[2:]:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise TreeFileError(f"bad (output prob) entry in leaf {nid}")
                out_tok, p_tok = entry
                out = out_tok.text
                if out not in table:
                    raise TreeFileError(
                        f"unknown output symbol {out!r} at {_line_col(text, out_tok.pos)}")
                try:
                    p = float(p_tok.text)
                except ValueError:
                    raise TreeFileError(
                        f"bad probability {p_tok.text!r} at {_line_col(text, p_tok.pos)}"
                    ) from None
                if not 0.0 < p <= 1.0:
                    raise TreeFileError(
                        f"probability out of (0,1] at {_line_col(text, p_tok.pos)}")
                if out in dist:
                    raise TreeFileError(f"duplicate output {out!r} in leaf {nid}")
                dist[out] = p
            if not dist:
                raise TreeFileError(f"leaf {nid} has empty distribution")
            total = sum(dist.values())
            if abs(total - 1.0) > 1e-6:
                raise TreeFileError(
                    f"leaf {nid} distribution sums to {total!r}, not 1 "
                    f"(at {_line_col(text, id_tok.pos)})")
            leaves[nid] = Leaf(nid, dist)
        else:
            raise TreeFileError(f"expected node or leaf at {_line_col(text, sub[0].pos)}")
    # resolve the root: the id never referenced as a child
    referenced: list[int] = []
    for node in nodes.values():
        for br in (node.left, node.right):
            if br.child not in nodes and br.child not in leaves:
                raise TreeFileError(f"tree {phone!r}: branch points at missing id {br.child}")
            referenced.append(br.child)
    if len(set(referenced)) != len(referenced):
        raise TreeFileError(f"tree {phone!r}: an id is referenced more than once")
    all_ids = set(nodes) | set(leaves)
    roots = all_ids - set(referenced)
    if len(roots) != 1:
        raise TreeFileError(f"tree {phone!r}: expected one root, found {sorted(roots)}")
    root = roots.pop()
    if root in leaves and nodes:
        raise TreeFileError(f"tree {phone!r}: internal nodes unreachable from leaf root")
    return DecisionTree(phone, root, nodes, leaves)


def parse_tree_file(text: str, loader: Callable[[str], str] | None = None,
                    base_dir: str = ".") -> Forest:
    """Parse a forest description. `loader` maps the paths named in
    (symbols ...) and (classes ...) forms to file contents; the default
    reads them relative to base_dir."""
    if loader is None:
        def loader(path: str) -> str:
            with open(os.path.join(base_dir, path), encoding="utf-8") as fh:
                return fh.read()
    table: SymbolTable | None = None
    tree_forms = []
    for form in _read_sexps(text):
        if not isinstance(form, list) or not form or not isinstance(form[0], _Tok):
            raise TreeFileError("top-level forms must be (symbols|classes|tree ...)")
        head = form[0]
        if head.text == "symbols":
            if table is not None:
                raise TreeFileError(f"second (symbols ...) at {_line_col(text, head.pos)}")
            path = _expect_atom(form, 1, text, "path").text
            table = parse_symbols(loader(path))
        elif head.text == "classes":
            if table is None:
                raise TreeFileError("(classes ...) before (symbols ...)")
            path = _expect_atom(form, 1, text, "path").text
            parse_classes(loader(path), table)
        elif head.text == "tree":
            tree_forms.append(form)
        else:
            raise TreeFileError(f"unknown form ({head.text} ...) at "
                                f"{_line_col(text, head.pos)}")
    if table is None:
        if tree_forms:
            raise TreeFileError("(tree ...) without a (symbols ...) declaration")
        table = SymbolTable([BOUNDARY])
    trees = [_parse_tree(form, table, text) for form in tree_forms]
    return Forest(trees, table)


def load_forest(path: str) -> Forest:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_tree_file(text, base_dir=os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# interpretation


def wrap(word: Sequence[str]) -> list[str]:
    return [BOUNDARY, *word, BOUNDARY]


def match_context(branch: Branch, x: Sequence[str], i: int, table: SymbolTable) -> bool:
    """Does position i of the boundary-wrapped string x satisfy the branch?

    The left context x[:i] is tested against U* λ (suffix-anchored), the
    right context x[i+1:] against ρ U* (prefix-anchored), both on the
    input projection.
    """
    if not 0 < i < len(x) - 1:
        raise TreefstError(f"position {i} does not point at an interior symbol")
    ids = [table.id(s) for s in x]
    cm = branch.context_matcher(table)
    return cm.left_ok(ids[:i]) and cm.right_ok(ids[i + 1:])


def interpret(tree: DecisionTree, x: Sequence[str], i: int,
              table: SymbolTable) -> tuple[int, dict[str, float]]:
    """Walk the tree for position i of boundary-wrapped x; returns the
    leaf id and its output weights (-ln p)."""
    if x[i] != tree.phone:
        raise TreefstError(f"x[{i}] = {x[i]!r} is not the tree's phone {tree.phone!r}")
    cur = tree.root
    while cur in tree.nodes:
        node = tree.nodes[cur]
        if match_context(node.left, x, i, table):
            cur = node.left.child
        elif match_context(node.right, x, i, table):
            cur = node.right.child
        else:
            raise PartitionViolationError(
                f"tree {tree.phone!r} node {node.id}: no branch matches "
                f"{' '.join(x)} at position {i}")
    return cur, tree.leaves[cur].weights


def interpret_forest(forest: Forest, word: Sequence[str]) -> list[dict[str, float]]:
    """Per-position output weights for an unwrapped input word. Positions
    whose symbol has no tree get the identity map at weight zero."""
    x = wrap(word)
    out = []
    for i, sym in enumerate(word, start=1):
        tree = forest.tree_for.get(sym)
        if tree is None:
            out.append({sym: 0.0})
        else:
            _, weights = interpret(tree, x, i, forest.table)
            out.append(weights)
    return out


def oracle_weight(forest: Forest, word: Sequence[str], outputs: Sequence[str]) -> float:
    """Weight the oracle relation assigns to (word, outputs)."""
    if len(word) != len(outputs):
        return math.inf
    total = 0.0
    for dist, out in zip(interpret_forest(forest, word), outputs):
        w = dist.get(out)
        if w is None:
            return math.inf
        total += w
    return total


# ---------------------------------------------------------------------------
# word enumeration (shared by validation, verification, and tests)


def phonotactic_words(forest: Forest, max_len: int) -> Iterable[tuple[str, ...]]:
    """All words of 1..max_len symbols: segments, optionally preceded by
    a stress mark when the table declares one. Stress never doubles and
    never ends a word."""
    segs = forest.segments()
    has_stress = STRESS in forest.table
    def extend(word: tuple[str, ...], budget: int):
        for seg in segs:
            w = word + (seg,)
            yield w
            if budget > 1:
                yield from extend(w, budget - 1)
        if has_stress and budget > 1:
            for seg in segs:
                w = word + (STRESS, seg)
                yield w
                if budget > 2:
                    yield from extend(w, budget - 2)
    yield from extend((), max_len)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationIssue:
    phone: str
    node_id: int
    kind: str  # "overlap" or "gap"
    witness: str

    def __str__(self):
        return (f"tree {self.phone} node {self.node_id}: {self.kind}, "
                f"witness: {self.witness}")


def _context_machines(forest: Forest, phone: str):
    """Realizable left/right context languages around an occurrence of
    phone, as machines over the pair inventory."""
    al = forest.alphabet
    seg_atom = regexes.Atom(forest.segments())
    group: Regex
    if STRESS in forest.table:
        group = regexes.Concat((regexes.Opt(regexes.Atom((STRESS,))), seg_atom))
        tail = regexes.Opt(regexes.Atom((STRESS,)))
    else:
        group = seg_atom
        tail = None
    if phone == STRESS:
        left = regexes.Concat((regexes.Boundary(), regexes.Star(group)))
        right_parts: tuple[Regex, ...] = (seg_atom, regexes.Star(group), regexes.Boundary())
    else:
        left_parts: tuple[Regex, ...] = (regexes.Boundary(), regexes.Star(group))
        if tail is not None:
            left_parts += (tail,)
        left = regexes.Concat(left_parts)
        right_parts = (regexes.Star(group), regexes.Boundary())
    right = regexes.Concat(right_parts)
    return regexes.compile_regex(left, al), regexes.compile_regex(right, al)


def _witness_names(m: fsa.Wfsa, table: SymbolTable) -> list[str]:
    strings = fsa.shortest_path(m, 1)
    if not strings:
        return []
    return [table.name(p.inp) for p in strings[0][0]]


def validate_forest(forest: Forest, max_len: int = 4,
                    sweep_budget: int = 5000) -> list[ValidationIssue]:
    """Branch-complementarity check: every internal node's branches must
    neither overlap nor leave a gap on realizable contexts.

    Two passes: an enumeration sweep over words up to max_len (yields
    readable witnesses, capped at sweep_budget words), then an algebraic
    pass by automata emptiness (covers all lengths). Returns one issue
    per offending node."""
    issues: list[ValidationIssue] = []
    flagged: set[tuple[str, int]] = set()
    table = forest.table

    for word in itertools.islice(phonotactic_words(forest, max_len), sweep_budget):
        x = wrap(word)
        for i, sym in enumerate(word, start=1):
            tree = forest.tree_for.get(sym)
            if tree is None:
                continue
            cur = tree.root
            while cur in tree.nodes:
                node = tree.nodes[cur]
                lmatch = match_context(node.left, x, i, table)
                rmatch = match_context(node.right, x, i, table)
                key = (tree.phone, node.id)
                if lmatch and rmatch and key not in flagged:
                    flagged.add(key)
                    issues.append(ValidationIssue(
                        tree.phone, node.id, "overlap", " ".join(x)))
                if not lmatch and not rmatch:
                    if key not in flagged:
                        flagged.add(key)
                        issues.append(ValidationIssue(
                            tree.phone, node.id, "gap", " ".join(x)))
                    break
                cur = node.left.child if lmatch else node.right.child

    ustar = fsa.universal(forest.alphabet)
    for tree in forest.trees:
        vl, vr = _context_machines(forest, tree.phone)
        for node in tree.nodes.values():
            key = (tree.phone, node.id)
            if key in flagged:
                continue

            def lam_machine(br: Branch) -> fsa.Wfsa:
                return fsa.intersect(
                    fsa.concat(ustar, regexes.compile_regex(br.lam, forest.alphabet)), vl)

            def rho_machine(br: Branch) -> fsa.Wfsa:
                return fsa.intersect(
                    fsa.concat(regexes.compile_regex(br.rho, forest.alphabet), ustar), vr)

            ll, lr = lam_machine(node.left), lam_machine(node.right)
            rl, rr = rho_machine(node.left), rho_machine(node.right)
            lam_overlap = fsa.intersect(ll, lr)
            rho_overlap = fsa.intersect(rl, rr)
            if not lam_overlap.is_empty and not rho_overlap.is_empty:
                wit = (_witness_names(lam_overlap, table)
                       + [tree.phone] + _witness_names(rho_overlap, table))
                flagged.add(key)
                issues.append(ValidationIssue(tree.phone, node.id, "overlap", " ".join(wit)))
                continue

            def missed(m: fsa.Wfsa, v: fsa.Wfsa) -> fsa.Wfsa:
                return fsa.intersect(v, fsa.complement(fsa.determinize_unweighted(m)))

            nll, nlr = missed(ll, vl), missed(lr, vl)
            nrl, nrr = missed(rl, vr), missed(rr, vr)
            for lm, rm in ((fsa.intersect(nll, nlr), vr),
                           (nll, nrr),
                           (nlr, nrl),
                           (vl, fsa.intersect(nrl, nrr))):
                if not lm.is_empty and not rm.is_empty:
                    wit = (_witness_names(lm, table)
                           + [tree.phone] + _witness_names(rm, table))
                    flagged.add(key)
                    issues.append(ValidationIssue(tree.phone, node.id, "gap", " ".join(wit)))
                    break
    return issues
