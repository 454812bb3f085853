"""Command line interface."""

from __future__ import annotations

import json
import os
import sys

import click

from . import fsa, fstio, regexes, rulecompile, testgen, treemodel
from .errors import TreefstError
from .symbols import PairAlphabet, PairSymbol


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


def _load_forest(path: str) -> treemodel.Forest:
    try:
        return treemodel.load_forest(path)
    except (TreefstError, OSError) as e:
        raise _fail(str(e))


def _read_machine(path: str) -> fsa.Wfsa:
    """Read an FST with its sidecar alphabet from the file's directory."""
    try:
        alphabet = fstio.read_alphabet(os.path.dirname(os.path.abspath(path)))
        return fstio.read_fst(path, alphabet)
    except (TreefstError, OSError) as e:
        raise _fail(str(e))


def _split_input(text: str) -> list[str]:
    symbols = text.split()
    if not symbols:
        raise _fail("empty input string")
    return symbols


@click.group()
@click.version_option(package_name="treefst")
def main():
    """Compile decision trees over symbol strings into weighted
    finite-state machines, and work with the results."""


@main.command("compile")
@click.argument("forest_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", "out_dir", required=True, type=click.Path(file_okay=False),
              help="Output directory for FSTs, sidecars, and report.json.")
def compile_cmd(forest_file: str, out_dir: str) -> None:
    """Compile FOREST_FILE to one FST per tree plus forest.fst."""
    forest = _load_forest(forest_file)
    try:
        report = rulecompile.compile_report(forest)
    except TreefstError as e:
        raise _fail(str(e))
    os.makedirs(out_dir, exist_ok=True)
    fstio.write_alphabet(out_dir, forest.alphabet)
    for row in report.rows:
        fstio.write_fst(report.trees[row.phone], os.path.join(out_dir, f"{row.phone}.fst"))
        click.echo(f"{row.phone}.fst: {row.states} states, {row.arcs} arcs")
    fstio.write_fst(report.forest, os.path.join(out_dir, "forest.fst"))
    click.echo(f"forest.fst: {report.forest.num_states} states, {report.forest.num_arcs} arcs")
    payload = {
        "trees": [
            {"phone": r.phone, "leaves": r.leaves, "states": r.states,
             "arcs": r.arcs, "seconds": r.seconds}
            for r in report.rows
        ],
        "forest": {"states": report.forest.num_states, "arcs": report.forest.num_arcs},
    }
    with open(os.path.join(out_dir, "report.json"), "w") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


@main.command("apply")
@click.argument("fst_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--input", "input_text", required=True, help="Space-separated input symbols.")
@click.option("-n", "num", default=1, show_default=True, help="How many best outputs to print.")
def apply_cmd(fst_file: str, input_text: str, num: int) -> None:
    """Print the N best outputs for an input string, one per line,
    as output<TAB>weight."""
    machine = _read_machine(fst_file)
    table = machine.alphabet.table
    try:
        restricted = fsa.apply_to_string(machine, _split_input(input_text))
        best = fsa.shortest_path(restricted, num)
    except TreefstError as e:
        raise _fail(str(e))
    if not best:
        raise _fail("input is rejected: no output has finite weight")
    for pairs, weight in best:
        outputs = " ".join(table.name(p.out) for p in pairs[1:-1])
        click.echo(f"{outputs}\t{weight:.4f}")


@main.command("interpret")
@click.argument("forest_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--input", "input_text", required=True, help="Space-separated input symbols.")
def interpret_cmd(forest_file: str, input_text: str) -> None:
    """Print the interpreter's realization table, one line per position."""
    forest = _load_forest(forest_file)
    word = _split_input(input_text)
    try:
        dists = treemodel.interpret_forest(forest, word)
    except TreefstError as e:
        raise _fail(str(e))
    for i, (symbol, dist) in enumerate(zip(word, dists), start=1):
        cells = "  ".join(
            f"{out} {w:.4f}" for out, w in sorted(dist.items(), key=lambda kv: (kv[1], kv[0])))
        click.echo(f"{i} {symbol}: {cells}")


@main.command("verify")
@click.argument("forest_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-len", default=3, show_default=True,
              help="Verify all inputs up to this many symbols.")
def verify_cmd(forest_file: str, max_len: int) -> None:
    """Compare the compiled forest machine against the interpreter on
    every (input, output) pair up to --max-len; exit 1 on any mismatch."""
    forest = _load_forest(forest_file)
    try:
        mismatches = rulecompile.verify_forest(forest, max_len=max_len)
    except TreefstError as e:
        raise _fail(str(e))
    if mismatches:
        m = mismatches[0]
        click.echo(f"MISMATCH: input '{' '.join(m.word)}' output '{' '.join(m.outputs)}': "
                   f"compiled {m.compiled} vs interpreter {m.oracle}")
        click.echo(f"{len(mismatches)} mismatch(es) found")
        sys.exit(1)
    click.echo(f"verified: compiled machine matches the interpreter "
               f"on all inputs up to length {max_len}")


@main.command("validate")
@click.argument("forest_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-len", default=4, show_default=True,
              help="Sweep words up to this many symbols for witnesses.")
def validate_cmd(forest_file: str, max_len: int) -> None:
    """Check branch complementarity at every node; exit 1 with a witness
    on overlap or gap."""
    forest = _load_forest(forest_file)
    issues = treemodel.validate_forest(forest, max_len=max_len)
    for issue in issues:
        click.echo(str(issue))
    if issues:
        sys.exit(1)
    click.echo("validate: OK")


@main.command("stats")
@click.argument("out_dir", type=click.Path(exists=True, file_okay=False))
def stats_cmd(out_dir: str) -> None:
    """Size/time report for a compiled directory: leaves, states, arcs,
    and compile seconds per tree, plus totals."""
    report_path = os.path.join(out_dir, "report.json")
    try:
        with open(report_path) as f:
            payload = json.load(f)
        alphabet = fstio.read_alphabet(out_dir)
    except (OSError, ValueError, TreefstError) as e:
        raise _fail(str(e))
    rows = []
    for entry in payload.get("trees", []):
        machine = fstio.read_fst(os.path.join(out_dir, f"{entry['phone']}.fst"), alphabet)
        states, arcs = fsa.stats(machine)
        rows.append((entry["phone"], entry["leaves"], states, arcs, entry["seconds"]))
    width = max([5] + [len(r[0]) for r in rows])
    click.echo(f"{'tree':<{width}}  {'leaves':>6}  {'states':>7}  {'arcs':>8}  {'seconds':>8}")
    for phone, leaves, states, arcs, seconds in rows:
        click.echo(f"{phone:<{width}}  {leaves:>6}  {states:>7}  {arcs:>8}  {seconds:>8.3f}")
    totals = [sum(r[i] for r in rows) for i in (1, 2, 3, 4)]
    click.echo(f"{'TOTAL':<{width}}  {totals[0]:>6}  {totals[1]:>7}  {totals[2]:>8}  {totals[3]:>8.3f}")
    forest_path = os.path.join(out_dir, "forest.fst")
    if os.path.exists(forest_path):
        states, arcs = fsa.stats(fstio.read_fst(forest_path, alphabet))
        click.echo(f"forest machine: {states} states, {arcs} arcs")


@main.command("decode")
@click.option("--grammar", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dict", "dict_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--phi", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--lattice", required=True, type=click.Path(exists=True, dir_okay=False))
def decode_cmd(grammar: str, dict_file: str, phi: str, lattice: str) -> None:
    """Best word string for a phone lattice, through the grammar, the
    dictionary closure, and the realization machine."""
    g = _read_machine(grammar)
    d = _read_machine(dict_file)
    p = _read_machine(phi)
    a = _read_machine(lattice)
    try:
        words, weight = rulecompile.decode(g, d, p, a)
    except TreefstError as e:
        raise _fail(str(e))
    click.echo(f"{' '.join(words)}\t{weight:.4f}")


@main.command("regex")
@click.argument("expression")
@click.option("--symbols", "symbols_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--classes", "classes_file", type=click.Path(exists=True, dir_okay=False))
def regex_cmd(expression: str, symbols_file: str, classes_file: str | None) -> None:
    """Parse a context expression, print its canonical form, compile it
    over the identity inventory, and print machine stats."""
    from .symbols import parse_classes, parse_symbols
    try:
        with open(symbols_file) as f:
            table = parse_symbols(f.read())
        if classes_file:
            with open(classes_file) as f:
                parse_classes(f.read(), table)
        ast = regexes.parse_regex(expression, table)
        click.echo(regexes.print_regex(ast))
        identity = PairAlphabet(table, [PairSymbol(i, i) for i in range(len(table))])
        machine = regexes.compile_regex(ast, identity)
        states, arcs = fsa.stats(machine)
        click.echo(f"{states} states, {arcs} arcs")
    except (TreefstError, OSError) as e:
        raise _fail(str(e))


@main.command("selftest")
@click.option("--seed", default=0, show_default=True)
@click.option("--cases", default=5, show_default=True)
def selftest_cmd(seed: int, cases: int) -> None:
    """Random forests through the full pipeline and random rules against
    the positional oracle; exit 1 on any failure."""
    if not testgen.selftest(seed=seed, cases=cases, out=click.echo):
        sys.exit(1)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("treefst.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
