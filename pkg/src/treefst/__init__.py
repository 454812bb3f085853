"""Decision trees over symbol strings, compiled to weighted machines.

A decision tree assigns each occurrence of a symbol a weighted set of
rewrites, choosing the leaf by regular-expression questions about the
surrounding string. This package interprets such trees directly,
compiles them into weighted finite-state machines over an
(input, output) pair alphabet, and checks the two against each other.
"""

from .errors import (
    AlphabetMismatchError,
    DegenerateForestError,
    EmptyAtomError,
    EnumerationBudgetError,
    NoParseError,
    PartitionViolationError,
    RegexSyntaxError,
    RequiresDeterministicError,
    RequiresUnweightedError,
    TreeFileError,
    TreefstError,
    UnknownSymbolError,
    UnreachableLeafError,
)
from .fsa import Wfsa, apply_to_string, intersect, shortest_path
from .fstio import read_alphabet, read_fst, write_alphabet, write_fst
from .regexes import compile_regex, parse_regex, print_regex
from .rulecompile import (
    WeightedRule,
    compile_forest,
    compile_report,
    compile_rule,
    compile_tree,
    decode,
    extract_rule,
    verify_forest,
)
from .semiring import ONE, ZERO, from_probability, wplus, wtimes
from .symbols import BOUNDARY, PAD, STRESS, PairAlphabet, PairSymbol, SymbolTable
from .testgen import GenConfig, gen_forest, gen_rule, oracle_rule_weight, selftest
from .treemodel import (
    DecisionTree,
    Forest,
    interpret,
    interpret_forest,
    load_forest,
    oracle_weight,
    parse_tree_file,
    validate_forest,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
