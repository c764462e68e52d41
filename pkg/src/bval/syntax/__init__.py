from .ast import Machine, Node, free_vars, is_pred, walk
from .lexer import Token, tokenize
from .parser import parse_any, parse_expr, parse_formula, parse_machine, parse_pred
from .printer import pretty_print
from .roundtrip import RoundtripReport, roundtrip_check

__all__ = [
    "Machine",
    "Node",
    "RoundtripReport",
    "Token",
    "free_vars",
    "is_pred",
    "parse_any",
    "parse_expr",
    "parse_formula",
    "parse_machine",
    "parse_pred",
    "pretty_print",
    "roundtrip_check",
    "tokenize",
    "walk",
]
