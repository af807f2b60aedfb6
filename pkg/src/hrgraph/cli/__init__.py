from .export import PALETTE, to_dot, to_json
from .kgformat import KgDocument, KgSemanticError, KgSyntaxError, dumps, loads, parse, serialize
from .main import main

__all__ = [
    "KgDocument",
    "KgSemanticError",
    "KgSyntaxError",
    "PALETTE",
    "dumps",
    "loads",
    "main",
    "parse",
    "serialize",
    "to_dot",
    "to_json",
]
