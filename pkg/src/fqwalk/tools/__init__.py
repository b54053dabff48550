"""
Tools for fqwalk - built-in graph catalogue and report formatting.
"""

from .builtin_graphs import BUILTIN_GRAPHS, builtin_names, load_graph, truncated_icosahedron
from .formatting import format_complex, format_complex_exact, render

__all__ = [
    "BUILTIN_GRAPHS",
    "builtin_names",
    "load_graph",
    "truncated_icosahedron",
    "format_complex",
    "format_complex_exact",
    "render",
]
