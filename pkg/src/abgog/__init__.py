"""Fundamental groups of graphs of finitely generated abelian groups."""

from .abelian import AbElement, AbHom, FgAbGroup
from .gog import GraphOfGroups, SpanningTree, load, maximal_tree, validate
from .words import GroupWord, parse_word, reduce

__all__ = ["AbElement", "AbHom", "FgAbGroup", "GraphOfGroups", "SpanningTree", "load",
           "maximal_tree", "validate", "GroupWord", "parse_word", "reduce"]
__version__ = "0.1.0"
