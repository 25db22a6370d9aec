"""Concept classes on the binary n-cube.

Tools for VC/shattering analysis, intersection closures and the k-close
cube criterion, shortest-path closure embeddings, and construction plus
verification of unlabelled sample compression schemes.
"""

from .core import (
    ConceptClass,
    Cube,
    DimensionMismatch,
    Edge,
    FormatError,
    Vertex,
    complement,
    dumps_cls,
    enumerate_cubes,
    hamming,
    intersect,
    is_shortest_path_closed,
    leq,
    loads_cls,
    one_inclusion_edges,
    project,
    read_cls,
    reduction_tail,
    write_cls,
)

__all__ = [
    "ConceptClass",
    "Cube",
    "DimensionMismatch",
    "Edge",
    "FormatError",
    "Vertex",
    "complement",
    "dumps_cls",
    "enumerate_cubes",
    "hamming",
    "intersect",
    "is_shortest_path_closed",
    "leq",
    "loads_cls",
    "one_inclusion_edges",
    "project",
    "read_cls",
    "reduction_tail",
    "write_cls",
]

__version__ = "0.1.0"
