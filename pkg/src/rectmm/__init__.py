"""Recursive bilinear rectangular matrix multiplication: algorithms as
(U, V, W) triples, exact validation, recursive execution, computational-DAG
structure, edge expansion, and two-level memory-traffic analysis."""

__version__ = "0.1.0"

from .bilinear import BilinearAlgorithm, tensor_product, transform, validate
from .catalog import load_catalog

__all__ = [
    "BilinearAlgorithm",
    "load_catalog",
    "tensor_product",
    "transform",
    "validate",
    "__version__",
]
