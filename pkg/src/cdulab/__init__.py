"""Exact c-differential uniformity laboratory over small finite fields."""

from .analyzer import (
    CDiffReport,
    SpectrumReport,
    c_derivative,
    classical_delta,
    delta_for_c,
    is_pcn_by_permutation,
    oracle_delta,
    spectrum,
)
from .funcs import (
    FuncTable,
    LinearizedPoly,
    SparsePoly,
    compose_affine,
    kernel_intersection,
    parse_linearized,
    parse_poly,
    read_table_csv,
    write_table_csv,
)
from .gf import CyclotomicPartition, Field, FieldElement, make_field

__version__ = "0.1.0"

__all__ = [
    "CDiffReport",
    "SpectrumReport",
    "CyclotomicPartition",
    "Field",
    "FieldElement",
    "FuncTable",
    "LinearizedPoly",
    "SparsePoly",
    "c_derivative",
    "classical_delta",
    "compose_affine",
    "delta_for_c",
    "is_pcn_by_permutation",
    "kernel_intersection",
    "make_field",
    "oracle_delta",
    "parse_linearized",
    "parse_poly",
    "read_table_csv",
    "spectrum",
    "write_table_csv",
]
