"""Exact characters of symmetric and alternating groups, and trace tools."""

from .alternating import (
    AltChar,
    AltClass,
    alt_characters,
    alt_classes,
    alt_orthogonality_ok,
    alt_table,
    class_of,
    is_trivial_char,
    max_nontrivial_value,
    normalized_value,
    restrict_to_alt,
    splits_in_alt,
    standard_normalized_value,
)
from .partitions import Partition, class_size, cycle_types, dimension, parse_partition, partitions
from .surds import AltCharValue, Surd, parse_quadratic
from .symmetric import SymChar, mn_value, sym_orthogonality_defect, sym_table
from .tables import alt_table_csv, sym_table_csv, table_json
from .traces import (
    ClassFunction,
    TupleElement,
    UndefinedValue,
    alt_class_function,
    alt_elements,
    constant_function,
    delta_e,
    exact_psd,
    gram_matrix,
    gram_min_eigenvalue,
    gram_psd_check,
    random_even_perm,
    thoma_tensor,
    trivial_extension,
)

__all__ = [name for name in dir() if not name.startswith("_")]
