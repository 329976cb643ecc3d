"""Additive bases ``A = A(W_1) ∪ ... ∪ A(W_h)`` built from partitions of the naturals.

``A(W)`` is the set of integers whose binary digit support is a finite
nonempty subset of ``W``. The package constructs these bases from
eventually periodic partitions, computes h-fold sumsets over exact
windows, checks the known sufficient conditions for minimality, and builds
and verifies the elements that certify each ``E_a`` is nonempty.
"""

from .errors import MinbasisError
from .minimality import (EMPIRICAL_SUPPORTED, REFUTED_IN_WINDOW, THEOREM_PROVEN, THM1, THM2,
                         MinimalityReport, WitnessRecord, e_a_from_elements, e_a_window,
                         removability_scan, verify_witness, witness, witness_suite)
from .partition import (ConditionReport, PartitionSpec, builtin, counting, ling_tang,
                        nathanson, part_of, r_of, resolve_spec, run_condition, sun,
                        thm1_condition, thm2_condition, thmB_predict, thmE_condition,
                        validate_spec)
from .radix import (Decomposition, classify_element, enumerate_part_elements, lemma2_decompose,
                    pack_support, support_of, verify_decomposition)
from .search import classify_partitions, enumerate_periodic_specs, run_sweep, sweep_specs
from .sumset import (WindowSet, build_basis_window, coverage_threshold, gaps, h_fold_sumset)

__version__ = "0.1.0"
