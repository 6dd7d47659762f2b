"""qcluster: exact arithmetic for quantum cluster algebras.

Quantum torus elements, cluster mutations (quantum and tropical), the
q-difference Toda chain with its Baxter operators and fundamental
Hamiltonians, q-Whittaker polynomials and the algebraic Whittaker transform,
the residue algebra of rational q-difference operators, and the rank-1
gluing verification harness.
"""

from .coeffs import ExponentError, QCoeff, QFrac
from .quiver import (CompatiblePair, Mutate, QuasiPermutation, Quiver,
                     QuiverError, script_from_json, script_to_json)
from .torus import (NotLaurentError, RationalTorusElement, TorusElement,
                    dilog_adjoint, ordered_product, try_laurent,
                    weyl_monomial, apply_quasi_permutation)
from .tropical import SignCoherenceError, TropState, run_tropical, trop_equal
from .mutation import (ScriptRunner, is_one_step_laurent, mutate_x,
                       one_step_laurent_check)
from .qseries import (FormalSeries, dilog_series, dilog_inverse_series,
                      pentagon_check, pentasum_check, qbinomial)

__all__ = [
    "ExponentError", "QCoeff", "QFrac",
    "CompatiblePair", "Mutate", "QuasiPermutation", "Quiver", "QuiverError",
    "script_from_json", "script_to_json",
    "NotLaurentError", "RationalTorusElement", "TorusElement",
    "dilog_adjoint", "ordered_product", "try_laurent", "weyl_monomial",
    "apply_quasi_permutation",
    "SignCoherenceError", "TropState", "run_tropical", "trop_equal",
    "ScriptRunner", "is_one_step_laurent", "mutate_x", "one_step_laurent_check",
    "FormalSeries", "dilog_series", "dilog_inverse_series", "pentagon_check",
    "pentasum_check", "qbinomial",
]

__version__ = "0.1.0"
