"""Certified arbitrary-precision evaluation of multiple polylogarithms,
Nielsen polylogarithms, iterated-integral words and Apery-like
central-binomial sums, with a numerical verifier for a registry of
identities connecting them.

Every evaluator returns a :class:`~mplcert.precision.CertifiedReal`
carrying an absolute error bound: truncation is controlled by explicit
tail estimates (geometric or integral-comparison), and arithmetic
propagates bounds conservatively.
"""

from .errors import (MplcertError, CapacityError, DivergenceError,
                     AdmissibilityError, DomainError, QuadratureError)
from .precision import (PrecisionContext, CertifiedReal, ExactRational,
                        make_context, bernoulli, zeta_even, zeta_int,
                        golden_ratio, golden_ratio_sq, ln_golden_ratio, pi_const)
from .polylogs import Composition, MPLArgument, li, mpl, mpl_single, mzv, nielsen
from .iterint import (IteratedWord, word_from_mpl, mpl_from_word, eval_word,
                      h_m1001, quadrature, nielsen_integrand)
from .apery import (WeightFactor, HarmonicWeight, AperySumSpec, HarmonicTables,
                    harmonic_tables, central_binomial, apery_sum, y_of_u, dk_rhs)
from .stuffle import PartialSumSymbol, FormalSum, quasi_shuffle, verify_stuffle_numeric
from .registry import (IdentityRecord, VerificationReport, builtin_registry,
                       lookup, eval_expr, verify, verify_all, aggregate_verdict,
                       report_record)

__version__ = "0.1.0"

__all__ = [
    "MplcertError", "CapacityError", "DivergenceError", "AdmissibilityError",
    "DomainError", "QuadratureError",
    "PrecisionContext", "CertifiedReal", "ExactRational", "make_context",
    "bernoulli", "zeta_even", "zeta_int", "golden_ratio", "golden_ratio_sq",
    "ln_golden_ratio", "pi_const",
    "Composition", "MPLArgument", "li", "mpl", "mpl_single", "mzv", "nielsen",
    "IteratedWord", "word_from_mpl", "mpl_from_word", "eval_word", "h_m1001",
    "quadrature", "nielsen_integrand",
    "WeightFactor", "HarmonicWeight", "AperySumSpec", "HarmonicTables",
    "harmonic_tables", "central_binomial", "apery_sum", "y_of_u", "dk_rhs",
    "PartialSumSymbol", "FormalSum", "quasi_shuffle", "verify_stuffle_numeric",
    "IdentityRecord", "VerificationReport", "builtin_registry", "lookup",
    "eval_expr", "verify", "verify_all", "aggregate_verdict", "report_record",
    "__version__",
]
