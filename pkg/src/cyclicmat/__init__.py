"""Density of cyclic matrices in subspace-stabilizer matrix algebras over
finite fields: exact arithmetic, enumeration, Monte Carlo, and bounds."""

from .census import (BudgetExceededError, DensityReport, check_bounds,
                     classify, enumerate_exact, monte_carlo, sweep,
                     wilson_interval)
from .counting import (BoundsReport, bounds_report, coprime_avoiding_lower,
                       coprime_count, coprime_count_recurrence, np_bounds,
                       omega, orders, pentagonal_check, pi3_lower, pi3_upper,
                       qbinom, table_series, theorem_bounds)
from .cyclictest import (GeneratedAlgebra, ProbeReport, parse_generator_file,
                         probe, random_element, spin)
from .gf import FieldElement, FieldSpec, field_from_order, field_new
from .matspace import (Mat, StabMat, build_xfgh, char_poly, is_cyclic,
                       kernel_of_poly, krylov_span, min_poly, order_poly,
                       stab_embed, stab_project, stab_sample)
from .polyring import Poly, companion, irr_enumerate, is_irreducible, poly_gcd

__version__ = "0.1.0"

__all__ = [
    "BoundsReport", "BudgetExceededError", "DensityReport", "FieldElement",
    "FieldSpec", "GeneratedAlgebra", "Mat", "Poly", "ProbeReport", "StabMat",
    "bounds_report", "build_xfgh", "char_poly", "check_bounds", "classify",
    "companion", "coprime_avoiding_lower", "coprime_count",
    "coprime_count_recurrence", "enumerate_exact", "field_from_order",
    "field_new", "irr_enumerate", "is_cyclic", "is_irreducible",
    "kernel_of_poly", "krylov_span", "min_poly", "monte_carlo", "np_bounds",
    "omega", "order_poly", "orders", "parse_generator_file",
    "pentagonal_check", "pi3_lower", "pi3_upper", "poly_gcd", "probe",
    "qbinom", "random_element", "spin", "stab_embed", "stab_project",
    "stab_sample", "sweep", "table_series", "theorem_bounds",
    "wilson_interval",
]
