"""Point counts over finite fields, zeta functions and checks of the Weil conjectures."""

from .algebra import (IntPoly, MultiPoly, TruncatedSeries, charpoly_series_oracle, det_one_minus_tM, mp_eval,
                      series_add, series_exp, series_from_intpoly, series_log, series_mul, series_scale)
from .charsum import (CharacterSumResult, additive_character, exponential_sum, kloosterman,
                      ramanujan_tau)
from .counting import (ClosedPointCensus, CountTable, VarietySpec, closed_point_census, count_points,
                       count_table, load_variety, variety_from_dict)
from .errors import *  # noqa: F401,F403
from .ffield import (FieldCtx, FieldElement, elements, embed, field, find_irreducible, frobenius,
                     trace_to_prime)
from .weil import (WeilReport, complete_intersection_bound, curve_analysis, functional_equation_check,
                   hasse_weil_bound, rh_roots, weight_separation)
from .zeta import (RationalFn, euler_product_series, hankel_rationality, reconstruct_rational,
                   zeta_series)

__version__ = "0.1.0"
