"""Hasse-Schmidt jet algebras of finitely presented algebras, with brute-force arc checks over finite fields."""

from .coeffs import GF, QQ, ZZ, CoefficientRing
from .poly import JetVariable, Monomial, Polynomial
from .parser import parse_poly
from .series import TruncatedSeries, ts_eval_at_zero, ts_mul, ts_scale_t
from .prolong import (
    HigherDerivation,
    ProlongationContext,
    check_higher_derivation,
    derivation_arc_roundtrip,
    leibniz_check,
    prolong,
)
from .groebner import (
    GroebnerBasis,
    MonomialOrder,
    buchberger,
    ideal_equal,
    ideal_membership,
    normal_form,
    power_ideal,
)
from .presentation import (
    GradedAlgebraMap,
    Presentation,
    dilation_map,
    fiber_presentation,
    first_sequence_check,
    gg_line_sheaf_degree,
    induced_map,
    jet_presentation,
    leading_form_restriction,
    localize,
    product_presentation,
    relative_jet_presentation,
    truncation_map,
    zero_section_map,
)
from .finite import FiniteRing
from .arcs import (
    HomPoint,
    count_points,
    desideratum_check,
    enumerate_arcs,
    enumerate_homs,
    gm_orbits,
    jet_map_image,
    truncation_surjectivity,
)

__version__ = "0.1.0"
