"""Exact symbolic engine for a boundary formula of the Mumford-type class
``psi^g - lambda_1 psi^(g-1) + ... + (-1)^g lambda_g`` on the one-pointed
genus-g moduli space."""

from .algebra import LaurentSeries, SymbolicPoly, laurent_coefficient, laurent_expand_rational
from .builders import (
    RelationReport,
    build_c,
    build_c_prime,
    mumford_lhs,
    remark1_relation,
    remark3_relation,
    theorem_rhs,
)
from .expander import ExpansionReport, analyze, expand_full, expand_step
from .localization import replay_derivation, verify_cprime
from .ops import comparison_rewrite, forget_pullback, forget_pushforward, glue_pushforward, psi_multiply
from .strata import Ambient, Decoration, Stratum, TautClass, canonical_form, expand_decorations

__version__ = "0.1.0"
