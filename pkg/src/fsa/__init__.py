"""Finite sections of band operators on l^p(Z).

Stability indicators, limsup formulas for norms, inverse norms, condition
numbers and pseudospectra, convergence verdicts and pollution attribution.
"""

from .asymptotics import (Analysis, AsymptoticsReport, InvNorm, Kappa, Norm, PseudoSet, Quantity,
                          QuantityKind, Verdict, classify_attribution, convergence_verdict,
                          limsup_inv_norm, limsup_kappa, limsup_norm, limsup_pseudospectrum,
                          pollution_attribution)
from .indicators import (Indicator, IndicatorSet, Kind, stab_composed, stab_h, stab_pure,
                         stab_shifted)
from .limit_ops import Direction, LimitOperatorSet, limit_along, limit_minus, limit_plus
from .operator_model import (BandOperator, FiniteMatrix, OperatorDomain, OperatorError, adjoint,
                             compress, entry, materialize, semiinfinite_embed, shift_conjugate)
from .periodic import EventuallyPeriodicSequence
from .sequence_algebra import (FSExpression, Leaf, Product, Scale, Sum, band_product,
                               finite_section, pointwise_limit)
from .spectral_kernel import (NormEstimate, PointSet, PseudospectrumGrid, hausdorff_distance,
                              indicator_inv_norm, indicator_norm, inv_norm, kappa, lower_norm, mu,
                              op_norm, pseudo_grid, set_liminf, set_limsup)

__version__ = "0.1.0"
