"""Symmetrized polynomial calculus for non-commuting matrix tuples."""

from ._backend import BACKEND
from .kernels import Certificate, KernelKind, KernelSpec, certify_positivity, m_bound, r_bound
from .multipoly import Poly, abs_majorant, gamma, lambda_, lambda_mu, lambda_mu_inverse, scale_vars, slice_
from .ncalc import MatrixTuple, TupleConstraint, op_norm, spectral_radius, symm_apply, symm_monomial
from .polynorm import Domain, NormEstimate, coeff_upper_bound, sup_norm

__all__ = [
    "BACKEND", "Certificate", "KernelKind", "KernelSpec", "certify_positivity", "m_bound", "r_bound", "Poly", "abs_majorant", "gamma", "lambda_", "lambda_mu", "lambda_mu_inverse",
    "scale_vars", "slice_", "MatrixTuple", "TupleConstraint", "op_norm", "spectral_radius",
    "symm_apply", "symm_monomial", "Domain", "NormEstimate", "coeff_upper_bound", "sup_norm",
]
__version__ = "0.1.0"
