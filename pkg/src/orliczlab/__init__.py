"""Numerical toolkit for exponential Orlicz and grand-Lebesgue spaces."""
from . import catalog, fourier, fundamental, measures, norms, psi_calculus
from .measures import GridFunction, SpaceSpec, indicator, line, sample, tail, torus
from .norms import g_abab, g_psi, g_psi_nu, lp, lp_nu, orlicz
from .psi_calculus import (n_alpha, n_from_psi, n_mr, psi_from_young, psi_power,
                           legendre, conjugate)

__version__ = "0.1.0"
