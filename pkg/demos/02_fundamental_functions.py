"""Fundamental functions of grand spaces: closed forms against indicators.

For G(alpha; p^(1/m)) the supremum over p of delta^(1/p) p^(-1/m) moves from
the endpoint p = alpha to the interior point p = m|log delta| once delta drops
below exp(-alpha/m). The two-sided family G(a,b,alpha,beta) glues a left and
a right branch at h = min((a+b)/2, 2a). Both are compared with the norm of an
actual indicator function on a graded grid.
"""
import numpy as np

from orliczlab import fundamental as fu
from orliczlab import norms
from orliczlab.measures import SpaceSpec
from orliczlab.psi_calculus import psi_power

space = SpaceSpec("torus", 2 ** 14)
alpha, m = 2.0, 1.0
psi = psi_power(m)
# below about 1e-4 the indicator cannot be smaller than one grid cell
deltas = np.geomspace(1e-3, 0.9, 8)
closed = fu.closed_form_curve("G(alpha,m)", deltas, alpha=alpha, m=m)
emp = fu.phi_empirical(lambda f: norms.g_psi(f, alpha, psi), space, deltas)
print("delta        closed      indicator   branch")
for d, c, e, b in zip(deltas, closed.values, emp.values, closed.branch):
    print(f"{d:9.2e}  {c:10.6f}  {e:10.6f}   {b}")
print("quasi-concave:", closed.quasi_concave(), emp.quasi_concave())

a, b, al, be = 1.5, 4.0, 1.0, 0.5
print(f"\nG(a={a}, b={b}, alpha={al}, beta={be}), h = {fu.abab_branches(1.0, a, b, al, be)['h']}")
for d in (1e-8, 1e-3, 1.0, 1e3, 1e8):
    v, br = fu.phi_g_abab(d, a, b, al, be, with_branch=True)
    asym = fu.abab_asymptotes(d, a, b, al, be)
    extra = "  ".join(f"{k}={x:.4g}" for k, x in asym.items())
    print(f"  delta={d:8.0e}  phi={v:.6g}  [{br}]  {extra}")
