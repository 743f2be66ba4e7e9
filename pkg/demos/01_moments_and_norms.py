"""Walk through the moment growth of g_m(x) = |log x|^(1/m) on the unit interval.

The p-th moment has the closed form Gamma(p/m + 1)^(1/p), so |g_m|_p grows like
(p/(e m))^(1/m). Dividing by psi(p) = p^(1/m) gives a bounded ratio, which is
what membership in the grand space G(p^(1/m)) means. The Orlicz norm with
N(u) = exp(u^m) - 1 is computed alongside and stays within a modest factor.
"""
import math

from orliczlab import catalog, norms
from orliczlab.measures import SpaceSpec
from orliczlab.psi_calculus import n_mr, psi_power

space = SpaceSpec("torus", 2 ** 16)
for m in (1, 2):
    g = catalog.make("g_m", m=m).sample(space)
    print(f"\ng_{m}: moments against Gamma(p/m+1)^(1/p)")
    for p in (2, 8, 32, 64):
        exact = math.exp(math.lgamma(p / m + 1) / p)
        print(f"  p={p:3d}  grid {norms.lp(g, p):9.5f}  exact {exact:9.5f}")

    psi = psi_power(m)
    grand = norms.g_psi(g, 1.0, psi)
    orl = norms.orlicz(g, n_mr(m))
    print(f"  sup_p |g|_p / p^(1/m) = {grand.value:.4f} at p={grand.argmax_p:.2f}")
    print(f"  Orlicz norm             = {orl.value:.4f}  (ratio {orl.value / grand.value:.3f})")

# the same L_2 norm through the distribution function
g = catalog.make("g_m", m=2).sample(space)
print(f"\nlayer cake |g_2|_2 = {norms.layer_cake(g, 2):.5f}, direct {norms.lp(g, 2):.5f}")
