"""Fourier partial sums on the torus and the growth of their L_p constants.

Partial sums s_M f of a bounded trigonometric function converge in every L_p,
while the conjugate function of a log-singular function only lives in a larger
grand space. This demo prints the ratio |s_M f|_p / |f|_p for a few M and p and
then the Haar projection constant, both well under the theoretical bounds.
"""
import numpy as np

from orliczlab import catalog, fourier, norms
from orliczlab.measures import SpaceSpec

space = SpaceSpec("torus", 2 ** 13, grading="none")
f = catalog.random_trig(seed=3, degree=64, space=space)
print("M      p=2       p=4       p=16")
for M in (4, 16, 64):
    sM = fourier.s_M(f, M)
    ratios = [norms.lp(sM, p) / norms.lp(f, p) for p in (2, 4, 16)]
    print(f"{M:<4d}" + "".join(f"{r:10.4f}" for r in ratios))

g = catalog.make("g_m", m=1).sample(SpaceSpec("torus", 2 ** 13))
h = fourier.hilbert(g)
for p in (2, 8, 32):
    print(f"p={p:2d}  |g_1|_p={norms.lp(g, p):8.4f}  |Hg_1|_p={norms.lp(h, p):8.4f}")

print("\nHaar partial sums of a trigonometric polynomial:")
fb = catalog.make("trig").sample(space)
for M in (4, 16, 64):
    pm = fourier.haar_partial(fb, M)
    print(f"  M={M:3d}  sup|P_M f - f| = {np.max(np.abs(pm.values - fb.values)):.4e}")
