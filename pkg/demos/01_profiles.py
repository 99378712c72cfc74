"""Walk through the one-variable profiles that build both metric families.

Each profile is a mollified piecewise function, so it is exactly closed-form
away from its gluing windows.  The script prints values on both sides of every
window and the mollifier constant c.
"""
import numpy as np

from pinchlab import jets
from pinchlab.metrics import profiles, _T

P = profiles()
print(f"c = int lam(u) e^-u du = {jets.C:.16f}")

print("\nf(s): 1 for s <= -1, c e^s for s >= 1")
for s in (-2.0, -1.0, 0.0, 1.0, 2.0):
    j = P.f(s)
    print(f"  s={s:+.1f}  f={j.value:.10f}  f'={j.d1:.10f}  f''={j.d2:.10f}")

print("\nR(r): r for r <= 1, 3 for r >= 5, concave in between")
for r in (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0):
    j = P.R(r)
    print(f"  r={r:.1f}  R={j.value:.10f}  R'={j.d1:+.6f}  R''={j.d2:+.6f}")

print("\nh(r): 1 + e^r for r <= -1, 2 e^r for r >= 1")
for r in (-2.0, -1.0, 0.0, 1.0, 2.0):
    j = P.h(r)
    print(f"  r={r:+.1f}  h={j.value:.10f}  h/(2e^r)={j.value / (2 * np.exp(r)):.10f}")

a = 7.0
delta, b = jets.family2_constants(a)
print(f"\nfamily 2 at a={a}: delta={delta}, b={b:.16g}")
T = _T(a)
print(f"  T(4.0) = {T(4.0).value:.10f}   (T = 1 well below the window)")
for t in (a, a + 2):
    print(f"  T({t}) = {T(t).value:.10f}   cosh(t-5) = {np.cosh(t - 5):.10f}")
