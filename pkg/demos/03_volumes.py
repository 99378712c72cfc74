"""Finite volume of the cusp region and the piece-volume factors."""
from pinchlab import volume as vol

for l, m in ((1, 1), (2, 1), (1, 2)):
    res = vol.volume_family1(l, m)
    print(f"family 1 (l={l}, m={m}): {res.value:.12f} + tail {res.tail_estimate:.1e}"
          f"  <  bound {res.bound:.6f}")

res = vol.volume_family2(3, 7.0)
print(f"family 2 (n=3, a=7): {res.total:.6e}, slice decay rate kappa = {res.details['kappa']:.5f}")

print("\npiece factors per unit hyperbolic volume (L = b = 1):")
res = vol.piece_volume_factor()
print(f"  surface pieces: {res.total:.6f} < {res.bound:.6f}")
for n in (3, 4, 5):
    res = vol.piece_volume_factor2(n)
    print(f"  n={n}: {res.total:.6f} < {res.bound:.3f}")
