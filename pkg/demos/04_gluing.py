"""Check the bundled gluing graphs and show how a length mismatch is reported."""
from pinchlab import gluing as gl

for name in ("flat_seifert", "non_flip", "bad_lengths"):
    res = gl.check_geometrization(gl.load_graph(name))
    print(f"{name}: passed={res.passed} failures={res.details['failure_classes']}")
    for edge in res.details["edges"]:
        first = edge["per_r"][0]
        print(f"  edge {edge['edge']} ({edge['map']['kind']}): lengths at r={first['r']:g} "
              f"{first['lengths_a']} vs {first['lengths_b']}")

# the parallelogram lattice with unit sides at angle pi/3 and its order-six map
t = gl.BoundaryTorus(1, 1, gl.Angle(1, 2))
phi = gl.GluingMap("general", ((0, -1), (1, 1)))
print("\nGram matrix:", t.gram(exact=True))
print("phi is an isometry:", gl.torus_isometry_check(t, t, phi).details["exact"])
