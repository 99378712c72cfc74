"""Gluing checks for graph manifolds built from product pieces.

Angles are stored as exact fractions of a full turn.  A boundary torus is the
flat lattice spanned by ``m`` (the base-boundary circle) and ``sigma`` (the
fiber), with Gram matrix

    [[len_first^2,              twist * len_second^2],
     [twist * len_second^2,     len_second^2        ]]

so that ``twist`` is the shear of ``sigma`` picked up along ``m``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .metrics import profiles

__all__ = [
    "Angle", "PieceSpec", "BoundaryTorus", "GluingMap", "GluingGraph", "GraphError",
    "UnsupportedBaseError", "GluingResult", "check_seifert_relation", "check_flip_condition",
    "check_mono1_general", "check_twist_condition", "lattice_isometry_check", "torus_gram",
    "torus_isometry_check", "boundary_at_r", "check_geometrization", "load_graph",
    "bundled_graph_path", "bundled_graph_names", "graph_schema", "GRAM_RTOL", "DEFAULT_R_SAMPLES",
]

GRAM_RTOL = 1e-12
DEFAULT_R_SAMPLES = (-10.0, -3.0, -1.0, 0.0, 0.5, 1.0, 2.5, 4.0, 5.0, 8.0)


class GraphError(ValueError):
    """Malformed or open gluing graph."""


class UnsupportedBaseError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Angle:
    """The angle ``2*pi*num/den``, kept reduced with ``0 <= num < den``."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ValueError("zero denominator")
        q = Fraction(self.num, self.den) % 1
        object.__setattr__(self, "num", q.numerator)
        object.__setattr__(self, "den", q.denominator)

    @classmethod
    def of(cls, x) -> "Angle":
        """Turns (Fraction, int, float read exactly) to an Angle."""
        q = Fraction(x)
        return cls(q.numerator, q.denominator)

    @classmethod
    def from_dict(cls, d) -> "Angle":
        return cls(int(d["num"]), int(d["den"]))

    @property
    def turns(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def radians(self) -> float:
        return 2.0 * math.pi * self.num / self.den

    def __add__(self, other):
        return Angle.of(self.turns + other.turns)

    def __neg__(self):
        return Angle.of(-self.turns)

    def __sub__(self, other):
        return self + (-other)

    def __bool__(self):
        return self.num != 0

    def to_dict(self):
        return {"num": self.num, "den": self.den}

    def __str__(self):
        return "0" if self.num == 0 else f"2pi*{self.num}/{self.den}"


ZERO = Angle(0)


@dataclass(frozen=True)
class BoundaryTorus:
    len_first: float
    len_second: float
    twist: Angle = ZERO

    def __post_init__(self):
        if not (self.len_first > 0 and self.len_second > 0):
            raise ValueError("torus lengths must be positive")
        if not isinstance(self.twist, Angle):
            object.__setattr__(self, "twist", Angle.of(self.twist))

    def gram(self, exact=False):
        return torus_gram(self, exact)

    def to_dict(self):
        return {"len_first": self.len_first, "len_second": self.len_second,
                "twist": self.twist.to_dict()}


def torus_gram(t: BoundaryTorus, exact=False):
    lm, ls = (Fraction(t.len_first), Fraction(t.len_second)) if exact else (t.len_first, t.len_second)
    tw = t.twist.turns if exact else float(t.twist.turns)
    off = tw * ls * ls
    if exact:
        if lm * lm * ls * ls - off * off <= 0:
            raise ValueError("degenerate torus lattice (shear too large for len_first)")
        return ((lm * lm, off), (off, ls * ls))
    g = np.array([[lm * lm, off], [off, ls * ls]])
    if np.linalg.det(g) <= 0:
        raise ValueError("degenerate torus lattice (shear too large for len_first)")
    return g


_MATRICES = {"trivial": ((1, 0), (0, 1)), "flip": ((0, 1), (1, 0))}


@dataclass(frozen=True)
class GluingMap:
    """Integer matrix acting on lattice coordinates; column j is the image of basis vector j."""

    kind: str = "trivial"
    matrix: tuple = None

    def __post_init__(self):
        if self.kind not in ("trivial", "flip", "general"):
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.kind == "general":
            if self.matrix is None:
                raise ValueError("general map needs a matrix")
            mat = tuple(tuple(int(v) for v in row) for row in self.matrix)
            if len(mat) != 2 or any(len(row) != 2 for row in mat):
                raise ValueError("matrix must be 2x2")
        else:
            mat = _MATRICES[self.kind]
            if self.matrix is not None and tuple(tuple(r) for r in self.matrix) != mat:
                raise ValueError(f"matrix does not match kind {self.kind!r}")
        if abs(mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]) != 1:
            raise ValueError("gluing matrix must have determinant +-1")
        object.__setattr__(self, "matrix", mat)

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def to_dict(self):
        return {"kind": self.kind, "matrix": [list(r) for r in self.matrix]}


@dataclass(frozen=True)
class PieceSpec:
    genus: int
    boundary_count: int
    fiber_length: float = 1.0
    boundary_circle_length: float = 1.0
    cone_points: tuple = ()
    boundary_monodromy: tuple = ()
    alpha_monodromy: tuple = ()
    beta_monodromy: tuple = ()
    orientable_base: bool = True
    core_monodromy: tuple = ()  # optional (theta(m), theta(sigma)) per boundary
    name: str = ""

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be >= 0")
        if self.boundary_count < 1:
            raise ValueError("a piece needs at least one boundary torus")
        if not (self.fiber_length > 0 and self.boundary_circle_length > 0):
            raise ValueError("lengths must be positive")
        for q, p in self.cone_points:
            if not (0 < q < p) or math.gcd(q, p) != 1:
                raise ValueError(f"cone point ({q}, {p}) needs coprime 0 < q < p")
        bm = self.boundary_monodromy or (ZERO,) * self.boundary_count
        object.__setattr__(self, "boundary_monodromy", tuple(bm))
        if len(bm) != self.boundary_count:
            raise ValueError("need one boundary monodromy angle per boundary")
        for name in ("alpha_monodromy", "beta_monodromy"):
            vals = getattr(self, name)
            if vals and len(vals) != self.genus:
                raise ValueError(f"{name} needs one angle per handle")
        if self.core_monodromy and len(self.core_monodromy) != self.boundary_count:
            raise ValueError("core_monodromy needs one (m, sigma) pair per boundary")

    @property
    def cone_angles(self):
        return tuple(Angle(q, p) for q, p in self.cone_points)

    @classmethod
    def from_dict(cls, d):
        mono = d.get("monodromy", {})
        return cls(
            genus=int(d["genus"]), boundary_count=int(d["boundary_count"]),
            fiber_length=float(d["fiber_length"]),
            boundary_circle_length=float(d["boundary_circle_length"]),
            cone_points=tuple((int(q), int(p)) for q, p in d.get("cone_points", [])),
            boundary_monodromy=tuple(Angle.from_dict(a) for a in mono.get("boundary", [])),
            alpha_monodromy=tuple(Angle.from_dict(a) for a in mono.get("alpha", [])),
            beta_monodromy=tuple(Angle.from_dict(a) for a in mono.get("beta", [])),
            orientable_base=bool(d.get("orientable_base", True)),
            core_monodromy=tuple((Angle.from_dict(c["m"]), Angle.from_dict(c["sigma"]))
                                 for c in d.get("core_monodromy", [])),
            name=d.get("name", ""),
        )


@dataclass(frozen=True)
class Edge:
    piece_a: int
    boundary_a: int
    piece_b: int
    boundary_b: int
    map: GluingMap

    def to_dict(self):
        return {"piece_a": self.piece_a, "boundary_a": self.boundary_a,
                "piece_b": self.piece_b, "boundary_b": self.boundary_b, "map": self.map.to_dict()}


@dataclass(frozen=True)
class GluingGraph:
    pieces: tuple
    edges: tuple
    L: float = 1.0
    b: float = 1.0
    r_samples: tuple = DEFAULT_R_SAMPLES
    name: str = ""

    def __post_init__(self):
        if not (self.L > 0 and self.b > 0):
            raise GraphError("L and b must be positive")
        seen = {}
        for k, e in enumerate(self.edges):
            for p, j in ((e.piece_a, e.boundary_a), (e.piece_b, e.boundary_b)):
                if not 0 <= p < len(self.pieces):
                    raise GraphError(f"edge {k}: no piece {p}")
                if not 0 <= j < self.pieces[p].boundary_count:
                    raise GraphError(f"edge {k}: piece {p} has no boundary {j}")
                if (p, j) in seen:
                    raise GraphError(f"boundary ({p}, {j}) used by edges {seen[(p, j)]} and {k}")
                seen[(p, j)] = k
        dangling = [(p, j) for p, pc in enumerate(self.pieces)
                    for j in range(pc.boundary_count) if (p, j) not in seen]
        if dangling:
            raise GraphError(f"dangling boundary components {dangling}")

    @classmethod
    def from_dict(cls, d, validate=True):
        if validate:
            import jsonschema
            try:
                jsonschema.validate(d, graph_schema())
            except jsonschema.ValidationError as exc:
                raise GraphError(f"schema: {exc.message}") from exc
        try:
            pieces = tuple(PieceSpec.from_dict(p) for p in d["pieces"])
            edges = tuple(Edge(e["piece_a"], e["boundary_a"], e["piece_b"], e["boundary_b"],
                               GluingMap(e["map"]["kind"], e["map"].get("matrix")))
                          for e in d["edges"])
        except (KeyError, ValueError, TypeError) as exc:
            raise GraphError(str(exc)) from exc
        return cls(pieces, edges, float(d.get("L", 1.0)), float(d.get("b", 1.0)),
                   tuple(d.get("r_samples", DEFAULT_R_SAMPLES)), d.get("name", ""))


@lru_cache(maxsize=1)
def graph_schema():
    text = resources.files("pinchlab").joinpath("schemas/gluing_graph.schema.json").read_text()
    return json.loads(text)


def bundled_graph_names():
    root = resources.files("pinchlab").joinpath("data")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_graph_path(name):
    stem = Path(name).name
    stem = stem[:-5] if stem.endswith(".json") else stem
    p = resources.files("pinchlab").joinpath("data", stem + ".json")
    if not p.is_file():
        raise FileNotFoundError(f"no bundled graph named {name!r}")
    return p


def load_graph(path) -> GluingGraph:
    """Load a graph file; a missing path falls back to the bundled example of that name."""
    p = Path(path)
    if p.is_file():
        text = p.read_text()
    else:
        try:
            text = bundled_graph_path(path).read_text()
        except FileNotFoundError:
            raise FileNotFoundError(f"{path}: no such file or bundled example") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from exc
    return GluingGraph.from_dict(data)


@dataclass
class GluingResult:
    passed: bool
    failure: str = ""  # failure class, empty when passed
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return {"passed": self.passed, "failure": self.failure or None, **self.details}


def check_seifert_relation(piece: PieceSpec) -> GluingResult:
    """Sum of the cone and boundary angles must vanish mod a full turn.

    Commutators of the handle generators map to 0 in the abelian group S^1, so
    the handle angles do not enter.
    """
    if not piece.orientable_base:
        raise UnsupportedBaseError("non-orientable bases are not supported")
    total = ZERO
    for a in piece.cone_angles + piece.boundary_monodromy:
        total = total + a
    return GluingResult(total == ZERO, "" if total == ZERO else "seifert_relation",
                        {"residual": total.to_dict()})


def check_flip_condition(theta_m1: Angle, theta_s1: Angle, theta_m2: Angle, theta_s2: Angle) -> GluingResult:
    first, second = theta_m1 == theta_s2, theta_s1 == theta_m2
    ok = first and second
    return GluingResult(ok, "" if ok else "flip_condition",
                        {"m1_eq_sigma2": first, "sigma1_eq_m2": second})


def check_mono1_general(rho_m1, rho_s2, rho_s1, rho_m2, bijection) -> GluingResult:
    """Generator-wise form of the flip condition for a non-abelian core.

    ``rho_*`` are lists of generator angles; ``bijection[i]`` is the generator
    on the second side matched with generator ``i`` on the first.
    """
    n = len(bijection)
    if sorted(bijection) != list(range(n)) or not (len(rho_m1) == len(rho_s1) == len(rho_m2) == len(rho_s2) == n):
        raise ValueError("bijection and angle lists must have matching lengths")
    bad = [i for i in range(n)
           if rho_m1[i] != rho_s2[bijection[i]] or rho_s1[i] != rho_m2[bijection[i]]]
    return GluingResult(not bad, "" if not bad else "flip_condition", {"mismatched_generators": bad})


def _shears(t: BoundaryTorus):
    """(theta_m(sigma), theta_sigma(m)) in exact turns."""
    lm, ls = Fraction(t.len_first), Fraction(t.len_second)
    off = t.twist.turns * ls * ls
    return Angle.of(off / (ls * ls)), Angle.of(off / (lm * lm))


def check_twist_condition(t1: BoundaryTorus, t2: BoundaryTorus, gmap: GluingMap = GluingMap("flip")) -> GluingResult:
    """Shear matching across a flip, with the second equality computed independently.

    ``theta_m(sigma)`` is the shear of the fiber along the base circle and
    ``theta_sigma(m)`` the shear of the base circle along the fiber; both
    come from the same off-diagonal Gram entry.
    """
    if gmap.kind != "flip":
        raise ValueError("twist condition applies to flip maps")
    m1s1, s1m1 = _shears(t1)
    m2s2, s2m2 = _shears(t2)
    first = m1s1 == s2m2
    second = s1m1 == m2s2
    details = {"theta_m1_sigma1": m1s1.to_dict(), "theta_sigma2_m2": s2m2.to_dict(),
               "theta_sigma1_m1": s1m1.to_dict(), "theta_m2_sigma2": m2s2.to_dict(),
               "first": first, "second": second}
    if not first:
        return GluingResult(False, "twist_condition", details)
    if not second:
        return GluingResult(False, "twist_second_equality", details)
    return GluingResult(True, "", details)


def _gram_compare(ga, mapped, exact_a=None, exact_mapped=None):
    ga, mapped = np.asarray(ga, float), np.asarray(mapped, float)
    scale = max(np.abs(ga).max(), np.abs(mapped).max())
    err = np.abs(mapped - ga) / scale
    out = {"gram": ga.tolist(), "mapped_gram": mapped.tolist(), "max_rel_error": float(err.max()),
           "diag_ok": bool(err[0, 0] <= GRAM_RTOL and err[1, 1] <= GRAM_RTOL),
           "offdiag_ok": bool(err[0, 1] <= GRAM_RTOL)}
    if exact_a is not None:
        out["exact"] = exact_a == exact_mapped
    return out


def _pullback(m, g):
    """M^T G M for 2x2 tuples (works on Fractions and floats)."""
    return tuple(tuple(sum(m[k][i] * g[k][l] * m[l][j] for k in range(2) for l in range(2))
                       for j in range(2)) for i in range(2))


def lattice_isometry_check(basis, gmap: GluingMap) -> GluingResult:
    """Is ``gmap`` (in coordinates of ``basis``) an isometry of that lattice?

    ``basis`` holds two vectors in R^2.  The check is ``M^T G M = G`` to
    ``GRAM_RTOL``; when the vectors are given as exact numbers the comparison
    is also done in rational arithmetic and reported as ``exact``.
    """
    u, v = (tuple(x) for x in basis)
    if len(u) != 2 or len(v) != 2:
        raise ValueError("basis vectors must live in R^2")
    det = float(u[0]) * float(v[1]) - float(u[1]) * float(v[0])
    if abs(det) <= 1e-14 * max(1.0, math.hypot(*map(float, u)) * math.hypot(*map(float, v))):
        raise ValueError("degenerate lattice basis")
    return _gram_isometry(_gram_of(u, v, float), _gram_of(u, v, Fraction), gmap)


def _gram_of(u, v, num):
    u, v = [num(x) for x in u], [num(x) for x in v]
    dot = lambda x, y: x[0] * y[0] + x[1] * y[1]  # noqa: E731
    return ((dot(u, u), dot(u, v)), (dot(v, u), dot(v, v)))


def _gram_isometry(g_src, exact_src, gmap, g_dst=None, exact_dst=None):
    g_dst = g_src if g_dst is None else g_dst
    exact_dst = exact_src if exact_dst is None else exact_dst
    mapped = _pullback(gmap.matrix, g_dst)
    ex_mapped = _pullback(gmap.matrix, exact_dst) if exact_dst is not None else None
    cmp = _gram_compare(g_src, mapped, exact_src, ex_mapped)
    ok = cmp["diag_ok"] and cmp["offdiag_ok"]
    failure = "" if ok else ("length_mismatch" if not cmp["diag_ok"] else "twist_mismatch")
    return GluingResult(ok, failure, {"map": gmap.to_dict(), **cmp})


def torus_isometry_check(t1: BoundaryTorus, t2: BoundaryTorus, gmap: GluingMap) -> GluingResult:
    """``gmap`` sends the (m, sigma) lattice of ``t1`` isometrically onto that of ``t2``."""
    return _gram_isometry(t1.gram(), t1.gram(exact=True), gmap, t2.gram(), t2.gram(exact=True))


def _scale_at(r, b, L):
    p = profiles()
    r = np.asarray(r, dtype=float)
    return p.h(r).value * b * np.exp(p.R(r).value - 2.0) * L


def boundary_at_r(piece: PieceSpec, r: float, L: float = 1.0, b: float = 1.0, boundary: int = 0) -> BoundaryTorus:
    """Boundary torus of the piece times the end, at level ``r``.

    The piece's own circles are scaled by ``h(r) b e^{R(r)-2} L``; with unit
    piece lengths both circles have exactly that length.
    """
    if not (L > 0 and b > 0):
        raise ValueError("L and b must be positive")
    s = float(_scale_at(float(r), b, L))
    return BoundaryTorus(s * piece.boundary_circle_length, s * piece.fiber_length,
                         piece.boundary_monodromy[boundary])


def _edge_report(graph, k, e, r_samples):
    pa, pb = graph.pieces[e.piece_a], graph.pieces[e.piece_b]
    per_r = []
    for r in r_samples:
        ta = boundary_at_r(pa, r, graph.L, graph.b, e.boundary_a)
        tb = boundary_at_r(pb, r, graph.L, graph.b, e.boundary_b)
        res = torus_isometry_check(ta, tb, e.map)
        per_r.append({"r": float(r), "passed": res.passed, "failure": res.failure or None,
                      "max_rel_error": res.details["max_rel_error"],
                      "lengths_a": [ta.len_first, ta.len_second],
                      "lengths_b": [tb.len_first, tb.len_second]})
    outcomes = {(x["passed"], x["failure"]) for x in per_r}
    out = {"edge": k, **e.to_dict(), "per_r": per_r, "consistent_across_r": len(outcomes) == 1}
    failures = [x["failure"] for x in per_r if not x["passed"]]
    # the unscaled lattices carry the exact comparison
    base = torus_isometry_check(BoundaryTorus(pa.boundary_circle_length, pa.fiber_length,
                                              pa.boundary_monodromy[e.boundary_a]),
                                BoundaryTorus(pb.boundary_circle_length, pb.fiber_length,
                                              pb.boundary_monodromy[e.boundary_b]), e.map)
    out["lattice"] = base.to_dict()
    if e.map.kind == "flip":
        t1 = BoundaryTorus(pa.boundary_circle_length, pa.fiber_length, pa.boundary_monodromy[e.boundary_a])
        t2 = BoundaryTorus(pb.boundary_circle_length, pb.fiber_length, pb.boundary_monodromy[e.boundary_b])
        tw = check_twist_condition(t1, t2, e.map)
        out["twist_condition"] = tw.to_dict()
        if not tw.passed:
            failures.append(tw.failure)
        if pa.core_monodromy and pb.core_monodromy:
            (m1, s1), (m2, s2) = pa.core_monodromy[e.boundary_a], pb.core_monodromy[e.boundary_b]
            fl = check_flip_condition(m1, s1, m2, s2)
            out["flip_condition"] = fl.to_dict()
            if not fl.passed:
                failures.append(fl.failure)
    if not out["consistent_across_r"]:
        failures.append("inconsistent_across_r")
    out["failures"] = sorted(set(failures))
    out["passed"] = not failures
    return out


def check_geometrization(graph: GluingGraph, r_samples=None) -> GluingResult:
    r_samples = graph.r_samples if r_samples is None else tuple(r_samples)
    pieces = []
    for i, p in enumerate(graph.pieces):
        try:
            res = check_seifert_relation(p)
            pieces.append({"piece": i, "name": p.name, **res.to_dict()})
        except UnsupportedBaseError:
            pieces.append({"piece": i, "name": p.name, "passed": False, "failure": "unsupported_base"})
    edges = [_edge_report(graph, k, e, r_samples) for k, e in enumerate(graph.edges)]
    classes = sorted({x["failure"] for x in pieces if not x["passed"]}
                     | {f for x in edges for f in x["failures"]})
    ok = not classes
    return GluingResult(ok, ",".join(classes), {
        "name": graph.name, "failure_classes": classes, "r_samples": [float(r) for r in r_samples],
        "L": graph.L, "b": graph.b, "pieces": pieces, "edges": edges})
