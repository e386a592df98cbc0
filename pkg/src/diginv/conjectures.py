"""Conjecture harness: replays every checked identity on exhaustive and seeded corpora.

Each row records how many instances were tested, how many agreed, and the
first counterexamples in a replayable form. Mismatches are data, not errors.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import catalog
from .digraph import Digraph, cycle_graph, is_strong, tensor_product
from .errors import InvariantViolation
from .homology import (
    PathVector, all_cycle_route_digraphs, betti_numbers, chain_complex, check_boundary_squared,
    contains_triangle_or_square, leibniz_check,
)
from .laplacian import (
    cheeger_inequality_check, count_spanning_trees_brute_force, critical_group,
    laplacian, quadratic_form, reduced_laplacian,
)
from .linalg import determinant, nullspace_basis, rank
from .oracles import closed_route_gcd
from .posets import alpha_closed, is_r_differential, young_lattice, young_power
from .weight import (
    VertexMap, canonical_cycle_epimorphism, weak_tensor_predicate, cycle_gcd, diameter_zero_weight,
    enumerate_homomorphisms, find_epimorphism, induced_cycle_map, strong_tensor_predicate,
    weight_invariant,
)
from .zeta import artin_mazur_series, zeta_rational_form

MAX_COUNTEREXAMPLES = 10


@dataclass
class Parameters:
    seed: int = 0
    max_vertices: int = 4
    samples: int = 500
    max_dim: int = 3
    terms: int = 12
    tol: float = 1e-9

    def as_dict(self) -> dict[str, Any]:
        return dict(seed=self.seed, max_vertices=self.max_vertices, samples=self.samples,
                    max_dim=self.max_dim, terms=self.terms, tol=self.tol)


@dataclass
class Row:
    name: str
    claim: str
    instances: int = 0
    agreements: int = 0
    counterexample_count: int = 0
    counterexamples: list[Any] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    def record(self, ok: bool, witness: Callable[[], Any] | None = None):
        self.instances += 1
        if ok:
            self.agreements += 1
            return
        self.counterexample_count += 1
        if witness is not None and len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(witness())

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "claim": self.claim,
            "instances": self.instances,
            "agreements": self.agreements,
            "agreement_rate": _rate(self.agreements, self.instances),
            "counterexample_count": self.counterexample_count,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }


def _rate(a: int, b: int) -> str:
    """Exact rational rate as a string, '1' for full agreement."""
    if b == 0:
        return "n/a"
    f = Fraction(a, b)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def digraph_json(g: Digraph) -> dict[str, Any]:
    return {"n": g.n, "arcs": [list(a) for a in g.sorted_arcs]}


def _rng(params: Parameters, stream: str) -> random.Random:
    """Independent deterministic stream per row, so rows do not perturb each other."""
    return random.Random(f"{params.seed}:{stream}")


# ---------------------------------------------------------------------------
# digraph rows


def row_strong_tensor(params: Parameters) -> Row:
    row = Row("strong connectivity of tensor products",
              "G1 (x) G2 strong iff both factors strong and gcd(D(G1), D(G2)) = 1")
    classes = catalog.digraph_classes(min(3, params.max_vertices))
    degenerate = 0
    degenerate_mismatch = 0
    for g1 in classes:
        for g2 in classes:
            predicted = strong_tensor_predicate(g1, g2)
            actual = is_strong(tensor_product(g1, g2))
            trivial_factor = any(g.n == 1 and not g.has_loop() for g in (g1, g2))
            if trivial_factor:
                degenerate += 1
                degenerate_mismatch += predicted != actual
            row.record(predicted == actual, lambda: {
                "g1": digraph_json(g1), "g2": digraph_json(g2),
                "predicted": predicted, "oracle": actual})
    row.notes = {
        "pairs_with_loopless_single_vertex_factor": degenerate,
        "mismatches_with_loopless_single_vertex_factor": degenerate_mismatch,
        "mismatches_elsewhere": row.counterexample_count - degenerate_mismatch,
    }
    return row


def row_weak_tensor(params: Parameters) -> Row:
    row = Row("weak connectivity of tensor products (positive weights)",
              "G1 (x) G2 weak iff gcd(w1, w2) = 1 and no source in one factor faces a sink in the other")
    classes = catalog.digraph_classes(min(3, params.max_vertices), weak_only=True)
    undetermined = 0
    undetermined_weak = 0
    for g1 in classes:
        for g2 in classes:
            check = weak_tensor_predicate(g1, g2)
            if check.agrees is None:
                undetermined += 1
                undetermined_weak += check.oracle
                continue
            row.record(check.agrees, lambda: {
                "g1": digraph_json(g1), "g2": digraph_json(g2),
                "predicted": check.verdict.value, "oracle_weak": check.oracle, "reason": check.reason})
    row.notes = {"zero_weight_pairs_undetermined": undetermined,
                 "zero_weight_pairs_weak_by_oracle": undetermined_weak}
    return row


def row_route_gcd(params: Parameters) -> Row:
    row = Row("weight from unrepeated closed routes",
              "gcd over unrepeated closed routes = gcd over all closed routes of length <= 10")
    for g in catalog.digraph_classes(params.max_vertices, weak_only=True):
        w = weight_invariant(g)
        oracle = closed_route_gcd(g, 10)
        row.record(w == oracle, lambda: {"g": digraph_json(g), "w": w, "all_routes_gcd": oracle})
    return row


def row_cycle_gcd_divisibility(params: Parameters) -> Row:
    row = Row("cycle-length gcd divides the weight",
              "D(G) | w(G) whenever both are nonzero")
    reverse_holds = 0
    for g in catalog.digraph_classes(params.max_vertices, weak_only=True):
        w, d = weight_invariant(g), cycle_gcd(g)
        if not (w and d):
            continue
        reverse_holds += d % w == 0
        row.record(w % d == 0, lambda: {"g": digraph_json(g), "w": w, "D": d})
    row.notes = {"w_divides_D": {"instances": row.instances, "holds": reverse_holds}}
    return row


def row_cycle_epimorphism(params: Parameters) -> Row:
    row = Row("largest cycle epimorphism equals the weight",
              "canonical map onto C_w is an epimorphism and no epimorphism onto C_n exists for n > w")
    for g in catalog.digraph_classes(params.max_vertices, weak_only=True):
        w = weight_invariant(g)
        if w == 0:
            continue
        phi = canonical_cycle_epimorphism(g)
        larger = [n for n in range(w + 1, g.n + 1) if find_epimorphism(g, cycle_graph(n)) is not None]
        row.record(phi.is_epimorphism and not larger,
                   lambda: {"g": digraph_json(g), "w": w, "larger_targets": larger})
    return row


def rows_epimorphism_functoriality(params: Parameters) -> list[Row]:
    div = Row("weights divide along epimorphisms", "psi: G1 ->> G2 with w > 0 implies w(G2) | w(G1)")
    induced = Row("epimorphisms induce cycle epimorphisms",
                  "psi: G1 ->> G2 induces a well-defined epimorphism C_w(G1) ->> C_w(G2) commuting with the canonical maps")
    diam = Row("diameter along homomorphisms of zero-weight digraphs",
               "psi: G1 -> G2, both of weight zero, implies d(G2) >= d(G1)")
    strict = 0
    rng = _rng(params, "epimorphisms")
    classes = catalog.digraph_classes(min(4, params.max_vertices), weak_only=True)
    weights = {g: weight_invariant(g) for g in classes}
    positive = [g for g in classes if weights[g] > 0]
    for _ in range(params.samples):
        # a random surjective relabeling onto k vertices is an epimorphism onto its image
        g1 = rng.choice(positive)
        k = rng.randint(1, g1.n)
        f = list(range(k)) + [rng.randrange(k) for _ in range(g1.n - k)]
        rng.shuffle(f)
        g2 = Digraph(k, frozenset((f[u], f[v]) for u, v in g1.arcs))
        psi = VertexMap(g1, g2, tuple(f))
        w1, w2 = weights[g1], weight_invariant(g2)
        div.record(w2 > 0 and w1 % w2 == 0, lambda: {
            "g1": digraph_json(g1), "g2": digraph_json(g2), "psi": f, "w1": w1, "w2": w2})
        try:
            induced_cycle_map(psi, canonical_cycle_epimorphism(g1), canonical_cycle_epimorphism(g2))
            ok, err = True, None
        except (InvariantViolation, ValueError) as exc:
            ok, err = False, str(exc)
        induced.record(ok, lambda: {"g1": digraph_json(g1), "g2": digraph_json(g2), "psi": f, "error": err})
    zero = [g for g in classes if weights[g] == 0]
    for g1 in zero:
        for g2 in zero:
            d1, d2 = diameter_zero_weight(g1), diameter_zero_weight(g2)
            for psi in enumerate_homomorphisms(g1, g2):
                strict += d2 > d1
                diam.record(d2 >= d1, lambda: {"g1": digraph_json(g1), "g2": digraph_json(g2),
                                               "psi": list(psi.assignment), "d1": d1, "d2": d2})
    diam.notes = {"strict_inequality_holds": strict,
                  "strict_inequality_fails": diam.instances - strict}
    return [div, induced, diam]


# ---------------------------------------------------------------------------
# homology rows


def row_boundary_squared(params: Parameters) -> Row:
    row = Row("boundary squared vanishes", "d o d = 0 on the invariant path complex, dimensions <= 4")
    rng = _rng(params, "boundary")
    top = max(4, params.max_dim + 1)
    for _ in range(params.samples):
        g = catalog.random_digraph(rng, rng.randint(1, 6), rng.choice((0.2, 0.35, 0.5)))
        cc = chain_complex(g, top)
        row.record(check_boundary_squared(cc), lambda: {"g": digraph_json(g)})
    return row


def row_leibniz(params: Parameters) -> Row:
    row = Row("Leibniz rule for the join product",
              "d(uv) = (du)v + (-1)^(p+1) u(dv) for u of dimension p, on the full path space")
    swapped_holds = 0
    rng = _rng(params, "leibniz")
    for _ in range(params.samples):
        u = _random_path_vector(rng, rng.randint(0, 2), 4)
        v = _random_path_vector(rng, rng.randint(0, 2), 4)
        res = leibniz_check(u, v)
        swapped_holds += res["dv_then_u"]
        row.record(res["u_then_dv"], lambda: {"u": repr(u), "v": repr(v)})
    row.notes = {"reading_with_u_before_dv": {"instances": row.instances, "holds": row.agreements},
                 "reading_with_dv_before_u": {"instances": row.instances, "holds": swapped_holds},
                 "holding_reading": _holding(row.agreements, swapped_holds, row.instances)}
    return row


def _holding(standard: int, swapped: int, total: int) -> str:
    if standard == total and swapped == total:
        return "both"
    if standard == total:
        return "u(dv)"
    if swapped == total:
        return "(dv)u"
    return "neither"


def _random_path_vector(rng: random.Random, dim: int, n: int) -> PathVector:
    coeffs = {}
    for _ in range(rng.randint(1, 3)):
        path = [rng.randrange(n)]
        while len(path) < dim + 1:
            nxt = rng.randrange(n - 1)
            path.append(nxt if nxt < path[-1] else nxt + 1)
        coeffs[tuple(path)] = coeffs.get(tuple(path), 0) + rng.choice((-2, -1, 1, 2, 3))
    return PathVector(coeffs, dim)


def row_closed_route_homology(params: Parameters) -> Row:
    row = Row("first Betti number of closed-route digraphs",
              "beta_1 is 0 for triangles and squares and 1 for every other closed route of length 3..7")
    for n in range(3, 8):
        for pattern, g in all_cycle_route_digraphs(n):
            b = betti_numbers(chain_complex(g, 2), 1)
            special = contains_triangle_or_square(g)
            row.record(b[1] == (0 if special else 1),
                       lambda: {"orientations": list(pattern), "betti": b, "triangle_or_square": special})
    return row


def row_homology_needs_triangle_or_square(params: Parameters) -> Row:
    row = Row("nontrivial homology forces a triangle or square",
              "beta_p != 0 for some p >= 1 implies a triangle or square subgraph")
    rng = _rng(params, "triangle-square")
    by_reading = {"p>=1": 0, "p>=2": 0, "p>=3": 0}
    first = {"p>=1": None, "p>=2": None, "p>=3": None}
    for _ in range(params.samples):
        g = catalog.random_digraph(rng, rng.randint(3, 6), rng.choice((0.2, 0.3, 0.45)))
        if contains_triangle_or_square(g):
            row.record(True)
            continue
        b = betti_numbers(chain_complex(g, params.max_dim + 1), params.max_dim)
        for lo in (1, 2, 3):
            key = f"p>={lo}"
            if any(b[lo:]):
                by_reading[key] += 1
                if first[key] is None:
                    first[key] = {"g": digraph_json(g), "betti": b}
        row.record(not any(b[1:]), lambda: {"g": digraph_json(g), "betti": b})
    row.notes = {"counterexamples_by_reading": by_reading, "first_counterexample_by_reading": first,
                 "max_dim": params.max_dim}
    return row


# ---------------------------------------------------------------------------
# Laplacian rows


def _graph_corpus(params: Parameters, stream: str, lo: int, hi: int):
    rng = _rng(params, stream)
    for _ in range(params.samples):
        yield rng, catalog.random_connected_graph(rng, rng.randint(lo, hi), rng.choice((0.1, 0.3, 0.6)))


def _graph_json(g) -> dict[str, Any]:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges]}


def rows_laplacian(params: Parameters) -> list[Row]:
    kernel = Row("Laplacian rank and kernel", "connected G: rank L = n - 1 and ker L is spanned by the all-ones vector")
    quad = Row("Laplacian quadratic form", "x^T L x = sum over edges of (x_u - x_v)^2, exactly on integer vectors")
    for rng, g in _graph_corpus(params, "laplacian", 1, 10):
        lap = laplacian(g)
        null = nullspace_basis(lap)
        ok = rank(lap) == g.n - 1 and len(null) == 1 and len(set(null[0])) == 1
        kernel.record(ok, lambda: {"g": _graph_json(g)})
        x = [rng.randint(-9, 9) for _ in range(g.n)]
        try:
            quadratic_form(g, x)
            ok = True
        except InvariantViolation:
            ok = False
        quad.record(ok, lambda: {"g": _graph_json(g), "x": x})
    cheeger = Row("Cheeger sandwich", "lambda_2 / 2 <= h(G) <= sqrt(2 lambda_2) for the combinatorial Laplacian")
    lower_fail = upper_fail = 0
    for _, g in _graph_corpus(params, "cheeger", 2, 10):
        c = cheeger_inequality_check(g, params.tol)
        lower_fail += not c.lower_holds
        upper_fail += not c.upper_holds
        cheeger.record(c.lower_holds and c.upper_holds, lambda: {
            "g": _graph_json(g), "lambda2": round(c.lambda2, 9), "cheeger": str(c.cheeger),
            "lower_holds": c.lower_holds, "upper_holds": c.upper_holds})
    cheeger.notes = {"lower_bound_failures": lower_fail, "upper_bound_failures": upper_fail,
                     "tol": params.tol}
    tree = Row("critical group order and spanning trees",
               "|K(G)| = det(reduced L) = number of spanning trees")
    for _, g in _graph_corpus(params, "matrix-tree", 1, 8):
        kappa = determinant(reduced_laplacian(g)) if g.n > 1 else 1
        brute = count_spanning_trees_brute_force(g)
        try:
            order = critical_group(g, verify=False).order
        except InvariantViolation:
            order = None
        tree.record(order == kappa == brute, lambda: {"g": _graph_json(g), "order": order,
                                                      "det": kappa, "trees": brute})
    return [kernel, quad, cheeger, tree]


# ---------------------------------------------------------------------------
# zeta and posets


def row_zeta(params: Parameters) -> Row:
    row = Row("zeta exponential trace formula", "exp(sum tr(A^n) t^n / n) = 1 / det(I - tA) coefficientwise")
    rng = _rng(params, "zeta")
    for _ in range(params.samples):
        a = catalog.random_01_matrix(rng, rng.randint(1, 5), rng.choice((0.2, 0.4, 0.6)))
        z = artin_mazur_series(a, params.terms)
        r = zeta_rational_form(a).series(params.terms)
        row.record(z.coeffs == r.coeffs, lambda: {"a": a})
    return row


def rows_posets(params: Parameters) -> list[Row]:
    diff = Row("differential identity", "Young's lattice is 1-differential and Y^2 is 2-differential")
    alpha = Row("closed up-down walks", "sum over level n of e(x)^2 = r^n n!")
    y = young_lattice(10)
    rep = is_r_differential(y, 1, 9)
    diff.record(rep.passed, lambda: {"family": "young", "violation": rep.first_violation})
    y2 = young_power(2, 6)
    rep2 = is_r_differential(y2, 2, 5)
    diff.record(rep2.passed, lambda: {"family": "young^2", "violation": rep2.first_violation})
    for n in range(9):
        a = alpha_closed(y, n, 1)
        alpha.record(a == math.factorial(n), lambda: {"family": "young", "n": n, "alpha": a})
    for n in range(6):
        a = alpha_closed(y2, n, 2)
        alpha.record(a == 2 ** n * math.factorial(n), lambda: {"family": "young^2", "n": n, "alpha": a})
    return [diff, alpha]


# ---------------------------------------------------------------------------


def run_all(params: Parameters) -> list[Row]:
    rows = [
        row_strong_tensor(params),
        row_weak_tensor(params),
        row_route_gcd(params),
        row_cycle_gcd_divisibility(params),
        row_cycle_epimorphism(params),
        *rows_epimorphism_functoriality(params),
        row_boundary_squared(params),
        row_leibniz(params),
        row_closed_route_homology(params),
        row_homology_needs_triangle_or_square(params),
        *rows_laplacian(params),
        row_zeta(params),
        *rows_posets(params),
    ]
    return rows


def findings(rows: list[Row]) -> list[dict[str, Any]]:
    return [{"row": r.name, "counterexample_count": r.counterexample_count,
             "instances": r.instances, "counterexamples": r.counterexamples[:3]}
            for r in rows if r.counterexample_count]
