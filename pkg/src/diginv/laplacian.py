"""Laplacians of undirected graphs: spectra, Cheeger constant, critical group,
spanning trees and the flow/cut decomposition of edge space.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .digraph import Digraph, ParseError, parse_pairs
from .errors import InvariantViolation
from .linalg import (
    Matrix, determinant, nullspace_basis, rank, rref, smith_normal_form, symmetric_eigenvalues,
)

CHEEGER_CAP = 20
BRUTE_FORCE_TREES_CAP = 8


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple graph on 0..n-1; edges are stored as ``(low, high)`` pairs."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at {u}: undirected graphs here are loopless")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> UndirectedGraph:
        return cls(n, frozenset(edges))

    @classmethod
    def from_digraph(cls, g: Digraph) -> UndirectedGraph:
        """Underlying simple graph: arcs symmetrized, loops dropped."""
        return cls(g.n, frozenset((u, v) for u, v in g.arcs if u != v))

    def to_digraph(self) -> Digraph:
        """Symmetric digraph with both orientations of every edge."""
        return Digraph(self.n, frozenset(self.edges | {(v, u) for u, v in self.edges}))

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(x) for x in nb)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                u = queue.popleft()
                comp.append(u)
                for v in self.neighbors[u]:
                    if not seen[v]:
                        seen[v] = True
                        queue.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def edge_boundary(self, s: Iterable[int]) -> list[tuple[int, int]]:
        s = set(s)
        return [e for e in self.sorted_edges if (e[0] in s) != (e[1] in s)]


def complete_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, frozenset(combinations(range(n), 2)))


def cycle(n: int) -> UndirectedGraph:
    if n < 3:
        raise ValueError("undirected cycle needs at least 3 vertices")
    return UndirectedGraph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, frozenset((i, i + 1) for i in range(n - 1)))


def star(n: int) -> UndirectedGraph:
    """Center 0 joined to leaves 1..n-1."""
    return UndirectedGraph(n, frozenset((0, i) for i in range(1, n)))


def parse_undirected(text: str | bytes) -> UndirectedGraph:
    """Edge-list text with the ``undirected`` header; duplicates collapse with a warning."""
    undirected, n, pairs = parse_pairs(text)
    if not undirected:
        raise ParseError("missing 'undirected' header")
    edges = set()
    for lineno, u, v in pairs:
        if u == v:
            raise ParseError(f"loop {u} {v} in an undirected graph", lineno)
        e = (min(u, v), max(u, v))
        if e in edges:
            warnings.warn(f"line {lineno}: duplicate edge {u} {v} collapsed", stacklevel=2)
        edges.add(e)
    return UndirectedGraph(n, frozenset(edges))


def serialize_undirected(g: UndirectedGraph) -> str:
    return "undirected\n" + "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges]) + "\n"


# ---------------------------------------------------------------------------
# matrices


def adjacency(g: UndirectedGraph) -> Matrix:
    rows = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        rows[u][v] = rows[v][u] = 1
    return Matrix.from_rows(rows, g.n)


def incidence(g: UndirectedGraph) -> Matrix:
    """Edges oriented low -> high: +1 at the head (high), -1 at the tail (low)."""
    rows = [[0] * len(g.edges) for _ in range(g.n)]
    for j, (u, v) in enumerate(g.sorted_edges):
        rows[v][j] = 1
        rows[u][j] = -1
    return Matrix.from_rows(rows, len(g.edges))


def laplacian(g: UndirectedGraph) -> Matrix:
    """Degree matrix minus adjacency, checked against D D^T."""
    a = adjacency(g)
    lap = Matrix.diagonal([g.degree(v) for v in range(g.n)]) - a
    d = incidence(g)
    if d @ d.T != lap:
        raise InvariantViolation("Laplacian differs from D D^T")
    return lap


def reduced_laplacian(g: UndirectedGraph, vertex: int = 0) -> Matrix:
    return laplacian(g).delete(vertex, vertex)


def quadratic_form(g: UndirectedGraph, x: Sequence[float | int | Fraction]) -> float | int | Fraction:
    """sum over edges of (x_u - x_v)^2, asserted equal to x^T L x."""
    if len(x) != g.n:
        raise ValueError("vector length must equal the vertex count")
    edge_sum = sum((x[u] - x[v]) ** 2 for u, v in g.sorted_edges)
    lx = laplacian(g).apply(list(x))
    matrix_side = sum(a * b for a, b in zip(x, lx))
    exact = all(isinstance(t, (int, Fraction)) for t in x)
    if exact:
        ok = edge_sum == matrix_side
    else:
        ok = abs(edge_sum - matrix_side) <= 1e-12 * max(1.0, abs(edge_sum))
    if not ok:
        raise InvariantViolation(f"quadratic form mismatch: {edge_sum} != {matrix_side}")
    return edge_sum


# ---------------------------------------------------------------------------
# spectra and the Cheeger constant


def eigenvalues(g: UndirectedGraph, tol: float = 1e-9) -> list[float]:
    return symmetric_eigenvalues(laplacian(g), tol)


def algebraic_connectivity(g: UndirectedGraph, tol: float = 1e-9) -> float:
    if g.n < 2:
        raise ValueError("lambda_2 needs at least two vertices")
    return eigenvalues(g, tol)[1]


def cheeger_constant(g: UndirectedGraph, cap: int = CHEEGER_CAP) -> tuple[Fraction, tuple[int, ...]]:
    """Exact min |boundary(S)| / |S| over nonempty S with |S| <= n/2.

    Exhaustive; ties go to the lexicographically smallest S.
    """
    if g.n < 2:
        raise ValueError("Cheeger constant needs at least two vertices")
    if g.n > cap:
        raise ValueError(f"{g.n} vertices exceeds the exhaustive-search cap of {cap}")
    if not g.is_connected():
        warnings.warn("graph is disconnected; Cheeger constant is 0", stacklevel=2)
    nbr = [sum(1 << w for w in g.neighbors[v]) for v in range(g.n)]
    best: tuple[Fraction, tuple[int, ...]] | None = None
    for k in range(1, g.n // 2 + 1):
        for s in combinations(range(g.n), k):
            mask = 0
            for v in s:
                mask |= 1 << v
            cut = sum(bin(nbr[v] & ~mask).count("1") for v in s)
            ratio = Fraction(cut, k)
            if best is None or ratio < best[0] or (ratio == best[0] and s < best[1]):
                best = (ratio, s)
    return best


@dataclass
class CheegerCheck:
    eigenvalues: list[float]
    lambda2: float
    cheeger: Fraction
    witness: tuple[int, ...]
    lower_holds: bool
    upper_holds: bool
    tol: float


def cheeger_inequality_check(g: UndirectedGraph, tol: float = 1e-9) -> CheegerCheck:
    """Evaluate lambda_2 / 2 <= h(G) <= sqrt(2 lambda_2); violations are data, not errors."""
    if not g.is_connected():
        raise ValueError("Cheeger inequality check needs a connected graph")
    vals = eigenvalues(g, tol)
    lam2 = vals[1]
    h, s = cheeger_constant(g)
    lower = lam2 / 2 <= float(h) + tol
    upper = float(h) <= math.sqrt(max(2 * lam2, 0.0)) + tol
    return CheegerCheck(vals, lam2, h, s, lower, upper, tol)


# ---------------------------------------------------------------------------
# critical group and spanning trees


def count_spanning_trees_brute_force(g: UndirectedGraph) -> int:
    """Enumerate forests edge by edge (union-find), counting the spanning trees."""
    if g.n == 0:
        return 0
    edges = g.sorted_edges
    need = g.n - 1
    count = 0

    def extend(start, parent, used):
        nonlocal count
        if used == need:
            count += 1
            return
        if len(edges) - start < need - used:
            return
        for i in range(start, len(edges)):
            if len(edges) - i < need - used:
                break
            u, v = edges[i]
            ru, rv = _find(parent, u), _find(parent, v)
            if ru == rv:
                continue
            child = list(parent)
            child[ru] = rv
            extend(i + 1, child, used + 1)

    extend(0, list(range(g.n)), 0)
    return count


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def spanning_tree_count(g: UndirectedGraph, verify: bool = True) -> int:
    """Matrix-Tree determinant; brute-force cross-check for small graphs."""
    if g.n == 0 or not g.is_connected():
        return 0
    kappa = determinant(reduced_laplacian(g))
    if verify and g.n <= BRUTE_FORCE_TREES_CAP:
        brute = count_spanning_trees_brute_force(g)
        if brute != kappa:
            raise InvariantViolation(f"Matrix-Tree determinant {kappa} != enumerated {brute}")
    return kappa


@dataclass
class CriticalGroup:
    invariant_factors: tuple[int, ...]
    """Torsion invariant factors (all > 1), in divisibility order."""
    order: int
    spanning_tree_count: int
    smith_diagonal: tuple[int, ...]


def critical_group(g: UndirectedGraph, verify: bool = True) -> CriticalGroup:
    """Torsion of coker L(G) from the Smith form of the full Laplacian."""
    if not g.is_connected():
        raise ValueError("critical group needs a connected graph")
    form = smith_normal_form(laplacian(g))
    diag = form.diagonal_entries
    if sum(1 for s in diag if s == 0) != 1:
        raise InvariantViolation(f"connected Laplacian should have corank 1, Smith diagonal {diag}")
    torsion = tuple(s for s in diag if s > 1)
    order = math.prod(s for s in diag if s)
    kappa = determinant(reduced_laplacian(g)) if g.n > 1 else 1
    if order != kappa:
        raise InvariantViolation(f"|K(G)| = {order} but reduced Laplacian determinant is {kappa}")
    if verify and g.n <= BRUTE_FORCE_TREES_CAP:
        brute = count_spanning_trees_brute_force(g)
        if brute != kappa:
            raise InvariantViolation(f"reduced Laplacian determinant {kappa} != enumerated {brute}")
    return CriticalGroup(torsion, order, kappa, diag)


# ---------------------------------------------------------------------------
# potential theory


def divergence(g: UndirectedGraph, f: Sequence) -> list:
    """(D f)(v): inflow minus outflow of an edge function."""
    if len(f) != len(g.edges):
        raise ValueError("edge function has the wrong length")
    return incidence(g).apply(list(f))


def coboundary(g: UndirectedGraph, alpha: Sequence) -> list:
    """(D^T alpha)(e) = alpha(head) - alpha(tail)."""
    if len(alpha) != g.n:
        raise ValueError("vertex function has the wrong length")
    return incidence(g).T.apply(list(alpha))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def flow_cut_decomposition(g: UndirectedGraph) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Bases of the flow space ker D and the cut space im D^T, checked orthogonal."""
    d = incidence(g)
    m = len(g.edges)
    flows = nullspace_basis(d) if m else []
    cuts, _ = rref(d) if m else ([], [])
    cuts = [list(r) for r in cuts]
    c = len(g.components())
    if len(flows) != m - g.n + c or len(cuts) != g.n - c:
        raise InvariantViolation("flow/cut dimensions disagree with |E| - |V| + c and |V| - c")
    if any(_dot(f, k) != 0 for f in flows for k in cuts):
        raise InvariantViolation("flow and cut bases are not orthogonal")
    return flows, cuts


def is_flow(g: UndirectedGraph, f: Sequence) -> bool:
    return all(x == 0 for x in divergence(g, f))


def in_span(basis: list[list[Fraction]], v: Sequence) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return rank(basis + [list(v)]) == rank(basis)


@dataclass
class SpectralReport:
    eigenvalues: list[float]
    lambda2: float
    cheeger: Fraction
    witness: tuple[int, ...]
    inequality_holds: tuple[bool, bool]


def spectral_report(g: UndirectedGraph, tol: float = 1e-9) -> SpectralReport:
    """Spectrum, lambda_2, exact h(G) and the two sides of the Cheeger sandwich."""
    check = cheeger_inequality_check(g, tol)
    vals = check.eigenvalues
    if abs(vals[0]) > tol:
        raise InvariantViolation(f"smallest Laplacian eigenvalue {vals[0]} is not 0")
    if check.lambda2 <= tol:
        raise InvariantViolation("connected graph with lambda_2 = 0")
    return SpectralReport(vals, check.lambda2, check.cheeger, check.witness,
                          (check.lower_holds, check.upper_holds))
