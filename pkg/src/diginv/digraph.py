"""Digraphs, routes, connectivity, tensor products and the edge-list format.

Vertices are ``0..n-1``. Loops are allowed, multiple arcs are not.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import Matrix


class ParseError(ValueError):
    """Malformed input text; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
        return cls(n, frozenset(arcs))

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def sorted_arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.arcs))

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n)]
        for u, v in self.sorted_arcs:
            out[u].append(v)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        inn = [[] for _ in range(self.n)]
        for u, v in self.sorted_arcs:
            inn[v].append(u)
        return tuple(tuple(sorted(x)) for x in inn)

    @cached_property
    def steps(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(next_vertex, orientation)`` moves a route may take."""
        st = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            st[u].add((v, 1))
            st[v].add((u, -1))
        return tuple(tuple(sorted(s)) for s in st)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def has_loop(self) -> bool:
        return any(u == v for u, v in self.arcs)

    def out_degree(self, v: int) -> int:
        return len(self.out_neighbors[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_neighbors[v])

    def reverse(self) -> Digraph:
        return Digraph(self.n, frozenset((v, u) for u, v in self.arcs))

    def relabel(self, perm: Sequence[int]) -> Digraph:
        return Digraph(self.n, frozenset((perm[u], perm[v]) for u, v in self.arcs))

    def induced(self, vertices: Sequence[int]) -> Digraph:
        """Subdigraph on ``vertices``, relabelled to 0..k-1 in the given order."""
        idx = {v: i for i, v in enumerate(vertices)}
        return Digraph(len(vertices), frozenset(
            (idx[u], idx[v]) for u, v in self.arcs if u in idx and v in idx))

    def __repr__(self) -> str:
        return f"Digraph({self.n}, {list(self.sorted_arcs)})"


def cycle_graph(n: int) -> Digraph:
    """Directed cycle C_n on n >= 1 vertices (C_1 is a loop)."""
    if n < 1:
        raise ValueError("cycle needs at least one vertex")
    return Digraph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Digraph:
    """Directed path on n vertices (n - 1 arcs)."""
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return Digraph(n, frozenset((i, i + 1) for i in range(n - 1)))


def path_of_length(k: int) -> Digraph:
    """Directed path with k arcs, hence k + 1 vertices."""
    if k < 0:
        raise ValueError("negative path length")
    return path_graph(k + 1)


def empty_graph(n: int) -> Digraph:
    return Digraph(n)


# ---------------------------------------------------------------------------
# routes


@dataclass(frozen=True)
class Route:
    """Vertex sequence ``v_0..v_n`` with one orientation (+1/-1) per step."""

    vertices: tuple[int, ...]
    orientations: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "orientations", tuple(self.orientations))
        if not self.vertices:
            raise ValueError("a route has at least one vertex")
        if len(self.orientations) != len(self.vertices) - 1:
            raise ValueError("need exactly one orientation per step")
        if any(s not in (1, -1) for s in self.orientations):
            raise ValueError("orientations must be +1 or -1")

    @property
    def length(self) -> int:
        return len(self.orientations)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def is_closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    @property
    def is_unrepeated(self) -> bool:
        body = self.vertices[:-1] if self.is_closed else self.vertices
        return self.is_closed and len(set(body)) == len(body)

    @property
    def weight(self) -> int:
        return sum(self.orientations)

    def is_valid_in(self, g: Digraph) -> bool:
        for a, b, s in zip(self.vertices, self.vertices[1:], self.orientations):
            if not (g.has_arc(a, b) if s == 1 else g.has_arc(b, a)):
                return False
        return all(0 <= v < g.n for v in self.vertices)

    def validate(self, g: Digraph) -> Route:
        if not self.is_valid_in(g):
            raise ValueError(f"{self} is not a route of {g}")
        return self

    def __mul__(self, other: Route) -> Route:
        return compose_routes(self, other)

    def inverse(self) -> Route:
        return Route(self.vertices[::-1], tuple(-s for s in reversed(self.orientations)))

    def power(self, k: int) -> Route:
        if not self.is_closed or k < 1:
            raise ValueError("powers need a closed route and k >= 1")
        r = self
        for _ in range(k - 1):
            r = r * self
        return r

    def __str__(self) -> str:
        return f"Route({list(self.vertices)}, {list(self.orientations)})"


def route_weight(r: Route, g: Digraph | None = None) -> int:
    """Net number of forward minus backward traversals."""
    if g is not None:
        r.validate(g)
    return r.weight


def compose_routes(r1: Route, r2: Route) -> Route:
    if r1.end != r2.start:
        raise ValueError(f"cannot compose: {r1} ends at {r1.end}, {r2} starts at {r2.start}")
    return Route(r1.vertices + r2.vertices[1:], r1.orientations + r2.orientations)


def inverse_route(r: Route) -> Route:
    return r.inverse()


def walk(vertices: Sequence[int]) -> Route:
    """All-forward route through ``vertices``."""
    return Route(tuple(vertices), (1,) * (len(vertices) - 1))


# ---------------------------------------------------------------------------
# connectivity


def _require_vertices(g: Digraph):
    if g.n < 1:
        raise ValueError("connectivity is only defined for digraphs with vertices")


def weak_components(g: Digraph) -> list[list[int]]:
    """Components of the underlying undirected graph, each sorted, ordered by minimum."""
    seen = [False] * g.n
    comps = []
    for s in g.vertices:
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v, _ in g.steps[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def strong_components(g: Digraph) -> list[list[int]]:
    """Strongly connected components (iterative Tarjan), in reverse topological order."""
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in g.vertices:
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            nbrs = g.out_neighbors[v]
            recurse = False
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comps


def is_weak(g: Digraph) -> bool:
    _require_vertices(g)
    return len(weak_components(g)) == 1


def is_strong(g: Digraph) -> bool:
    _require_vertices(g)
    return len(strong_components(g)) == 1


def condensation(g: Digraph) -> tuple[list[list[int]], Digraph]:
    """SCCs in topological order and the acyclic quotient digraph on them."""
    comps = strong_components(g)[::-1]
    where = {}
    for i, c in enumerate(comps):
        for v in c:
            where[v] = i
    arcs = {(where[u], where[v]) for u, v in g.arcs if where[u] != where[v]}
    return comps, Digraph(len(comps), frozenset(arcs))


def is_unilateral(g: Digraph) -> bool:
    # condensation is unilateral iff consecutive components in topological order are joined
    _require_vertices(g)
    _, dag = condensation(g)
    return all(dag.has_arc(i, i + 1) for i in range(dag.n - 1))


def reachable_from(g: Digraph, s: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in g.out_neighbors[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def sources(g: Digraph) -> set[int]:
    return {v for v in g.vertices if not g.in_neighbors[v]}


def sinks(g: Digraph) -> set[int]:
    return {v for v in g.vertices if not g.out_neighbors[v]}


# ---------------------------------------------------------------------------
# products and matrices


def tensor_product(g1: Digraph, g2: Digraph) -> Digraph:
    """Categorical product; vertex (u, v) is encoded as ``u * g2.n + v``."""
    n2 = g2.n
    arcs = frozenset(
        (u1 * n2 + v1, u2 * n2 + v2)
        for u1, u2 in g1.arcs
        for v1, v2 in g2.arcs)
    return Digraph(g1.n * n2, arcs)


def adjacency_matrix(g: Digraph) -> Matrix:
    rows = [[0] * g.n for _ in range(g.n)]
    for u, v in g.arcs:
        rows[u][v] = 1
    return Matrix.from_rows(rows, g.n)


def incidence_matrix(g: Digraph) -> Matrix:
    """One column per arc (sorted): +1 at the head, -1 at the tail; loops give zero columns."""
    arcs = g.sorted_arcs
    rows = [[0] * len(arcs) for _ in range(g.n)]
    for j, (u, v) in enumerate(arcs):
        rows[v][j] += 1
        rows[u][j] -= 1
    return Matrix.from_rows(rows, len(arcs))


# ---------------------------------------------------------------------------
# edge-list format


def _data_lines(text: str | bytes):
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError("input is not ASCII") from exc
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise ParseError(f"expected a base-10 integer, got {tok!r}", lineno) from None


def parse_pairs(text: str | bytes) -> tuple[bool, int, list[tuple[int, int, int]]]:
    """Shared reader: returns (undirected flag, vertex count, [(lineno, u, v)])."""
    lines = list(_data_lines(text))
    undirected = False
    if lines and lines[0][1].lower() == "undirected":
        undirected = True
        lines = lines[1:]
    if not lines:
        raise ParseError("missing vertex count")
    lineno, head = lines[0]
    toks = head.split()
    if len(toks) != 1:
        raise ParseError("first data line must be the vertex count", lineno)
    n = _parse_int(toks[0], lineno)
    if n < 0:
        raise ParseError("negative vertex count", lineno)
    pairs = []
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = (_parse_int(t, lineno) for t in toks)
        for x in (u, v):
            if not 0 <= x < n:
                raise ParseError(f"vertex index {x} out of range 0..{n - 1}", lineno)
        pairs.append((lineno, u, v))
    return undirected, n, pairs


def parse_edge_list(text: str | bytes) -> Digraph:
    undirected, n, pairs = parse_pairs(text)
    if undirected:
        raise ParseError("input is marked undirected; use the undirected parser")
    arcs = set()
    for lineno, u, v in pairs:
        if (u, v) in arcs:
            warnings.warn(f"line {lineno}: duplicate arc {u} {v} collapsed", stacklevel=2)
        arcs.add((u, v))
    return Digraph(n, frozenset(arcs))


def serialize_edge_list(g: Digraph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.sorted_arcs]
    return "\n".join(lines) + "\n"
