"""Graded graphs, up/down operators, differential-poset checks and path counts.

Vertices at each level are kept in lexicographic label order, so every level
matrix is reproducible. Partitions are tuples of weakly decreasing parts; the
empty partition ``()`` is the minimum of Young's lattice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as cartesian
from typing import Any, Hashable, Sequence

from .errors import InvariantViolation
from .linalg import Matrix

Label = Hashable


@dataclass(frozen=True)
class GradedGraph:
    """Levels V_0..V_N and a multiset of edges between consecutive levels.

    ``edges`` maps ``(n, i, j)`` to the multiplicity of the edge from the
    i-th vertex of level n to the j-th vertex of level n+1.
    """

    levels: tuple[tuple[Label, ...], ...]
    edges: dict[tuple[int, int, int], int] = field(default_factory=dict, hash=False, compare=True)

    def __post_init__(self):
        if not self.levels or len(self.levels[0]) != 1:
            raise ValueError("level 0 must consist of a single minimum element")
        levels = tuple(tuple(sorted(lv, key=_sort_key)) for lv in self.levels)
        if levels != tuple(tuple(lv) for lv in self.levels):
            raise ValueError("levels must be listed in canonical label order")
        seen = set()
        for lv in levels:
            for x in lv:
                if x in seen:
                    raise ValueError(f"label {x!r} appears twice")
                seen.add(x)
        clean = {}
        for (n, i, j), m in self.edges.items():
            if not (0 <= n < len(levels) - 1):
                raise ValueError(f"edge at level {n} does not join consecutive levels")
            if not (0 <= i < len(levels[n]) and 0 <= j < len(levels[n + 1])):
                raise ValueError(f"edge ({n}, {i}, {j}) has an index out of range")
            if not isinstance(m, int) or m < 0:
                raise ValueError("edge multiplicities must be nonnegative integers")
            if m:
                clean[(n, i, j)] = m
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "edges", clean)

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    @property
    def level_sizes(self) -> tuple[int, ...]:
        return tuple(len(lv) for lv in self.levels)

    @cached_property
    def _position(self) -> dict[Label, tuple[int, int]]:
        return {x: (n, i) for n, lv in enumerate(self.levels) for i, x in enumerate(lv)}

    def position(self, x: Label) -> tuple[int, int]:
        try:
            return self._position[x]
        except KeyError:
            raise KeyError(f"{x!r} is not a vertex") from None

    def rank(self, x: Label) -> int:
        return self.position(x)[0]

    @property
    def minimum(self) -> Label:
        return self.levels[0][0]

    @cached_property
    def _up(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        up: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for (n, i, j), m in sorted(self.edges.items()):
            up.setdefault((n, i), []).append((j, m))
        return up

    @cached_property
    def _down(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        down: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for (n, i, j), m in sorted(self.edges.items()):
            down.setdefault((n + 1, j), []).append((i, m))
        return down

    def up_covers(self, n: int, i: int) -> list[tuple[int, int]]:
        """(index at level n+1, multiplicity) pairs above vertex i of level n."""
        return self._up.get((n, i), [])

    def down_covers(self, n: int, i: int) -> list[tuple[int, int]]:
        return self._down.get((n, i), [])

    def truncate(self, max_level: int) -> GradedGraph:
        return GradedGraph(self.levels[:max_level + 1],
                           {k: m for k, m in self.edges.items() if k[0] < max_level})

    def without_edge(self, n: int, i: int, j: int) -> GradedGraph:
        edges = dict(self.edges)
        if (n, i, j) not in edges:
            raise KeyError(f"no edge ({n}, {i}, {j})")
        del edges[(n, i, j)]
        return GradedGraph(self.levels, edges)


def _sort_key(label):
    return json.dumps(_jsonable(label), separators=(",", ":")) if not isinstance(label, (int, tuple)) else (0, label)


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _unjson(x):
    if isinstance(x, list):
        return tuple(_unjson(y) for y in x)
    return x


# ---------------------------------------------------------------------------
# families


def partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of n, lexicographically sorted."""
    out = []

    def gen(remaining, largest, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            gen(remaining - part, part, prefix)
            prefix.pop()

    gen(n, n, [])
    return sorted(out)


def is_partition(p: Sequence[int]) -> bool:
    return all(isinstance(x, int) and x > 0 for x in p) and all(a >= b for a, b in zip(p, p[1:]))


def add_box_covers(p: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Partitions obtained by adding one box to p."""
    out = []
    for k in range(len(p) + 1):
        q = list(p) + [0]
        q[k] += 1
        q = tuple(x for x in q if x)
        if is_partition(q):
            out.append(q)
    return out


def young_lattice(max_level: int) -> GradedGraph:
    if max_level < 0:
        raise ValueError("max_level must be nonnegative")
    levels = [tuple(partitions(n)) for n in range(max_level + 1)]
    index = [{p: i for i, p in enumerate(lv)} for lv in levels]
    edges = {}
    for n in range(max_level):
        for i, p in enumerate(levels[n]):
            for q in add_box_covers(p):
                edges[(n, i, index[n + 1][q])] = 1
    return GradedGraph(tuple(levels), edges)


def chain(max_level: int) -> GradedGraph:
    """The chain 0 < 1 < ... < N."""
    return GradedGraph(tuple((n,) for n in range(max_level + 1)),
                       {(n, 0, 0): 1 for n in range(max_level)})


def product_of_graded_graphs(factors: Sequence[GradedGraph], max_level: int) -> GradedGraph:
    """Vertices are tuples with ranks summing to the level; an edge advances one coordinate."""
    if not factors:
        raise ValueError("need at least one factor")
    by_rank = []
    for g in factors:
        by_rank.append([list(lv) for lv in g.levels])
    levels: list[list[tuple]] = []
    for n in range(max_level + 1):
        verts = []
        for ranks in _compositions(n, len(factors), [g.max_level for g in factors]):
            for combo in cartesian(*(by_rank[k][ranks[k]] for k in range(len(factors)))):
                verts.append(tuple(combo))
        if not verts:
            break
        levels.append(sorted(verts, key=_sort_key))
    index = [{x: i for i, x in enumerate(lv)} for lv in levels]
    edges = {}
    for n in range(len(levels) - 1):
        for i, x in enumerate(levels[n]):
            for k, g in enumerate(factors):
                rk, ik = g.position(x[k])
                for jk, m in g.up_covers(rk, ik):
                    y = x[:k] + (g.levels[rk + 1][jk],) + x[k + 1:]
                    j = index[n + 1][y]
                    edges[(n, i, j)] = edges.get((n, i, j), 0) + m
    return GradedGraph(tuple(tuple(lv) for lv in levels), edges)


def product_graded_graph(g: GradedGraph, h: GradedGraph, max_level: int) -> GradedGraph:
    return product_of_graded_graphs([g, h], max_level)


def young_power(r: int, max_level: int) -> GradedGraph:
    """Y^r with r-tuples of partitions as labels."""
    if r < 1:
        raise ValueError("r must be positive")
    y = young_lattice(max_level)
    return product_of_graded_graphs([y] * r, max_level)


def _compositions(n, parts, caps):
    if parts == 1:
        if n <= caps[0]:
            yield (n,)
        return
    for first in range(min(n, caps[0]) + 1):
        for rest in _compositions(n - first, parts - 1, caps[1:]):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# level operators


def up_matrix(g: GradedGraph, n: int) -> Matrix:
    """U_n: |V_{n+1}| x |V_n| multiplicity matrix."""
    if not (0 <= n < g.max_level):
        raise ValueError(f"up matrix needs 0 <= n < {g.max_level}, got {n}")
    rows = [[0] * len(g.levels[n]) for _ in g.levels[n + 1]]
    for (k, i, j), m in g.edges.items():
        if k == n:
            rows[j][i] = m
    return Matrix.from_rows(rows, len(g.levels[n]))


def down_matrix(g: GradedGraph, n: int) -> Matrix:
    """D_n: |V_{n-1}| x |V_n| multiplicity matrix (zero map out of level 0)."""
    if not (0 <= n <= g.max_level):
        raise ValueError(f"down matrix needs 0 <= n <= {g.max_level}, got {n}")
    if n == 0:
        return Matrix.zeros(0, 1)
    rows = [[0] * len(g.levels[n]) for _ in g.levels[n - 1]]
    for (k, i, j), m in g.edges.items():
        if k == n - 1:
            rows[i][j] = m
    d = Matrix.from_rows(rows, len(g.levels[n]))
    if d != up_matrix(g, n - 1).T:
        raise InvariantViolation(f"D_{n} is not the transpose of U_{n - 1}")
    return d


def commutator(g: GradedGraph, n: int) -> Matrix:
    """D_{n+1} U_n - U_{n-1} D_n acting on level n."""
    du = down_matrix(g, n + 1) @ up_matrix(g, n)
    if n == 0:
        return du
    return du - up_matrix(g, n - 1) @ down_matrix(g, n)


@dataclass
class DifferentialReport:
    r: int
    levels_checked: int
    passed: bool
    first_violation: dict[str, Any] | None = None


def is_r_differential(g: GradedGraph, r: int, up_to_level: int) -> DifferentialReport:
    """Check the operator identity DU - UD = rI and the two combinatorial conditions.

    Levels 0..up_to_level are checked; level n needs the edges into n+1.
    """
    if up_to_level > g.max_level - 1:
        raise ValueError(
            f"truncation too shallow: checking level {up_to_level} needs max level >= {up_to_level + 1}")
    if up_to_level < 0:
        raise ValueError("up_to_level must be nonnegative")
    for n in range(up_to_level + 1):
        lv = g.levels[n]
        c = commutator(g, n)
        for i in range(len(lv)):
            for j in range(len(lv)):
                want = r if i == j else 0
                if c[i, j] != want:
                    return DifferentialReport(r, n, False, {
                        "condition": "commutator", "level": n, "x": lv[i], "y": lv[j],
                        "value": c[i, j], "expected": want})
        # common covers above vs below, for unordered distinct pairs
        above = [dict(g.up_covers(n, i)) for i in range(len(lv))]
        below = [dict(g.down_covers(n, i)) for i in range(len(lv))]
        for i in range(len(lv)):
            for j in range(i + 1, len(lv)):
                up_common = sum(m * above[j][k] for k, m in above[i].items() if k in above[j])
                down_common = sum(m * below[j][k] for k, m in below[i].items() if k in below[j])
                if up_common != down_common:
                    return DifferentialReport(r, n, False, {
                        "condition": "common-covers", "level": n, "x": lv[i], "y": lv[j],
                        "covering_both": up_common, "covered_by_both": down_common})
        for i in range(len(lv)):
            up_deg, down_deg = sum(above[i].values()), sum(below[i].values())
            if up_deg != down_deg + r:
                return DifferentialReport(r, n, False, {
                    "condition": "degree", "level": n, "x": lv[i],
                    "up_degree": up_deg, "down_degree": down_deg})
    return DifferentialReport(r, up_to_level + 1, True)


# ---------------------------------------------------------------------------
# path counts


def _counts_from(g: GradedGraph, n0: int, i0: int, top: int) -> list[list[int]]:
    counts = [[0] * len(g.levels[n]) for n in range(top + 1)]
    counts[n0][i0] = 1
    for n in range(n0, top):
        for i, c in enumerate(counts[n]):
            if c:
                for j, m in g.up_covers(n, i):
                    counts[n + 1][j] += c * m
    return counts


def path_counts_from_minimum(g: GradedGraph, top: int | None = None) -> list[list[int]]:
    """e(x) for every vertex, level by level."""
    top = g.max_level if top is None else top
    return _counts_from(g, 0, 0, top)


def path_count_e(g: GradedGraph, x: Label) -> int:
    n, i = g.position(x)
    return _counts_from(g, 0, 0, n)[n][i]


def path_count_between(g: GradedGraph, x: Label, y: Label) -> int:
    """Number of saturated chains from x up to y; incomparable pairs are rejected."""
    nx, ix = g.position(x)
    ny, iy = g.position(y)
    if nx > ny:
        raise ValueError(f"rank({x!r}) = {nx} exceeds rank({y!r}) = {ny}")
    count = _counts_from(g, nx, ix, ny)[ny][iy]
    if count == 0:
        raise ValueError(f"{x!r} and {y!r} are incomparable")
    return count


def alpha_closed(g: GradedGraph, n: int, r: int | None = None) -> int:
    """Sum of e(x)^2 over level n, i.e. the number of up-then-down walks 0 -> n -> 0.

    Cross-checked against the operator product D^n U^n. When ``r`` is given and
    the graph is r-differential through level n-1, equality with r^n n! is asserted.
    """
    if not (0 <= n <= g.max_level):
        raise ValueError(f"level {n} out of range 0..{g.max_level}")
    e = path_counts_from_minimum(g, n)[n]
    alpha = sum(c * c for c in e)
    vec = [1]
    for k in range(n):
        vec = up_matrix(g, k).apply(vec)
    for k in range(n, 0, -1):
        vec = down_matrix(g, k).apply(vec)
    if vec[0] != alpha:
        raise InvariantViolation(f"operator count {vec[0]} != sum of squares {alpha}")
    if r is not None and n >= 1:
        report = is_r_differential(g, r, n - 1)
        if report.passed and alpha != r ** n * math.factorial(n):
            raise InvariantViolation(f"alpha = {alpha} but r^n n! = {r ** n * math.factorial(n)}")
    return alpha


# ---------------------------------------------------------------------------
# text format


def serialize_graded_graph(g: GradedGraph) -> str:
    """One ``L`` line per level listing labels (JSON, no spaces), then ``E n i j m`` lines."""
    lines = [f"graded {g.max_level}"]
    for lv in g.levels:
        lines.append("L " + " ".join(json.dumps(_jsonable(x), separators=(",", ":")) for x in lv))
    for (n, i, j), m in sorted(g.edges.items()):
        lines.append(f"E {n} {i} {j} {m}")
    return "\n".join(lines) + "\n"


def parse_graded_graph(text: str) -> GradedGraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("graded "):
        raise ValueError("missing 'graded N' header")
    top = int(lines[0].split()[1])
    levels, edges = [], {}
    for ln in lines[1:]:
        tag, _, rest = ln.partition(" ")
        if tag == "L":
            levels.append(tuple(_unjson(json.loads(tok)) for tok in rest.split()))
        elif tag == "E":
            n, i, j, m = (int(t) for t in rest.split())
            edges[(n, i, j)] = edges.get((n, i, j), 0) + m
        else:
            raise ValueError(f"unknown line {ln!r}")
    if len(levels) != top + 1:
        raise ValueError(f"header declares {top + 1} levels, found {len(levels)}")
    return GradedGraph(tuple(levels), edges)
