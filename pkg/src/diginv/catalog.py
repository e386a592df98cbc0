"""Test corpora: isomorphism classes of small digraphs and seeded random generators.

Digraphs on n vertices are encoded as bitmasks with bit ``u*n + v`` for the
arc u -> v. The canonical form of a class is its smallest code over all
vertex relabelings.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import permutations

from .digraph import Digraph, is_weak
from .laplacian import UndirectedGraph


def encode(g: Digraph) -> int:
    return sum(1 << (u * g.n + v) for u, v in g.arcs)


def decode(n: int, code: int) -> Digraph:
    return Digraph(n, frozenset((b // n, b % n) for b in range(n * n) if code >> b & 1))


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Per permutation, byte-wise lookup tables mapping code bits to relabeled bits."""
    bits = n * n
    chunks = (bits + 7) // 8
    tables = []
    for p in permutations(range(n)):
        target = [p[b // n] * n + p[b % n] for b in range(bits)]
        per_chunk = []
        for c in range(chunks):
            table = []
            for byte in range(256):
                out = 0
                for k in range(8):
                    b = 8 * c + k
                    if byte >> k & 1 and b < bits:
                        out |= 1 << target[b]
                table.append(out)
            per_chunk.append(tuple(table))
        tables.append(tuple(per_chunk))
    return tuple(tables)


def canonical_code(n: int, code: int) -> int:
    best = None
    for per_chunk in _perm_tables(n):
        img = 0
        x = code
        for table in per_chunk:
            img |= table[x & 255]
            x >>= 8
        if best is None or img < best:
            best = img
    return best


def canonical_form(g: Digraph) -> Digraph:
    return decode(g.n, canonical_code(g.n, encode(g)))


def _loop_mask(n: int) -> int:
    return sum(1 << (v * n + v) for v in range(n))


@lru_cache(maxsize=None)
def isomorphism_class_codes(n: int, loops: bool = True) -> tuple[int, ...]:
    """Canonical codes of all digraph classes on n vertices (n <= 4 by full scan, 5 by extension)."""
    if n == 0:
        return (0,)
    if n <= 4:
        forbidden = 0 if loops else _loop_mask(n)
        return tuple(sorted(c for c in range(1 << (n * n))
                            if not c & forbidden and canonical_code(n, c) == c))
    if n == 5 and not loops:
        return _extend_loopless(4)
    raise ValueError("exhaustive classes are available for n <= 4, and loopless n = 5")


def _extend_loopless(m: int) -> tuple[int, ...]:
    """Classes on m+1 loopless vertices: add a new vertex to every class on m vertices."""
    n = m + 1
    found = set()
    for base in isomorphism_class_codes(m, loops=False):
        relabeled = 0
        for b in range(m * m):
            if base >> b & 1:
                relabeled |= 1 << ((b // m) * n + b % m)
        for ins in range(1 << m):
            for outs in range(1 << m):
                code = relabeled
                for u in range(m):
                    if ins >> u & 1:
                        code |= 1 << (u * n + m)
                    if outs >> u & 1:
                        code |= 1 << (m * n + u)
                found.add(canonical_code(n, code))
    return tuple(sorted(found))


def digraph_classes(max_vertices: int, loops: bool = True, weak_only: bool = False,
                    min_vertices: int = 1) -> list[Digraph]:
    out = []
    for n in range(min_vertices, max_vertices + 1):
        for code in isomorphism_class_codes(n, loops):
            g = decode(n, code)
            if not weak_only or is_weak(g):
                out.append(g)
    return out


def random_digraph(rng: random.Random, n: int, p: float = 0.35, loops: bool = True) -> Digraph:
    arcs = frozenset((u, v) for u in range(n) for v in range(n)
                     if (loops or u != v) and rng.random() < p)
    return Digraph(n, arcs)


def random_weak_digraph(rng: random.Random, n: int, p: float = 0.35, loops: bool = True) -> Digraph:
    while True:
        g = random_digraph(rng, n, p, loops)
        if is_weak(g):
            return g


def random_connected_graph(rng: random.Random, n: int, p: float = 0.4) -> UndirectedGraph:
    """Random spanning tree plus independent extra edges, so it is always connected."""
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for k in range(1, n):
        u, v = order[k], order[rng.randrange(k)]
        edges.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return UndirectedGraph(n, frozenset(edges))


def random_01_matrix(rng: random.Random, n: int, p: float = 0.5) -> list[list[int]]:
    return [[1 if rng.random() < p else 0 for _ in range(n)] for _ in range(n)]
