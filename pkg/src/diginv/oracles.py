"""Brute-force reference computations used to cross-check the fast algorithms."""

from __future__ import annotations

from math import gcd

from .digraph import Digraph


def closed_route_weights(g: Digraph, max_length: int) -> set[int]:
    """All weights of closed routes (unrestricted, repeats allowed) of length 1..max_length.

    Dynamic programming over (current vertex, accumulated weight) from every start.
    """
    weights = set()
    for s in g.vertices:
        frontier = {(s, 0)}
        for _ in range(max_length):
            nxt = set()
            for v, w in frontier:
                for u, sigma in g.steps[v]:
                    nxt.add((u, w + sigma))
            frontier = nxt
            weights.update(w for v, w in frontier if v == s)
    return weights


def closed_route_gcd(g: Digraph, max_length: int = 10) -> int:
    """gcd of the positive closed-route weights up to the length bound (0 if none)."""
    out = 0
    for w in closed_route_weights(g, max_length):
        if w > 0:
            out = gcd(out, w)
    return out


def permutation_periodic_points(perm: list[int], n: int) -> int:
    """Fixed points of perm^n by direct iteration."""
    count = 0
    for x in range(len(perm)):
        y = x
        for _ in range(n):
            y = perm[y]
        count += y == x
    return count


def cycle_type_periodic_points(perm: list[int], n: int) -> int:
    """sum over cycle lengths c dividing n of c times the number of c-cycles."""
    seen = [False] * len(perm)
    total = 0
    for x in range(len(perm)):
        if seen[x]:
            continue
        length, y = 0, x
        while not seen[y]:
            seen[y] = True
            y = perm[y]
            length += 1
        if n % length == 0:
            total += length
    return total


def count_standard_tableaux(shape: tuple[int, ...]) -> int:
    """Hook-length formula: the number of standard Young tableaux of a shape."""
    from math import factorial
    n = sum(shape)
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    hooks = 1
    for i, row in enumerate(shape):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(n) // hooks
