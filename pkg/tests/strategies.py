"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from diginv.digraph import Digraph, Route


@st.composite
def digraphs(draw, min_n=1, max_n=5, loops=True):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    arcs = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return Digraph(n, frozenset(arcs))


@st.composite
def routes_in(draw, g, start=None, max_len=8):
    """A random valid route in g (possibly of length 0)."""
    v = draw(st.integers(0, g.n - 1)) if start is None else start
    verts, signs = [v], []
    for _ in range(draw(st.integers(0, max_len))):
        moves = g.steps[verts[-1]]
        if not moves:
            break
        u, s = draw(st.sampled_from(moves))
        verts.append(u)
        signs.append(s)
    return Route(tuple(verts), tuple(signs))
