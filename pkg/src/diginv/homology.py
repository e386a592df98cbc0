"""Path homology of digraphs over the rationals.

Chains are :class:`PathVector` objects: sparse rational combinations of
elementary paths (vertex tuples). Elementary paths with a repeated
consecutive vertex are identified with zero throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .digraph import Digraph
from .errors import InvariantViolation
from .linalg import (
    Matrix, nullspace_basis, primitive_vector, rank, solve, sparse_nullspace, sparse_rank,
)

Path = tuple[int, ...]

DEFAULT_MAX_DIM = 3
MAX_BASIS = 20000


def is_regular(path: Path) -> bool:
    return all(a != b for a, b in zip(path, path[1:]))


class PathVector:
    """Homogeneous sparse combination of elementary p-paths."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, coeffs: Mapping[Path, int | Fraction] | None = None, dim: int | None = None,
                 regular: bool = True):
        clean: dict[Path, Fraction] = {}
        for path, c in (coeffs or {}).items():
            path = tuple(path)
            if c == 0 or (regular and not is_regular(path)):
                continue
            if dim is None:
                dim = len(path) - 1
            elif len(path) - 1 != dim:
                raise ValueError("mixed dimensions in a path vector")
            clean[path] = clean.get(path, 0) + Fraction(c)
        self.coeffs = {p: c for p, c in clean.items() if c != 0}
        self.dim = dim

    @classmethod
    def elementary(cls, *vertices: int) -> PathVector:
        return cls({tuple(vertices): 1}, len(vertices) - 1)

    @classmethod
    def zero(cls, dim: int) -> PathVector:
        return cls({}, dim)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PathVector):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def _combine(self, other: PathVector, sign: int) -> PathVector:
        if self.dim is not None and other.dim is not None and self.dim != other.dim and self and other:
            raise ValueError("cannot add paths of different dimensions")
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0) + sign * c
        return PathVector(out, self.dim if self.dim is not None else other.dim)

    def __add__(self, other: PathVector) -> PathVector:
        return self._combine(other, 1)

    def __sub__(self, other: PathVector) -> PathVector:
        return self._combine(other, -1)

    def __neg__(self) -> PathVector:
        return self.scale(-1)

    def scale(self, c) -> PathVector:
        return PathVector({p: c * x for p, x in self.coeffs.items()}, self.dim)

    def __rmul__(self, c) -> PathVector:
        return self.scale(c)

    def __mul__(self, other: PathVector) -> PathVector:
        return join(self, other)

    def boundary(self) -> PathVector:
        return boundary(self)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for p, c in sorted(self.coeffs.items()):
            name = "e" + "".join(map(str, p)) if all(v < 10 for v in p) else f"e{p}"
            terms.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(terms)


def boundary(v: PathVector) -> PathVector:
    """Alternating sum of faces; irregular faces vanish."""
    if v.dim is not None and v.dim <= 0:
        return PathVector.zero(-1)
    out: dict[Path, Fraction] = {}
    for path, c in v.coeffs.items():
        for q in range(len(path)):
            face = path[:q] + path[q + 1:]
            out[face] = out.get(face, 0) + (c if q % 2 == 0 else -c)
    return PathVector(out, (v.dim or 0) - 1)


def join(u: PathVector, v: PathVector) -> PathVector:
    """Concatenation product, bilinear: e_{i..} e_{j..} = e_{i.. j..}."""
    out: dict[Path, Fraction] = {}
    for p, a in u.coeffs.items():
        for q, b in v.coeffs.items():
            out[p + q] = out.get(p + q, 0) + a * b
    dim = (u.dim if u.dim is not None else 0) + (v.dim if v.dim is not None else 0) + 1
    return PathVector(out, dim)



def _augmented_boundary(chain: dict[Path, Fraction]) -> dict[Path, Fraction]:
    """Face sum on the full path space, with every 0-path mapped to the empty path."""
    out: dict[Path, Fraction] = {}
    for path, c in chain.items():
        for q in range(len(path)):
            face = path[:q] + path[q + 1:]
            out[face] = out.get(face, 0) + (c if q % 2 == 0 else -c)
    return {f: c for f, c in out.items() if c}


def _raw_join(a: dict[Path, Fraction], b: dict[Path, Fraction]) -> dict[Path, Fraction]:
    out: dict[Path, Fraction] = {}
    for p, x in a.items():
        for q, y in b.items():
            out[p + q] = out.get(p + q, 0) + x * y
    return {k: c for k, c in out.items() if c}


def _raw_add(a, b, sign=1):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + sign * c
    return {k: c for k, c in out.items() if c}


def leibniz_check(u: PathVector, v: PathVector) -> dict[str, bool]:
    """Compare d(uv) with (du)v + s u(dv) and with (du)v + s (dv)u, s = (-1)^(p+1).

    Evaluated in the full (unreduced) path space, where d of a 0-path is the
    empty path and the empty path is the unit for joins.
    """
    if u.dim is None or v.dim is None or u.dim < 0 or v.dim < 0:
        raise ValueError("Leibniz check needs homogeneous paths of dimension >= 0")
    a, b = dict(u.coeffs), dict(v.coeffs)
    sign = 1 if (u.dim + 1) % 2 == 0 else -1
    lhs = _augmented_boundary(_raw_join(a, b))
    du_v = _raw_join(_augmented_boundary(a), b)
    standard = _raw_add(du_v, _raw_join(a, _augmented_boundary(b)), sign)
    swapped = _raw_add(du_v, _raw_join(_augmented_boundary(b), a), sign)
    return {"u_then_dv": lhs == standard, "dv_then_u": lhs == swapped}


# ---------------------------------------------------------------------------
# allowed and invariant paths


def allowed_paths(g: Digraph, p: int) -> list[Path]:
    """Regular vertex sequences of length p + 1 following arcs, lexicographic."""
    if p < 0:
        raise ValueError("dimension must be nonnegative")
    paths: list[Path] = [(v,) for v in g.vertices]
    for _ in range(p):
        paths = [path + (w,) for path in paths for w in g.out_neighbors[path[-1]] if w != path[-1]]
        if len(paths) > MAX_BASIS:
            raise ValueError(f"more than {MAX_BASIS} allowed {p}-paths; lower the dimension")
    return sorted(paths)


SparseVec = dict[int, Fraction]


@dataclass
class ChainComplex:
    """Allowed paths, invariant-path bases and boundary maps up to ``max_dim``.

    ``omega[p]`` lists basis vectors as sparse ``{allowed index: coefficient}``
    maps; ``free[p][j]`` is a coordinate where basis vector j is the only
    nonzero one. ``columns[p][j]`` is the boundary of basis vector j written in
    the ``omega[p - 1]`` basis.
    """

    graph: Digraph
    allowed: list[list[Path]]
    omega: list[list[SparseVec]]
    free: list[list[int]]
    columns: list[list[SparseVec]]

    @property
    def max_dim(self) -> int:
        return len(self.allowed) - 1

    def omega_dims(self) -> list[int]:
        return [len(b) for b in self.omega]

    def omega_vector(self, p: int, j: int) -> PathVector:
        paths = self.allowed[p]
        return PathVector({paths[i]: c for i, c in self.omega[p][j].items()}, p)

    def omega_vectors(self, p: int) -> list[PathVector]:
        return [self.omega_vector(p, j) for j in range(len(self.omega[p]))]

    def dense_omega(self, p: int) -> list[list[Fraction]]:
        n = len(self.allowed[p])
        return [[v.get(i, Fraction(0)) for i in range(n)] for v in self.omega[p]]

    def coordinates(self, p: int, v: PathVector) -> SparseVec | None:
        """Coordinates of ``v`` in the invariant basis, None if v lies outside it."""
        index = _index(self.allowed[p])
        target: SparseVec = {}
        for path, c in v.coeffs.items():
            if path not in index:
                return None
            target[index[path]] = c
        coords: SparseVec = {}
        rebuilt: SparseVec = {}
        for j, (vec, f) in enumerate(zip(self.omega[p], self.free[p])):
            if f in target:
                c = target[f] / vec[f]
                coords[j] = c
                for i, x in vec.items():
                    rebuilt[i] = rebuilt.get(i, 0) + c * x
        rebuilt = {i: x for i, x in rebuilt.items() if x}
        return coords if rebuilt == target else None

    def boundary_matrix(self, p: int) -> Matrix:
        """Dense matrix of d_p : Omega_p -> Omega_{p-1}."""
        rows, cols = len(self.omega[p - 1]), len(self.omega[p])
        m = [[Fraction(0)] * cols for _ in range(rows)]
        for j, col in enumerate(self.columns[p]):
            for i, x in col.items():
                m[i][j] = x
        return Matrix.from_rows(m, cols)

    def boundary_rank(self, p: int) -> int:
        if p <= 0 or p > self.max_dim:
            return 0
        return sparse_rank(self.columns[p])


_INDEX_CACHE: dict[int, tuple[list[Path], dict[Path, int]]] = {}


def _index(paths: list[Path]) -> dict[Path, int]:
    hit = _INDEX_CACHE.get(id(paths))
    if hit is not None and hit[0] is paths:
        return hit[1]
    idx = {path: i for i, path in enumerate(paths)}
    if len(_INDEX_CACHE) > 64:
        _INDEX_CACHE.clear()
    _INDEX_CACHE[id(paths)] = (paths, idx)
    return idx


def _omega_sparse(p: int, allowed: list[Path], below: set[Path]) -> tuple[list[SparseVec], list[int]]:
    if p <= 1:
        return [{i: Fraction(1)} for i in range(len(allowed))], list(range(len(allowed)))
    bad: dict[Path, dict[int, int]] = {}
    for j, path in enumerate(allowed):
        for q in range(len(path)):
            face = path[:q] + path[q + 1:]
            if face in below or not is_regular(face):
                continue
            row = bad.setdefault(face, {})
            row[j] = row.get(j, 0) + (1 if q % 2 == 0 else -1)
    vecs, frees = [], []
    for free, vec in sparse_nullspace([bad[f] for f in sorted(bad)], len(allowed)):
        keys = sorted(vec)
        ints = primitive_vector([vec[k] for k in keys])
        vecs.append({k: Fraction(x) for k, x in zip(keys, ints)})
        frees.append(free)
    return vecs, frees


def omega_basis(g: Digraph, p: int) -> list[list[Fraction]]:
    """Basis of the invariant p-paths as dense vectors over ``allowed_paths(g, p)``.

    Vectors are primitive integer combinations.
    """
    allowed = allowed_paths(g, p)
    below = set(allowed_paths(g, p - 1)) if p >= 1 else set()
    vecs, _ = _omega_sparse(p, allowed, below)
    return [[v.get(i, Fraction(0)) for i in range(len(allowed))] for v in vecs]


def chain_complex(g: Digraph, max_dim: int = DEFAULT_MAX_DIM) -> ChainComplex:
    allowed = [allowed_paths(g, p) for p in range(max_dim + 1)]
    omega, free = [], []
    for p in range(max_dim + 1):
        vecs, frees = _omega_sparse(p, allowed[p], set(allowed[p - 1]) if p else set())
        omega.append(vecs)
        free.append(frees)
    cc = ChainComplex(g, allowed, omega, free, [[]])
    for p in range(1, max_dim + 1):
        cols = []
        for v in cc.omega_vectors(p):
            c = cc.coordinates(p - 1, boundary(v))
            if c is None:
                raise InvariantViolation(f"boundary of an invariant {p}-path left the invariant space")
            cols.append(c)
        cc.columns.append(cols)
    return cc


def check_boundary_squared(cc: ChainComplex) -> bool:
    """Exact check that consecutive boundary matrices compose to zero."""
    for p in range(2, cc.max_dim + 1):
        lower = cc.columns[p - 1]
        for col in cc.columns[p]:
            acc: SparseVec = {}
            for i, c in col.items():
                for k, x in lower[i].items():
                    acc[k] = acc.get(k, 0) + c * x
            if any(acc.values()):
                return False
    return True


def betti_numbers(cc: ChainComplex, upto: int | None = None) -> list[int]:
    """beta_p = dim Omega_p - rank d_p - rank d_{p+1}; needs the complex one dimension higher."""
    upto = cc.max_dim - 1 if upto is None else upto
    if upto >= cc.max_dim:
        raise ValueError("chain complex is too short for the requested Betti numbers")
    ranks = [cc.boundary_rank(p) for p in range(cc.max_dim + 1)] + [0]
    dims = cc.omega_dims()
    return [dims[p] - ranks[p] - ranks[p + 1] for p in range(upto + 1)]


def homology_ranks(g: Digraph, pmax: int = DEFAULT_MAX_DIM) -> list[int]:
    """Betti numbers beta_0..beta_pmax over the rationals."""
    if pmax < 0:
        raise ValueError("pmax must be nonnegative")
    return betti_numbers(chain_complex(g, pmax + 1), pmax)


# ---------------------------------------------------------------------------
# functoriality


def map_path_vector(assignment, v: PathVector) -> PathVector:
    """Push a chain forward along a vertex map; degenerate images vanish."""
    out: dict[Path, Fraction] = {}
    for path, c in v.coeffs.items():
        img = tuple(assignment[x] for x in path)
        out[img] = out.get(img, 0) + c
    return PathVector(out, v.dim)


def _dense(cols: list[SparseVec], rows: int) -> Matrix:
    m = [[Fraction(0)] * len(cols) for _ in range(rows)]
    for j, col in enumerate(cols):
        for i, x in col.items():
            m[i][j] = x
    return Matrix.from_rows(m, len(cols))


def induced_chain_map(psi, cc1: ChainComplex, cc2: ChainComplex) -> list[Matrix]:
    """Per-dimension matrices Omega_p(G1) -> Omega_p(G2), with the square against d checked."""
    if not psi.is_homomorphism:
        raise ValueError("psi must be a digraph homomorphism")
    top = min(cc1.max_dim, cc2.max_dim)
    mats = []
    for p in range(top + 1):
        cols = []
        for v in cc1.omega_vectors(p):
            c = cc2.coordinates(p, map_path_vector(psi.assignment, v))
            if c is None:
                raise InvariantViolation(f"image of an invariant {p}-path is not invariant")
            cols.append(c)
        mats.append(_dense(cols, len(cc2.omega[p])))
    for p in range(1, top + 1):
        if cc2.boundary_matrix(p) @ mats[p] != mats[p - 1] @ cc1.boundary_matrix(p):
            raise InvariantViolation(f"chain map does not commute with the boundary in dimension {p}")
    return mats


def _homology_basis(cc: ChainComplex, p: int):
    """(independent boundaries, cycle representatives) in Omega_p coordinates."""
    dim = len(cc.omega[p])
    if p >= 1 and dim:
        cycles = nullspace_basis(cc.boundary_matrix(p))
    else:
        cycles = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    images = []
    if p + 1 <= cc.max_dim:
        images = [[col.get(i, Fraction(0)) for i in range(dim)] for col in cc.columns[p + 1]]
    chosen: list[list[Fraction]] = []
    for v in images:
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
    nb = len(chosen)
    reps = []
    for v in cycles:
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
            reps.append(v)
    return chosen[:nb], reps


def homology_representatives(cc: ChainComplex, p: int) -> list[PathVector]:
    """Cycles whose classes form a basis of H_p."""
    _, reps = _homology_basis(cc, p)
    out = []
    for z in reps:
        v = PathVector.zero(p)
        for j, c in enumerate(z):
            if c:
                v = v + cc.omega_vector(p, j).scale(c)
        out.append(v)
    return out


def induced_homology_map(psi, cc1: ChainComplex, cc2: ChainComplex, p: int) -> Matrix:
    """Matrix of H_p(G1) -> H_p(G2) in the chosen cycle-representative bases."""
    if p + 1 > min(cc1.max_dim, cc2.max_dim):
        raise ValueError("chain complexes too short for this homology degree")
    chain = induced_chain_map(psi, cc1, cc2)[p]
    _, reps1 = _homology_basis(cc1, p)
    bnd2, reps2 = _homology_basis(cc2, p)
    basis2 = bnd2 + reps2
    cols = []
    for z in reps1:
        img = chain.apply(z)
        if not basis2:
            if any(img):
                raise InvariantViolation("image of a cycle is not a cycle")
            cols.append([])
            continue
        m = Matrix.from_rows([list(r) for r in zip(*basis2)], len(basis2))
        x = solve(m, img)
        if x is None:
            raise InvariantViolation("image of a cycle is not a cycle")
        cols.append(x[len(bnd2):])
    if not cols or not reps2:
        return Matrix.zeros(len(reps2), len(cols))
    return Matrix.from_rows([list(r) for r in zip(*cols)], len(cols))


# ---------------------------------------------------------------------------
# triangles and squares


def contains_triangle_or_square(g: Digraph) -> bool:
    """Triangle a->b->c with a->c, or square a->b->d, a->c->d on four distinct vertices."""
    out = [set(x) - {v} for v, x in enumerate(g.out_neighbors)]
    for a in g.vertices:
        for b in out[a]:
            for c in out[b]:
                if c != a and c in out[a]:
                    return True
    for a in g.vertices:
        for b in out[a]:
            for c in out[a]:
                if b >= c:
                    continue
                common = (out[b] & out[c]) - {a, b, c}
                if common:
                    return True
    return False


def cycle_route_digraph(orientations: Iterable[int]) -> Digraph:
    """Closed route on distinct vertices 0..n-1; orientation +1 means i -> i+1."""
    orientations = list(orientations)
    n = len(orientations)
    arcs = set()
    for i, s in enumerate(orientations):
        j = (i + 1) % n
        arcs.add((i, j) if s == 1 else (j, i))
    return Digraph(n, frozenset(arcs))


def all_cycle_route_digraphs(n: int):
    for pattern in product((1, -1), repeat=n):
        yield pattern, cycle_route_digraph(pattern)
