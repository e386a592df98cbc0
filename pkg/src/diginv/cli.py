"""Command-line front end emitting JSON report envelopes.

Exit codes: 0 success (findings allowed), 1 usage error, 2 input error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import conjectures as conj
from .digraph import Digraph, is_strong, is_weak, parse_edge_list, parse_pairs, tensor_product
from .errors import InvariantViolation, SearchBudgetExceeded
from .homology import (
    DEFAULT_MAX_DIM, betti_numbers, chain_complex, check_boundary_squared, contains_triangle_or_square,
    homology_representatives,
)
from .laplacian import (
    UndirectedGraph, cheeger_constant, cheeger_inequality_check, critical_group, eigenvalues,
    flow_cut_decomposition, laplacian, parse_undirected, spanning_tree_count,
)
from .posets import alpha_closed, is_r_differential, parse_graded_graph, young_lattice, young_power
from .weight import (
    canonical_cycle_epimorphism, canonical_path_epimorphism, weak_tensor_predicate,
    strong_tensor_predicate, weight_report,
)
from .zeta import DEFAULT_TERMS, parse_int_matrix, zeta_report

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    """Bad input file or parameter value."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# JSON helpers


def jsonify(x: Any) -> Any:
    """Exact rationals become 'num/den' strings; tuples become lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonify(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _eig(x: float, tol: float) -> float:
    """Eigenvalues rounded to a fixed number of digits; values within tol of 0 print as 0."""
    if abs(x) <= tol:
        return 0.0
    return round(x, 9) + 0.0


def render(envelope: dict[str, Any]) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# inputs


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_graph(data: bytes, path: str) -> tuple[str, Digraph | UndirectedGraph]:
    try:
        undirected, _, _ = parse_pairs(data)
        if undirected:
            return "undirected", parse_undirected(data)
        return "directed", parse_edge_list(data)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _as_digraph(kind: str, g) -> tuple[Digraph, list[str]]:
    if kind == "undirected":
        return g.to_digraph(), ["undirected input read as the symmetric digraph"]
    return g, []


def _graph_json(g: Digraph) -> dict[str, Any]:
    return {"n": g.n, "arcs": [list(a) for a in g.sorted_arcs]}


def _route_json(r) -> dict[str, Any]:
    return {"vertices": list(r.vertices), "orientations": list(r.orientations), "weight": r.weight}


# ---------------------------------------------------------------------------
# commands


def cmd_invariants(args) -> tuple[list[bytes], dict, list, list[str]]:
    data = _read(args.file)
    kind, g = _load_graph(data, args.file)
    g, notes = _as_digraph(kind, g)
    if g.n == 0:
        raise InputError("empty digraph")
    if not is_weak(g):
        raise InputError("digraph is not weakly connected; invariants are defined per component")
    rep = weight_report(g)
    results: dict[str, Any] = {"n": g.n, "arcs": len(g.arcs), "w": rep.weight, "D": rep.cycle_gcd,
                               "witness_routes": [_route_json(r) for r in rep.witness_routes]}
    if rep.weight > 0:
        phi = canonical_cycle_epimorphism(g)
        results["epimorphism_target"] = f"C_{rep.weight}"
    else:
        phi = canonical_path_epimorphism(g)
        results["d"] = rep.diameter
        results["epimorphism_target"] = f"P_len_{rep.diameter}"
    results["epimorphism"] = list(phi.assignment)
    results["homomorphism_valid"] = phi.is_homomorphism
    results["surjective"] = phi.is_surjective
    return [data], results, [], notes


def cmd_tensor_check(args):
    d1, d2 = _read(args.file1), _read(args.file2)
    k1, g1 = _load_graph(d1, args.file1)
    k2, g2 = _load_graph(d2, args.file2)
    g1, n1 = _as_digraph(k1, g1)
    g2, n2 = _as_digraph(k2, g2)
    if g1.n == 0 or g2.n == 0:
        raise InputError("empty digraph")
    predicted = strong_tensor_predicate(g1, g2)
    oracle = is_strong(tensor_product(g1, g2))
    results: dict[str, Any] = {"strong": {"predicate": predicted, "oracle": oracle, "agrees": predicted == oracle}}
    findings = []
    if predicted != oracle:
        findings.append({"check": "strong", "g1": _graph_json(g1), "g2": _graph_json(g2),
                         "predicate": predicted, "oracle": oracle})
    if is_weak(g1) and is_weak(g2):
        w = weak_tensor_predicate(g1, g2)
        results["weak"] = {"predicate": w.verdict.value, "reason": w.reason, "oracle": w.oracle,
                           "agrees": w.agrees, "evidence": w.evidence}
        if w.agrees is False:
            findings.append({"check": "weak", "g1": _graph_json(g1), "g2": _graph_json(g2),
                             "predicate": w.verdict.value, "oracle": w.oracle})
    else:
        results["weak"] = {"predicate": None, "reason": "a factor is not weakly connected",
                           "oracle": is_weak(tensor_product(g1, g2)), "agrees": None, "evidence": {}}
    return [d1, d2], results, findings, n1 + n2


def cmd_homology(args):
    data = _read(args.file)
    kind, g = _load_graph(data, args.file)
    g, notes = _as_digraph(kind, g)
    if args.max_dim < 0:
        raise InputError("--max-dim must be nonnegative")
    cc = chain_complex(g, args.max_dim + 1)
    betti = betti_numbers(cc, args.max_dim)
    results = {
        "betti": betti,
        "omega_dims": cc.omega_dims()[:args.max_dim + 1],
        "boundary_squared_zero": check_boundary_squared(cc),
        "triangle_or_square": contains_triangle_or_square(g),
    }
    if args.max_dim >= 1 and betti[1]:
        results["beta1_representatives"] = [repr(v) for v in homology_representatives(cc, 1)]
    return [data], results, [], notes


def cmd_laplacian(args):
    data = _read(args.file)
    kind, g = _load_graph(data, args.file)
    notes = []
    if kind == "directed":
        g = UndirectedGraph.from_digraph(g)
        notes.append("directed input replaced by its underlying simple graph")
    if g.n == 0:
        raise InputError("empty graph")
    tol = args.tol
    lap = laplacian(g)
    vals = eigenvalues(g, tol)
    flows, cuts = flow_cut_decomposition(g)
    results: dict[str, Any] = {
        "n": g.n, "edges": len(g.edges), "laplacian": lap.tolist(),
        "eigenvalues": [_eig(x, tol) for x in vals], "tol": tol,
        "connected": g.is_connected(),
        "spanning_tree_count": spanning_tree_count(g),
        "flow_dimension": len(flows), "cut_dimension": len(cuts),
    }
    findings = []
    if g.n >= 2:
        results["lambda2"] = _eig(vals[1], tol)
    if g.is_connected():
        cg = critical_group(g)
        results["critical_group"] = {"invariant_factors": list(cg.invariant_factors), "order": cg.order}
        if g.n >= 2:
            check = cheeger_inequality_check(g, tol)
            results["cheeger"] = check.cheeger
            results["cheeger_witness"] = list(check.witness)
            results["cheeger_inequality"] = {"lower": check.lower_holds, "upper": check.upper_holds}
            if not (check.lower_holds and check.upper_holds):
                findings.append({"check": "cheeger_inequality", "lambda2": _eig(check.lambda2, tol),
                                 "cheeger": check.cheeger, "lower": check.lower_holds,
                                 "upper": check.upper_holds})
    elif g.n >= 2:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            h, s = cheeger_constant(g)
        results["cheeger"] = h
        results["cheeger_witness"] = list(s)
        results["critical_group"] = None
        notes.append("graph is disconnected")
    return [data], results, findings, notes


def cmd_zeta(args):
    data = _read(args.file)
    if args.terms < 1:
        raise InputError("--terms must be at least 1")
    try:
        a = parse_int_matrix(data)
    except ValueError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    rep = zeta_report(a, args.terms)
    results = {
        "matrix": a.tolist(),
        "periodic_counts": rep.periodic_counts,
        "series": [int(c) for c in rep.series_from_exp.coeffs],
        "series_agree": rep.series_from_exp.coeffs == rep.series_from_det.coeffs,
        "rational_form": {"numerator": list(rep.rational_form.numerator),
                          "denominator": list(rep.rational_form.denominator),
                          "text": str(rep.rational_form)},
    }
    return [data], results, [], []


def cmd_poset(args):
    inputs: list[bytes] = []
    if args.levels < 1:
        raise InputError("--levels must be at least 1")
    if args.family == "young":
        g = young_lattice(args.levels)
    elif args.family == "young-power":
        if args.power < 1:
            raise InputError("--power must be positive")
        g = young_power(args.power, args.levels)
    else:
        if not args.file:
            raise InputError("--family file needs --file")
        data = _read(args.file)
        inputs.append(data)
        try:
            g = parse_graded_graph(data.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            raise InputError(f"{args.file}: {exc}") from None
        if g.max_level < args.levels:
            raise InputError(f"graded graph has only {g.max_level} levels")
        g = g.truncate(args.levels)
    rep = is_r_differential(g, args.r, args.levels - 1)
    results = {
        "family": args.family, "levels": args.levels, "r": args.r,
        "level_sizes": list(g.level_sizes),
        "differential": rep.passed,
        "first_violation": rep.first_violation,
        "alpha_closed": [alpha_closed(g, n, args.r if rep.passed else None) for n in range(args.levels + 1)],
    }
    return inputs, results, [], []


def cmd_conjectures(args):
    if args.max_vertices < 1 or args.samples < 0 or args.max_dim < 1:
        raise InputError("budgets must be positive")
    params = conj.Parameters(seed=args.seed, max_vertices=args.max_vertices, samples=args.samples,
                             max_dim=args.max_dim, terms=args.terms, tol=args.tol)
    rows = conj.run_all(params)
    return [], {"rows": [r.as_dict() for r in rows]}, conj.findings(rows), []


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--tol", type=float, default=1e-9)
    p = _Parser(prog="diginv", description="Digraph invariants with oracle cross-checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("invariants", parents=[common], help="w(G), D(G), d(G) and the canonical epimorphism")
    s.add_argument("file")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("tensor-check", parents=[common], help="connectivity of a tensor product")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_tensor_check)

    s = sub.add_parser("homology", parents=[common], help="path homology Betti numbers")
    s.add_argument("file")
    s.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("laplacian", parents=[common], help="spectrum, Cheeger constant, critical group")
    s.add_argument("file")
    s.set_defaults(func=cmd_laplacian)

    s = sub.add_parser("zeta", parents=[common], help="zeta series of a Markov shift matrix")
    s.add_argument("file")
    s.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("poset", parents=[common], help="differential-poset checks")
    s.add_argument("--family", choices=["young", "young-power", "file"], default="young")
    s.add_argument("--levels", type=int, default=8)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--power", type=int, default=2)
    s.add_argument("--file")
    s.set_defaults(func=cmd_poset)

    s = sub.add_parser("conjectures", parents=[common], help="replay every checked identity on seeded corpora")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-vertices", type=int, default=4)
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    s.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    s.set_defaults(func=cmd_conjectures)
    return p


def _parameters(args) -> dict[str, Any]:
    skip = {"func", "command", "format", "file", "file1", "file2"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Execute a command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    start = time.perf_counter()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            inputs, results, findings, notes = args.func(args)
    except (InputError, ValueError) as exc:
        return EXIT_INPUT, "", f"input error: {exc}\n"
    except (InvariantViolation, SearchBudgetExceeded) as exc:
        return EXIT_INTERNAL, "", f"invariant violation: {exc}\n"
    digest = hashlib.sha256()
    for blob in inputs:
        digest.update(hashlib.sha256(blob).digest())
    envelope = {
        "command": args.command,
        "input_digest": digest.hexdigest(),
        "parameters": jsonify(_parameters(args)),
        "results": jsonify(results),
        "findings": jsonify(findings),
        "notes": notes + [str(w.message) for w in caught],
        "timing": {"seconds": round(time.perf_counter() - start, 3)},
    }
    return EXIT_OK, render(envelope), ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
