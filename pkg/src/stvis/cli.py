"""Command-line front end: generate, solve, construct, verify, encode, certify."""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
import tempfile
import time
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path

from .constructions import ConstructionError, closed_form, construct
from .encodings import (
    encode_visibility_ilp,
    encode_visibility_sat,
    max_via_sat,
    write_dimacs,
    write_lp,
    write_var_map,
)
from .graph_core import (
    Graph,
    GraphError,
    all_pairs_distances,
    read_graph,
    write_dimacs_graph,
    write_edge_list,
)
from .search import (
    BudgetExceeded,
    GraphTooLarge,
    SearchResult,
    branch_and_bound_max,
    default_node_budget,
    enumerate_optima,
    exhaustive_max,
)
from .sierpinski import (
    ResourceLimitError,
    build_sierpinski,
    build_sierpinski_triangle,
    recognize_triangle,
)
from .visibility import Variant, validate_set

FAMILIES = {
    "sierpinski": "sierpinski",
    "s": "sierpinski",
    "sierpinski-triangle": "sierpinski-triangle",
    "st": "sierpinski-triangle",
}
# largest n solved exactly by default, per variant
EXACT_CEILING = {v: 3 for v in Variant}
CONSTRUCTION_CEILING = 6


class CliError(Exception):
    pass


def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _render(writer, obj, **kwargs) -> str:
    buf = StringIO()
    writer(obj, buf, **kwargs)
    return buf.getvalue()


@dataclass
class LoadedGraph:
    graph: Graph
    family: str
    n: int | None
    st: object = None

    def identity(self) -> str:
        n = "-" if self.n is None else self.n
        return f"{self.family} n={n} vertices={self.graph.vertex_count} edges={self.graph.edge_count}"


def _load(args) -> LoadedGraph:
    if getattr(args, "graph", None):
        with open(args.graph) as fh:
            g = read_graph(fh)
        n = recognize_triangle(g)
        if n is not None:
            st = build_sierpinski_triangle(n)
            return LoadedGraph(st.graph, "sierpinski-triangle", n, st)
        return LoadedGraph(g, "file", None)
    if args.family is None or args.n is None:
        raise CliError("give either --graph PATH or --family and --n")
    family = FAMILIES[args.family]
    if family == "sierpinski":
        return LoadedGraph(build_sierpinski(args.n), family, args.n)
    st = build_sierpinski_triangle(args.n)
    return LoadedGraph(st.graph, family, args.n, st)


def read_vertex_set(path: str) -> list[int]:
    out = []
    with open(path) as fh:
        for line in fh:
            s = line.split("#", 1)[0].strip()
            if s:
                out.append(int(s))
    return out


@dataclass
class RunReport:
    command: str
    graph: str
    variant: str
    method: str
    optimum: int
    exact: bool
    witness: list[int]
    labels: list[str]
    wall_time_s: float
    nodes: int
    all_optima: list[list[int]] | None = field(default=None)

    def as_text(self) -> str:
        lines = [
            f"command: {self.command}",
            f"graph: {self.graph}",
            f"variant: {self.variant}",
            f"method: {self.method}",
            f"optimum: {self.optimum}",
            f"exact: {str(self.exact).lower()}",
            f"witness: {' '.join(map(str, self.witness))}",
            f"labels: {' '.join(self.labels)}",
            f"nodes: {self.nodes}",
            f"wall_time_s: {self.wall_time_s:.3f}",
        ]
        if self.all_optima is not None:
            lines.append(f"optima_count: {len(self.all_optima)}")
            for s in self.all_optima:
                lines.append(f"optimum_set: {' '.join(map(str, s))}")
        return "\n".join(lines) + "\n"

    def as_json(self) -> str:
        return json.dumps(self.__dict__, indent=2) + "\n"


def _label(loaded: LoadedGraph, v: int) -> str:
    if loaded.st is not None:
        return loaded.st.word_label(v)
    return loaded.graph.label(v)


def _check_ceiling(loaded: LoadedGraph, variant: Variant, method: str, allow_long: bool) -> None:
    if allow_long or loaded.family != "sierpinski-triangle" or method == "exhaustive":
        return
    if loaded.n is not None and loaded.n > EXACT_CEILING[variant]:
        raise CliError(f"exact {variant.value} solve of ST_3^{loaded.n} is beyond the default "
                       f"ceiling n={EXACT_CEILING[variant]}; pass --allow-long to try anyway")


def cmd_generate(args) -> int:
    family = FAMILIES[args.family]
    if family == "sierpinski":
        g = build_sierpinski(args.n)
        labels = [g.label(v) for v in range(g.vertex_count)]
    else:
        st = build_sierpinski_triangle(args.n)
        g = st.graph
        labels = [st.word_label(v) for v in range(g.vertex_count)]
    if args.out:
        writer = write_dimacs_graph if args.format == "dimacs" else write_edge_list
        _atomic_write(args.out, _render(writer, g))
        _atomic_write(args.labels or f"{args.out}.labels",
                      "".join(f"{v} {label}\n" for v, label in enumerate(labels)))
    print(f"{g.vertex_count} vertices, {g.edge_count} edges")
    return 0


def cmd_solve(args) -> int:
    loaded = _load(args)
    variant = Variant.parse(args.variant)
    _check_ceiling(loaded, variant, args.method, args.allow_long)
    g = loaded.graph
    dist = loaded.st.dist if loaded.st is not None else all_pairs_distances(g)
    budget = args.node_budget if args.node_budget is not None else default_node_budget()
    start = time.perf_counter()
    status = 0
    try:
        if args.method == "exhaustive":
            result = exhaustive_max(g, variant, vertex_limit=args.vertex_limit, dist=dist)
        elif args.method == "bnb":
            result = branch_and_bound_max(g, variant, node_budget=budget, dist=dist)
        else:
            result = max_via_sat(g, variant, dist=dist)
    except BudgetExceeded as exc:
        result = exc.result
        status = 2
    elapsed = time.perf_counter() - start
    if validate_set(g, dist, result.witness, variant) is not None:
        raise AssertionError("solver returned an invalid witness")
    optima = None
    if args.enumerate_optima and result.exact:
        optima = [list(s) for s in enumerate_optima(g, variant, result.optimum, dist=dist)]
    report = RunReport(
        command=args.command_line,
        graph=loaded.identity(),
        variant=variant.value,
        method=args.method,
        optimum=result.optimum,
        exact=result.exact,
        witness=list(result.witness),
        labels=[_label(loaded, v) for v in result.witness],
        wall_time_s=elapsed,
        nodes=result.nodes_explored,
        all_optima=optima,
    )
    text = report.as_json() if args.json else report.as_text()
    if args.out:
        _atomic_write(args.out, text)
    sys.stdout.write(text)
    return status


def cmd_construct(args) -> int:
    variant = Variant.parse(args.variant)
    st = build_sierpinski_triangle(args.n)
    built = construct(variant, args.n, st)
    labels = " ".join(f"{v}={st.word_label(v)}" for v in built.vertices)
    text = (f"# variant: {variant.value}\n# n: {args.n}\n# expected_size: {built.expected_size}\n"
            f"# labels: {labels}\n" + "".join(f"{v}\n" for v in built.vertices))
    if args.out:
        _atomic_write(args.out, text)
        print(f"{len(built)} vertices written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    with open(args.graph) as fh:
        g = read_graph(fh)
    members = read_vertex_set(args.set)
    violation = validate_set(g, all_pairs_distances(g), members, Variant.parse(args.variant))
    if violation is None:
        print("OK")
        return 0
    print(violation)
    return 1


def cmd_encode(args) -> int:
    loaded = _load(args)
    variant = Variant.parse(args.variant)
    g = loaded.graph
    dist = loaded.st.dist if loaded.st is not None else all_pairs_distances(g)
    header = [f"{variant.value} model of {loaded.identity()}"]
    if args.format == "dimacs":
        if args.ell is None:
            raise CliError("--ell is required for DIMACS output")
        cnf = encode_visibility_sat(g, variant, args.ell, dist=dist)
        header.append(f"ell={args.ell}; x_v false means v is in the set")
        text = _render(write_dimacs, cnf, comments=header)
        if args.map:
            _atomic_write(args.map, _render(write_var_map, cnf))
        summary = f"{cnf.num_vars} variables, {len(cnf.clauses)} clauses"
    else:
        model = encode_visibility_ilp(g, variant, dist=dist)
        text = _render(write_lp, model, comments=header)
        summary = f"{len(model.variables)} variables, {len(model.constraints)} constraints"
    if args.out:
        _atomic_write(args.out, text)
        print(summary)
    else:
        sys.stdout.write(text)
    return 0


def certify(n_max: int, allow_long: bool = False, corrupt: Variant | None = None,
            with_sat: bool = False, out=None) -> bool:
    """Print one row per (n, variant); return True when every row matches."""
    out = out or sys.stdout
    ok = True
    out.write(f"{'n':>2} {'variant':<7} {'closed':>6} {'built':>5} {'valid':>5} {'exact':>5}  status\n")
    for n in range(1, n_max + 1):
        if n > CONSTRUCTION_CEILING and not allow_long:
            out.write(f"{n:>2} skipped: beyond construction ceiling {CONSTRUCTION_CEILING} (use --allow-long)\n")
            continue
        st = build_sierpinski_triangle(n)
        for variant in Variant:
            expected = closed_form(variant, n)
            try:
                built = list(construct(variant, n, st).vertices)
            except ConstructionError:
                built = []
            if corrupt is variant and built:
                built = built[:-1]
            valid = validate_set(st.graph, st.dist, built, variant) is None
            exact = None
            if n <= EXACT_CEILING[variant] or allow_long:
                exact = branch_and_bound_max(st.graph, variant, dist=st.dist,
                                             seed=tuple(built) if valid else ()).optimum
                if with_sat:
                    sat = max_via_sat(st.graph, variant, dist=st.dist).optimum
                    if sat != exact:
                        exact = -1
            match = valid and len(built) == expected and exact in (None, expected)
            ok &= match
            exact_s = "-" if exact is None else str(exact)
            out.write(f"{n:>2} {variant.value:<7} {expected:>6} {len(built):>5} {str(valid).lower():>5} "
                      f"{exact_s:>5}  {'MATCH' if match else 'MISMATCH'}\n")
            out.flush()
    return ok


def cmd_certify(args) -> int:
    corrupt = Variant.parse(args.corrupt) if args.corrupt else None
    return 0 if certify(args.n_max, args.allow_long, corrupt, args.sat) else 1


def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="edge-list or DIMACS graph file")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stvis", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("generate", help="write S^n or ST_3^n to a graph file")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["edgelist", "dimacs"], default="edgelist")
    p.add_argument("--out")
    p.add_argument("--labels", help="label map path (default: OUT.labels)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="compute an exact maximum set")
    _graph_args(p)
    p.add_argument("--variant", required=True)
    p.add_argument("--method", choices=["exhaustive", "bnb", "sat"], default="bnb")
    p.add_argument("--node-budget", type=int)
    p.add_argument("--vertex-limit", type=int, default=20)
    p.add_argument("--enumerate-optima", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--allow-long", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("construct", help="write the explicit optimal set for ST_3^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a vertex set against a variant")
    p.add_argument("graph")
    p.add_argument("set")
    p.add_argument("--variant", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("encode", help="emit a DIMACS CNF or LP model")
    _graph_args(p)
    p.add_argument("--variant", required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--format", choices=["dimacs", "lp"], default="dimacs")
    p.add_argument("--out")
    p.add_argument("--map", help="write the variable map sidecar here (DIMACS only)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("certify", help="check every closed form up to n_max")
    p.add_argument("n_max", type=int)
    p.add_argument("--allow-long", action="store_true")
    p.add_argument("--sat", action="store_true", help="also cross-check with the SAT sweep")
    p.add_argument("--corrupt", help=argparse.SUPPRESS)  # negative-control hook for tests
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_line = "stvis " + shlex.join(argv)
    try:
        return args.func(args)
    except (CliError, GraphError, ResourceLimitError, GraphTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
