"""
Command-line entry point: ``fqwalk <subcommand> --graph <name|path> ...``.

Exit codes: 0 on success, 1 on bad input (graph, coin, options), 2 when an
internal invariant breaks.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import networkx as nx
import numpy as np

from .config import PRINT_ZERO_TOL, Settings
from .core.blowup import BlowUpGraph, blow_up, degree_audit, dump_blowup
from .core.coin import (
    Coin,
    make_coin,
    omega_is_one,
    parse_coin_matrix,
    parse_coin_spec,
    parse_complex,
)
from .core.rotation_graph import (
    FacialWalk,
    RotationTailedGraph,
    dual_graph,
    genus,
    trace_faces,
)
from .dual.forest_oracle import (
    enumerate_family_h1,
    enumerate_family_h2,
    gram_inverse_combinatorial,
    iota,
    pointed_dual,
)
from .errors import FacialWalkError, InvariantError, PreconditionError
from .tools.builtin_graphs import load_graph
from .tools.formatting import (
    format_complex,
    format_matrix,
    format_real,
    render,
)
from .walk.dynamics import (
    ArcState,
    evolve,
    fixed_point_solve,
    flux_residual,
    key_lemma_residual,
)
from .walk.scattering import DetectionResult, detect_embedding, k33_verdict, scattering_matrix
from .walk.stationary import (
    gram_matrix,
    internal_facial_function,
    luminous_faces,
    luminous_faces_from_support,
    stationary_state,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2

STATIONARY_METHODS = ("gram", "project", "solve", "evolve")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    graph_source: str
    coin_spec: Optional[str] = None
    coin_matrix: Optional[str] = None
    inflow_spec: str = "ones"
    tol: float = 1e-10
    max_steps: int = 100_000
    support_threshold: float = 1e-10
    method: str = "project"
    fmt: str = "table"
    output: Optional[str] = None
    detect: Optional[str] = None
    list_members: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace, settings: Settings) -> "RunConfig":
        return cls(
            command=args.command,
            graph_source=args.graph,
            coin_spec=getattr(args, "coin", None),
            coin_matrix=getattr(args, "coin_matrix", None),
            inflow_spec=getattr(args, "inflow", "ones"),
            tol=args.tol if getattr(args, "tol", None) else settings.tol,
            max_steps=(
                args.max_steps
                if getattr(args, "max_steps", None) is not None
                else settings.max_steps
            ),
            support_threshold=settings.support_threshold,
            method=getattr(args, "method", "project"),
            fmt=args.format,
            output=args.output,
            detect=getattr(args, "detect", None) or getattr(args, "source", None),
            list_members=getattr(args, "list", False),
        )


@dataclass
class Workspace:
    """A resolved run: validated graph and coin, traced faces, blow-up."""

    config: RunConfig
    graph: RotationTailedGraph
    faces: List[FacialWalk]
    bu: BlowUpGraph
    coin: Optional[Coin]

    @classmethod
    def resolve(cls, config: RunConfig) -> "Workspace":
        graph = load_graph(config.graph_source)
        coin = None
        if config.coin_matrix:
            coin = parse_coin_matrix(config.coin_matrix)
        elif config.coin_spec:
            coin = parse_coin_spec(config.coin_spec)
        return cls(config, graph, trace_faces(graph), blow_up(graph), coin)

    def require_coin(self) -> Coin:
        if self.coin is None:
            raise UsageError(f"'{self.config.command}' needs --coin or --coin-matrix")
        return self.coin

    def inflow(self) -> np.ndarray:
        return parse_inflow(self.config.inflow_spec, self.bu)


def parse_inflow(spec: str, bu: BlowUpGraph) -> np.ndarray:
    """``ones``, ``zeros``, ``unit:<vertex>`` or complex values in tail order."""
    k = len(bu.quays)
    s = spec.strip()
    if s == "ones":
        return np.ones(k, dtype=np.complex128)
    if s == "zeros":
        return np.zeros(k, dtype=np.complex128)
    if s.startswith("unit:"):
        v = s[5:]
        if v not in bu.quay_index:
            raise PreconditionError(f"vertex {v} does not carry a tail")
        alpha = np.zeros(k, dtype=np.complex128)
        alpha[bu.quay_index[v]] = 1.0
        return alpha
    values = [parse_complex(p) for p in s.split(",") if p.strip()]
    if len(values) != k:
        raise PreconditionError(f"inflow lists {len(values)} values for {k} tails")
    return np.array(values, dtype=np.complex128)


class Report:
    """
    Output of one subcommand.

    In table mode everything goes to the body in order. In csv mode the body
    holds only CSV sections, separated by a blank line, and the summary lines
    are kept apart as notes (printed on stderr).
    """

    def __init__(self, fmt: str):
        self.fmt = fmt
        self._body: List[str] = []
        self._notes: List[str] = []
        self._sections = 0

    @property
    def is_csv(self) -> bool:
        return self.fmt == "csv"

    def line(self, text: str) -> None:
        (self._notes if self.is_csv else self._body).append(text + "\n")

    def blank(self) -> None:
        if not self.is_csv:
            self._body.append("\n")

    def table(self, header: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
        if self.is_csv and self._sections:
            self._body.append("\n")
        self._sections += 1
        self._body.append(render(header, rows, self.fmt))

    def csv_table(self, header: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
        if self.is_csv:
            self.table(header, rows)

    @property
    def body(self) -> str:
        return "".join(self._body)

    @property
    def notes(self) -> str:
        return "".join(self._notes)


def _face_label(i: int) -> str:
    return f"f{i}"


def _csv_complex(z: complex) -> List[str]:
    if abs(z) < PRINT_ZERO_TOL:
        return ["0~", "0~"]
    return [format_real(z.real), format_real(z.imag)]


def _amplitude_rows(bu: BlowUpGraph, psi: np.ndarray, fmt: str) -> List[List[object]]:
    rows: List[List[object]] = []
    for idx in range(bu.num_arcs):
        arc = bu.arc(idx)
        z = complex(psi[idx])
        if fmt == "csv":
            rows.append([arc.kind, arc.index, *_csv_complex(z)])
        else:
            rows.append(
                [arc.kind, arc.index, f"{arc.tail[0]},{arc.tail[1]}",
                 f"{arc.head[0]},{arc.head[1]}", format_complex(z)]
            )
    return rows


def _amplitude_table(rep: Report, bu: BlowUpGraph, psi: np.ndarray) -> None:
    header = (
        ["arc_kind", "arc_index", "re", "im"]
        if rep.is_csv
        else ["arc_kind", "arc_index", "from", "to", "amplitude"]
    )
    rep.table(header, _amplitude_rows(bu, psi, rep.fmt))


def _matrix_rows(label: str, m: np.ndarray) -> List[List[object]]:
    m = np.atleast_2d(m)
    return [
        [label, i, j, *_csv_complex(complex(m[i, j]))]
        for i in range(m.shape[0])
        for j in range(m.shape[1])
    ]


def cmd_faces(ws: Workspace) -> Report:
    g = ws.graph
    rep = Report(ws.config.fmt)
    rows = [
        [
            _face_label(i),
            f.kind,
            f.length,
            " ".join(f.quays) or "-",
            " ".join(map(str, f.gaps)) if f.is_external else "-",
            " ".join(f.vertex_sequence),
        ]
        for i, f in enumerate(ws.faces)
    ]
    rep.line(
        f"graph: {ws.config.graph_source}  |V|={len(g.vertices)} |A|={len(g.arcs)} "
        f"|boundary|={len(g.boundary)}"
    )
    rep.line(f"faces: {len(ws.faces)}")
    rep.table(["face", "kind", "length", "quays", "gaps", "vertices"], rows)
    rep.line(f"genus: {genus(g)}")
    return rep


def cmd_genus(ws: Workspace) -> Report:
    g = ws.graph
    rep = Report(ws.config.fmt)
    closed_faces = trace_faces(g.tail_free())
    fields = [
        ("genus", genus(g)),
        ("b1", g.betti_number),
        ("faces", len(closed_faces)),
        ("face lengths", " ".join(str(f.length) for f in closed_faces)),
    ]
    for key, value in fields:
        rep.line(f"{key}: {value}")
    rep.csv_table(["genus", "b1", "faces", "face_lengths"], [[v for _, v in fields]])
    return rep


def cmd_blowup(ws: Workspace) -> Report:
    rep = Report(ws.config.fmt)
    audit = degree_audit(ws.bu)
    bad = [v for v, deg in audit.items() if deg != (2, 2)]
    rep.line(dump_blowup(ws.bu).rstrip("\n"))
    rep.csv_table(
        ["arc_kind", "arc_index", "from", "to"],
        [
            [a.kind, a.index, f"{a.tail[0]},{a.tail[1]}", f"{a.head[0]},{a.head[1]}"]
            for a in (*ws.bu.island_arcs, *ws.bu.bridge_arcs)
        ],
    )
    rep.line(f"vertices: {len(ws.bu.vertices)}")
    rep.line(f"degree audit: {'ok' if not bad else 'failed at ' + str(bad)}")
    return rep


def _detection_report(rep: Report, ws: Workspace, res: DetectionResult) -> None:
    rep.line(f"source: {res.source}")
    if rep.is_csv:
        rep.table(["tail", "re", "im"], [[v, *_csv_complex(z)] for v, z in res.outflow.items()])
    else:
        rep.table(["tail", "outflow"], [[v, format_complex(z)] for v, z in res.outflow.items()])
    rep.line(f"support: {' '.join(sorted(res.support, key=ws.bu.quay_index.get))}")
    rep.line(f"face tails: {' '.join(res.block)}")
    rep.line(f"N = {res.n_detected}")
    if res.silent:
        rep.line(
            "vanishing outflow on the source's face at: "
            f"{' '.join(sorted(res.silent, key=ws.bu.quay_index.get))}"
        )
    if nx.is_isomorphic(ws.graph.to_networkx(), nx.complete_bipartite_graph(3, 3)):
        rep.line(f"embedding: {k33_verdict(res)}")
    if not omega_is_one(ws.require_coin()):
        rep.line("warning: the embedding table assumes omega = 1")


def cmd_scatter(ws: Workspace) -> Report:
    coin = ws.require_coin()
    rep = Report(ws.config.fmt)
    sm = scattering_matrix(ws.bu, ws.faces, coin)
    rep.line(f"coin: {coin}")
    rep.line(f"quay order: {' '.join(sm.quay_order)}")
    entries: List[List[object]] = []
    for blk in sm.blocks:
        rep.line(
            f"block {_face_label(blk.face_index)}: quays {' '.join(blk.quays)} "
            f"gaps {' '.join(map(str, blk.gaps))}"
        )
        for text in format_matrix(blk.matrix):
            rep.line(text)
        entries.extend(_matrix_rows(_face_label(blk.face_index), blk.matrix))
    rep.csv_table(["block", "row", "col", "re", "im"], entries)
    rep.line(f"unitarity residual: {sm.unitarity_residual():.3e}")
    if ws.config.detect:
        res = detect_embedding(
            ws.bu, ws.faces, coin, ws.config.detect, ws.config.support_threshold
        )
        _detection_report(rep, ws, res)
    return rep


def cmd_detect(ws: Workspace) -> Report:
    coin = ws.require_coin()
    rep = Report(ws.config.fmt)
    res = detect_embedding(ws.bu, ws.faces, coin, ws.config.detect, ws.config.support_threshold)
    _detection_report(rep, ws, res)
    return rep


def cmd_simulate(ws: Workspace) -> Report:
    coin = ws.require_coin()
    cfg = ws.config
    rep = Report(cfg.fmt)
    result = evolve(ws.bu, coin, ws.inflow(), tol=cfg.tol, max_steps=cfg.max_steps)
    rows = [[n, f"{diff:.6e}", f"{norm:.12g}"] for n, diff, norm in result.history]
    rep.table(["step", "sup_diff", "outflow_norm"], rows)
    rep.blank()
    rep.line(f"converged: {str(result.converged).lower()}")
    rep.line(f"steps: {result.steps}")
    rep.blank()
    _amplitude_table(rep, ws.bu, result.state.internal)
    return rep


def cmd_stationary(ws: Workspace) -> Report:
    coin = ws.require_coin()
    cfg = ws.config
    rep = Report(cfg.fmt)
    alpha = ws.inflow()
    route = cfg.method if cfg.method in ("gram", "project") else "project"
    dec = stationary_state(ws.bu, ws.faces, coin, alpha, method=route)

    converged = True
    if cfg.method == "solve":
        psi = np.asarray(fixed_point_solve(ws.bu, coin, alpha).internal)
        reference = dec.psi
    elif cfg.method == "evolve":
        result = evolve(ws.bu, coin, alpha, tol=cfg.tol, max_steps=cfg.max_steps)
        psi = np.asarray(result.state.internal)
        reference = dec.psi
        converged = result.converged
    else:
        psi = dec.psi
        reference = np.asarray(fixed_point_solve(ws.bu, coin, alpha).internal)

    kernel = set(dec.kernel)
    coeff_rows = [
        [
            _face_label(i),
            f.kind,
            f.length,
            "yes" if i in kernel else "no",
            format_complex(dec.coefficients[i]) if i in kernel else "-",
        ]
        for i, f in enumerate(ws.faces)
    ]
    ortho = {
        fn.face_index: abs(complex(np.vdot(fn.values, psi)))
        for fn in (
            internal_facial_function(ws.bu, ws.faces[i], coin, face_index=i)
            for i in dec.kernel
        )
    }
    lum = luminous_faces(dec, cfg.support_threshold)
    lum_support = luminous_faces_from_support(ws.bu, dec, cfg.support_threshold)
    agreement = float(np.abs(psi - reference).max()) if psi.size else 0.0

    rep.line(f"coin: {coin}")
    rep.line(f"method: {cfg.method}")
    _amplitude_table(rep, ws.bu, psi)
    rep.blank()
    rep.table(["face", "kind", "length", "kernel", "c_f"], coeff_rows)
    rep.blank()
    rep.line(f"luminous faces: {' '.join(_face_label(i) for i in lum)}")
    if lum != lum_support:
        rep.line(f"luminous faces by support: {' '.join(_face_label(i) for i in lum_support)}")
    rep.line(
        "orthogonality residuals: "
        + (" ".join(f"{_face_label(i)}={r:.3e}" for i, r in ortho.items()) or "-")
    )
    if not converged:
        rep.line(f"converged: false (after {cfg.max_steps} steps)")
    rep.line(f"agreement residual: {agreement:.3e}")
    rep.line(f"key relation residual: {key_lemma_residual(ws.bu, coin, psi):.3e}")
    flux = flux_residual(ArcState.create(ws.bu, psi, alpha, dec.outflow))
    rep.line(f"flux residual: {flux:.3e}")
    return rep


def _member_line(pd, sg, labels: Dict[int, str]) -> str:
    parts = []
    for idx in sg.edges:
        i, j = pd.edges[idx].ends
        parts.append(f"({labels[i]}-{labels[j]})")
    return f"weight {sg.weight:.12g} : {' '.join(parts) or '(empty)'}"


def cmd_oracle(ws: Workspace) -> Report:
    coin = ws.require_coin()
    rep = Report(ws.config.fmt)
    if not omega_is_one(coin):
        logger.warning("oracle uses d only; building the Gram matrix at omega = 1")
        coin = make_coin(coin.d, 1.0)
    dual = dual_graph(ws.graph, ws.faces)
    external = dual.external_indices
    if len(external) != 1:
        raise PreconditionError(
            f"the oracle needs exactly one external face, got {len(external)}"
        )
    pd = pointed_dual(dual, external[0], coin)
    labels = {v: _face_label(f) for v, f in enumerate(pd.face_indices)}
    labels[pd.sink] = "f*"
    n = pd.sink

    m = gram_matrix(ws.faces, dual, coin)
    comb = gram_inverse_combinatorial(pd)
    direct = np.linalg.inv(m) if n else np.zeros((0, 0))
    i1 = iota(pd)

    rep.line(f"d: {coin.d:.12g}")
    rep.line(
        f"pointed dual: {pd.num_vertices} vertices, {len(pd.ordinary_edges)} edges, "
        f"{len(pd.loops)} loops"
    )
    rep.line(f"iota_1: {format_real(i1)}")
    if rep.is_csv:
        rows = [
            [labels[f], labels[g], format_real(comb[f, g] * i1),
             format_real(comb[f, g]), format_real(direct[f, g].real)]
            for f in range(n)
            for g in range(n)
        ]
        rep.table(["f", "g", "iota_2", "combinatorial_inverse", "direct_inverse"], rows)
    else:
        rows = [
            [labels[f], labels[g], format_real(comb[f, g] * i1)]
            for f in range(n)
            for g in range(n)
        ]
        rep.table(["f", "g", "iota_2"], rows)
        rep.line("combinatorial inverse:")
        for row in comb:
            rep.line(" ".join(format_real(x) for x in row))
        rep.line("direct inverse:")
        for row in direct:
            rep.line(" ".join(format_real(x) for x in row))
    rep.line(f"max discrepancy: {float(np.abs(comb - direct).max(initial=0.0)):.3e}")
    if ws.config.list_members:
        rep.line("H1 members:")
        for sg in enumerate_family_h1(pd):
            rep.line(f"  {_member_line(pd, sg, labels)}")
        for f in range(n):
            for g in range(f, n):
                rep.line(f"H2 members ({labels[f]}, {labels[g]}):")
                for sg in enumerate_family_h2(pd, f, g):
                    rep.line(f"  {_member_line(pd, sg, labels)}")
    return rep


COMMANDS: Dict[str, Callable[[Workspace], Report]] = {
    "faces": cmd_faces,
    "genus": cmd_genus,
    "blowup": cmd_blowup,
    "scatter": cmd_scatter,
    "simulate": cmd_simulate,
    "stationary": cmd_stationary,
    "oracle": cmd_oracle,
    "detect": cmd_detect,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--graph", required=True, help="Built-in graph name or graph file")
    common.add_argument("--format", choices=("table", "csv"), default="table")
    common.add_argument("-o", "--output", help="Write the report to this file")
    common.add_argument("-v", "--verbose", action="count", default=0)

    coin = _Parser(add_help=False)
    group = coin.add_mutually_exclusive_group()
    group.add_argument(
        "--coin", help="d=<real>,omega=<exp(i*pi*p/q)|<x>deg|complex>,phi=<real>"
    )
    group.add_argument("--coin-matrix", help="a,b,c,d as complex literals x+yi")

    flow = _Parser(add_help=False)
    flow.add_argument("--inflow", default="ones", help="ones | zeros | unit:<v> | z1,z2,...")
    flow.add_argument("--tol", type=float, help="Convergence tolerance (FQW_TOL)")
    flow.add_argument("--max-steps", type=int, help="Iteration limit (FQW_MAX_STEPS)")

    parser = _Parser(
        prog="fqwalk",
        description="Facial quantum walks on rotation tailed graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("faces", parents=[common], help="Trace facial walks")
    sub.add_parser("genus", parents=[common], help="Genus of the embedding")
    sub.add_parser("blowup", parents=[common], help="Dump the blow-up graph")
    p = sub.add_parser("scatter", parents=[common, coin], help="Scattering matrix")
    p.add_argument("--detect", metavar="VERTEX", help="Unit inflow at VERTEX")
    sub.add_parser("simulate", parents=[common, coin, flow], help="Iterate the walk")
    p = sub.add_parser("stationary", parents=[common, coin, flow], help="Stationary state")
    p.add_argument("--method", choices=STATIONARY_METHODS, default="project")
    p = sub.add_parser("oracle", parents=[common, coin], help="Spanning-forest weights")
    p.add_argument("--list", action="store_true", help="List every family member")
    p = sub.add_parser("detect", parents=[common, coin], help="Embedding detection")
    p.add_argument("--source", required=True, metavar="VERTEX")
    return parser


def _configure_logging(verbose: int, settings: Settings) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = Settings.from_env()
        args = build_parser().parse_args(argv)
        _configure_logging(args.verbose, settings)
        config = RunConfig.from_args(args, settings)
        report = COMMANDS[config.command](Workspace.resolve(config))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (FacialWalkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if report.notes:
        sys.stderr.write(report.notes)
    if config.output:
        Path(config.output).write_text(report.body, encoding="utf-8")
        print(f"wrote {config.output}")
    else:
        sys.stdout.write(report.body)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
