"""Boundary graph, certified spectral radius and the tiling verdict.

Nodes are triples (v, x, w) with v, w in V and x in Z[beta] \\ {0}.  The
candidate set is a deliberate over-approximation obtained from conjugate
bounds; repeatedly deleting nodes without successors leaves exactly the nodes
that start an infinite path, i.e. the boundary graph.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .dynamics import ParryData, parry_data
from .errors import BadParameters, BetaTilesError
from .field import BetaField, FieldElement, make_beta
from .lattice import conj_radius_upper, scan_box

CANDIDATE_CAP = 10**6
_SLACK = 1e-9

Node = tuple[FieldElement, FieldElement, FieldElement]


def _node_key(node: Node) -> tuple:
    return tuple((e.num, e.den) for e in node)


@dataclass
class BoundaryGraph:
    """Labelled multigraph on triples (v, x, w); edges are (src, dst, (a, b))."""

    field: BetaField
    nodes: list[Node]
    edges: list[tuple[int, int, tuple[int, int]]]
    rho_enclosure: tuple[Fraction, Fraction] | None = None
    index: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {n: i for i, n in enumerate(self.nodes)}

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def adjacency(self) -> np.ndarray:
        n = len(self.nodes)
        mat = np.zeros((n, n), dtype=np.int64)
        for s, t, _ in self.edges:
            mat[s, t] += 1
        return mat

    def out_degree(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for s, _, _ in self.edges:
            deg[s] += 1
        return deg

    def middles(self) -> list[FieldElement]:
        seen = []
        for _, x, _ in self.nodes:
            if x not in seen:
                seen.append(x)
        return seen

    def edge_multiset(self) -> dict:
        """{(src node, dst node, label): multiplicity}."""
        out: dict = defaultdict(int)
        for s, t, lab in self.edges:
            out[(self.nodes[s], self.nodes[t], lab)] += 1
        return dict(out)

    def induced(self, keep: Iterable[Node]) -> "BoundaryGraph":
        keep_set = set(keep)
        nodes = sorted((n for n in self.nodes if n in keep_set), key=_node_key)
        idx = {n: i for i, n in enumerate(nodes)}
        edges = [
            (idx[self.nodes[s]], idx[self.nodes[t]], lab)
            for s, t, lab in self.edges
            if self.nodes[s] in idx and self.nodes[t] in idx
        ]
        return BoundaryGraph(self.field, nodes, sorted(edges))


def _conj_bound(field: BetaField, v: FieldElement, w: FieldElement) -> list[float]:
    out = []
    for place, r in zip(field._places, conj_radius_upper(field)):
        vs, ws = v.conj(place), w.conj(place)
        out.append(abs(vs) + abs(ws) + abs(ws - vs) + 2 * r)
    return out


def candidate_nodes(parry: ParryData, cap: int = CANDIDATE_CAP) -> list[Node]:
    """All triples passing the real-interval test and the conjugate box test."""
    field = parry.field
    V = parry.V
    pairs = [(v, w) for v in V for w in V]
    bounds = {(v, w): [b * (1 + _SLACK) + _SLACK for b in _conj_bound(field, v, w)] for v, w in pairs}
    bmax = [max(bounds[p][i] for p in pairs) for i in range(len(field._places))]

    cand = scan_box(field, -1.0, 1.0, bmax, cap)
    cand = cand[np.any(cand != 0, axis=1)]
    coords = np.column_stack([np.abs(cand.astype(float) @ pw) for pw in field._conj_pows])

    nodes: list[Node] = []
    for row, cvals in zip(cand, coords):
        x = FieldElement(field, tuple(int(t) for t in row))
        for v, w in pairs:
            if any(c > b for c, b in zip(cvals, bounds[(v, w)])):
                continue
            if w - parry.hat(v) < x < parry.hat(w) - v:
                nodes.append((v, x, w))
    nodes.sort(key=_node_key)
    return nodes


def _transition_table(parry: ParryData) -> dict:
    """(v, a) -> v1 with (a + v)/beta in [v1, v1_hat), or None."""
    table = {}
    for v in parry.V:
        for a in parry.field.alphabet:
            y = (v + a).div_beta()
            table[(v, a)] = parry.interval_of(y) if y < 1 else None
    return table


def edges_among(parry: ParryData, nodes: Sequence[Node]) -> list[tuple[int, int, tuple[int, int]]]:
    """Edges of the boundary-graph rule between the given nodes."""
    field = parry.field
    c0 = field._c[0]
    table = _transition_table(parry)
    index = {n: i for i, n in enumerate(nodes)}
    edges = []
    for i, (v, x, w) in enumerate(nodes):
        for a in field.alphabet:
            v1 = table[(v, a)]
            if v1 is None:
                continue
            for b in field.alphabet:
                w1 = table[(w, b)]
                if w1 is None:
                    continue
                if (x.num[0] + b - a) % c0:
                    continue
                x1 = (x + (b - a)).div_beta()
                j = index.get((v1, x1, w1))
                if j is not None:
                    edges.append((i, j, (a, b)))
    return edges


def prune(graph: BoundaryGraph) -> BoundaryGraph:
    """Delete nodes of out-degree 0 until none remain."""
    n = len(graph.nodes)
    alive = [True] * n
    outdeg = graph.out_degree()
    preds = defaultdict(list)
    for s, t, _ in graph.edges:
        preds[t].append(s)
    stack = [i for i in range(n) if outdeg[i] == 0]
    while stack:
        i = stack.pop()
        if not alive[i]:
            continue
        alive[i] = False
        for s in preds[i]:
            if alive[s]:
                outdeg[s] -= 1
                if outdeg[s] == 0:
                    stack.append(s)
    keep = [graph.nodes[i] for i in range(n) if alive[i]]
    return graph.induced(keep)


def build_boundary_graph(parry: ParryData, cap: int = CANDIDATE_CAP) -> BoundaryGraph:
    nodes = candidate_nodes(parry, cap)
    graph = BoundaryGraph(parry.field, nodes, edges_among(parry, nodes))
    graph = prune(graph)
    graph.rho_enclosure = spectral_radius_enclosure(graph)
    return graph


# -- spectral radius ----------------------------------------------------------


def _scc_bounds(mat: np.ndarray, refine_steps: int) -> tuple[Fraction, Fraction]:
    """Collatz-Wielandt bounds for an irreducible nonnegative integer matrix."""
    n = len(mat)
    if n == 1:
        r = Fraction(int(mat[0, 0]))
        return r, r
    vals_r, vecs_r = np.linalg.eig(mat.astype(float))
    k = int(np.argmax(vals_r.real))
    vec = np.abs(vecs_r[:, k].real)
    if not np.all(np.isfinite(vec)) or vec.max() <= 0:
        vec = np.ones(n)
    vec = vec / vec.max()
    x = [max(1, int(round(t * 2**40))) for t in vec]
    rows = [[int(v) for v in r] for r in mat]
    best_lo, best_hi = Fraction(0), None

    def ratios(vec_int):
        ax = [sum(a * b for a, b in zip(r, vec_int)) for r in rows]
        rs = [Fraction(p, q) for p, q in zip(ax, vec_int)]
        return ax, min(rs), max(rs)

    for step in range(refine_steps + 1):
        ax, lo, hi = ratios(x)
        best_lo = max(best_lo, lo)
        best_hi = hi if best_hi is None else min(best_hi, hi)
        if best_lo == best_hi:
            break
        # (A + I) x keeps iterating even for periodic components
        g = math.gcd(*[a + b for a, b in zip(ax, x)])
        x = [(a + b) // g for a, b in zip(ax, x)]
    return best_lo, best_hi


def spectral_radius_enclosure(graph: BoundaryGraph, refine_steps: int = 8) -> tuple[Fraction, Fraction]:
    """Rigorous [lo, hi] containing the spectral radius of the adjacency matrix."""
    mat = graph.adjacency
    return matrix_spectral_enclosure(mat, refine_steps)


def matrix_spectral_enclosure(mat: np.ndarray, refine_steps: int = 8) -> tuple[Fraction, Fraction]:
    n = len(mat)
    if n == 0:
        return Fraction(0), Fraction(0)
    ncomp, labels = connected_components(csr_matrix(mat), directed=True, connection="strong")
    lo, hi = Fraction(0), Fraction(0)
    for c in range(ncomp):
        idx = np.nonzero(labels == c)[0]
        sub = mat[np.ix_(idx, idx)]
        if not sub.any():
            continue
        clo, chi = _scc_bounds(sub, refine_steps)
        lo, hi = max(lo, clo), max(hi, chi)
    return lo, hi


@dataclass(frozen=True)
class TilingVerdict:
    verdict: str
    rho: tuple[Fraction, Fraction]
    beta: tuple[Fraction, Fraction]

    @property
    def certified(self) -> bool:
        return self.verdict != "Undecided"


def decide_tiling(beta: BetaField, graph: BoundaryGraph, max_rounds: int = 6) -> TilingVerdict:
    """Tiling iff the spectral radius is certified below beta."""
    steps = 8
    bits = 64
    for _ in range(max_rounds):
        lo, hi = matrix_spectral_enclosure(graph.adjacency, steps)
        blo, bhi = beta.beta_interval(bits)
        if hi < blo:
            return TilingVerdict("Tiling", (lo, hi), (blo, bhi))
        if lo >= bhi:
            return TilingVerdict("NotTiling", (lo, hi), (blo, bhi))
        steps *= 4
        bits *= 2
    return TilingVerdict("Undecided", (lo, hi), (blo, bhi))


# -- quadratic pruned graph ----------------------------------------------------


def quadratic_field(a: int, b: int) -> BetaField:
    return make_beta((1, -a, -b))


def pruned_quadratic_graph(a: int, b: int, field: BetaField | None = None) -> BoundaryGraph:
    """The explicit transition lists of the pruned boundary graph for beta^2 = a beta + b."""
    if b < 1 or a < b:
        raise BadParameters("need a >= b >= 1")
    field = field or quadratic_field(a, b)
    zero = field.zero
    v = field.beta - a
    one = field.one
    vm1, omv = v - one, one - v
    trans: list[tuple[Node, Node, tuple[int, int]]] = []

    def add(srcs, dst, labels):
        for s in srcs:
            for lab in labels:
                trans.append((s, dst, lab))

    if 2 * b <= a:
        add([(v, vm1, zero)], (zero, omv, v), [(d, d + a - b + 1) for d in range(0, b)])
        add([(zero, omv, v)], (v, vm1, zero), [(d, d - a + b - 1) for d in range(a - b + 1, a + 1)])
        add([(zero, v, v), (v, v, v)], (zero, omv, v), [(d, d + a - b) for d in range(0, b)])
        add([(v, -v, zero), (v, -v, v)], (v, vm1, zero), [(d, d - a + b) for d in range(a - b, a)])
    else:
        src1 = [(v, vm1, zero), (zero, vm1, zero)]
        add(src1, (zero, omv, zero), [(d, d + a - b + 1) for d in range(0, 2 * b - a - 1)])
        add(src1, (zero, omv, v), [(d, d + a - b + 1) for d in range(2 * b - a - 1, b)])
        src2 = [(zero, omv, v), (zero, omv, zero)]
        add(src2, (zero, vm1, zero), [(d, d - a + b - 1) for d in range(a - b + 1, b)])
        add(src2, (v, vm1, zero), [(d, d - a + b - 1) for d in range(b, a + 1)])
        add([(zero, v, v)], (zero, omv, zero), [(d, d + a - b) for d in range(0, 2 * b - a)])
        add([(zero, v, v)], (zero, omv, v), [(d, d + a - b) for d in range(2 * b - a, b)])
        add([(v, -v, zero)], (zero, vm1, zero), [(d, d - a + b) for d in range(a - b, b)])
        add([(v, -v, zero)], (v, vm1, zero), [(d, d - a + b) for d in range(b, a)])

    nodes = sorted({n for s, t, _ in trans for n in (s, t)}, key=_node_key)
    idx = {n: i for i, n in enumerate(nodes)}
    edges = sorted((idx[s], idx[t], lab) for s, t, lab in trans)
    graph = BoundaryGraph(field, nodes, edges)
    graph.rho_enclosure = spectral_radius_enclosure(graph)
    return graph


def pruned_middles(field: BetaField) -> list[FieldElement]:
    """+-{beta - floor(beta), ceil(beta) - beta}."""
    v = field.beta - field.alphabet_max
    w = field.integer(field.alphabet_max + 1) - field.beta
    return [v, w, -v, -w]


def merge_by_middle(graph: BoundaryGraph) -> BoundaryGraph:
    """Identify states with equal middle component.

    Raises if two states with the same middle have different outgoing
    (label, target middle) multisets, since then merging would change paths.
    """
    field = graph.field
    out: dict = defaultdict(lambda: defaultdict(int))
    for s, t, lab in graph.edges:
        out[s][(lab, graph.nodes[t][1])] += 1
    by_mid: dict = {}
    for i, (_, x, _) in enumerate(graph.nodes):
        sig = dict(out[i])
        if x in by_mid and by_mid[x] != sig:
            raise BetaTilesError(f"states with middle {x!r} have different successors")
        by_mid.setdefault(x, sig)
    mids = sorted(by_mid, key=lambda e: (e.num, e.den))
    nodes = [(field.zero, m, field.zero) for m in mids]
    idx = {m: i for i, m in enumerate(mids)}
    edges = []
    for m, sig in by_mid.items():
        for (lab, tm), mult in sig.items():
            edges.extend([(idx[m], idx[tm], lab)] * mult)
    merged = BoundaryGraph(field, nodes, sorted(edges))
    merged.rho_enclosure = spectral_radius_enclosure(merged)
    return merged


# -- DOT ----------------------------------------------------------------------------


def _elem_label(e: FieldElement) -> str:
    return "[" + ",".join(str(v) for v in e.num) + "]" + ("" if e.den == 1 else f"/{e.den}")


def node_label(node: Node) -> str:
    return "(" + ";".join(_elem_label(e) for e in node) + ")"


def export_dot(graph: BoundaryGraph, name: str = "boundary") -> str:
    """Deterministic DOT text; node ids follow the sorted node order."""
    lines = [f"digraph {name} {{"]
    order = sorted(range(len(graph.nodes)), key=lambda i: _node_key(graph.nodes[i]))
    ids = {i: f"n{k}" for k, i in enumerate(order)}
    for i in order:
        lines.append(f'  {ids[i]} [label="{node_label(graph.nodes[i])}"];')
    for s, t, (a, b) in sorted(graph.edges, key=lambda e: (ids[e[0]], ids[e[1]], e[2])):
        lines.append(f'  {ids[s]} -> {ids[t]} [label="({a},{b})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE_RE = re.compile(r'^\s*(\w+)\s*\[label="([^"]*)"\];\s*$')
_EDGE_RE = re.compile(r'^\s*(\w+)\s*->\s*(\w+)\s*\[label="\((-?\d+),(-?\d+)\)"\];\s*$')


def parse_dot(text: str) -> tuple[dict[str, str], list[tuple[str, str, tuple[int, int]]]]:
    """Read back what export_dot writes: ({id: label}, [(src id, dst id, (a, b))])."""
    nodes: dict[str, str] = {}
    edges = []
    for line in text.splitlines():
        m = _EDGE_RE.match(line)
        if m:
            edges.append((m.group(1), m.group(2), (int(m.group(3)), int(m.group(4)))))
            continue
        m = _NODE_RE.match(line)
        if m:
            nodes[m.group(1)] = m.group(2)
    return nodes, edges


def boundary_graph_for(poly, cap: int = CANDIDATE_CAP) -> tuple[ParryData, BoundaryGraph]:
    field = make_beta(poly)
    parry = parry_data(field)
    return parry, build_boundary_graph(parry, cap)
