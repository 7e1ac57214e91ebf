"""Dynamic coupling of the site process to the bond process.

Site states are not drawn directly: a frontier exploration assigns each
vertex from either its own seed variable (when no explored red cluster
touches it) or the bond variable of the earliest canonical unexamined edge
leading to an already-red vertex. Each variable is consumed at most once,
so the resulting site field has the exact product Bernoulli(p) law, while
by construction every red cluster lies inside one open-bond cluster.

The enhanced variant reuses the same bond variables: a correctly configured
center turns green when one unexamined arm edge from each of its two pair
groups is open, giving the green indicator probability p^2 from fresh
variables and routing every green center into the bond cluster of its legs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .enhancement import bowtie_pattern
from .errors import CouplingInvariantError
from .geom_graph import GilbertGraph, components
from .percolation import _check_prob
from .point_process import StreamSpec

__all__ = [
    "CouplingState",
    "CoupledEnhancement",
    "DominationReport",
    "run_coupling",
    "apply_coupled_enhancement",
    "replay_provenance",
    "verify_domination",
]

# stream path labels for the two mark families
_EDGE_SUBSTREAM = 0
_SEED_SUBSTREAM = 1

PROV_SEED = 0
PROV_EDGE = 1


@dataclass(frozen=True)
class CouplingState:
    """Outcome of one coupled exploration at site level p."""

    p: float
    x_marks: np.ndarray  # (m,) uniform bond marks
    z_marks: np.ndarray  # (n,) uniform seed marks
    red: np.ndarray  # (n,) bool site states
    prov_kind: np.ndarray  # (n,) uint8, PROV_SEED or PROV_EDGE
    prov_idx: np.ndarray  # (n,) int64 mark index consumed for each vertex
    examined: np.ndarray  # (m,) bool edges consumed by the exploration
    step: np.ndarray  # (n,) int64 assignment order

    def __post_init__(self):
        for arr in (self.x_marks, self.z_marks, self.red, self.prov_kind,
                    self.prov_idx, self.examined, self.step):
            arr.flags.writeable = False

    @property
    def x_open(self) -> np.ndarray:
        return self.x_marks < self.p

    @property
    def z_open(self) -> np.ndarray:
        return self.z_marks < self.p


def run_coupling(graph: GilbertGraph, p: float, stream: StreamSpec) -> CouplingState:
    """Explore the graph, assigning site states from bond and seed marks."""
    p = _check_prob(p, "p")
    x = stream.child(_EDGE_SUBSTREAM).generator().random(graph.m)
    z = stream.child(_SEED_SUBSTREAM).generator().random(graph.n)
    y, prov_kind, prov_idx, examined, step = _kernels.run_coupling_core(
        graph.indptr, graph.indices, graph.adj_edge,
        (x < p).astype(np.uint8), (z < p).astype(np.uint8),
    )
    return CouplingState(
        p=p, x_marks=x, z_marks=z, red=y.astype(bool),
        prov_kind=prov_kind, prov_idx=prov_idx,
        examined=examined.astype(bool), step=step,
    )


@dataclass(frozen=True)
class CoupledEnhancement:
    """Greens decided from unexamined bond marks of a coupled exploration."""

    q: float
    green: np.ndarray  # (n,) bool
    configured: np.ndarray  # (n,) bool
    consumed: np.ndarray  # (m,) bool arm edges consumed by green decisions
    arms: dict  # center -> (edge from first pair group, edge from second)

    def __post_init__(self):
        for arr in (self.green, self.configured, self.consumed):
            arr.flags.writeable = False


def _group_pick(graph, c, members, blocked, consumed):
    """Earliest-canonical unexamined, unconsumed arm edge from c to the group."""
    for u in members:  # ascending u is ascending canonical edge id
        e = graph.edge_id(min(c, u), max(c, u))
        if not blocked[e] and not consumed[e]:
            return e
    raise CouplingInvariantError(
        f"no usable arm edge from center {c} into group {tuple(int(u) for u in members)}"
    )


def apply_coupled_enhancement(graph: GilbertGraph, state: CouplingState) -> CoupledEnhancement:
    """Decide greens for configured centers from leftover bond marks.

    For each configured center (ascending) the four arm edges split into the
    two matched pair groups; the exploration can have examined at most one
    arm overall (arms of a closed center are only ever examined to assign
    the center itself), so each group still holds an unexamined edge. The
    first such edge per group is consumed and the center turns green when
    both are open, an event of probability p squared.
    """
    elig, nb4, partner0 = bowtie_pattern(graph)
    red = state.red
    cfg = np.zeros(graph.n, dtype=bool)
    idx = np.flatnonzero(elig)
    if len(idx):
        cfg[idx] = ~red[idx] & red[nb4[idx]].all(axis=1)
    green = np.zeros(graph.n, dtype=bool)
    consumed = np.zeros(graph.m, dtype=bool)
    x_open = state.x_open
    arms: dict[int, tuple[int, int]] = {}
    for c in np.flatnonzero(cfg):
        row = nb4[c]
        k = int(partner0[c])
        first = sorted((int(row[0]), int(row[k])))
        second = sorted(int(row[j]) for j in range(1, 4) if j != k)
        e1 = _group_pick(graph, int(c), first, state.examined, consumed)
        consumed[e1] = True
        e2 = _group_pick(graph, int(c), second, state.examined, consumed)
        consumed[e2] = True
        arms[int(c)] = (e1, e2)
        green[c] = bool(x_open[e1] and x_open[e2])
    if (consumed & state.examined).any():
        raise CouplingInvariantError("green decision consumed an examined edge")
    return CoupledEnhancement(
        q=state.p * state.p, green=green, configured=cfg, consumed=consumed, arms=arms
    )


def replay_provenance(graph: GilbertGraph, state: CouplingState) -> None:
    """Re-derive every site state from its recorded mark; raise on mismatch.

    Checks that seed vertices match their own z mark, edge-assigned vertices
    match the bond mark of an incident examined edge, and no mark index is
    consumed twice.
    """
    x_open = state.x_open
    z_open = state.z_open
    seen_edges = set()
    for v in range(graph.n):
        kind = int(state.prov_kind[v])
        idx = int(state.prov_idx[v])
        if kind == PROV_SEED:
            if idx != v:
                raise CouplingInvariantError(f"vertex {v} seeded from foreign index {idx}")
            if bool(state.red[v]) != bool(z_open[v]):
                raise CouplingInvariantError(f"vertex {v} disagrees with its seed mark")
        elif kind == PROV_EDGE:
            if not (0 <= idx < graph.m):
                raise CouplingInvariantError(f"vertex {v} cites edge {idx} out of range")
            if idx in seen_edges:
                raise CouplingInvariantError(f"edge {idx} consumed twice")
            seen_edges.add(idx)
            i, j = graph.edges[idx]
            if v not in (int(i), int(j)):
                raise CouplingInvariantError(f"vertex {v} cites non-incident edge {idx}")
            if not state.examined[idx]:
                raise CouplingInvariantError(f"edge {idx} consumed but not marked examined")
            if bool(state.red[v]) != bool(x_open[idx]):
                raise CouplingInvariantError(f"vertex {v} disagrees with edge {idx}")
        else:
            raise CouplingInvariantError(f"vertex {v} has unknown provenance kind {kind}")
    extra = int(state.examined.sum()) - len(seen_edges)
    if extra:
        raise CouplingInvariantError(f"{extra} examined edges were never consumed")


@dataclass(frozen=True)
class DominationReport:
    """Whether every coloured cluster sits inside a single bond cluster."""

    holds: bool
    clusters_checked: int
    violating_vertices: tuple[int, ...] = ()


def verify_domination(graph: GilbertGraph, coloured, x_open) -> DominationReport:
    """Check cluster-by-cluster containment of the coloured site field."""
    coloured = np.asarray(coloured, dtype=bool)
    site_labels = components(graph, vertex_active=coloured)
    bond_labels = components(graph, edge_active=np.asarray(x_open, dtype=bool))
    k = int(site_labels.max()) + 1 if len(site_labels) and site_labels.max() >= 0 else 0
    for lab in range(k):
        members = np.flatnonzero(site_labels == lab)
        hosts = np.unique(bond_labels[members])
        if len(hosts) > 1:
            return DominationReport(
                holds=False, clusters_checked=lab + 1,
                violating_vertices=tuple(int(v) for v in members[:8]),
            )
    return DominationReport(holds=True, clusters_checked=k)
