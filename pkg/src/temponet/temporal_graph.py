"""Core data model: networks whose vertices and edges carry arrival times.

A :class:`TemporalGraph` stores one join time per vertex and a list of
timestamped edges. It is immutable after construction, so any number of
readers may take :class:`Snapshot` views concurrently. Timestamps are
opaque non-negative integers in caller-defined units (weeks, years,
iteration indices); the toolkit never converts calendar units.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int, int]  # (source, target, created)

_META_SUFFIX = ".meta.json"


class TemporalGraph:
    """An append-only network frozen at construction time.

    Vertex ids are dense integers in ``[0, n)`` assigned in join order,
    so ``join_times`` must be non-decreasing. Every edge endpoint must
    have joined no later than the edge was created. In simple mode
    (default) duplicate edges are rejected; self-loops are rejected
    unless ``allow_self_loops`` is set.
    """

    __slots__ = (
        "directed",
        "allow_self_loops",
        "time_unit",
        "join_times",
        "edges",
        "info",
        "_edges_by_time",
        "_edge_times_sorted",
        "_first_link_times",
    )

    def __init__(
        self,
        join_times: Sequence[int],
        edges: Iterable[Edge],
        *,
        directed: bool = False,
        allow_self_loops: bool = False,
        simple: bool = True,
        time_unit: str = "",
        info: dict | None = None,
    ):
        self.directed = bool(directed)
        self.allow_self_loops = bool(allow_self_loops)
        self.time_unit = time_unit
        self.join_times = tuple(int(t) for t in join_times)
        self.edges = tuple((int(u), int(v), int(t)) for u, v, t in edges)
        self.info = dict(info) if info else {}
        self._validate(simple)
        # Edges sorted by creation time; a snapshot's edge set is a prefix.
        self._edges_by_time = tuple(sorted(self.edges, key=lambda e: e[2]))
        self._edge_times_sorted = tuple(e[2] for e in self._edges_by_time)
        self._first_link_times = self._index_first_links()

    def _validate(self, simple: bool) -> None:
        n = len(self.join_times)
        prev = None
        for t in self.join_times:
            if t < 0:
                raise ValueError("join times must be non-negative")
            if prev is not None and t < prev:
                raise ValueError("vertex ids must be assigned in join order")
            prev = t
        seen: set[tuple[int, int]] = set()
        for u, v, t in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references unknown vertex")
            if self.join_times[u] > t or self.join_times[v] > t:
                raise ValueError(
                    f"edge ({u}, {v}) created at {t} before an endpoint joined"
                )
            if u == v and not self.allow_self_loops:
                raise ValueError("self-loops are not allowed in this graph")
            if simple:
                key = (u, v) if self.directed else (min(u, v), max(u, v))
                if key in seen:
                    raise ValueError(f"duplicate edge ({u}, {v}) in simple graph")
                seen.add(key)

    def _index_first_links(self) -> tuple[tuple[int, ...], ...]:
        # For each vertex, the sorted times of first contact with each
        # distinct neighbour; degree_at is then a bisect. A self-loop
        # contributes the vertex itself once.
        firsts: list[dict[int, int]] = [dict() for _ in self.join_times]
        for u, v, t in self._edges_by_time:
            if v not in firsts[u]:
                firsts[u][v] = t
            if u not in firsts[v]:
                firsts[v][u] = t
        return tuple(tuple(sorted(d.values())) for d in firsts)

    # -- basic facts ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.join_times)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def t_min(self) -> int:
        """Join time of the first vertex (0 for an empty graph)."""
        return self.join_times[0] if self.join_times else 0

    @property
    def t_max(self) -> int:
        """Join time of the last vertex (0 for an empty graph)."""
        return self.join_times[-1] if self.join_times else 0

    @property
    def active_time(self) -> int:
        """Time between the first and the last vertex arrival."""
        return self.t_max - self.t_min

    @property
    def t_end(self) -> int:
        """Latest event in the graph, vertex join or edge creation."""
        last_edge = self._edge_times_sorted[-1] if self.edges else 0
        return max(self.t_max, last_edge)

    # -- snapshots -----------------------------------------------------

    def snapshot_at(self, t: int) -> "Snapshot":
        """Restrict the graph to activity up to time ``t`` (inclusive)."""
        nv = bisect_right(self.join_times, t)
        ne = bisect_right(self._edge_times_sorted, t)
        return Snapshot(self, t, nv, ne)

    def snapshot_series(self, interval: int) -> list["Snapshot"]:
        """Snapshots at ``interval, 2*interval, ...`` measured from the
        first event, keeping a final shorter interval when the active
        time does not divide evenly."""
        if interval <= 0:
            raise ValueError("interval must be positive")
        if self.n_vertices == 0:
            return []
        horizons = []
        t = self.t_min + interval
        while t < self.t_end:
            horizons.append(t)
            t += interval
        if not horizons or horizons[-1] != self.t_end:
            horizons.append(self.t_end)
        return [self.snapshot_at(h) for h in horizons]

    def degree_at(self, v: int, t: int) -> int:
        """Number of distinct vertices linked to ``v`` by time ``t``,
        counting both edge directions; a self-loop contributes 1."""
        if not (0 <= v < self.n_vertices):
            raise KeyError(f"unknown vertex {v}")
        return bisect_right(self._first_link_times[v], t)

    def degrees_at(self, t: int) -> list[int]:
        """Degree of every vertex at time ``t`` (0 for not-yet-joined)."""
        return [bisect_right(first, t) for first in self._first_link_times]

    def __repr__(self) -> str:  # pragma: no cover
        kind = "directed" if self.directed else "undirected"
        return f"<TemporalGraph {kind} |V|={self.n_vertices} |E|={self.n_edges}>"


class Snapshot:
    """The parent graph restricted to vertices and edges that arrived by
    ``horizon``. A lightweight read-only view; vertices form the id
    prefix ``range(n_vertices)`` because ids follow join order."""

    __slots__ = ("parent", "horizon", "n_vertices", "n_edges")

    def __init__(self, parent: TemporalGraph, horizon: int, n_vertices: int, n_edges: int):
        self.parent = parent
        self.horizon = horizon
        self.n_vertices = n_vertices
        self.n_edges = n_edges

    @property
    def directed(self) -> bool:
        return self.parent.directed

    def vertices(self) -> range:
        return range(self.n_vertices)

    def edges(self) -> Iterator[Edge]:
        return iter(self.parent._edges_by_time[: self.n_edges])

    def degree(self, v: int) -> int:
        if not (0 <= v < self.n_vertices):
            raise KeyError(f"vertex {v} not present at horizon {self.horizon}")
        return self.parent.degree_at(v, self.horizon)

    def degrees(self) -> list[int]:
        return self.parent.degrees_at(self.horizon)[: self.n_vertices]

    def __repr__(self) -> str:  # pragma: no cover
        return f"<Snapshot t<={self.horizon} |V|={self.n_vertices} |E|={self.n_edges}>"


# -- serialization -----------------------------------------------------


def write_edge_list(graph: TemporalGraph, path) -> None:
    """Write ``source,target,timestamp`` lines plus a JSON metadata
    sidecar at ``<path>.meta.json``.

    Join times that cannot be recovered from the edge records (isolated
    vertices, or vertices that joined before their first edge) are kept
    in the sidecar so that reading the files back reproduces identical
    snapshots at every horizon.
    """
    path = str(path)
    lines = ["# source,target,timestamp"]
    first_seen: dict[int, int] = {}
    for u, v, t in graph.edges:
        lines.append(f"{u},{v},{t}")
        first_seen[u] = min(first_seen.get(u, t), t)
        first_seen[v] = min(first_seen.get(v, t), t)
    explicit = {
        str(v): jt
        for v, jt in enumerate(graph.join_times)
        if first_seen.get(v) != jt
    }
    meta = {
        "directed": graph.directed,
        "allow_self_loops": graph.allow_self_loops,
        "time_unit_label": graph.time_unit,
    }
    if explicit:
        meta["explicit_join_times"] = explicit
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    with open(path + _META_SUFFIX, "w") as fh:
        json.dump(meta, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def read_edge_list(path) -> TemporalGraph:
    """Read a graph written by :func:`write_edge_list`."""
    path = str(path)
    with open(path + _META_SUFFIX) as fh:
        meta = json.load(fh)
    edges: list[Edge] = []
    joins: dict[int, int] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",") if "," in line else line.split()
            u, v, t = (int(x) for x in fields)
            edges.append((u, v, t))
            joins[u] = min(joins.get(u, t), t)
            joins[v] = min(joins.get(v, t), t)
    for key, jt in meta.get("explicit_join_times", {}).items():
        joins[int(key)] = int(jt)
    if joins:
        n = max(joins) + 1
        join_times = [joins[v] for v in range(n)]
    else:
        join_times = []
    return TemporalGraph(
        join_times,
        edges,
        directed=meta["directed"],
        allow_self_loops=meta["allow_self_loops"],
        time_unit=meta.get("time_unit_label", ""),
    )
