"""Build temporal graphs from raw timestamped edge streams.

Accepts whitespace- or comma-delimited text with three integer columns
``source target timestamp``; ``#``-prefixed lines are comments. Records
need not be time-ordered. A vertex's join time is the earliest
timestamp of any record mentioning it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .temporal_graph import TemporalGraph


class EdgeStreamParseError(ValueError):
    """A line failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, line: str, reason: str):
        super().__init__(f"line {line_no}: {reason}: {line!r}")
        self.line_no = line_no


class StreamRejected(RuntimeError):
    """The stream parsed but the resulting graph failed a threshold."""


@dataclass
class IngestConfig:
    directed: bool = False
    allow_self_loops: bool = False
    min_edges: int = 0
    dedupe: bool = True
    time_column_unit: str = ""
    max_degree: int | None = None  # drop vertices above this degree (bot cap analogue)

    def __post_init__(self):
        if self.min_edges < 0:
            raise ValueError("min_edges must be non-negative")
        if self.max_degree is not None and self.max_degree < 0:
            raise ValueError("max_degree must be non-negative")


def read_edge_stream(source: Iterable[str], config: IngestConfig | None = None) -> TemporalGraph:
    """Parse a line-oriented edge stream into a TemporalGraph.

    Duplicate edges (same endpoints, unordered when undirected) collapse
    to their earliest timestamp when ``config.dedupe`` is set. Self-loop
    records keep their endpoint as a vertex even when loops themselves
    are disallowed. Raw vertex ids are remapped to dense ids in join
    order (ties broken by first appearance), which leaves conforming
    streams unchanged. Raises :class:`StreamRejected` when fewer than
    ``config.min_edges`` edges survive.
    """
    config = config or IngestConfig()
    records = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",") if "," in line else line.split()
        if len(fields) != 3:
            raise EdgeStreamParseError(line_no, line, "expected 3 fields")
        try:
            u, v, t = (int(x) for x in fields)
        except ValueError:
            raise EdgeStreamParseError(line_no, line, "fields must be integers") from None
        if t < 0:
            raise EdgeStreamParseError(line_no, line, "negative timestamp")
        records.append((u, v, t))
    if not records:
        raise ValueError("empty edge stream")

    join: dict[int, int] = {}
    first_pos: dict[int, int] = {}
    for pos, (u, v, t) in enumerate(records):
        for x in (u, v):
            join[x] = min(join.get(x, t), t)
            first_pos.setdefault(x, pos)

    edges: list[tuple[int, int, int]] = []
    stamp: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    for u, v, t in records:
        if u == v and not config.allow_self_loops:
            continue  # the vertex stays; only the loop edge is dropped
        if config.dedupe:
            key = (u, v) if config.directed or u <= v else (v, u)
            if key in stamp:
                stamp[key] = min(stamp[key], t)
            else:
                stamp[key] = t
                order.append((u, v))
        else:
            edges.append((u, v, t))
    if config.dedupe:
        edges = [
            (u, v, stamp[(u, v) if config.directed or u <= v else (v, u)])
            for u, v in order
        ]

    if config.max_degree is not None:
        neighbours: dict[int, set[int]] = {x: set() for x in join}
        for u, v, _ in edges:
            neighbours[u].add(v)
            neighbours[v].add(u)
        dropped = {x for x, ns in neighbours.items() if len(ns) > config.max_degree}
        edges = [(u, v, t) for u, v, t in edges if u not in dropped and v not in dropped]
        for x in dropped:
            del join[x]
            del first_pos[x]
        if not join:
            raise StreamRejected("max-degree filter removed every vertex")

    if len(edges) < config.min_edges:
        raise StreamRejected(
            f"{len(edges)} edges after filtering, below the {config.min_edges} threshold"
        )

    ranked = sorted(join, key=lambda x: (join[x], first_pos[x]))
    remap = {raw_id: new_id for new_id, raw_id in enumerate(ranked)}
    join_times = [join[raw_id] for raw_id in ranked]
    edges = [(remap[u], remap[v], t) for u, v, t in edges]
    return TemporalGraph(
        join_times,
        edges,
        directed=config.directed,
        allow_self_loops=config.allow_self_loops,
        simple=config.dedupe,
        time_unit=config.time_column_unit,
    )


def normalize_times(g: TemporalGraph) -> TemporalGraph:
    """Shift all timestamps so the first arrival sits at 0; pairwise
    differences are preserved. Already-normalized graphs come back
    equal."""
    if g.n_vertices == 0:
        raise ValueError("cannot normalize an empty graph")
    shift = g.t_min
    if shift == 0:
        return g
    return TemporalGraph(
        [t - shift for t in g.join_times],
        [(u, v, t - shift) for u, v, t in g.edges],
        directed=g.directed,
        allow_self_loops=g.allow_self_loops,
        simple=False,  # validated at first construction
        time_unit=g.time_unit,
        info=g.info,
    )
