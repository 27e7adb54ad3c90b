"""Skyway network: recharging-station nodes joined by flyable segments.

Nodes live in planar metres. Every node is both a potential delivery
target and a recharging station with ``pad_count`` pads. The graph is
undirected and holds at most one segment per node pair.
"""

from __future__ import annotations

import csv
import math
import random
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    InfeasibleExtractionError,
    IntegrityError,
    NodeNotFoundError,
    ParseError,
)

DEFAULT_PADS = 3

NODE_HEADER = ("node_id", "x", "y", "pads")
EDGE_HEADER = ("u", "v", "length_m")


@dataclass(frozen=True)
class NodeRecord:
    node_id: int
    x: float
    y: float
    pad_count: int = DEFAULT_PADS


@dataclass(frozen=True)
class Segment:
    segment_id: int
    endpoint_a: int
    endpoint_b: int
    length: float  # metres

    @property
    def length_km(self) -> float:
        return self.length / 1000.0

    def other(self, node_id: int) -> int:
        if node_id == self.endpoint_a:
            return self.endpoint_b
        if node_id == self.endpoint_b:
            return self.endpoint_a
        raise NodeNotFoundError(f"node {node_id} is not an endpoint of segment {self.segment_id}")


class SkywayNetwork:
    """Immutable undirected graph ``G = (N, E)``.

    Construction validates every structural invariant and raises
    :class:`IntegrityError` on the first violation.
    """

    def __init__(self, nodes: Iterable[NodeRecord], segments: Iterable[Segment]):
        node_map: dict[int, NodeRecord] = {}
        for node in nodes:
            if node.node_id in node_map:
                raise IntegrityError(f"duplicate node_id {node.node_id}")
            if int(node.pad_count) < 1:
                raise IntegrityError(f"node {node.node_id} has pad_count {node.pad_count} < 1")
            node_map[node.node_id] = node

        seg_map: dict[int, Segment] = {}
        pairs: dict[tuple[int, int], int] = {}
        adjacency: dict[int, list[tuple[int, Segment]]] = {n: [] for n in node_map}
        for seg in segments:
            if seg.segment_id in seg_map:
                raise IntegrityError(f"duplicate segment_id {seg.segment_id}")
            a, b = seg.endpoint_a, seg.endpoint_b
            for end in (a, b):
                if end not in node_map:
                    raise IntegrityError(
                        f"segment {seg.segment_id} references missing node {end}"
                    )
            if a == b:
                raise IntegrityError(f"segment {seg.segment_id} is a self-loop on node {a}")
            if not (seg.length > 0 and math.isfinite(seg.length)):
                raise IntegrityError(f"segment {seg.segment_id} has non-positive length {seg.length}")
            key = (min(a, b), max(a, b))
            if key in pairs:
                raise IntegrityError(
                    f"segments {pairs[key]} and {seg.segment_id} both join nodes {key[0]} and {key[1]}"
                )
            pairs[key] = seg.segment_id
            seg_map[seg.segment_id] = seg
            adjacency[a].append((b, seg))
            adjacency[b].append((a, seg))

        for lst in adjacency.values():
            lst.sort(key=lambda item: item[0])

        self._nodes = node_map
        self._segments = seg_map
        self._pairs = pairs
        self._adjacency = {n: tuple(lst) for n, lst in adjacency.items()}

    # -- accessors -----------------------------------------------------

    @property
    def nodes(self) -> Mapping[int, NodeRecord]:
        return self._nodes

    @property
    def segments(self) -> Mapping[int, Segment]:
        return self._segments

    @property
    def node_ids(self) -> list[int]:
        return sorted(self._nodes)

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._nodes

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkywayNetwork):
            return NotImplemented
        return self._nodes == other._nodes and self._segments == other._segments

    def __repr__(self) -> str:
        return f"SkywayNetwork(|N|={len(self._nodes)}, |E|={len(self._segments)})"

    def node(self, node_id: int) -> NodeRecord:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise NodeNotFoundError(f"unknown node {node_id}") from None

    def pads(self, node_id: int) -> int:
        return self.node(node_id).pad_count

    def neighbors(self, node_id: int) -> list[tuple[int, Segment]]:
        if node_id not in self._adjacency:
            raise NodeNotFoundError(f"unknown node {node_id}")
        return list(self._adjacency[node_id])

    def degree(self, node_id: int) -> int:
        return len(self.neighbors(node_id))

    def segment_between(self, u: int, v: int) -> Segment | None:
        sid = self._pairs.get((min(u, v), max(u, v)))
        return None if sid is None else self._segments[sid]

    # -- derived networks ---------------------------------------------

    def induced(self, node_ids: Iterable[int]) -> "SkywayNetwork":
        keep = set(node_ids)
        missing = keep - self._nodes.keys()
        if missing:
            raise NodeNotFoundError(f"unknown node {min(missing)}")
        nodes = [self._nodes[n] for n in sorted(keep)]
        segs = [
            s for _, s in sorted(self._segments.items())
            if s.endpoint_a in keep and s.endpoint_b in keep
        ]
        return SkywayNetwork(nodes, segs)

    def with_pads(self, pads: int) -> "SkywayNetwork":
        """Copy of the network with every station holding ``pads`` pads."""
        nodes = [replace(n, pad_count=int(pads)) for _, n in sorted(self._nodes.items())]
        return SkywayNetwork(nodes, [s for _, s in sorted(self._segments.items())])

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        out = []
        for start in self.node_ids:
            if start in seen:
                continue
            comp = _bfs_order(self, start)
            seen.update(comp)
            out.append(set(comp))
        return out

    def is_connected(self) -> bool:
        return len(self._nodes) == 0 or len(self.components()) == 1


def neighbors(net: SkywayNetwork, node_id: int) -> list[tuple[int, Segment]]:
    """Incident segments of ``node_id`` in ascending neighbour-id order."""
    return net.neighbors(node_id)


def validate(net: SkywayNetwork) -> None:
    """Re-check the structural invariants of an existing network.

    Networks validate on construction, so this only fails if somebody
    tampered with the private state. Kept as an explicit check for tests
    and for the CLI.
    """
    degree_sum = 0
    for node_id in net.node_ids:
        for other, seg in net.neighbors(node_id):
            if node_id not in (seg.endpoint_a, seg.endpoint_b) or seg.other(node_id) != other:
                raise IntegrityError(f"adjacency of node {node_id} is inconsistent")
            if not any(o == node_id for o, _ in net.neighbors(other)):
                raise IntegrityError(f"adjacency between {node_id} and {other} is not symmetric")
            degree_sum += 1
    if degree_sum != 2 * len(net.segments):
        raise IntegrityError("degree sum does not equal twice the segment count")


def _bfs_order(net: SkywayNetwork, start: int, limit: int | None = None) -> list[int]:
    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        if limit is not None and len(order) >= limit:
            break
        node = queue.popleft()
        for other, _ in net.neighbors(node):
            if other not in seen:
                seen.add(other)
                order.append(other)
                queue.append(other)
                if limit is not None and len(order) >= limit:
                    break
    return order if limit is None else order[:limit]


def extract_subnetwork(net: SkywayNetwork, n: int, seed: int) -> SkywayNetwork:
    """Connected induced subgraph of exactly ``n`` nodes.

    A start node is drawn uniformly (seeded) among nodes whose component
    holds at least ``n`` nodes; the ball then grows breadth-first with
    neighbours visited in ascending id order.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > len(net):
        raise InfeasibleExtractionError(f"requested {n} nodes from a network of {len(net)}")
    eligible = sorted(
        node for comp in net.components() if len(comp) >= n for node in comp
    )
    if not eligible:
        raise InfeasibleExtractionError(f"no connected component has {n} or more nodes")
    rng = random.Random(seed)
    start = eligible[rng.randrange(len(eligible))]
    return net.induced(_bfs_order(net, start, limit=n))


# -- file format ------------------------------------------------------------


def _read_rows(path: Path, accepted: tuple[tuple[str, ...], ...]):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(col.strip() for col in next(reader))
        except StopIteration:
            raise ParseError(str(path), 1, "file is empty") from None
        if header not in accepted:
            raise ParseError(str(path), 1, f"unexpected header {','.join(header)!s}")
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(
                    str(path), reader.line_num, f"expected {len(header)} fields, got {len(row)}"
                )
            yield reader.line_num, header, [cell.strip() for cell in row]


def load_network(nodes_source: str | Path, edges_source: str | Path) -> SkywayNetwork:
    """Read a network from the ``nodes`` / ``edges`` CSV pair.

    The ``pads`` column is optional; absent pads default to 3. Segment
    ids follow the edge-row order starting at 0.
    """
    nodes_path, edges_path = Path(nodes_source), Path(edges_source)
    nodes = []
    for line, header, row in _read_rows(nodes_path, (NODE_HEADER, NODE_HEADER[:3])):
        try:
            pads = int(row[3]) if len(header) == 4 else DEFAULT_PADS
            nodes.append(NodeRecord(int(row[0]), float(row[1]), float(row[2]), pads))
        except ValueError as exc:
            raise ParseError(str(nodes_path), line, str(exc)) from None
        if pads < 1:
            raise ParseError(str(nodes_path), line, f"pads must be >= 1, got {pads}")

    segments = []
    for line, _, row in _read_rows(edges_path, (EDGE_HEADER,)):
        try:
            u, v, length = int(row[0]), int(row[1]), float(row[2])
        except ValueError as exc:
            raise ParseError(str(edges_path), line, str(exc)) from None
        if not (length > 0 and math.isfinite(length)):
            raise ParseError(str(edges_path), line, f"length_m must be positive, got {row[2]}")
        segments.append(Segment(len(segments), u, v, length))
    return SkywayNetwork(nodes, segments)


def save_network(net: SkywayNetwork, nodes_target: str | Path, edges_target: str | Path) -> None:
    with open(nodes_target, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(NODE_HEADER)
        for node_id in net.node_ids:
            node = net.node(node_id)
            writer.writerow([node.node_id, repr(node.x), repr(node.y), node.pad_count])
    with open(edges_target, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EDGE_HEADER)
        for _, seg in sorted(net.segments.items()):
            writer.writerow([seg.endpoint_a, seg.endpoint_b, repr(seg.length)])


# -- synthetic networks -----------------------------------------------------


def grid_network(rows: int, cols: int, spacing: float = 1000.0, pads: int = DEFAULT_PADS) -> SkywayNetwork:
    """Regular 4-neighbour grid; node ``r * cols + c`` sits at ``(c, r) * spacing``."""
    nodes = [
        NodeRecord(r * cols + c, c * spacing, r * spacing, pads)
        for r in range(rows) for c in range(cols)
    ]
    segs: list[Segment] = []
    for r in range(rows):
        for c in range(cols):
            here = r * cols + c
            if c + 1 < cols:
                segs.append(Segment(len(segs), here, here + 1, spacing))
            if r + 1 < rows:
                segs.append(Segment(len(segs), here, here + cols, spacing))
    return SkywayNetwork(nodes, segs)


def road_network(
    n: int,
    seed: int,
    spacing: float = 3000.0,
    jitter: float = 0.3,
    extra_edge_prob: float = 0.7,
    pads: int = DEFAULT_PADS,
) -> SkywayNetwork:
    """Connected, sparse, road-like network of ``n`` nodes.

    Nodes are laid out on a jittered square grid (row-major, first ``n``
    cells). A random spanning tree over the grid links guarantees
    connectivity; every other grid link survives with probability
    ``extra_edge_prob``. Segment lengths are Euclidean distances.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    cols = max(1, math.ceil(math.sqrt(n)))
    pos = {}
    for i in range(n):
        r, c = divmod(i, cols)
        pos[i] = (
            (c + rng.uniform(-jitter, jitter)) * spacing,
            (r + rng.uniform(-jitter, jitter)) * spacing,
        )
    links = []
    for i in range(n):
        r, c = divmod(i, cols)
        if c + 1 < cols and i + 1 < n:
            links.append((i, i + 1))
        if i + cols < n:
            links.append((i, i + cols))
    rng.shuffle(links)

    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen = []
    for u, v in links:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
        elif rng.random() < extra_edge_prob:
            chosen.append((u, v))
    chosen.sort()
    nodes = [NodeRecord(i, pos[i][0], pos[i][1], pads) for i in range(n)]
    segs = [
        Segment(k, u, v, math.dist(pos[u], pos[v]))
        for k, (u, v) in enumerate(chosen)
    ]
    return SkywayNetwork(nodes, segs)
