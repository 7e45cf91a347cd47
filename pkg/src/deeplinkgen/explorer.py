"""Navigation graph construction by depth-bounded dynamic exploration."""

from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .driver import ContentChanged, DriverSession, Transitioned, launch
from .errors import MalformedGraph
from .model import AppSpec, IntentRecord, LabelSet, UserOperation, label_set

log = logging.getLogger(__name__)

DEFAULT_OP_BUDGET = 64


@dataclass(frozen=True)
class TransitionEdge:
    src: str
    dst: str
    labels: LabelSet
    sample_intent: IntentRecord

    @property
    def key(self) -> tuple[str, str, LabelSet]:
        return (self.src, self.dst, self.labels)


@dataclass
class NavigationGraph:
    root: str
    vertices: list[str] = field(default_factory=list)
    edges: list[TransitionEdge] = field(default_factory=list)

    def out_edges(self, vertex: str) -> list[TransitionEdge]:
        return [e for e in self.edges if e.src == vertex]

    def reachable(self) -> set[str]:
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for e in self.out_edges(v):
                if e.dst not in seen:
                    seen.add(e.dst)
                    queue.append(e.dst)
        return seen


def _open_default(spec: AppSpec, activity: str) -> DriverSession:
    session = launch(spec)
    session.send_intent(IntentRecord(component=(spec.package_name, activity)))
    return session


def get_transitions(spec: AppSpec, activity: str, op_budget: int = DEFAULT_OP_BUDGET) -> list[tuple[str, IntentRecord]]:
    """Exercise the default instance of ``activity`` breadth-first over its page states.

    Each performed operation counts against ``op_budget``; recovering a page
    state between operations is free. Transitions are deduplicated by
    (target, label set).
    """
    if activity not in spec.activities:
        raise KeyError(activity)
    found: dict[tuple[str, LabelSet], IntentRecord] = {}
    start = _open_default(spec, activity)
    seen = {start.snapshot_content()}
    queue: deque[tuple[UserOperation, ...]] = deque([()])
    used = 0
    while queue and used < op_budget:
        prefix = queue.popleft()
        ops = _recover(spec, activity, prefix).enumerate_operations()
        for op in ops:
            if used >= op_budget:
                break
            session = _recover(spec, activity, prefix)
            event = session.perform(op)
            used += 1
            if isinstance(event, Transitioned):
                found.setdefault((event.to_activity, label_set(event.intent)), event.intent)
            elif isinstance(event, ContentChanged) and event.content not in seen:
                seen.add(event.content)
                queue.append(prefix + (op,))
    return [(target, intent) for (target, _), intent in found.items()]


def _recover(spec: AppSpec, activity: str, prefix) -> DriverSession:
    session = _open_default(spec, activity)
    for op in prefix:
        session.perform(op)
    return session


def build_navigation_graph(spec: AppSpec, depth: int, op_budget: int = DEFAULT_OP_BUDGET) -> NavigationGraph:
    """Explore ``depth`` rounds outward from the main activity.

    Round ``d`` exercises the activities first discovered in round ``d - 1``;
    an activity is exercised at most once.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    graph = NavigationGraph(root=spec.main_activity, vertices=[spec.main_activity])
    known = {spec.main_activity}
    edge_keys = set()
    frontier = [spec.main_activity]
    for d in range(depth):
        next_frontier = []
        for ori in frontier:
            for tar, intent in get_transitions(spec, ori, op_budget):
                if tar not in known:
                    known.add(tar)
                    graph.vertices.append(tar)
                    next_frontier.append(tar)
                edge = TransitionEdge(ori, tar, label_set(intent), intent)
                if edge.key not in edge_keys:
                    edge_keys.add(edge.key)
                    graph.edges.append(edge)
        log.debug("round %d: %d new activities", d, len(next_frontier))
        frontier = next_frontier
    return graph


def exploration_curve(spec: AppSpec, max_depth: int, op_budget: int = DEFAULT_OP_BUDGET) -> list[int]:
    """Number of discovered activities for each depth ``0..max_depth``."""
    return [len(build_navigation_graph(spec, d, op_budget).vertices) for d in range(max_depth + 1)]


def converged_graph(spec: AppSpec, op_budget: int = DEFAULT_OP_BUDGET, limit: int = 32) -> tuple[int, NavigationGraph]:
    """Smallest depth after which another round adds neither an activity nor an edge."""
    graph = build_navigation_graph(spec, 0, op_budget)
    for depth in range(1, limit + 1):
        deeper = build_navigation_graph(spec, depth, op_budget)
        if len(deeper.vertices) == len(graph.vertices) and len(deeper.edges) == len(graph.edges):
            return depth - 1, graph
        graph = deeper
    return limit, graph


def graph_to_dict(graph: NavigationGraph) -> dict:
    return {
        "root": graph.root,
        "vertices": list(graph.vertices),
        "edges": [
            {"from": e.src, "to": e.dst, "labels": sorted(e.labels), "intent": e.sample_intent.to_dict()}
            for e in graph.edges
        ],
    }


def export_graph(graph: NavigationGraph) -> str:
    return json.dumps(graph_to_dict(graph), indent=2)


def import_graph(document: str | Mapping) -> NavigationGraph:
    try:
        doc = json.loads(document) if isinstance(document, (str, bytes)) else document
        root = doc["root"]
        vertices = list(doc["vertices"])
        edges = []
        for e in doc["edges"]:
            intent = IntentRecord.from_dict(e["intent"])
            edges.append(TransitionEdge(e["from"], e["to"], frozenset(e["labels"]), intent))
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise MalformedGraph(f"cannot read graph document: {exc}") from exc
    if root not in vertices or len(set(vertices)) != len(vertices):
        raise MalformedGraph("root must be one of the (unique) vertices")
    keys = set()
    for e in edges:
        if e.src not in vertices or e.dst not in vertices:
            raise MalformedGraph(f"edge {e.src} -> {e.dst} references an unknown vertex")
        if e.labels != label_set(e.sample_intent):
            raise MalformedGraph(f"edge {e.src} -> {e.dst}: labels disagree with the sample intent")
        if e.key in keys:
            raise MalformedGraph(f"duplicate edge {e.src} -> {e.dst} {sorted(e.labels)}")
        keys.add(e.key)
    graph = NavigationGraph(root, vertices, edges)
    if graph.reachable() != set(vertices):
        raise MalformedGraph("every vertex must be reachable from the root")
    return graph
