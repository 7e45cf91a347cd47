"""Path enumeration and shortest replacing paths ("shortcuts").

A path ``p1`` can replace ``p2`` (same final activity) when every label
that ``p1`` needs is also provided somewhere along ``p2``. The shortcut of a
path is the shortest path that can replace it; among equal lengths the
lexicographically smallest canonical key wins.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import EndpointMismatch
from .explorer import NavigationGraph
from .model import LabelSet

DEFAULT_MAX_LEN = 5


@dataclass(frozen=True)
class Step:
    src: str
    dst: str
    labels: LabelSet

    def key(self) -> str:
        return f"{self.src}>{self.dst}[{','.join(sorted(self.labels))}]"


@dataclass(frozen=True)
class AbstractPath:
    start: str
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        at = self.start
        for step in self.steps:
            if step.src != at:
                raise ValueError(f"path does not chain: expected a step from {at}, got {step.src}")
            at = step.dst

    def __len__(self):
        return len(self.steps)

    @property
    def end(self) -> str:
        return self.steps[-1].dst if self.steps else self.start

    @property
    def key(self) -> str:
        return "|".join(s.key() for s in self.steps)

    def order(self) -> tuple[int, str]:
        return (len(self.steps), self.key)

    def vertices(self) -> list[str]:
        return [self.start] + [s.dst for s in self.steps]

    def to_list(self) -> list[dict]:
        return [{"from": s.src, "to": s.dst, "labels": sorted(s.labels)} for s in self.steps]


def path_labels(path: AbstractPath) -> LabelSet:
    labels: set[str] = set()
    for step in path.steps:
        labels |= step.labels
    return frozenset(labels)


def can_replace(p1: AbstractPath, p2: AbstractPath) -> bool:
    if p1.end != p2.end:
        raise EndpointMismatch(f"{p1.end} != {p2.end}")
    return path_labels(p1) <= path_labels(p2)


def enumerate_paths(graph: NavigationGraph, v: str, max_len: int) -> list[AbstractPath]:
    """All vertex-simple paths from the root to ``v`` with at most ``max_len`` steps."""
    adjacency: dict[str, list[Step]] = {}
    for e in graph.edges:
        adjacency.setdefault(e.src, []).append(Step(e.src, e.dst, e.labels))
    found: list[AbstractPath] = []

    def walk(at: str, steps: list[Step], visited: set[str]):
        if at == v:
            found.append(AbstractPath(graph.root, tuple(steps)))
            return
        if len(steps) == max_len:
            return
        for step in adjacency.get(at, ()):
            if step.dst in visited:
                continue
            visited.add(step.dst)
            steps.append(step)
            walk(step.dst, steps, visited)
            steps.pop()
            visited.discard(step.dst)

    walk(graph.root, [], {graph.root})
    found.sort(key=AbstractPath.order)
    return found


@dataclass
class ShortcutTable:
    root: str
    # (target activity, path key) -> (keyed path, its shortcut)
    entries: dict[tuple[str, str], tuple[AbstractPath, AbstractPath]] = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    def paths_to(self, target: str) -> list[AbstractPath]:
        return sorted((p for (t, _), (p, _) in self.entries.items() if t == target), key=AbstractPath.order)

    def resolve(self, path: AbstractPath) -> AbstractPath:
        """Shortcut for ``path`` even when the table does not key it.

        Keyed paths use the stored entry. Otherwise the shortest keyed path
        to the same activity whose labels ``path`` covers is used; ``path``
        itself when there is none.
        """
        hit = self.entries.get((path.end, path.key))
        if hit is not None:
            return hit[1]
        labels = path_labels(path)
        for candidate in self.paths_to(path.end):
            if candidate.order() >= path.order():
                break
            if path_labels(candidate) <= labels:
                return candidate
        return path


def compute_shortcuts(graph: NavigationGraph, max_len: int = DEFAULT_MAX_LEN) -> ShortcutTable:
    table = ShortcutTable(graph.root)
    for v in graph.vertices:
        plist = enumerate_paths(graph, v, max_len)
        label_sets = [path_labels(p) for p in plist]
        for i, p in enumerate(plist):
            best = p
            for j in range(i):
                if label_sets[j] <= label_sets[i]:
                    best = plist[j]
                    break
            table.entries[(v, p.key)] = (p, best)
    return table


def lookup_shortcut(table: ShortcutTable, path: AbstractPath) -> AbstractPath:
    hit = table.entries.get((path.end, path.key))
    return hit[1] if hit is not None else path


def _steps_from(doc: Iterable[Mapping]) -> tuple[Step, ...]:
    return tuple(Step(s["from"], s["to"], frozenset(s["labels"])) for s in doc)


def table_to_dict(table: ShortcutTable) -> dict:
    return {
        "root": table.root,
        "shortcuts": {p.key: sc.to_list() for p, sc in table.entries.values()},
    }


def export_table(table: ShortcutTable) -> str:
    return json.dumps(table_to_dict(table), indent=2)


def import_table(document: str | Mapping) -> ShortcutTable:
    doc = json.loads(document) if isinstance(document, (str, bytes)) else document
    root = doc["root"]
    table = ShortcutTable(root)
    for key, shortcut_doc in doc["shortcuts"].items():
        path = AbstractPath(root, _parse_key(key)) if key else AbstractPath(root)
        shortcut = AbstractPath(root, _steps_from(shortcut_doc))
        table.entries[(path.end, path.key)] = (path, shortcut)
    return table


def _parse_key(key: str) -> tuple[Step, ...]:
    steps = []
    for part in key.split("|"):
        head, _, labels = part.partition("[")
        src, _, dst = head.partition(">")
        labels = labels[:-1]
        steps.append(Step(src, dst, frozenset(labels.split(",")) if labels else frozenset()))
    return tuple(steps)
