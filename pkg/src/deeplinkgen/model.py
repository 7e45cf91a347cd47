"""Declarative app model: intents, label sets, page content and the app spec format.

An app is described as a set of activities. Each activity has one or more
*instances* selected by the extras of the intent that opens it, and each
instance is a small state machine of page states connected by user
operations. The JSON layout is::

    {"package": "com.example.app",
     "main": "com.example.app.MainActivity",
     "activities": [
        {"class": "com.example.app.MainActivity",
         "instances": [
            {"match": {}, "initial": "home",
             "states": [
                {"id": "home",
                 "content": [{"text": "Hello", "size": 20, "color": "#000000",
                              "pos": [0, 0], "kind": "text"}],
                 "ops": [{"kind": "click", "target": 0,
                          "effect": {"type": "transition",
                                     "intent": {"component": ".DetailActivity",
                                                "extras": {"id": "7"}}}}]}]}]}]}

Effects are ``{"type": "transition", "intent": {...}}``, ``{"type": "goto",
"state": id}`` or ``{"type": "noop"}``. Inside an intent template a string
extra value ``"$key"`` is replaced by the value of ``key`` carried by the
intent that opened the current instance (``"$$..."`` escapes a literal
dollar sign).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Union
from urllib.parse import urlsplit

from .errors import DanglingReference, MalformedSpec, MissingMain

Scalar = Union[str, int, bool]
LabelSet = frozenset

_DOTTED = re.compile(r"^[A-Za-z_$][\w$]*(\.[A-Za-z_$][\w$]*)*$")


def _is_scalar(value: Any) -> bool:
    return isinstance(value, (str, int, bool)) and not isinstance(value, float)


def _freeze_extras(extras) -> tuple[tuple[str, Scalar], ...]:
    pairs = list(extras.items()) if isinstance(extras, Mapping) else list(extras)
    seen = set()
    for key, value in pairs:
        if not isinstance(key, str) or not key:
            raise ValueError(f"extras keys must be non-empty strings, got {key!r}")
        if key in seen:
            raise ValueError(f"duplicate extras key {key!r}")
        if not _is_scalar(value):
            raise ValueError(f"extras value for {key!r} must be a scalar, got {value!r}")
        seen.add(key)
    return tuple(sorted(pairs, key=lambda kv: kv[0]))


@dataclass(frozen=True)
class IntentRecord:
    """A concrete intent. ``component`` is a ``(package, class_name)`` pair."""

    component: tuple[str, str] | None = None
    action: str | None = None
    categories: frozenset[str] = frozenset()
    data: str | None = None
    extras: tuple[tuple[str, Scalar], ...] = ()

    def __post_init__(self):
        if self.component is not None:
            object.__setattr__(self, "component", tuple(self.component))
        # empty strings and absent fields are the same thing
        object.__setattr__(self, "action", self.action or None)
        object.__setattr__(self, "data", self.data or None)
        cats = frozenset(self.categories)
        if any(not isinstance(c, str) or not c for c in cats):
            raise ValueError("categories must be non-empty strings")
        object.__setattr__(self, "categories", cats)
        object.__setattr__(self, "extras", _freeze_extras(self.extras))

    @property
    def target(self) -> str | None:
        return self.component[1] if self.component else None

    @property
    def extras_map(self) -> dict[str, Scalar]:
        return dict(self.extras)

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {}
        if self.component:
            doc["component"] = f"{self.component[0]}/{self.component[1]}"
        if self.action:
            doc["action"] = self.action
        if self.categories:
            doc["categories"] = sorted(self.categories)
        if self.data:
            doc["data"] = self.data
        if self.extras:
            doc["extras"] = dict(self.extras)
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping) -> "IntentRecord":
        component = doc.get("component")
        if component is not None:
            package, sep, name = component.partition("/")
            if not sep or not package or not name:
                raise ValueError(f"component must be 'package/class', got {component!r}")
            component = (package, name)
        return cls(
            component=component,
            action=doc.get("action"),
            categories=frozenset(doc.get("categories", ())),
            data=doc.get("data"),
            extras=doc.get("extras", {}),
        )


def launch_intent(package: str, main_activity: str) -> IntentRecord:
    return IntentRecord(component=(package, main_activity))


def label_set(intent: IntentRecord) -> LabelSet:
    """Project an intent onto its label set; extras contribute key names only."""
    labels = set()
    if intent.action:
        labels.add(f"action:{intent.action}")
    labels.update(f"category:{c}" for c in intent.categories)
    if intent.data:
        parts = urlsplit(intent.data)
        labels.add(f"data:{parts.scheme}://{parts.hostname or ''}")
    labels.update(f"extra:{key}" for key, _ in intent.extras)
    return frozenset(labels)


class NodeKind(str, Enum):
    TEXT = "text"
    BUTTON = "button"
    LIST_ITEM = "list-item"
    IMAGE_CAPTION = "image-caption"


@dataclass(frozen=True)
class ContentNode:
    text: str
    size: int = 14
    color: str = "#000000"
    position: tuple[int, int] = (0, 0)
    kind: NodeKind = NodeKind.TEXT

    def __post_init__(self):
        object.__setattr__(self, "kind", NodeKind(self.kind))
        object.__setattr__(self, "position", tuple(self.position))
        if not isinstance(self.size, int) or self.size <= 0:
            raise ValueError(f"node size must be a positive integer, got {self.size!r}")

    @property
    def normalized(self) -> str:
        return " ".join(self.text.split())


@dataclass(frozen=True, eq=False)
class Content:
    """Ordered page content. Equality ignores presentation attributes."""

    nodes: tuple[ContentNode, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def identity(self) -> tuple[tuple[str, str], ...]:
        return tuple((n.normalized, n.kind.value) for n in self.nodes if n.normalized)

    def __eq__(self, other):
        if not isinstance(other, Content):
            return NotImplemented
        return self.identity() == other.identity()

    def __hash__(self):
        return hash(self.identity())

    def texts(self) -> list[str]:
        return [n.normalized for n in self.nodes if n.normalized]


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class UserOperation:
    kind: str
    target: int | str

    def __post_init__(self):
        if self.kind == "click":
            if not isinstance(self.target, int) or isinstance(self.target, bool) or self.target < 0:
                raise ValueError(f"click target must be a node index, got {self.target!r}")
        elif self.kind == "scroll":
            object.__setattr__(self, "target", Direction(self.target).value)
        else:
            raise ValueError(f"unknown operation kind {self.kind!r}")

    @classmethod
    def click(cls, index: int) -> "UserOperation":
        return cls("click", index)

    @classmethod
    def scroll(cls, direction: str) -> "UserOperation":
        return cls("scroll", direction)

    def __str__(self):
        return f"{self.kind}({self.target})"


@dataclass(frozen=True)
class ExtraRef:
    """Placeholder for a value carried by the current instance's intent."""

    key: str


@dataclass(frozen=True)
class IntentTemplate:
    target: str
    action: str | None = None
    categories: frozenset[str] = frozenset()
    data: str | None = None
    extras: tuple[tuple[str, Scalar | ExtraRef], ...] = ()

    def instantiate(self, package: str, carried: Mapping[str, Scalar]) -> IntentRecord:
        values = []
        for key, value in self.extras:
            values.append((key, carried[value.key] if isinstance(value, ExtraRef) else value))
        return IntentRecord(
            component=(package, self.target),
            action=self.action,
            categories=self.categories,
            data=self.data,
            extras=values,
        )


@dataclass(frozen=True)
class Transition:
    template: IntentTemplate


@dataclass(frozen=True)
class GoToState:
    state: str


@dataclass(frozen=True)
class NoOp:
    pass


Effect = Union[Transition, GoToState, NoOp]


@dataclass(frozen=True)
class PageStateSpec:
    state_id: str
    content: Content
    operations: tuple[tuple[UserOperation, Effect], ...] = ()

    def effect_of(self, op: UserOperation) -> Effect | None:
        for declared, effect in self.operations:
            if declared == op:
                return effect
        return None


@dataclass(frozen=True)
class InstanceSpec:
    match: tuple[tuple[str, Scalar], ...]
    initial: str
    states: Mapping[str, PageStateSpec]

    @property
    def match_map(self) -> dict[str, Scalar]:
        return dict(self.match)

    def matches(self, extras: Mapping[str, Scalar]) -> bool:
        return all(k in extras and _same_scalar(extras[k], v) for k, v in self.match)


def _same_scalar(a: Scalar, b: Scalar) -> bool:
    return type(a) is type(b) and a == b


@dataclass(frozen=True)
class ActivitySpec:
    class_name: str
    instances: tuple[InstanceSpec, ...]

    @property
    def default(self) -> InstanceSpec:
        return next(i for i in self.instances if not i.match)

    def candidates(self, extras: Mapping[str, Scalar]) -> list[InstanceSpec]:
        return [i for i in self.instances if i.match and i.matches(extras)]


@dataclass(frozen=True)
class AppSpec:
    package_name: str
    main_activity: str
    activities: Mapping[str, ActivitySpec] = field(default_factory=dict)

    def activity(self, class_name: str) -> ActivitySpec:
        return self.activities[class_name]

    @property
    def launch(self) -> IntentRecord:
        return launch_intent(self.package_name, self.main_activity)

    def declared_transitions(self) -> set[tuple[str, str]]:
        """Every (source, target) activity pair named by some transition effect."""
        pairs = set()
        for act in self.activities.values():
            for inst in act.instances:
                for state in inst.states.values():
                    for _, effect in state.operations:
                        if isinstance(effect, Transition):
                            pairs.add((act.class_name, effect.template.target))
        return pairs


# -- loading ---------------------------------------------------------------


def _require(doc: Mapping, key: str, kind, where: str):
    if not isinstance(doc, Mapping) or key not in doc:
        raise MalformedSpec(f"{where}: missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise MalformedSpec(f"{where}: {key!r} has the wrong type")
    return value


def _class_name(name: str, package: str, where: str) -> str:
    if isinstance(name, str) and name.startswith("."):
        name = package + name
    if not isinstance(name, str) or not _DOTTED.match(name):
        raise MalformedSpec(f"{where}: bad class name {name!r}")
    return name


def _parse_node(doc, where) -> ContentNode:
    try:
        pos = doc.get("pos", [0, 0])
        if len(pos) != 2 or not all(isinstance(p, int) for p in pos):
            raise ValueError("pos must be [x, y]")
        return ContentNode(
            text=_require(doc, "text", str, where),
            size=doc.get("size", 14),
            color=doc.get("color", "#000000"),
            position=tuple(pos),
            kind=doc.get("kind", "text"),
        )
    except (ValueError, TypeError, AttributeError) as exc:
        raise MalformedSpec(f"{where}: {exc}") from exc


def _parse_template(doc, package, where) -> IntentTemplate:
    if not isinstance(doc, Mapping):
        raise MalformedSpec(f"{where}: intent template must be an object")
    target = _class_name(_require(doc, "component", str, where), package, where)
    extras = []
    raw = doc.get("extras", {})
    if not isinstance(raw, Mapping):
        raise MalformedSpec(f"{where}: extras must be an object")
    for key, value in raw.items():
        if not key or not _is_scalar(value):
            raise MalformedSpec(f"{where}: bad extra {key!r}")
        if isinstance(value, str) and value.startswith("$"):
            value = value[1:] if value.startswith("$$") else ExtraRef(value[1:])
        extras.append((key, value))
    cats = doc.get("categories", [])
    if not isinstance(cats, list) or not all(isinstance(c, str) and c for c in cats):
        raise MalformedSpec(f"{where}: categories must be a list of strings")
    return IntentTemplate(
        target=target,
        action=doc.get("action") or None,
        categories=frozenset(cats),
        data=doc.get("data") or None,
        extras=tuple(extras),
    )


def _parse_effect(doc, package, where) -> Effect:
    if doc is None:
        return NoOp()
    kind = _require(doc, "type", str, where)
    if kind == "noop":
        return NoOp()
    if kind == "goto":
        return GoToState(_require(doc, "state", str, where))
    if kind == "transition":
        return Transition(_parse_template(doc.get("intent"), package, where))
    raise MalformedSpec(f"{where}: unknown effect type {kind!r}")


def _parse_state(doc, package, where) -> PageStateSpec:
    state_id = _require(doc, "id", str, where)
    where = f"{where}/{state_id}"
    nodes = tuple(_parse_node(n, f"{where}/content[{i}]") for i, n in enumerate(doc.get("content", [])))
    ops = []
    for i, op_doc in enumerate(doc.get("ops", [])):
        op_where = f"{where}/ops[{i}]"
        try:
            op = UserOperation(_require(op_doc, "kind", str, op_where), op_doc.get("target"))
        except ValueError as exc:
            raise MalformedSpec(f"{op_where}: {exc}") from exc
        if op.kind == "click" and op.target >= len(nodes):
            raise MalformedSpec(f"{op_where}: click target {op.target} out of range")
        if any(op == seen for seen, _ in ops):
            raise MalformedSpec(f"{op_where}: operation {op} declared twice")
        ops.append((op, _parse_effect(op_doc.get("effect"), package, op_where)))
    return PageStateSpec(state_id, Content(nodes), tuple(ops))


def _parse_instance(doc, package, where) -> InstanceSpec:
    match = doc.get("match", {})
    if not isinstance(match, Mapping) or not all(k and _is_scalar(v) for k, v in match.items()):
        raise MalformedSpec(f"{where}: match must map keys to scalars")
    states = {}
    for state_doc in _require(doc, "states", list, where):
        state = _parse_state(state_doc, package, where)
        if state.state_id in states:
            raise MalformedSpec(f"{where}: duplicate state {state.state_id!r}")
        states[state.state_id] = state
    initial = _require(doc, "initial", str, where)
    return InstanceSpec(tuple(match.items()), initial, states)


def _exclusive(a: InstanceSpec, b: InstanceSpec) -> bool:
    am, bm = a.match_map, b.match_map
    return any(k in bm and not _same_scalar(am[k], bm[k]) for k in am)


def _validate(spec: AppSpec) -> None:
    if spec.main_activity not in spec.activities:
        raise MissingMain(f"main activity {spec.main_activity!r} is not declared")
    for act in spec.activities.values():
        where = act.class_name
        defaults = [i for i in act.instances if not i.match]
        if len(defaults) != 1:
            raise MalformedSpec(f"{where}: expected exactly one default instance, found {len(defaults)}")
        keyed = [i for i in act.instances if i.match]
        for x, a in enumerate(keyed):
            for b in keyed[x + 1:]:
                if not _exclusive(a, b):
                    raise MalformedSpec(f"{where}: instance patterns {a.match_map} and {b.match_map} overlap")
        for inst in act.instances:
            if inst.initial not in inst.states:
                raise DanglingReference(f"{where}: unknown initial state {inst.initial!r}")
            carried = inst.match_map
            for state in inst.states.values():
                for op, effect in state.operations:
                    if isinstance(effect, GoToState) and effect.state not in inst.states:
                        raise DanglingReference(f"{where}/{state.state_id}: unknown state {effect.state!r}")
                    if isinstance(effect, Transition):
                        tpl = effect.template
                        if tpl.target not in spec.activities:
                            raise DanglingReference(f"{where}/{state.state_id}: unknown activity {tpl.target!r}")
                        for key, value in tpl.extras:
                            if isinstance(value, ExtraRef) and value.key not in carried:
                                raise DanglingReference(
                                    f"{where}/{state.state_id}: ${value.key} is not carried by this instance"
                                )


def load_app_spec(document: str | bytes | Mapping) -> AppSpec:
    """Parse and validate an app spec document (JSON text or an already-parsed mapping)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise MalformedSpec(f"not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise MalformedSpec("spec document must be a JSON object")
    package = _require(document, "package", str, "spec")
    if not _DOTTED.match(package):
        raise MalformedSpec(f"bad package name {package!r}")
    main = _class_name(_require(document, "main", str, "spec"), package, "spec")
    activities: dict[str, ActivitySpec] = {}
    for act_doc in _require(document, "activities", list, "spec"):
        name = _class_name(_require(act_doc, "class", str, "activity"), package, "activity")
        if name in activities:
            raise MalformedSpec(f"activity {name!r} declared twice")
        instances = tuple(
            _parse_instance(d, package, f"{name}/instances[{i}]")
            for i, d in enumerate(_require(act_doc, "instances", list, name))
        )
        activities[name] = ActivitySpec(name, instances)
    spec = AppSpec(package, main, activities)
    _validate(spec)
    return spec


def load_app_spec_file(path: str | Path) -> AppSpec:
    return load_app_spec(Path(path).read_text(encoding="utf-8"))


def content_from_texts(texts: Iterable[str]) -> Content:
    """Convenience constructor used in tests and demos."""
    return Content(tuple(ContentNode(t) for t in texts))
