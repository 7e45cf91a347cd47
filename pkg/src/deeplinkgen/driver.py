"""Deterministic driver that executes an :class:`AppSpec` like an instrumented app."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import AmbiguousInstance, NoHandler, PathReplayFailed, UnknownOperation
from .model import (
    AppSpec,
    Content,
    GoToState,
    InstanceSpec,
    IntentRecord,
    PageStateSpec,
    Transition,
    UserOperation,
)


@dataclass(frozen=True)
class Transitioned:
    to_activity: str
    intent: IntentRecord


@dataclass(frozen=True)
class ContentChanged:
    content: Content


@dataclass(frozen=True)
class NoChange:
    pass


ObservedEvent = Union[Transitioned, ContentChanged, NoChange]


@dataclass(frozen=True)
class ConcretePath:
    """Intents to send, in order, starting with the launch intent."""

    intents: tuple[IntentRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "intents", tuple(self.intents))

    def __len__(self):
        return len(self.intents)

    @property
    def target(self) -> str | None:
        return self.intents[-1].target if self.intents else None

    def extend(self, intent: IntentRecord) -> "ConcretePath":
        return ConcretePath(self.intents + (intent,))

    def to_list(self) -> list[dict]:
        return [i.to_dict() for i in self.intents]

    @classmethod
    def from_list(cls, docs: Iterable[dict]) -> "ConcretePath":
        return cls(tuple(IntentRecord.from_dict(d) for d in docs))


class DriverSession:
    """One running app. Not thread-safe; open one session per worker."""

    def __init__(self, spec: AppSpec):
        self.spec = spec
        self.history: list[IntentRecord] = []
        self.current_activity: str = ""
        self.instance: InstanceSpec | None = None
        self.state_id: str = ""
        self.incoming: IntentRecord | None = None

    @property
    def state(self) -> PageStateSpec:
        return self.instance.states[self.state_id]

    def _enter(self, intent: IntentRecord) -> Transitioned:
        comp = intent.component
        if comp is None or comp[0] != self.spec.package_name or comp[1] not in self.spec.activities:
            raise NoHandler(f"no activity handles {intent.to_dict()}")
        activity = self.spec.activity(comp[1])
        found = activity.candidates(intent.extras_map)
        if len(found) > 1:
            raise AmbiguousInstance(f"{comp[1]}: {len(found)} instances match {intent.extras_map}")
        self.instance = found[0] if found else activity.default
        self.current_activity = comp[1]
        self.state_id = self.instance.initial
        self.incoming = intent
        self.history.append(intent)
        return Transitioned(comp[1], intent)

    def enumerate_operations(self) -> list[UserOperation]:
        return [op for op, _ in self.state.operations]

    def perform(self, op: UserOperation) -> ObservedEvent:
        effect = self.state.effect_of(op)
        if effect is None:
            raise UnknownOperation(f"{op} is not declared in {self.current_activity}/{self.state_id}")
        if isinstance(effect, GoToState):
            self.state_id = effect.state
            return ContentChanged(self.state.content)
        if isinstance(effect, Transition):
            intent = effect.template.instantiate(self.spec.package_name, self.incoming.extras_map)
            return self._enter(intent)
        return NoChange()

    def send_intent(self, intent: IntentRecord) -> Transitioned:
        return self._enter(intent)

    def snapshot_content(self) -> Content:
        return self.state.content


def launch(spec: AppSpec) -> DriverSession:
    session = DriverSession(spec)
    session._enter(spec.launch)
    return session


def replay(spec: AppSpec, path: ConcretePath) -> DriverSession:
    """Launch the app and send every intent of ``path`` after the launch intent."""
    if not path.intents:
        raise PathReplayFailed("empty path")
    if path.intents[0] != spec.launch:
        raise PathReplayFailed(f"path does not start with the launch intent of {spec.package_name}")
    session = launch(spec)
    for step, intent in enumerate(path.intents[1:], start=1):
        try:
            session.send_intent(intent)
        except (NoHandler, AmbiguousInstance) as exc:
            raise PathReplayFailed(f"step {step}: {exc}") from exc
    return session
