"""Turn crawled concrete paths into deep links: shorten, serialize, hash, index, register."""

from __future__ import annotations

import json
import logging
from typing import TYPE_CHECKING
from urllib.parse import urlsplit

from .driver import ConcretePath, replay
from .errors import EmptyPath, PathReplayFailed, UnboundLabel
from .links import ABSTRACT_LIMIT, AppUrl, DeepLink, Index, host_for_package
from .model import AppSpec, Content, IntentRecord, label_set
from .repository import PENDING, Outcome, RepoRecord, Repository
from .shortcut import AbstractPath, ShortcutTable, Step

if TYPE_CHECKING:
    from .crawler import PSTG

log = logging.getLogger(__name__)

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = 2**64 - 1


def _esc(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace("|", "\\|")
        .replace(",", "\\,")
        .replace("=", "\\=")
        .replace("\n", "\\n")
    )


def _intent_record_line(intent: IntentRecord) -> str:
    component = f"{intent.component[0]}/{intent.component[1]}" if intent.component else ""
    extras = ",".join(
        f"{_esc(k)}={_esc(json.dumps(v, ensure_ascii=False))}" for k, v in sorted(intent.extras)
    )
    return "|".join(
        [
            _esc(component),
            _esc(intent.action or ""),
            ",".join(_esc(c) for c in sorted(intent.categories)),
            _esc(intent.data or ""),
            extras,
        ]
    )


def serialize_path(path: ConcretePath) -> bytes:
    """Canonical UTF-8 form: one escaped ``component|action|categories|data|extras`` line per intent.

    Extras are sorted by key and their values JSON-encoded, so ``"1"`` and
    ``1`` serialize differently.
    """
    if not path.intents:
        raise EmptyPath("cannot serialize an empty path")
    return "\n".join(_intent_record_line(i) for i in path.intents).encode("utf-8")


def hash_path(data: bytes) -> int:
    """FNV-1a, 64-bit."""
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK
    return h


def make_app_url(package: str, activity: str, hash_value: int) -> AppUrl:
    return AppUrl(host_for_package(package), activity, hash_value)


def project(path: ConcretePath) -> AbstractPath:
    """Abstract path of a concrete one; the launch intent is not a step."""
    if not path.intents:
        raise EmptyPath("cannot project an empty path")
    steps = []
    at = path.intents[0].target
    for intent in path.intents[1:]:
        steps.append(Step(at, intent.target, label_set(intent)))
        at = intent.target
    return AbstractPath(path.intents[0].target, tuple(steps))


def _materialize(shortcut: AbstractPath, path: ConcretePath) -> ConcretePath:
    package = path.intents[0].component[0]
    extras: dict[str, object] = {}
    data: dict[str, str] = {}
    for intent in path.intents:
        extras.update(intent.extras)  # later occurrences overwrite earlier ones
        if intent.data:
            parts = urlsplit(intent.data)
            data[f"data:{parts.scheme}://{parts.hostname or ''}"] = intent.data
    intents = [path.intents[0]]
    for step in shortcut.steps:
        action, categories, uri, values = None, set(), None, []
        for label in sorted(step.labels):
            kind, _, value = label.partition(":")
            if kind == "action":
                action = value
            elif kind == "category":
                categories.add(value)
            elif kind == "data":
                if label not in data:
                    raise UnboundLabel(label, path)
                uri = data[label]
            elif kind == "extra":
                if value not in extras:
                    raise UnboundLabel(label, path)
                values.append((value, extras[value]))
        intents.append(IntentRecord((package, step.dst), action, frozenset(categories), uri, values))
    return ConcretePath(tuple(intents))


def shorten(path: ConcretePath, shortcuts: ShortcutTable) -> ConcretePath:
    """Replace ``path`` by the concrete form of its shortcut.

    Each label of the shortcut is bound to the value observed for it in
    ``path`` (last occurrence wins). Raises :class:`UnboundLabel` when some
    label has no value in ``path``.
    """
    abstract = project(path)
    shortcut = shortcuts.resolve(abstract)
    if shortcut.key == abstract.key:
        return path
    return _materialize(shortcut, path)


def index_from_content(content: Content, activity: str, url: AppUrl | None = None) -> Index:
    texts = [n for n in content.nodes if n.normalized]
    if not texts:
        return Index("", "", activity, url)
    best = max(range(len(texts)), key=lambda i: (texts[i].size, -i))
    abstract = " ".join(n.normalized for n in texts[best + 1:best + 4])
    return Index(texts[best].normalized, abstract[:ABSTRACT_LIMIT], activity, url)


def extract_index(pstg: "PSTG", url: AppUrl) -> Index:
    """Title is the largest text of the start state; the abstract is the next three texts."""
    return index_from_content(pstg.states[pstg.start], url.target, url)


def _lands_on(spec: AppSpec, path: ConcretePath, content: Content) -> bool:
    try:
        session = replay(spec, path)
    except PathReplayFailed:
        return False
    return session.current_activity == path.target and session.snapshot_content() == content


def synthesize(
    path: ConcretePath,
    content: Content,
    shortcuts: ShortcutTable | None = None,
    spec: AppSpec | None = None,
) -> DeepLink:
    """Build the deep link for a page reached by ``path`` whose start content is ``content``.

    Label sets say nothing about extras values, so a shortcut can open a
    different instance of the same activity. When ``spec`` is given the
    shortened path is replayed and kept only if it lands on ``content``.
    """
    if shortcuts is not None:
        try:
            short = shorten(path, shortcuts)
        except UnboundLabel as exc:
            log.warning("keeping unshortened path: %s", exc)
            short = path
        if spec is not None and short is not path and not _lands_on(spec, short, content):
            log.info("shortcut for %s opens a different page, keeping the full path", path.target)
            short = path
        path = short
    package = path.intents[0].component[0]
    url = make_app_url(package, path.target, hash_path(serialize_path(path)))
    return DeepLink(path, url, index_from_content(content, path.target, url))


def to_record(link: DeepLink, created_at: str, status: str = PENDING) -> RepoRecord:
    return RepoRecord(
        url=str(link.url),
        host=link.url.host,
        target=link.url.target,
        hash=link.url.hash,
        path=link.path,
        index=link.index,
        created_at=created_at,
        status=status,
    )


def register(repo: Repository, link: DeepLink, status: str = PENDING) -> Outcome:
    """Upsert ``link``; new links enter the repository as pending crawl work."""
    return repo.put(to_record(link, repo.clock(), status))
