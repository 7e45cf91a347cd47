"""Deep page crawling: page state transition graphs and the repository-driven crawl loop."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Sequence

from .driver import ContentChanged, ConcretePath, DriverSession, Transitioned, replay
from .errors import PathReplayFailed, RecoveryDiverged, UnknownOperation
from .links import parse_app_url
from .model import AppSpec, Content, UserOperation
from .repository import Outcome, Repository
from .shortcut import ShortcutTable
from .synthesizer import extract_index, register, synthesize

log = logging.getLogger(__name__)

DEFAULT_OP_BUDGET = 128
DEFAULT_MAX_PAGES = 1000

StateKey = str


def state_key(content: Content) -> StateKey:
    """Digest of the ordered (normalized text, kind) sequence of a page."""
    payload = json.dumps(content.identity(), ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class PSTG:
    """Page state transition graph. ``states`` maps each state key to its content."""

    start: StateKey
    states: dict[StateKey, Content] = field(default_factory=dict)
    edges: list[tuple[StateKey, StateKey, UserOperation]] = field(default_factory=list)
    # operations that lead from the start state to each state
    prefixes: dict[StateKey, tuple[UserOperation, ...]] = field(default_factory=dict)

    @property
    def operations(self) -> set[UserOperation]:
        return {op for _, _, op in self.edges}

    @property
    def contents(self) -> list[Content]:
        return list(self.states.values())


@dataclass
class CrawlResult:
    pstg: PSTG
    new_paths: list[ConcretePath] = field(default_factory=list)
    landings: list[Content] = field(default_factory=list)
    truncated: bool = False
    ops_used: int = 0

    @property
    def contents(self) -> list[Content]:
        return self.pstg.contents


def recover_state(
    spec: AppSpec,
    path: ConcretePath,
    op_prefix: Sequence[UserOperation] = (),
    expected: StateKey | None = None,
) -> DriverSession:
    """Fresh session with ``path`` replayed and ``op_prefix`` performed."""
    session = replay(spec, path)
    try:
        for op in op_prefix:
            session.perform(op)
    except UnknownOperation as exc:
        raise RecoveryDiverged(str(exc)) from exc
    if expected is not None and state_key(session.snapshot_content()) != expected:
        raise RecoveryDiverged(f"replay of {len(op_prefix)} operations did not reach state {expected}")
    if session.current_activity != path.target:
        raise RecoveryDiverged(f"operations left {path.target} for {session.current_activity}")
    return session


def crawl_page(spec: AppSpec, path: ConcretePath, op_budget: int = DEFAULT_OP_BUDGET) -> CrawlResult:
    """Exercise every operation of every state of the page reached by ``path``."""
    session = replay(spec, path)
    if session.current_activity != path.target:
        raise PathReplayFailed(f"path ended in {session.current_activity}, expected {path.target}")
    start = state_key(session.snapshot_content())
    pstg = PSTG(start, {start: session.snapshot_content()}, [], {start: ()})
    result = CrawlResult(pstg)
    seen_paths = set()
    order = [start]
    i = 0
    while i < len(order) and not result.truncated:
        current = order[i]
        prefix = pstg.prefixes[current]
        ops = recover_state(spec, path, prefix, current).enumerate_operations()
        for op in ops:
            if result.ops_used >= op_budget:
                result.truncated = True
                break
            session = recover_state(spec, path, prefix, current)
            event = session.perform(op)
            result.ops_used += 1
            if isinstance(event, Transitioned):
                new_path = path.extend(event.intent)
                if new_path not in seen_paths:
                    seen_paths.add(new_path)
                    result.new_paths.append(new_path)
                    result.landings.append(session.snapshot_content())
            elif isinstance(event, ContentChanged):
                key = state_key(event.content)
                if key == current:
                    continue
                if key not in pstg.states:
                    pstg.states[key] = event.content
                    pstg.prefixes[key] = prefix + (op,)
                    order.append(key)
                pstg.edges.append((current, key, op))
        i += 1
    return result


@dataclass
class CrawlReport:
    pages: int = 0
    states: int = 0
    new_links: int = 0
    truncated_pages: list[str] = field(default_factory=list)
    failed_pages: list[str] = field(default_factory=list)
    # in-memory only: per crawled URL its PSTG, per new URL the content seen on arrival
    pstgs: dict[str, PSTG] = field(default_factory=dict, repr=False)
    landings: dict[str, Content] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "pages": self.pages,
            "states": self.states,
            "new_links": self.new_links,
            "truncated_pages": list(self.truncated_pages),
        }


def seed_repository(spec: AppSpec, repo: Repository, shortcuts: ShortcutTable | None = None) -> Outcome:
    """Register the launch path, the starting point of every crawl."""
    path = ConcretePath((spec.launch,))
    session = replay(spec, path)
    return register(repo, synthesize(path, session.snapshot_content(), shortcuts, spec))


def run_crawl(
    spec: AppSpec,
    shortcuts: ShortcutTable | None,
    repo: Repository,
    max_pages: int = DEFAULT_MAX_PAGES,
    op_budget: int = DEFAULT_OP_BUDGET,
) -> CrawlReport:
    """Crawl pending pages from ``repo`` until the queue is empty or ``max_pages`` pages are done."""
    report = CrawlReport()
    seed_repository(spec, repo, shortcuts)
    while report.pages < max_pages:
        record = repo.next_pending()
        if record is None:
            break
        try:
            result = crawl_page(spec, record.path, op_budget)
        except (PathReplayFailed, RecoveryDiverged) as exc:
            log.warning("skipping %s: %s", record.url, exc)
            report.failed_pages.append(record.url)
            continue
        report.pages += 1
        report.states += len(result.pstg.states)
        report.pstgs[record.url] = result.pstg
        if result.truncated:
            report.truncated_pages.append(record.url)
        for new_path, landing in zip(result.new_paths, result.landings):
            link = synthesize(new_path, landing, shortcuts, spec)
            if register(repo, link) is Outcome.STORED:
                report.new_links += 1
                report.landings[str(link.url)] = landing
        repo.publish(record.url, extract_index(result.pstg, parse_app_url(record.url)))
    return report
