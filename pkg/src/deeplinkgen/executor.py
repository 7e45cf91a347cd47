"""Proxy/controller logic: match App URLs to activity schemas and replay resolved paths."""

from __future__ import annotations

import json
import logging
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Iterable

from .driver import ConcretePath, launch, replay
from .errors import NotFound, TargetMismatch, UnknownActivity
from .links import AppUrl, host_for_package, parse_app_url
from .model import AppSpec, Content
from .repository import Repository

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class UrlSchema:
    host: str
    target: str

    @property
    def prefix(self) -> str:
        return f"http://{self.host}/{self.target}"

    def matches(self, url: AppUrl) -> bool:
        return url.prefix == self.prefix


def generate_schemas(spec: AppSpec, selected: Iterable[str] | None = None) -> list[UrlSchema]:
    """One schema per selected activity (all declared activities by default)."""
    names = list(spec.activities) if selected is None else list(dict.fromkeys(selected))
    unknown = [n for n in names if n not in spec.activities]
    if unknown:
        raise UnknownActivity(f"not declared in {spec.package_name}: {', '.join(unknown)}")
    host = host_for_package(spec.package_name)
    return [UrlSchema(host, n) for n in names]


def match_schema(url: str | AppUrl, schemas: Iterable[UrlSchema]) -> str | None:
    parsed = url if isinstance(url, AppUrl) else parse_app_url(url)
    for schema in schemas:
        if schema.matches(parsed):
            return schema.target
    return None


def resolve_path(url: AppUrl, repo: Repository | None = None, service: str | None = None) -> ConcretePath:
    """Concrete path for ``url``: local repository first, then the link service."""
    if repo is not None:
        record = repo.published_snapshot().get(url.hash)
        if record is not None and record.url == str(url):
            return record.path
    if service is not None:
        endpoint = f"{service.rstrip('/')}/resolve/{url.hash}"
        try:
            with urllib.request.urlopen(endpoint, timeout=10) as resp:
                doc = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise NotFound(f"{url} is not published") from exc
            raise
        if doc.get("url") == str(url):
            return ConcretePath.from_list(doc["path"])
    raise NotFound(f"{url} is not published")


def execute_deep_link(
    spec: AppSpec, url: str | AppUrl, repo: Repository | None = None, service: str | None = None
) -> Content:
    """Open the page behind ``url`` in a fresh session and return its content."""
    parsed = url if isinstance(url, AppUrl) else parse_app_url(url)
    path = resolve_path(parsed, repo, service)
    session = replay(spec, path)
    if session.current_activity != parsed.target:
        raise TargetMismatch(f"replay ended in {session.current_activity}, expected {parsed.target}")
    return session.snapshot_content()


def default_forward(spec: AppSpec, url: str | None = None) -> Content:
    """Unmatched requests just start the app."""
    return launch(spec).snapshot_content()


def dispatch(
    spec: AppSpec,
    url: str,
    schemas: Iterable[UrlSchema],
    repo: Repository | None = None,
    service: str | None = None,
) -> tuple[str, Content]:
    """Route ``url`` to exactly one of deep-link execution or default forwarding.

    Returns the activity that ends up on screen and its content.
    """
    parsed = parse_app_url(url)
    target = match_schema(parsed, schemas)
    if target is None:
        log.info("no schema for %s, forwarding to the app", url)
        return spec.main_activity, default_forward(spec, url)
    return target, execute_deep_link(spec, parsed, repo, service)

