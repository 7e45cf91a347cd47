"""Deep link repository: a line-delimited JSON store plus a read-only HTTP service.

Each line of ``repo.jsonl`` is one record::

    {"url": ..., "host": ..., "target": ..., "hash": ..., "path": [intent, ...],
     "index": {"title": ..., "abstract": ..., "activity": ...},
     "created_at": ..., "status": "pending" | "published"}

Updates are appended; when a URL appears on several lines the last one
wins. The file is rewritten (compacted) once superseded lines dominate.
"""

from __future__ import annotations

import enum
import html
import json
import logging
import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Mapping

from .driver import ConcretePath
from .errors import BindFailure, CorruptStore
from .links import Index, parse_app_url

log = logging.getLogger(__name__)

STORE_NAME = "repo.jsonl"
PENDING = "pending"
PUBLISHED = "published"


class Outcome(enum.Enum):
    STORED = "stored"
    UPDATED = "updated"
    DUPLICATE = "duplicate"


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class RepoRecord:
    url: str
    host: str
    target: str
    hash: int
    path: ConcretePath
    index: Index
    created_at: str
    status: str = PENDING

    def to_dict(self) -> dict:
        return {
            "url": self.url,
            "host": self.host,
            "target": self.target,
            "hash": self.hash,
            "path": self.path.to_list(),
            "index": self.index.to_dict(),
            "created_at": self.created_at,
            "status": self.status,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: Mapping) -> "RepoRecord":
        url = parse_app_url(doc["url"])
        if (url.host, url.target, url.hash) != (doc["host"], doc["target"], doc["hash"]):
            raise ValueError("url fields disagree with host/target/hash")
        if doc["status"] not in (PENDING, PUBLISHED):
            raise ValueError(f"unknown status {doc['status']!r}")
        idx = doc["index"]
        return cls(
            url=doc["url"],
            host=doc["host"],
            target=doc["target"],
            hash=doc["hash"],
            path=ConcretePath.from_list(doc["path"]),
            index=Index(idx["title"], idx["abstract"], idx["activity"], url),
            created_at=doc["created_at"],
            status=doc["status"],
        )

    def descriptor(self) -> dict:
        return {
            "url": self.url,
            "hash": str(self.hash),
            "target": self.target,
            "title": self.index.title,
            "abstract": self.index.abstract,
            "activity": self.index.activity,
        }


class Repository:
    """Single-writer store. Readers use :meth:`published_snapshot`."""

    def __init__(self, location: str | os.PathLike, clock: Callable[[], str] = utc_now, compact_ratio: float = 2.0):
        location = Path(location)
        if location.is_dir() or location.suffix == "":
            location = location / STORE_NAME
        self.location = location
        self.clock = clock
        self.compact_ratio = compact_ratio
        self._records: dict[str, RepoRecord] = {}
        self._by_hash: dict[int, str] = {}
        self._claimed: set[str] = set()
        self._lines = 0
        self._lock = threading.Lock()
        self._snapshot: Mapping[int, RepoRecord] = MappingProxyType({})
        self._load()

    def _load(self) -> None:
        if not self.location.exists():
            return
        with open(self.location, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = RepoRecord.from_dict(json.loads(line))
                except (ValueError, KeyError, TypeError) as exc:
                    raise CorruptStore(self.location, line_no, str(exc)) from exc
                self._index(record)
                self._lines += 1
        self._refresh()

    def _index(self, record: RepoRecord) -> None:
        self._records[record.url] = record
        self._by_hash[record.hash] = record.url

    def _refresh(self) -> None:
        self._snapshot = MappingProxyType(
            {r.hash: r for r in self._records.values() if r.status == PUBLISHED}
        )

    def _append(self, record: RepoRecord) -> None:
        self.location.parent.mkdir(parents=True, exist_ok=True)
        with open(self.location, "a", encoding="utf-8") as fh:
            fh.write(record.to_line() + "\n")
        self._lines += 1
        if self._lines > max(16, self.compact_ratio * len(self._records)):
            self.compact()

    def compact(self) -> None:
        tmp = self.location.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for record in self._records.values():
                fh.write(record.to_line() + "\n")
        os.replace(tmp, self.location)
        self._lines = len(self._records)

    def put(self, record: RepoRecord) -> Outcome:
        """Idempotent upsert keyed by rendered URL; published records never change."""
        with self._lock:
            existing = self._records.get(record.url)
            if existing is not None:
                if existing.status == PUBLISHED or record.status == PENDING:
                    return Outcome.DUPLICATE
                record = replace(record, created_at=existing.created_at)
                outcome = Outcome.UPDATED
            else:
                outcome = Outcome.STORED
            self._index(record)
            self._append(record)
            if record.status == PUBLISHED:
                self._claimed.discard(record.url)
            self._refresh()
            return outcome

    def publish(self, url: str, index: Index | None = None) -> Outcome:
        record = self._records[url]
        return self.put(replace(record, index=index or record.index, status=PUBLISHED))

    def get(self, url: str) -> RepoRecord | None:
        return self._records.get(url)

    def get_by_hash(self, value: int) -> RepoRecord | None:
        url = self._by_hash.get(value)
        return self._records.get(url) if url else None

    def list(self) -> list[RepoRecord]:
        return list(self._records.values())

    def __len__(self):
        return len(self._records)

    def published(self) -> list[RepoRecord]:
        return [r for r in self._records.values() if r.status == PUBLISHED]

    def next_pending(self) -> RepoRecord | None:
        """Oldest pending record not yet handed out; it stays claimed until published."""
        with self._lock:
            for record in self._records.values():
                if record.status == PENDING and record.url not in self._claimed:
                    self._claimed.add(record.url)
                    return record
        return None

    def published_snapshot(self) -> Mapping[int, RepoRecord]:
        return self._snapshot


def open_repository(location: str | os.PathLike, **kwargs) -> Repository:
    return Repository(location, **kwargs)


# -- HTTP service ----------------------------------------------------------


def _prefers_html(accept: str) -> bool:
    ranked = []
    for pos, item in enumerate(accept.split(",")):
        parts = [p.strip() for p in item.split(";")]
        q = 1.0
        for p in parts[1:]:
            if p.startswith("q="):
                try:
                    q = float(p[2:])
                except ValueError:
                    q = 0.0
        if parts[0] in ("text/html", "application/json"):
            ranked.append((-q, pos, parts[0]))
    ranked = [r for r in ranked if r[0] < 0]
    return bool(ranked) and min(ranked)[2] == "text/html"


def render_descriptor_html(record: RepoRecord) -> str:
    e = html.escape
    return (
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
        f"<title>{e(record.index.title)}</title></head>\n<body>\n"
        f"<h1>{e(record.index.title)}</h1>\n"
        f"<p>{e(record.index.abstract)}</p>\n"
        f"<a href=\"{e(record.url)}\">{e(record.url)}</a>\n"
        "</body></html>\n"
    )


def _json(status: int, payload) -> tuple[int, str, bytes]:
    return status, "application/json; charset=utf-8", json.dumps(payload, ensure_ascii=False).encode("utf-8")


def handle_request(repo: Repository, method: str, path: str, accept: str = "") -> tuple[int, str, bytes]:
    """Route one request; returns (status, content type, body). Never mutates ``repo``."""
    if method != "GET":
        return _json(405, {"error": "method not allowed"})
    snapshot = repo.published_snapshot()
    path = path.split("?", 1)[0].rstrip("/") or "/"
    if path == "/links":
        return _json(200, [r.url for r in snapshot.values()])
    for prefix in ("/links/", "/resolve/"):
        if path.startswith(prefix):
            raw = path[len(prefix):]
            if not raw.isdigit() or not raw.isascii() or len(raw) > 20:
                return _json(400, {"error": f"malformed hash {raw!r}"})
            record = snapshot.get(int(raw))
            if record is None:
                return _json(404, {"error": f"unknown hash {raw}"})
            if prefix == "/resolve/":
                return _json(200, {"url": record.url, "target": record.target, "path": record.path.to_list()})
            if _prefers_html(accept):
                return 200, "text/html; charset=utf-8", render_descriptor_html(record).encode("utf-8")
            return _json(200, record.descriptor())
    return _json(404, {"error": "not found"})


class _Handler(BaseHTTPRequestHandler):
    repo: Repository

    def do_GET(self):
        status, ctype, body = handle_request(self.repo, "GET", self.path, self.headers.get("Accept", ""))
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *args):
        log.debug("%s - %s", self.address_string(), fmt % args)


class ServiceHandle:
    def __init__(self, server: ThreadingHTTPServer):
        self.server = server
        self.thread = threading.Thread(target=server.serve_forever, daemon=True)

    @property
    def address(self) -> tuple[str, int]:
        return self.server.server_address[:2]

    @property
    def base_url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def close(self) -> None:
        self.server.shutdown()
        self.server.server_close()
        self.thread.join(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def parse_address(address: str | tuple[str, int]) -> tuple[str, int]:
    if isinstance(address, tuple):
        return address
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"address must be HOST:PORT, got {address!r}")
    return host or "127.0.0.1", int(port)


def make_server(repo: Repository, address: str | tuple[str, int] = ("127.0.0.1", 0)) -> ThreadingHTTPServer:
    handler = type("LinkHandler", (_Handler,), {"repo": repo})
    try:
        return ThreadingHTTPServer(parse_address(address), handler)
    except OSError as exc:
        raise BindFailure(f"cannot bind {address}: {exc}") from exc


def serve(repo: Repository, address: str | tuple[str, int] = ("127.0.0.1", 0)) -> ServiceHandle:
    """Start the read-only link service on a background thread."""
    handle = ServiceHandle(make_server(repo, address))
    handle.thread.start()
    return handle
