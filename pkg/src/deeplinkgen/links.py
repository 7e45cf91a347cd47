"""App URLs, page indexes and deep links.

Rendered URL grammar: ``http://`` host ``/`` target ``?`` decimal-hash, where
host and target are dotted identifiers and the hash is an unsigned 64-bit
integer written in decimal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .driver import ConcretePath
from .errors import MalformedUrl

MAX_HASH = 2**64 - 1
ABSTRACT_LIMIT = 280

_SEGMENT = r"[A-Za-z0-9_$-]+"
_URL = re.compile(rf"^http://(?P<host>{_SEGMENT}(?:\.{_SEGMENT})*)/(?P<target>{_SEGMENT}(?:\.{_SEGMENT})*)\?(?P<hash>\d{{1,20}})$")


@dataclass(frozen=True)
class AppUrl:
    host: str
    target: str
    hash: int

    def __post_init__(self):
        if not 0 <= self.hash <= MAX_HASH:
            raise ValueError(f"hash {self.hash} does not fit in 64 bits")

    @property
    def prefix(self) -> str:
        return f"http://{self.host}/{self.target}"

    def __str__(self):
        return f"{self.prefix}?{self.hash}"


def parse_app_url(url: str) -> AppUrl:
    if not isinstance(url, str) or "?" not in url:
        raise MalformedUrl(f"not an App URL: {url!r}")
    m = _URL.match(url)
    if m is None:
        raise MalformedUrl(f"not an App URL: {url!r}")
    value = int(m["hash"])
    if value > MAX_HASH:
        raise MalformedUrl(f"hash out of range in {url!r}")
    return AppUrl(m["host"], m["target"], value)


def host_for_package(package: str) -> str:
    return ".".join(reversed(package.split(".")))


@dataclass(frozen=True)
class Index:
    title: str
    abstract: str
    activity: str
    url: AppUrl | None = None

    def to_dict(self) -> dict:
        return {"title": self.title, "abstract": self.abstract, "activity": self.activity}


@dataclass(frozen=True)
class DeepLink:
    path: ConcretePath
    url: AppUrl
    index: Index
