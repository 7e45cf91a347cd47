"""Automatic deep links for apps modeled as activity/intent state machines.

Pipeline: explore the app into a navigation graph, compute shortcuts,
crawl deep pages into a repository of App URLs, serve the repository over
HTTP and replay links on demand.
"""

from .corpus import load_fixture
from .crawler import PSTG, crawl_page, run_crawl, state_key
from .driver import ConcretePath, launch
from .executor import execute_deep_link, generate_schemas, match_schema
from .explorer import NavigationGraph, build_navigation_graph
from .links import AppUrl, DeepLink, Index
from .model import AppSpec, IntentRecord, label_set, load_app_spec
from .repository import Repository, open_repository, serve
from .shortcut import AbstractPath, ShortcutTable, compute_shortcuts, enumerate_paths
from .synthesizer import hash_path, make_app_url, serialize_path, shorten

__version__ = "0.1.0"
