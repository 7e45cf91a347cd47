"""
Crawling deep pages into a repository
=====================================

Start from the launch page, exercise every page state, and record one deep
link per page. Finished pages are published.
"""

import tempfile
from pathlib import Path

from deeplinkgen.corpus import load_fixture
from deeplinkgen.crawler import run_crawl
from deeplinkgen.explorer import converged_graph
from deeplinkgen.repository import Repository
from deeplinkgen.shortcut import compute_shortcuts

spec = load_fixture("tabs")
table = compute_shortcuts(converged_graph(spec)[1])

workdir = Path(tempfile.mkdtemp())
repo = Repository(workdir)
report = run_crawl(spec, table, repo)
print(report.to_dict())

for url, pstg in report.pstgs.items():
    print(f"{url}\n  {len(pstg.states)} states, {len(pstg.edges)} in-page edges")

for record in repo.published():
    print(f"{record.index.title!r:40} {record.url}")

# a second crawl finds nothing new
again = run_crawl(spec, table, Repository(workdir))
print("second run:", again.to_dict())
print("store:", repo.location)
