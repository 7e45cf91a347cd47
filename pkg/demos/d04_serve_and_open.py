"""
Serving links and opening them
==============================

Publish the Reddit model's deep links over HTTP, then open one of them in a
fresh session by resolving its path through the service.
"""

import json
import tempfile
import urllib.request

from deeplinkgen.corpus import load_fixture
from deeplinkgen.crawler import run_crawl
from deeplinkgen.executor import dispatch, generate_schemas
from deeplinkgen.explorer import converged_graph
from deeplinkgen.repository import Repository, serve
from deeplinkgen.shortcut import compute_shortcuts

spec = load_fixture("reddit")
repo = Repository(tempfile.mkdtemp())
run_crawl(spec, compute_shortcuts(converged_graph(spec)[1]), repo)

with serve(repo) as service:
    with urllib.request.urlopen(service.base_url + "/links") as resp:
        urls = json.loads(resp.read())
    print(f"{len(urls)} links published at {service.base_url}/links")

    url = next(u for u in urls if "DetailActivity" in u)
    with urllib.request.urlopen(f"{service.base_url}/links/{url.rsplit('?', 1)[1]}") as resp:
        print("descriptor:", json.loads(resp.read()))

    # no local repository here: the path comes from the service
    activity, content = dispatch(spec, url, generate_schemas(spec), service=service.base_url)
    print("opened", activity)
    for line in content.texts():
        print("  ", line)

    # URLs for other apps simply start this one
    activity, _ = dispatch(spec, "http://pets.example.com/com.example.pets.ItemActivity?1", generate_schemas(spec))
    print("foreign URL opened", activity)
