"""
Shortcuts between label sets
============================

Every path to an activity is replaced by the shortest path whose labels it
already carries. On the Reddit model all four routes to the detail page
collapse onto the direct one.
"""

from deeplinkgen.corpus import load_fixture
from deeplinkgen.driver import ConcretePath, replay
from deeplinkgen.explorer import build_navigation_graph
from deeplinkgen.model import IntentRecord
from deeplinkgen.shortcut import compute_shortcuts, enumerate_paths, lookup_shortcut, path_labels
from deeplinkgen.synthesizer import shorten

spec = load_fixture("reddit")
graph = build_navigation_graph(spec, 4)
table = compute_shortcuts(graph)
detail = "com.reddit.frontpage.DetailActivity"

for path in enumerate_paths(graph, detail, 5):
    best = lookup_shortcut(table, path)
    print(f"length {len(path)} {sorted(path_labels(path))}  ->  length {len(best)}")

# a concrete path through the search page, with the values it carried
pkg = spec.package_name
long = ConcretePath((
    spec.launch,
    IntentRecord((pkg, pkg + ".SearchActivity"), extras={"query": "cats"}),
    IntentRecord((pkg, detail), extras={"arg.link": "L501"}),
))
short = shorten(long, table)
print("before:", [i.to_dict() for i in long.intents])
print("after: ", [i.to_dict() for i in short.intents])

# both open the same page
assert replay(spec, long).snapshot_content() == replay(spec, short).snapshot_content()
print("same page:", replay(spec, short).snapshot_content().texts()[0])
