"""
Exploring an app model
======================

Build the navigation graph of the bundled Reddit-like app, round by round,
and watch the number of discovered activities level off.
"""

from deeplinkgen.corpus import load_fixture
from deeplinkgen.explorer import build_navigation_graph, converged_graph, exploration_curve

spec = load_fixture("reddit")
print("main activity:", spec.main_activity)

# one count per exploration depth; depth 0 is the main activity alone
print("activities per depth:", exploration_curve(spec, 6))

# stop as soon as another round adds neither an activity nor an edge
depth, graph = converged_graph(spec)
print(f"converged at depth {depth}: {len(graph.vertices)} activities, {len(graph.edges)} edges")

short = lambda name: name.rsplit(".", 1)[-1]
for edge in graph.edges:
    print(f"  {short(edge.src):30} -> {short(edge.dst):30} {sorted(edge.labels)}")
