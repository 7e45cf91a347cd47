"""Spec builders, random generators and brute-force oracles for the test suite.

The oracles here deliberately avoid the code paths they check: path
enumeration walks level by level instead of recursing, and instance
reachability walks intent templates directly instead of driving sessions.
"""

from __future__ import annotations

import random
from collections import deque

from hypothesis import strategies as st

from deeplinkgen.explorer import NavigationGraph, TransitionEdge
from deeplinkgen.model import AppSpec, GoToState, IntentRecord, Transition, load_app_spec


# -- tiny spec builders -----------------------------------------------------


def text_nodes(*texts, size=14):
    return [{"text": t, "size": size, "color": "#000000", "pos": [0, 20 * i], "kind": "text"} for i, t in enumerate(texts)]


def state(state_id, texts, ops=()):
    return {"id": state_id, "content": text_nodes(*texts), "ops": list(ops)}


def click(index, effect):
    return {"kind": "click", "target": index, "effect": effect}


def scroll(direction, effect):
    return {"kind": "scroll", "target": direction, "effect": effect}


def goto(state_id):
    return {"type": "goto", "state": state_id}


def to(component, **extras):
    return {"type": "transition", "intent": {"component": component, "extras": extras}}


NOOP = {"type": "noop"}


def single(states, initial=None, match=None):
    return {"match": match or {}, "initial": initial or states[0]["id"], "states": states}


def app_doc(activities, package="com.test.app", main=".A"):
    return {
        "package": package,
        "main": main,
        "activities": [{"class": name, "instances": insts} for name, insts in activities.items()],
    }


def make_app(activities, **kw) -> AppSpec:
    return load_app_spec(app_doc(activities, **kw))


def chain_app(n=3) -> AppSpec:
    """A -> B -> C ... linear app."""
    names = [f".{chr(ord('A') + i)}" for i in range(n)]
    acts = {}
    for i, name in enumerate(names):
        ops = [click(0, to(names[i + 1]))] if i + 1 < n else []
        acts[name] = [single([state("s", [f"page {name}"], ops)])]
    return make_app(acts)


# -- random navigation graphs ----------------------------------------------

LABEL_KEYS = "abcde"


def random_graph(rng: random.Random, max_vertices=8, max_parallel=3, density=0.3) -> NavigationGraph:
    n = rng.randint(1, max_vertices)
    names = [f"V{i}" for i in range(n)]
    edges: dict[tuple[str, str, frozenset], TransitionEdge] = {}

    def add(src, dst, keys):
        intent = IntentRecord(component=("p", dst), extras={k: "x" for k in sorted(keys)})
        labels = frozenset(f"extra:{k}" for k in keys)
        edges.setdefault((src, dst, labels), TransitionEdge(src, dst, labels, intent))

    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                for _ in range(rng.randint(1, max_parallel)):
                    add(names[i], names[j], rng.sample(LABEL_KEYS, rng.randint(0, 2)))
    for j in range(1, n):
        if not any(dst == names[j] and int(src[1:]) < j for src, dst, _ in edges):
            add(names[rng.randrange(j)], names[j], rng.sample(LABEL_KEYS, rng.randint(0, 2)))
    return NavigationGraph(names[0], names, list(edges.values()))


def oracle_key(steps) -> str:
    return "|".join(f"{s}>{d}[{','.join(sorted(l))}]" for s, d, l in steps)


def oracle_paths(graph: NavigationGraph, max_len: int) -> dict[str, list[tuple]]:
    """All vertex-simple root paths up to ``max_len``, grouped by end vertex, built level by level."""
    by_end: dict[str, list[tuple]] = {graph.root: [()]}
    level = [((), (graph.root,))]
    for _ in range(max_len):
        nxt = []
        for steps, visited in level:
            at = visited[-1]
            for e in graph.edges:
                if e.src == at and e.dst not in visited:
                    path = steps + ((e.src, e.dst, e.labels),)
                    nxt.append((path, visited + (e.dst,)))
                    by_end.setdefault(e.dst, []).append(path)
        level = nxt
    return by_end


def oracle_shortcuts(graph: NavigationGraph, max_len: int) -> dict[tuple[str, str], str]:
    """(end, key) -> key of the minimum (length, key) path whose labels the keyed path covers."""
    result = {}
    for end, paths in oracle_paths(graph, max_len).items():
        for p in paths:
            labels_p = set().union(*[l for _, _, l in p]) if p else set()
            candidates = []
            for q in paths:
                labels_q = set().union(*[l for _, _, l in q]) if q else set()
                if labels_q <= labels_p:
                    candidates.append((len(q), oracle_key(q)))
            result[(end, oracle_key(p))] = min(candidates)[1]
    return result


# -- declared-relation oracles ----------------------------------------------


def reachable_activities(spec: AppSpec) -> set[str]:
    """Activities reachable from main over the declared transition relation of any instance."""
    pairs = spec.declared_transitions()
    seen = {spec.main_activity}
    queue = deque([spec.main_activity])
    while queue:
        v = queue.popleft()
        for src, dst in pairs:
            if src == v and dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return seen


def reachable_states(instance) -> set[str]:
    seen = {instance.initial}
    queue = deque([instance.initial])
    while queue:
        s = queue.popleft()
        for _, effect in instance.states[s].operations:
            if isinstance(effect, GoToState) and effect.state not in seen:
                seen.add(effect.state)
                queue.append(effect.state)
    return seen


def resolve_instance(spec: AppSpec, intent: IntentRecord):
    act = spec.activity(intent.target)
    found = act.candidates(intent.extras_map)
    return found[0] if found else act.default


def reachable_instances(spec: AppSpec) -> set[tuple[str, tuple]]:
    """(activity, match pattern) of every instance reachable from launch by following templates."""
    start = spec.launch
    seen_intents = {start}
    queue = deque([start])
    reached = set()
    while queue:
        intent = queue.popleft()
        inst = resolve_instance(spec, intent)
        reached.add((intent.target, inst.match))
        for sid in reachable_states(inst):
            for _, effect in inst.states[sid].operations:
                if isinstance(effect, Transition):
                    nxt = effect.template.instantiate(spec.package_name, intent.extras_map)
                    if nxt not in seen_intents:
                        seen_intents.add(nxt)
                        queue.append(nxt)
    return reached


# -- random single-page apps ------------------------------------------------


@st.composite
def page_apps(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    texts = draw(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=n, max_size=n))
    states = []
    for i in range(n):
        ops = []
        for j in range(draw(st.integers(min_value=0, max_value=3))):
            target = draw(st.integers(min_value=0, max_value=n - 1))
            effect = goto(f"s{target}") if draw(st.booleans()) else NOOP
            ops.append(click(j, effect))
        if draw(st.booleans()):
            ops.append(scroll("down", goto(f"s{draw(st.integers(min_value=0, max_value=n - 1))}")))
        # content may repeat across states on purpose: identical pages are one PSTG state
        states.append(state(f"s{i}", [f"page {texts[i]}", "x", "y"], ops))
    return make_app({".A": [single(states)]})
