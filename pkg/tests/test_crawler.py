from __future__ import annotations

import pytest
from hypothesis import given, settings

from deeplinkgen.corpus import load_fixture
from deeplinkgen.crawler import crawl_page, recover_state, run_crawl, state_key
from deeplinkgen.driver import ConcretePath, replay
from deeplinkgen.errors import PathReplayFailed, RecoveryDiverged
from deeplinkgen.explorer import build_navigation_graph
from deeplinkgen.model import Content, ContentNode, IntentRecord, UserOperation, content_from_texts
from deeplinkgen.repository import Repository
from deeplinkgen.shortcut import compute_shortcuts

from helpers import (
    NOOP, click, goto, make_app, page_apps, reachable_instances, reachable_states, scroll, single, state, to,
)

PKG = "com.test.app"
A = f"{PKG}.A"


def root_path(spec):
    return ConcretePath((spec.launch,))


def toggle_app():
    return make_app({".A": [single([
        state("t1", ["Tab one", "Show tab two"], [click(1, goto("t2"))]),
        state("t2", ["Tab two", "Show tab one"], [click(1, goto("t1"))]),
    ])]})


# -- state keys ------------------------------------------------------------


def test_state_key_identity_rules():
    a = content_from_texts(["x", "y"])
    assert state_key(a) == state_key(content_from_texts(["x", "y"]))
    recolored = Content(tuple(ContentNode(t, color="#ff0000") for t in ["x", "y"]))
    assert state_key(recolored) == state_key(a)
    assert state_key(content_from_texts(["x", "z"])) != state_key(a)


def test_state_keys_distinct_across_corpus_contents():
    contents = set()
    for name in ("reddit", "yelp", "tabs", "aliexpress"):
        spec = load_fixture(name)
        for act in spec.activities.values():
            for inst in act.instances:
                contents.update(s.content for s in inst.states.values())
    assert len({state_key(c) for c in contents}) == len(contents)


# -- crawl_page --------------------------------------------------------------


def test_static_page():
    spec = make_app({".A": [single([state("s", ["only"])])]})
    result = crawl_page(spec, root_path(spec))
    assert len(result.pstg.states) == 1 and result.pstg.edges == [] and result.new_paths == []


def test_tab_toggle_two_states_two_edges():
    spec = toggle_app()
    result = crawl_page(spec, root_path(spec))
    assert len(result.pstg.states) == 2
    assert len(result.pstg.edges) == 2
    assert result.new_paths == []
    # brute-force enumeration of declared states agrees
    declared = reachable_states(spec.activities[A].default)
    assert len(declared) == len(result.pstg.states)


def test_outbound_link():
    spec = make_app({
        ".A": [single([state("s", ["go"], [click(0, to(".B", id=3))])])],
        ".B": [single([state("s", ["b"])])],
    })
    result = crawl_page(spec, root_path(spec))
    (new,) = result.new_paths
    assert new.target == f"{PKG}.B"
    assert new.intents[:-1] == root_path(spec).intents
    assert result.landings == [content_from_texts(["b"])]


def test_noop_and_self_loops_add_nothing():
    spec = make_app({".A": [single([state("s", ["x"], [click(0, NOOP), scroll("up", goto("s"))])])]})
    result = crawl_page(spec, root_path(spec))
    assert len(result.pstg.states) == 1 and result.pstg.edges == []


def test_budget_truncates():
    spec = make_app({".A": [single([
        state("s0", ["a", "b"], [click(0, goto("s1")), click(1, goto("s2"))]),
        state("s1", ["one"]),
        state("s2", ["two"]),
    ])]})
    result = crawl_page(spec, root_path(spec), op_budget=1)
    assert result.truncated and len(result.pstg.states) == 2
    assert not crawl_page(spec, root_path(spec), op_budget=2).truncated


def test_crawl_rejects_foreign_path():
    spec = toggle_app()
    bad = ConcretePath((IntentRecord(("other", "other.Main")),))
    with pytest.raises(PathReplayFailed):
        crawl_page(spec, bad)


def test_tabs_fixture_hidden_states():
    spec = load_fixture("tabs")
    graph = build_navigation_graph(spec, 2)
    detail = "com.example.tabs.DetailActivity"
    edge = next(e for e in graph.edges if e.dst == detail)
    path = ConcretePath((spec.launch, edge.sample_intent))
    session = replay(spec, path)
    declared = {s.content for k, s in session.instance.states.items() if k in reachable_states(session.instance)}
    result = crawl_page(spec, path)
    assert set(result.pstg.states.values()) == declared
    assert len(declared) == 4


# -- recover_state -----------------------------------------------------------


def test_recover_state():
    spec = toggle_app()
    path = root_path(spec)
    result = crawl_page(spec, path)
    assert recover_state(spec, path).snapshot_content() == result.pstg.states[result.pstg.start]
    (other,) = [k for k in result.pstg.states if k != result.pstg.start]
    session = recover_state(spec, path, result.pstg.prefixes[other], other)
    assert session.snapshot_content() == result.pstg.states[other]


def test_stale_recovery_diverges():
    spec = toggle_app()
    path = root_path(spec)
    result = crawl_page(spec, path)
    (other,) = [k for k in result.pstg.states if k != result.pstg.start]
    prefix = result.pstg.prefixes[other]
    edited = make_app({".A": [single([
        state("t1", ["Tab one", "Show tab two"], [click(1, goto("t2"))]),
        state("t2", ["Tab two (edited)", "Show tab one"], [click(1, goto("t1"))]),
    ])]})
    with pytest.raises(RecoveryDiverged):
        recover_state(edited, path, prefix, other)
    removed = make_app({".A": [single([state("t1", ["Tab one", "Show tab two"])])]})
    with pytest.raises(RecoveryDiverged):
        recover_state(removed, path, prefix)


# -- run_crawl ---------------------------------------------------------------


def test_linear_app(tmp_path):
    spec = load_fixture("linear")
    repo = Repository(tmp_path)
    report = run_crawl(spec, None, repo, max_pages=10)
    assert report.pages == 3 and report.new_links == 2
    assert len(repo.published()) == 3
    assert report.to_dict().keys() == {"pages", "states", "new_links", "truncated_pages"}


def test_max_pages_cap(tmp_path):
    repo = Repository(tmp_path)
    report = run_crawl(load_fixture("linear"), None, repo, max_pages=1)
    assert report.pages == 1 and len(repo.published()) == 1


def test_second_crawl_registers_nothing(tmp_path):
    spec = load_fixture("linear")
    repo = Repository(tmp_path)
    run_crawl(spec, None, repo)
    before = repo.location.read_bytes()
    report = run_crawl(spec, None, Repository(tmp_path))
    assert report.pages == 0 and report.new_links == 0
    assert repo.location.read_bytes() == before


def test_new_paths_extend_crawled_path():
    spec = load_fixture("reddit")
    path = root_path(spec)
    for new in crawl_page(spec, path).new_paths:
        assert len(new) == len(path) + 1 and new.intents[: len(path)] == path.intents


def test_reddit_detail_instance_census(tmp_path):
    spec = load_fixture("reddit")
    table = compute_shortcuts(build_navigation_graph(spec, 4))
    repo = Repository(tmp_path)
    report = run_crawl(spec, table, repo)
    assert report.truncated_pages == [] and report.failed_pages == []
    detail = "com.reddit.frontpage.DetailActivity"
    expected = {m for a, m in reachable_instances(spec) if a == detail}
    reached = set()
    for record in repo.list():
        if record.target == detail:
            reached.add(replay(spec, record.path).instance.match)
    assert reached == expected
    assert len(expected) >= 9


# -- PSTG properties over random single-page apps -----------------------------


@settings(max_examples=80, deadline=None)
@given(page_apps())
def test_pstg_properties(spec):
    result = crawl_page(spec, root_path(spec), op_budget=1000)
    pstg = result.pstg
    keys = list(pstg.states)
    assert len(set(keys)) == len(keys)
    assert len(set(pstg.states.values())) == len(keys)
    assert all(state_key(c) == k for k, c in pstg.states.items())
    inst = spec.activities[A].default
    declared = [inst.states[s].content for s in reachable_states(inst)]
    if len(set(declared)) == len(declared):
        assert set(pstg.states.values()) == set(declared)
    else:
        assert set(pstg.states.values()) <= set(declared)
    # every state reachable from the start along recorded edges
    seen, frontier = {pstg.start}, [pstg.start]
    while frontier:
        k = frontier.pop()
        for src, dst, _ in pstg.edges:
            if src == k and dst not in seen:
                seen.add(dst)
                frontier.append(dst)
    assert seen == set(keys)
    assert all(isinstance(op, UserOperation) for _, _, op in pstg.edges)
