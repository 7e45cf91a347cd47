from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from deeplinkgen.corpus import load_fixture
from deeplinkgen.driver import ContentChanged, NoChange, Transitioned, launch
from deeplinkgen.errors import (
    AmbiguousInstance,
    DanglingReference,
    MalformedSpec,
    MissingMain,
    NoHandler,
    UnknownOperation,
)
from deeplinkgen.model import (
    Content,
    ContentNode,
    IntentRecord,
    UserOperation,
    content_from_texts,
    label_set,
    load_app_spec,
)

from helpers import NOOP, app_doc, click, goto, make_app, scroll, single, state, to

PKG = "com.test.app"


def detail_app():
    main_ops = [
        click(0, to(".Detail", **{"arg.link": "L42"})),
        click(1, goto("more")),
        click(2, NOOP),
        scroll("down", goto("more")),
    ]
    return make_app({
        ".A": [single([state("home", ["Home", "More", "Nothing"], main_ops), state("more", ["More stuff"])])],
        ".Detail": [
            single([state("d", ["Generic detail"])]),
            single([state("d", ["Post L42"])], match={"arg.link": "L42"}),
            single([state("d", ["Post L7"])], match={"arg.link": "L7"}),
        ],
    })


# -- loading ---------------------------------------------------------------


def test_minimal_spec_loads():
    spec = make_app({".A": [single([state("s", ["hello"])])]})
    assert list(spec.activities) == [f"{PKG}.A"]
    assert spec.main_activity == f"{PKG}.A"


def test_reddit_fixture_has_twelve_activities():
    spec = load_fixture("reddit")
    assert len(spec.activities) == 12
    assert spec.main_activity == "com.reddit.frontpage.FrontpageListingActivity"


def test_transition_to_undeclared_activity_is_dangling():
    with pytest.raises(DanglingReference):
        make_app({".A": [single([state("s", ["x"], [click(0, to(".X"))])])]})


def test_goto_unknown_state_is_dangling():
    with pytest.raises(DanglingReference):
        make_app({".A": [single([state("s", ["x"], [click(0, goto("nope"))])])]})


def test_extra_reference_must_be_carried():
    doc = {".A": [single([state("s", ["x"], [click(0, to(".B", k="$id"))])])], ".B": [single([state("s", ["b"])])]}
    with pytest.raises(DanglingReference):
        make_app(doc)


def test_missing_main():
    with pytest.raises(MissingMain):
        make_app({".A": [single([state("s", ["x"])])]}, main=".Z")


@pytest.mark.parametrize("bad", ["", "{", "[]", json.dumps({"package": "p"})])
def test_malformed_documents(bad):
    with pytest.raises(MalformedSpec):
        load_app_spec(bad)


def test_click_target_out_of_range():
    with pytest.raises(MalformedSpec):
        make_app({".A": [single([state("s", ["x"], [click(3, NOOP)])])]})


def test_two_default_instances_rejected():
    with pytest.raises(MalformedSpec):
        make_app({".A": [single([state("s", ["x"])]), single([state("s", ["y"])])]})


def test_overlapping_instance_patterns_rejected():
    with pytest.raises(MalformedSpec):
        make_app({".A": [
            single([state("s", ["x"])]),
            single([state("s", ["y"])], match={"a": 1}),
            single([state("s", ["z"])], match={"b": 2}),
        ]})


# -- sessions --------------------------------------------------------------


def test_launch_minimal():
    spec = make_app({".A": [single([state("s", ["hello"])])]})
    session = launch(spec)
    assert session.current_activity == f"{PKG}.A"
    assert len(session.history) == 1
    assert session.snapshot_content() == content_from_texts(["hello"])


def test_launch_reddit():
    assert launch(load_fixture("reddit")).current_activity == "com.reddit.frontpage.FrontpageListingActivity"


def test_enumerate_operations_in_declared_order():
    session = launch(detail_app())
    ops = session.enumerate_operations()
    assert ops == [UserOperation.click(0), UserOperation.click(1), UserOperation.click(2), UserOperation.scroll("down")]
    assert ops == session.enumerate_operations()


def test_state_without_operations():
    session = launch(detail_app())
    session.perform(UserOperation.click(1))
    assert session.enumerate_operations() == []


def test_perform_effects():
    spec = detail_app()
    session = launch(spec)
    before = session.snapshot_content()
    assert isinstance(session.perform(UserOperation.click(2)), NoChange)
    assert session.snapshot_content() == before

    event = session.perform(UserOperation.click(0))
    assert isinstance(event, Transitioned)
    assert event.to_activity == f"{PKG}.Detail"
    assert event.intent.extras_map == {"arg.link": "L42"}
    assert session.snapshot_content().texts() == ["Post L42"]

    session = launch(spec)
    event = session.perform(UserOperation.scroll("down"))
    assert event == ContentChanged(content_from_texts(["More stuff"]))
    assert session.snapshot_content() == event.content


def test_undeclared_operation():
    with pytest.raises(UnknownOperation):
        launch(detail_app()).perform(UserOperation.click(5))


def test_send_intent_selects_instance():
    spec = detail_app()
    session = launch(spec)
    session.send_intent(IntentRecord((PKG, f"{PKG}.Detail"), extras={"arg.link": "L7"}))
    assert session.snapshot_content().texts() == ["Post L7"]
    session.send_intent(IntentRecord((PKG, f"{PKG}.Detail"), extras={"arg.link": "other"}))
    assert session.snapshot_content().texts() == ["Generic detail"]
    assert len(session.history) == 3


def test_send_intent_to_unknown_activity():
    with pytest.raises(NoHandler):
        launch(detail_app()).send_intent(IntentRecord((PKG, f"{PKG}.FooActivity")))


def test_ambiguous_instance_detected_at_runtime():
    # patterns on different keys are rejected at load; build the ambiguity by hand
    spec = detail_app()
    act = spec.activities[f"{PKG}.Detail"]
    clone = type(act.instances[1])((("x", 1),), "d", act.instances[1].states)
    object.__setattr__(act, "instances", act.instances + (clone,))
    with pytest.raises(AmbiguousInstance):
        launch(spec).send_intent(IntentRecord((PKG, f"{PKG}.Detail"), extras={"arg.link": "L42", "x": 1}))


def test_two_sessions_replaying_same_history_agree():
    spec = load_fixture("reddit")
    a, b = launch(spec), launch(spec)
    for s in (a, b):
        s.perform(s.enumerate_operations()[0])
    assert a.snapshot_content() == b.snapshot_content()
    assert a.history == b.history


# -- labels and content ----------------------------------------------------


def test_label_set_projection():
    intent = IntentRecord(action="VIEW", extras={"nid": 7})
    assert label_set(intent) == {"action:VIEW", "extra:nid"}
    assert label_set(IntentRecord()) == frozenset()
    full = IntentRecord(("p", "p.A"), "VIEW", {"BROWSABLE"}, "https://Example.com/x?y=1", {"k": "v"})
    assert label_set(full) == {"action:VIEW", "category:BROWSABLE", "data:https://example.com", "extra:k"}


def test_wallstreet_direct_intent_labels():
    spec = load_fixture("wallstreet")
    session = launch(spec)
    labels = set()
    for op in session.enumerate_operations():
        s = launch(spec)
        event = s.perform(op)
        if isinstance(event, Transitioned) and event.to_activity.endswith("NewsDetailActivity"):
            labels.add(label_set(event.intent))
    assert frozenset({"extra:nid", "extra:image_url", "extra:news_type"}) in labels


def test_intent_record_round_trip():
    intent = IntentRecord(("p", "p.A"), "VIEW", {"c1", "c2"}, "x://h/1", {"a": 1, "b": "two", "c": True})
    assert IntentRecord.from_dict(json.loads(json.dumps(intent.to_dict()))) == intent


def test_content_identity_ignores_style():
    a = Content((ContentNode("Hi  there", size=20, color="#fff"),))
    b = Content((ContentNode("Hi there", size=10, color="#000", position=(5, 5)),))
    assert a == b and hash(a) == hash(b)
    assert a != content_from_texts(["Hi there", "x"])
    assert a != content_from_texts(["hi there"])


def test_node_size_must_be_positive():
    with pytest.raises(ValueError):
        ContentNode("x", size=0)


@given(st.lists(st.text(max_size=8), max_size=5), st.lists(st.text(max_size=8), max_size=5))
def test_content_equality_is_text_sequence_equality(xs, ys):
    a, b = content_from_texts(xs), content_from_texts(ys)
    assert (a == b) == (a.identity() == b.identity())


def test_app_doc_class_prefix():
    doc = app_doc({".A": [single([state("s", ["x"])])]})
    doc["activities"][0]["class"] = f"{PKG}.A"
    assert list(load_app_spec(doc).activities) == [f"{PKG}.A"]


def test_scroll_effect_declared():
    spec = make_app({".A": [single([state("s", ["x"], [scroll("up", NOOP)])])]})
    assert launch(spec).enumerate_operations() == [UserOperation.scroll("up")]
