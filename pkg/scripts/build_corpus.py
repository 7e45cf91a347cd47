"""Regenerate the JSON app specs in src/deeplinkgen/fixtures/.

Run from the repository root:  python3 scripts/build_corpus.py
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "deeplinkgen" / "fixtures"


def node(text, size=14, kind="text", color="#202020", y=0):
    return {"text": text, "size": size, "color": color, "pos": [16, y], "kind": kind}


def page(state_id, items, scrolls=()):
    """items: (text, size, kind, effect-or-None); clickable items get a click op."""
    content, ops = [], []
    for i, (text, size, kind, effect) in enumerate(items):
        content.append(node(text, size, kind, y=40 * i))
        if effect is not None:
            ops.append({"kind": "click", "target": i, "effect": effect})
    for direction, effect in scrolls:
        ops.append({"kind": "scroll", "target": direction, "effect": effect})
    return {"id": state_id, "content": content, "ops": ops}


def to(component, **extras):
    intent = {"component": component}
    if extras:
        intent["extras"] = extras
    return {"type": "transition", "intent": intent}


def to_x(component, extras):
    return to(component, **extras)


def goto(state):
    return {"type": "goto", "state": state}


NOOP = {"type": "noop"}


def title(text):
    return (text, 24, "text", None)


def body(text):
    return (text, 14, "text", None)


def link(text, effect, kind="list-item"):
    return (text, 16, kind, effect)


def button(text, effect):
    return (text, 14, "button", effect)


def instance(states, match=None, initial=None):
    return {"match": match or {}, "initial": initial or states[0]["id"], "states": states}


def app(package, main, activities):
    return {"package": package, "main": main, "activities": activities}


def activity(cls, instances):
    return {"class": cls, "instances": instances}


# -- small hand-written apps -------------------------------------------------


def minimal():
    return app("com.example.minimal", ".MainActivity", [
        activity(".MainActivity", [instance([page("home", [title("Hello"), body("Nothing to see here.")])])]),
    ])


def linear():
    return app("com.example.linear", ".HomeActivity", [
        activity(".HomeActivity", [instance([page("home", [
            title("Linear home"), body("Start of the chain."), button("Open list", to(".ListActivity")),
        ])])]),
        activity(".ListActivity", [instance([page("list", [
            title("The list"), body("Middle of the chain."), button("Open item", to(".ItemActivity")),
        ])])]),
        activity(".ItemActivity", [instance([page("item", [
            title("The item"), body("End of the chain."), button("Like", NOOP),
        ])])]),
    ])


def tabs():
    detail = []
    for doc_id, name in [("d1", "Quarterly report"), ("d2", "Annual summary")]:
        detail.append(instance([
            page("collapsed", [title(name), body(f"Document {doc_id} preview."), button("Expand", goto("expanded"))]),
            page("expanded", [title(name), body(f"Document {doc_id} full text."),
                              button("Collapse", goto("collapsed")), button("Comments", goto("comments"))]),
            page("comments", [title(name), body(f"Comments on {doc_id}."), button("Back to text", goto("expanded"))],
                 scrolls=[("down", goto("comments_more"))]),
            page("comments_more", [title(name), body(f"Older comments on {doc_id}.")],
                 scrolls=[("up", goto("comments"))]),
        ], match={"id": doc_id}))
    detail.append(instance([page("missing", [title("No document"), body("Pick a document first.")])]))
    return app("com.example.tabs", ".MainActivity", [
        activity(".MainActivity", [instance([
            page("tab1", [title("Documents"), body("Recent documents are on the second tab."),
                          button("Tab 2", goto("tab2")), button("Refresh", NOOP)]),
            page("tab2", [title("Documents"), body("Recent documents"),
                          button("Tab 1", goto("tab1")),
                          link("Quarterly report", to(".DetailActivity", id="d1")),
                          link("Annual summary", to(".DetailActivity", id="d2"))]),
        ])]),
        activity(".DetailActivity", detail),
    ])


def wallstreet():
    pkg = "com.example.wallstreet"
    news = {
        "n1": ("Markets rally on rate hopes", "https://img.example.com/n1.jpg", "flash"),
        "n2": ("Oil slips as supply grows", "https://img.example.com/n2.jpg", "article"),
        "n3": ("Tech earnings beat forecasts", "https://img.example.com/n3.jpg", "article"),
    }

    def news_link(nid):
        headline, image, kind = news[nid]
        return link(headline, to(".NewsDetailActivity", nid=nid, image_url=image, news_type=kind))

    detail = [
        instance([
            page("story", [title(headline), body(f"Full story {nid}."), body(f"Type: {kind}"),
                           button("Related topic", to(".NewsTopicActivity", topic_id="markets"))]),
        ], match={"nid": nid})
        for nid, (headline, image, kind) in news.items()
    ]
    detail.append(instance([page("empty", [title("News"), body("Story unavailable."),
                                           button("Related topic", to(".NewsTopicActivity", topic_id="markets"))])]))
    topics = {"markets": ["n1", "n3"], "energy": ["n2"]}
    topic_instances = [
        instance([page("topic", [title(f"Topic: {tid}"), body(f"Stories about {tid}.")] + [news_link(n) for n in nids])],
                 match={"topic_id": tid})
        for tid, nids in topics.items()
    ]
    topic_instances.append(instance([page("topic", [title("Topics"), body("Choose a topic."), news_link("n1")])]))
    return app(pkg, ".MainActivity", [
        activity(".MainActivity", [instance([page("feed", [
            title("Wallstreet News"), body("Latest headlines"),
            news_link("n1"), news_link("n2"),
            link("Topic: markets", to(".NewsTopicActivity", topic_id="markets")),
            link("Topic: energy", to(".NewsTopicActivity", topic_id="energy")),
        ])])]),
        activity(".NewsDetailActivity", detail),
        activity(".NewsTopicActivity", topic_instances),
    ])


# -- Reddit-like app: 12 activities, deepest one four transitions away -------


def reddit():
    pkg = "com.reddit.frontpage"
    posts = {
        "L101": ("Cat learns to open doors", "pics"),
        "L102": ("New telescope images released", "news"),
        "L103": ("Ask me anything about bread", "food"),
        "L201": ("Sunset over the harbour", "pics"),
        "L202": ("Macro shot of a bee", "pics"),
        "L301": ("Election results live thread", "news"),
        "L401": ("My comment history highlight", "alice"),
        "L501": ("Ten cats who own the house", "cats"),
        "L601": ("Featured: community guidelines", "meta"),
    }

    def post_link(link_id):
        return link(posts[link_id][0], to(".DetailActivity", **{"arg.link": link_id}))

    detail = []
    for link_id, (headline, where) in posts.items():
        detail.append(instance([
            page("post", [title(headline), body(f"Posted in r/{where}."), body(f"Post {link_id} body text."),
                          button("View image", to(".ImageViewerActivity", image_url=f"img_{link_id}")),
                          button("Comments", goto("comments"))]),
            page("comments", [title(headline), body(f"Top comments for {link_id}."),
                              button("Back to post", goto("post"))]),
        ], match={"arg.link": link_id}))
    detail.append(instance([page("post", [
        title("Post"), body("This post is not available."),
        button("View image", to(".ImageViewerActivity", image_url="img_none")),
    ])]))

    subreddits = {"pics": ["L201", "L202"], "news": ["L301"]}
    sub_instances = [
        instance([page("listing", [title(f"r/{name}"), body(f"Hot posts in r/{name}.")]
                       + [post_link(i) for i in ids]
                       + [button("Subreddit settings", to(".PreferencesActivity"))])],
                 match={"subreddit_name": name})
        for name, ids in subreddits.items()
    ]
    sub_instances.append(instance([page("listing", [
        title("Subreddit"), body("Subreddit not found."),
        link("Example post", to(".DetailActivity", **{"arg.link": "L000"})),
        button("Subreddit settings", to(".PreferencesActivity")),
    ])]))

    images = [
        instance([page("image", [title(f"Image img_{lid}"), body("Pinch to zoom.")])], match={"image_url": f"img_{lid}"})
        for lid in posts
    ]
    images.append(instance([page("image", [title("Image"), body("No image.")])]))

    activities = [
        activity(".FrontpageListingActivity", [instance([
            page("front", [
                title("Reddit front page"), body("Popular posts"),
                post_link("L101"), post_link("L102"),
                link("r/pics", to(".SubredditListingActivity", subreddit_name="pics")),
                link("r/news", to(".SubredditListingActivity", subreddit_name="news")),
                button("My profile", to(".UserProfileActivity", account_username="alice")),
                button("Search", to(".SearchActivity")),
                link("Trending: cats", to(".SearchActivity", query="cats")),
                button("Log in", to(".LoginActivity")),
            ], scrolls=[("down", goto("front_more"))]),
            page("front_more", [title("Reddit front page"), body("More popular posts"), post_link("L103")],
                 scrolls=[("up", goto("front"))]),
        ])]),
        activity(".DetailActivity", detail),
        activity(".SubredditListingActivity", sub_instances),
        activity(".PreferencesActivity", [instance([page("prefs", [
            title("Preferences"), body("Subreddit display options."),
            link(posts["L601"][0], to(".DetailActivity", **{"arg.link": "L601"})),
            button("About", to(".AboutActivity")),
        ])])]),
        activity(".UserProfileActivity", [
            instance([page("profile", [title("u/alice"), body("Karma 1234."),
                                       button("Submitted", to(".UserSubmittedListingActivity", username="$account_username"))])],
                     match={"account_username": "alice"}),
            instance([page("profile", [title("Profile"), body("Log in to see your profile."),
                                       button("Submitted", to(".UserSubmittedListingActivity", username="guest"))])]),
        ]),
        activity(".UserSubmittedListingActivity", [
            instance([page("submitted", [title("Submitted by alice"), body("3 posts."),
                                         button("Comments", to(".UserCommentsActivity"))])],
                     match={"username": "alice"}),
            instance([page("submitted", [title("Submitted"), body("Nothing submitted yet."),
                                         button("Comments", to(".UserCommentsActivity"))])]),
        ]),
        activity(".UserCommentsActivity", [instance([page("comments", [
            title("Your comments"), body("Recent comment threads."),
            post_link("L401"),
            button("Message the moderators", to(".MessageComposeActivity", recipient="mods")),
        ])])]),
        activity(".SearchActivity", [
            instance([page("results", [title("Search: cats"), body("1 result."), post_link("L501"),
                                       button("Home", to(".FrontpageListingActivity"))])],
                     match={"query": "cats"}),
            instance([page("search", [title("Search Reddit"), body("No recent searches."),
                                      button("Home", to(".FrontpageListingActivity"))])]),
        ]),
        activity(".LoginActivity", [instance([page("login", [
            title("Log in"), body("Username and password."), button("Cancel", to(".FrontpageListingActivity")),
        ])])]),
        activity(".ImageViewerActivity", images),
        activity(".AboutActivity", [instance([page("about", [title("About"), body("Version 1.0.3")])])]),
        activity(".MessageComposeActivity", [
            instance([page("compose", [title("Message to mods"), body("Write your message.")])], match={"recipient": "mods"}),
            instance([page("compose", [title("New message"), body("Choose a recipient.")])]),
        ]),
    ]
    return app(pkg, ".FrontpageListingActivity", activities)


# -- generated catalogue apps for the exploration census ---------------------


def catalogue(package, main, layout, unreachable=()):
    """layout: name -> (key or None, [values], [(dst, hidden), ...]).

    Every instance links to every value of each destination, except when the
    source and destination share a key: then the carried value is forwarded.
    Hidden links sit behind a "More" toggle.
    """

    def label(name):
        return name.replace("Activity", "")

    def links_for(name, value):
        key = layout[name][0]
        shown, hidden = [], []
        for dst, is_hidden in layout[name][2]:
            dkey, dvalues, _ = layout[dst]
            if dkey is None:
                effects = [(f"Open {label(dst)}", to("." + dst))]
            elif key is not None and dkey == key and value is not None:
                effects = [(f"{label(dst)} for this", to_x("." + dst, {dkey: "$" + dkey}))]
            elif key is not None and value is None:
                effects = [(f"{label(dst)} {dvalues[0]}", to_x("." + dst, {dkey: dvalues[0]}))]
            else:
                effects = [(f"{label(dst)} {v}", to_x("." + dst, {dkey: v})) for v in dvalues]
            (hidden if is_hidden else shown).extend(link(t, e) for t, e in effects)
        return shown, hidden

    def states_for(name, value):
        tag = f"{label(name)} {value}" if value is not None else label(name)
        shown, hidden = links_for(name, value)
        head = [title(tag), body(f"{tag} overview")]
        if not hidden:
            return [page("main", head + shown)]
        return [
            page("main", head + shown + [button("More", goto("more"))]),
            page("more", [title(tag), body(f"{tag} more options")] + hidden + [button("Less", goto("main"))]),
        ]

    activities = []
    for name, (key, values, _) in layout.items():
        instances = [instance(states_for(name, v), match={key: v}) for v in (values if key else [])]
        instances.append(instance(states_for(name, None)))
        activities.append(activity("." + name, instances))
    for name in unreachable:
        activities.append(activity("." + name, [instance([page("main", [title(label(name)), body("System event")])])]))
    return app(package, "." + main, activities)


def ebay():
    return catalogue("com.ebay.mobile", "MainActivity", {
        "MainActivity": (None, [], [("SearchActivity", False), ("ItemActivity", False)]),
        "SearchActivity": (None, [], [("ItemActivity", False), ("MainActivity", False)]),
        "ItemActivity": ("item_id", ["i1", "i2"], [("SellerActivity", True)]),
        "SellerActivity": ("seller", ["s1"], [("ItemActivity", False)]),
    }, unreachable=["NotificationActivity"])


def yahoo():
    return catalogue("com.yahoo.mobile.client.android.yahoo", "MainActivity", {
        "MainActivity": (None, [], [("ArticleActivity", False), ("VideoActivity", True)]),
        "ArticleActivity": ("aid", ["a1", "a2"], [("CommentsActivity", False)]),
        "VideoActivity": ("vid", ["v1"], [("MainActivity", False)]),
        "CommentsActivity": ("aid", ["a1", "a2"], [("ProfileActivity", True)]),
        "ProfileActivity": ("user", ["u1"], []),
    }, unreachable=["WidgetConfigActivity"])


def aliexpress():
    return catalogue("com.alibaba.aliexpresshd", "MainActivity", {
        "MainActivity": (None, [], [("CategoryActivity", False), ("SearchActivity", False), ("CartActivity", True)]),
        "CategoryActivity": ("cat", ["phones", "shoes"], [("ProductDetailActivity", False)]),
        "SearchActivity": (None, [], [("ProductDetailActivity", False)]),
        "CartActivity": (None, [], []),
        "ProductDetailActivity": ("pid", ["p1", "p2"], [("StoreActivity", False), ("ReviewsActivity", True)]),
        "StoreActivity": ("store", ["st1"], [("ProductDetailActivity", False)]),
        "ReviewsActivity": ("pid", ["p1", "p2"], []),
    }, unreachable=["PushActivity"])


def yelp():
    return catalogue("com.yelp.android", "MainActivity", {
        "MainActivity": (None, [], [("SearchActivity", False), ("NearbyActivity", False),
                                    ("CategoryListActivity", False), ("LoginActivity", True)]),
        "SearchActivity": (None, [], [("BizDetailActivity", False)]),
        "NearbyActivity": (None, [], [("MapActivity", False)]),
        "CategoryListActivity": (None, [], [("BizListActivity", False)]),
        "LoginActivity": (None, [], [("SignUpActivity", False)]),
        "BizListActivity": ("cat", ["food", "bars"], [("BizDetailActivity", False)]),
        "BizDetailActivity": ("biz", ["b1", "b2"], [("ReviewsActivity", False), ("PhotosActivity", False),
                                                    ("CheckInActivity", True)]),
        "MapActivity": (None, [], [("DirectionsActivity", False)]),
        "SignUpActivity": (None, [], []),
        "ReviewsActivity": ("biz", ["b1", "b2"], [("UserProfileActivity", False)]),
        "PhotosActivity": ("biz", ["b1", "b2"], [("PhotoViewerActivity", False)]),
        "CheckInActivity": ("biz", ["b1", "b2"], []),
        "DirectionsActivity": (None, [], []),
        "UserProfileActivity": ("user", ["u1", "u2"], [("FriendsActivity", False), ("BookmarksActivity", True)]),
        "PhotoViewerActivity": ("photo", ["ph1"], []),
        "FriendsActivity": ("user", ["u1", "u2"], [("UserProfileActivity", False)]),
        "BookmarksActivity": ("user", ["u1", "u2"], []),
    }, unreachable=["ReminderActivity", "WidgetActivity"])


CORPUS = {
    "minimal": minimal,
    "linear": linear,
    "tabs": tabs,
    "wallstreet": wallstreet,
    "reddit": reddit,
    "ebay": ebay,
    "yahoo": yahoo,
    "aliexpress": aliexpress,
    "yelp": yelp,
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, build in CORPUS.items():
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(build(), indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"wrote {path.relative_to(OUT.parents[2])}")


if __name__ == "__main__":
    main()
