import json

import pytest
import requests

from statviz.service import ApiServer

_STORE_PATHS = {}


@pytest.fixture(scope="module")
def server(pipeline, tmp_path_factory):
    templates = tmp_path_factory.mktemp("store") / "templates.jsonl"
    api = ApiServer(pipeline, templates_path=templates)
    port = api.start_background()
    url = f"http://127.0.0.1:{port}"
    _STORE_PATHS[url] = templates
    yield url
    api.stop()


@pytest.fixture(scope="module")
def session(server):
    r = requests.post(f"{server}/api/sessions", json={
        "statement": "More than 40% of students like football.", "seed": 5, "top": 8,
    })
    assert r.status_code == 200
    return r.json()


def test_create_session_shape(session):
    assert session["session_id"].startswith("s")
    assert session["relation"] == "single"
    assert session["facts"][0]["value"] == 0.4
    assert len(session["candidates"]) == 8
    for c in session["candidates"]:
        assert c["svg"].startswith("<svg")
        assert set(c["scores"]) == {"semantic", "visual", "informative", "total"}
    totals = [c["scores"]["total"] for c in session["candidates"]]
    assert totals == sorted(totals, reverse=True)


def test_unparsable_statement_400(server):
    r = requests.post(f"{server}/api/sessions", json={"statement": "hello world"})
    assert r.status_code == 400
    body = r.json()
    assert "NoNumberEntity" in body["diagnostic"]


def test_get_candidates_read_your_writes(server, session):
    sid = session["session_id"]
    r = requests.get(f"{server}/api/sessions/{sid}/candidates", params={"top": 3})
    assert r.status_code == 200
    got = r.json()["candidates"]
    assert [c["id"] for c in got] == [c["id"] for c in session["candidates"][:3]]


def test_get_candidates_unknown_session(server):
    assert requests.get(f"{server}/api/sessions/zzz/candidates").status_code == 404


def test_refine_palette(server, session):
    sid = session["session_id"]
    parent = session["candidates"][0]
    r = requests.post(
        f"{server}/api/sessions/{sid}/candidates/{parent['id']}/refine",
        json={"replace": {"palette": "coffee"}},
    )
    assert r.status_code == 200
    child = r.json()["candidate"]
    assert child["palette"] == "coffee"
    assert child["parent"] == parent["id"]
    assert child["blueprint"] == parent["blueprint"]
    assert child["icons"] == parent["icons"]  # unspecified choices preserved
    assert child["svg"] != parent["svg"]
    # the derived candidate is inserted right after its parent
    listing = requests.get(
        f"{server}/api/sessions/{sid}/candidates", params={"top": 20}
    ).json()["candidates"]
    ids = [c["id"] for c in listing]
    assert ids.index(child["id"]) == ids.index(parent["id"]) + 1


def test_refine_icon(server, session):
    sid = session["session_id"]
    parent = next(c for c in session["candidates"] if c["icons"])
    slot = sorted(parent["icons"])[0]
    kind = parent["slots"][slot]
    lookup = requests.get(f"{server}/api/assets/icons", params={
        "query": "people person", "k": 8, "slot_kind": kind,
    }).json()["results"]
    choice = next(e for e in lookup if e["allowed"] and e["id"] != parent["icons"][slot])
    r = requests.post(
        f"{server}/api/sessions/{sid}/candidates/{parent['id']}/refine",
        json={"replace": {"icon": choice["id"], "icon_slot": slot}},
    )
    assert r.status_code == 200
    child = r.json()["candidate"]
    assert child["icons"][slot] == choice["id"]
    assert child["palette"] == parent["palette"]


def test_refine_hollow_icon_into_fill_slot_409(server, pipeline):
    r = requests.post(f"{server}/api/sessions", json={
        "statement": "65% of coffee are consumed in breakfast.", "seed": 1, "top": 20,
    })
    assert r.status_code == 200
    body = r.json()
    sid = body["session_id"]
    target = next(
        c for c in body["candidates"]
        if any(kind == "filled_icon" for kind in c["slots"].values())
    )
    slot = next(rid for rid, kind in target["slots"].items() if kind == "filled_icon")
    r = requests.post(
        f"{server}/api/sessions/{sid}/candidates/{target['id']}/refine",
        json={"replace": {"icon": "ring", "icon_slot": slot}},  # ring is hollow
    )
    assert r.status_code == 409
    assert r.json()["constraint"] == "hollow_not_fillable"


def test_refine_description_form(server, session):
    sid = session["session_id"]
    parent = next(c for c in session["candidates"] if c["blueprint"] == "stack-number-top")
    r = requests.post(
        f"{server}/api/sessions/{sid}/candidates/{parent['id']}/refine",
        json={"replace": {"description_form": "number_whole_phrase"}},
    )
    assert r.status_code == 200
    child = r.json()["candidate"]
    assert "More than 40% of students" in child["svg"]


def test_refine_unknown_candidate_404(server, session):
    sid = session["session_id"]
    r = requests.post(
        f"{server}/api/sessions/{sid}/candidates/{sid}.zzz/refine",
        json={"replace": {"palette": "coffee"}},
    )
    assert r.status_code == 404


def test_refine_unknown_palette_404(server, session):
    sid = session["session_id"]
    cid = session["candidates"][0]["id"]
    r = requests.post(
        f"{server}/api/sessions/{sid}/candidates/{cid}/refine",
        json={"replace": {"palette": "no-such-palette"}},
    )
    assert r.status_code == 404


def test_asset_queries(server):
    icons = requests.get(f"{server}/api/assets/icons", params={
        "query": "students", "slot_kind": "pictograph",
    }).json()["results"]
    assert icons[0]["id"] == "student"
    assert icons[0]["allowed"] is True

    palettes = requests.get(f"{server}/api/assets/palettes", params={
        "query": "coffee",
    }).json()["results"]
    assert palettes[0]["id"] == "coffee"
    assert set(palettes[0]["colors"]) == {
        "background", "text_primary", "text_emphasis", "graphic_primary", "graphic_secondary",
    }


def test_export_matches_inline_svg(server, session):
    cid = session["candidates"][0]["id"]
    r = requests.get(f"{server}/api/export/{cid}.svg")
    assert r.status_code == 200
    assert r.headers["Content-Type"] == "image/svg+xml"
    assert r.content.decode("utf-8") == session["candidates"][0]["svg"]


def test_template_save_reload_byte_identical(server, session):
    cid = session["candidates"][1]["id"]
    saved = requests.post(f"{server}/api/templates", json={
        "candidate_id": cid, "label": "my favourite",
    })
    assert saved.status_code == 200
    tid = saved.json()["template_id"]

    listing = requests.get(f"{server}/api/templates").json()["templates"]
    assert any(t["id"] == tid and t["label"] == "my favourite" for t in listing)

    exported = requests.get(f"{server}/api/export/{cid}.svg").content
    reloaded = requests.get(f"{server}/api/templates/{tid}/svg").content
    assert reloaded == exported


def test_templates_survive_restart(server, session, pipeline):
    cid = session["candidates"][0]["id"]
    tid = requests.post(f"{server}/api/templates", json={
        "candidate_id": cid, "label": "persist me",
    }).json()["template_id"]
    exported = requests.get(f"{server}/api/export/{cid}.svg").content

    listing = requests.get(f"{server}/api/templates").json()["templates"]
    assert any(t["id"] == tid and t["label"] == "persist me" for t in listing)

    # a second server over the same JSONL file sees and re-renders the template
    twin = ApiServer(pipeline, templates_path=_STORE_PATHS[server])
    port = twin.start_background()
    try:
        reloaded = requests.get(f"http://127.0.0.1:{port}/api/templates/{tid}/svg").content
        assert reloaded == exported
    finally:
        twin.stop()


def test_session_determinism(server):
    results = []
    for _ in range(2):
        r = requests.post(f"{server}/api/sessions", json={
            "statement": "2 in 5 adults drink coffee every morning.", "seed": 9, "top": 4,
        })
        assert r.status_code == 200
        results.append(r.json())
    a, b = results
    assert [c["local_id"] for c in a["candidates"]] == [c["local_id"] for c in b["candidates"]]
    assert [c["svg"] for c in a["candidates"]] == [c["svg"] for c in b["candidates"]]


def test_concurrent_sessions_isolated(server):
    import concurrent.futures

    statements = [
        "30% of adults own a cat.",
        "Nearly 70% of employees work from home.",
        "1 in 4 kids play chess.",
    ]

    def create(stmt):
        r = requests.post(f"{server}/api/sessions", json={"statement": stmt, "top": 2})
        return stmt, r.status_code, r.json()

    with concurrent.futures.ThreadPoolExecutor(max_workers=3) as pool:
        results = list(pool.map(create, statements))
    sids = set()
    for stmt, status, body in results:
        assert status == 200, stmt
        assert body["statement"] == stmt
        sids.add(body["session_id"])
    assert len(sids) == 3
