"""HTTP service: session lifecycle, witness resolution, persistence."""

import pytest
from fastapi.testclient import TestClient

from specprobe.service import create_app

SPEC_TEXT = '''fn first_nonzero(nums: List(Float)) -> Float
"""
Return the first non-zero value in nums.
"""
'''

RAISING = """
fn first_nonzero(nums: List(Float)) -> Float {
    for num in nums {
        if num != 0.0 {
            return num;
        }
    }
    raise("no non-zero value");
}
"""

ZERO_DEFAULT = """
fn first_nonzero(nums: List(Float)) -> Float {
    for num in nums {
        if num != 0.0 {
            return num;
        }
    }
    return 0.0;
}
"""

SKIP_NAN = """
fn first_nonzero(nums: List(Float)) -> Float {
    for num in nums {
        if num != 0.0 and not is_nan(num) {
            return num;
        }
    }
    return 0.0;
}
"""

CONFIG = {"trials_per_target": 40, "fuel": 5000, "max_list_len": 4, "seed": 0}


def float_list(*xs):
    def enc(x):
        if x != x:
            return "NaN"
        return x

    return {"type": "list", "elem": "float", "value": [
        {"type": "float", "value": enc(x)} for x in xs
    ]}


@pytest.fixture
def corpus(tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    for name, src in [("01_raising.mfn", RAISING), ("02_zero.mfn", ZERO_DEFAULT),
                      ("03_skip_nan.mfn", SKIP_NAN)]:
        (d / name).write_text(src, encoding="utf-8")
    return d


@pytest.fixture
def client(tmp_path):
    app = create_app(state_dir=str(tmp_path / "state"))
    with TestClient(app) as c:
        yield c


def create_session(client, corpus, fnspec=SPEC_TEXT):
    return client.post("/sessions", json={
        "fnspec": fnspec, "corpus": str(corpus), "config": CONFIG,
    })


def witness_args(body):
    return [w["args_text"] for w in body["report"]["witnesses"]]


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}


def test_create_session_reports_ambiguities(client, corpus):
    res = create_session(client, corpus)
    assert res.status_code == 201
    body = res.json()
    assert body["survivors"] == 3  # mutants are not user-facing suggestions
    assert {"[]", "[nan]"} <= set(witness_args(body))
    assert body["history"][0]["event"] == "created"
    origins = {c["origin"] for c in body["report"]["meta"]["candidates"]}
    assert "mutant" in origins  # the report itself still reflects the full run


def test_get_session_round_trip(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    res = client.get(f"/sessions/{sid}")
    assert res.status_code == 200
    assert res.json()["session_id"] == sid


def test_get_unknown_session_404(client):
    assert client.get("/sessions/nope").status_code == 404


def test_create_session_requires_provider(client):
    res = client.post("/sessions", json={"fnspec": SPEC_TEXT})
    assert res.status_code == 400


def test_create_session_bad_spec(client, corpus):
    res = create_session(client, corpus, fnspec="garbage")
    assert res.status_code == 400


def test_create_session_unreachable_corpus_is_502(client, tmp_path):
    res = client.post("/sessions", json={
        "fnspec": SPEC_TEXT, "corpus": str(tmp_path / "missing"), "config": CONFIG,
    })
    assert res.status_code == 502


def test_resolve_witness_removes_candidates(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    res = client.post(f"/sessions/{sid}/examples", json={
        "args": [float_list()], "expected": {"type": "float", "value": 0.0},
    })
    assert res.status_code == 200
    body = res.json()
    assert body["removed"] == 1  # the raising candidate
    assert body["survivors"] == 2
    assert "[]" not in witness_args(body)
    assert "[nan]" in witness_args(body)
    assert body["history"][-1]["event"] == "example"


def test_full_disambiguation_loop(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    client.post(f"/sessions/{sid}/examples", json={
        "args": [float_list()], "expected": {"type": "float", "value": 0.0},
    })
    client.post(f"/sessions/{sid}/purpose", json={
        "purpose": "Return the first value that is non-zero and not NaN; "
                   "return 0.0 when there is none.",
    })
    res = client.post(f"/sessions/{sid}/examples", json={
        "args": [float_list(float("nan"))], "expected": {"type": "float", "value": 0.0},
    })
    body = res.json()
    assert body["survivors"] == 1
    assert witness_args(body) == []


def test_conflicting_resolution_is_409_and_non_committal(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    res = client.post(f"/sessions/{sid}/examples", json={
        "args": [float_list()], "expected": {"type": "float", "value": 99.0},
    })
    assert res.status_code == 409
    after = client.get(f"/sessions/{sid}").json()
    assert after["survivors"] == 3
    assert all(e["event"] != "example" for e in after["history"])


def test_example_validation_errors(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    cases = [
        {"args": [], "expected": {"type": "float", "value": 0.0}},         # arity
        {"args": [{"type": "int", "value": 3}],
         "expected": {"type": "float", "value": 0.0}},                     # arg type
        {"args": [float_list()], "expected": {"type": "int", "value": 0}}, # return type
        {"args": [float_list()]},                                          # missing expected
        {"args": [{"bogus": 1}], "expected": {"type": "float", "value": 0.0}},
    ]
    for body in cases:
        assert client.post(f"/sessions/{sid}/examples", json=body).status_code == 400


def test_any_error_expectation(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    res = client.post(f"/sessions/{sid}/examples", json={
        "args": [float_list()], "expected": "!error",
    })
    assert res.status_code == 200
    assert res.json()["survivors"] == 1  # only the raising candidate errors on []


def test_purpose_edit_without_reacquire(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    res = client.post(f"/sessions/{sid}/purpose", json={"purpose": "clarified text"})
    assert res.status_code == 200
    body = res.json()
    assert body["report"]["spec"]["purpose"] == "clarified text"
    assert body["history"][-1] == {
        "event": "purpose", "reacquired": False, "at": body["history"][-1]["at"],
    }


def test_purpose_rejects_non_text(client, corpus):
    sid = create_session(client, corpus).json()["session_id"]
    res = client.post(f"/sessions/{sid}/purpose", json={"purpose": 42})
    assert res.status_code == 400


def test_sessions_persist_across_restart(tmp_path, corpus):
    state = str(tmp_path / "state")
    with TestClient(create_app(state_dir=state)) as c1:
        sid = create_session(c1, corpus).json()["session_id"]
        c1.post(f"/sessions/{sid}/examples", json={
            "args": [float_list()], "expected": {"type": "float", "value": 0.0},
        })
    with TestClient(create_app(state_dir=state)) as c2:
        res = c2.get(f"/sessions/{sid}")
        assert res.status_code == 200
        body = res.json()
        assert body["survivors"] == 2
        assert [e["event"] for e in body["history"]] == ["created", "example"]
        # the reloaded session stays interactive
        follow = c2.post(f"/sessions/{sid}/examples", json={
            "args": [float_list(float("nan"))],
            "expected": {"type": "float", "value": 0.0},
        })
        assert follow.status_code == 200


def test_corrupt_snapshot_is_skipped(tmp_path, corpus):
    state = tmp_path / "state"
    with TestClient(create_app(state_dir=str(state))) as c1:
        sid = create_session(c1, corpus).json()["session_id"]
    (state / "broken.json").write_text("{not json", encoding="utf-8")
    with TestClient(create_app(state_dir=str(state))) as c2:
        assert c2.get(f"/sessions/{sid}").status_code == 200
