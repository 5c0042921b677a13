import json
import random
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from multilabel.fairdiv import CakeSource, RentSource
from multilabel.measures import random_valuation
from multilabel.service import create_app
from multilabel.session import (
    PendingQuery,
    SessionParams,
    answers_from_transcript,
    run_session,
    scripted_answers,
)


def cake_params(k=3, resolution=4, mode="envyfree", p=None, q=None):
    return SessionParams(kind="cake", k=k, mode=mode, p=p, q=q, resolution=resolution)


class TestSessionCore:
    def test_first_query_is_pending(self):
        with pytest.raises(PendingQuery) as e:
            run_session(cake_params(), {})
        assert e.value.allowed
        assert 0 <= e.value.player < 3

    def test_scripted_run_completes(self):
        rng = random.Random(0)
        sources = [CakeSource(random_valuation(rng)) for _ in range(3)]
        params = cake_params()
        transcript = scripted_answers(params, sources)
        out = run_session(params, answers_from_transcript(transcript))
        assert out["flag"] == "resolution-limited"
        assert out["scenarios"]
        assert len(out["division"]) == 3

    def test_replay_is_deterministic(self):
        rng = random.Random(1)
        sources = [CakeSource(random_valuation(rng)) for _ in range(3)]
        params = cake_params()
        transcript = scripted_answers(params, sources)
        a = run_session(params, answers_from_transcript(transcript))
        b = run_session(params, answers_from_transcript(transcript))
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_rent_session(self):
        sources = [RentSource([10, 6]), RentSource([5, 9]), RentSource([7, 7])]
        params = SessionParams(kind="rent", k=3, resolution=4, total_rent=Fraction(12))
        transcript = scripted_answers(params, sources)
        out = run_session(params, answers_from_transcript(transcript))
        assert len(out["prices"]) == 2
        assert len(out["scenarios"]) == 3

    def test_survivor_session(self):
        rng = random.Random(2)
        sources = [CakeSource(random_valuation(rng)) for _ in range(3)]
        params = cake_params(mode="survivor", q=2)
        transcript = scripted_answers(params, sources)
        out = run_session(params, answers_from_transcript(transcript))
        assert len(out["division"]) == 2
        assert len(out["scenarios"]) == 3


class TestService:
    def make_client(self, tmp_path):
        app = create_app(str(tmp_path / "store"))
        return TestClient(app)

    def create(self, client, **kwargs):
        body = {
            "kind": "cake",
            "players": ["alice", "bob", "carol"],
            "mode": "envyfree",
            "resolution": 4,
        }
        body.update(kwargs)
        res = client.post("/sessions", json=body)
        assert res.status_code == 200, res.text
        return res.json()["id"]

    def test_create_and_query(self, tmp_path):
        client = self.make_client(tmp_path)
        sid = self.create(client)
        q = client.get(f"/sessions/{sid}/query").json()
        assert q["state"] == "awaiting_answer"
        assert set(q["query"]) >= {"player", "division", "allowed", "query_index"}

    def test_bad_params_rejected(self, tmp_path):
        client = self.make_client(tmp_path)
        res = client.post(
            "/sessions", json={"kind": "cake", "players": [], "resolution": 4}
        )
        assert res.status_code == 422
        res = client.post(
            "/sessions",
            json={"kind": "cake", "players": ["a"], "mode": "secretive", "p": 0},
        )
        assert res.status_code == 422

    def test_unknown_session(self, tmp_path):
        client = self.make_client(tmp_path)
        assert client.get("/sessions/nope/query").status_code == 404

    def test_answer_flow_and_errors(self, tmp_path):
        client = self.make_client(tmp_path)
        sid = self.create(client)
        q = client.get(f"/sessions/{sid}/query").json()["query"]
        wrong_player = (q["player"] + 1) % 3
        res = client.post(
            f"/sessions/{sid}/answer", json={"player": wrong_player, "piece": q["allowed"][0]}
        )
        assert res.status_code == 409
        assert res.json()["detail"]["error"] == "wrong_player"
        res = client.post(
            f"/sessions/{sid}/answer", json={"player": q["player"], "piece": -5}
        )
        assert res.status_code == 422
        assert res.json()["detail"]["error"] == "piece_not_allowed"
        res = client.post(
            f"/sessions/{sid}/answer",
            json={"player": q["player"], "piece": q["allowed"][0], "query_index": 99},
        )
        assert res.status_code == 409
        assert res.json()["detail"]["error"] == "stale_query"
        res = client.post(
            f"/sessions/{sid}/answer", json={"player": q["player"], "piece": q["allowed"][0]}
        )
        assert res.status_code == 200
        # duplicate replay is a no-op
        res = client.post(
            f"/sessions/{sid}/answer",
            json={"player": q["player"], "piece": q["allowed"][0], "query_index": 0},
        )
        assert res.status_code == 200
        assert res.json()["state"] == "duplicate"
        assert len(client.get(f"/sessions/{sid}/transcript").json()) == 1

    def drive(self, client, sid, sources, kind="cake"):
        for _ in range(10000):
            state = client.get(f"/sessions/{sid}/query").json()
            if state["state"] == "done":
                return state["outcome"]
            q = state["query"]
            src = sources[q["player"]]
            values = [
                Fraction(a, b) for a, b in q.get("division", q.get("prices"))
            ]
            if kind == "cake":
                from multilabel.fairdiv import Division

                answer = src.preferred(Division(tuple(values)), q["allowed"])
            else:
                answer = src.preferred_room(tuple(values), q["allowed"])
            res = client.post(
                f"/sessions/{sid}/answer",
                json={
                    "player": q["player"],
                    "piece": answer,
                    "query_index": q["query_index"],
                },
            )
            assert res.status_code == 200, res.text
        raise AssertionError("session did not converge")

    def test_http_scripted_equals_in_process(self, tmp_path):
        rng = random.Random(3)
        sources = [CakeSource(random_valuation(rng)) for _ in range(3)]
        client = self.make_client(tmp_path)
        sid = self.create(client)
        via_http = self.drive(client, sid, sources)
        params = cake_params()
        transcript = scripted_answers(params, sources)
        in_process = run_session(params, answers_from_transcript(transcript))
        assert json.dumps(via_http, sort_keys=True) == json.dumps(
            in_process, sort_keys=True
        )
        result = client.get(f"/sessions/{sid}/result").json()
        assert json.dumps(result, sort_keys=True) == json.dumps(
            in_process, sort_keys=True
        )

    def test_restart_replays_persisted_state(self, tmp_path):
        rng = random.Random(4)
        sources = [CakeSource(random_valuation(rng)) for _ in range(3)]
        store = str(tmp_path / "store")
        client = TestClient(create_app(store))
        sid = self.create(client)
        outcome = self.drive(client, sid, sources)
        # new process over the same store
        client2 = TestClient(create_app(store))
        res = client2.get(f"/sessions/{sid}/result")
        assert res.status_code == 200
        assert json.dumps(res.json(), sort_keys=True) == json.dumps(
            outcome, sort_keys=True
        )

    def test_result_before_done_conflicts(self, tmp_path):
        client = self.make_client(tmp_path)
        sid = self.create(client)
        assert client.get(f"/sessions/{sid}/result").status_code == 409
