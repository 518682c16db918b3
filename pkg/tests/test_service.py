"""Endpoint behaviour of the HTTP service."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from conftest import nsid
from wnforge.model import PartOfSpeech, Sense, Status, WordForm
from wnforge.query import ResourceRegistry
from wnforge.service import build_schema, create_app

NOUN = PartOfSpeech.NOUN
ACTOR = {"X-Actor": "maria"}

EXPECTED_PATHS = {
    "/api/consult",
    "/api/edits/{entity}",
    "/api/history",
    "/api/languages",
    "/api/links/generate",
    "/api/promote",
    "/api/report/class-methods",
    "/api/resources/{resource_id}/{headword}",
    "/api/synsets/{key}",
    "/api/validate/samples",
    "/api/validate/verdicts",
    "/api/verbs/generate",
}


@pytest.fixture
def client(mini, tmp_path):
    data = tmp_path / "dec.tsv"
    data.write_text("casa\tf. Edifici per a habitar.\n", encoding="utf-8")
    config = tmp_path / "resources.tsv"
    config.write_text(f"dec-ca\t{data}\n", encoding="utf-8")
    frontend = tmp_path / "console"
    frontend.mkdir()
    (frontend / "index.html").write_text("<!doctype html><h1>console</h1>\n")
    app = create_app(
        mini, resources=ResourceRegistry.load(config), frontend_dir=frontend
    )
    with TestClient(app) as tc:
        yield tc


def generate_noun_links(client) -> None:
    response = client.post(
        "/api/links/generate",
        json={
            "source_lang": "ca",
            "pairs": [["gos", "dog"], ["gat", "cat"]],
            "senses": [["dog", "n-dog-1"], ["cat", "n-cat-1"]],
        },
        headers=ACTOR,
    )
    assert response.status_code == 200, response.text
    assert response.json() == {"generated": 2, "by_method": {"mono1": 2}}


class TestConsultEndpoints:
    def test_languages(self, client):
        body = client.get("/api/languages").json()
        assert body["policy"] == "pivot"
        assert {"code": "en", "pivot": True} in body["languages"]
        assert {"code": "ca", "pivot": False} in body["languages"]

    def test_synset_shape(self, client):
        body = client.get("/api/synsets/n-dog-1").json()
        assert body["key"] == "n-dog-1"
        assert body["pos"] == "noun"
        assert body["base"] is False
        assert body["glosses"]["en"] == "a domesticated canine"
        assert body["gloss_versions"] == {"en": 0, "ca": 0}
        assert body["relations"] == [
            {"kind": "hypernymy", "target": "n-animal-1"}
        ]

    def test_base_flag(self, client):
        assert client.get("/api/synsets/n-entity-1").json()["base"] is True

    def test_synset_404(self, client):
        assert client.get("/api/synsets/n-ghost-9").status_code == 404

    def test_consult_tree(self, client):
        body = client.get(
            "/api/consult",
            params={"lang": "ca", "start": "n-dog-1", "relation": "hypernymy"},
        ).json()
        assert body["depth"] == 3
        root = body["roots"][0]
        assert root["synset"] == "n-dog-1"
        assert root["children"][0]["synset"] == "n-animal-1"
        assert root["children"][0]["children"][0]["synset"] == "n-entity-1"

    def test_consult_unknown_start(self, client):
        response = client.get(
            "/api/consult",
            params={"lang": "ca", "start": "zzz", "relation": "hypernymy"},
        )
        assert response.status_code == 404

    def test_consult_unknown_relation(self, client):
        response = client.get(
            "/api/consult",
            params={"lang": "ca", "start": "n-dog-1", "relation": "synonymy"},
        )
        assert response.status_code == 422

    def test_resource_lookup(self, client):
        body = client.get("/api/resources/dec-ca/CASA").json()
        assert body["entries"] == ["casa\tf. Edifici per a habitar."]

    def test_resource_unknown(self, client):
        assert client.get("/api/resources/nope/casa").status_code == 404

    def test_report_covers_all_methods(self, client):
        rows = client.get("/api/report/class-methods").json()["rows"]
        assert [r["method"] for r in rows] == [
            "mono1", "mono2", "mono3", "mono4",
            "poly1", "poly2", "poly3", "poly4", "variant",
        ]
        assert all(r["links"] == 0 for r in rows)

    def test_history_pagination(self, client):
        full = client.get("/api/history").json()
        assert full["total"] == 2
        assert full["limit"] == 200
        assert [r["subject"] for r in full["records"]] == [
            "kb:languages", "kb:synsets:en",
        ]
        page = client.get("/api/history", params={"offset": 1, "limit": 1}).json()
        assert page["total"] == 2
        assert len(page["records"]) == 1
        assert page["records"][0]["seq"] == 2

    def test_history_actor_filter(self, client):
        body = client.get("/api/history", params={"actor": "nobody"}).json()
        assert body["total"] == 0


class TestGenerationEndpoints:
    def test_links_generate_inline(self, client):
        generate_noun_links(client)

    def test_links_generate_requires_actor(self, client):
        response = client.post(
            "/api/links/generate", json={"source_lang": "ca"}
        )
        assert response.status_code == 400

    def test_links_generate_requires_inputs(self, client):
        response = client.post(
            "/api/links/generate", json={"source_lang": "ca"}, headers=ACTOR
        )
        assert response.status_code == 422

    def test_links_generate_unknown_sense_key(self, client):
        response = client.post(
            "/api/links/generate",
            json={
                "source_lang": "ca",
                "pairs": [["gos", "dog"]],
                "senses": [["dog", "n-ghost-9"]],
            },
            headers=ACTOR,
        )
        assert response.status_code == 422

    def test_verbs_generate(self, client, tmp_path):
        verbs = tmp_path / "verbs.tsv"
        verbs.write_text("run\tR51.3.2\tca:córrer\n", encoding="utf-8")
        senses = tmp_path / "senses.tsv"
        senses.write_text("run\tR51.3.2\tv-run-1\n", encoding="utf-8")
        response = client.post(
            "/api/verbs/generate",
            json={
                "target_lang": "ca",
                "verbs_path": str(verbs),
                "senses_path": str(senses),
            },
            headers=ACTOR,
        )
        assert response.status_code == 200, response.text
        assert response.json() == {"generated": 1, "warnings": []}


class TestValidationEndpoints:
    def test_sample_draw_and_refetch(self, client):
        generate_noun_links(client)
        drawn = client.post(
            "/api/validate/samples",
            json={"method": "mono1", "size": 2, "seed": 5},
            headers=ACTOR,
        ).json()
        assert drawn["size"] == 2
        assert drawn["done"] == 0
        assert {row["id"] for row in drawn["links"]} == {
            "mono1:ca:gat:cat:n-cat-1", "mono1:ca:gos:dog:n-dog-1",
        }
        assert all(row["verdict"] is None for row in drawn["links"])
        refetched = client.post(
            "/api/validate/samples", json={"method": "mono1"}, headers=ACTOR
        ).json()
        assert refetched == drawn

    def test_sample_fetch_without_draw(self, client):
        generate_noun_links(client)
        response = client.post(
            "/api/validate/samples", json={"method": "mono2"}, headers=ACTOR
        )
        assert response.status_code == 404

    def test_sample_of_empty_method(self, client):
        response = client.post(
            "/api/validate/samples",
            json={"method": "poly4", "seed": 1},
            headers=ACTOR,
        )
        assert response.status_code == 422

    def test_verdicts_reach_confidence(self, client):
        generate_noun_links(client)
        client.post(
            "/api/validate/samples",
            json={"method": "mono1", "size": 2, "seed": 5},
            headers=ACTOR,
        )
        first = client.post(
            "/api/validate/verdicts",
            json={"link": "mono1:ca:gos:dog:n-dog-1", "verdict": "correct"},
            headers=ACTOR,
        ).json()
        assert first["done"] == 1 and first["size"] == 2
        assert "confidence" not in first
        second = client.post(
            "/api/validate/verdicts",
            json={"link": "mono1:ca:gat:cat:n-cat-1", "verdict": "correct"},
            headers=ACTOR,
        ).json()
        assert second["done"] == 2
        assert second["confidence"] == 100.0

    def test_verdict_outside_sample(self, client):
        generate_noun_links(client)
        response = client.post(
            "/api/validate/verdicts",
            json={"link": "mono1:ca:gos:dog:n-dog-1", "verdict": "correct"},
            headers=ACTOR,
        )
        assert response.status_code == 422

    def test_promote_accepts_validated_method(self, client):
        generate_noun_links(client)
        client.post(
            "/api/validate/samples",
            json={"method": "mono1", "size": 2, "seed": 5},
            headers=ACTOR,
        )
        for lid in ("mono1:ca:gos:dog:n-dog-1", "mono1:ca:gat:cat:n-cat-1"):
            client.post(
                "/api/validate/verdicts",
                json={"link": lid, "verdict": "correct"},
                headers=ACTOR,
            )
        body = client.post("/api/promote", headers=ACTOR).json()
        assert body == {"threshold": 85.0, "promoted": ["mono1"], "rejected": []}
        synset = client.get("/api/synsets/n-dog-1").json()
        assert synset["senses"]["ca"] == [
            {"lemma": "gos", "method": "mono1",
             "reliability": 100.0, "status": "accepted"}
        ]


class TestEditEndpoints:
    def test_gloss_edit_bumps_version(self, client):
        response = client.put(
            "/api/edits/gloss:ca:n-dog-1",
            json={"expected_version": 0, "text": "mamífer domèstic"},
            headers=ACTOR,
        )
        assert response.status_code == 200
        body = response.json()
        assert body["action"] == "edit_gloss"
        assert body["version"] == 1
        synset = client.get("/api/synsets/n-dog-1").json()
        assert synset["glosses"]["ca"] == "mamífer domèstic"
        assert synset["gloss_versions"]["ca"] == 1

    def test_stale_edit_conflicts(self, client):
        client.put(
            "/api/edits/gloss:ca:n-dog-1",
            json={"expected_version": 0, "text": "primer"},
            headers=ACTOR,
        )
        response = client.put(
            "/api/edits/gloss:ca:n-dog-1",
            json={"expected_version": 0, "text": "segon"},
            headers=ACTOR,
        )
        assert response.status_code == 409
        body = response.json()
        assert body["entity"] == "gloss:ca:n-dog-1"
        assert body["current_version"] == 1

    def test_pivot_gloss_is_immutable(self, client):
        response = client.put(
            "/api/edits/gloss:en:n-dog-1",
            json={"expected_version": 0, "text": "nope"},
            headers=ACTOR,
        )
        assert response.status_code == 422

    def test_gloss_unknown_synset(self, client):
        response = client.put(
            "/api/edits/gloss:ca:n-ghost-9",
            json={"expected_version": 0, "text": "x"},
            headers=ACTOR,
        )
        assert response.status_code == 404

    def test_gloss_requires_text(self, client):
        response = client.put(
            "/api/edits/gloss:ca:n-dog-1",
            json={"expected_version": 0},
            headers=ACTOR,
        )
        assert response.status_code == 422

    def test_unknown_entity_kind(self, client):
        response = client.put(
            "/api/edits/frobnicate:x",
            json={"expected_version": 0},
            headers=ACTOR,
        )
        assert response.status_code == 422

    def test_edit_requires_actor(self, client):
        response = client.put(
            "/api/edits/gloss:ca:n-dog-1",
            json={"expected_version": 0, "text": "x"},
        )
        assert response.status_code == 400

    def test_word_rename(self, client, mini):
        mini.add_sense(
            Sense(WordForm("ca", "bitxo", NOUN), nsid("n-cat-1"),
                  method="manual", status=Status.ACCEPTED),
            actor="setup",
        )
        response = client.put(
            "/api/edits/word:ca:noun:bitxo",
            json={"expected_version": 0, "new_lemma": "bestiola"},
            headers=ACTOR,
        )
        assert response.status_code == 200, response.text
        synset = client.get("/api/synsets/n-cat-1").json()
        assert [s["lemma"] for s in synset["senses"]["ca"]] == ["bestiola"]

    def test_link_accept_via_edit(self, client):
        generate_noun_links(client)
        response = client.put(
            "/api/edits/link:mono1:ca:gos:dog:n-dog-1",
            json={"expected_version": 0, "status": "accepted"},
            headers=ACTOR,
        )
        assert response.status_code == 200, response.text
        synset = client.get("/api/synsets/n-dog-1").json()
        assert synset["senses"]["ca"][0]["status"] == "accepted"

    def test_link_reject_via_edit(self, client):
        generate_noun_links(client)
        response = client.put(
            "/api/edits/link:mono1:ca:gos:dog:n-dog-1",
            json={"expected_version": 0, "status": "rejected"},
            headers=ACTOR,
        )
        assert response.status_code == 200
        synset = client.get("/api/synsets/n-dog-1").json()
        assert "ca" not in synset["senses"]

    def test_link_edit_requires_status(self, client):
        generate_noun_links(client)
        response = client.put(
            "/api/edits/link:mono1:ca:gos:dog:n-dog-1",
            json={"expected_version": 0},
            headers=ACTOR,
        )
        assert response.status_code == 422


class TestLifecycle:
    def test_shutdown_snapshots_the_store(self, mini):
        # The server process dies straight from the signal handler, so the
        # snapshot must happen in the ASGI shutdown phase, not after run().
        app = create_app(mini, close_store_on_shutdown=True)
        with TestClient(app) as tc:
            response = tc.put(
                "/api/edits/gloss:ca:n-dog-1",
                json={"expected_version": 0, "text": "mamífer domèstic"},
                headers=ACTOR,
            )
            assert response.status_code == 200
        written = (mini.path / "kb.tsv").read_text(encoding="utf-8")
        assert "mamífer domèstic" in written


class TestStaticAndSchema:
    def test_console_served_at_root(self, client):
        response = client.get("/")
        assert response.status_code == 200
        assert "console" in response.text

    def test_schema_paths(self):
        schema = build_schema()
        assert set(schema["paths"]) == EXPECTED_PATHS

    def test_schema_has_no_server_state(self):
        # building the contract twice yields identical documents
        assert build_schema() == build_schema()
