from rebut._provider.mock import StubScorer
from rebut.cli import main
from rebut.config import load_config
from rebut.engine import ArtifactsMissing, Engine
from rebut.example.minicorpus import write_minicorpus
from rebut.rebuttal import SPECIFIC
from rebut.serve import create_app
from fastapi.testclient import TestClient
import pytest

ABORTED = "the vaccine contains aborted fetal cells"


@pytest.fixture(scope="module")
def config(tmp_path_factory):
    fname = write_minicorpus(tmp_path_factory.mktemp("served"))
    assert main(["run", "--config", str(fname)]) == 0
    return load_config(fname)


@pytest.fixture
def unfinished(tmp_path):
    return load_config(write_minicorpus(tmp_path))


def test_missing_artifacts(unfinished):
    with pytest.raises(ArtifactsMissing):
        Engine.load(unfinished)
    with TestClient(create_app(unfinished)) as client:
        assert client.get("/v1/health").status_code == 503
        assert client.post("/v1/rebuttal", json={"text": ABORTED}).status_code == 503
        assert client.post("/v1/rebuttal", json={"text": "  "}).status_code == 400


@pytest.mark.slow
def test_health(config):
    with TestClient(create_app(config)) as client:
        response = client.get("/v1/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert "ingest/tweets.jsonl" in body["artifacts"]
    assert "map-topics/mappings.json" in body["artifacts"]


@pytest.mark.slow
@pytest.mark.parametrize(
    "payload",
    [
        {"text": ""},
        {"text": ABORTED, "approach": "tv"},
        {"text": ABORTED, "k": 0},
        {"approach": "fc"},
    ],
)
def test_bad_requests(config, payload):
    with TestClient(create_app(config)) as client:
        assert client.post("/v1/rebuttal", json=payload).status_code == 400


@pytest.mark.slow
def test_fact_check_rebuttal(config):
    with TestClient(create_app(config)) as client:
        response = client.post("/v1/rebuttal", json={"text": ABORTED, "approach": "fc"})
    assert response.status_code == 200
    body = response.json()
    assert body["approach"] == "fc"
    assert body["tier"] == SPECIFIC
    assert body["items"][0]["id"] == "a-efficacy-known"
    assert body["items"][0]["score"] == pytest.approx(1.0)
    assert len(body["items"]) <= 15


@pytest.mark.slow
def test_counter_tweet_rebuttal(config):
    with TestClient(create_app(config)) as client:
        response = client.post("/v1/rebuttal", json={"text": ABORTED, "approach": "sm", "k": 3})
    body = response.json()
    assert body["approach"] == "sm"
    assert body["tier"] is None
    assert len(body["items"]) <= 3
    assert all(i["id"].startswith("n-") for i in body["items"])


@pytest.mark.slow
def test_engine_is_connected_while_serving(config):
    scorer = StubScorer(default=0.5)
    app = create_app(Engine.load(config, scorer))
    with TestClient(app) as client:
        assert scorer.connected
        body = client.post("/v1/rebuttal", json={"text": ABORTED, "k": 2}).json()
        assert [i["score"] for i in body["items"]] == [0.5, 0.5]
    assert not scorer.connected
