from rebut.cli import configure, _parser, main
from rebut.example.minicorpus import write_minicorpus
from rebut.manifest import LOCKFILE, MANIFEST, read_json, read_jsonl
from rebut.rebuttal import BROAD, NEAR, SPECIFIC
import yaml
import pytest

STAGES = [
    "ingest",
    "fit-topics",
    "map-topics",
    "annotate",
    "recommend-sm",
    "recommend-fc",
    "evaluate",
]


@pytest.fixture
def config_file(tmp_path):
    return write_minicorpus(tmp_path)


@pytest.fixture(scope="module")
def finished(tmp_path_factory):
    "the mini corpus after a full run"
    fname = write_minicorpus(tmp_path_factory.mktemp("mini"))
    assert main(["run", "--config", str(fname)]) == 0
    return fname


def test_configure_overrides(config_file, tmp_path):
    args = _parser().parse_args(
        [
            "recommend-fc",
            "--config", str(config_file),
            "--seed", "3",
            "--k", "4",
            "--threshold", "0.5",
            "--out", str(tmp_path / "elsewhere"),
            "--limit", "5",
        ]
    )
    config = configure(args)
    assert config.seed == 3
    assert config.recommend.k_counter_tweets == config.recommend.k_articles == 4
    assert config.thresholds.specific_threshold == 0.5
    assert config.out_dir == tmp_path / "elsewhere"
    assert config.recommend.limit == 5


def test_stale_upstream(config_file):
    assert main(["map-topics", "--config", str(config_file)]) == 3
    assert main(["ingest", "--config", str(config_file)]) == 0
    assert main(["annotate", "--config", str(config_file)]) == 3
    assert not (config_file.parent / "out" / LOCKFILE).exists()


def test_invalid_config(config_file):
    raw = yaml.safe_load(config_file.read_text())
    raw["lda"]["k_range"] = [1, 3]
    config_file.write_text(yaml.safe_dump(raw))
    assert main(["ingest", "--config", str(config_file)]) == 2
    config_file.write_text("colour: blue\n")
    assert main(["ingest", "--config", str(config_file)]) == 2
    assert main(["ingest", "--config", str(config_file.parent / "absent.yaml")]) == 2


def test_threshold_flag_out_of_range(config_file):
    assert main(["ingest", "--config", str(config_file), "--threshold", "2"]) == 2


def test_lock_held(config_file):
    out = config_file.parent / "out"
    out.mkdir()
    (out / LOCKFILE).write_text("1")
    assert main(["ingest", "--config", str(config_file)]) == 1


def test_malformed_corpus(config_file):
    with (config_file.parent / "tweets.jsonl").open("a") as f:
        f.write("{not json\n")
    assert main(["ingest", "--config", str(config_file)]) == 1


def test_ingest(config_file):
    assert main(["ingest", "--config", str(config_file)]) == 0
    out = config_file.parent / "out" / "ingest"
    summary = read_json(out / "summary.json")
    assert summary == {"n_tweets": 201, "n_misleading": 102, "n_articles": 50}
    manifest = read_json(out / MANIFEST)
    assert set(manifest["inputs"]) == {"paths.tweets", "paths.articles"}
    assert set(manifest["outputs"]) == {"tweets.jsonl", "articles.jsonl", "summary.json"}


# -----------------------------------------------------------------------------
@pytest.mark.slow
def test_full_run(finished):
    out = finished.parent / "out"
    for stage in STAGES:
        assert (out / stage / MANIFEST).exists()
    stats = read_json(out / "fit-topics" / "stats.json")
    assert stats["tweet_topics"]["K"] == 3
    assert stats["article_topics"]["K"] == 3
    assert len(read_json(out / "map-topics" / "mappings.json")) == 3

    sm = read_jsonl(out / "recommend-sm" / "recommendations.jsonl")
    assert len(sm) == 102
    misleading = {r["target_id"] for r in sm}
    for rec in sm:
        assert len(rec["items"]) <= 10
        assert not {i["id"] for i in rec["items"]} & misleading
        scores = [i["score"] for i in rec["items"]]
        assert scores == sorted(scores, reverse=True)

    fc = read_jsonl(out / "recommend-fc" / "recommendations.jsonl")
    assert len(fc) == 102
    assert {r["tier"] for r in fc} == {SPECIFIC, NEAR, BROAD}
    assert all(len(r["items"]) <= 15 for r in fc)

    report = (out / "evaluate" / "report.txt").read_text().splitlines()
    assert [line.split()[0] for line in report] == ["approach", "REBUT_SM", "REBUT_FC"]
    assert len(report[0].split()) == 11
    rows = read_json(out / "evaluate" / "report.json")
    assert [(r["approach"], r["name"]) for r in rows] == [("sm", "REBUT_SM"), ("fc", "REBUT_FC")]
    for row in rows:
        assert all(0.0 <= v <= 1.0 for v in row["metrics"].values())


@pytest.mark.slow
def test_rerun_is_up_to_date(finished):
    out = finished.parent / "out"
    before = {s: (out / s / MANIFEST).stat().st_mtime_ns for s in STAGES}
    assert main(["run", "--config", str(finished)]) == 0
    assert before == {s: (out / s / MANIFEST).stat().st_mtime_ns for s in STAGES}


@pytest.mark.slow
def test_runs_are_byte_identical(finished, tmp_path):
    again = write_minicorpus(tmp_path)
    assert main(["run", "--config", str(again)]) == 0
    first, second = finished.parent / "out", tmp_path / "out"
    files = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    assert files
    assert files == sorted(p.relative_to(second) for p in second.rglob("*") if p.is_file())
    for f in files:
        assert (first / f).read_bytes() == (second / f).read_bytes(), f
