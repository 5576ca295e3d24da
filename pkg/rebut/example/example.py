import tempfile
from pathlib import Path

from rebut.api import Engine, load_config
from rebut.cli import run_all
from rebut.example.minicorpus import write_minicorpus

# we write the synthetic corpus, its word vectors and a config
# into a temporary folder
folder = Path(tempfile.mkdtemp())
config = load_config(write_minicorpus(folder))
print("Running the pipeline in", config.out_dir)

# every stage writes its outputs and a manifest into out/<stage>
# running it a second time would skip all stages as up to date
run_all(config)

# the engine loads the artifacts and rebuts new texts
with Engine.load(config) as engine:
    text = "the vaccine contains aborted fetal cells"
    # recommend fact-checked articles, the tier tells how close they are
    fc = engine.recommend(text, "fc", k=3)
    print(fc["tier"], fc["topic"])
    for item in fc["items"]:
        print("  ", round(item["score"], 3), engine.articles[item["id"]].title)

    # recommend counter tweets written by other users
    sm = engine.recommend(text, "sm", k=3)
    texts = {t.id: t.text for t in engine.pool}
    for item in sm["items"]:
        print("  ", round(item["score"], 3), texts[item["id"]])

print("The evaluation report")
print((config.out_dir / "evaluate" / "report.txt").read_text())
