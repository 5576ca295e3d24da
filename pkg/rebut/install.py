"""Downloads and installs the 50-dimensional GloVe 6B word vectors
"""
import shutil
import urllib.request
from pathlib import Path
from zipfile import ZipFile

LIBPATH = Path(__file__).parent
VECTORPATH = LIBPATH / "bin" / "glove.6B.50d.txt"
URL = "https://nlp.stanford.edu/data/glove.6B.zip"


def download_vectors(dimension: int = 50) -> Path:
    "download the GloVe 6B release and unpack the vectors of one dimension"
    if dimension not in (50, 100, 200, 300):
        raise ValueError("GloVe 6B ships 50, 100, 200 and 300 dimensions")
    target = LIBPATH / "bin" / f"glove.6B.{dimension}d.txt"
    target.parent.mkdir(parents=True, exist_ok=True)
    fname = LIBPATH / "bin" / "glove.6B.zip"
    print("Downloading to", str(fname))
    urllib.request.urlretrieve(URL, filename=fname)
    print(". Finished")

    print(f"Unzipping the {dimension}d vectors...", end="")
    with ZipFile(fname, "r") as f:
        member = f.extract(target.name, path=str(target.parent / "unpack"))
    shutil.move(member, target)
    print(" Unzipped file to", target)

    print("Cleaning up")
    shutil.rmtree(target.parent / "unpack")
    fname.unlink()
    if not target.exists():
        raise FileNotFoundError("Word vectors were not properly installed")
    return target


if __name__ == "__main__":
    if not VECTORPATH.exists():
        download_vectors(50)
