from rebut.install import VECTORPATH, download_vectors
from rebut.similarity import load_word_vectors
import pytest


def test_download_rejects_unknown_dimension():
    with pytest.raises(ValueError):
        download_vectors(64)


@pytest.mark.install
def test_download_vectors():
    if VECTORPATH.exists():
        VECTORPATH.unlink()
    assert VECTORPATH.exists() == False
    assert download_vectors(50) == VECTORPATH
    table = load_word_vectors(VECTORPATH)
    assert table.dimension == 50
    assert "vaccine" in table
