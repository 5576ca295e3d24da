from typing import Any, Optional

from rebut._provider.base import SentencePairScorer


class TransformerScorer(SentencePairScorer):
    """Cosine similarity of sentence-transformers embeddings

    sentence-transformers is optional and only imported on :meth:`connect`.
    The model runs on a single device and is not reentrant.
    """

    reentrant = False

    def __init__(self, model: str = "all-MiniLM-L6-v2"):
        self.name = model
        self._model: Optional[Any] = None

    def connect(self) -> int:
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(self.name)
        return super().connect()

    def disconnect(self):
        self._model = None
        super().disconnect()

    def score(self, a: str, b: str) -> float:
        if self._model is None:
            raise ConnectionError("The model is not loaded, connect first")
        from sentence_transformers import util

        emb = self._model.encode([a, b], convert_to_tensor=True)
        return float(util.cos_sim(emb[0], emb[1]).item())
