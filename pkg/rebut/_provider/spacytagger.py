from typing import Any, List, Optional

from rebut._provider.base import BaseTagger, TaggedSpan


class SpacyTagger(BaseTagger):
    """Base entity tagger over a spaCy pipeline

    spaCy is optional and only imported on :meth:`connect`.
    """

    def __init__(self, model: str = "en_core_web_sm"):
        self.name = model
        self._nlp: Optional[Any] = None

    def connect(self) -> int:
        import spacy

        self._nlp = spacy.load(self.name, disable=["parser", "lemmatizer"])
        return super().connect()

    def disconnect(self):
        self._nlp = None
        super().disconnect()

    def tag(self, text: str) -> List[TaggedSpan]:
        if self._nlp is None:
            raise ConnectionError("The spaCy pipeline is not loaded, connect first")
        doc = self._nlp(text)
        return [(ent.start_char, ent.end_char, ent.label_) for ent in doc.ents]
