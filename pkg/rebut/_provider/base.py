import threading
from abc import ABC, abstractmethod
from typing import List, Tuple

#: (start, end, label), character offsets into the tagged text
TaggedSpan = Tuple[int, int, str]


class Provider(ABC):
    """Implements the `with` syntax for connecting to an external scorer or tagger

    .. code-block:: python

       with TransformerScorer() as scorer:
           scorer.score("a text", "another text")

    which is roughly equivalent to

    .. code-block:: python

       scorer = TransformerScorer()
       try:
           scorer.connect()
           scorer.score("a text", "another text")
       finally:
           scorer.disconnect()

    Providers that are not safe for concurrent callers set ``reentrant`` to
    False, callers then serialize on :attr:`lock`.
    """

    name: str = "provider"
    reentrant: bool = True
    connected: bool = False

    def connect(self) -> int:
        "connect with the provider, returns 0 on success"
        self.connected = True
        return 0

    def disconnect(self):
        "release the provider"
        self.connected = False

    @property
    def lock(self) -> threading.Lock:
        return self.__dict__.setdefault("_lock", threading.Lock())

    def __enter__(self):
        err = self.connect()
        if err == 0:
            return self
        else:  # pragma no cover
            raise ConnectionRefusedError(f"{self.name}: {err}")

    def __exit__(self, type, value, tb):
        self.disconnect()

    def __repr__(self):
        state = "connected" if self.connected else "disconnected"
        return f"<{type(self).__name__} {self.name!r} ({state}) at {hex(id(self))}>"


class SentencePairScorer(Provider):
    "scores the similarity of two texts in [-1, 1]"

    @abstractmethod
    def score(self, a: str, b: str) -> float:  # pragma no cover
        pass


class BaseTagger(Provider):
    "detects entity spans in a text"

    @abstractmethod
    def tag(self, text: str) -> List[TaggedSpan]:  # pragma no cover
        pass
