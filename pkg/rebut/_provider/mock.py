"""Stub providers for testing and offline development"""
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from rebut._provider.base import BaseTagger, SentencePairScorer, TaggedSpan


class StubScorer(SentencePairScorer):
    """Returns pinned scores for known text pairs

    args
    ----
    scores: Mapping[Tuple[str, str], float]
        pinned scores, looked up in both orders
    default: float = 0.0
        the score of any other pair
    fallback: Optional[Callable[[str, str], float]]
        computes the score of unknown pairs instead of the default
    """

    name = "stub"

    def __init__(
        self,
        scores: Optional[Mapping[Tuple[str, str], float]] = None,
        default: float = 0.0,
        fallback: Optional[Callable[[str, str], float]] = None,
        reentrant: bool = True,
    ):
        self.scores: Dict[Tuple[str, str], float] = dict(scores or {})
        self.default = default
        self.fallback = fallback
        self.reentrant = reentrant
        self.calls: List[Tuple[str, str]] = []

    def score(self, a: str, b: str) -> float:
        self.calls.append((a, b))
        for key in ((a, b), (b, a)):
            if key in self.scores:
                return self.scores[key]
        if self.fallback is not None:
            return self.fallback(a, b)
        return self.default


class StubTagger(BaseTagger):
    """Tags every occurrence of the given surfaces, case-sensitive

    Mimics a statistical tagger that mislabels domain terms, e.g.
    ``StubTagger({"Pfizer": "ORG"})``.
    """

    name = "stub"

    def __init__(self, surfaces: Optional[Mapping[str, str]] = None):
        self.surfaces = dict(surfaces or {})

    def tag(self, text: str) -> List[TaggedSpan]:
        spans = []
        for surface, label in self.surfaces.items():
            start = text.find(surface)
            while start != -1:
                spans.append((start, start + len(surface), label))
                start = text.find(surface, start + len(surface))
        return sorted(spans)


class NullTagger(BaseTagger):
    "finds nothing, the default base tagger"

    name = "null"

    def tag(self, text: str) -> List[TaggedSpan]:
        return []


def pinned(pairs: Sequence[Tuple[str, str, float]], default: float = 0.0) -> StubScorer:
    "a stub scorer from (text, text, score) triples"
    return StubScorer({(a, b): s for a, b, s in pairs}, default=default)
