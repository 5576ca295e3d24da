"""Serve the word-vector scorer over stdin/stdout

    python -m rebut._provider.lineserver --vectors glove.6B.50d.txt

"""
import argparse
import logging
import sys
from typing import BinaryIO, Optional, Sequence

from rebut._provider.base import SentencePairScorer
from rebut._provider.pipe import ProtocolError, encode_reply, read_request

log = logging.getLogger(__name__)


def serve(scorer: SentencePairScorer, stdin: BinaryIO, stdout: BinaryIO) -> int:
    """answer requests until QUIT or the end of input

    A malformed request is answered with ``ERR`` and ends the session, the
    stream cannot be resynchronized.

    returns
    -------
    handled: int
        the number of answered requests
    """
    from rebut.similarity import pair_score

    handled = 0
    while True:
        try:
            request = read_request(stdin)
        except ProtocolError as e:
            stdout.write(b"ERR " + str(e).encode("utf-8") + b"\n")
            stdout.flush()
            return handled
        if request is None:
            return handled
        stdout.write(encode_reply(pair_score(scorer, *request).score))
        stdout.flush()
        handled += 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    from rebut.install import VECTORPATH
    from rebut.similarity import WordVectorScorer, load_word_vectors
    from rebut.textprep import load_stopwords

    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--vectors", default=str(VECTORPATH))
    parser.add_argument("--stopwords", default=None)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    scorer = WordVectorScorer(load_word_vectors(args.vectors), load_stopwords(args.stopwords))
    handled = serve(scorer, sys.stdin.buffer, sys.stdout.buffer)
    log.info("Answered %d requests", handled)
    return 0


if __name__ == "__main__":  # pragma no cover
    sys.exit(main())
