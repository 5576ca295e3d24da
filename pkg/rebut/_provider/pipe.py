"""Line protocol for sentence-pair scorers running in a child process

A request is a header line followed by both texts as UTF-8 with their byte
lengths announced in the header, each text terminated by a newline::

    SCORE <len_a> <len_b>\\n<textA>\\n<textB>\\n

and the reply is ``OK <float>\\n`` with six decimals, or ``ERR <reason>\\n``.
``QUIT\\n`` ends the session.
"""
import logging
import subprocess
from typing import BinaryIO, Optional, Sequence, Tuple

from rebut._provider.base import SentencePairScorer

log = logging.getLogger(__name__)


class ProtocolError(RuntimeError):
    pass


def encode_request(a: str, b: str) -> bytes:
    ba, bb = a.encode("utf-8"), b.encode("utf-8")
    return b"SCORE %d %d\n" % (len(ba), len(bb)) + ba + b"\n" + bb + b"\n"


def encode_reply(value: float) -> bytes:
    return b"OK %.6f\n" % value


def decode_reply(line: bytes) -> float:
    parts = line.strip().split(b" ", 1)
    if len(parts) == 2 and parts[0] == b"OK":
        return float(parts[1])
    if parts and parts[0] == b"ERR":
        raise ProtocolError(line[4:].strip().decode("utf-8", "replace"))
    raise ProtocolError(f"Unexpected reply {line!r}")


def _read_text(stream: BinaryIO, n: int) -> str:
    data = stream.read(n)
    if len(data) != n or stream.read(1) != b"\n":
        raise ProtocolError("Truncated request")
    return data.decode("utf-8")


def read_request(stream: BinaryIO) -> Optional[Tuple[str, str]]:
    """read one request, None at the end of the session

    raises
    ------
    ProtocolError
        if the header or the texts are malformed
    """
    header = stream.readline()
    if not header or header.strip() == b"QUIT":
        return None
    parts = header.split()
    if len(parts) != 3 or parts[0] != b"SCORE":
        raise ProtocolError(f"Malformed header {header!r}")
    try:
        la, lb = int(parts[1]), int(parts[2])
    except ValueError:
        raise ProtocolError(f"Malformed header {header!r}")
    if la < 0 or lb < 0:
        raise ProtocolError(f"Malformed header {header!r}")
    return _read_text(stream, la), _read_text(stream, lb)


class SubprocessScorer(SentencePairScorer):
    """Scores text pairs with a child process speaking the line protocol

    .. code-block:: python

       cmd = [sys.executable, "-m", "rebut._provider.lineserver", "--vectors", path]
       with SubprocessScorer(cmd) as scorer:
           scorer.score("a text", "another text")

    The pipe carries one request at a time, calls must be serialized.
    """

    reentrant = False

    def __init__(self, command: Sequence[str], name: str = "subprocess"):
        self.command = list(command)
        self.name = name
        self._process: Optional[subprocess.Popen] = None

    def connect(self) -> int:
        self._process = subprocess.Popen(
            self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE
        )
        log.info("Started scorer process %d", self._process.pid)
        return super().connect()

    def disconnect(self):
        if self._process is not None:
            try:
                assert self._process.stdin is not None
                self._process.stdin.write(b"QUIT\n")
                self._process.stdin.close()
                self._process.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):  # pragma no cover
                self._process.kill()
            self._process = None
        super().disconnect()

    def score(self, a: str, b: str) -> float:
        if self._process is None:
            raise ConnectionError("The scorer process is not running, connect first")
        stdin, stdout = self._process.stdin, self._process.stdout
        assert stdin is not None and stdout is not None
        stdin.write(encode_request(a, b))
        stdin.flush()
        return decode_reply(stdout.readline())
