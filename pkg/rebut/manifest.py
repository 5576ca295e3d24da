"""Stage manifests and the output lock

Every pipeline stage writes its outputs into ``<out>/<stage>/`` together
with a ``manifest.json`` holding the sha256 of its config section, its
inputs and its outputs. A stage whose manifest still matches is up to date,
a downstream stage refuses to read an upstream stage whose manifest is
missing or whose outputs changed since.
"""
import hashlib
import json
import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, Mapping, Optional

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"
LOCKFILE = ".lock"


class StaleUpstream(RuntimeError):
    def __init__(self, stage: str, reason: str):
        super().__init__(f"Upstream stage {stage!r} {reason}, run it first")
        self.stage = stage


class LockHeld(RuntimeError):
    pass


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_json(path: Path, data: Any):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")


def write_jsonl(path: Path, rows: Iterable[Any]):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def read_json(path: Path) -> Any:
    with path.open(encoding="utf-8") as f:
        return json.load(f)


def read_jsonl(path: Path) -> list:
    with path.open(encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


@dataclass
class Manifest:
    stage: str
    config: str
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stage": self.stage,
            "config": self.config,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }


class StageDir:
    "the output directory of one stage"

    def __init__(self, out: Path, stage: str):
        self.stage = stage
        self.root = Path(out) / stage

    def path(self, name: str) -> Path:
        return self.root / name

    def manifest(self) -> Optional[Manifest]:
        fname = self.path(MANIFEST)
        if not fname.exists():
            return None
        return Manifest(**read_json(fname))

    def changed_outputs(self, manifest: Manifest) -> list:
        return [
            name
            for name, digest in manifest.outputs.items()
            if not self.path(name).exists() or sha256_file(self.path(name)) != digest
        ]

    def verify(self) -> Manifest:
        """the manifest of an upstream stage whose outputs are intact

        raises
        ------
        StaleUpstream
        """
        manifest = self.manifest()
        if manifest is None:
            raise StaleUpstream(self.stage, "has not run")
        if self.changed_outputs(manifest):
            raise StaleUpstream(self.stage, "has changed outputs")
        return manifest

    def up_to_date(self, config: str, inputs: Mapping[str, str]) -> bool:
        manifest = self.manifest()
        if manifest is None or manifest.config != config or manifest.inputs != dict(inputs):
            return False
        return not self.changed_outputs(manifest)

    def commit(self, config: str, inputs: Mapping[str, str], outputs: Iterable[str]) -> Manifest:
        manifest = Manifest(
            self.stage,
            config,
            dict(sorted(inputs.items())),
            {name: sha256_file(self.path(name)) for name in sorted(outputs)},
        )
        write_json(self.path(MANIFEST), manifest.to_dict())
        log.info("Finished %s with %d outputs", self.stage, len(manifest.outputs))
        return manifest


def upstream_inputs(out: Path, *stages: str) -> Dict[str, str]:
    """the output hashes of intact upstream stages, keyed ``stage/name``

    raises
    ------
    StaleUpstream
    """
    inputs = {}
    for stage in stages:
        manifest = StageDir(out, stage).verify()
        for name, digest in manifest.outputs.items():
            inputs[f"{stage}/{name}"] = digest
    return inputs


@contextmanager
def lock(out: Path) -> Iterator[Path]:
    """hold the exclusive writer lock of an output tree

    raises
    ------
    LockHeld
        if another process holds it
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    fname = out / LOCKFILE
    try:
        fd = os.open(str(fname), os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise LockHeld(f"{fname} exists, another stage is writing to {out}")
    try:
        os.write(fd, str(os.getpid()).encode("ascii"))
        os.close(fd)
        yield fname
    finally:
        fname.unlink()
