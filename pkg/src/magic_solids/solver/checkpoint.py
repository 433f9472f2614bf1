"""Shard-granular checkpoints: JSON, counts as decimal strings."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

FORMAT_VERSION = 1

PENDING, RUNNING, DONE = "pending", "running", "done"


class CheckpointError(RuntimeError):
    pass


@dataclass
class SearchShard:
    id: int
    prefix: tuple[tuple[int, int], ...]
    status: str = PENDING
    count: int = 0
    pinned: int = 0
    nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "count": str(self.count),
            "pinned": str(self.pinned),
            "nodes": str(self.nodes),
            "prefix": [list(p) for p in self.prefix],
        }


@dataclass
class Checkpoint:
    fingerprint: str
    shard_depth: int
    shards: list[SearchShard] = field(default_factory=list)
    version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "fingerprint": self.fingerprint,
            "shard_depth": self.shard_depth,
            "shards": [s.to_dict() for s in self.shards],
        }


def checkpoint_save(checkpoint: Checkpoint, path: str | os.PathLike) -> None:
    """Write atomically; running shards are recorded as pending."""
    doc = checkpoint.to_dict()
    for s in doc["shards"]:
        if s["status"] == RUNNING:
            s["status"] = PENDING
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, separators=(",", ":"))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def checkpoint_load(path: str | os.PathLike, fingerprint: str | None = None,
                    shard_depth: int | None = None) -> Checkpoint:
    try:
        with open(path) as fh:
            doc = json.load(fh)
        version = doc["version"]
        shards = [
            SearchShard(
                id=int(s["id"]),
                prefix=tuple(tuple(p) for p in s.get("prefix", [])),
                status=s["status"],
                count=int(s["count"]),
                pinned=int(s.get("pinned", "0")),
                nodes=int(s.get("nodes", "0")),
            )
            for s in doc["shards"]
        ]
        ckpt = Checkpoint(doc["fingerprint"], int(doc["shard_depth"]), shards, version)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc
    if version != FORMAT_VERSION:
        raise CheckpointError(f"checkpoint version {version} unsupported (want {FORMAT_VERSION})")
    if fingerprint is not None and ckpt.fingerprint != fingerprint:
        raise CheckpointError("checkpoint belongs to a different problem (fingerprint mismatch)")
    if shard_depth is not None and ckpt.shard_depth != shard_depth:
        raise CheckpointError(f"checkpoint shard depth {ckpt.shard_depth} != requested {shard_depth}")
    for s in ckpt.shards:
        if s.status == RUNNING:
            s.status = PENDING
    return ckpt
