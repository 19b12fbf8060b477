"""On-disk cache of enumerated groups and their Cayley presentations.

File layout: 8-byte magic ``COHOMLAB``, little-endian uint32 format version,
32-byte SHA-256 of the payload, then the payload (zlib-compressed JSON).
A file that fails any check is rebuilt with a warning, never reused.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import CohomlabError
from .field import check_odd_prime_power, make_field
from .matgroup import PSL, SL, GroupAtlas, _matrix_ops, build_group
from .presentation import Presentation, Word, relators_from_cayley

log = logging.getLogger(__name__)

MAGIC = b"COHOMLAB"
VERSION = 1
HEADER = "cohomlab-cache v1"
ENV_VAR = "COHOMLAB_CACHE_DIR"
_PREFIX = struct.Struct("<8sI32s")


class CacheError(CohomlabError):
    pass


def cache_dir_from(flag: str | None) -> Path | None:
    """The flag wins over the environment variable."""
    value = flag if flag else os.environ.get(ENV_VAR)
    return Path(value) if value else None


def cache_path(directory: Path, q: int, kind: str) -> Path:
    return Path(directory) / f"{'psl2' if kind == PSL else 'sl2'}_{q}.cache"


def encode(atlas: GroupAtlas, pres: Presentation | None = None) -> bytes:
    payload = {
        "header": HEADER,
        "q": atlas.q,
        "kind": atlas.kind,
        "elements": [list(m) for m in atlas.elements],
        "generators": list(atlas.generators),
        "gen_images": atlas.gen_images.tolist(),
        "bfs_parent": atlas.parent.tolist(),
    }
    if pres is not None:
        payload["relators"] = [[[x, int(inv)] for x, inv in r.letters] for r in pres.relators]
        payload["relator_edges"] = pres.edges.tolist()
    body = zlib.compress(json.dumps(payload, separators=(",", ":"), sort_keys=True).encode(), 6)
    return _PREFIX.pack(MAGIC, VERSION, hashlib.sha256(body).digest()) + body


def decode(data: bytes) -> tuple[GroupAtlas, Presentation | None]:
    if len(data) < _PREFIX.size:
        raise CacheError("file is truncated")
    magic, version, digest = _PREFIX.unpack_from(data)
    if magic != MAGIC:
        raise CacheError("bad magic")
    if version != VERSION:
        raise CacheError(f"unsupported cache version {version}")
    body = data[_PREFIX.size:]
    if hashlib.sha256(body).digest() != digest:
        raise CacheError("checksum mismatch")
    try:
        payload = json.loads(zlib.decompress(body))
    except (zlib.error, ValueError) as exc:
        raise CacheError(f"unreadable payload: {exc}") from exc
    if payload.get("header") != HEADER:
        raise CacheError("header mismatch")
    q, kind = payload["q"], payload["kind"]
    check_odd_prime_power(q)
    f = make_field(q)
    mul, inv = _matrix_ops(f, kind)
    elements = [tuple(m) for m in payload["elements"]]
    atlas = GroupAtlas(
        kind=kind,
        elements=elements,
        generators=payload["generators"],
        gen_images=np.array(payload["gen_images"], dtype=np.int64).reshape(len(elements), -1),
        parent=np.array(payload["bfs_parent"], dtype=np.int64),
        mul_key=mul,
        inv_key=inv,
        q=q,
        gf=f,
    )
    pres = None
    if "relators" in payload:
        relators = [Word(tuple((x, bool(i)) for x, i in r)) for r in payload["relators"]]
        pres = Presentation(atlas, relators, np.array(payload["relator_edges"], dtype=np.int64).reshape(-1, 3))
    return atlas, pres


def write(path: Path, atlas: GroupAtlas, pres: Presentation | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(encode(atlas, pres))
    tmp.replace(path)


def read(path: Path) -> tuple[GroupAtlas, Presentation | None]:
    return decode(Path(path).read_bytes())


def build(q: int, kind: str) -> tuple[GroupAtlas, Presentation | None]:
    atlas = build_group(q, kind)
    return atlas, relators_from_cayley(atlas) if kind == PSL else None


def load_or_build(directory: Path, q: int, kind: str) -> tuple[GroupAtlas, Presentation | None]:
    """Load the cached group, rebuilding (with a warning) when the file is missing or corrupt."""
    path = cache_path(directory, q, kind)
    if path.exists():
        try:
            atlas, pres = read(path)
            if atlas.q == q and atlas.kind == kind:
                return atlas, pres
            log.warning("cache file %s describes the wrong group; rebuilding", path)
        except (CacheError, KeyError, TypeError, ValueError) as exc:
            log.warning("cache file %s is corrupt (%s); rebuilding", path, exc)
    atlas, pres = build(q, kind)
    write(path, atlas, pres)
    return atlas, pres


def clear(directory: Path) -> int:
    n = 0
    for p in Path(directory).glob("*.cache"):
        p.unlink()
        n += 1
    return n


def inspect(path: Path) -> dict:
    atlas, pres = read(path)
    return {
        "q": atlas.q,
        "kind": atlas.kind,
        "order": atlas.order,
        "generators": atlas.ngens,
        "relators": pres.nrel if pres is not None else None,
    }


__all__ = ["SL", "PSL", "CacheError", "cache_path", "load_or_build", "read", "write", "clear", "inspect"]
