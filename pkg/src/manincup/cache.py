"""On-disk cache for integer matrices.

Entry layout (little-endian):

    magic  b"MCUP"
    u16    format version
    u32    key length, then the key as canonical JSON
    u32    rows, u32 cols, u64 nnz
    nnz x u32 row indices, nnz x u32 column indices, nnz x i64 values
    32 bytes: sha256 of everything above

Entries are addressed by the hash of their key, which includes the
convention version; bumping CONVENTION_VERSION orphans old entries.
Writes go to a temporary file in the same directory and are renamed into
place, so a reader never sees a partial entry and concurrent writers leave
one valid file.  Corrupt entries are deleted and reported as misses.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

MAGIC = b"MCUP"
FORMAT_VERSION = 1
CONVENTION_VERSION = 1
ENV_VAR = "MANINCUP_CACHE"


class CacheError(OSError):
    pass


@dataclass(frozen=True)
class CacheKey:
    p: int
    N: int
    r: int
    m: int
    kind: str
    convention: int = CONVENTION_VERSION

    def canonical(self) -> bytes:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":")).encode()

    def digest(self) -> str:
        return hashlib.sha256(self.canonical()).hexdigest()


@dataclass
class CacheEntry:
    key: CacheKey
    matrix: np.ndarray
    checksum: str


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "manincup"


def encode(key: CacheKey, matrix: np.ndarray) -> bytes:
    A = np.asarray(matrix, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("only matrices are cached")
    rows, cols = np.nonzero(A)
    kb = key.canonical()
    body = b"".join([
        MAGIC,
        struct.pack("<HI", FORMAT_VERSION, len(kb)),
        kb,
        struct.pack("<IIQ", A.shape[0], A.shape[1], len(rows)),
        rows.astype("<u4").tobytes(),
        cols.astype("<u4").tobytes(),
        A[rows, cols].astype("<i8").tobytes(),
    ])
    return body + hashlib.sha256(body).digest()


def decode(data: bytes) -> tuple[dict, np.ndarray, str]:
    if len(data) < 4 + 6 + 16 + 32 or data[:4] != MAGIC:
        raise ValueError("bad magic")
    body, digest = data[:-32], data[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise ValueError("checksum mismatch")
    version, klen = struct.unpack_from("<HI", body, 4)
    if version != FORMAT_VERSION:
        raise ValueError("format version mismatch")
    pos = 10
    key = json.loads(body[pos:pos + klen])
    pos += klen
    nr, nc, nnz = struct.unpack_from("<IIQ", body, pos)
    pos += 16
    rows = np.frombuffer(body, dtype="<u4", count=nnz, offset=pos)
    pos += 4 * nnz
    cols = np.frombuffer(body, dtype="<u4", count=nnz, offset=pos)
    pos += 4 * nnz
    vals = np.frombuffer(body, dtype="<i8", count=nnz, offset=pos)
    pos += 8 * nnz
    if pos != len(body):
        raise ValueError("trailing bytes")
    A = np.zeros((nr, nc), dtype=np.int64)
    A[rows.astype(np.int64), cols.astype(np.int64)] = vals
    return key, A, digest.hex()


class Cache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.dir = Path(directory) if directory is not None else default_cache_dir()

    def path(self, key: CacheKey) -> Path:
        return self.dir / f"{key.digest()}.mcup"

    def get(self, key: CacheKey) -> CacheEntry | None:
        path = self.path(key)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise CacheError(f"cannot read cache entry for {key}: {exc}") from exc
        try:
            stored, A, digest = decode(data)
        except ValueError:
            path.unlink(missing_ok=True)
            return None
        if stored != json.loads(key.canonical()):
            path.unlink(missing_ok=True)
            return None
        return CacheEntry(key, A, digest)

    def put(self, key: CacheKey, matrix: np.ndarray) -> CacheEntry:
        data = encode(key, matrix)
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".mcup")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp, self.path(key))
            except BaseException:
                Path(tmp).unlink(missing_ok=True)
                raise
        except OSError as exc:
            raise CacheError(f"cannot write cache entry for {key}: {exc}") from exc
        return CacheEntry(key, np.asarray(matrix, dtype=np.int64), data[-32:].hex())

    def get_or_compute(self, key: CacheKey, compute) -> np.ndarray:
        entry = self.get(key)
        if entry is not None:
            return entry.matrix
        A = np.asarray(compute(), dtype=np.int64)
        self.put(key, A)
        return A


def cache_get(key: CacheKey, directory=None) -> CacheEntry | None:
    return Cache(directory).get(key)


def cache_put(key: CacheKey, matrix: np.ndarray, directory=None) -> CacheEntry:
    return Cache(directory).put(key, matrix)
