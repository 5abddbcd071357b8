"""Versioned little-endian binary artifact files.

Layout: 8-byte magic, uint32 version, uint64 header length, JSON header
(array names, dtypes, shapes), then raw C-order array bytes in header order.
Hyperparameters travel in a JSON sidecar next to the binary (<path>.json).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from figmine.errors import DecodeError, UnsupportedFormat

MAGIC_CODEBOOK = b"FMCODEBK"
MAGIC_SVM = b"FMSVMMDL"

FORMAT_VERSION = 1

_DTYPES = {"<f8": np.dtype("<f8"), "<i8": np.dtype("<i8")}


def sidecar_path(path):
    return Path(str(path) + ".json")


def write_arrays(path, magic, arrays, meta=None, version=FORMAT_VERSION):
    """Write named arrays to a binary file plus a JSON metadata sidecar."""
    if len(magic) != 8:
        raise ValueError("magic must be exactly 8 bytes")
    path = Path(path)
    entries = []
    blobs = []
    for name, arr in arrays.items():
        arr = np.asarray(arr)
        code = "<i8" if np.issubdtype(arr.dtype, np.integer) else "<f8"
        arr = np.ascontiguousarray(arr, dtype=_DTYPES[code])
        entries.append({"name": name, "dtype": code, "shape": list(arr.shape)})
        blobs.append(arr.tobytes())
    header = json.dumps(entries, sort_keys=True).encode()
    with open(path, "wb") as f:
        f.write(magic)
        f.write(struct.pack("<I", version))
        f.write(struct.pack("<Q", len(header)))
        f.write(header)
        for blob in blobs:
            f.write(blob)
    if meta is not None:
        with open(sidecar_path(path), "w") as f:
            json.dump(meta, f, sort_keys=True, indent=2)
            f.write("\n")


def _read_exact(f, n, what):
    buf = f.read(n)
    if len(buf) != n:
        raise DecodeError(f"truncated artifact: expected {n} bytes of {what}")
    return buf


def read_arrays(path, magic):
    """Read a binary artifact; returns (arrays dict, sidecar meta or None)."""
    path = Path(path)
    with open(path, "rb") as f:
        got = _read_exact(f, 8, "magic")
        if got != magic:
            raise UnsupportedFormat(f"bad magic {got!r} in {path} (want {magic!r})")
        (version,) = struct.unpack("<I", _read_exact(f, 4, "version"))
        if version > FORMAT_VERSION:
            raise UnsupportedFormat(f"unsupported format version {version}")
        (hlen,) = struct.unpack("<Q", _read_exact(f, 8, "header length"))
        try:
            entries = json.loads(_read_exact(f, hlen, "header").decode())
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise DecodeError(f"corrupt artifact header: {e}") from e
        arrays = {}
        for e in entries:
            dt = _DTYPES[e["dtype"]]
            count = int(np.prod(e["shape"])) if e["shape"] else 1
            buf = _read_exact(f, count * dt.itemsize, f"array {e['name']!r}")
            arrays[e["name"]] = np.frombuffer(buf, dtype=dt).reshape(e["shape"]).copy()
    meta = None
    sp = sidecar_path(path)
    if sp.exists():
        with open(sp) as f:
            meta = json.load(f)
    return arrays, meta
