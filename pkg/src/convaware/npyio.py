"""Tensor file I/O in the NPY v1.0 format, specified at the byte level.

Layout: 6 magic bytes 0x93 'N' 'U' 'M' 'P' 'Y', version bytes 0x01 0x00,
a little-endian uint16 header length, an ASCII dictionary like
`{'descr': '<f8', 'fortran_order': False, 'shape': (2, 3, 4, 5), }`
space-padded so everything before the data is a multiple of 64 bytes
and newline-terminated, then the raw little-endian element bytes in
row-major order.

The writer always emits that canonical form. The reader is tolerant: it
accepts any header padding (including none) as long as the dictionary
parses, so files written by other producers load too. Format errors
carry the byte offset where parsing failed.
"""

from __future__ import annotations

import ast
import struct
from pathlib import Path

import numpy as np

from .errors import DomainError, FormatError
from .tensors import RealTensor

__all__ = ["write_array", "read_array"]

_MAGIC = b"\x93NUMPY"
_VERSION = b"\x01\x00"
_ALIGN = 64
_DESCRS = {"f8": "<f8", "f4": "<f4"}


def _weights(bank) -> np.ndarray:
    if isinstance(bank, RealTensor):
        return bank.data
    return bank.weights.data


def write_array(path, bank, dtype: str = "f8") -> None:
    """Write a bank (or RealTensor) to `path`; dtype is 'f8' or 'f4'.

    float32 export casts each element with the default round-to-nearest-
    even; storage is the only narrowing step in the package.
    """
    descr = _DESCRS.get(dtype)
    if descr is None:
        raise DomainError(f"unrepresentable dtype {dtype!r}; use one of {sorted(_DESCRS)}")
    w = _weights(bank)
    head = "{'descr': '%s', 'fortran_order': False, 'shape': %s, }" % (descr, repr(w.shape))
    base = len(_MAGIC) + len(_VERSION) + 2 + len(head) + 1
    pad = (_ALIGN - base % _ALIGN) % _ALIGN
    header = (head + " " * pad + "\n").encode("ascii")
    payload = np.ascontiguousarray(w, dtype=descr).tobytes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(_VERSION)
        fh.write(struct.pack("<H", len(header)))
        fh.write(header)
        fh.write(payload)


def read_array(path) -> RealTensor:
    """Read an NPY v1.0 file into a float64 RealTensor.

    Rejects fortran_order=True and any descr other than '<f4'/'<f8'.
    float32 payloads are upcast exactly; float64 round-trips bit-exact.
    """
    blob = Path(path).read_bytes()
    if len(blob) < 6 or blob[:6] != _MAGIC:
        raise FormatError("bad magic; not an NPY file", 0)
    if blob[6:8] != _VERSION:
        raise FormatError(f"unsupported version {blob[6:8]!r}; only 1.0 is handled", 6)
    if len(blob) < 10:
        raise FormatError("truncated before header length", 8)
    (hlen,) = struct.unpack("<H", blob[8:10])
    if len(blob) < 10 + hlen:
        raise FormatError(f"truncated header; declared {hlen} bytes", 10)
    try:
        meta = ast.literal_eval(blob[10 : 10 + hlen].decode("ascii").strip())
    except (ValueError, SyntaxError, UnicodeDecodeError):
        raise FormatError("header is not a parseable dictionary", 10) from None
    if not isinstance(meta, dict) or set(meta) != {"descr", "fortran_order", "shape"}:
        raise FormatError("header must declare exactly descr, fortran_order, shape", 10)
    descr = meta["descr"]
    if descr not in _DESCRS.values():
        raise FormatError(f"unsupported descr {descr!r}; only '<f4'/'<f8'", 10)
    if meta["fortran_order"] is not False:
        raise FormatError("fortran_order=True is not supported; data must be row-major", 10)
    shape = meta["shape"]
    if (
        not isinstance(shape, tuple)
        or not 1 <= len(shape) <= 4
        or not all(isinstance(v, int) and v >= 1 for v in shape)
    ):
        raise FormatError(f"unsupported shape {shape!r}; need rank 1..4 positive extents", 10)
    itemsize = int(descr[2])
    expected = int(np.prod(shape)) * itemsize
    actual = len(blob) - 10 - hlen
    if actual != expected:
        raise FormatError(f"payload holds {actual} bytes, shape {shape} needs {expected}", 10 + hlen)
    arr = np.frombuffer(blob, dtype=descr, offset=10 + hlen).reshape(shape)
    return RealTensor._wrap(arr.astype(np.float64))
