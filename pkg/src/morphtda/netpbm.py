"""Minimal PGM (P2/P5) and PPM (P6) codec for 8-bit images."""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np

MAGICS = {b"P2": ("gray", "ascii"), b"P5": ("gray", "raw"), b"P6": ("rgb", "raw")}
FORMATS = {"pgm": b"P5", "pgm-ascii": b"P2", "ppm": b"P6"}


class NetpbmError(ValueError):
    pass


class MalformedHeaderError(NetpbmError):
    pass


class MaxvalError(NetpbmError):
    """maxval outside the range allowed by the format (1..65535)."""


class UnsupportedFormatError(NetpbmError):
    """Valid netpbm data this codec does not handle, e.g. 16-bit samples."""


class TruncatedDataError(NetpbmError):
    pass


def _header(data: bytes) -> tuple[bytes, list[int], int]:
    """Parse magic, three integers and return the offset of the payload."""
    magic = data[:2]
    if magic not in MAGICS:
        raise MalformedHeaderError(f"unknown magic number {magic!r}")
    pos, fields = 2, []
    n = len(data)
    while len(fields) < 3:
        if pos >= n:
            raise MalformedHeaderError("header ends early")
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            start = pos
            while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
                pos += 1
            tok = data[start:pos]
            if not tok.isdigit():
                raise MalformedHeaderError(f"bad header token {tok!r}")
            fields.append(int(tok))
    if MAGICS[magic][1] == "ascii":
        return magic, fields, pos
    if pos >= n:
        raise TruncatedDataError("no payload after header")
    if not data[pos:pos + 1].isspace():
        raise MalformedHeaderError("missing whitespace after maxval")
    return magic, fields, pos + 1


def decode(data: bytes) -> np.ndarray:
    """Decode netpbm bytes to a uint8 array, (H, W) or (H, W, 3)."""
    magic, (width, height, maxval), pos = _header(data)
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"bad dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise MaxvalError(f"maxval {maxval} out of range")
    if maxval > 255:
        raise UnsupportedFormatError(f"maxval {maxval}: only 8-bit images are supported")
    kind, encoding = MAGICS[magic]
    channels = 3 if kind == "rgb" else 1
    count = width * height * channels
    if encoding == "raw":
        payload = data[pos:pos + count]
        if len(payload) < count:
            raise TruncatedDataError(f"expected {count} samples, found {len(payload)}")
        values = np.frombuffer(payload, dtype=np.uint8).copy()
    else:
        tokens = data[pos:].split()
        if len(tokens) < count:
            raise TruncatedDataError(f"expected {count} samples, found {len(tokens)}")
        try:
            values = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        except ValueError as exc:
            raise MalformedHeaderError(f"non-integer sample: {exc}") from None
    if values.max(initial=0) > maxval:
        raise NetpbmError("sample exceeds maxval")
    shape = (height, width, 3) if channels == 3 else (height, width)
    return values.astype(np.uint8).reshape(shape)


def encode(img: np.ndarray, fmt: str = "pgm") -> bytes:
    img = np.asarray(img)
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    magic = FORMATS[fmt]
    if magic == b"P6":
        if img.ndim != 3 or img.shape[2] != 3:
            raise ValueError("PPM needs an (H, W, 3) array")
    elif img.ndim != 2:
        raise ValueError("PGM needs an (H, W) array")
    if img.size and (img.min() < 0 or img.max() > 255):
        raise ValueError("sample values must lie in 0..255")
    height, width = img.shape[:2]
    header = b"%s\n%d %d\n255\n" % (magic, width, height)
    if magic == b"P2":
        rows = [" ".join(str(int(v)) for v in row) for row in img]
        return header + ("\n".join(rows) + "\n").encode("ascii")
    return header + img.astype(np.uint8).tobytes()


def _fmt_for(path, fmt):
    if fmt is not None:
        return fmt
    return "ppm" if Path(path).suffix.lower() == ".ppm" else "pgm"


def load_image(path: str | os.PathLike) -> np.ndarray:
    return decode(Path(path).read_bytes())


def save_image(img: np.ndarray, path: str | os.PathLike, fmt: str | None = None) -> None:
    Path(path).write_bytes(encode(img, _fmt_for(path, fmt)))


def load_binary(path: str | os.PathLike) -> np.ndarray:
    """Load a PGM holding a binary image: 0 -> 0 (black), 255 -> 1 (white)."""
    raw = decode(Path(path).read_bytes())
    if raw.ndim != 2:
        raise ValueError("binary images must be single channel")
    if not np.all((raw == 0) | (raw == 255)):
        raise ValueError("binary PGM must contain only 0 and 255")
    return (raw == 255).astype(np.uint8)


def save_binary(f: np.ndarray, path: str | os.PathLike, fmt: str = "pgm") -> None:
    f = np.asarray(f)
    if not np.all((f == 0) | (f == 1)):
        raise ValueError("not a binary image")
    save_image((f * 255).astype(np.uint8), path, fmt)
