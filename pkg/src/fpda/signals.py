"""Signal frames and the raw signal file format.

A signal file is little-endian two's-complement integers (1, 2, 4 or 8 bytes
per word, the smallest container holding ``total_bits``), complex samples
interleaved ``re, im``.  ``pair`` frames hold wavelet outputs the same way,
approximation in ``re`` and detail in ``im``.  A sidecar ``<path>.hdr`` text file carries
``format``, ``channel`` and ``length`` (number of samples, complex samples
counting once).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, FrameFormatError
from .fixed import CFx, Fx, FxFormat

__all__ = ["Channel", "SignalFrame", "write_signal", "read_signal", "header_path", "container_dtype"]


class Channel(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"
    PAIR = "pair"  # (approx, detail) per decimated sample


def _two_word(channel) -> bool:
    return Channel(channel) is not Channel.REAL


@dataclass(frozen=True)
class SignalFrame:
    samples: tuple
    format: FxFormat
    channel: Channel = Channel.REAL
    sample_rate: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        object.__setattr__(self, "channel", Channel(self.channel))
        kind = CFx if _two_word(self.channel) else Fx
        for s in self.samples:
            if not isinstance(s, kind):
                raise FrameFormatError(f"{self.channel.value} frame holds a {type(s).__name__}")
            if s.format != self.format:
                raise FrameFormatError(f"sample format {s.format} differs from frame format {self.format}")

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @classmethod
    def from_raw(cls, raws, fmt: FxFormat, channel=Channel.REAL, sample_rate=None) -> "SignalFrame":
        raws = np.asarray(raws, dtype=np.int64)
        if _two_word(channel):
            samples = [CFx(Fx(int(r), fmt), Fx(int(i), fmt)) for r, i in raws.reshape(-1, 2)]
        else:
            samples = [Fx(int(r), fmt) for r in raws.reshape(-1)]
        return cls(tuple(samples), fmt, channel, sample_rate)

    def raws(self) -> np.ndarray:
        if _two_word(self.channel):
            return np.array([[s.re.raw, s.im.raw] for s in self.samples], dtype=np.int64).reshape(-1, 2)
        return np.array([s.raw for s in self.samples], dtype=np.int64)


def container_dtype(fmt: FxFormat) -> np.dtype:
    for nbytes in (1, 2, 4, 8):
        if fmt.total_bits <= 8 * nbytes:
            return np.dtype(f"<i{nbytes}")
    raise FrameFormatError(f"no container for {fmt}")


def header_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.name + ".hdr")


def write_signal(path, frame: SignalFrame):
    path = Path(path)
    data = frame.raws().astype(container_dtype(frame.format)).reshape(-1)
    path.write_bytes(data.tobytes())
    header_path(path).write_text(
        f"format={frame.format}\nchannel={frame.channel.value}\nlength={len(frame)}\n"
    )


def _read_header(path) -> dict[str, str]:
    hdr = header_path(path)
    if not hdr.exists():
        raise FrameFormatError(f"missing header {hdr}")
    fields = {}
    for line in hdr.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FrameFormatError(f"{hdr}: malformed line {line!r}")
        fields[key.strip()] = value.strip()
    for key in ("format", "channel", "length"):
        if key not in fields:
            raise FrameFormatError(f"{hdr}: missing {key}")
    return fields


def read_signal(path) -> SignalFrame:
    fields = _read_header(path)
    try:
        fmt = FxFormat.parse(fields["format"])
        channel = Channel(fields["channel"])
        length = int(fields["length"])
    except (ValueError, ConfigurationError) as exc:
        raise FrameFormatError(f"{header_path(path)}: {exc}") from None
    data = np.frombuffer(Path(path).read_bytes(), dtype=container_dtype(fmt)).astype(np.int64)
    words = length * (2 if _two_word(channel) else 1)
    if data.size != words:
        raise FrameFormatError(f"{path}: header says {words} words, file has {data.size}")
    if data.size and (data.min() < fmt.min_raw or data.max() > fmt.max_raw):
        raise FrameFormatError(f"{path}: values out of range for {fmt}")
    return SignalFrame.from_raw(data, fmt, channel)
