"""Sizes, durations, and the display conventions shared by the whole toolkit.

Decimal units throughout the transfer model: 1 TB = 10^12 bytes, 1 MBps =
10^6 bytes/s, 1 Mbps = 10^6 bits/s. Benchmark block/working-set sizes use
the storage-bench binary convention instead (64K = 65,536); the two parsers
are deliberately separate so neither convention leaks into the other.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation

from .errors import ConfigError

TB = 10**12

MINUTE = 60.0
HOUR = 3600.0
DAY = 86400.0
MONTH = 30 * DAY  # 2,592,000 s; makes the rent-per-TB figures close exactly
YEAR = 365 * DAY


def round_half_up(value: float, digits: int = 0) -> float:
    """Round half away from zero (display convention for dollars and times)."""
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def format_dollars(value: float) -> str:
    """Nearest whole dollar with thousands separators."""
    return f"{int(round_half_up(value)):,}"


def format_number(value: float) -> str:
    """Compact numeric cell: no trailing zeros, no exponent for table ranges."""
    return f"{value:g}"


@dataclass(frozen=True)
class DataSize:
    """A byte count. 1 TB is exactly 10^12 bytes; 1 byte is 8 bits."""

    bytes: int

    def __post_init__(self) -> None:
        if not isinstance(self.bytes, int) or self.bytes < 0:
            raise ConfigError(f"byte count must be a non-negative integer, got {self.bytes!r}")

    @classmethod
    def from_tb(cls, tb: float) -> DataSize:
        return cls(int(tb * TB))

    @classmethod
    def from_gb(cls, gb: float) -> DataSize:
        return cls(int(gb * 10**9))

    @property
    def bits(self) -> int:
        return 8 * self.bytes

    @property
    def tb(self) -> float:
        return self.bytes / TB


@dataclass(frozen=True)
class Duration:
    """A non-negative span of time in seconds."""

    seconds: float

    def __post_init__(self) -> None:
        if not (self.seconds >= 0.0):
            raise ConfigError(f"duration must be non-negative, got {self.seconds!r}")

    @property
    def hours(self) -> float:
        return self.seconds / HOUR

    @property
    def days(self) -> float:
        return self.seconds / DAY


# Largest-first unit ladder for humanized durations. A unit is chosen when the
# value expressed in it reaches 0.75, the threshold at which readers prefer
# "1 day" over "18 hours".
_UNITS = (
    ("year", YEAR),
    ("month", MONTH),
    ("day", DAY),
    ("hour", HOUR),
    ("minute", MINUTE),
    ("second", 1.0),
)

# Units rendered to whole numbers only. Tenths of a day or longer are noise in
# a shipping estimate; sub-day units keep one decimal while small.
_INTEGER_ONLY = {"year", "month", "day"}


def humanize_duration(duration: Duration | float) -> str:
    """Render a duration as its most readable single-unit form.

    The largest unit whose value is at least 0.75 wins; days and larger
    round to whole numbers, while hours and smaller show one decimal when
    under 10 and not whole (8000 s -> "2.2 hours", 80,000 s -> "1 day").
    """
    seconds = duration.seconds if isinstance(duration, Duration) else float(duration)
    if seconds < 0:
        raise ConfigError("cannot humanize a negative duration")
    name, unit = _UNITS[-1]
    for name, unit in _UNITS:
        if seconds / unit >= 0.75:
            break
    value = seconds / unit
    if name not in _INTEGER_ONLY and value < 10:
        tenths = round_half_up(value, 1)
        if tenths != int(tenths):
            return f"{tenths:.1f} {name}s"
        value = tenths
    whole = int(round_half_up(value))
    suffix = "" if whole == 1 else "s"
    return f"{whole} {name}{suffix}"


_SIZE_RE = re.compile(r"^\s*([0-9]+(?:\.[0-9]+)?)\s*([A-Za-z]*)\s*$")

_DECIMAL_SUFFIXES = {"": 0, "B": 0, "KB": 3, "MB": 6, "GB": 9, "TB": 12, "PB": 15}
_BINARY_SUFFIXES = {"": 0, "B": 0, "K": 10, "KB": 10, "M": 20, "MB": 20, "G": 30, "GB": 30}
_BINARY_HINTS = ("KIB", "MIB", "GIB", "TIB", "PIB", "TI", "GI", "MI", "KI")


def parse_data_size(text: str) -> DataSize:
    """Parse a dataset size like "10TB" or "500 GB" (decimal powers of ten).

    Binary suffixes are rejected outright: silently reading 1TiB where the
    model means 10^12 bytes would skew every estimate by 10%.
    """
    match = _SIZE_RE.match(text)
    if not match:
        raise ConfigError(f"cannot parse size {text!r}; expected forms like 10TB or 500GB")
    number, suffix = match.group(1), match.group(2).upper()
    if suffix in _BINARY_HINTS:
        raise ConfigError(
            f"binary suffix {match.group(2)!r} not accepted; sizes are decimal"
            " (1TB = 10^12 bytes), write TB/GB instead"
        )
    if suffix not in _DECIMAL_SUFFIXES:
        raise ConfigError(f"unknown size suffix {match.group(2)!r}; use B, KB, MB, GB, or TB")
    try:
        scaled = Decimal(number) * (Decimal(10) ** _DECIMAL_SUFFIXES[suffix])
    except InvalidOperation as exc:  # pragma: no cover - regex prevents this
        raise ConfigError(f"cannot parse size {text!r}") from exc
    if scaled != scaled.to_integral_value():
        raise ConfigError(f"size {text!r} is not a whole number of bytes")
    return DataSize(int(scaled))


def parse_bench_size(text: str) -> int:
    """Parse a benchmark block or working-set size like "64K" or "256M".

    Benchmark sizes follow the storage convention: K/M/G are powers of two,
    so a 64K block is 65,536 bytes.
    """
    match = _SIZE_RE.match(text)
    if not match:
        raise ConfigError(f"cannot parse size {text!r}; expected forms like 64K or 256M")
    number, suffix = match.group(1), match.group(2).upper()
    if suffix not in _BINARY_SUFFIXES:
        raise ConfigError(f"unknown size suffix {match.group(2)!r}; use B, K, M, or G")
    scaled = Decimal(number) * (Decimal(2) ** _BINARY_SUFFIXES[suffix])
    if scaled != scaled.to_integral_value():
        raise ConfigError(f"size {text!r} is not a whole number of bytes")
    return int(scaled)
