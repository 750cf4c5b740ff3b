"""Embedded repair-times sample and plain-text ingestion."""

from pathlib import Path

from .errors import DataError
from .estimation import Dataset

BUILTIN_TOKEN = "builtin:repair-times"

# active repair times (hours) for an airborne communication transceiver
REPAIR_TIMES = (
    0.50, 0.60, 0.60, 0.70, 0.70, 0.70, 0.80, 0.80,
    1.00, 1.00, 1.00, 1.00, 1.10, 1.30, 1.50, 1.50,
    1.50, 1.50, 2.00, 2.00, 2.20, 2.50, 2.70, 3.00,
    3.00, 3.30, 4.00, 4.00, 4.50, 4.70, 5.00, 5.40,
    5.40, 7.00, 7.50, 8.80, 9.00, 10.20, 22.00, 24.50,
)


def repair_times():
    return Dataset(REPAIR_TIMES, label=BUILTIN_TOKEN)


def parse_values(text, source="<text>"):
    """Parse one number per line; a single non-numeric first line is a header.

    Blank lines are skipped. Errors name the 1-based line number.
    """
    values = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            v = float(line)
        except ValueError:
            if not seen_data and lineno == _first_nonblank(text):
                continue
            raise DataError(f"{source}:{lineno}: cannot parse {line!r} as a number") from None
        seen_data = True
        if not v > 0 or v != v or v == float("inf"):
            raise DataError(f"{source}:{lineno}: value {line} is not a positive finite number")
        values.append(v)
    if not values:
        raise DataError(f"{source}: no data values found")
    return values


def _first_nonblank(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.strip():
            return lineno
    return 0


def ingest(source):
    """Load a :class:`Dataset` from a file path or ``builtin:repair-times``."""
    source = str(source)
    if source == BUILTIN_TOKEN:
        return repair_times()
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {source}: {exc.strerror or exc}") from None
    return Dataset(parse_values(text, source), label=str(path))
