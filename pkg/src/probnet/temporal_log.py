"""Time-stamped transaction logs.

A log is the raw material for every graph view in this package: each
transaction is an undirected message between two nodes at an integer epoch
second.  Logs are immutable; filtering returns a new log.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class LogFormatError(ValueError):
    """Malformed transaction record.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Transaction(NamedTuple):
    src: str
    dst: str
    timestamp: int

    @property
    def pair(self) -> tuple[str, str]:
        return (self.src, self.dst)


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class TransactionLog:
    transactions: tuple[Transaction, ...] = ()
    nodes: frozenset[str] = field(default_factory=frozenset)
    dropped_self_loops: int = 0

    def __len__(self) -> int:
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    @property
    def timestamps(self) -> list[int]:
        return [tx.timestamp for tx in self.transactions]

    def pair_times(self) -> dict[tuple[str, str], list[int]]:
        """Message times grouped by canonical pair, ascending."""
        out: dict[tuple[str, str], list[int]] = {}
        for tx in self.transactions:
            out.setdefault(tx.pair, []).append(tx.timestamp)
        return out

    @classmethod
    def _from_sorted(cls, transactions: Sequence[Transaction], dropped: int = 0) -> "TransactionLog":
        nodes = set()
        for tx in transactions:
            nodes.add(tx.src)
            nodes.add(tx.dst)
        return cls(tuple(transactions), frozenset(nodes), dropped)


def _parse_timestamp(value, line: int | None) -> int:
    if isinstance(value, bool):
        raise LogFormatError(f"timestamp must be an integer, got {value!r}", line)
    if isinstance(value, int):
        ts = value
    else:
        text = str(value).strip()
        try:
            ts = int(text)
        except ValueError:
            raise LogFormatError(f"timestamp must be an integer, got {value!r}", line) from None
    if ts < 0:
        raise LogFormatError(f"timestamp must be non-negative, got {ts}", line)
    return ts


def ingest(records: Iterable[Sequence], first_line: int = 1) -> TransactionLog:
    """Build a log from ``(src, dst, timestamp)`` records.

    Direction is discarded and self-loops are dropped (and counted).  The
    sort is stable, so ties keep their input order.  ``first_line`` is the
    line number reported for the first record in error messages.
    """
    kept: list[Transaction] = []
    dropped = 0
    for offset, rec in enumerate(records):
        line = first_line + offset
        if len(rec) != 3:
            raise LogFormatError(f"expected 3 fields (src,dst,timestamp), got {len(rec)}", line)
        src, dst, ts = rec
        src = "" if src is None else str(src).strip()
        dst = "" if dst is None else str(dst).strip()
        if not src or not dst:
            raise LogFormatError("empty node identifier", line)
        ts = _parse_timestamp(ts, line)
        if src == dst:
            dropped += 1
            continue
        a, b = canonical_pair(src, dst)
        kept.append(Transaction(a, b, ts))
    kept.sort(key=lambda tx: tx.timestamp)
    return TransactionLog._from_sorted(kept, dropped)


def up_to(log: TransactionLog, t: int) -> TransactionLog:
    """Transactions with ``timestamp <= t``."""
    kept = [tx for tx in log.transactions if tx.timestamp <= t]
    if len(kept) == len(log.transactions):
        return log
    return TransactionLog._from_sorted(kept, log.dropped_self_loops)


def window(log: TransactionLog, t: int, delta: float) -> TransactionLog:
    """Transactions inside the closed window ``[t - delta, t]``."""
    if delta < 0:
        raise ValueError(f"window width must be non-negative, got {delta}")
    lo = t - delta
    kept = [tx for tx in log.transactions if lo <= tx.timestamp <= t]
    return TransactionLog._from_sorted(kept, log.dropped_self_loops)


def read_log(source: str | os.PathLike | io.TextIOBase) -> TransactionLog:
    """Read the ``src,dst,timestamp`` CSV format.

    Lines starting with ``#`` are skipped.  The header is required.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_log(fh)

    rows: list[tuple] = []
    header_seen = False
    line_numbers: list[int] = []
    for lineno, raw in enumerate(source, start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = next(csv.reader([raw]))
        if not header_seen:
            names = [f.strip().lower() for f in fields]
            if names != ["src", "dst", "timestamp"]:
                raise LogFormatError(f"expected header src,dst,timestamp, got {','.join(fields)}", lineno)
            header_seen = True
            continue
        rows.append(tuple(fields))
        line_numbers.append(lineno)

    # ingest() numbers records consecutively; re-raise with the true file line.
    try:
        return ingest(rows)
    except LogFormatError as exc:
        line = line_numbers[exc.line - 1] if exc.line is not None else None
        msg = str(exc).split(": ", 1)[-1]
        raise LogFormatError(msg, line) from None


def write_log(log: TransactionLog, dest: str | os.PathLike | io.TextIOBase) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            write_log(log, fh)
            return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["src", "dst", "timestamp"])
    for tx in log.transactions:
        writer.writerow([tx.src, tx.dst, tx.timestamp])
