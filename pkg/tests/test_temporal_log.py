import io

import pytest
from hypothesis import given, strategies as st

from probnet.temporal_log import (
    LogFormatError,
    TransactionLog,
    ingest,
    read_log,
    up_to,
    window,
    write_log,
)

node = st.sampled_from(list("abcdef"))
record = st.tuples(node, node, st.integers(min_value=0, max_value=1000))


def test_ingest_sorts_and_collapses_direction():
    log = ingest([("a", "b", 100), ("b", "a", 50)])
    assert log.timestamps == [50, 100]
    assert log.nodes == {"a", "b"}
    assert all(tx.pair == ("a", "b") for tx in log)


def test_self_loops_dropped_and_counted():
    log = ingest([("a", "a", 10)])
    assert len(log) == 0
    assert log.dropped_self_loops == 1
    assert log.nodes == frozenset()


def test_empty_input_is_valid():
    log = ingest([])
    assert len(log) == 0 and log.nodes == frozenset()


def test_ties_keep_input_order():
    log = ingest([("c", "d", 5), ("a", "b", 5), ("e", "f", 1)])
    assert [tx.pair for tx in log] == [("e", "f"), ("c", "d"), ("a", "b")]


def test_duplicates_retained():
    log = ingest([("a", "b", 5), ("a", "b", 5)])
    assert len(log) == 2


@pytest.mark.parametrize("rec, line", [
    (("a", "", 3), 2),
    (("a", "b", "x"), 2),
    (("a", "b", -1), 2),
    (("a", "b"), 2),
])
def test_malformed_record_reports_line(rec, line):
    with pytest.raises(LogFormatError) as exc:
        ingest([("a", "b", 1), rec])
    assert exc.value.line == line


def test_up_to_is_inclusive():
    log = ingest([("a", "b", 50), ("a", "c", 100)])
    assert up_to(log, 75).timestamps == [50]
    assert up_to(log, 100).timestamps == [50, 100]
    assert len(up_to(log, 0)) == 0
    assert up_to(log, 75).nodes == {"a", "b"}


def test_window_bounds():
    log = ingest([("a", "b", 50), ("a", "b", 100), ("a", "b", 200)])
    assert window(log, 200, 100).timestamps == [100, 200]
    assert window(log, 200, 0).timestamps == [200]
    with pytest.raises(ValueError):
        window(log, 200, -1)


@given(st.lists(record, max_size=30), st.integers(0, 1000), st.integers(0, 1000))
def test_up_to_composes(records, t1, t2):
    log = ingest(records)
    assert up_to(up_to(log, t1), t2) == up_to(log, min(t1, t2))


@given(st.lists(record, max_size=30), st.integers(0, 1000))
def test_infinite_window_is_history(records, t):
    log = ingest(records)
    assert window(log, t, float("inf")) == up_to(log, t)


@given(st.lists(record, max_size=30))
def test_csv_round_trip(records):
    log = ingest(records)
    buf = io.StringIO()
    write_log(log, buf)
    buf.seek(0)
    again = read_log(buf)
    assert again.transactions == log.transactions
    assert again.nodes == log.nodes


def test_read_log_skips_comments_and_reports_file_lines(tmp_path):
    path = tmp_path / "log.csv"
    path.write_text("# exported\nsrc,dst,timestamp\na,b,10\n# note\nb,c,oops\n", encoding="utf-8")
    with pytest.raises(LogFormatError) as exc:
        read_log(path)
    assert exc.value.line == 5

    path.write_text("# exported\nsrc,dst,timestamp\na,b,10\n\nc,b,3\n", encoding="utf-8")
    log = read_log(path)
    assert log.timestamps == [3, 10]
    assert isinstance(log, TransactionLog)


def test_read_log_requires_header():
    with pytest.raises(LogFormatError):
        read_log(io.StringIO("a,b,10\n"))
