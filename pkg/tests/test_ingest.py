import csv
import io
from datetime import date, timedelta
from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import DATA
from regcomplex import ingest
from regcomplex.ingest import FirmRecord, RejectReason, Schema, SnapshotSpec


@pytest.fixture
def schema():
    return Schema.from_file(DATA / "schema.ini")


def parse_text(text, schema=None, aliases=None, **kw):
    return ingest.parse_registry(io.StringIO(text), schema, aliases, **kw)


def rec(firm_id="F1", region="A", nic="62011", day=date(2015, 1, 1), status=ingest.ACTIVE, cap=100):
    return FirmRecord(firm_id, region, nic, ingest.derive_nic2(nic), day, status, cap)


# ---------------------------------------------------------------- derive_nic2


@pytest.mark.parametrize(
    "code, expected",
    [("62011", "62"), ("7", "07"), (" 46101 ", "46"), ("00123", None), ("AB123", None), ("6A", None), ("０１", None)],
)
def test_derive_nic2(code, expected):
    assert ingest.derive_nic2(code) == expected


def test_derive_nic2_empty():
    with pytest.raises(ValueError):
        ingest.derive_nic2("  ")


# ---------------------------------------------------------------- capital and dates


@pytest.mark.parametrize("raw, minor", [("1000", 100000), ("2,500.50", 250050), ("0", 0), (" 7.5 ", 750), ("1e3", 100000)])
def test_parse_capital(raw, minor):
    assert ingest.parse_capital(raw) == minor


@pytest.mark.parametrize(
    "raw, reason",
    [("", RejectReason.MISSING_CAPITAL), ("abc", RejectReason.BAD_CAPITAL), ("-5", RejectReason.NEGATIVE_CAPITAL),
     ("1.005", RejectReason.BAD_CAPITAL), ("inf", RejectReason.BAD_CAPITAL), ("NaN", RejectReason.BAD_CAPITAL)],
)
def test_parse_capital_rejects(raw, reason):
    with pytest.raises(ValueError) as err:
        ingest.parse_capital(raw)
    assert err.value.args[0] == reason


@given(st.integers(min_value=0, max_value=10**15))
def test_capital_format_round_trip(minor):
    assert ingest.parse_capital(ingest.format_capital(minor)) == minor


def test_paid_up_capital_is_decimal():
    assert rec(cap=250050).paid_up_capital == Decimal("2500.5")


def test_parse_date_formats():
    fmts = ("%Y-%m-%d", "%d-%m-%Y")
    assert ingest.parse_date("2016-12-31", fmts) == date(2016, 12, 31)
    assert ingest.parse_date("01-05-2010", fmts) == date(2010, 5, 1)
    with pytest.raises(ValueError):
        ingest.parse_date("2019-13-45", fmts)


# ---------------------------------------------------------------- parse_registry


def test_valid_fixture(schema):
    res = ingest.read_registry(DATA / "valid_registry.csv", schema)
    assert res.rejects == []
    assert res.rows_read == 7
    by_id = {r.firm_id: r for r in res.records}
    assert by_id["F002"].region == "Karnataka"  # trimmed and case-folded
    assert by_id["F006"].region == "Maharashtra"
    assert by_id["F002"].capital_minor == 250050
    assert by_id["F003"].nic2 == "07"
    assert by_id["F003"].incorporation_date == date(2010, 5, 1)
    assert by_id["F003"].status == "STOF" and not by_id["F003"].is_active
    assert by_id["F001"].is_active


def test_reject_reasons_and_lines(schema):
    res = ingest.read_registry(DATA / "rejects_registry.csv", schema)
    got = [(r.line, r.reason.value) for r in res.rejects]
    # the blank row is not counted; the header is line 1
    assert got == [
        (3, "MissingFirmId"),
        (4, "EmptyRegion"),
        (5, "MissingNic"),
        (6, "NonNumericNic"),
        (7, "ExcludedIndustry"),
        (11, "DuplicateFirmId"),
    ]
    assert res.rows_read == 10
    assert res.reject_fraction == 0.6
    assert all(r.source == "rejects_registry.csv" for r in res.rejects)
    # first occurrence of a duplicate wins
    assert [r.region for r in res.records if r.firm_id == "R01"] == ["Karnataka"]


def test_capital_and_date_rejects(schema):
    res = ingest.read_registry(DATA / "capital_rejects.csv", schema)
    assert res.reject_counts == {"BadCapital": 2, "BadDate": 1, "MissingCapital": 1, "NegativeCapital": 1}
    assert [r.firm_id for r in res.records] == ["C05"]


def test_missing_column_is_schema_error(schema):
    with pytest.raises(ingest.SchemaError, match="Capital"):
        ingest.read_registry(DATA / "missing_column.csv", schema)


def test_empty_file_is_schema_error():
    with pytest.raises(ingest.SchemaError):
        parse_text("")
    with pytest.raises(ingest.SchemaError):
        ingest.parse_registry(io.BytesIO(b"\xff\xfe\x00"))


def test_bom_and_bytes():
    text = "firm_id,region,nic_full,incorporation_date,status,paid_up_capital\nF1,goa,62011,2015-01-01,ACTV,10\n"
    res = ingest.parse_registry(io.BytesIO(("﻿" + text).encode("utf-8")))
    assert [r.region for r in res.records] == ["Goa"]


def test_short_row_pads_missing_cells():
    text = "firm_id,region,nic_full,incorporation_date,status,paid_up_capital\nF1,Goa,62011\n"
    assert parse_text(text).rejects[0].reason == RejectReason.BAD_DATE


def test_alias_table(schema):
    aliases = ingest.RegionAliases.from_file(DATA / "aliases.ini")
    text = "CIN,State,NIC,IncDate,Status,Capital\nA,ka,62011,2015-01-01,ACTV,1\nB,nct  of DELHI,62011,2015-01-01,ACTV,1\nC,Goa,62011,2015-01-01,ACTV,1\n"
    res = parse_text(text, schema, aliases)
    assert [r.region for r in res.records] == ["Karnataka", "Delhi"]
    assert [(r.firm_id, r.reason) for r in res.rejects] == [("C", RejectReason.UNKNOWN_REGION)]


def test_alias_file_without_section(tmp_path):
    p = tmp_path / "a.ini"
    p.write_text("[other]\nx = y\n")
    with pytest.raises(ingest.SchemaError):
        ingest.RegionAliases.from_file(p)


def test_schema_requires_all_fields():
    with pytest.raises(ingest.SchemaError):
        Schema(columns={"firm_id": "id"})


def test_parallel_parse_matches_serial(schema):
    lines = ["CIN,State,NIC,IncDate,Status,Capital"]
    for k in range(400):
        nic = "00999" if k % 37 == 0 else f"{10 + k % 80}011"
        lines.append(f"F{k % 350},Region{k % 5},{nic},2015-01-01,ACTV,{k}")
    text = "\n".join(lines) + "\n"
    serial = parse_text(text, schema, chunk_size=64)
    parallel = parse_text(text, schema, workers=3, chunk_size=64)
    assert serial.records == parallel.records
    assert serial.rejects == parallel.rejects
    assert len(serial.records) + len(serial.rejects) == serial.rows_read


def test_cross_file_duplicates(schema, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    head = "CIN,State,NIC,IncDate,Status,Capital\n"
    a.write_text(head + "X1,Goa,62011,2015-01-01,ACTV,1\n")
    b.write_text(head + "X1,Goa,46011,2015-01-01,ACTV,1\nX2,Goa,46011,2015-01-01,ACTV,1\n")
    res = ingest.read_registries([a, b], schema)
    assert [r.firm_id for r in res.records] == ["X1", "X2"]
    assert res.records[0].nic2 == "62"
    assert [(r.source, r.line, r.reason) for r in res.rejects] == [("b.csv", 0, RejectReason.DUPLICATE_FIRM_ID)]
    assert res.rows_read == 3


# ---------------------------------------------------------------- active filter and snapshots


def test_filter_active():
    rs = [rec("a"), rec("b", status="STOF"), rec("c")]
    assert [r.firm_id for r in ingest.filter_active(rs)] == ["a", "c"]
    assert ingest.filter_active([]) == []


def test_filter_active_fixture_ten_records():
    rs = [rec(str(k), status="ULQD" if k in (1, 4, 8) else ingest.ACTIVE) for k in range(10)]
    assert len(ingest.filter_active(rs)) == 7


def test_snapshot_cutoff_is_exclusive():
    spec = SnapshotSpec(2017)
    assert ingest.snapshot([rec(day=date(2016, 12, 31))], spec)
    assert not ingest.snapshot([rec(day=date(2017, 4, 1))], spec)
    assert ingest.snapshot([rec(day=date(2017, 3, 31))], spec)


def test_configurable_cutoff():
    assert ingest.parse_cutoff("01-01") == (1, 1)
    assert ingest.parse_cutoff("02-29") == (2, 29)
    for bad in ("13-01", "4/1", "x"):
        with pytest.raises(ValueError):
            ingest.parse_cutoff(bad)
    spec = SnapshotSpec(2017, 1, 1)
    assert not ingest.snapshot([rec(day=date(2017, 2, 1))], spec)


dates = st.dates(min_value=date(1990, 1, 1), max_value=date(2030, 12, 31))


@given(st.lists(dates, max_size=40), st.integers(1995, 2030), st.integers(0, 5))
def test_snapshot_monotone(days, y1, gap):
    rs = [rec(str(k), day=d) for k, d in enumerate(days)]
    a = {r.firm_id for r in ingest.snapshot(rs, SnapshotSpec(y1))}
    b = {r.firm_id for r in ingest.snapshot(rs, SnapshotSpec(y1 + gap))}
    assert a <= b
    counts = ingest.fiscal_year_counts(rs, [y1, y1 + gap])
    assert counts[y1] == len(a) and counts[y1 + gap] == len(b)


def test_snapshot_sizes_three_years():
    base = date(2014, 1, 1)
    rs = [rec(str(k), day=base + timedelta(days=97 * k)) for k in range(16)]
    sizes = [len(ingest.snapshot(rs, SnapshotSpec(y))) for y in (2015, 2016, 2017, 2018)]
    assert sizes == sorted(sizes) and sizes[0] < sizes[-1]


# ---------------------------------------------------------------- round trip and accounting

regions = st.text(alphabet="abcdefgh ", min_size=1, max_size=8).map(lambda s: s.strip() or "x")
record_rows = st.lists(
    st.tuples(
        st.integers(0, 30),
        regions,
        st.sampled_from(["62011", "7", "00123", "AB1", "", "46"]),
        st.one_of(dates.map(date.isoformat), st.sampled_from(["2015-02-30", "bad"])),
        st.sampled_from(["ACTV", "STOF", "actv"]),
        st.one_of(st.integers(0, 10**9).map(str), st.sampled_from(["", "-1", "x", "3.333"])),
    ),
    max_size=40,
)


def _csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ingest.LOGICAL_FIELDS)
    for fid, *rest in rows:
        w.writerow([f"F{fid}", *rest])
    return buf.getvalue()


@given(record_rows)
def test_reject_accounting(rows):
    res = parse_text(_csv(rows))
    assert len(res.records) + len(res.rejects) == res.rows_read == len(rows)
    assert len({r.firm_id for r in res.records}) == len(res.records)


@given(record_rows)
def test_write_then_read_round_trip(rows):
    res = parse_text(_csv(rows))
    buf = io.StringIO()
    ingest.write_records(res.records, buf)
    again = ingest.parse_registry(io.StringIO(buf.getvalue()), Schema.normalized(), ingest.RegionAliases.identity())
    assert again.rejects == []
    assert again.records == res.records


def test_read_records_file(tmp_path, schema):
    res = ingest.read_registry(DATA / "valid_registry.csv", schema)
    p = tmp_path / "records.csv"
    with open(p, "w", newline="") as fh:
        ingest.write_records(res.records, fh)
    assert ingest.read_records(p) == res.records


def test_write_rejects_columns(schema):
    res = ingest.read_registry(DATA / "rejects_registry.csv", schema)
    buf = io.StringIO()
    ingest.write_rejects(res.rejects, res.header, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "file,line,reason,CIN,State,NIC,IncDate,Status,Capital"
    assert lines[1].startswith("rejects_registry.csv,3,MissingFirmId,")
    assert len(lines) == 7
