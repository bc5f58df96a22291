import hashlib

from relcomp.reports import CSV_COLUMNS, RunReport, digest, sort_rows


def test_digest_of_decimal_list():
    assert digest([1, 2, 3]) == hashlib.sha256(b"1,2,3").hexdigest()
    assert digest([]) == hashlib.sha256(b"").hexdigest()


def test_rows_one_per_phase():
    report = RunReport(algo="relmat", n=16, m=2, d=8, mu=2, delta=8, verified=True)
    report.phases = {"basis": 1.23456, "composition": 2.0}
    rows = report.rows()
    assert [r["phase"] for r in rows] == ["basis", "composition"]
    assert rows[0]["millis"] == 1.235
    assert set(CSV_COLUMNS) <= set(rows[0])


def test_rows_without_phases():
    rows = RunReport(algo="horner", n=4).rows()
    assert len(rows) == 1
    assert rows[0]["phase"] == "total"


def test_format_lines():
    report = RunReport(algo="relmat", n=8, generic=False, fallback="brent-kung", digest="ab")
    report.phases = {"fallback": 0.5}
    head, phase = report.format_lines()
    assert "verified=skipped" in head
    assert "generic=false" in head
    assert head.endswith("fallback=brent-kung")
    assert phase == "  phase=fallback millis=0.500"
    assert report.ok


def test_sort_rows():
    rows = [
        {"algo": "relmat", "n": 8, "m": 2, "d": 4, "phase": "basis"},
        {"algo": "horner", "n": 16, "m": 0, "d": 0, "phase": "composition"},
        {"algo": "horner", "n": 8, "m": 0, "d": 0, "phase": "composition"},
    ]
    ordered = sort_rows(rows)
    assert [(r["algo"], r["n"]) for r in ordered] == [("horner", 8), ("horner", 16), ("relmat", 8)]
