import asyncio
import json

import pandas as pd
import pytest

from relcomp.reports import CSV_COLUMNS, RunReport
from relcomp.services.database import BenchDatabase
from relcomp.services.export import ReportExporter


def _rows():
    rows = []
    for n, millis in [(16, 2.0), (64, 32.0), (256, 512.0)]:
        report = RunReport(algo="horner", n=n, verified=True, digest="d")
        report.phases = {"composition": millis}
        rows.extend(report.rows())
    skipped = RunReport(algo="relmat", n=16, m=2, d=8, mu=2, delta=8)
    skipped.phases = {"basis": 1.0, "composition": 3.0}
    rows.extend(skipped.rows())
    return rows


def test_database_roundtrip(tmp_path):
    db = BenchDatabase(str(tmp_path / "bench.db"))

    async def scenario():
        await db.init_db()
        await db.add_rows("run-1", _rows()[:3])
        await db.add_rows("run-2", _rows()[3:])
        return await db.get_runs("run-2"), await db.get_runs(), await db.latest_run_id()

    latest_rows, all_rows, latest = asyncio.run(scenario())
    assert latest == "run-2"
    assert len(all_rows) == 5
    assert [r["phase"] for r in latest_rows] == ["basis", "composition"]
    assert latest_rows[0]["verified"] is None
    assert all_rows[0]["verified"] == 1


def test_empty_database(tmp_path):
    db = BenchDatabase(str(tmp_path / "empty.db"))

    async def scenario():
        await db.init_db()
        return await db.latest_run_id()

    assert asyncio.run(scenario()) is None


def test_frame_has_fixed_columns():
    frame = ReportExporter().to_frame(_rows())
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 5


def test_writers(tmp_path):
    exporter = ReportExporter()
    frame = exporter.to_frame(_rows())
    csv_path, json_path, xlsx_path = tmp_path / "r.csv", tmp_path / "r.json", tmp_path / "r.xlsx"
    exporter.write_csv(frame, str(csv_path))
    exporter.write_json(frame, str(json_path))
    exporter.write_xlsx(frame, str(xlsx_path))

    assert csv_path.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)
    records = json.loads(json_path.read_text())
    assert records[0]["algo"] == "horner"
    assert list(pd.read_excel(xlsx_path, engine="openpyxl").columns) == CSV_COLUMNS


def test_summary_and_scaling():
    exporter = ReportExporter()
    frame = exporter.to_frame(_rows())
    summary = exporter.summary(frame)
    relmat = summary[(summary["algo"] == "relmat") & (summary["n"] == 16)]
    assert relmat["millis"].iloc[0] == pytest.approx(4.0)
    assert exporter.scaling_exponent(frame, "horner") == pytest.approx(2.0)
    assert exporter.scaling_exponent(frame, "relmat") is None
    assert exporter.summary(exporter.to_frame([])).empty
