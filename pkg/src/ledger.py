"""
Run ledger for the separation analyzer.

Provides a lightweight SQLite-backed store that keeps every CLI run as a set
of normalized tables:
    - runs
    - run_values
    - diagnostics

The ledger is in-memory unless a path is given directly or through the
QSEP_LEDGER_PATH environment variable, so audit trails of batch runs can be
queried later with plain SQL or pandas.
"""

from __future__ import annotations

import os
import sqlite3
import uuid
from datetime import datetime, timezone
from typing import Optional

import pandas as pd

from .config import LEDGER_PATH_ENV
from .reporting import RunReport, flatten_results

LEDGER_TABLES = ("runs", "run_values", "diagnostics")


def _utcnow_iso() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")


class RunLedger:
    """
    Thin wrapper around SQLite for recording RunReports.

    Uses an in-memory database by default. Set `db_path` (or the
    QSEP_LEDGER_PATH environment variable) to persist runs to a file.
    """

    def __init__(self, db_path: Optional[str] = None):
        path = db_path or os.environ.get(LEDGER_PATH_ENV)
        self.db_path = path or ":memory:"
        self.conn = sqlite3.connect(self.db_path)
        self.conn.row_factory = sqlite3.Row
        self._initialize_schema()

    # --------------------------------------------------------------------- schema
    def _initialize_schema(self) -> None:
        cur = self.conn.cursor()
        cur.executescript(
            """
            PRAGMA foreign_keys = ON;

            CREATE TABLE IF NOT EXISTS runs (
                run_id TEXT PRIMARY KEY,
                created_at TEXT NOT NULL,
                command TEXT NOT NULL,
                source TEXT,
                input_digest TEXT,
                exit_status INTEGER NOT NULL,
                report_json TEXT NOT NULL
            );

            CREATE TABLE IF NOT EXISTS run_values (
                run_id TEXT NOT NULL REFERENCES runs(run_id) ON DELETE CASCADE,
                name TEXT NOT NULL,
                value REAL NOT NULL
            );

            CREATE TABLE IF NOT EXISTS diagnostics (
                run_id TEXT NOT NULL REFERENCES runs(run_id) ON DELETE CASCADE,
                level TEXT NOT NULL,
                message TEXT NOT NULL
            );
            """
        )
        self.conn.commit()

    # --------------------------------------------------------------------- helpers
    def record_run(self, report: RunReport) -> str:
        """Store a report; numeric results also land in run_values."""
        run_id = str(uuid.uuid4())
        cur = self.conn.cursor()
        cur.execute(
            """
            INSERT INTO runs (run_id, created_at, command, source, input_digest, exit_status, report_json)
            VALUES (?, ?, ?, ?, ?, ?, ?)
            """,
            (
                run_id,
                _utcnow_iso(),
                report.command,
                report.source,
                report.input_digest,
                int(report.exit_status),
                report.to_json(indent=None),
            ),
        )
        for name, value in flatten_results(report.results):
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                cur.execute(
                    "INSERT INTO run_values (run_id, name, value) VALUES (?, ?, ?)",
                    (run_id, name, float(value)),
                )
        for level, messages in (("warning", report.warnings), ("error", report.errors)):
            for message in messages:
                cur.execute(
                    "INSERT INTO diagnostics (run_id, level, message) VALUES (?, ?, ?)",
                    (run_id, level, message),
                )
        self.conn.commit()
        return run_id

    def get_report(self, run_id: str) -> RunReport:
        row = self.conn.execute("SELECT report_json FROM runs WHERE run_id = ?", (run_id,)).fetchone()
        if row is None:
            raise KeyError(f"Unknown run '{run_id}'")
        return RunReport.from_json(row["report_json"])

    # --------------------------------------------------------------------- fetch
    def fetch_dataframe(self, table: str) -> pd.DataFrame:
        if table not in LEDGER_TABLES:
            raise KeyError(f"Unknown ledger table '{table}'")
        return pd.read_sql_query(f"SELECT * FROM {table}", self.conn)

    def close(self) -> None:
        self.conn.close()

    def __enter__(self) -> 'RunLedger':
        return self

    def __exit__(self, *exc) -> None:
        self.close()
