import aiosqlite
import logging

logger = logging.getLogger(__name__)

ROW_FIELDS = ("algo", "n", "m", "d", "mu", "delta", "phase", "millis", "verified", "generic", "digest")


class BenchDatabase:
    def __init__(self, db_path="relcomp_bench.db"):
        self.db_path = db_path

    async def init_db(self):
        """Creates the bench history table."""
        async with aiosqlite.connect(self.db_path) as db:
            await db.execute("""
                CREATE TABLE IF NOT EXISTS bench_runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id TEXT,
                    algo TEXT,
                    n INTEGER,
                    m INTEGER,
                    d INTEGER,
                    mu INTEGER,
                    delta INTEGER,
                    phase TEXT,
                    millis REAL,
                    verified BOOLEAN, -- NULL when verification was skipped
                    generic BOOLEAN,
                    digest TEXT,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            """)
            await db.commit()
            logger.info("Bench database initialized.")

    async def add_rows(self, run_id, rows):
        """Stores the report rows of one sweep."""
        async with aiosqlite.connect(self.db_path) as db:
            await db.executemany(
                f"INSERT INTO bench_runs (run_id, {', '.join(ROW_FIELDS)}) VALUES ({', '.join('?' * (len(ROW_FIELDS) + 1))})",
                [(run_id, *(row.get(k) for k in ROW_FIELDS)) for row in rows]
            )
            await db.commit()
        logger.info(f"Stored {len(rows)} rows for run {run_id}")

    async def get_runs(self, run_id=None):
        """Rows of one run, or of every run, in insertion order."""
        async with aiosqlite.connect(self.db_path) as db:
            db.row_factory = aiosqlite.Row
            if run_id is not None:
                query = "SELECT * FROM bench_runs WHERE run_id = ? ORDER BY id ASC"
                async with db.execute(query, (run_id,)) as cursor:
                    rows = await cursor.fetchall()
            else:
                async with db.execute("SELECT * FROM bench_runs ORDER BY id ASC") as cursor:
                    rows = await cursor.fetchall()
            return [dict(row) for row in rows]

    async def latest_run_id(self):
        async with aiosqlite.connect(self.db_path) as db:
            async with db.execute("SELECT run_id FROM bench_runs ORDER BY id DESC LIMIT 1") as cursor:
                row = await cursor.fetchone()
            return row[0] if row else None
