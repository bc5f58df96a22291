import logging
import math

import numpy as np
import pandas as pd

from relcomp.reports import CSV_COLUMNS

logger = logging.getLogger(__name__)


class ReportExporter:
    """Bench rows as a DataFrame with the fixed column order, written to CSV/JSON/XLSX."""

    def to_frame(self, rows):
        df = pd.DataFrame(list(rows))
        for col in CSV_COLUMNS:
            if col not in df.columns:
                df[col] = ""
        return df[CSV_COLUMNS]

    def write_csv(self, frame, path):
        frame.to_csv(path, index=False)
        logger.info(f"CSV report written to {path}")

    def write_json(self, frame, path):
        frame.to_json(path, orient="records", indent=2)
        logger.info(f"JSON report written to {path}")

    def write_xlsx(self, frame, path):
        frame.to_excel(path, index=False, engine="openpyxl")
        logger.info(f"XLSX report written to {path}")

    def summary(self, frame):
        """Total milliseconds per (algo, n)."""
        if frame.empty:
            return pd.DataFrame(columns=["algo", "n", "millis"])
        return frame.groupby(["algo", "n"], as_index=False)["millis"].sum()

    def scaling_exponent(self, frame, algo):
        """Log-log slope of total time against n, or None with fewer than two sizes."""
        totals = self.summary(frame)
        totals = totals[(totals["algo"] == algo) & (totals["millis"] > 0)]
        if totals["n"].nunique() < 2:
            return None
        slope, _ = np.polyfit(np.log(totals["n"].astype(float)), np.log(totals["millis"].astype(float)), 1)
        return None if math.isnan(slope) else float(slope)
