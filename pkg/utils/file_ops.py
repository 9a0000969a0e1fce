"""File operations utilities - PLATFORM INDEPENDENT"""

import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

logger = logging.getLogger(__name__)


def _cell(value) -> str:
    # repr keeps every digit of a float and ignores the locale
    if isinstance(value, float):
        return repr(value)
    return str(value)


class FileOperations:
    """Utility class for file operations - PLATFORM INDEPENDENT"""

    def ensure_directory(self, directory: Path) -> bool:
        try:
            directory.mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            logger.error(f"Error creating directory {directory}: {e}")
            return False

    def write_csv(self, file_path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
        """Write rows with a header line; returns the row count"""
        self.ensure_directory(file_path.parent)
        count = 0
        with open(file_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
                count += 1
        logger.debug(f"Wrote {count} rows to {file_path}")
        return count

    def read_csv(self, file_path: Path) -> List[Dict[str, str]]:
        with open(file_path, "r", newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))

    def read_csv_columns(self, file_path: Path, columns: Sequence[str]) -> Dict[str, List[float]]:
        """Numeric columns of a CSV written by write_csv"""
        rows = self.read_csv(file_path)
        return {c: [float(r[c]) for r in rows] for c in columns}
