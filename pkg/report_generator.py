import json
import math
import os
import sys
from enum import Enum
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from config import FLOAT_FORMAT, SWEEP_CSV_COLUMNS


def format_float(x: float) -> str:
    """17 significant digits; non-finite values become JSON strings."""
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return FLOAT_FORMAT % x


def _encode(value, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)

    if isinstance(value, Enum):
        value = value.value
    if value is None or isinstance(value, (bool, np.bool_)):
        return json.dumps(None if value is None else bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json_text(obj, indent: int = 2) -> str:
    """
    Serialize dicts/lists of numbers and strings with every float written at
    17 significant digits, so that float(text) reproduces the value bit-exactly.
    """
    return _encode(obj, indent, 0) + "\n"


def parse_float(value) -> float:
    """Inverse of format_float for values read back from JSON."""
    if value is None:
        return math.nan
    return float(value)


class ReportGenerator:
    """
    Writes command results as JSON or CSV.

    Machine output goes to stdout unless an output path is given; status
    lines go to stderr so that stdout stays parseable.
    """

    def __init__(self, output_path: Optional[str] = None, fmt: str = "json"):
        """
        Args:
            output_path: file to write, None for stdout
            fmt: "json" or "csv"
        """
        if fmt not in ("json", "csv"):
            raise ValueError(f"unknown output format {fmt!r}")
        self.output_path = output_path
        self.fmt = fmt

    def _save_with_error_handling(self, text: str) -> Optional[str]:
        """Write text to the output path (or stdout); fall back to *_new on a locked file."""
        if self.output_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return None

        directory = os.path.dirname(self.output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        try:
            with open(self.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            return self.output_path
        except PermissionError:
            print(f"⚠️  Cannot write to {self.output_path} - file may be locked", file=sys.stderr)
            root, ext = os.path.splitext(self.output_path)
            alt_path = f"{root}_new{ext}"
            with open(alt_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            print(f"   Saved as alternative: {alt_path}", file=sys.stderr)
            return alt_path

    @staticmethod
    def frame_to_csv(df: pd.DataFrame) -> str:
        return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    def write_frame(self, df: pd.DataFrame, label: str) -> Optional[str]:
        """Write a table: CSV as is, JSON as a list of row objects."""
        if self.fmt == "csv":
            text = self.frame_to_csv(df)
        else:
            text = to_json_text(df.to_dict(orient="records"))
        path = self._save_with_error_handling(text)
        if path is not None:
            print(f"✓ {label}: {path}", file=sys.stderr)
            print(f"  Rows: {len(df)}", file=sys.stderr)
        return path

    def write_result(self, result: Dict, label: str = "Result") -> Optional[str]:
        """Write one flat result object (CSV: header + one row)."""
        if self.fmt == "csv":
            text = self.frame_to_csv(pd.DataFrame([result]))
        else:
            text = to_json_text(result)
        path = self._save_with_error_handling(text)
        if path is not None:
            print(f"✓ {label}: {path}", file=sys.stderr)
        return path

    def write_text(self, text: str, label: str) -> Optional[str]:
        path = self._save_with_error_handling(text)
        if path is not None:
            print(f"✓ {label}: {path}", file=sys.stderr)
        return path


def sweep_frame(rows: Iterable) -> pd.DataFrame:
    """Sweep rows (objects with to_dict) as a table with the fixed CSV header."""
    records: List[Dict] = [row.to_dict() for row in rows]
    return pd.DataFrame(records, columns=SWEEP_CSV_COLUMNS)
