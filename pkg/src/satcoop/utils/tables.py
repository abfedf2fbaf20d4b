import json
import logging
import math
import numbers
from pathlib import Path
from typing import Iterable

import pandas as pd

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 9


def format_value(value) -> str:
    """Numeral token used in both the CSV and the JSON mirror ("" means missing)."""
    if value is None:
        return ""
    if isinstance(value, bool) or type(value).__name__ == "bool_":
        return "1" if value else "0"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        value = float(value)
        if math.isnan(value):
            return ""
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _is_numeric(value) -> bool:
    return isinstance(value, numbers.Number) or type(value).__name__ == "bool_"


def _json_token(value) -> str:
    token = format_value(value)
    if token == "":
        return "null"
    if _is_numeric(value) and token not in ("inf", "-inf"):
        return token
    return json.dumps(token)


def format_frame(frame: pd.DataFrame) -> pd.DataFrame:
    return frame.astype(object).map(format_value)


def write_table(frame: pd.DataFrame, destination, fmt: str = "csv") -> list[Path]:
    """Write ``frame`` as ``<destination>.csv`` (and ``.json`` for ``csv+json``).

    Rows keep the frame's order; every float carries nine significant digits so
    the files are reproducible byte for byte.
    """
    if frame.empty:
        raise ValueError(f"Refusing to write an empty table to {destination}")
    if fmt not in ("csv", "csv+json"):
        raise ValueError(f"Unknown output format {fmt!r}; use 'csv' or 'csv+json'")

    base = Path(destination)
    csv_path = base.with_suffix(".csv")
    written = []
    try:
        format_frame(frame).to_csv(csv_path, index=False, lineterminator="\n")
        written.append(csv_path)
        if fmt == "csv+json":
            json_path = base.with_suffix(".json")
            json_path.write_text(_json_mirror(frame), encoding="utf-8")
            written.append(json_path)
    except OSError as exc:
        raise OSError(f"Cannot write table to {exc.filename or base}: {exc.strerror}") from exc

    logger.info("Wrote %s (%d rows)", ", ".join(str(p) for p in written), len(frame))
    return written


def _json_mirror(frame: pd.DataFrame) -> str:
    columns = ", ".join(json.dumps(str(name)) for name in frame.columns)
    rows = _json_rows(frame.itertuples(index=False, name=None))
    return f'{{"columns": [{columns}], "rows": [{rows}]}}\n'


def _json_rows(records: Iterable[tuple]) -> str:
    return ", ".join(
        "[" + ", ".join(_json_token(value) for value in record) + "]" for record in records
    )
