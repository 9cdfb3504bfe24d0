"""
Training history files: `history.csv` with one row per outer step and a
`history.json` sidecar with the wall-clock timings.
"""

import csv
import os

from .. import files
from ..errors import ParseError
from .gdmax import HISTORY_COLUMNS, TrainHistory

HISTORY_CSV = "history.csv"
HISTORY_JSON = "history.json"

KIND = "history"

_INT_COLUMNS = {"step", "epoch", "inner_steps"}


def save_history(history, output_dir, stamp=None):
    stamp = stamp or {}
    output_dir = files.prepare_output_dir(output_dir)
    files.write_rows(
        os.path.join(output_dir, HISTORY_CSV),
        HISTORY_COLUMNS,
        history.rows,
        stamp=stamp,
        fmt=files.EXACT_FORMAT,
    )
    files.write_json(
        os.path.join(output_dir, HISTORY_JSON),
        {
            "schema": files.SCHEMA,
            "kind": KIND,
            "steps": len(history),
            "elapsed_seconds": history.elapsed,
            **stamp,
        },
    )


def load_history(input_dir):
    path = os.path.join(input_dir, HISTORY_CSV)
    if not os.path.exists(path):
        raise ParseError(path, "missing file")
    history = TrainHistory()
    header = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for cells in reader:
            lineno = reader.line_num
            if not cells or cells[0].startswith(files.COMMENT):
                continue
            if header is None:
                header = cells
                if header != HISTORY_COLUMNS:
                    raise ParseError(path, f"unexpected columns {header}", lineno, "header")
                continue
            if len(cells) != len(header):
                raise ParseError(path, f"expected {len(header)} cells", lineno)
            try:
                row = [
                    int(v) if name in _INT_COLUMNS else float(v)
                    for name, v in zip(header, cells)
                ]
            except ValueError as e:
                raise ParseError(path, str(e), lineno)
            history.append(row, None)
    return history
