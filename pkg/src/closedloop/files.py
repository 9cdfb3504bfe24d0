"""
Shared artifact helpers: matrix CSVs, JSON sidecars, output directories and
the provenance stamp (config hash + seed) every artifact carries.
"""

import csv
import dataclasses
import hashlib
import json
import os

import json_stream
import numpy as np

from .errors import ConfigError, ParseError

SCHEMA = "v1"

# 17 significant digits round-trip every float64 exactly
EXACT_FORMAT = "%.17g"

# report artifacts only need to be readable, not bit-exact
REPORT_FORMAT = "%.8g"

COMMENT = "#"


def config_hash(config_dict):
    """
    SHA-256 of the canonical JSON of a config dict. Keys are sorted and
    floats use repr, so equal configs hash equally across runs.
    """
    canonical = json.dumps(config_dict, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def stamp_line(stamp):
    if not stamp:
        return None
    parts = [f"{k}={stamp[k]}" for k in sorted(stamp)]
    return f"{COMMENT} closedloop {SCHEMA} " + " ".join(parts)


def prepare_output_dir(output_dir):
    output_dir = os.path.abspath(output_dir)
    if not os.path.isdir(output_dir):
        os.makedirs(output_dir, exist_ok=True)
    return output_dir


def write_rows(path, header, rows, stamp=None, fmt=REPORT_FORMAT):
    """
    Writes a CSV with an optional provenance comment line, a header row and
    numeric or string rows. Floats are formatted with `fmt`.
    """

    def cell(v):
        if isinstance(v, (float, np.floating)):
            return fmt % v
        return v

    with open(path, mode="w", newline="", encoding="utf-8") as fh:
        line = stamp_line(stamp)
        if line:
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        if header is not None:
            writer.writerow(header)
        for row in rows:
            writer.writerow([cell(v) for v in row])


def write_matrix(path, A, stamp=None, fmt=EXACT_FORMAT):
    """
    Matrix CSV: a `rows,cols` header line followed by one line per row.
    """
    A = np.asarray(A, dtype=np.float64)
    write_rows(path, [A.shape[0], A.shape[1]], A.tolist(), stamp=stamp, fmt=fmt)


def read_matrix(path):
    """
    Reads a matrix CSV written by `write_matrix`. Comment lines are skipped.
    Raises ParseError naming the line when the header and body disagree or a
    cell is not a finite number.
    """
    if not os.path.exists(path):
        raise ParseError(path, "missing file")
    rows = []
    shape = None
    header_line = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            lineno = reader.line_num
            if not row or row[0].startswith(COMMENT):
                continue
            if shape is None:
                header_line = lineno
                if len(row) != 2:
                    raise ParseError(path, "header must be 'rows,cols'", lineno, "header")
                try:
                    shape = (int(row[0]), int(row[1]))
                except ValueError:
                    raise ParseError(path, f"non-integer header {row}", lineno, "header")
                if shape[0] < 1 or shape[1] < 1:
                    raise ParseError(path, f"bad matrix shape {shape}", lineno, "header")
                continue
            if len(row) != shape[1]:
                raise ParseError(
                    path,
                    f"expected {shape[1]} columns from header, found {len(row)}",
                    lineno,
                    f"row {len(rows)}",
                )
            try:
                values = [float(v) for v in row]
            except ValueError as e:
                raise ParseError(path, str(e), lineno, f"row {len(rows)}")
            if not np.all(np.isfinite(values)):
                raise ParseError(path, "non-finite value", lineno, f"row {len(rows)}")
            rows.append(values)
    if shape is None:
        raise ParseError(path, "missing header", None, "header")
    if len(rows) != shape[0]:
        raise ParseError(
            path,
            f"header declares {shape[0]} rows, found {len(rows)}",
            header_line,
            "rows",
        )
    return np.array(rows, dtype=np.float64)


def write_json(path, data):
    with open(path, mode="w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    """
    Reads a JSON sidecar. Sidecars can hold full basis matrices, so they are
    streamed and converted to plain Python types.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            return json_stream.to_standard_types(json_stream.load(fh))
    except OSError as e:
        raise ParseError(path, f"cannot read: {e.strerror}")
    except ValueError as e:
        raise ParseError(path, f"invalid JSON: {e}")


def require(data, key, path):
    if key not in data:
        raise ParseError(path, "missing field", None, key)
    return data[key]


def dataclass_from_dict(cls, data, prefix, path=None):
    """
    Builds dataclass `cls` from a mapping, rejecting unknown keys. Missing
    keys fall back to field defaults. `prefix` is the dotted key path used in
    error messages.
    """
    if not isinstance(data, dict):
        raise ConfigError(prefix or "<root>", "expected an object", path)
    names = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in names:
            raise ConfigError(_dotted(prefix, key), "unknown key", path)
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name in data:
            kwargs[f.name] = data[f.name]
        elif (
            f.default is dataclasses.MISSING
            and f.default_factory is dataclasses.MISSING
        ):
            raise ConfigError(_dotted(prefix, f.name), "missing key", path)
    return cls(**kwargs)


def _dotted(prefix, key):
    return f"{prefix}.{key}" if prefix else key
