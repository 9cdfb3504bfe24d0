"""
Report artifacts: `metrics.json` (the EquilibriumReport) plus CSV tables and
SVG renderings of heatmaps, spectra, alignment residuals and, for the
single-subspace game, isometry ratios.
"""

import os

from .. import files
from ..errors import ParseError
from . import measures, render
from .verify import Thresholds, report_from_evidence

METRICS_JSON = "metrics.json"

HEATMAP_DATA_CSV = "heatmap_data.csv"
HEATMAP_REP_CSV = "heatmap_rep.csv"
SPECTRA_DATA_CSV = "spectra_data.csv"
SPECTRA_REP_CSV = "spectra_rep.csv"
RESIDUALS_CSV = "residuals.csv"
ISOMETRY_CSV = "isometry.csv"

HEATMAP_DATA_SVG = "heatmap_data.svg"
HEATMAP_REP_SVG = "heatmap_rep.svg"
SPECTRA_SVG = "spectra.svg"
RESIDUALS_SVG = "residuals.svg"
ISOMETRY_SVG = "isometry.svg"


def save_report(report, output_dir, stamp=None):
    output_dir = files.prepare_output_dir(output_dir)
    files.write_json(
        os.path.join(output_dir, METRICS_JSON), {**report.to_dict(), **(stamp or {})}
    )


def load_report(input_dir):
    """
    Reads metrics.json back and re-judges it from its evidence.
    """
    path = os.path.join(input_dir, METRICS_JSON)
    data = files.read_json(path)
    thresholds = Thresholds.from_dict(files.require(data, "thresholds", path), path=path)
    evidence = files.require(data, "evidence", path)
    try:
        return report_from_evidence(evidence, thresholds)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(path, f"incomplete evidence: {e}", None, "evidence")


def _spectra_rows(spectra):
    for j, s in enumerate(spectra):
        for i, value in enumerate(s):
            yield [j, i, float(value)]


def write_report_tables(enc, dec, ds, output_dir, stamp=None, rank_tol=None):
    """
    Writes every report CSV and SVG for the pair on the dataset. Returns the
    list of file names written.
    """
    output_dir = files.prepare_output_dir(output_dir)

    def out(name):
        return os.path.join(output_dir, name)

    part = ds.partition
    X = ds.X
    Z = enc(X)
    Zhat = enc(dec(Z))
    written = []

    for name, svg, M, title in (
        (HEATMAP_DATA_CSV, HEATMAP_DATA_SVG, X, "|cos| between samples"),
        (HEATMAP_REP_CSV, HEATMAP_REP_SVG, Z, "|cos| between representations"),
    ):
        C = measures.cosine_heatmap(M)
        files.write_matrix(out(name), C, stamp=stamp, fmt=files.REPORT_FORMAT)
        render.heatmap_svg(out(svg), C, title, stamp=stamp)
        written += [name, svg]

    spectra_data = measures.class_spectra(X, part)
    spectra_rep = measures.class_spectra(Z, part)
    header = ["class", "index", "singular_value"]
    files.write_rows(out(SPECTRA_DATA_CSV), header, _spectra_rows(spectra_data), stamp)
    files.write_rows(out(SPECTRA_REP_CSV), header, _spectra_rows(spectra_rep), stamp)
    render.spectra_svg(
        out(SPECTRA_SVG), spectra_rep, "class spectra of representations", stamp=stamp
    )
    written += [SPECTRA_DATA_CSV, SPECTRA_REP_CSV, SPECTRA_SVG]

    kwargs = {} if rank_tol is None else {"rank_tol": rank_tol}
    residuals = measures.alignment_residuals(Z, Zhat, part, **kwargs)
    relative = measures.relative_residuals(Z, residuals)
    files.write_rows(
        out(RESIDUALS_CSV),
        ["sample", "class", "residual", "relative"],
        (
            [i, int(part.labels[i]), float(residuals[i]), float(relative[i])]
            for i in range(part.n)
        ),
        stamp,
    )
    render.histogram_svg(
        out(RESIDUALS_SVG), relative, "relative alignment residuals", stamp=stamp
    )
    written += [RESIDUALS_CSV, RESIDUALS_SVG]

    if ds.k == 1:
        i, j, ratios = measures.isometry_pairs(X, Z)
        files.write_rows(
            out(ISOMETRY_CSV),
            ["i", "j", "ratio"],
            ([int(a), int(b), float(r)] for a, b, r in zip(i, j, ratios)),
            stamp,
        )
        render.histogram_svg(out(ISOMETRY_SVG), ratios, "isometry ratios", stamp=stamp)
        written += [ISOMETRY_CSV, ISOMETRY_SVG]
    return written
