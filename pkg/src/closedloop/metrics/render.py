"""
Minimal SVG renderings of the report CSVs. The CSVs are authoritative; these
are for eyeballing.
"""

import numpy as np

from .. import files
from . import env

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]


def block_average(C, max_cells=env.HEATMAP_MAX_CELLS):
    """
    Averages C over square blocks so neither side exceeds `max_cells`. The
    last block on each side may be smaller.
    """
    n = C.shape[0]
    size = -(-n // max_cells)
    if size == 1:
        return C
    starts = np.arange(0, n, size)
    widths = np.diff(np.append(starts, n))
    sums = np.add.reduceat(np.add.reduceat(C, starts, axis=0), starts, axis=1)
    return sums / np.outer(widths, widths)


def _document(width, height, body, title, stamp=None):
    line = files.stamp_line(stamp)
    desc = f"<desc>{line}</desc>\n" if line else ""
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f"<title>{title}</title>\n"
        + desc
        + f'<rect width="{width}" height="{height}" fill="white"/>\n'
        + "".join(body)
        + "</svg>\n"
    )


def heatmap_svg(path, C, title, cell=4, stamp=None):
    C = block_average(np.asarray(C, dtype=np.float64))
    m = C.shape[0]
    body = []
    for a in range(m):
        for b in range(m):
            # white at 0, black at 1
            level = int(round(255 * (1.0 - float(np.clip(C[a, b], 0.0, 1.0)))))
            body.append(
                f'<rect x="{b * cell}" y="{a * cell}" width="{cell}" height="{cell}" '
                f'fill="rgb({level},{level},{level})"/>\n'
            )
    _write(path, _document(m * cell, m * cell, body, title, stamp))


def spectra_svg(path, spectra, title, width=600, height=240, stamp=None):
    """
    One group of bars per class, bar height proportional to the singular
    value relative to the largest overall.
    """
    spectra = [np.asarray(s, dtype=np.float64) for s in spectra]
    top = max((s.max() for s in spectra if s.size), default=0.0) or 1.0
    total = sum(s.size for s in spectra) + len(spectra) - 1
    bar = width / max(total, 1)
    body = []
    x = 0.0
    for j, s in enumerate(spectra):
        color = PALETTE[j % len(PALETTE)]
        for value in s:
            h = (height - 10) * value / top
            body.append(
                f'<rect x="{x:.2f}" y="{height - h:.2f}" width="{bar * 0.9:.2f}" '
                f'height="{h:.2f}" fill="{color}"/>\n'
            )
            x += bar
        x += bar
    _write(path, _document(width, height, body, title, stamp))


def histogram_svg(
    path, values, title, bins=env.HISTOGRAM_BINS, width=600, height=240, stamp=None
):
    values = np.asarray(values, dtype=np.float64)
    body = []
    if values.size:
        counts, _ = np.histogram(values, bins=bins)
        top = counts.max() or 1
        bar = width / bins
        for i, c in enumerate(counts):
            h = (height - 10) * c / top
            body.append(
                f'<rect x="{i * bar:.2f}" y="{height - h:.2f}" width="{bar * 0.9:.2f}" '
                f'height="{h:.2f}" fill="{PALETTE[0]}"/>\n'
            )
    _write(path, _document(width, height, body, title, stamp))


def _write(path, text):
    with open(path, mode="w", encoding="utf-8") as fh:
        fh.write(text)
