"""Deterministic SVG rendering of gain profiles.

Regenerating a plot from identical inputs must produce byte-identical SVG
so plots can be regression-tested and diffed.  Two matplotlib knobs make
that hold: a fixed ``svg.hashsalt`` (element ids are content hashes, not
object ids) and a pinned creation date in the metadata.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_HASHSALT = "paramp"


def read_profile_csv(path) -> tuple[list[float], list[float]]:
    """(signal frequency in GHz, gain in dB) columns of a gain CSV."""
    path = Path(path)
    if not path.exists():
        raise ValueError(f"profile CSV not found: {path}")
    freqs: list[float] = []
    gains: list[float] = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        needed = ("signal_freq_hz", "gain_db")
        if reader.fieldnames is None or any(c not in reader.fieldnames
                                            for c in needed):
            raise ValueError(f"{path}: expected columns {needed}, "
                             f"got {reader.fieldnames}")
        for row in reader:
            try:
                freqs.append(float(row["signal_freq_hz"]) / 1e9)
                gains.append(float(row["gain_db"]))
            except (TypeError, ValueError):
                raise ValueError(
                    f"{path}: line {reader.line_num}: non-numeric row") from None
    if not freqs:
        raise ValueError(f"{path}: no data rows")
    return freqs, gains


def emit_svg(inputs: list, out_path, title: str | None = None) -> Path:
    """Overlay one polyline per input gain CSV and write an SVG.

    Legend entries are the input file basenames.  Inputs must share the
    gain-CSV column layout; the output is byte-identical for identical
    inputs.
    """
    if not inputs:
        raise ValueError("emit_svg needs at least one input CSV")
    curves = [(Path(p).stem, *read_profile_csv(p)) for p in inputs]
    out_path = Path(out_path)

    # fonttype "none" keeps labels as searchable <text> elements instead of
    # glyph outlines, which also keeps the files small and diffable
    with plt.rc_context({"svg.hashsalt": _HASHSALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        for label, freqs, gains in curves:
            ax.plot(freqs, gains, label=label)
        ax.set_xlabel("frequency (GHz)")
        ax.set_ylabel("gain (dB)")
        if title:
            ax.set_title(title)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return out_path
