"""CSV emission and figure rendering for the CLI.

CSV files are the primary output: decimal floats at 17 significant digits,
complex values split into re/im columns, header row, UNIX newlines, written
atomically (temp file then rename) so identical runs yield byte-identical
files.  Figures are rendered beside the CSVs as PNGs and carry no data that
is not already in the delimited output.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "format_value",
    "write_csv",
    "render_reconstruction",
    "render_consistency",
    "render_sweep",
    "render_noise",
]


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write rows atomically; values are formatted per column type."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    os.replace(tmp, path)
    return path


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_reconstruction(
    path: str | Path,
    sample_instants: np.ndarray,
    samples: np.ndarray,
    output_grids: Sequence[np.ndarray],
    originals: Sequence[np.ndarray] | None = None,
) -> Path:
    """Inputs vs reconstructions (left) and the sampled outputs (right)."""
    plt = _plt()
    n_rows = max(len(output_grids), samples.shape[0])
    fig, axes = plt.subplots(n_rows, 2, figsize=(10, 2.4 * n_rows), squeeze=False)
    for r, grid in enumerate(output_grids):
        ax = axes[r][0]
        t = 2.0 * np.pi * np.arange(len(grid)) / len(grid)
        if originals is not None:
            ax.plot(t, np.real(originals[r]), "k-", lw=1.0, label="original")
        ax.plot(t, np.real(grid), "r--", lw=1.0, label="reconstructed")
        ax.set_title(f"input {r + 1}")
        ax.legend(fontsize=7)
    for r in range(len(output_grids), n_rows):
        axes[r][0].axis("off")
    for m in range(samples.shape[0]):
        ax = axes[m][1]
        ax.stem(sample_instants, np.real(samples[m]), basefmt=" ")
        ax.set_title(f"output {m + 1} samples")
    for m in range(samples.shape[0], n_rows):
        axes[m][1].axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return Path(path)


def render_consistency(
    path: str | Path,
    sample_instants: np.ndarray,
    original: np.ndarray,
    resampled: np.ndarray,
) -> Path:
    """Original vs resampled grids, one panel per output channel."""
    plt = _plt()
    n_rows = original.shape[0]
    fig, axes = plt.subplots(n_rows, 1, figsize=(9, 2.2 * n_rows), squeeze=False)
    for m in range(n_rows):
        ax = axes[m][0]
        ax.plot(sample_instants, np.real(original[m]), "ko", ms=4, label="original")
        ax.plot(sample_instants, np.real(resampled[m]), "r+", ms=7, label="resampled")
        dev = np.abs(original[m] - resampled[m]).max()
        ax.set_title(f"output {m + 1}: max deviation {dev:.3e}")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return Path(path)


def render_sweep(path: str | Path, rows: Sequence[tuple]) -> Path:
    """Error curves vs per-channel sample count, one panel per input.

    Rows are (L, channel, actual, averaged, bound).
    """
    plt = _plt()
    channels = sorted({row[1] for row in rows})
    fig, axes = plt.subplots(1, len(channels), figsize=(5 * len(channels), 3.4), squeeze=False)
    for i, ch in enumerate(channels):
        ax = axes[0][i]
        pts = [row for row in rows if row[1] == ch]
        ls = [row[0] for row in pts]
        ax.semilogy(ls, [row[2] for row in pts], "o-", label="actual")
        ax.semilogy(ls, [row[3] for row in pts], "s--", label="averaged")
        ax.semilogy(ls, [row[4] for row in pts], "^:", label="bound")
        ax.set_xlabel("samples per channel")
        ax.set_title(f"input {ch}")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return Path(path)


def render_noise(path: str | Path, rows: Sequence[tuple], xlabel: str) -> Path:
    """Noisy reconstruction error vs the swept variable.

    Rows are (swept value, channel, error).
    """
    plt = _plt()
    channels = sorted({row[1] for row in rows})
    fig, axes = plt.subplots(1, len(channels), figsize=(5 * len(channels), 3.4), squeeze=False)
    for i, ch in enumerate(channels):
        ax = axes[0][i]
        pts = [row for row in rows if row[1] == ch]
        ax.plot([row[0] for row in pts], [row[2] for row in pts], "o-")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("error")
        ax.set_title(f"input {ch}")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return Path(path)
