"""Render failure-rate and inactivation-count curves from sweep CSV files."""

from __future__ import annotations

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_COLUMNS = [
    "code",
    "decoder",
    "p",
    "trials",
    "failures",
    "failure_rate",
    "mean_inactivations",
    "mean_core_dim",
    "mean_fixed_bits",
    "mean_hard_guesses",
    "seed",
    "wall_seconds",
]


def read_sweep_csv(path: str) -> list[dict]:
    with open(path) as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames != EXPECTED_COLUMNS:
        raise ValueError(
            f"{path}: unexpected columns {reader.fieldnames}; expected {EXPECTED_COLUMNS}"
        )
    rows = []
    for row in reader:
        rows.append(
            {
                "code": row["code"],
                "decoder": row["decoder"],
                "p": float(row["p"]),
                "failure_rate": float(row["failure_rate"]),
                "mean_inactivations": float(row["mean_inactivations"]),
            }
        )
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def _curves(rows: list[dict], value_key: str) -> dict[tuple[str, str], tuple[list, list]]:
    series: dict[tuple[str, str], tuple[list, list]] = {}
    for row in sorted(rows, key=lambda r: r["p"]):
        key = (row["code"], row["decoder"])
        xs, ys = series.setdefault(key, ([], []))
        xs.append(row["p"])
        ys.append(row[value_key])
    return series


def _render(rows: list[dict], value_key: str, ylabel: str, out_path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 5))
    for (code, decoder), (xs, ys) in _curves(rows, value_key).items():
        # log scale: keep strictly positive points only
        pts = [(x, y) for x, y in zip(xs, ys) if y > 0]
        if not pts:
            continue
        ax.plot([x for x, _ in pts], [y for _, y in pts], marker="o", label=f"{code} {decoder}")
    ax.set_xlabel("erasure rate p")
    ax.set_ylabel(ylabel)
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_results(csv_path: str, out_image_prefix: str) -> tuple[str, str]:
    """Write `<prefix>_failure_rate.png` and `<prefix>_inactivations.png`."""
    rows = read_sweep_csv(csv_path)
    failure_path = f"{out_image_prefix}_failure_rate.png"
    inact_path = f"{out_image_prefix}_inactivations.png"
    _render(rows, "failure_rate", "logical + non-convergent error rate", failure_path)
    _render(rows, "mean_inactivations", "mean inactivations per decoded side", inact_path)
    return failure_path, inact_path


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else argv
    if len(args) != 2:
        print("usage: plot_results.py <sweep.csv> <output-prefix>", file=sys.stderr)
        return 2
    paths = plot_results(args[0], args[1])
    for p in paths:
        print(f"wrote {p}")
    return 0
