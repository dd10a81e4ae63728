"""Deterministic report writers: canonical JSON, CSV tables, PNG figures.

Every artifact embeds the run manifest (command, flags, seed, package
version, input digests) so a report can be traced back to the exact
invocation.  Writers are byte-deterministic: JSON is dumped with sorted
keys and shortest-roundtrip floats, CSV uses fixed "\n" newlines, and
figures are rendered on the Agg backend with the software/date metadata
stripped so the PNG bytes depend only on the plotted data.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field

from .simulation import ErrorRateTable, PowerCurve

__all__ = [
    "RunManifest",
    "canonical_json",
    "compact_json",
    "hash_file",
    "write_json_report",
    "write_csv_report",
    "save_line_plot",
    "write_power_outputs",
    "write_type1_outputs",
]


@dataclass(frozen=True)
class RunManifest:
    command: str
    flags: dict = field(default_factory=dict)
    seed: int | None = None
    version: str = "0"
    input_digests: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "flags": {k: self.flags[k] for k in sorted(self.flags)},
            "seed": self.seed,
            "version": self.version,
            "input_digests": {k: self.input_digests[k] for k in sorted(self.input_digests)},
        }


def canonical_json(obj) -> str:
    """Sorted-key, indented JSON; round-trips through json.loads exactly."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def compact_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def hash_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def write_json_report(path: str, payload: dict, manifest: RunManifest) -> str:
    body = dict(payload)
    body["manifest"] = manifest.to_dict()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_json(body))
    return path


def format_csv(header, rows, manifest: RunManifest | None = None) -> str:
    buf = io.StringIO()
    if manifest is not None:
        buf.write(f"# manifest: {compact_json(manifest.to_dict())}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def write_csv_report(path: str, header, rows, manifest: RunManifest | None = None) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(header, rows, manifest))
    return path


def save_line_plot(
    path: str,
    x,
    series: dict,
    xlabel: str,
    ylabel: str,
    title: str,
    manifest: RunManifest | None = None,
    hlines: tuple = (),
) -> str:
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    for label, ys in series.items():
        ax.plot(x, ys, marker="o", markersize=3.5, linewidth=1.2, label=label)
    for level in hlines:
        ax.axhline(level, color="grey", linestyle="--", linewidth=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    metadata = {"Software": None}
    if manifest is not None:
        metadata["Comment"] = compact_json(manifest.to_dict())
    fig.savefig(path, dpi=120, metadata=metadata)
    plt.close(fig)
    return path


def write_power_outputs(
    out_dir: str, curve: PowerCurve, manifest: RunManifest, stem: str = "power"
) -> list[str]:
    cfg = curve.config
    payload = {
        "study": "power",
        "config": {
            "n": cfg.n,
            "reps": cfg.reps,
            "alpha": cfg.alpha,
            "mu_x": cfg.mu_x,
            "mu_y_grid": list(cfg.mu_y_grid),
            "sigma": cfg.sigma,
            "seed": cfg.seed,
            "quantile_mode": cfg.quantile_mode.value,
        },
        "threshold": curve.threshold,
        "rows": [
            {
                "mu_y": curve.mu_y[i],
                "delta": curve.delta[i],
                "power_crossvar": curve.power_proposed[i],
                "power_t": curve.power_t[i],
            }
            for i in range(len(curve.mu_y))
        ],
    }
    paths = [
        write_json_report(os.path.join(out_dir, f"{stem}.json"), payload, manifest),
        write_csv_report(
            os.path.join(out_dir, f"{stem}.csv"),
            ["mu_y", "delta", "power_crossvar", "power_t"],
            [
                [curve.mu_y[i], curve.delta[i], curve.power_proposed[i], curve.power_t[i]]
                for i in range(len(curve.mu_y))
            ],
            manifest,
        ),
        write_csv_report(
            os.path.join(out_dir, f"{stem}_plot.csv"),
            ["delta", "power_crossvar", "power_t"],
            [
                [curve.delta[i], curve.power_proposed[i], curve.power_t[i]]
                for i in range(len(curve.mu_y))
            ],
            manifest,
        ),
        save_line_plot(
            os.path.join(out_dir, f"{stem}.png"),
            list(curve.delta),
            {
                "cross-variance": list(curve.power_proposed),
                "pooled t": list(curve.power_t),
            },
            xlabel="mean difference",
            ylabel="rejection rate",
            title=f"Power, n={cfg.n}, sigma={cfg.sigma}, alpha={cfg.alpha}",
            manifest=manifest,
            hlines=(cfg.alpha,),
        ),
    ]
    return paths


def write_type1_outputs(
    out_dir: str, table: ErrorRateTable, manifest: RunManifest, stem: str = "type1"
) -> list[str]:
    payload = {
        "study": "type1",
        "mu": table.mu,
        "reps": table.reps,
        "seed": table.seed,
        "alphas": list(table.alphas),
        "rows": [
            {
                "n": row.n,
                "sigma": row.sigma,
                "rate_crossvar": {str(a): row.rate_proposed[a] for a in table.alphas},
                "rate_t": {str(a): row.rate_t[a] for a in table.alphas},
            }
            for row in table.rows
        ],
    }
    csv_rows = [
        [row.n, row.sigma, a, row.rate_proposed[a], row.rate_t[a]]
        for row in table.rows
        for a in table.alphas
    ]
    ns = sorted({row.n for row in table.rows})
    sigmas = sorted({row.sigma for row in table.rows})
    by_cell = {(row.n, row.sigma): row for row in table.rows}
    series = {
        f"sigma={sigma}, alpha={a}": [by_cell[(n, sigma)].rate_proposed[a] for n in ns]
        for sigma in sigmas
        for a in table.alphas
    }
    paths = [
        write_json_report(os.path.join(out_dir, f"{stem}.json"), payload, manifest),
        write_csv_report(
            os.path.join(out_dir, f"{stem}.csv"),
            ["n", "sigma", "alpha", "rate_crossvar", "rate_t"],
            csv_rows,
            manifest,
        ),
        write_csv_report(
            os.path.join(out_dir, f"{stem}_plot.csv"),
            ["n"] + [f"rate[sigma={sigma},alpha={a}]" for sigma in sigmas for a in table.alphas],
            [
                [n] + [by_cell[(n, sigma)].rate_proposed[a] for sigma in sigmas for a in table.alphas]
                for n in ns
            ],
            manifest,
        ),
        save_line_plot(
            os.path.join(out_dir, f"{stem}.png"),
            ns,
            series,
            xlabel="sample size",
            ylabel="null rejection rate",
            title=f"Type I error, mu={table.mu}, M={table.reps}",
            manifest=manifest,
            hlines=tuple(table.alphas),
        ),
    ]
    return paths
