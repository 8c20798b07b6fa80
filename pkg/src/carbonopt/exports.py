"""Result serialization: CSV/JSON renderers, atomic file writes, run manifests.

All column layouts are documented in ``docs/outputs.md``. Floats are
written with ``repr`` so files round-trip bit-exactly and re-runs can be
compared byte for byte. Files are staged in memory and written through a
temp-file rename, so a failing command leaves no partial outputs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from dataclasses import asdict, dataclass
from pathlib import Path

from .nsga2 import FrontArchive
from .simulation import Event, SimulationResult


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _rows_to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_per_year_csv(result: SimulationResult, start_year: int) -> str:
    """Energy per (year, technology) with a trailing objectives row."""
    rows = []
    for offset, year_result in enumerate(result.per_year):
        year = start_year + offset
        for tech in sorted(year_result.energy_by_technology):
            rows.append(
                ["energy", year, tech, year_result.energy_by_technology[tech], None, None]
            )
    final_year = start_year + len(result.per_year) - 1
    rows.append(
        [
            "objectives",
            final_year,
            None,
            None,
            result.objective_price,
            result.objective_rci,
        ]
    )
    return _rows_to_csv(
        ["record", "year", "technology", "energy_mwh", "objective_price", "objective_rci"],
        rows,
    )


def render_year_summary_csv(result: SimulationResult, start_year: int) -> str:
    """One row per simulated year with prices, emissions and shortfall."""
    rows = []
    for offset, (year_result, tax) in enumerate(zip(result.per_year, result.carbon_prices)):
        rows.append(
            [
                start_year + offset,
                tax,
                year_result.average_price,
                year_result.emissions_t,
                year_result.carbon_intensity,
                year_result.unserved_mwh,
                sum(year_result.energy_by_technology.values()),
            ]
        )
    return _rows_to_csv(
        [
            "year",
            "carbon_price",
            "average_price",
            "emissions_t",
            "carbon_intensity",
            "unserved_mwh",
            "served_mwh",
        ],
        rows,
    )


def render_events_csv(events: tuple[Event, ...]) -> str:
    rows = [
        [e.year, e.kind, e.genco, e.technology, e.plant_id, e.unit_count, e.capital_cost, e.npv]
        for e in events
    ]
    return _rows_to_csv(
        ["year", "kind", "genco", "technology", "plant_id", "unit_count", "capital_cost", "npv"],
        rows,
    )


def render_objectives_json(result: SimulationResult) -> str:
    return (
        json.dumps(
            {
                "objective_price": result.objective_price,
                "objective_rci": result.objective_rci,
            },
            indent=2,
        )
        + "\n"
    )


def render_generations_csv(archive: FrontArchive, objective_names: list[str]) -> str:
    """Full evolution trace: every individual of every archived generation."""
    if not archive.snapshots:
        return _rows_to_csv(["generation", "individual"], [])
    n_genes = archive.snapshots[0].genomes.shape[1]
    header = (
        ["generation", "individual"]
        + [f"gene_{i + 1}" for i in range(n_genes)]
        + list(objective_names)
        + ["rank", "crowding"]
    )
    rows = []
    for snap in archive.snapshots:
        for i in range(snap.genomes.shape[0]):
            rows.append(
                [snap.generation, i]
                + [float(v) for v in snap.genomes[i]]
                + [float(v) for v in snap.objectives[i]]
                + [int(snap.ranks[i]), float(snap.crowding[i])]
            )
    return _rows_to_csv(header, rows)


def render_pareto_json(archive: FrontArchive, objective_names: list[str]) -> str:
    """Final first front; infinite crowding serializes as null (boundary points)."""
    entries = []
    for ind in archive.final_front:
        entries.append(
            {
                "genome": [float(v) for v in ind.genome],
                "objectives": {
                    name: float(v) for name, v in zip(objective_names, ind.objectives)
                },
                "rank": ind.rank,
                "crowding": None if math.isinf(ind.crowding) else float(ind.crowding),
            }
        )
    return json.dumps(entries, indent=2) + "\n"


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a same-directory temp file and rename, so readers never see partials."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_output_set(out_dir: Path, files: dict[str, str]) -> list[str]:
    """Atomically write a set of fully rendered files into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        atomic_write_text(out_dir / name, text)
    return sorted(files)


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    digest.update(Path(path).read_bytes())
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Record of one CLI run, sufficient to reproduce its outputs exactly.

    The ``timings`` block is wall-clock metadata and the only part of an
    output set that varies between identical runs.
    """

    command: str
    args: dict
    seed: int
    version: str
    scenario_sha256: str | None
    outputs: list[str]
    timings: dict


MANIFEST_NAME = "manifest.json"


def write_manifest(out_dir: Path, manifest: RunManifest) -> None:
    atomic_write_text(
        Path(out_dir) / MANIFEST_NAME, json.dumps(asdict(manifest), indent=2) + "\n"
    )


def load_manifest(path: Path) -> RunManifest:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return RunManifest(
        command=raw["command"],
        args=raw["args"],
        seed=raw["seed"],
        version=raw["version"],
        scenario_sha256=raw.get("scenario_sha256"),
        outputs=list(raw.get("outputs", [])),
        timings=raw.get("timings", {}),
    )
