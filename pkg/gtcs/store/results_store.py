import csv
import io
import json
import logging
import os
from datetime import datetime
from typing import Dict, List, Optional

from gtcs import __version__
from gtcs.core.config import settings
from gtcs.core.errors import DesignFormatError, InvalidParameterError
from gtcs.models.schemas import RunManifest, SweepResult
from gtcs.services.design import DesignMatrix
from gtcs.store.design_store import FORMAT_VERSION, check_version, parse_header
from gtcs.utils.files import atomic_write_text
from gtcs.utils.plate import PlateGeometry

logger = logging.getLogger(__name__)

PLOT_MAGIC = "# gtcs-plot-data"
TABLE_MAGIC = "# gtcs-best-alpha"
PLATE_MAGIC = "# gtcs-plate-map"
UNMET = "−"

# Manifest keys that change between otherwise identical runs
VOLATILE_FIELDS = ("started_at", "finished_at", "wall_time_seconds")


class ResultsStore:
    """Store for sweep manifests and the tables and maps derived from them."""

    def __init__(self, output_dir: str = settings.OUTPUT_DIRECTORY):
        """Initialize results store.

        Args:
            output_dir: Directory used for relative default file names
        """
        self.output_dir = output_dir

    def default_path(self, filename: str) -> str:
        """Path of filename inside the output directory."""
        return os.path.join(self.output_dir, filename)

    def build_manifest(
        self,
        result: SweepResult,
        started_at: datetime,
        finished_at: datetime,
    ) -> RunManifest:
        return RunManifest(
            version=FORMAT_VERSION,
            tool_version=__version__,
            config=result.config,
            seed=result.config.master_seed,
            started_at=started_at,
            finished_at=finished_at,
            wall_time_seconds=result.wall_time_seconds,
            metadata=result.metadata,
            cells=result.cells,
        )

    def save_manifest(self, manifest: RunManifest, path: str) -> str:
        """Write the manifest JSON atomically."""
        text = json.dumps(manifest.model_dump(mode="json"), indent=2) + "\n"
        atomic_write_text(path, text)
        logger.info("event=manifest_saved path=%s cells=%d", path, len(manifest.cells))
        return path

    def load_manifest(self, path: str) -> RunManifest:
        """Read a manifest, rejecting files of another major version.

        Raises:
            DesignFormatError: If the file is not a valid manifest
            FormatVersionError: If the major version differs
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise DesignFormatError(f"'{path}' is not valid JSON: {e}")
        if not isinstance(data, dict) or "version" not in data:
            raise DesignFormatError(f"'{path}' has no version field")
        check_version(str(data["version"]))
        try:
            return RunManifest.model_validate(data)
        except ValueError as e:
            raise DesignFormatError(f"'{path}' is not a valid results manifest: {e}")

    def plot_data(self, result: SweepResult) -> str:
        """CSV with one row per d and one success-rate column per alpha."""
        alphas = sorted({c.alpha for c in result.cells})
        ds = sorted({c.d for c in result.cells})
        rates = {(c.alpha, c.d): c.rate for c in result.cells}

        out = io.StringIO()
        out.write(
            f"{PLOT_MAGIC} n={result.config.n} m={result.config.m} "
            f"seed={result.config.master_seed} version={FORMAT_VERSION}\n"
        )
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["d", *(f"alpha_{a}" for a in alphas)])
        for d in ds:
            row = [d]
            for a in alphas:
                rate = rates.get((a, d))
                row.append("" if rate is None else f"{rate:.6f}")
            writer.writerow(row)
        return out.getvalue()

    def save_plot_data(self, result: SweepResult, path: str) -> str:
        return atomic_write_text(path, self.plot_data(result))

    def best_alpha_csv(self, table: Dict[int, Optional[int]], n: int, m: int, threshold: float) -> str:
        out = io.StringIO()
        out.write(f"{TABLE_MAGIC} n={n} m={m} threshold={threshold} version={FORMAT_VERSION}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["d", "prevalence", "alpha"])
        for d in sorted(table):
            alpha = table[d]
            writer.writerow([d, f"{d / n:.4f}", UNMET if alpha is None else alpha])
        return out.getvalue()

    def best_alpha_text(self, table: Dict[int, Optional[int]], n: int, m: int, threshold: float) -> str:
        """Render the minimal-alpha table with one column per d."""
        ds = sorted(table)
        headers = [f"{d} ({100.0 * d / n:.1f}%)" for d in ds]
        values = [UNMET if table[d] is None else str(table[d]) for d in ds]
        widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
        first = max(len("n"), len(str(n)))
        lines = [
            f"Minimal pool size (alpha) per number of positives d to reach success rate >= {threshold:g} (m={m})",
            " | ".join(["n".rjust(first), *(h.rjust(w) for h, w in zip(headers, widths))]),
            "-+-".join(["-" * first, *("-" * w for w in widths)]),
            " | ".join([str(n).rjust(first), *(v.rjust(w) for v, w in zip(values, widths))]),
        ]
        return "\n".join(lines) + "\n"

    def save_best_alpha(self, table: Dict[int, Optional[int]], n: int, m: int, threshold: float, path: str) -> str:
        return atomic_write_text(path, self.best_alpha_csv(table, n, m, threshold))

    def plate_map(self, design: DesignMatrix, plate: PlateGeometry) -> str:
        """One line per test: well label, 1-based test id, 1-based pooled sample ids."""
        if design.rows > plate.wells:
            raise InvalidParameterError(
                f"design has m={design.rows} tests but the plate holds {plate.wells} wells"
            )
        lines = [
            f"{PLATE_MAGIC} plate={plate.wells} n={design.cols} m={design.rows} "
            f"alpha={design.alpha} seed={design.seed} version={FORMAT_VERSION}"
        ]
        for test in range(design.rows):
            samples = [str(j + 1) for j in design.pool(test)]
            lines.append(",".join([plate.well_label(test), str(test + 1), *samples]))
        return "\n".join(lines) + "\n"

    def save_plate_map(self, design: DesignMatrix, plate: PlateGeometry, path: str) -> str:
        return atomic_write_text(path, self.plate_map(design, plate))

    def load_plate_map(self, path: str) -> List[List[str]]:
        """Read a plate map back as rows of [well, test, samples...]."""
        with open(path, "r", encoding="utf-8") as f:
            lines = [line.strip() for line in f if line.strip()]
        if not lines:
            raise DesignFormatError(f"'{path}' is empty")
        parse_header(lines[0], PLATE_MAGIC)
        return [line.split(",") for line in lines[1:]]


def strip_volatile(manifest_json: dict) -> dict:
    """Manifest content without timestamps, for run-to-run comparison."""
    return {k: v for k, v in manifest_json.items() if k not in VOLATILE_FIELDS}


# Create a singleton instance
results_store = ResultsStore()
