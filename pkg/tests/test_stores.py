import json
import os
from datetime import datetime, timezone

import numpy as np
import pytest

from gtcs.core.errors import DesignFormatError, FormatVersionError, InvalidParameterError
from gtcs.services.design import generate_rrd
from gtcs.services.sim import run_config
from gtcs.store.design_store import DESIGN_MAGIC, FORMAT_VERSION, DesignStore, parse_header
from gtcs.store.results_store import UNMET, ResultsStore, strip_volatile
from gtcs.utils.files import atomic_write_text
from gtcs.utils.plate import PLATES, PlateGeometry, plate_for

store = DesignStore()


# Design CSV

def test_design_header_and_body(small_design):
    lines = store.dumps(small_design).splitlines()
    assert lines[0] == f"{DESIGN_MAGIC} n=40 m=16 alpha=5 seed=11 version={FORMAT_VERSION}"
    assert len(lines) == 17
    assert all(line.count("1") == 5 for line in lines[1:])


def test_design_round_trip_many_seeds():
    for seed in range(50):
        design = generate_rrd(30, 12, 4, seed)
        loaded = store.loads(store.dumps(design))
        assert np.array_equal(loaded.bits, design.bits)
        assert (loaded.alpha, loaded.seed) == (4, seed)


def test_design_save_and_load(tmp_path, small_design):
    path = tmp_path / "nested" / "design.csv"
    store.save(small_design, str(path))
    assert np.array_equal(store.load(str(path)).bits, small_design.bits)
    assert os.listdir(path.parent) == ["design.csv"]


def test_header_without_version_reads_as_current():
    text = "# gtcs-design n=3 m=2 alpha=1 seed=9\n1,0,0\n0,0,1\n"
    design = store.loads(text)
    assert design.pool(1).tolist() == [2]
    assert design.seed == 9


def test_major_version_mismatch_rejected():
    text = "# gtcs-design n=3 m=1 alpha=1 seed=9 version=2.0\n1,0,0\n"
    with pytest.raises(FormatVersionError):
        store.loads(text)


def test_minor_version_accepted():
    assert parse_header("# gtcs-design n=3 version=1.7", DESIGN_MAGIC)["n"] == "3"


@pytest.mark.parametrize("text", [
    "",
    "n=3 m=1 alpha=1 seed=0\n1,0,0\n",
    "# gtcs-design n=3 m=2 alpha=1 seed=0\n1,0,0\n",
    "# gtcs-design n=3 m=1 alpha=1 seed=0\n1,0\n",
    "# gtcs-design n=3 m=1 alpha=1 seed=0\n1,0,x\n",
    "# gtcs-design n=3 m=1 alpha=2 seed=0\n1,0,0\n",
    "# gtcs-design n=3 m=1 alpha=1\n1,0,0\n",
    "# gtcs-design n=3 m=1 alpha=1 seed=0 bogus\n1,0,0\n",
])
def test_malformed_designs_rejected(text):
    with pytest.raises(DesignFormatError):
        store.loads(text)


def test_atomic_write_replaces_whole_file(tmp_path):
    path = tmp_path / "out.txt"
    atomic_write_text(str(path), "first\n")
    atomic_write_text(str(path), "second\n")
    assert path.read_text(encoding="utf-8") == "second\n"
    assert os.listdir(tmp_path) == ["out.txt"]


# Plates

def test_plate_geometry():
    assert PLATES[96].well_label(0) == "A1"
    assert PLATES[96].well_label(13) == "B2"
    assert PLATES[96].well_labels()[-1] == "H12"
    assert PLATES[384].well_labels()[-1] == "P24"
    assert len(set(PLATES[384].well_labels())) == 384


def test_plate_rejects_unknown_size_and_index():
    with pytest.raises(InvalidParameterError):
        plate_for(48)
    with pytest.raises(InvalidParameterError):
        PlateGeometry(rows=2, cols=3).well_label(6)


def test_plate_map_lines(tmp_path):
    design = generate_rrd(n=400, m=96, alpha=10, seed=7)
    results = ResultsStore(str(tmp_path))
    text = results.plate_map(design, plate_for(96))
    lines = text.splitlines()
    assert lines[0].startswith("# gtcs-plate-map plate=96 n=400 m=96 alpha=10 seed=7")
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == plate_for(96).well_labels()
    assert [r[1] for r in rows] == [str(i) for i in range(1, 97)]
    for i, row in enumerate(rows):
        assert [int(s) for s in row[2:]] == (design.pool(i) + 1).tolist()


def test_plate_map_round_trip_through_design_file(tmp_path):
    design = generate_rrd(n=200, m=40, alpha=8, seed=1)
    results = ResultsStore(str(tmp_path))
    reloaded = store.loads(store.dumps(design))
    first = results.plate_map(design, plate_for(96))
    assert results.plate_map(reloaded, plate_for(96)) == first

    path = tmp_path / "plate.csv"
    results.save_plate_map(design, plate_for(96), str(path))
    assert results.load_plate_map(str(path))[0][:2] == ["A1", "1"]


def test_plate_map_capacity(tmp_path):
    design = generate_rrd(n=200, m=97, alpha=3, seed=1)
    with pytest.raises(InvalidParameterError):
        ResultsStore(str(tmp_path)).plate_map(design, plate_for(96))
    assert ResultsStore(str(tmp_path)).plate_map(design, plate_for(384)).count("\n") == 98


# Results

@pytest.fixture
def sweep(small_config):
    return run_config(small_config, workers=1)


def test_manifest_round_trip(tmp_path, sweep):
    results = ResultsStore(str(tmp_path))
    now = datetime(2026, 1, 2, tzinfo=timezone.utc)
    manifest = results.build_manifest(sweep, now, now)
    path = results.save_manifest(manifest, results.default_path("run.json"))

    data = json.loads(open(path, encoding="utf-8").read())
    assert data["version"] == FORMAT_VERSION
    assert data["seed"] == 5
    assert len(data["cells"]) == 4
    assert {"alpha", "d", "designs", "trials", "successes", "rate"} <= set(data["cells"][0])

    loaded = results.load_manifest(path)
    assert loaded.cells == sweep.cells
    assert loaded.to_result().config == sweep.config


def test_manifest_version_and_format_checks(tmp_path, sweep):
    results = ResultsStore(str(tmp_path))
    now = datetime(2026, 1, 2, tzinfo=timezone.utc)
    data = results.build_manifest(sweep, now, now).model_dump(mode="json")

    data["version"] = "2.0"
    bad_version = tmp_path / "v2.json"
    bad_version.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(FormatVersionError):
        results.load_manifest(str(bad_version))

    not_json = tmp_path / "broken.json"
    not_json.write_text("{", encoding="utf-8")
    with pytest.raises(DesignFormatError):
        results.load_manifest(str(not_json))

    data["version"] = FORMAT_VERSION
    del data["cells"]
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(DesignFormatError):
        results.load_manifest(str(missing))


def test_strip_volatile():
    data = {"version": "1.0", "started_at": "x", "finished_at": "y", "wall_time_seconds": 1.0, "cells": []}
    assert strip_volatile(data) == {"version": "1.0", "cells": []}


def test_plot_data(tmp_path, sweep):
    text = ResultsStore(str(tmp_path)).plot_data(sweep)
    lines = text.splitlines()
    assert lines[0] == f"# gtcs-plot-data n=30 m=16 seed=5 version={FORMAT_VERSION}"
    assert lines[1] == "d,alpha_3,alpha_5"
    assert [line.split(",")[0] for line in lines[2:]] == ["1", "2"]
    rate = float(lines[2].split(",")[1])
    assert rate == pytest.approx(sweep.cell(3, 1).rate, abs=1e-6)


def test_best_alpha_tables(tmp_path):
    results = ResultsStore(str(tmp_path))
    table = {4: 10, 8: 14, 40: None}
    csv_lines = results.best_alpha_csv(table, n=400, m=96, threshold=0.99).splitlines()
    assert csv_lines[0].startswith("# gtcs-best-alpha n=400 m=96 threshold=0.99")
    assert csv_lines[1:] == ["d,prevalence,alpha", "4,0.0100,10", "8,0.0200,14", f"40,0.1000,{UNMET}"]

    text = results.best_alpha_text(table, n=400, m=96, threshold=0.99)
    last = text.splitlines()[-1]
    assert last.split("|")[0].strip() == "400"
    assert [cell.strip() for cell in last.split("|")[1:]] == ["10", "14", UNMET]
