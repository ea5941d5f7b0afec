"""The viewer's committed fixtures must be reproducible from this engine.

The browser test suite replays `frontend/fixtures/tour.jsonl` and compares
against the committed telemetry/metrics; these tests regenerate every
fixture from the current engine and fail if any committed copy has drifted,
so the two test suites can never silently disagree about the contract.

Regenerate after an intentional engine change with:

    ramacity ingest tests/fixtures/city.geojson frontend/fixtures/scene
    ramacity goldens --n 1000 --seed 42 --out frontend/fixtures/goldens.txt
    ramacity simulate frontend/fixtures/scene frontend/fixtures/tour.jsonl --out /tmp/run
    cp /tmp/run/telemetry.jsonl frontend/fixtures/expected_telemetry.jsonl
    cp /tmp/run/metrics.json frontend/fixtures/expected_metrics.json
"""

from pathlib import Path

import pytest

from ramacity.cli import golden_text
from ramacity.ingest import ingest
from ramacity.simulate import parse_script, run
from ramacity.telemetry import metrics_json, write_log
from ramacity.tiles import SceneIndex, tile_filename

REPO = Path(__file__).parent.parent
FIXTURES = REPO / "frontend" / "fixtures"
CITY = REPO / "tests" / "fixtures" / "city.geojson"


@pytest.fixture(scope="module")
def regenerated_scene(tmp_path_factory):
    out = tmp_path_factory.mktemp("scene")
    ingest(CITY, out)
    return out


def test_scene_tiles_match_committed(regenerated_scene):
    committed = FIXTURES / "scene"
    fresh_names = sorted(p.name for p in regenerated_scene.iterdir())
    committed_names = sorted(p.name for p in committed.iterdir())
    assert fresh_names == committed_names
    for name in fresh_names:
        assert (regenerated_scene / name).read_bytes() == (committed / name).read_bytes(), name


def test_goldens_match_committed():
    assert golden_text(1000, 42) == (FIXTURES / "goldens.txt").read_text()


def test_tour_replay_matches_committed(tmp_path):
    scene = SceneIndex.load(FIXTURES / "scene")
    entries = parse_script((FIXTURES / "tour.jsonl").read_text())
    _, events, metrics = run(entries, scene=scene)

    log = tmp_path / "telemetry.jsonl"
    write_log(log, events)
    assert log.read_text() == (FIXTURES / "expected_telemetry.jsonl").read_text()
    assert metrics_json(metrics) == (FIXTURES / "expected_metrics.json").read_text()


def test_committed_scene_is_wellformed():
    scene = SceneIndex.load(FIXTURES / "scene")
    assert scene.building("city-hall") is not None
    assert scene.building("tower-east") is not None
    assert all(
        (FIXTURES / "scene" / tile_filename(ix, iy)).is_file()
        for ix, iy, _ in scene.manifest["tiles"]
    )
