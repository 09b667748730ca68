import pytest

from beamspace.backend.ledger import get_run, list_runs, open_ledger, record_run
from beamspace.backend.models import RunManifest


@pytest.fixture
def engine(tmp_path):
    return open_ledger(f"sqlite:///{tmp_path / 'runs.db'}")


def _manifest(command: str, out: str) -> RunManifest:
    return RunManifest(
        command=command,
        argv=[command, "--out", out],
        parameters={"out": out, "threads": None},
        inputs=["in.json"],
        outputs=[out],
        version="0.1.0",
        wall_time_s=0.25,
    )


def test_record_and_get(engine):
    record = record_run(engine, _manifest("design", "w.json"))
    assert record.id is not None
    stored = get_run(engine, record.id)
    assert stored.command == "design"
    assert stored.to_manifest() == _manifest("design", "w.json")


def test_list_newest_first(engine):
    for i in range(3):
        record_run(engine, _manifest("enumerate", f"f{i}.json"))
    runs = list_runs(engine)
    assert [run.to_manifest().outputs for run in runs] == [["f2.json"], ["f1.json"], ["f0.json"]]


def test_list_filters_and_limits(engine):
    record_run(engine, _manifest("design", "w.json"))
    record_run(engine, _manifest("select", "c.json"))
    record_run(engine, _manifest("select", "d.json"))
    assert [run.command for run in list_runs(engine, command="design")] == ["design"]
    assert len(list_runs(engine, command="select", limit=1)) == 1


def test_missing_run(engine):
    assert get_run(engine, 42) is None
