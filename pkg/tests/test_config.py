import pytest
from pydantic import ValidationError

from beamspace.config import Config


def test_defaults():
    cfg = Config.from_env({})
    assert cfg.grid_step_deg == 0.25
    assert cfg.max_full_enumeration_m == 24
    assert cfg.ledger_url is None
    assert cfg.subset_exact_limit == 100_000


def test_environment_overrides():
    cfg = Config.from_env(
        {"BEAMSPACE_THREADS": "3", "BEAMSPACE_LOG_LEVEL": "debug", "BEAMSPACE_SEED": "11"}
    )
    assert cfg.threads == 3
    assert cfg.log_level == "DEBUG"
    assert cfg.seed == 11
    assert cfg.resolved_threads() == 3


def test_none_clears_optional_field():
    assert Config.from_env({"BEAMSPACE_LEDGER_URL": "none"}).ledger_url is None


@pytest.mark.parametrize(
    "name,value",
    [
        ("BEAMSPACE_DEDUP_REL_TOL", "0"),
        ("BEAMSPACE_THREADS", "0"),
        ("BEAMSPACE_SUBSET_EXACT_LIMIT", "0"),
        ("BEAMSPACE_LOG_LEVEL", "loud"),
    ],
)
def test_invalid_values(name, value):
    with pytest.raises(ValidationError):
        Config.from_env({name: value})
