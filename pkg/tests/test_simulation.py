import json

import numpy as np
import pytest

from dagum_qr.estimation import Method
from dagum_qr.ratio import QuantilePair
from dagum_qr.simulation import (
    DEFAULT_A_GRID,
    DEFAULT_R_GRID,
    SimConfig,
    replication_rng,
    run_cell,
    run_replications,
    run_study,
)


def test_default_design_grid():
    cfg = SimConfig()
    assert cfg.a_grid == DEFAULT_A_GRID == (0.1, 0.5, 1.0, 1.5, 2.0)
    assert cfg.r_grid == DEFAULT_R_GRID == (1.2, 1.6, 2.0)
    assert (cfg.n, cfg.reps, cfg.level) == (1000, 10000, 0.95)
    assert cfg.qp == QuantilePair(0.2, 0.8)


@pytest.mark.parametrize(
    "kwargs",
    [{"reps": 0}, {"n": 5}, {"a_grid": ()}, {"r_grid": (1.0,)}, {"r_grid": (0.5, 2)}, {"level": 1.5}, {"method": "ml"}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimConfig(**kwargs)


def test_substreams_are_keyed_and_reproducible():
    a = replication_rng(1, 0, 0, 5).random(4)
    b = replication_rng(1, 0, 0, 5).random(4)
    c = replication_rng(1, 0, 0, 6).random(4)
    d = replication_rng(1, 1, 0, 5).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_single_replication_bookkeeping():
    cfg = SimConfig(a_grid=(1.0,), r_grid=(1.6,), reps=1, seed=1)
    covered, length, failed = run_replications(1.0, 1.6, cfg, (0, 0), range(1))
    assert covered[0] and not failed[0]
    cell = run_cell(1.0, 1.6, cfg)
    assert cell.coverage == 1.0
    assert cell.failures == 0
    assert cell.avg_length == pytest.approx(length[0])


@pytest.mark.parametrize("method", ["mm", "pwm"])
def test_smoke_cell(method):
    cfg = SimConfig(a_grid=(1.0,), r_grid=(1.6,), reps=100, method=method, seed=3)
    rep = run_study(cfg, workers=1)
    cell = rep.cells[0]
    assert 0.85 <= cell.coverage <= 1.0
    assert cell.avg_length > 0


def test_report_is_independent_of_worker_count():
    cfg = SimConfig(a_grid=(0.5, 1.5), r_grid=(1.6,), n=200, reps=300, seed=9)
    one = run_study(cfg, workers=1)
    three = run_study(cfg, workers=3)
    assert one.to_tsv() == three.to_tsv()


def test_length_increases_with_ratio():
    cfg = SimConfig(a_grid=(1.0,), r_grid=(1.2, 1.6, 2.0), n=1000, reps=60, seed=5)
    rep = run_study(cfg, workers=1)
    lengths = [c.avg_length for c in rep.cells]
    assert np.all(np.diff(lengths) > 0)


def test_report_serialization():
    cfg = SimConfig(a_grid=(1.0, 2.0), r_grid=(1.6,), n=300, reps=20, method=Method.MM, seed=2)
    rep = run_study(cfg, workers=1)
    lines = rep.to_tsv().splitlines()
    assert lines[0].split("\t") == ["a", "r", "coverage", "avg_length", "failures"]
    assert len(lines) == 3
    payload = json.loads(rep.to_json())
    assert payload["config"]["method"] == "mm"
    assert [c["a"] for c in payload["cells"]] == [1.0, 2.0]
    for c in payload["cells"]:
        assert set(c) == {"a", "r", "coverage", "avg_length", "failures"}
        assert 0 <= c["coverage"] <= 1
    assert "Coverage probability" in rep.format_tables()
