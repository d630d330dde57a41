import math

import pytest

import coincsim

SMALL_PDC = """[scenario]
name = "py"
acquisitions = 4
acquisition_duration_ps = 100000000000
seed = 7

[source]
model = pdc
pair_rate_hz = 50000
"""


def test_alpha_estimate_matches_formula():
    c = coincsim.CountSummary(N=1000, N1=100, N2=100, Nc=2)
    e = coincsim.alpha_estimate(c)
    assert e.alpha == pytest.approx(0.2)
    expected_sigma = math.hypot(1000 / 1e4 * math.sqrt(2), 0.2 * math.sqrt(0.02))
    assert e.sigma == pytest.approx(expected_sigma)


def test_alpha_undefined_without_singles():
    with pytest.raises(coincsim.UndefinedEstimate):
        coincsim.alpha_estimate(coincsim.CountSummary(N=10, N1=0, N2=3, Nc=0))


def test_weighted_mean_and_separation():
    m = coincsim.weighted_mean([coincsim.AlphaEstimate(0.0, 0.02), coincsim.AlphaEstimate(0.04, 0.02)])
    assert m.alpha == pytest.approx(0.02)
    assert m.sigma == pytest.approx(0.02 / math.sqrt(2))
    assert coincsim.sigma_separation(coincsim.AlphaEstimate(0.5, 0.1)) == pytest.approx(5.0)


def test_count_summary_addition():
    a = coincsim.CountSummary(N=10, N1=3, N2=2, Nc=1)
    b = coincsim.CountSummary(N=5, N1=1, N2=1, Nc=0)
    assert a + b == coincsim.CountSummary(N=15, N1=4, N2=3, Nc=1)
    assert (a + b).consistent()


def test_config_round_trip_and_errors():
    cfg = coincsim.parse_config(SMALL_PDC)
    assert cfg.name == "py"
    assert cfg.model == "pdc"
    assert cfg.window_ps == 7000
    assert coincsim.parse_config(cfg.serialize()) == cfg
    with pytest.raises(coincsim.ConfigError):
        coincsim.parse_config("[source]\nmodel = pdc\n[detector.D1]\nefficiency = 2\n")
    with pytest.raises(ValueError):
        coincsim.parse_config("[nowhere]\n")


def test_run_scenario_is_deterministic():
    cfg = coincsim.parse_config(SMALL_PDC)
    a = coincsim.run_scenario(cfg)
    b = coincsim.run_scenario(cfg, jobs=2)
    assert a.to_csv() == b.to_csv()
    assert len(a.points) == 1
    p = a.points[0]
    assert p.counts.N > 1000
    assert p.counts.consistent()
    assert p.estimate.alpha < 0.5
    oracle = coincsim.scenario_oracle(cfg)
    assert len(oracle) == 1


def test_timetag_round_trip_both_formats():
    events = [("T", 0), ("D1", 300), ("D2", 300), ("G", 9000)]
    for fmt in ("csv", "ttag1"):
        data = coincsim.write_timetag(20000, events, fmt)
        duration, back = coincsim.parse_timetag(data, fmt)
        assert duration == 20000
        assert back == events
    with pytest.raises(coincsim.DataError):
        coincsim.write_timetag(100, [("D1", 50), ("D1", 10)], "csv")
    with pytest.raises(coincsim.DataError):
        coincsim.parse_timetag(b"garbage", "ttag1")


def test_analyze_counts_gates():
    events = [("T", 0), ("D1", 100), ("D2", 200), ("T", 10000), ("D1", 10100), ("T", 20000)]
    data = coincsim.write_timetag(30000, events, "csv")
    c = coincsim.analyze_timetag(data, "csv")
    assert c == coincsim.CountSummary(N=3, N1=2, N2=1, Nc=1)
    with pytest.raises(coincsim.ConfigError):
        coincsim.analyze_timetag(data, "csv", gate_channel="D1")


def test_export_then_analyze_matches_simulation():
    cfg = coincsim.parse_config(SMALL_PDC)
    cfg.acquisitions = 1
    data = coincsim.export_acquisition(cfg, 0, 0, "ttag1")
    counts = coincsim.analyze_timetag(data, "ttag1")
    assert counts == coincsim.run_scenario(cfg).points[0].counts
