import pytest

import manetsim

SHORT = {"nodes": 10, "horizon": 40, "stop": 35, "flows": 3}


def test_keys_and_defaults():
    keys = manetsim.config_keys()
    assert "scenario.nodes" in keys and "aomdv.k_replies" in keys
    cfg = manetsim.default_config()
    assert cfg["scenario.nodes"] == "50"
    assert cfg["radio.range"] == "250"


def test_print_config_round_trip():
    text = manetsim.print_config(nodes=30, range=200)
    assert manetsim.print_config(text=text) == text
    assert manetsim.resolve_config(text=text)["radio.range"] == "200"


def test_validation_names_fields():
    errors = manetsim.validate_config(nodes=0)
    assert any("scenario.nodes" in e for e in errors)
    with pytest.raises(manetsim.ConfigError):
        manetsim.run(speed=-1)
    with pytest.raises(manetsim.ConfigError):
        manetsim.run(warp=3)


def test_run_metrics_and_ledger():
    r = manetsim.run(SHORT, packets=True)
    assert r["sent"] == len(r["packets"])
    drops = r["drops_queue"] + r["drops_noroute"] + r["drops_loss"]
    assert r["sent"] == r["delivered"] + drops + r["in_flight"]
    assert 0.0 <= r["pdr"] <= 1.0
    assert all(v == 0 for k, v in r["invariants"].items() if k not in ("route_snapshots", "samples"))
    for p in r["packets"]:
        assert p["hops"][0] == p["src"]
        if p["fate"] == "delivered":
            assert p["hops"][-1] == p["dst"]
            assert p["delivered_at"] > p["sent_at"]


def test_run_is_deterministic():
    a = manetsim.run(SHORT, model="prw", seed=4)
    b = manetsim.run(SHORT, model="prw", seed=4)
    assert a == b


def test_trace_replay_matches_generated_run():
    trace = manetsim.generate_trace(SHORT, model="rd", seed=7)
    assert len(manetsim.trace_positions(trace, 12.5)) == 10
    direct = manetsim.run(SHORT, model="rd", seed=7)
    replay = manetsim.run(SHORT, model="rd", seed=7, trace=trace)
    assert replay["trace_digest"] == direct["trace_digest"]
    assert replay["pdr"] == direct["pdr"]


def test_sweep_and_summary():
    records = manetsim.sweep(SHORT, models=["rwp", "rd"], nodes=[10, 15], speeds=[10, 40], seeds=2)
    assert len(records) == 16
    assert [r["seed"] for r in records[:2]] == [1, 2]
    csv = manetsim.sweep_csv(SHORT, models=["rwp", "rd"], nodes=[10, 15], speeds=[10, 40], seeds=2, workers=2)
    assert len(csv.strip().splitlines()) == 17
    summary = manetsim.summarize_csv(csv)
    assert summary.startswith("model,nodes,speed,runs,mean_pdr")
    assert len(summary.strip().splitlines()) == 9
