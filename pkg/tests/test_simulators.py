import csv
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import flock_step_oracle
from runs import SEEDS, cached_run
from scipy.spatial.distance import pdist

from comove.simulators import (
    DEFAULT_AGENTS,
    SCENARIOS,
    AntsAdaptationParams,
    AntsParams,
    ConfigError,
    FlockingParams,
    ScenarioConfig,
    WolfSheepParams,
    config_from_mapping,
    simulate,
    write_events_csv,
)
from comove.simulators.common import subtract_headings, turn_towards
from comove.simulators.flocking import flock_headings
from comove.trajectory import WorldSpec

SHORT = 60


def short(scenario, organized=True, seed=0, **kw):
    return simulate(ScenarioConfig(scenario, organized=organized, seed=seed, num_steps=SHORT, **kw))


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_default_shapes(scenario):
    t = cached_run(scenario, True, 0).trajectory
    assert t.positions.shape == (500, DEFAULT_AGENTS[scenario], 2)


def test_table_agent_counts():
    assert DEFAULT_AGENTS == {"ants": 150, "wolf_sheep": 15, "flocking": 300, "ants_adaptation": 20}


@pytest.mark.parametrize("scenario", SCENARIOS)
@pytest.mark.parametrize("organized", [True, False])
def test_determinism(scenario, organized):
    a = short(scenario, organized, seed=11)
    b = short(scenario, organized, seed=11)
    assert np.array_equal(a.trajectory.positions, b.trajectory.positions)
    assert a.events == b.events
    assert not np.array_equal(a.trajectory.positions, short(scenario, organized, seed=12).trajectory.positions)


@pytest.mark.parametrize("scenario", SCENARIOS)
@pytest.mark.parametrize("organized", [True, False])
def test_containment_and_fixed_population(scenario, organized):
    run = cached_run(scenario, organized, 0)
    t = run.trajectory
    assert t.world.contains(t.positions)
    assert t.meta == {"scenario": scenario, "organized": organized, "seed": 0}
    assert np.array_equal(t.positions, np.round(t.positions, 6))


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_modes_differ_only_in_organization(scenario):
    a = ScenarioConfig(scenario, organized=True).as_dict()
    b = ScenarioConfig(scenario, organized=False).as_dict()
    assert {k for k in a if a[k] != b[k]} == {"organized"}


def test_config_validation():
    with pytest.raises(ConfigError, match="unknown scenario"):
        ScenarioConfig("bees")
    with pytest.raises(ConfigError):
        ScenarioConfig("ants", num_agents=0)
    with pytest.raises(ConfigError):
        ScenarioConfig("ants", num_steps=0)
    with pytest.raises(ConfigError):
        ScenarioConfig("ants", seed=-1)
    with pytest.raises(ConfigError):
        ScenarioConfig("flocking", world=WorldSpec(10, 10, "bounded"))
    with pytest.raises(ConfigError):
        ScenarioConfig("ants", params=replace(AntsParams(), evaporation_rate=2.0))
    with pytest.raises(ConfigError):
        ScenarioConfig("wolf_sheep", params=WolfSheepParams(max_turn=0))
    with pytest.raises(ConfigError):
        ScenarioConfig("ants_adaptation", num_agents=1)
    with pytest.raises(ConfigError):
        ScenarioConfig("flocking", params=FlockingParams(vision=0))


def test_config_from_mapping():
    cfg = config_from_mapping({"scenario": "wolf_sheep", "organized": "false", "seed": "3",
                               "num_sheep": "10", "world_width": "30"})
    assert (cfg.organized, cfg.seed, cfg.params.num_sheep, cfg.world.width) == (False, 3, 10, 30.0)
    with pytest.raises(ConfigError, match="unknown config key"):
        config_from_mapping({"scenario": "ants", "colour": "red"})
    with pytest.raises(ConfigError, match="scenario"):
        config_from_mapping({"seed": "1"})
    with pytest.raises(ConfigError, match="bad value"):
        config_from_mapping({"scenario": "ants", "seed": "x"})
    with pytest.raises(ConfigError, match="boolean"):
        config_from_mapping({"scenario": "ants", "organized": "maybe"})


def test_events_csv(tmp_path):
    path = tmp_path / "e.csv"
    write_events_csv([(3, "sheep_eaten", "wolf=1 sheep=2")], path)
    assert list(csv.reader(path.open())) == [["step", "event", "detail"], ["3", "sheep_eaten", "wolf=1 sheep=2"]]


def test_heading_helpers():
    assert subtract_headings(10.0, 350.0) == 20.0
    assert subtract_headings(0.0, 180.0) == 180.0
    assert turn_towards(0.0, 90.0, 30.0) == 30.0
    assert turn_towards(0.0, 10.0, 30.0) == 10.0


# ants ---------------------------------------------------------------------

def _carrier_spread(run):
    pos, car = run.trajectory.positions, run.extras["carrying"]
    vals = [pdist(pos[s, car[s]]).mean() for s in range(pos.shape[0]) if car[s].sum() >= 2]
    return np.mean(vals)


def test_ants_carriers_travel_closer_when_organized():
    org = np.mean([_carrier_spread(cached_run("ants", True, s)) for s in SEEDS])
    dis = np.mean([_carrier_spread(cached_run("ants", False, s)) for s in SEEDS])
    assert org < dis


def test_ants_events_are_logged():
    kinds = {e[1] for e in cached_run("ants", True, 0).events}
    assert "food_exhausted" in kinds


# wolves -------------------------------------------------------------------

def test_wolf_pack_steers_at_one_target():
    run = cached_run("wolf_sheep", True, 0)
    p = run.config.params
    targets = np.array(run.extras["pack_targets"])
    before, after, aim = (run.extras[k] for k in ("heading_before", "heading_after", "goal_bearing"))
    hunting = targets >= 0
    assert hunting.sum() > 100
    # every wolf steers on every hunting tick, and only then
    assert np.all(np.isfinite(aim[hunting])) and np.all(np.isnan(aim[~hunting]))
    err_before = np.abs(subtract_headings(aim[hunting], before[hunting]))
    err_after = np.abs(subtract_headings(aim[hunting], after[hunting]))
    assert np.allclose(err_after, np.maximum(err_before - p.max_turn, 0.0), atol=1e-9)


def test_lone_wolves_have_no_common_target():
    run = cached_run("wolf_sheep", False, 0)
    assert set(run.extras["pack_targets"]) == {-1}


def test_pack_is_tighter_than_loners():
    spread = lambda run: np.median([pdist(p).max() for p in run.trajectory.positions])  # noqa: E731
    org = [spread(cached_run("wolf_sheep", True, s)) for s in SEEDS]
    dis = [spread(cached_run("wolf_sheep", False, s)) for s in SEEDS]
    assert np.mean(org) < np.mean(dis)


def test_sheep_events():
    run = cached_run("wolf_sheep", False, 0)
    eaten = [e for e in run.events if e[1] == "sheep_eaten"]
    assert 0 < len(eaten) <= run.config.params.num_sheep
    if len(eaten) == run.config.params.num_sheep:
        assert run.events[-1][1] == "sheep_exhausted"


# flocking -----------------------------------------------------------------

def test_single_bird_flies_straight():
    cfg = ScenarioConfig("flocking", organized=True, num_agents=1, num_steps=200, seed=5)
    t = simulate(cfg).trajectory
    size = np.array([t.world.width, t.world.height])
    step = np.diff(t.positions[:, 0], axis=0)
    step -= size * np.round(step / size)
    assert np.allclose(step, step[0], atol=1e-5)
    assert np.isclose(np.hypot(*step[0]), 1.0, atol=1e-5)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.integers(2, 25))
def test_flock_update_matches_oracle(seed, n):
    rng = np.random.default_rng(seed)
    size = np.array([12.0, 9.0])
    pos = rng.uniform(0, 1, (n, 2)) * size
    heading = rng.uniform(0, 360, n)
    p = FlockingParams()
    got = flock_headings(pos, heading, size, p)
    ref = flock_step_oracle(pos.tolist(), heading.tolist(), 12.0, 9.0, p.vision, p.min_separation,
                            p.max_align_turn, p.max_cohere_turn, p.max_separate_turn)
    assert np.allclose(np.abs(subtract_headings(got, np.array(ref))), 0.0, atol=1e-9)


def _alignment(run):
    pos = run.trajectory.positions
    size = np.array([run.trajectory.world.width, run.trajectory.world.height])
    d = np.diff(pos, axis=0)
    d -= size * np.round(d / size)
    unit = d / np.linalg.norm(d, axis=2, keepdims=True)
    out = []
    for s in range(100, len(unit)):
        off = pos[s][None] - pos[s][:, None]
        off -= size * np.round(off / size)
        near = np.hypot(off[..., 0], off[..., 1]) <= 3.0
        out.append((np.linalg.norm(near.astype(float) @ unit[s], axis=1) / near.sum(1)).mean())
    return np.mean(out)


def test_flocks_align_better_than_jittering_birds():
    org = [_alignment(cached_run("flocking", True, s)) for s in SEEDS]
    dis = [_alignment(cached_run("flocking", False, s)) for s in SEEDS]
    assert np.mean(org) > np.mean(dis)


def test_flock_merges_logged():
    events = cached_run("flocking", True, 0).events
    assert events and all(e[1] == "flock_merge" for e in events)


# ants adaptation ----------------------------------------------------------

def test_no_flowers_means_no_difference():
    params = AntsAdaptationParams(num_flowers=0)
    a = simulate(ScenarioConfig("ants_adaptation", organized=True, seed=4, params=params))
    b = simulate(ScenarioConfig("ants_adaptation", organized=False, seed=4, params=params))
    assert np.array_equal(a.trajectory.positions, b.trajectory.positions)


def _colony_nn(run):
    pos = run.trajectory.positions
    half = (pos.shape[1] + 1) // 2
    vals = []
    for grp in (pos[:, :half], pos[:, half:]):
        d = np.linalg.norm(grp[:, :, None] - grp[:, None], axis=3)
        idx = np.arange(d.shape[1])
        d[:, idx, idx] = np.inf
        vals.append(d.min(axis=2).mean())
    return np.mean(vals)


def test_colonies_stay_closer_when_organized():
    org = [_colony_nn(cached_run("ants_adaptation", True, s)) for s in SEEDS]
    dis = [_colony_nn(cached_run("ants_adaptation", False, s)) for s in SEEDS]
    assert np.mean(org) < np.mean(dis)


def test_rivals_scare_each_other():
    kinds = {e[1] for e in cached_run("ants_adaptation", True, 0).events}
    assert "scare_away" in kinds
