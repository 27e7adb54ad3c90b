import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skyway.errors import ConfigurationError, IntegrityError, NoCapableDroneError, ParseError
from skyway.fleet import (
    DEFAULT_FLEET,
    DJI_M200_V2,
    DroneSpec,
    QualityDirectionConfig,
    block_nested_loop,
    count_diff,
    filter_by_payload,
    load_drones,
    save_drones,
    skyline,
)
from support import brute_force_selection, random_drone, random_fleet

CFG = QualityDirectionConfig()


def test_reference_drone_values():
    assert DJI_M200_V2.payload_capacity == 1.45
    assert DJI_M200_V2.max_flight_time == 24.0
    assert DJI_M200_V2.flight_range == 32.4
    assert DJI_M200_V2.max_speed == 81.0
    assert DJI_M200_V2.full_recharge_duration == pytest.approx(2.24 * 60)


def test_spec_validation():
    with pytest.raises(IntegrityError):
        DroneSpec("bad", 0.0, 10, 10, 60, 10, 10)
    with pytest.raises(IntegrityError, match="range"):
        # 60 km/h for 10 min reaches 10 km; 11 km is beyond the 5% slack
        DroneSpec("fast-talker", 1.0, 10.0, 11.0, 60.0, 10.0, 10.0)
    DroneSpec("within-slack", 1.0, 10.0, 10.5, 60.0, 10.0, 10.0)


def test_config_validation():
    with pytest.raises(ConfigurationError, match="unknown"):
        QualityDirectionConfig(to_min={"wingspan"})
    with pytest.raises(ConfigurationError):
        QualityDirectionConfig(to_min={"max_speed"}, to_max={"max_speed"})
    with pytest.raises(ConfigurationError):
        QualityDirectionConfig(to_min={"full_recharge_duration"}, to_max={"flight_range"}, to_sel="max_speed")


def test_count_diff_identity():
    assert count_diff(DJI_M200_V2, DJI_M200_V2, CFG) == (0, 0)


def test_count_diff_two_fields():
    cfg = QualityDirectionConfig(to_min={"full_recharge_duration"}, to_max={"flight_range"}, to_sel="flight_range")
    a = DroneSpec("a", 1.0, 60.0, 30.0, 60.0, 60.0, 100.0)
    b = DroneSpec("b", 1.0, 60.0, 20.0, 60.0, 90.0, 100.0)
    assert count_diff(a, b, cfg) == (2, 0)
    assert count_diff(b, a, cfg) == (0, 2)


def test_count_diff_against_literal_formula():
    rng = random.Random(1234)
    fields_min = sorted(CFG.to_min)
    fields_max = sorted(CFG.to_max)
    for i in range(1000):
        a, b = random_drone(rng, 2 * i), random_drone(rng, 2 * i + 1)
        better = sum(getattr(a, f) < getattr(b, f) for f in fields_min) + sum(
            getattr(a, f) > getattr(b, f) for f in fields_max
        )
        worse = sum(getattr(a, f) > getattr(b, f) for f in fields_min) + sum(
            getattr(a, f) < getattr(b, f) for f in fields_max
        )
        assert count_diff(a, b, CFG) == (better, worse)


def test_count_diff_unknown_field_on_duck_typed_config():
    class Loose:
        to_min = frozenset({"wingspan"})
        to_max = frozenset()

    with pytest.raises(ConfigurationError):
        count_diff(DJI_M200_V2, DJI_M200_V2, Loose())


@settings(max_examples=200)
@given(seed=st.integers(0, 10**6))
def test_count_diff_antisymmetry(seed):
    rng = random.Random(seed)
    a, b = random_drone(rng, 0), random_drone(rng, 1)
    x, y = count_diff(a, b, CFG)
    assert count_diff(b, a, CFG) == (y, x)


def test_filter_by_payload_basics():
    assert filter_by_payload(DEFAULT_FLEET, 0.0) == list(DEFAULT_FLEET)
    assert filter_by_payload([DJI_M200_V2], 2.0) == []
    assert filter_by_payload([DJI_M200_V2], 1.45) == [DJI_M200_V2]


def test_filter_by_payload_matches_brute_force():
    fleet = random_fleet(5, 100)
    caps = sorted(d.payload_capacity for d in fleet)
    median = (caps[49] + caps[50]) / 2
    expected = []
    for d in fleet:
        if not d.payload_capacity < median:
            expected.append(d)
    assert filter_by_payload(fleet, median) == expected


def test_bnl_single_and_dominated():
    assert block_nested_loop([DJI_M200_V2], 1.0) is DJI_M200_V2
    better = replace(
        DJI_M200_V2,
        model="Better",
        payload_capacity=2.0,
        max_flight_time=30.0,
        flight_range=40.0,
        max_speed=90.0,
        full_recharge_duration=100.0,
        battery_capacity=250.0,
    )
    assert block_nested_loop([DJI_M200_V2, better], 1.0) is better
    assert block_nested_loop([better, DJI_M200_V2], 1.0) is better


def test_bnl_rejects_heavy_package():
    with pytest.raises(NoCapableDroneError):
        block_nested_loop([DJI_M200_V2], 2.0)


def test_bnl_tie_break_by_model_label():
    twin_a = replace(DJI_M200_V2, model="B-twin", full_recharge_duration=100.0)
    twin_b = replace(DJI_M200_V2, model="A-twin", max_speed=90.0)
    # neither dominates the other; equal flight range
    assert block_nested_loop([twin_a, twin_b], 0.5).model == "A-twin"


@pytest.mark.parametrize("seed", range(50))
def test_bnl_matches_brute_force(seed):
    fleet = random_fleet(seed, 200)
    w = random.Random(seed).uniform(0.0, 4.0)
    sky, winner = brute_force_selection(fleet, w, CFG.to_min, CFG.to_max, CFG.to_sel)
    assert block_nested_loop(fleet, w) == winner
    assert sorted(d.model for d in skyline(filter_by_payload(fleet, w), CFG)) == sorted(d.model for d in sky)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), size=st.integers(1, 60), w=st.floats(0.0, 2.0))
def test_skyline_sound_complete_and_permutation_invariant(seed, size, w):
    fleet = random_fleet(seed, size)
    feasible = filter_by_payload(fleet, w)
    if not feasible:
        with pytest.raises(NoCapableDroneError):
            block_nested_loop(fleet, w)
        return
    sky = skyline(feasible, CFG)
    for s in sky:
        for d in fleet:
            better, worse = count_diff(s, d, CFG)
            assert not (worse > 0 and better == 0)
    sky_ids = {id(s) for s in sky}
    for d in feasible:
        if id(d) not in sky_ids:
            assert any(count_diff(d, o, CFG)[1] > 0 and count_diff(d, o, CFG)[0] == 0 for o in feasible)
    winner = block_nested_loop(fleet, w)
    shuffled = list(fleet)
    random.Random(seed + 1).shuffle(shuffled)
    assert block_nested_loop(shuffled, w) == winner


def test_drone_file_round_trip(tmp_path):
    path = tmp_path / "drones.csv"
    save_drones(DEFAULT_FLEET, path)
    assert load_drones(path) == list(DEFAULT_FLEET)
    path.write_text(path.read_text() + "Broken,1,2\n")
    with pytest.raises(ParseError) as exc:
        load_drones(path)
    assert exc.value.line == len(DEFAULT_FLEET) + 2
