import json

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from levyrest.io import (
    dumps17,
    fmt,
    read_samples_csv,
    read_trajectory_csv,
    read_trajectory_jsonl,
    trajectory_csv,
    trajectory_jsonl,
    write_samples_csv,
)
from levyrest.sampling import TailLaw, UniformSphere, derive_stream
from levyrest.walk import IndependentRests, Order, WalkKind, WalkParams, build_trajectory, steps_covering

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(finite)
def test_fmt_round_trips_binary64(x):
    assert float(fmt(x)) == x


@given(st.lists(finite, max_size=20), st.dictionaries(st.text(max_size=5), finite, max_size=5))
def test_dumps17_round_trip(values, mapping):
    doc = {"values": values, "mapping": mapping, "flag": True, "none": None, "n": 3}
    for indent in (None, 2):
        assert json.loads(dumps17(doc, indent=indent)) == doc


def test_dumps17_numpy_scalars():
    text = dumps17({"a": np.float64(0.1), "b": np.int64(4), "c": np.bool_(False), "d": float("inf")})
    assert json.loads(text) == {"a": 0.1, "b": 4, "c": False, "d": None}
    assert "0.10000000000000001" in text


def _trajectory():
    params = WalkParams(UniformSphere(2), IndependentRests(TailLaw(0.5), TailLaw(0.7)), dim=2)
    steps = steps_covering(params, 30.0, True, derive_stream(1, 0))
    return build_trajectory(steps, WalkKind(Order.JUMP_FIRST, True), params, 30.0)


def test_trajectory_csv_round_trip():
    traj = _trajectory()
    text = trajectory_csv(traj)
    assert text.splitlines()[0] == "time,x_1,x_2"
    times, pos = read_trajectory_csv(text)
    assert np.array_equal(times, traj.times) and np.array_equal(pos, traj.positions)


def test_trajectory_jsonl_round_trip():
    traj = _trajectory()
    times, pos = read_trajectory_jsonl(trajectory_jsonl(traj))
    assert np.array_equal(times, traj.times) and np.array_equal(pos, traj.positions)


def test_samples_csv_round_trip(tmp_path):
    values = derive_stream(2, 0).generator.standard_cauchy(500)
    path = tmp_path / "s.csv"
    write_samples_csv(path, values)
    assert np.array_equal(read_samples_csv(path), values)
    (tmp_path / "bare.csv").write_text("1.5\n2.5\n")
    assert read_samples_csv(tmp_path / "bare.csv").tolist() == [1.5, 2.5]
    (tmp_path / "empty.csv").write_text("")
    assert read_samples_csv(tmp_path / "empty.csv").size == 0
