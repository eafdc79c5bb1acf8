import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenbounds.errors import InputError, NonFinite, NotSorted, PrefixTooLong
from eigenbounds.spectra import load_spectrum, make_spectrum, moment, spectrum_from_json


def test_make_spectrum_accepts_ties():
    s = make_spectrum([1.0, 2.0, 2.0, 5.0])
    assert len(s) == 4
    assert s.index_origin == 1


def test_make_spectrum_refuses_to_sort():
    with pytest.raises(NotSorted):
        make_spectrum([2.0, 1.0])


def test_zero_allowed_with_origin_zero():
    s = make_spectrum([0.0, 3.1, 7.4], index_origin=0)
    assert s[0] == 0.0 and s.index_origin == 0


@pytest.mark.parametrize("bad", [[1.0, math.nan], [math.inf], [-math.inf, 0.0]])
def test_nonfinite_rejected(bad):
    with pytest.raises(NonFinite):
        make_spectrum(bad)


def test_empty_and_bad_origin():
    with pytest.raises(InputError):
        make_spectrum([])
    with pytest.raises(InputError):
        make_spectrum([1.0], index_origin=2)


def test_abs_tol_allows_tiny_inversions():
    s = make_spectrum([1.0, 1.0 - 1e-14, 2.0], abs_tol=1e-12)
    assert len(s) == 3
    with pytest.raises(NotSorted):
        make_spectrum([1.0, 1.0 - 1e-14, 2.0])


def test_moments_by_hand():
    s = make_spectrum([1.0, 2.0])
    assert moment(s, 2, 1) == 1.5
    assert moment(s, 2, 2) == 2.5
    assert moment(s, 1, 3) == 1.0
    assert moment(s, 2, 0) == 1.0


def test_moment_prefix_too_long():
    with pytest.raises(PrefixTooLong):
        moment(make_spectrum([1.0, 2.0]), 3, 1)


sorted_lists = st.lists(
    st.floats(min_value=0.0, max_value=1e6, allow_nan=False), min_size=1, max_size=60
).map(sorted)


@given(sorted_lists, st.integers(0, 4))
@settings(max_examples=80, deadline=None)
def test_moment_properties(vals, ell):
    s = make_spectrum(vals)
    m = len(vals)
    assert moment(s, m, 0) == 1.0
    assert moment(s, m, ell) >= 0
    s1, s2 = moment(s, m, 1), moment(s, m, 2)
    assert s2 - s1 * s1 >= -1e-12 * max(s2, 1.0)
    # permutation invariance of the underlying mean
    rev = sum(v**ell for v in reversed(vals)) / m
    assert math.isclose(moment(s, m, ell), rev, rel_tol=1e-12, abs_tol=1e-300)


def test_compensated_vs_naive_long_prefix(rng):
    vals = np.sort(rng.uniform(0, 1e6, 10_000))
    s = make_spectrum(vals.tolist())
    naive = float(np.sum(vals**2)) / len(vals)
    assert math.isclose(moment(s, len(vals), 2), naive, rel_tol=1e-12)


def test_json_roundtrip(tmp_path):
    s = make_spectrum([0.0, 1.5, 4.0], index_origin=0)
    p = tmp_path / "s.json"
    p.write_text(json.dumps(s.to_json()))
    assert load_spectrum(p) == s


@pytest.mark.parametrize(
    "obj",
    [
        {"eigenvalues": [1, 2], "extra": 1},
        {"values": [1, 2]},
        {"eigenvalues": "12"},
        {"eigenvalues": [1, True]},
        {"eigenvalues": [1, 2], "index_origin": 3},
        [1, 2],
    ],
)
def test_json_schema_rejections(obj):
    with pytest.raises(InputError):
        spectrum_from_json(obj)


def test_malformed_json_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InputError):
        load_spectrum(p)
