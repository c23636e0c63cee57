import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hfpollution import errors
from hfpollution.ingest import (
    CalibrationCurve,
    RawRecord,
    apply_calibration,
    load_samples,
    parse_ppm,
    parse_records,
    regularize,
    serialize_records,
)
from hfpollution.series import INTERPOLATED, NEGATIVE


def test_parse_records_basic():
    assert parse_records("epoch_s,adc\n100,2048\n101,2050") == [RawRecord(100, 2048), RawRecord(101, 2050)]


def test_parse_header_only():
    assert parse_records("epoch_s,adc\n") == []


def test_parse_sorts_by_time():
    assert [r.t for r in parse_records("epoch_s,adc\n5,1\n3,2\n4,3\n")] == [3, 4, 5]


@pytest.mark.parametrize(
    "text, exc",
    [
        ("epoch_s,adc\n100,4096", errors.AdcOutOfRange),
        ("epoch_s,adc\n100,-1", errors.AdcOutOfRange),
        ("epoch_s,adc\n100,1\n100,2", errors.DuplicateTimestamp),
        ("epoch_s,adc\n100", errors.MalformedLine),
        ("epoch_s,adc\n100,abc", errors.MalformedLine),
        ("time,adc\n100,1", errors.MalformedLine),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_records(text)


def test_adc_error_reports_line_number():
    with pytest.raises(errors.AdcOutOfRange) as info:
        parse_records("epoch_s,adc\n1,1\n2,5000\n")
    assert info.value.line_no == 3


records_strategy = st.lists(
    st.tuples(st.integers(0, 10**9), st.integers(0, 4095)), unique_by=lambda r: r[0], max_size=50
).map(lambda rs: sorted(RawRecord(*r) for r in rs))


@given(records_strategy)
def test_parse_serialize_roundtrip(records):
    assert parse_records(serialize_records(records)) == records


def test_calibration_linear():
    out = apply_calibration([RawRecord(0, 2048)], CalibrationCurve("d", [0, 0.01]))
    assert out.values[0] == pytest.approx(20.48)
    assert out.flags[0] == 0


@given(st.lists(st.integers(0, 4095), min_size=1, max_size=30))
def test_identity_calibration_leaves_values(adcs):
    recs = [RawRecord(i, a) for i, a in enumerate(adcs)]
    out = apply_calibration(recs, CalibrationCurve("id", [0, 1]))
    assert out.values.tolist() == [float(a) for a in adcs]


def test_negative_calibration_is_flagged_not_clamped():
    out = apply_calibration([RawRecord(0, 100)], CalibrationCurve("d", [-5, 0.01]))
    assert out.values[0] == pytest.approx(-4.0)
    assert out.flags[0] & NEGATIVE


def test_calibration_polynomial_and_temperature():
    curve = CalibrationCurve("d", [1.0, 2.0, 0.5], temp_coeff=0.1)
    out = apply_calibration([RawRecord(0, 4), RawRecord(1, 2)], curve, temp_c=[30.0, 20.0])
    # 1 + 2*4 + 0.5*16 + 0.1*5 ; 1 + 4 + 2 - 0.5
    assert out.values.tolist() == pytest.approx([17.5, 6.5])


def test_calibration_length_mismatch():
    with pytest.raises(errors.LengthMismatch):
        apply_calibration([RawRecord(0, 1)], CalibrationCurve("d", [0, 1]), temp_c=[1.0, 2.0])


def test_calibration_curve_limits_and_json():
    with pytest.raises(errors.ConfigError):
        CalibrationCurve("d", [])
    with pytest.raises(errors.ConfigError):
        CalibrationCurve("d", [1] * 7)
    curve = CalibrationCurve.from_json(json.dumps({"device_id": "n7", "coeffs": [0, 0.01], "temp_coeff": None}))
    assert curve == CalibrationCurve("n7", (0.0, 0.01), None)
    assert CalibrationCurve.from_json(curve.to_json()) == curve
    with pytest.raises(errors.ConfigError):
        CalibrationCurve.from_json('{"coeffs": [1]}')


def test_regularize_no_gaps():
    segs = regularize([(0, 1.0), (1, 2.0), (2, 3.0)], 1.0, 5)
    assert len(segs) == 1 and len(segs[0]) == 3


def test_regularize_interpolates_short_gap():
    (seg,) = regularize([(0, 0.0), (1, 1.0), (4, 4.0)], 1.0, 5)
    assert seg.values.tolist() == [0, 1, 2, 3, 4]
    assert [bool(f & INTERPOLATED) for f in seg.flags] == [False, False, True, True, False]


def test_regularize_splits_long_gap():
    segs = regularize([(0, 0.0), (1, 1.0), (20, 5.0)], 1.0, 5)
    assert [s.values.tolist() for s in segs] == [[0.0, 1.0], [5.0]]
    assert segs[1].start_t == 20


def test_regularize_errors():
    with pytest.raises(errors.EmptyInput):
        regularize([], 1.0, 5)
    with pytest.raises(errors.OffGrid):
        regularize([(0, 1.0), (1.5, 2.0)], 1.0, 5)


@given(st.lists(st.integers(1, 12), min_size=1, max_size=40), st.integers(1, 8))
def test_regularize_properties(steps, max_gap):
    t = np.concatenate([[0], np.cumsum(steps)])
    v = np.arange(t.size, dtype=float) * 1.5 + 0.25
    segs = regularize(list(zip(t, v)), 1.0, max_gap)
    interpolated = sum(int(np.count_nonzero(s.flags & INTERPOLATED)) for s in segs)
    assert interpolated == sum(g - 1 for g in steps if g <= max_gap)
    assert len(segs) == 1 + sum(g > max_gap for g in steps)
    measured = np.concatenate([s.values[(s.flags & INTERPOLATED) == 0] for s in segs])
    assert measured.tolist() == v.tolist()


def test_ppm_csv_and_sniffing():
    samples, unit = load_samples("epoch_s,ppm\n10,1.5\n11,-0.5\n")
    assert unit == "ppm"
    assert samples.values.tolist() == [1.5, -0.5]
    assert samples.flags[1] & NEGATIVE
    with pytest.raises(errors.DuplicateTimestamp):
        parse_ppm("epoch_s,ppm\n1,1\n1,2\n")
    _, unit = load_samples("epoch_s,adc\n1,10\n")
    assert unit == "adc"
