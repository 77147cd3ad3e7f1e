"""
Unit tests for the torus quantisation.

Tests cover:
- Curves, theta series, their quasi-periodicity and the odd zeta basis
- The operators C(p,q): product-to-sum, commutators and Chebyshev identities
- The exact noncommutative torus, its associativity and the map phi
- Goldman brackets and the correspondence-principle decay
- Convention calibration and its persisted record
"""

import dataclasses
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.cyclotomic import CycScalar
from src.algebra.matrices import hermitian_defect, identity, max_abs
from src.torus.calibration import (
    CalibrationRecord,
    calibrate_conventions,
    calibrate_phase,
    calibrate_sign,
    consistency_survey,
    load_or_calibrate,
    provenance_notes,
)
from src.torus.correspondence import (
    NOMINAL_SLOPE_BAND,
    DecayRow,
    aitken,
    correspondence_check,
    decay_ratios,
    decays,
    in_nominal_band,
    loglog_slope,
    raw_ratio,
)
from src.torus.curves import CurveObservable, FormalTraceSum, Level
from src.torus.goldman import goldman_torus
from src.torus.nctorus import NCTorusElement, nc_mul, omega, phi_product_check
from src.torus.operators import (
    chebyshev_check,
    colored_curve_operator,
    colored_difference_check,
    commutator_check,
    cs,
    involved_vanish,
    op,
    product_to_sum_check,
    reduce_index,
)
from src.torus.theta import normalised_theta, theta_eval, zeta_eval
from src.utils.errors import CalibrationError, ConvergenceError, InputError

HALF = Fraction(1, 2)


def test_level():
    """Test hbar, dimension and phase order of a level."""
    level = Level(5)
    assert level.hbar == Fraction(1, 10)
    assert level.dimension == 4
    assert level.phase_order == 20
    with pytest.raises(InputError):
        Level(1)


def test_curve_canonical_form():
    """Test that a curve and its reverse are the same observable."""
    assert CurveObservable(-1, -2) == CurveObservable(1, 2)
    assert CurveObservable(0, -3) == CurveObservable(0, 3)
    assert CurveObservable(1, -1).q == -1
    assert CurveObservable.parse("2,1") == CurveObservable(2, 1)
    with pytest.raises(InputError):
        CurveObservable.parse("x")


def test_curve_multiplicity():
    """Test gcd multiplicity and primitive curves."""
    curve = CurveObservable(4, 6)
    assert curve.multiplicity() == 2
    assert curve.primitive() == CurveObservable(2, 3)
    assert CurveObservable(0, 0).primitive() == CurveObservable(0, 0)
    assert CurveObservable(1, 0).intersection(CurveObservable(0, 1)) == 1


def test_theta_against_direct_sum():
    """Test the windowed theta series against a wide direct sum."""
    j, z, r = 1, 0.3 + 0.1j, 3
    n = np.arange(-30, 31)
    direct = np.sum(np.exp(-math.pi * (2 * r * n ** 2 + 2 * j * n) + 2j * math.pi * z * (j + 2 * r * n)))
    assert theta_eval(j, z, r) == pytest.approx(complex(direct), rel=1e-12)


def test_theta_periodicity():
    """Test z -> z + 1 invariance and 2r-periodicity in j."""
    z = 0.21 - 0.4j
    assert normalised_theta(2, z + 1, 4) == pytest.approx(normalised_theta(2, z, 4), rel=1e-12)
    assert normalised_theta(2 + 8, z, 4) == pytest.approx(normalised_theta(2, z, 4), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    r=st.integers(min_value=1, max_value=6),
    data=st.data(),
    x=st.floats(min_value=0.0, max_value=1.0),
    y=st.floats(min_value=-1.5, max_value=0.5),
)
def test_theta_quasi_periodicity(r, data, x, y):
    """Test Theta_j(z + i) = e^(2 pi r) e^(-4 pi i r z) Theta_j(z)."""
    j = data.draw(st.integers(min_value=0, max_value=2 * r - 1))
    z = complex(x, y)
    shifted = normalised_theta(j, z + 1j, r)
    expected = math.exp(2 * math.pi * r) * np.exp(-4j * math.pi * r * z) * normalised_theta(j, z, r)
    # every term is positive on the imaginary axis, so this is the sum of |terms|
    scale = math.exp(2 * math.pi * r + 4 * math.pi * r * y) * normalised_theta(j, 1j * y, r).real
    assert abs(shifted - expected) <= 1e-10 * scale


def test_zeta_vanishes_at_origin():
    """Test zeta_j(0) = 0 for every basis index."""
    for r in range(2, 9):
        for j in range(1, r):
            assert abs(zeta_eval(j, 0, r)) < 1e-12


def test_zeta_symmetries():
    """Test that zeta is odd in j and vanishes at 0 and r."""
    z, r = 0.17 + 0.05j, 5
    assert zeta_eval(0, z, r) == 0
    assert zeta_eval(r, z, r) == 0
    assert zeta_eval(-2, z, r) == pytest.approx(-zeta_eval(2, z, r), rel=1e-12)
    assert zeta_eval(2 + 2 * r, z, r) == pytest.approx(zeta_eval(2, z, r), rel=1e-12)


def test_theta_guards():
    """Test the imaginary window and the eps check."""
    with pytest.raises(ConvergenceError):
        theta_eval(1, 0.1 + 3j, 3)
    with pytest.raises(InputError):
        theta_eval(1, 0.1, 3, eps=0.0)


def test_reduce_index():
    """Test the odd 2r-periodic index reduction."""
    assert reduce_index(2, 5) == (2, 1)
    assert reduce_index(-2, 5) == (2, -1)
    assert reduce_index(8, 5) == (2, -1)
    assert reduce_index(5, 5) == (0, 0)
    assert reduce_index(10, 5) == (0, 0)


def test_trivial_curve_is_twice_identity():
    """Test C(0,0) = 2 I."""
    assert max_abs(cs(0, 0, 5) - 2 * identity(4)) == 0.0


def test_level_three_matrices():
    """Test the explicit 2x2 matrices of C(1,0), C(0,1) and C(2,0) at r = 3."""
    assert max_abs(cs(1, 0, 3) - np.array([[0, 1], [1, 0]])) < 1e-12
    assert max_abs(cs(0, 1, 3) - np.diag([1, -1])) < 1e-12
    assert max_abs(cs(2, 0, 3) + identity(2)) < 1e-12


@pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (1, 1)])
def test_operators_are_hermitian(p, q):
    """Test that the operators of primitive curves are Hermitian."""
    assert hermitian_defect(cs(p, q, 5)) < 1e-12


def test_operator_is_read_only():
    """Test that the shared cached matrices cannot be modified."""
    with pytest.raises(ValueError):
        cs(1, 0, 4)[0, 0] = 7


@pytest.mark.parametrize("r", [3, 5, 8])
def test_product_to_sum(r):
    """Test the product-to-sum identity with c = 1/2 and its failure with c = 1."""
    for m, n, p, q in [(1, 0, 0, 1), (2, 1, 1, -1), (1, 2, -1, 1)]:
        assert product_to_sum_check(m, n, p, q, r, HALF) < 1e-10
    assert product_to_sum_check(1, 0, 0, 1, r, 1) > 1e-3


def test_commutator_identity():
    """Test the closed form of [C(m,n), C(p,q)]."""
    for m, n, p, q in [(1, 0, 0, 1), (1, 1, 2, -1), (0, 2, 1, 1)]:
        assert commutator_check(m, n, p, q, 7, HALF) < 1e-10


@pytest.mark.parametrize("d", range(5))
def test_chebyshev_multicurves(d):
    """Test C(dp, dq) = T_d(C(p, q))."""
    assert chebyshev_check(CurveObservable(1, 1), d, 6) < 1e-9
    assert chebyshev_check(CurveObservable(1, 0), d, 9) < 1e-9


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (2, 2), (3, 0), (2, 4)])
def test_colored_difference(p, q):
    """Test C(p,q) = colored(d+1) - colored(d-1) of the primitive curve."""
    assert colored_difference_check(CurveObservable(p, q), 7) < 1e-9


def test_colored_curve_operator():
    """Test V^1 gives the identity and V^2 the curve operator."""
    curve = CurveObservable(1, 1)
    assert max_abs(colored_curve_operator(curve, 1, 5) - identity(4)) == 0.0
    assert max_abs(colored_curve_operator(curve, 2, 5) - cs(1, 1, 5)) == 0.0
    with pytest.raises(ValueError):
        colored_curve_operator(curve, -1, 5)


def test_op_linear_extension():
    """Test op on a formal trace sum."""
    trace_sum = FormalTraceSum.from_mapping({CurveObservable(1, 0): Fraction(3, 2), CurveObservable(0, 1): Fraction(-1)})
    expected = 1.5 * cs(1, 0, 5) - cs(0, 1, 5)
    assert max_abs(op(trace_sum, 5) - expected) < 1e-14
    assert max_abs(op(trace_sum, 5, scale=2.0) - 2 * expected) < 1e-14


def test_nc_torus_commutation():
    """Test V U = omega U V."""
    r, s = 4, -1
    u = NCTorusElement.monomial(r, s, 1, 0)
    v = NCTorusElement.monomial(r, s, 0, 1)
    assert v * u == (u * v).scale(omega(r, s))
    assert (u * v).as_dict() == {(1, 1): NCTorusElement.monomial(r, s, 1, 1).as_dict()[(1, 1)]}
    assert (u - u).is_zero()


@st.composite
def nc_elements(draw, r, s):
    """Random finite sums of monomials with cyclotomic coefficients."""
    order = 4 * r
    mapping = {}
    for _ in range(draw(st.integers(min_value=1, max_value=4))):
        exponent = (draw(st.integers(-2, 2)), draw(st.integers(-2, 2)))
        coefficient = CycScalar.root_of_unity(
            draw(st.integers(0, order - 1)), order, draw(st.integers(-3, 3))
        )
        mapping[exponent] = mapping[exponent] + coefficient if exponent in mapping else coefficient
    return NCTorusElement.from_mapping(r, s, mapping)


@settings(max_examples=50, deadline=None)
@given(data=st.data(), r=st.integers(min_value=2, max_value=6), s=st.sampled_from([1, -1]))
def test_nc_torus_associativity(data, r, s):
    """Test (x y) z = x (y z) with exact coefficients."""
    x, y, z = (data.draw(nc_elements(r, s)) for _ in range(3))
    assert nc_mul(nc_mul(x, y), z) == nc_mul(x, nc_mul(y, z))


def test_nc_torus_mismatch():
    """Test that elements of different levels or signs do not combine."""
    with pytest.raises(ValueError):
        NCTorusElement.monomial(3, 1, 1, 0) * NCTorusElement.monomial(4, 1, 1, 0)
    with pytest.raises(ValueError):
        NCTorusElement.monomial(3, 1, 1, 0) + NCTorusElement.monomial(3, -1, 1, 0)
    with pytest.raises(ValueError):
        NCTorusElement(3, 0)


def test_phi_homomorphism_sign():
    """Test that phi is multiplicative only for the commutation sign s = -1."""
    assert phi_product_check(0, 1, 1, 0, 3, HALF, -1)
    assert not phi_product_check(0, 1, 1, 0, 3, HALF, 1)
    assert phi_product_check(2, 1, -1, 3, 5, HALF, -1)


def test_goldman_bracket():
    """Test the closed-form bracket, its antisymmetry and sigma."""
    a, b = CurveObservable(1, 0), CurveObservable(0, 1)
    bracket = goldman_torus(a, b)
    assert bracket.as_dict() == {CurveObservable(1, -1): HALF, CurveObservable(1, 1): -HALF}
    assert goldman_torus(b, a) == -bracket
    assert goldman_torus(a, b, -1) == -bracket
    assert goldman_torus(a, CurveObservable(2, 0)).is_zero()
    with pytest.raises(ValueError):
        goldman_torus(a, b, 0)


def test_fitted_kappa(calibration_record):
    """Test that kappa tends to 4 pi with orientation sign -1."""
    assert calibration_record.sigma == -1
    assert calibration_record.kappa == pytest.approx(4 * math.pi, rel=1e-3)


def test_raw_ratio_of_vanishing_brackets():
    """Test that a reference set with only zero brackets is rejected."""
    a = CurveObservable(1, 0)
    with pytest.raises(ValueError):
        raw_ratio([(a, a)], 5)


def test_aitken_on_geometric_sequence():
    """Test that Aitken acceleration removes a geometric error."""
    sequence = [2.0 + 0.25 ** i for i in range(4)]
    assert aitken(sequence) == pytest.approx([2.0, 2.0])


def test_decay_helpers():
    """Test ratios, slope and the decay rule on synthetic rows."""
    rows = [DecayRow(4, 1.0), DecayRow(8, 0.25), DecayRow(16, 0.0625)]
    assert decay_ratios(rows) == pytest.approx([0.25, 0.25])
    assert loglog_slope(rows) == pytest.approx(-2.0)
    assert decays(rows)
    assert not decays([DecayRow(4, 1.0), DecayRow(8, 0.9)])
    assert decays([DecayRow(4, 0.0), DecayRow(8, 0.0)])
    assert math.isnan(loglog_slope([DecayRow(4, 0.0), DecayRow(8, 1.0)]))


def test_nominal_slope_band():
    """Test the linear-in-hbar band check."""
    assert NOMINAL_SLOPE_BAND == (-1.3, -0.7)
    assert in_nominal_band(-1.0)
    assert in_nominal_band(-0.7) and in_nominal_band(-1.3)
    assert not in_nominal_band(-2.0)
    assert not in_nominal_band(-0.5)
    assert not in_nominal_band(math.nan)


@pytest.mark.parametrize("a,b", [((1, 0), (0, 1)), ((1, 1), (1, -1)), ((2, 1), (1, 1))])
def test_correspondence_decays(calibration_record, a, b):
    """Test that E(r) decays as hbar^2 for reference pairs."""
    rows = correspondence_check(
        CurveObservable(*a), CurveObservable(*b), [8, 16, 32], calibration_record.kappa, calibration_record.sigma
    )
    assert [row.r for row in rows] == [8, 16, 32]
    assert decays(rows)
    slope = loglog_slope(rows)
    assert slope == pytest.approx(-2.0, abs=0.3)
    assert not in_nominal_band(slope)


def test_correspondence_levels_ascending(calibration_record):
    """Test that unsorted levels are rejected."""
    a, b = CurveObservable(1, 0), CurveObservable(0, 1)
    with pytest.raises(ValueError):
        correspondence_check(a, b, [8, 4], calibration_record.kappa, calibration_record.sigma)


def test_calibrate_phase_and_sign():
    """Test that c = 1/2 and s = -1 are the unique consistent conventions."""
    c, deviations = calibrate_phase([3, 4], bound=2)
    assert c == HALF
    assert deviations["c=1/2"] < 1e-10
    assert all(value > 1e-3 for label, value in deviations.items() if label != "c=1/2")
    assert calibrate_sign([3], c, bound=1) == -1


def test_calibrate_phase_needs_levels():
    """Test that an empty level set is rejected."""
    with pytest.raises(CalibrationError):
        calibrate_phase([])


def test_calibrate_phase_degenerate_level():
    """Test that level 2, where odd curves vanish, leaves c = 1/2 consistent."""
    assert max_abs(cs(1, 0, 2)) < 1e-12
    assert max_abs(cs(0, 1, 2)) < 1e-12
    assert max_abs(cs(2, 0, 2) + 2 * identity(1)) < 1e-12
    assert involved_vanish(1, 0, 0, 1, 2)
    assert not involved_vanish(2, 0, 0, 2, 2)
    try:
        _, deviations = calibrate_phase([2], bound=2)
    except CalibrationError as error:
        deviations = error.deviations
    assert deviations["c=1/2"] < 1e-10
    assert deviations["c=1"] > 1e-3
    assert deviations["c=-1"] > 1e-3
    c, _ = calibrate_phase([2, 3], bound=2)
    assert c == HALF


def test_calibrate_conventions():
    """Test the full calibration on a small level set."""
    record = calibrate_conventions([3], matrix_bound=1, nc_bound=1, kappa_ladder=3)
    assert record.c == HALF
    assert record.s == -1
    assert record.sigma == -1
    assert record.r_set == [3]
    assert record.max_deviation < 1e-10
    assert set(record.deviations) == {"c=1", "c=-1", "c=1/2", "c=-1/2"}


def test_record_round_trip(calibration_path, calibration_record):
    """Test save and load of a calibration record."""
    loaded = CalibrationRecord.load(calibration_path)
    assert loaded == calibration_record
    assert json.loads(calibration_path.read_text())["c"] == 0.5


def test_corrupt_record(tmp_path):
    """Test that unreadable or incomplete records raise CalibrationError."""
    path = tmp_path / "calibration.json"
    path.write_text("{not json")
    with pytest.raises(CalibrationError):
        CalibrationRecord.load(path)
    path.write_text(json.dumps({"c": 0.5}))
    with pytest.raises(CalibrationError, match="missing"):
        CalibrationRecord.load(path)
    with pytest.raises(CalibrationError):
        CalibrationRecord.load(tmp_path / "absent.json")


def test_inconsistent_record(calibration_record):
    """Test that a record with the wrong phase or kappa fails validation."""
    data = calibration_record.to_json()
    with pytest.raises(CalibrationError) as info:
        CalibrationRecord.from_json({**data, "c": 1.0})
    assert info.value.describe()
    with pytest.raises(CalibrationError):
        CalibrationRecord.from_json({**data, "kappa": -1.0})
    with pytest.raises(CalibrationError):
        CalibrationRecord.from_json({**data, "c": 0.3})
    with pytest.raises(CalibrationError):
        CalibrationRecord.from_json([1, 2])


def test_load_or_calibrate(tmp_path, calibration_path, calibration_record):
    """Test loading an existing record and calibrating a missing one."""
    assert load_or_calibrate(calibration_path, [3]) == calibration_record
    target = tmp_path / "fresh" / "calibration.json"
    record = load_or_calibrate(target, [3], matrix_bound=1, nc_bound=1, kappa_ladder=3)
    assert target.exists()
    assert CalibrationRecord.load(target) == record


def test_provenance_notes(calibration_record):
    """Test the convention notes for c = 1/2 and s = -1."""
    notes = provenance_notes(calibration_record)
    assert len(notes) == 3
    assert "c=1/2" in notes[0]


def test_consistency_survey(calibration_record):
    """Test the recorded conventions on every instance of one level."""
    survey = consistency_survey(calibration_record, 3, bound=1)
    assert survey.instances == 81
    assert survey.passed
    wrong = consistency_survey(dataclasses.replace(calibration_record, s=1), 3, bound=1)
    assert not wrong.passed
    assert (0, 1, 1, 0) in wrong.phi_failures
