from fractions import Fraction as F

import numpy as np
import pytest

from vpwave.admissible import AdmissibleFn
from vpwave.dlvp import (
    ScalingFunction,
    SparseSpectrum,
    normalized_filters,
    scaling_spectrum,
    two_scale,
    wavelet_two_scale,
)
from vpwave.errors import ConditionViolated, UnsupportedDimension
from vpwave.intlat import (
    J_D,
    J_X,
    J_Y,
    IntMat,
    axis_doubling,
    chain,
    plane_rotation,
)
from vpwave.mra import (
    audit_orthonormality,
    basis_check,
    build_report,
    check_reduction,
    check_reduction_highdim,
    independent_nesting_residual,
    nesting_residual,
    support_radii,
    trailing_axis_collapse,
)


def example_48():
    N = IntMat.from_rows([[10, -4], [6, 4]])
    J = IntMat.from_rows([[1, 1], [0, 2]])
    return chain(N, [J]), AdmissibleFn.tensor_linear([F(1, 10), F(1, 10)])


def square_window(den):
    return AdmissibleFn.tensor_linear([F(1, den), F(1, den)])


# -- basis condition ------------------------------------------------------------


def test_basis_check_example48():
    c, g = example_48()
    ok, min_power = basis_check(c, 0, g)
    assert ok and min_power > 0


def test_basis_check_dirichlet_power():
    g = AdmissibleFn.characteristic(2)
    c = chain(IntMat.identity(2), [J_X, J_D])
    for level in range(3):
        ok, min_power = basis_check(c, level, g)
        assert ok
        assert min_power == pytest.approx(1.0 / c.size(level), abs=1e-15)


def test_zeroed_class_fails_dimension():
    from vpwave.dlvp import class_powers
    from vpwave.intlat import generating_set

    c, g = example_48()
    sf = scaling_spectrum(c, 0, g)
    gs = generating_set(c.M0.T)
    kill = gs.index_of((2, 1))
    coeffs = {k: v for k, v in sf.spectrum.coeffs.items() if gs.index_of(k) != kill}
    broken = ScalingFunction(chain=c, level=0, g=g,
                             spectrum=SparseSpectrum(dim=2, coeffs=coeffs, all_real=True))
    powers = class_powers(broken)
    assert powers[kill] == 0.0


# -- nesting ----------------------------------------------------------------------


def test_nesting_residual_vp_chain():
    c, g = example_48()
    assert nesting_residual(c, 0, g) < 1e-12


def test_nesting_residual_dirichlet_exact():
    g = AdmissibleFn.characteristic(2)
    c = chain(IntMat.identity(2), [J_Y, J_D, J_X])
    for level in range(3):
        assert nesting_residual(c, level, g) == 0.0


def test_naive_quincunx_pair_is_not_nested():
    # sampling the plain window on both levels of a quincunx step leaves a
    # contradiction between paired frequencies; the defect has a floor
    g = square_window(10)
    M0 = IntMat.diagonal([32, 32])
    coarse = scaling_spectrum(chain(M0, []), 0, g)
    fine = scaling_spectrum(chain(J_D @ M0, []), 0, g)
    assert independent_nesting_residual(coarse, fine) > 1e-3


def test_naive_axis_pair_is_nested():
    # with an axis doubling the same naive pairing works (the 1-D regime)
    g = square_window(10)
    M0 = IntMat.diagonal([32, 32])
    coarse = scaling_spectrum(chain(M0, []), 0, g)
    fine = scaling_spectrum(chain(J_X @ M0, []), 0, g)
    assert independent_nesting_residual(coarse, fine) < 1e-12


# -- support growth ----------------------------------------------------------------


def test_support_radii_monotone():
    c, g = example_48()
    ext = chain(c.M0, list(c.factors) + [J_D, J_X])
    radii = support_radii(ext, g)
    assert all(b >= a for a, b in zip(radii, radii[1:]))


def test_support_radius_identity_level():
    g = square_window(10)
    c = chain(IntMat.identity(2), [J_D])
    assert support_radii(c, g)[0] == 0


def test_support_radii_dirichlet_doubling():
    g = AdmissibleFn.characteristic(2)
    c = chain(IntMat.identity(2), [J_D] * 8)
    radii = support_radii(c, g)
    assert all(b >= a for a, b in zip(radii, radii[1:]))
    # sup-norm ball radius roughly doubles every two quincunx steps
    for lvl in range(4, 8, 2):
        assert 1.5 <= radii[lvl + 2] / radii[lvl] <= 2.5


# -- orthonormality audits ------------------------------------------------------------


def test_audit_normalized_filters():
    c, g = example_48()
    a2, b2 = normalized_filters(c, 0, g)
    assert audit_orthonormality(a2) < 1e-10
    assert audit_orthonormality(b2) < 1e-10


def test_audit_raw_filters_need_normalization():
    c, g = example_48()
    assert audit_orthonormality(two_scale(c, 0, g)) > 0.1
    assert audit_orthonormality(wavelet_two_scale(c, 0, g)) > 0.1


def test_audit_dirichlet_raw_exact():
    g = AdmissibleFn.characteristic(2)
    c = chain(IntMat.diagonal([2, 3]), [J_Y])
    assert audit_orthonormality(two_scale(c, 0, g)) == 0.0
    assert audit_orthonormality(wavelet_two_scale(c, 0, g)) == 0.0


# -- reduction dichotomy ---------------------------------------------------------------


def test_reduction_single_threshold():
    assert check_reduction(square_window(6), J_X, "single")
    assert check_reduction(square_window(6), J_Y, "single")
    ok, dev = check_reduction(square_window(5), J_X, "single", return_deviation=True)
    assert not ok and dev > 1e-4


def test_reduction_double_thresholds():
    assert check_reduction(square_window(14), J_X, "double")
    assert not check_reduction(square_window(12), J_X, "double")
    assert check_reduction(square_window(10), J_D, "double")
    assert not check_reduction(square_window(8), J_D, "double")


def test_reduction_dirichlet_exact():
    g = AdmissibleFn.characteristic(2)
    for J in (J_X, J_Y, J_D):
        ok, dev = check_reduction(g, J, "single", return_deviation=True)
        assert ok and dev == 0.0


def test_reduction_rejects_other_dimensions():
    with pytest.raises(UnsupportedDimension):
        check_reduction(AdmissibleFn.tensor_linear([F(1, 10)]), IntMat.from_rows([[2]]), "single")


def test_reduction_highdim_flags():
    g3 = AdmissibleFn.tensor_linear([F(1, 20)] * 3)
    c3 = chain(IntMat.identity(3), [axis_doubling(3, 0), plane_rotation(3, 0, 1)])
    assert check_reduction_highdim(g3, c3) == [True, True]


def test_reduction_highdim_trailing_axis():
    g3 = AdmissibleFn.tensor_linear([F(1, 20)] * 3)
    c3 = chain(IntMat.identity(3), [axis_doubling(3, 2)])
    assert trailing_axis_collapse(c3, g3) == 0.0


def test_reduction_highdim_condition_violation():
    g3 = AdmissibleFn.tensor_linear([F(1, 20)] * 3)
    bad = chain(IntMat.identity(3), [axis_doubling(3, 2), plane_rotation(3, 0, 1)])
    with pytest.raises(ConditionViolated):
        check_reduction_highdim(g3, bad)


# -- report -------------------------------------------------------------------------------


def test_report_example48():
    c, g = example_48()
    rep = build_report(c, g)
    assert rep.ok and rep.dyadic
    assert rep.levels[0].size == 64 and rep.levels[1].size == 128
    text = rep.render()
    assert "min_class_power" in text and "ok: True" in text


def test_report_detects_near_degenerate_window():
    # Fejer-type window on a quincunx chain: classes pair half-values on the
    # closed boundary; report should still complete and carry finite numbers
    g = AdmissibleFn.tensor_linear([F(1, 2), F(1, 2)])
    c = chain(IntMat.identity(2), [J_D])
    rep = build_report(c, g)
    assert len(rep.levels) == 2
    assert all(lr.min_class_power >= 0 for lr in rep.levels)
