from fractions import Fraction

import pytest

from algebra import AlgebraSpec, Element, EndoSpec, e, ternary_bracket
from identities import (FAILS, HOLDS, VACUOUS, TernaryCache, Window, check_alternative, check_associative,
                        check_bianchi_P, check_bmod, check_bremner, check_cocycle, check_derivation,
                        check_filippov, check_hereditary, check_jacobi, check_quasi_assoc, check_rho_compat,
                        check_skew, check_universal, cocycle_residual, crosscheck_virasoro_closed_forms,
                        hereditary_shift_pair, sweep)


def test_window_parse():
    assert Window.parse('-6..6') == Window(-6, 6)
    assert Window.parse(' 3 ') == Window(3, 3)
    assert Window(-2, 2).size == 5
    assert Window(-1, 2).doubled() == Window(-2, 4)
    assert str(Window(-1, 2)) == '[-1,2]'
    with pytest.raises(ValueError):
        Window(2, 1)


def test_sweep_keeps_first_limit_counterexamples():
    report = sweep('odd', Window(0, 4), 1, lambda x: e(x) if x % 2 else Element.zero(), limit=1)
    assert report.verdict == FAILS
    assert report.failures == 2
    assert report.counterexamples == [((1,), e(1))]
    assert report.tuples_checked == 5


def test_witt_is_left_symmetric(witt):
    report = check_quasi_assoc(witt, Window(-3, 3))
    assert report.verdict == HOLDS
    assert report.tuples_checked == 343
    assert check_quasi_assoc(witt, Window(-3, 3), mode='scalar').holds


def test_virasoro_is_left_symmetric(virasoro):
    report = check_quasi_assoc(virasoro, Window(-3, 3))
    assert report.verdict == HOLDS
    assert report.undefined_points
    assert check_quasi_assoc(virasoro, Window(-3, 3), mode='scalar').holds


def test_witt_is_not_associative(witt):
    report = check_associative(witt, Window(-2, 2))
    assert report.verdict == FAILS
    assert report.first_counterexample() == ((-2, -2, -2), e(-6, -4))


def test_alternative(witt):
    degenerate, strict = check_alternative(witt, Window(-2, 2))
    assert degenerate.holds
    assert strict.verdict == FAILS


@pytest.mark.parametrize('form', ['J', 'TG'])
def test_jacobi(witt, virasoro, form):
    assert check_jacobi(witt, Window(-3, 3), form=form).holds
    assert check_jacobi(virasoro, Window(-3, 3), form=form).holds


def test_skew_notes_equal_weights(witt):
    report = check_skew(witt, Window(-3, 3))
    assert report.holds
    assert report.notes


def test_skew_unequal_weights():
    spec = AlgebraSpec.from_texts('-j', a='1', b='2')
    report = check_skew(spec, Window(-2, 2))
    assert report.verdict == FAILS
    assert dict(report.counterexamples)[(0, 1)] == e(1, 1)


def test_derivation_defect(witt):
    report = check_derivation(witt, Window(-2, 2), limit=None)
    assert report.verdict == FAILS
    for (i, j, k), residual in report.counterexamples:
        assert residual == e(i + j + k, i * i)
    assert check_derivation(witt, Window(-2, 2), mode='scalar').verdict == FAILS


def test_all_poles_is_vacuous():
    spec = AlgebraSpec.from_texts('1/(i-i)')
    report = check_quasi_assoc(spec, Window(-1, 1))
    assert report.verdict == VACUOUS
    assert len(report.undefined_points) == 27


def _sign(i, j):
    return (i < j) - (i > j)


def test_cocycle_residual_value(witt):
    assert cocycle_residual(witt, _sign, 0, 1, 2) == -1


def test_cocycle_check(witt):
    report = check_cocycle(witt, Window(-1, 2), _sign, limit=None)
    assert report.verdict == FAILS
    assert dict(report.counterexamples)[(0, 1, 2)] == e(3, -1)
    assert check_cocycle(witt, Window(-2, 2), lambda i, j: 0).holds


def test_hereditary_central_residual(virasoro):
    assert hereditary_shift_pair(virasoro, 1, -2, 1) == (0, 6)
    report = check_hereditary(virasoro, Window(-2, 2), EndoSpec.shift(1), limit=None)
    assert report.verdict == FAILS
    assert dict(report.counterexamples)[(1, -2)] == Element.central(6)


def test_hereditary_shift_witt(witt):
    assert check_hereditary(witt, Window(-3, 3), EndoSpec.shift(1)).holds
    report = check_hereditary(witt, Window(0, 1), EndoSpec.shift(1), variant='shift1_table', limit=None)
    assert dict(report.counterexamples)[(0, 0)] == e(1, 2)


def test_hereditary_scalar_shift_needs_shift(witt):
    with pytest.raises(ValueError):
        check_hereditary(witt, Window(0, 1), EndoSpec.zero())


def test_bianchi_witt(witt):
    assert check_bianchi_P(witt, Window(-2, 2), 1).holds


def test_rho_compat(witt):
    assert check_rho_compat(witt, Window(-3, 3), EndoSpec.shift(1)).holds
    assert check_rho_compat(witt, Window(-3, 3), EndoSpec.shift(2), mode='element').holds


def test_universal_holds_for_left_symmetric(witt):
    assert check_universal(witt, Window(-1, 1)).holds


def test_bmod(witt):
    skew, jacobi = check_bmod(witt, Window(-1, 1))
    assert skew.holds
    assert jacobi.holds
    assert jacobi.tuples_checked == 729


def test_closed_form_ternary_mismatch_is_central(virasoro):
    ternary, lhs, rhs, skew = crosscheck_virasoro_closed_forms(virasoro, Window(-4, 3), limit=None)
    residual = dict(ternary.counterexamples)[(1, 3, -4)]
    assert residual.theta == Fraction(87, 2)


def test_skew_system_values(virasoro):
    skew = crosscheck_virasoro_closed_forms(virasoro, Window(1, 2), limit=None)[3]
    assert dict(skew.counterexamples)[(1, 2)] == Element({3: Fraction(11, 2)}, Fraction(-3, 2))


NON_LIE = dict(a='1', b='2')


@pytest.fixture(scope='module')
def skewed():
    return AlgebraSpec.from_texts('i*j^2 + 1 - j', **NON_LIE)


def test_kupershmidt_is_left_symmetric(kupershmidt):
    report = check_quasi_assoc(kupershmidt, Window(-8, 8))
    assert report.verdict == HOLDS
    assert report.tuples_checked == 4021
    assert len(report.undefined_points) == 892
    assert report.tuples_checked + len(report.undefined_points) == 17 ** 3
    assert all(-2 in (i + j, j + k, i + k, i + j + k) for i, j, k in report.undefined_points)


def test_degenerate_left_alternative_law(virasoro):
    degenerate, _ = check_alternative(virasoro, Window(-6, 6))
    assert degenerate.holds


def test_jacobi_forms_agree_on_failing_spec(skewed):
    J = check_jacobi(skewed, Window(-3, 3), form='J', limit=None)
    TG = check_jacobi(skewed, Window(-3, 3), form='TG', limit=None)
    assert J.verdict == TG.verdict == FAILS
    assert J.counterexamples == TG.counterexamples
    assert dict(J.counterexamples)[(0, 0, 0)] == e(0, 3)


def test_jacobi_forms_agree_with_poles(kupershmidt):
    J = check_jacobi(kupershmidt, Window(-4, 4), form='J', limit=None)
    TG = check_jacobi(kupershmidt, Window(-4, 4), form='TG', limit=None)
    assert J.verdict == TG.verdict == HOLDS
    assert J.counterexamples == TG.counterexamples == []


@pytest.mark.parametrize('check', [check_quasi_assoc, check_derivation])
def test_scalar_and_element_modes_agree(skewed, check):
    element = check(skewed, Window(-3, 3), mode='element', limit=None)
    scalar = check(skewed, Window(-3, 3), mode='scalar', limit=None)
    assert element.verdict == scalar.verdict == FAILS
    assert element.counterexamples == scalar.counterexamples


def test_derivation_residual_is_i_squared_on_wide_window(witt):
    report = check_derivation(witt, Window(-4, 4), mode='scalar', limit=None)
    assert len(report.counterexamples) == report.failures
    for (i, j, k), residual in report.counterexamples:
        assert residual == e(i + j + k, i * i)


def test_rho_compat_modes_agree(kupershmidt):
    difference = check_rho_compat(kupershmidt, Window(-3, 3), EndoSpec.shift(1), limit=None)
    element = check_rho_compat(kupershmidt, Window(-3, 3), EndoSpec.shift(1), mode='element', limit=None)
    assert difference.verdict == element.verdict == FAILS
    assert difference.counterexamples == element.counterexamples
    assert difference.undefined_points == element.undefined_points
    assert dict(difference.counterexamples)[(1, 2)] == e(4, Fraction(-1, 6))


@pytest.mark.parametrize('x0', range(-3, 4))
def test_rho_compat_witt_every_shift(witt, x0):
    assert check_rho_compat(witt, Window(-8, 8), EndoSpec.shift(x0)).holds


@pytest.mark.parametrize('x0', [1, 2, 3])
def test_hereditary_shift_witt_wide(witt, x0):
    report = check_hereditary(witt, Window(-8, 8), EndoSpec.shift(x0))
    assert report.holds
    assert report.tuples_checked == 289


def test_universal_kupershmidt(kupershmidt):
    report = check_universal(kupershmidt, Window(-3, 3))
    assert report.holds
    assert report.undefined_points


def test_ternary_cache_is_trilinear(kupershmidt):
    T = TernaryCache(kupershmidt)
    assert T(e(1), e(2), e(3)) == ternary_bracket(kupershmidt, e(1), e(2), e(3))
    assert T(e(1), e(2), e(3))
    combined = T(e(1) + e(2, 3), e(0), e(3))
    assert combined == (ternary_bracket(kupershmidt, e(1), e(0), e(3))
                        + ternary_bracket(kupershmidt, e(2), e(0), e(3)).scale(3))


def test_filippov_and_bremner_witt(witt):
    filippov = check_filippov(witt, Window(-2, 2))
    assert filippov.holds
    assert filippov.tuples_checked == 5 ** 5
    bremner = check_bremner(witt, Window(-1, 1))
    assert bremner.holds
    assert bremner.tuples_checked == 3 ** 7


def _direct_filippov(spec, i, j, k, s, t):
    T = lambda x, y, z: ternary_bracket(spec, x, y, z)
    A, B, C, D, E = e(i), e(j), e(k), e(s), e(t)
    return T(A, B, T(C, D, E)) - (T(T(A, B, C), D, E) + T(C, T(A, B, D), E) + T(C, D, T(A, B, E)))


def test_filippov_virasoro_matches_direct_computation(virasoro):
    report = check_filippov(virasoro, Window(-2, 2))
    assert report.tuples_checked + len(report.undefined_points) == 5 ** 5
    assert len(report.counterexamples) == min(report.failures, 20)
    for indices, residual in report.counterexamples:
        assert _direct_filippov(virasoro, *indices) == residual


def test_bremner_virasoro_is_swept(virasoro):
    report = check_bremner(virasoro, Window(-1, 1))
    assert report.verdict in (HOLDS, FAILS)
    assert report.tuples_checked + len(report.undefined_points) == 3 ** 7


def test_sweep_rejects_zero_limit():
    with pytest.raises(ValueError):
        sweep('empty', Window(0, 1), 1, lambda x: e(x), limit=0)
