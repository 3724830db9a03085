import pytest
from hypothesis import given, strategies as st

from diffop import DiffOp, Ternary, commutator, dop_compose, lk_basis, lk_star_closed, lk_suite, lk_triple_closed
from identities import FAILS, HOLDS

small = st.integers(0, 5)


def test_d_after_x():
    assert DiffOp.d() @ DiffOp.x() == DiffOp({(1, 1): 1, (0, 0): 1})
    assert str(DiffOp.d() @ DiffOp.x()) == 'x*d + 1'


def test_compose_higher_orders():
    # d^2 x^2 = x^2 d^2 + 4 x d + 2
    assert dop_compose(DiffOp.d(2), DiffOp.x(2)) == DiffOp({(2, 2): 1, (1, 1): 4, (0, 0): 2})


def test_zero_terms_vanish():
    assert DiffOp.x() - DiffOp.x() == DiffOp.zero()
    assert not DiffOp.zero()
    with pytest.raises(ValueError):
        DiffOp({(-1, 0): 1})


def test_basis():
    assert lk_basis(1) == DiffOp({(2, 1): 1})
    assert lk_basis(1).to_json() == {'terms': {'x^2*d^1': '1'}, 'theta': '0'}
    with pytest.raises(ValueError):
        lk_basis(-1)


@given(small, small)
def test_star_closed_form(p, q):
    assert lk_basis(p) @ lk_basis(q) == lk_star_closed(p, q)


@given(small, small, small)
def test_triple_closed_form(p, q, r):
    assert lk_basis(p) @ lk_basis(q) @ lk_basis(r) == lk_triple_closed(p, q, r)


@given(small, small)
def test_commutator_is_witt_bracket(p, q):
    assert commutator(lk_basis(p), lk_basis(q)) == lk_basis(p + q).scale(q - p)


@given(small, small, small)
def test_composition_is_associative(p, q, r):
    a, b, c = lk_basis(p), lk_basis(q), lk_basis(r)
    assert (a @ b) @ c == a @ (b @ c)


def test_ternary_with_zero_argument():
    assert Ternary()(DiffOp.zero(), lk_basis(1), lk_basis(2)) == DiffOp.zero()


def test_assoc_group():
    reports = lk_suite(6, ['assoc'])
    assert [r.check_name for r in reports] == ['lk-assoc', 'lk-triple-closed', 'lk-commutator']
    assert reports[0].tuples_checked == 343
    assert all(r.verdict == HOLDS for r in reports)


def test_full_suite():
    reports = {r.check_name: r for r in lk_suite(3)}
    failing = {name for name, r in reports.items() if r.verdict == FAILS}
    assert failing == {'lk-ops-LR-printed', 'lk-ops-RL-printed'}
    assert all(r.verdict == HOLDS for name, r in reports.items() if name not in failing)
    assert reports['lk-bremner'].window.hi == 2


def test_unknown_group():
    with pytest.raises(ValueError):
        lk_suite(2, ['nope'])
