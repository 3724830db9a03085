from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from algebra import AlgebraSpec, Element
from burgers import (StructureTable, TableFormatError, compute_A, emit_burgers, format_table, format_terms,
                     graded_truncate, lsa_table_check, parse_table)
from conftest import config_path
from identities import FAILS, HOLDS, Window

coefficients = st.sampled_from([Fraction(0), Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2)])


def _read_table(name):
    with open(config_path('tables', name), encoding='utf-8') as fh:
        return parse_table(fh.read())


@st.composite
def tables(draw, dim=3):
    entries = {}
    for j in range(1, dim + 1):
        for k in range(1, dim + 1):
            for i in range(1, dim + 1):
                entries[(j, k, i)] = draw(coefficients)
    return StructureTable(dim, entries)


def test_parse_and_format():
    T = _read_table('two_dim_lsa.txt')
    assert T.dim == 2
    assert T.entries() == [(1, 2, 2, Fraction(1))]
    assert parse_table(format_table(T)) == T


@pytest.mark.parametrize('text, line', [
    ('1 2 2 1\n', 1),
    ('dim 2\n1 2 3 1\n', 2),
    ('dim 2\n1 2 2 1\n1 2 2 3\n', 3),
    ('dim 2\n1 2 2\n', 2),
    ('dim x\n', 1),
])
def test_table_errors(text, line):
    with pytest.raises(TableFormatError) as err:
        parse_table(text)
    assert err.value.line == line


def test_missing_header():
    with pytest.raises(TableFormatError):
        parse_table('# nothing\n')


def test_multiply():
    T = StructureTable(2, {(1, 2, 2): 1})
    assert T.multiply({1: 2}, {2: 3}) == [0, 6]
    assert T.multiply([1, 1], [1, 1]) == [0, 1]


def test_left_symmetric_table():
    relation, associator = lsa_table_check(_read_table('two_dim_lsa.txt'))
    assert relation.verdict == associator.verdict == HOLDS


def test_non_left_symmetric_table():
    relation, associator = lsa_table_check(_read_table('two_dim_non_lsa.txt'))
    assert relation.verdict == associator.verdict == FAILS
    assert relation.first_counterexample() == ((1, 1, 2, 2), Element({1: -1}))


@settings(max_examples=60)
@given(tables())
def test_relation_and_associator_agree(T):
    relation, associator = lsa_table_check(T)
    assert relation.verdict == associator.verdict


@given(tables(), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_cubic_term_identity(T, u):
    A = compute_A(T)
    uu = T.multiply(u, u)
    expected = [p - q for p, q in zip(T.multiply(u, uu), T.multiply(uu, u))]
    for i in T.indices():
        total = sum(A[(i, j, k, m)] * u[k - 1] * u[j - 1] * u[m - 1]
                    for j in T.indices() for k in T.indices() for m in T.indices())
        assert total == expected[i - 1]


def test_cubic_coefficients():
    A = compute_A(StructureTable(2, {(1, 2, 2): 1}))
    third = Fraction(1, 3)
    assert A[(2, 1, 1, 2)] == A[(2, 1, 2, 1)] == A[(2, 2, 1, 1)] == third
    assert not any(A[(1, j, k, m)] for j in (1, 2) for k in (1, 2) for m in (1, 2))


def test_emit_plain():
    text = emit_burgers(StructureTable(2, {(1, 2, 2): 1}))
    assert text == ("u1_t = u1_xx\n"
                    "u2_t = u2_xx + 2*u2*u1_x + 1/3*u1*u1*u2 + 1/3*u2*u1*u1 + 1/3*u1*u2*u1")


def test_emit_latex():
    text = emit_burgers(StructureTable(2, {(1, 2, 2): 1}), fmt='latex')
    assert text.splitlines()[1].startswith('u^{2}_{t} = u^{2}_{xx} + 2 u^{2} u^{1}_{x} + \\frac{1}{3} u^{1}')
    with pytest.raises(ValueError):
        emit_burgers(StructureTable(1), fmt='html')


def test_format_terms():
    assert format_terms([]) == '0'
    assert format_terms([(-1, ['a']), (Fraction(-1, 2), ['b']), (3, [])]) == '-a - 1/2*b + 3'


def test_truncate_witt(witt):
    result = graded_truncate(witt, Window(0, 2))
    assert result.table.get(result.position(1), result.position(1), result.position(2)) == -1
    assert result.table.get(2, 3, 3) == 0
    assert result.dropped == [(1, 2), (2, 1), (2, 2)]
    assert result.undefined == []


def test_truncate_records_poles(kupershmidt):
    result = graded_truncate(kupershmidt, Window(-1, 1))
    assert (-1, -1) in result.undefined


def test_truncate_accepts_dual_spec_with_rational_values():
    spec = AlgebraSpec.from_texts('-j*(1+eps)', eps='1', scalar='dual')
    assert graded_truncate(spec, Window(0, 1)).table.get(1, 2, 2) == -2
