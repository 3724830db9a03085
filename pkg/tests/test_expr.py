from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import KUPERSHMIDT_F, config_path
from expr import (MAX_DEGREE, Add, Const, ConfigError, Delta, Div, ExprSyntaxError, Mul, Neg, Param, Pow, Sub, Var,
                  degree, eval_ast, parse_config, parse_config_text, parse_expr, print_canonical)
from scalar import UNDEFINED, Scalar

HALF = Scalar(Fraction(1, 2))


def test_kupershmidt_value():
    ast = parse_expr(KUPERSHMIDT_F)
    assert eval_ast(ast, 1, 2, HALF) == Fraction(-8, 5)


def test_pole_is_undefined():
    ast = parse_expr(KUPERSHMIDT_F)
    assert eval_ast(ast, -1, -1, HALF) is UNDEFINED


def test_rational_literal():
    assert parse_expr('1/2') == Const(Fraction(1, 2))
    assert parse_expr('1/0') == Div(Const(Fraction(1)), Const(Fraction(0)))
    assert eval_ast(parse_expr('1/0'), 0, 0, HALF) is UNDEFINED


def test_division_by_name_is_not_a_literal():
    assert parse_expr('1/eps') == Div(Const(Fraction(1)), Param())


def test_unary_minus_binds_looser_than_power():
    ast = parse_expr('-i^2')
    assert ast == Neg(Pow(Var('i'), 2))
    assert print_canonical(ast) == '(-(i^2))'
    assert eval_ast(ast, 3, 0, HALF) == -9


def test_delta():
    ast = parse_expr('delta(i+j)')
    assert eval_ast(ast, 2, -2, HALF) == 1
    assert eval_ast(ast, 2, -1, HALF) == 0


def test_precedence():
    assert parse_expr('i+j*2') == Add(Var('i'), Mul(Var('j'), Const(Fraction(2))))
    assert parse_expr('i-j-1') == Sub(Sub(Var('i'), Var('j')), Const(Fraction(1)))


def test_unknown_name():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr('junk((')
    assert err.value.offset == 0


def test_unexpected_end():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr('i +')
    assert err.value.offset == 3
    assert "'i'" in err.value.expected


def test_bad_character_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr('i $ j')
    assert err.value.offset == 2


def test_unbalanced():
    with pytest.raises(ExprSyntaxError):
        parse_expr('(i+j')
    with pytest.raises(ExprSyntaxError):
        parse_expr('i+j)')


def test_large_exponent_is_rejected():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr('i^999999999')
    assert err.value.offset == 2
    with pytest.raises(ExprSyntaxError):
        parse_expr('j^65')
    assert parse_expr('i^064') == Pow(Var('i'), 64)


def test_nested_powers_are_bounded():
    assert degree(parse_expr('(i*j)^64')) == 128
    with pytest.raises(ExprSyntaxError):
        parse_expr('((i^64)^64)^64')


leaves = st.one_of(
    st.fractions(min_value=0, max_value=50, max_denominator=9).map(Const),
    st.sampled_from([Var('i'), Var('j'), Param()]),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        children.map(Delta),
        st.tuples(children, st.integers(0, 4)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from([Add, Sub, Mul, Div]), children, children).map(lambda t: t[0](t[1], t[2])),
    )


asts = st.recursive(leaves, _extend, max_leaves=12).filter(lambda ast: degree(ast) <= MAX_DEGREE)


@settings(max_examples=1000)
@given(asts)
def test_print_parse_roundtrip(ast):
    assert parse_expr(print_canonical(ast)) == ast


@given(asts, st.integers(-5, 5), st.integers(-5, 5))
def test_reparsed_ast_evaluates_identically(ast, i, j):
    value = eval_ast(ast, i, j, HALF)
    again = eval_ast(parse_expr(print_canonical(ast)), i, j, HALF)
    assert (value is UNDEFINED and again is UNDEFINED) or value == again


def test_config_with_comments_and_quotes():
    config = parse_config_text('# witt\nf = "-j"  # product\na = 1\nb = 1\neps = 0\nscalar = rational\n')
    assert config.f == '-j'
    assert config.lines['a'] == 3


def test_config_errors_carry_line_numbers():
    with pytest.raises(ConfigError) as err:
        parse_config_text('f = -j\nwat = 1\n')
    assert err.value.line == 2
    with pytest.raises(ConfigError) as err:
        parse_config_text('f = -j\nf = i\n')
    assert err.value.line == 2
    with pytest.raises(ConfigError) as err:
        parse_config('f = -j\na = 1\nb = 1\neps = 0\nscalar = complex\n')
    assert err.value.line == 5


def test_config_missing_key():
    with pytest.raises(ConfigError, match='missing'):
        parse_config_text('f = -j\n')


def test_config_bad_expression():
    with pytest.raises(ConfigError):
        parse_config('f = junk((\na = 1\nb = 1\neps = 0\nscalar = rational\n')


def test_negative_b_warns():
    spec = parse_config('f = -j\na = 1\nb = -1\neps = 0\nscalar = rational\n')
    assert spec.warnings


def test_shipped_configs():
    with open(config_path('algebras', 'virasoro.cfg'), encoding='utf-8') as fh:
        spec = parse_config(fh.read())
    assert spec.has_theta
    assert spec.eps == Fraction(1, 2)
    assert dict(spec.echo)['scalar'] == 'rational'
