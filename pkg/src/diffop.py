"""Polynomial differential operators in normal order, and the algebra of vector fields
e_i = x^(i+1) d/dx (i >= 0) under operator composition."""
import argparse
import logging
from fractions import Fraction
from math import comb, perm

from identities import DEFAULT_LIMIT, Window, sweep

logger = logging.getLogger(__name__)

LK_GROUPS = {
    'assoc': ('lk-assoc', 'lk-triple-closed', 'lk-commutator'),
    'ternary': ('lk-ternary',),
    'filippov': ('lk-filippov',),
    'bremner': ('lk-bremner',),
    'derivation': ('lk-derivation',),
    'ops': ('lk-ops-LL', 'lk-ops-RR', 'lk-ops-LR', 'lk-ops-LR-printed', 'lk-ops-RL',
            'lk-ops-RL-printed', 'lk-ops-RR-sum'),
    'final': ('lk-final',),
}


class DiffOp:
    """sum c * x^xpow * (d/dx)^dorder, keyed by (xpow, dorder), no zero coefficients."""
    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        canonical = {}
        for (xpow, dorder), c in (terms or {}).items():
            if xpow < 0 or dorder < 0:
                raise ValueError(f"Negative power in term x^{xpow} d^{dorder}")
            c = Fraction(c)
            if c:
                canonical[(int(xpow), int(dorder))] = c
        object.__setattr__(self, '_terms', canonical)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def x(cls, power=1):
        return cls({(power, 0): 1})

    @classmethod
    def d(cls, order=1):
        return cls({(0, order): 1})

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    def __reduce__(self):
        return (DiffOp, (dict(self._terms),))

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __add__(self, other):
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, 0) + c
        return DiffOp(terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DiffOp({key: -c for key, c in self._terms.items()})

    def scale(self, factor):
        return DiffOp({key: factor * c for key, c in self._terms.items()})

    def __matmul__(self, other):
        return dop_compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def to_json(self):
        return {'terms': {f"x^{xpow}*d^{dorder}": str(c) for (xpow, dorder), c in self.items()}, 'theta': '0'}

    def __str__(self):
        parts = []
        for (xpow, dorder), c in sorted(self._terms.items(), key=lambda item: (-item[0][1], -item[0][0])):
            factors = [f"x^{xpow}" if xpow > 1 else 'x' if xpow else '',
                       f"d^{dorder}" if dorder > 1 else 'd' if dorder else '']
            factors = [f for f in factors if f]
            body = '*'.join(([str(c)] if c != 1 or not factors else []) + factors)
            parts.append(body)
        return ' + '.join(parts) if parts else '0'

    def __repr__(self):
        return f"DiffOp({self})"


def dop_compose(A, B):
    """A o B, normal ordered with d^b o x^c = sum_m C(b,m) c!/(c-m)! x^(c-m) d^(b-m)."""
    terms = {}
    for (a, b), c in A._terms.items():
        for (p, q), d in B._terms.items():
            for m in range(min(b, p) + 1):
                key = (a + p - m, b - m + q)
                terms[key] = terms.get(key, 0) + c * d * comb(b, m) * perm(p, m)
    return DiffOp(terms)


def lk_basis(i):
    if i < 0:
        logger.error(f"Vector field index must be nonnegative, got {i}")
        raise ValueError(f"lk_basis index must be >= 0, got {i}")
    return DiffOp({(i + 1, 1): 1})


def _e_d(n, order):
    """e_n (d/dx)^order = x^(n+1) d^(order+1)."""
    return DiffOp({(n + 1, order + 1): 1})


def lk_star_closed(p, q):
    """(q+1) e_{p+q} + e_{p+q+1} d/dx."""
    return _e_d(p + q, 0).scale(q + 1) + _e_d(p + q + 1, 1)


def lk_triple_closed(p, q, r):
    """(r+1)(q+r+1) e_{p+q+r} + (q+2r+3) e_{p+q+r+1} d + e_{p+q+r+2} d^2."""
    n = p + q + r
    return (_e_d(n, 0).scale((r + 1) * (q + r + 1)) + _e_d(n + 1, 1).scale(q + 2 * r + 3)
            + _e_d(n + 2, 2))


def commutator(A, B):
    return A @ B - B @ A


class Ternary:
    """x o [y,z] + y o [z,x] + z o [x,y], memoized."""

    def __init__(self):
        self.cache = {}

    def __call__(self, A, B, C):
        if not (A and B and C):
            return DiffOp.zero()
        key = (A, B, C)
        if key not in self.cache:
            self.cache[key] = A @ commutator(B, C) + B @ commutator(C, A) + C @ commutator(A, B)
        return self.cache[key]


def lk_suite(pmax, checks=None, bremner_pmax=2, limit=DEFAULT_LIMIT):
    if pmax < 0:
        raise ValueError(f"pmax must be >= 0, got {pmax}")
    selected = []
    for group in (checks or LK_GROUPS):
        if group not in LK_GROUPS:
            raise ValueError(f"Unknown lk check group {group!r}; expected one of {', '.join(LK_GROUPS)}")
        selected.extend(LK_GROUPS[group])

    w = Window(0, pmax)
    basis = {}

    def e(i):
        if i not in basis:
            basis[i] = lk_basis(i)
        return basis[i]

    T = Ternary()
    L = lambda a: (lambda s: a @ s)
    R = lambda a: (lambda s: s @ a)

    residuals = {
        'lk-assoc': (3, lambda p, q, r: (e(p) @ e(q)) @ e(r) - e(p) @ (e(q) @ e(r))),
        'lk-triple-closed': (3, lambda p, q, r: e(p) @ e(q) @ e(r) - lk_triple_closed(p, q, r)),
        'lk-commutator': (2, lambda p, q: commutator(e(p), e(q)) - lk_basis(p + q).scale(q - p)),
        'lk-ternary': (3, lambda p, q, r: T(e(p), e(q), e(r))),
        'lk-filippov': (5, lambda p, q, r, s, t: (
            T(e(p), e(q), T(e(r), e(s), e(t)))
            - (T(T(e(p), e(q), e(r)), e(s), e(t)) + T(e(r), T(e(p), e(q), e(s)), e(t))
               + T(e(r), e(s), T(e(p), e(q), e(t)))))),
        'lk-bremner': (7, lambda p, q, r, s, t, u, v: (
            T(T(e(p), T(e(q), e(r), e(s)), e(t)), e(u), e(v))
            - T(T(e(p), e(q), e(r)), T(e(s), e(t), e(u)), e(v)))),
        'lk-derivation': (3, lambda p, q, r: (
            commutator(e(p), e(q) @ e(r))
            - (e(q) @ commutator(e(p), e(r)) + commutator(e(p), e(q)) @ e(r)))),
        # operator identities, evaluated on the basis argument e_s
        'lk-ops-LL': (3, lambda p, q, s: (
            L(e(p))(L(e(q))(e(s))) - L(e(q))(L(e(p))(e(s))) - L(commutator(e(p), e(q)))(e(s)))),
        'lk-ops-RR': (3, lambda p, q, s: (
            R(commutator(e(p), e(q)))(e(s)) + R(e(p))(R(e(q))(e(s))) - R(e(q))(R(e(p))(e(s))))),
        'lk-ops-LR': (3, lambda p, q, s: L(e(p))(R(e(q))(e(s))) - R(e(q))(L(e(p))(e(s)))),
        'lk-ops-LR-printed': (3, lambda p, q, s: e(p) @ commutator(e(s), e(q))),
        'lk-ops-RL': (3, lambda p, q, s: R(e(p))(L(e(q))(e(s))) - L(e(q))(R(e(p))(e(s)))),
        'lk-ops-RL-printed': (3, lambda p, q, s: (
            R(e(p))(L(e(q))(e(s))) - L(e(q))(R(e(p))(e(s))) - e(q) @ commutator(e(p), e(s)))),
        'lk-ops-RR-sum': (3, lambda p, q, s: (
            R(e(p))(R(e(q))(e(s))) + R(e(p) @ e(q))(e(s)) - e(s) @ (R(e(p))(e(q)) + R(e(q))(e(p))))),
        'lk-final': (3, lambda p, q, r: (
            commutator(e(p), commutator(e(q), e(r))) + commutator(e(r), commutator(e(p), e(q)))
            - (e(q) @ commutator(e(p), e(r)) - commutator(e(p), e(r)) @ e(q)))),
    }
    notes = {
        'lk-ops-LR-printed': ["residual is e_p o [e_s, e_q], printed as identically zero"],
        'lk-ops-RL-printed': ["residual is [R_p, L_q](e_s) - e_q o [e_p, e_s]"],
        'lk-final': ["equivalent to the Jacobi identity of the commutator; holds here by associativity"],
    }

    reports = []
    for name in selected:
        arity, residual = residuals[name]
        window = Window(0, min(pmax, bremner_pmax)) if name == 'lk-bremner' else w
        reports.append(sweep(name, window, arity, residual, limit, notes=notes.get(name, ())))
    return reports


def main():
    parser = argparse.ArgumentParser(description='Run the identity suite for polynomial vector fields.')
    parser.add_argument('--pmax', type=int, default=4, help='Largest basis index (default: %(default)s).')
    parser.add_argument('--checks', type=str, default=','.join(LK_GROUPS),
                        help='Comma separated check groups (default: all).')
    args = parser.parse_args()
    for report in lk_suite(args.pmax, args.checks.split(',')):
        print(f"{report.check_name}: {report.verdict} ({report.tuples_checked} tuples)")


if __name__ == '__main__':
    main()
