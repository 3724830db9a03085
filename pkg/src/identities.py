"""Windowed verification of the functional identities of a graded algebra.

Every check iterates all index tuples of a window in lexicographic order, skips and
records tuples that touch a pole, and keeps the first `limit` tuples whose exact
residual is nonzero.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from algebra import (Element, PairedElement, PoleError, associator, bracket, lsym_defect, star,
                     ternary_bracket)
from scalar import ZERO, Scalar, to_scalar

logger = logging.getLogger(__name__)

HOLDS = 'holds'
FAILS = 'fails'
VACUOUS = 'vacuous'

DEFAULT_LIMIT = 20


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Window lower bound {self.lo} exceeds upper bound {self.hi}")

    @classmethod
    def parse(cls, text):
        """'lo..hi' (e.g. '-6..6') or a single integer."""
        text = text.strip()
        if '..' in text:
            lo, hi = text.split('..', 1)
            return cls(int(lo), int(hi))
        value = int(text)
        return cls(value, value)

    @property
    def size(self):
        return self.hi - self.lo + 1

    def values(self):
        return range(self.lo, self.hi + 1)

    def tuples(self, arity):
        return itertools.product(self.values(), repeat=arity)

    def doubled(self):
        return Window(2 * self.lo, 2 * self.hi)

    def to_json(self):
        return {'lo': self.lo, 'hi': self.hi}

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


@dataclass
class CheckReport:
    check_name: str
    window: Window
    verdict: str
    counterexamples: List[tuple] = field(default_factory=list)
    undefined_points: List[tuple] = field(default_factory=list)
    tuples_checked: int = 0
    failures: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def holds(self):
        return self.verdict == HOLDS

    def first_counterexample(self):
        return self.counterexamples[0] if self.counterexamples else None


def sweep(name, window, arity, residual, limit=DEFAULT_LIMIT, tuples=None, notes=()):
    """Evaluate residual(*t) on every tuple t and classify the outcome."""
    if limit is not None and limit < 1:
        raise ValueError(f"Counterexample limit must be at least 1, got {limit}")
    counterexamples = []
    undefined = []
    checked = 0
    failures = 0
    for indices in (tuples if tuples is not None else window.tuples(arity)):
        indices = tuple(indices)
        try:
            value = residual(*indices)
        except PoleError:
            undefined.append(indices)
            continue
        checked += 1
        if value:
            failures += 1
            if limit is None or len(counterexamples) < limit:
                counterexamples.append((indices, value))
    counterexamples.sort(key=lambda item: item[0])
    if failures:
        verdict = FAILS
    elif checked:
        verdict = HOLDS
    else:
        verdict = VACUOUS
    logger.debug(f"{name} on {window}: {verdict} ({checked} tuples, {len(undefined)} poles)")
    return CheckReport(name, window, verdict, counterexamples, undefined, checked, failures, list(notes))


def e(index):
    return Element.basis(index)


def _at(index, pair):
    plain, theta = pair
    return Element._canonical({index: plain}, theta)


def _mul(pair, other):
    return pair[0] * other[0], pair[0] * other[1]


def _add(*pairs):
    plain, theta = ZERO, ZERO
    for p, t in pairs:
        plain = plain + p
        theta = theta + t
    return plain, theta


def _scale(factor, pair):
    return factor * pair[0], factor * pair[1]


def _T(spec, p, q, r):
    """f(p,q) f(p+q,r), with f_theta in the outer slot for the central part."""
    return _mul(spec.f_pair(p, q), spec.f_pair(p + q, r))


def _G(spec, p, q, r):
    """f(p,q) f(r,p+q), with f_theta in the outer slot for the central part."""
    return _mul(spec.f_pair(p, q), spec.f_pair(r, p + q))


# Skew-symmetry and Jacobi -----------------------------------------------------

def check_skew(spec, w, limit=DEFAULT_LIMIT):
    def residual(i, j):
        return _at(i + j, _add(spec.g_pair(i, j), spec.g_pair(j, i)))

    notes = []
    if spec.a == spec.b:
        notes.append("a = b: the bracket is a multiple of the commutator, antisymmetric for every f")
    return sweep('skew', w, 2, residual, limit, notes=notes)


def check_jacobi(spec, w, form='J', limit=DEFAULT_LIMIT):
    if form not in ('J', 'TG'):
        raise ValueError(f"Unknown Jacobi form {form!r}")

    def jacobi_term(i, j, k):
        return _mul(spec.g_pair(i, j), spec.g_pair(i + j, k))

    def residual_j(i, j, k):
        total = _add(jacobi_term(i, j, k), jacobi_term(j, k, i), jacobi_term(k, i, j))
        return _at(i + j + k, total)

    def residual_tg(i, j, k):
        a, b = spec.a, spec.b
        T = lambda p, q, r: _T(spec, p, q, r)
        G = lambda p, q, r: _G(spec, p, q, r)
        total = _add(
            _scale(a * a, _add(T(i, j, k), T(j, k, i), T(k, i, j))),
            _scale(b * b, _add(G(j, i, k), G(i, k, j), G(k, j, i))),
            _scale(-a * b, _add(G(i, j, k), G(j, k, i), G(k, i, j), T(k, j, i), T(j, i, k), T(i, k, j))),
        )
        return _at(i + j + k, total)

    residual = residual_j if form == 'J' else residual_tg
    return sweep(f"jacobi-{form}", w, 3, residual, limit)


# Quasi-associativity ----------------------------------------------------------

def check_quasi_assoc(spec, w, mode='element', limit=DEFAULT_LIMIT):
    if mode not in ('scalar', 'element'):
        raise ValueError(f"Unknown mode {mode!r}")

    def residual_element(i, j, k):
        return lsym_defect(spec, e(i), e(j), e(k))

    def residual_scalar(i, j, k):
        f_ij, f_ji = spec.f_pair(i, j)[0], spec.f_pair(j, i)[0]
        total = _add(
            _mul((f_ij - f_ji, ZERO), spec.f_pair(i + j, k)),
            _scale(-1, _mul(spec.f_pair(j, k), spec.f_pair(i, j + k))),
            _mul(spec.f_pair(i, k), spec.f_pair(j, i + k)),
        )
        return _at(i + j + k, total)

    residual = residual_element if mode == 'element' else residual_scalar
    return sweep(f"lsa-{mode}", w, 3, residual, limit)


def check_associative(spec, w, limit=DEFAULT_LIMIT):
    return sweep('associative', w, 3, lambda i, j, k: associator(spec, e(i), e(j), e(k)), limit)


def check_alternative(spec, w, limit=DEFAULT_LIMIT):
    degenerate = sweep('alternative-lsym', w, 2, lambda i, k: lsym_defect(spec, e(i), e(i), e(k)), limit)
    strict = sweep('alternative-strict', w, 2, lambda i, k: associator(spec, e(i), e(i), e(k)), limit)
    return degenerate, strict


# Derivation and cocycles ------------------------------------------------------

def check_derivation(spec, w, mode='element', limit=DEFAULT_LIMIT):
    if mode not in ('scalar', 'element'):
        raise ValueError(f"Unknown mode {mode!r}")

    def residual_element(i, j, k):
        lhs = bracket(spec, e(i), star(spec, e(j), e(k)))
        rhs = star(spec, e(j), bracket(spec, e(i), e(k))) + star(spec, bracket(spec, e(i), e(j)), e(k))
        return lhs - rhs

    def residual_scalar(i, j, k):
        a, b = spec.a, spec.b
        T = lambda p, q, r: _T(spec, p, q, r)
        G = lambda p, q, r: _G(spec, p, q, r)
        total = _add(
            _scale(a, _add(G(j, k, i), _scale(-1, G(i, k, j)), _scale(-1, T(i, j, k)))),
            _scale(b, _add(G(k, i, j), T(j, i, k), _scale(-1, T(j, k, i)))),
        )
        return _at(i + j + k, total)

    residual = residual_element if mode == 'element' else residual_scalar
    return sweep(f"derivation-{mode}", w, 3, residual, limit)


def _cochain_value(psi):
    return psi.value if hasattr(psi, 'value') else psi


def cocycle_residual(spec, psi, i, j, k):
    """Six-term coboundary of a 2-cochain at (i, j, k), as a rational."""
    value = _cochain_value(psi)
    g = lambda p, q: spec.g_pair(p, q)[0]
    return (g(i, j) * value(i + j, k) + g(j, k) * value(j + k, i) + g(k, i) * value(i + k, j)
            - g(i, j + k) * value(j, k) + g(j, i + k) * value(i, k) - g(k, i + j) * value(i, j))


def check_cocycle(spec, w, psi, limit=DEFAULT_LIMIT):
    def residual(i, j, k):
        return Element._canonical({i + j + k: to_scalar(cocycle_residual(spec, psi, i, j, k))})
    return sweep('cocycle', w, 3, residual, limit)


# Hereditary operators ---------------------------------------------------------

HEREDITARY_VARIANTS = ('scalar_shift', 'general_table', 'shift1_table', 'element_def')


def hereditary_shift_pair(spec, i, j, x0):
    """g(i+x0, j) + g(i, j+x0) - g(i, j) - g(i+x0, j+x0) as a (plain, theta) pair."""
    return _add(spec.g_pair(i + x0, j), spec.g_pair(i, j + x0),
                _scale(-1, spec.g_pair(i, j)), _scale(-1, spec.g_pair(i + x0, j + x0)))


def check_hereditary(spec, w, phi, variant='scalar_shift', circ='star', limit=DEFAULT_LIMIT):
    if variant not in HEREDITARY_VARIANTS:
        raise ValueError(f"Unknown hereditary variant {variant!r}")
    if circ not in ('star', 'bracket'):
        raise ValueError(f"Unknown composition {circ!r}")

    def residual_scalar_shift(i, j):
        return _at(i + j + 2 * phi.x0, hereditary_shift_pair(spec, i, j, phi.x0))

    def her2(product, a, b):
        # Phi^2(a o b) + (Phi a) o (Phi b) - Phi[(Phi a) o b + a o (Phi b)]
        return (phi(phi(product(a, b))) + product(phi(a), phi(b))
                - phi(product(phi(a), b) + product(a, phi(b))))

    def residual_general_table(i, j):
        return her2(lambda x, y: bracket(spec, x, y), e(i), e(j))

    def residual_shift1_table(i, j):
        return (bracket(spec, e(i + 1), e(j)) + bracket(spec, e(j + 1), e(i))
                - bracket(spec, e(i), e(j)) - bracket(spec, e(i + 1), e(j + 1)))

    def residual_element_def(i, j):
        product = (lambda x, y: star(spec, x, y)) if circ == 'star' else (lambda x, y: bracket(spec, x, y))
        return her2(product, e(i), e(j))

    if variant == 'scalar_shift' and phi.kind != 'shift':
        raise ValueError("The scalar_shift variant needs a shift endomorphism")
    residual = {
        'scalar_shift': residual_scalar_shift,
        'general_table': residual_general_table,
        'shift1_table': residual_shift1_table,
        'element_def': residual_element_def,
    }[variant]
    name = f"hereditary-{variant}" + (f"-{circ}" if variant == 'element_def' else '')
    return sweep(name, w, 2, residual, limit, notes=[f"phi = {phi.describe()}"])


def check_bianchi_P(spec, w, x0, limit=DEFAULT_LIMIT):
    def P(i, j, k):
        hc = _at(i + j + 2 * x0, hereditary_shift_pair(spec, i, j, x0))
        return star(spec, e(k + x0), hc)

    def residual(i, j, k):
        return P(i, j, k) + P(j, k, i) + P(k, i, j)

    return sweep('bianchi-P', w, 3, residual, limit, notes=[f"x0 = {x0}"])


# Deformation compatibility ----------------------------------------------------

def check_rho_compat(spec, w, rho, mode='difference', limit=DEFAULT_LIMIT):
    if mode not in ('difference', 'element'):
        raise ValueError(f"Unknown mode {mode!r}")
    if mode == 'difference' and rho.kind != 'shift':
        raise ValueError("The difference form needs a shift endomorphism")

    def residual_difference(i, j):
        x0 = rho.x0
        total = _add(spec.f_pair(i, j + x0), _scale(-1, spec.f_pair(i, j)),
                     _scale(-1, spec.f_pair(j, i + x0)), spec.f_pair(j, i))
        return _at(i + j + x0, total)

    def residual_element(i, j):
        return (star(spec, e(i), rho(e(j))) - star(spec, e(j), rho(e(i)))
                - rho(star(spec, e(i), e(j)) - star(spec, e(j), e(i))))

    residual = residual_difference if mode == 'difference' else residual_element
    return sweep(f"rho-compat-{mode}", w, 2, residual, limit, notes=[f"rho = {rho.describe()}"])


# Universal, Filippov and Bremner identities -----------------------------------

def check_universal(spec, w, limit=DEFAULT_LIMIT):
    D = lambda x, y, z: lsym_defect(spec, x, y, z)

    def residual(i, j, k, s):
        A, B, C, E = e(i), e(j), e(k), e(s)
        return D(A, B, star(spec, C, E)) - star(spec, D(A, B, C), E) - star(spec, C, D(A, B, E))

    return sweep('universal', w, 4, residual, limit)


class TernaryCache:
    """Trilinear ternary bracket, memoized on basis triples. Central parts of the
    arguments contribute nothing since theta annihilates."""

    def __init__(self, spec):
        self.spec = spec
        self.basis = {}

    def on_basis(self, i, j, k):
        key = (i, j, k)
        if key not in self.basis:
            try:
                self.basis[key] = ternary_bracket(self.spec, e(i), e(j), e(k))
            except PoleError as err:
                self.basis[key] = err
        value = self.basis[key]
        if isinstance(value, PoleError):
            raise value
        return value

    def __call__(self, A, B, C):
        result = Element.zero()
        for i, x in A.items():
            for j, y in B.items():
                for k, z in C.items():
                    result = result + self.on_basis(i, j, k).scale(x * y * z)
        return result


def check_filippov(spec, w, limit=DEFAULT_LIMIT):
    T = TernaryCache(spec)

    def residual(i, j, k, s, t):
        A, B, C, D, E = e(i), e(j), e(k), e(s), e(t)
        return T(A, B, T(C, D, E)) - (T(T(A, B, C), D, E) + T(C, T(A, B, D), E) + T(C, D, T(A, B, E)))

    return sweep('filippov', w, 5, residual, limit)


def check_bremner(spec, w, limit=DEFAULT_LIMIT):
    T = TernaryCache(spec)

    def residual(i, j, k, s, t, u, v):
        A, B, C, D, E, F, G = (e(x) for x in (i, j, k, s, t, u, v))
        return T(T(A, T(B, C, D), E), F, G) - T(T(A, B, C), T(D, E, F), G)

    return sweep('bremner', w, 7, residual, limit)


# The bracket on A + A ----------------------------------------------------------

def bmod_bracket(spec, P, Q):
    """[(x,u), (y,v)] = ([x,y], x*v - y*u)."""
    return PairedElement(bracket(spec, P.primal, Q.primal),
                         star(spec, P.primal, Q.dual) - star(spec, Q.primal, P.dual))


def check_bmod(spec, w, limit=DEFAULT_LIMIT):
    pair = lambda x, y: PairedElement(e(x), e(y))

    def residual_skew(p, r, q, s):
        P, Q = pair(p, r), pair(q, s)
        return bmod_bracket(spec, P, Q) + bmod_bracket(spec, Q, P)

    def residual_jacobi(p, r, q, s, t, u):
        P, Q, R = pair(p, r), pair(q, s), pair(t, u)
        B = lambda X, Y: bmod_bracket(spec, X, Y)
        return B(B(P, Q), R) + B(B(Q, R), P) + B(B(R, P), Q)

    skew = sweep('bmod-skew', w, 4, residual_skew, limit)
    jacobi = sweep('bmod-jacobi', w, 6, residual_jacobi, limit)
    return skew, jacobi


# Closed forms for the centrally extended product ------------------------------

def _closed(values, indices):
    try:
        return values()
    except ZeroDivisionError:
        raise PoleError(indices, 'closed form')


def _delta(n):
    return 1 if n == 0 else 0


def crosscheck_virasoro_closed_forms(spec, w, limit=DEFAULT_LIMIT):
    """Generic products against the printed closed forms (which assume a = b = 1)."""
    eps = spec.eps
    central = spec.has_theta

    def inverse_gap():
        return eps - Scalar(1) / eps

    def ternary_residual(i, j, k):
        generic = ternary_bracket(spec, e(i), e(j), e(k))

        def closed():
            s = i + j + k
            plain = -eps * ((j * j - i * i) * k + (i * i - k * k) * j + (k * k - j * j) * i) / (1 + eps * s)
            theta = ZERO
            if central and _delta(s):
                theta = Scalar(Fraction(1, 2)) * ((i ** 3 + j ** 3 + k ** 3) * (1 + inverse_gap()) - s)
            return _at(s, (plain, theta))

        return generic - _closed(closed, (i, j, k))

    def derivation_lhs_residual(i, j, k):
        generic = bracket(spec, e(i), star(spec, e(j), e(k)))

        def closed():
            s = i + j + k
            plain = -k * (1 + eps * k) / (1 + eps * (j + k)) * (i - (j + k))
            theta = Scalar(i ** 3 - i) if central and _delta(s) else ZERO
            return _at(s, (plain, theta))

        return generic - _closed(closed, (i, j, k))

    def derivation_rhs_residual(i, j, k):
        generic = star(spec, e(j), bracket(spec, e(i), e(k))) + star(spec, bracket(spec, e(i), e(j)), e(k))

        def closed():
            s = i + j + k
            plain = ((-(i * i - k * k) - k * (i - j) - eps * ((i * i - k * k) * (i + k) + k * k * (i - j)))
                     / (1 + eps * s))
            theta = ZERO
            if central and _delta(s):
                theta = Scalar(Fraction(1, 2)) * (
                    (j ** 3 - j) * (i - k) + (i - j) * ((i + j) ** 3 - (i + j))
                    + inverse_gap() * (j * j * (i - k) + (i - j) * (i + j) ** 2))
            return _at(s, (plain, theta))

        return generic - _closed(closed, (i, j, k))

    def skew_system_residual(i, j):
        def closed():
            first = i + j + eps * (i * i + j * j)
            second = (i ** 3 + j ** 3 - (i + j)) + inverse_gap() * (i * i + j * j)
            return _at(i + j, (first, second))
        return _closed(closed, (i, j))

    notes = [] if spec.a == spec.b == 1 else ["closed forms assume a = b = 1"]
    return (
        sweep('closed-form-ternary', w, 3, ternary_residual, limit, notes=notes),
        sweep('closed-form-derivation-lhs', w, 3, derivation_lhs_residual, limit, notes=notes),
        sweep('closed-form-derivation-rhs', w, 3, derivation_rhs_residual, limit, notes=notes),
        sweep('skew-system', w, 2, skew_system_residual, limit, notes=notes),
    )
