"""Graded elements with a central coordinate, and the bilinear operations on them.

An algebra is given by a structure function f (and optionally a central part f_theta):

    e_i * e_j = f(i, j) e_{i+j} + f_theta(i, j) theta,    theta annihilates on both sides,
    [A, B]    = a (A * B) - b (B * A).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Optional

from expr import AlgebraConfig, ConfigError, eval_ast
from scalar import RATIONAL, UNDEFINED, ZERO, Scalar, to_scalar

logger = logging.getLogger(__name__)

PLAIN = 'plain'
THETA = 'theta'


class PoleError(ArithmeticError):
    def __init__(self, pair, which=PLAIN):
        self.pair = tuple(pair)
        self.which = which
        super().__init__(f"structure function ({which}) has a pole at {self.pair}")


class Element:
    """Finite combination sum c_x e_x + t*theta, stored without zero coefficients."""
    __slots__ = ('_terms', 'theta')

    def __init__(self, terms=None, theta=0):
        canonical = {}
        for index, coefficient in (terms or {}).items():
            coefficient = to_scalar(coefficient)
            if coefficient:
                canonical[int(index)] = coefficient
        object.__setattr__(self, '_terms', canonical)
        object.__setattr__(self, 'theta', to_scalar(theta))

    @classmethod
    def _canonical(cls, terms, theta=ZERO):
        obj = object.__new__(cls)
        object.__setattr__(obj, '_terms', {x: c for x, c in terms.items() if c})
        object.__setattr__(obj, 'theta', theta)
        return obj

    @classmethod
    def basis(cls, index, coefficient=1):
        return cls({index: coefficient})

    @classmethod
    def central(cls, coefficient=1):
        return cls({}, coefficient)

    @classmethod
    def zero(cls):
        return cls._canonical({}, ZERO)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __reduce__(self):
        return (Element, (dict(self._terms), self.theta))

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, index):
        return self._terms.get(index, ZERO)

    def support(self):
        return sorted(self._terms)

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        terms = dict(self._terms)
        for x, c in other._terms.items():
            terms[x] = terms[x] + c if x in terms else c
        return Element._canonical(terms, self.theta + other.theta)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Element._canonical({x: -c for x, c in self._terms.items()}, -self.theta)

    def scale(self, factor):
        factor = to_scalar(factor)
        if not factor:
            return Element.zero()
        return Element._canonical({x: factor * c for x, c in self._terms.items()}, factor * self.theta)

    def __mul__(self, factor):
        if isinstance(factor, (Scalar, int, Fraction)):
            return self.scale(factor)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms and self.theta == other.theta

    def __hash__(self):
        return hash((frozenset(self._terms.items()), self.theta))

    def __bool__(self):
        return bool(self._terms) or bool(self.theta)

    def is_zero(self):
        return not self

    def to_json(self):
        return {'terms': {str(x): str(c) for x, c in self.items()}, 'theta': str(self.theta)}

    def __str__(self):
        parts = [f"{c}*e_{x}" for x, c in self.items()]
        if self.theta:
            parts.append(f"{self.theta}*theta")
        return ' + '.join(parts) if parts else '0'

    def __repr__(self):
        return f"Element({self})"


@dataclass(frozen=True)
class AlgebraSpec:
    f: object
    f_theta: Optional[object] = None
    a: Fraction = Fraction(1)
    b: Fraction = Fraction(1)
    eps: Scalar = Scalar(0)
    scalar_mode: str = RATIONAL
    warnings: tuple = ()
    echo: tuple = ()
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_texts(cls, f, f_theta=None, a='1', b='1', eps='0', scalar=RATIONAL):
        return AlgebraConfig(f=f, f_theta=f_theta, a=str(a), b=str(b), eps=str(eps), scalar=scalar).to_spec()

    @property
    def has_theta(self):
        return self.f_theta is not None

    def value(self, which, i, j):
        key = (which, i, j)
        if key not in self._memo:
            if which == PLAIN:
                self._memo[key] = eval_ast(self.f, i, j, self.eps)
            elif self.f_theta is None:
                self._memo[key] = ZERO
            else:
                self._memo[key] = eval_ast(self.f_theta, i, j, self.eps)
        return self._memo[key]

    def f_pair(self, i, j):
        """(f(i,j), f_theta(i,j)); raises PoleError at a pole of either part."""
        plain = self.value(PLAIN, i, j)
        if plain is UNDEFINED:
            raise PoleError((i, j), PLAIN)
        theta = self.value(THETA, i, j)
        if theta is UNDEFINED:
            raise PoleError((i, j), THETA)
        return plain, theta

    def g_pair(self, i, j):
        f_ij, t_ij = self.f_pair(i, j)
        f_ji, t_ji = self.f_pair(j, i)
        return self.a * f_ij - self.b * f_ji, self.a * t_ij - self.b * t_ji

    def multiply(self, A, B):
        terms = {}
        theta = ZERO
        for i, x in A.items():
            for j, y in B.items():
                plain, central = self.f_pair(i, j)
                coefficient = x * y
                if plain:
                    k = i + j
                    value = coefficient * plain
                    terms[k] = terms[k] + value if k in terms else value
                if central:
                    theta = theta + coefficient * central
        return Element._canonical(terms, theta)


@dataclass(frozen=True)
class EndoSpec:
    """Linear map on the graded part: a shift e_x -> e_{x+x0}, or a table e_x -> sum_k R[x][k] e_k.

    theta is sent to 0; table indices without an entry are sent to 0.
    """
    kind: str = 'shift'
    x0: int = 0
    rows: tuple = ()

    @classmethod
    def shift(cls, x0):
        return cls('shift', int(x0))

    @classmethod
    def from_table(cls, table):
        rows = tuple(sorted(
            (int(source), tuple(sorted((int(target), Fraction(value)) for target, value in targets.items()
                                       if Fraction(value))))
            for source, targets in table.items()))
        return cls('table', 0, rows)

    @classmethod
    def zero(cls):
        return cls('table', 0, ())

    def __post_init__(self):
        if self.kind not in ('shift', 'table'):
            raise ValueError(f"Unknown endomorphism kind {self.kind!r}")

    @property
    def table(self):
        return {source: dict(targets) for source, targets in self.rows}

    def image(self, index):
        """Image of the basis vector e_index as an Element."""
        if self.kind == 'shift':
            return Element.basis(index + self.x0)
        for source, targets in self.rows:
            if source == index:
                return Element(dict(targets))
        return Element.zero()

    def apply(self, A):
        if self.kind == 'shift':
            return Element._canonical({x + self.x0: c for x, c in A.items()})
        result = Element.zero()
        for x, c in A.items():
            result = result + self.image(x).scale(c)
        return result

    def __call__(self, A):
        return self.apply(A)

    def describe(self):
        if self.kind == 'shift':
            return f"shift({self.x0})"
        return f"table({len(self.rows)} rows)"


def parse_endo_table(text):
    """Lines 'source target value' (exact rationals); '#' starts a comment."""
    table = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ConfigError(f"expected 'source target value', got {raw.strip()!r}", number)
        try:
            source, target = int(parts[0]), int(parts[1])
            value = Scalar.parse(parts[2]).real
        except ValueError as e:
            raise ConfigError(str(e), number) from e
        table.setdefault(source, {})[target] = value
    return EndoSpec.from_table(table)


def eval_struct(spec, which, i, j):
    return spec.value(which, i, j)


def star(spec, A, B):
    return spec.multiply(A, B)


def bracket(spec, A, B):
    return star(spec, A, B).scale(spec.a) - star(spec, B, A).scale(spec.b)


def associator(spec, A, B, C):
    return star(spec, star(spec, A, B), C) - star(spec, A, star(spec, B, C))


def lsym_defect(spec, A, B, C):
    return associator(spec, A, B, C) - associator(spec, B, A, C)


def ternary_bracket(spec, A, B, C):
    return (star(spec, A, bracket(spec, B, C))
            + star(spec, B, bracket(spec, C, A))
            + star(spec, C, bracket(spec, A, B)))


def g_from_f(spec, i, j):
    try:
        return spec.g_pair(i, j)
    except PoleError:
        return UNDEFINED


def e(index, coefficient=1):
    return Element.basis(index, coefficient)


class PairedElement:
    """Pair of Elements (x, u): a primal component and a second graded component."""
    __slots__ = ('primal', 'dual')

    def __init__(self, primal=None, dual=None):
        object.__setattr__(self, 'primal', primal if primal is not None else Element.zero())
        object.__setattr__(self, 'dual', dual if dual is not None else Element.zero())

    @classmethod
    def of_primal(cls, index, coefficient=1):
        return cls(Element.basis(index, coefficient), Element.zero())

    @classmethod
    def of_dual(cls, index, coefficient=1):
        return cls(Element.zero(), Element.basis(index, coefficient))

    def __setattr__(self, name, value):
        raise AttributeError("PairedElement is immutable")

    def __reduce__(self):
        return (PairedElement, (self.primal, self.dual))

    def __add__(self, other):
        return PairedElement(self.primal + other.primal, self.dual + other.dual)

    def __sub__(self, other):
        return PairedElement(self.primal - other.primal, self.dual - other.dual)

    def __neg__(self):
        return PairedElement(-self.primal, -self.dual)

    def scale(self, factor):
        return PairedElement(self.primal.scale(factor), self.dual.scale(factor))

    def __eq__(self, other):
        if not isinstance(other, PairedElement):
            return NotImplemented
        return self.primal == other.primal and self.dual == other.dual

    def __hash__(self):
        return hash((self.primal, self.dual))

    def __bool__(self):
        return bool(self.primal) or bool(self.dual)

    def to_json(self):
        data = self.primal.to_json()
        data['dual'] = self.dual.to_json()
        return data

    def __str__(self):
        return f"({self.primal}, {self.dual})"

    def __repr__(self):
        return f"PairedElement{self}"
