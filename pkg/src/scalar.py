"""Exact scalars: rationals, optionally extended to dual numbers a + b*nil with nil**2 = 0.

Every computation in the workbench runs on these. Division by a scalar whose real part
is zero raises ZeroDivisionError; the expression evaluator turns that into UNDEFINED.
"""
import re
from fractions import Fraction

RATIONAL = 'rational'
DUAL = 'dual'
MODES = (RATIONAL, DUAL)

_RATIONAL_LITERAL = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$')


class Undefined:
    """Result of evaluating a structure function at a pole."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'UNDEFINED'

    def __reduce__(self):
        return (Undefined, ())


UNDEFINED = Undefined()


class Scalar:
    __slots__ = ('real', 'nil', 'mode')

    def __init__(self, real=0, nil=0, mode=None):
        real = Fraction(real)
        nil = Fraction(nil)
        if mode is None:
            mode = DUAL if nil else RATIONAL
        if mode not in MODES:
            raise ValueError(f"Unknown scalar mode: {mode!r}")
        if mode == RATIONAL and nil:
            raise ValueError("A rational scalar cannot carry a nil part")
        object.__setattr__(self, 'real', real)
        object.__setattr__(self, 'nil', nil)
        object.__setattr__(self, 'mode', mode)

    @classmethod
    def _make(cls, real, nil, mode):
        obj = object.__new__(cls)
        object.__setattr__(obj, 'real', real)
        object.__setattr__(obj, 'nil', nil)
        object.__setattr__(obj, 'mode', mode)
        return obj

    @classmethod
    def unit_nil(cls):
        return cls._make(Fraction(0), Fraction(1), DUAL)

    @classmethod
    def parse(cls, text, mode=RATIONAL):
        """Parse an integer or 'p/q' literal."""
        match = _RATIONAL_LITERAL.match(text)
        if not match:
            raise ValueError(f"Not a rational literal: {text!r}")
        numerator, denominator = match.group(1), match.group(2)
        if denominator is not None and int(denominator) == 0:
            raise ValueError(f"Zero denominator in {text!r}")
        value = Fraction(int(numerator), int(denominator) if denominator else 1)
        return cls._make(value, Fraction(0), mode)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.real, self.nil, self.mode))

    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar._make(Fraction(other), Fraction(0), RATIONAL)
        return None

    def _mode_with(self, other):
        return DUAL if DUAL in (self.mode, other.mode) else RATIONAL

    def __add__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._make(self.real + o.real, self.nil + o.nil, self._mode_with(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._make(self.real - o.real, self.nil - o.nil, self._mode_with(o))

    def __rsub__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        mode = self._mode_with(o)
        if not self.nil and not o.nil:
            return Scalar._make(self.real * o.real, Fraction(0), mode)
        return Scalar._make(self.real * o.real, self.real * o.nil + self.nil * o.real, mode)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        if o.real == 0:
            raise ZeroDivisionError(f"Division by non-invertible scalar {o}")
        mode = self._mode_with(o)
        if not o.nil:
            return Scalar._make(self.real / o.real, self.nil / o.real, mode)
        real = self.real / o.real
        nil = (self.nil * o.real - self.real * o.nil) / (o.real * o.real)
        return Scalar._make(real, nil, mode)

    def __rtruediv__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return Scalar._make(-self.real, -self.nil, self.mode)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"Exponent must be a nonnegative integer, got {exponent!r}")
        if exponent == 0:
            return Scalar._make(Fraction(1), Fraction(0), self.mode)
        # (a + b nil)^n = a^n + n a^(n-1) b nil
        return Scalar._make(self.real ** exponent, exponent * self.real ** (exponent - 1) * self.nil, self.mode)

    def __eq__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return self.real == o.real and self.nil == o.nil

    def __hash__(self):
        if not self.nil:
            return hash(self.real)
        return hash((self.real, self.nil))

    def __bool__(self):
        return bool(self.real) or bool(self.nil)

    def is_zero(self):
        return not self

    def __repr__(self):
        if self.mode == DUAL:
            return f"Scalar({self.real}, {self.nil}, mode='dual')"
        return f"Scalar({self.real})"

    def __str__(self):
        if not self.nil:
            return str(self.real)
        sign = '+' if self.nil >= 0 else '-'
        if not self.real:
            return f"{'' if sign == '+' else '-'}{abs(self.nil)}*nil"
        return f"{self.real}{sign}{abs(self.nil)}*nil"


ZERO = Scalar(0)


def to_scalar(value, mode=RATIONAL):
    if isinstance(value, Scalar):
        return value
    return Scalar._make(Fraction(value), Fraction(0), mode)
