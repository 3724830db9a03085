"""Finite structure-constant tables and the multicomponent Burgers systems built on them.

C[j][k][i] is the coefficient of e_i in e_j * e_k; indices are 1-based in every public
function and in the table file format:

    dim N
    j k i value      # one line per nonzero entry
"""
import argparse
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from algebra import Element, PoleError
from identities import DEFAULT_LIMIT, Window, sweep
from scalar import Scalar

logger = logging.getLogger(__name__)

FORMATS = ('plain', 'latex')


class TableFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ''
        super().__init__(f"{prefix}{message}")


class StructureTable:
    def __init__(self, dim, entries=None):
        if dim < 1:
            raise TableFormatError(f"dimension must be positive, got {dim}")
        self.dim = dim
        self.C = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (j, k, i), value in (entries or {}).items():
            self.set(j, k, i, value)

    def _check(self, *indices):
        for index in indices:
            if not 1 <= index <= self.dim:
                raise TableFormatError(f"index {index} outside 1..{self.dim}")

    def set(self, j, k, i, value):
        self._check(j, k, i)
        self.C[j - 1][k - 1][i - 1] = Fraction(value)

    def get(self, j, k, i):
        return self.C[j - 1][k - 1][i - 1]

    def indices(self):
        return range(1, self.dim + 1)

    def entries(self):
        """Nonzero entries as (j, k, i, value), sorted."""
        return [(j, k, i, self.get(j, k, i))
                for j, k, i in itertools.product(self.indices(), repeat=3) if self.get(j, k, i)]

    def multiply(self, u, v):
        """Product of coordinate vectors (1-based dicts or 0-based sequences)."""
        u, v = _vector(u, self.dim), _vector(v, self.dim)
        return [sum((u[j] * v[k] * self.C[j][k][i] for j in range(self.dim) for k in range(self.dim)),
                    Fraction(0))
                for i in range(self.dim)]

    def __eq__(self, other):
        if not isinstance(other, StructureTable):
            return NotImplemented
        return self.dim == other.dim and self.C == other.C

    def __repr__(self):
        return f"StructureTable(dim={self.dim}, {len(self.entries())} nonzero)"


def _vector(u, dim):
    if isinstance(u, dict):
        return [Fraction(u.get(i, 0)) for i in range(1, dim + 1)]
    return [Fraction(x) for x in u]


def parse_table(text):
    dim = None
    entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if dim is None:
            if len(parts) != 2 or parts[0] != 'dim':
                raise TableFormatError(f"expected 'dim N', got {raw.strip()!r}", number)
            try:
                dim = int(parts[1])
            except ValueError:
                raise TableFormatError(f"dimension is not an integer: {parts[1]!r}", number) from None
            if dim < 1:
                raise TableFormatError(f"dimension must be positive, got {dim}", number)
            continue
        if len(parts) != 4:
            raise TableFormatError(f"expected 'j k i value', got {raw.strip()!r}", number)
        try:
            j, k, i = (int(p) for p in parts[:3])
            value = Scalar.parse(parts[3]).real
        except ValueError as e:
            raise TableFormatError(str(e), number) from e
        if not all(1 <= x <= dim for x in (j, k, i)):
            raise TableFormatError(f"index outside 1..{dim}", number)
        if (j, k, i) in entries:
            raise TableFormatError(f"duplicate entry ({j}, {k}, {i})", number)
        entries[(j, k, i)] = value
    if dim is None:
        raise TableFormatError("missing 'dim N' header")
    return StructureTable(dim, entries)


def format_table(T):
    lines = [f"dim {T.dim}"]
    lines.extend(f"{j} {k} {i} {value}" for j, k, i, value in T.entries())
    return '\n'.join(lines) + '\n'


def _component(i, value):
    return Element._canonical({i: Scalar(value)})


def lsa_table_check(T, limit=DEFAULT_LIMIT):
    """Index relation  C_jr^i C_km^r - C_kr^i C_jm^r = C_jk^r C_rm^i - C_kj^r C_rm^i  over (i,j,k,m),
    and independently the associator-symmetry defect over (j,k,m). Both verdicts agree."""
    C = T.get
    w = Window(1, T.dim)
    r_range = T.indices()

    def relation(i, j, k, m):
        lhs = sum((C(j, r, i) * C(k, m, r) - C(k, r, i) * C(j, m, r) for r in r_range), Fraction(0))
        rhs = sum((C(j, k, r) * C(r, m, i) - C(k, j, r) * C(r, m, i) for r in r_range), Fraction(0))
        return _component(i, lhs - rhs)

    def associator_defect(j, k, m):
        e = lambda x: {x: 1}
        assoc = lambda a, b, c: [p - q for p, q in zip(T.multiply(T.multiply(e(a), e(b)), e(c)),
                                                       T.multiply(e(a), T.multiply(e(b), e(c))))]
        defect = [p - q for p, q in zip(assoc(j, k, m), assoc(k, j, m))]
        return Element._canonical({i + 1: Scalar(v) for i, v in enumerate(defect)})

    return (sweep('burgers-relation', w, 4, relation, limit),
            sweep('burgers-associator', w, 3, associator_defect, limit))


def compute_A(T):
    """A[(i, j, k, m)] as printed: (1/3)(C_jr^i C_km^r + C_kr^i C_mj^r + C_mr^i C_jk^r
    - C_rj^i C_km^r - C_rk^i C_mj^r - C_rm^i C_jk^r), summed over r."""
    C = T.get
    A = {}
    for i, j, k, m in itertools.product(T.indices(), repeat=4):
        total = Fraction(0)
        for r in T.indices():
            total += (C(j, r, i) * C(k, m, r) + C(k, r, i) * C(m, j, r) + C(m, r, i) * C(j, k, r)
                      - C(r, j, i) * C(k, m, r) - C(r, k, i) * C(m, j, r) - C(r, m, i) * C(j, k, r))
        A[(i, j, k, m)] = total / 3
    return A


# Emission ------------------------------------------------------------------------

def _variable(name, index, suffix, fmt):
    if fmt == 'latex':
        primes = "'" if name.endswith("'") else ''
        base = name.rstrip("'")
        sub = {'': '', '_x': '_{x}', '_xx': '_{xx}', '_t': '_{t}'}[suffix]
        return f"{base}^{{{index}}}{primes}{sub}"
    return f"{name}{index}{suffix}"


def format_terms(terms, fmt='plain'):
    """terms: list of (coefficient, [factor, ...]); coefficient 1 is omitted, zero terms skipped."""
    joiner = ' ' if fmt == 'latex' else '*'
    out = ''
    for coefficient, factors in terms:
        coefficient = Fraction(coefficient)
        if not coefficient:
            continue
        magnitude = abs(coefficient)
        if fmt == 'latex' and magnitude.denominator != 1:
            number = f"\\frac{{{magnitude.numerator}}}{{{magnitude.denominator}}}"
        else:
            number = str(magnitude)
        body = joiner.join(([number] if magnitude != 1 or not factors else []) + list(factors))
        if not out:
            out = body if coefficient > 0 else f"-{body}"
        else:
            out += f" + {body}" if coefficient > 0 else f" - {body}"
    return out or '0'


def emit_burgers(T, fmt='plain'):
    """u^i_t = u^i_xx + 2 C_jk^i u^k u^j_x + A_jkm^i u^k u^j u^m, one line per component."""
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format {fmt!r}")
    A = compute_A(T)
    v = lambda index, suffix='': _variable('u', index, suffix, fmt)
    lines = []
    for i in T.indices():
        terms = [(1, [v(i, '_xx')])]
        for j, k in itertools.product(T.indices(), repeat=2):
            terms.append((2 * T.get(j, k, i), [v(k), v(j, '_x')]))
        for j, k, m in itertools.product(T.indices(), repeat=3):
            terms.append((A[(i, j, k, m)], [v(k), v(j), v(m)]))
        lines.append(f"{v(i, '_t')} = {format_terms(terms, fmt)}")
    return '\n'.join(lines)


# Graded algebras cut down to a window -------------------------------------------

@dataclass
class TruncationResult:
    table: StructureTable
    window: Window
    dropped: List[tuple] = field(default_factory=list)
    undefined: List[tuple] = field(default_factory=list)

    def position(self, x):
        """1-based table index of the graded index x."""
        return x - self.window.lo + 1


def graded_truncate(spec, w):
    """Table on {e_x : x in w}; products landing outside w are dropped and listed, poles listed
    separately. Central parts are not represented."""
    T = StructureTable(w.size)
    result = TruncationResult(T, w)
    for i, j in w.tuples(2):
        try:
            plain = spec.f_pair(i, j)[0]
        except PoleError:
            result.undefined.append((i, j))
            continue
        if not plain:
            continue
        if plain.nil:
            raise ValueError(f"Tables are rational; f({i},{j}) = {plain}")
        if w.lo <= i + j <= w.hi:
            T.set(result.position(i), result.position(j), result.position(i + j), plain.real)
        else:
            result.dropped.append((i, j))
    if result.dropped:
        logger.info(f"✂️ Truncation to {w} dropped {len(result.dropped)} products")
    return result


def main():
    parser = argparse.ArgumentParser(description='Check a structure table and emit its Burgers system.')
    parser.add_argument('table', type=str, help="Table file ('dim N' then 'j k i value' lines).")
    parser.add_argument('-f', '--format', type=str, choices=FORMATS, default='plain',
                        help='Emission format (default: %(default)s).')
    args = parser.parse_args()
    with open(args.table, encoding='utf-8') as fh:
        T = parse_table(fh.read())
    for report in lsa_table_check(T):
        print(f"{report.check_name}: {report.verdict}")
    print(emit_burgers(T, args.format))


if __name__ == '__main__':
    main()
