"""Degree-preserving cochains, the coboundary operators delta1/delta2, and an exact
decision procedure for "is this 2-cochain a coboundary on the window".

    phi(e_x)      = phi_x e_x
    psi(e_i, e_j) = psi_ij e_{i+j}
    (delta1 phi)_ij = g(i,j) (phi_{i+j} - phi_i - phi_j)
"""
import argparse
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from sympy import Matrix, Rational

from algebra import PoleError
from expr import ConfigError
from identities import Window, cocycle_residual
from scalar import Scalar

logger = logging.getLogger(__name__)


class MissingSupport(KeyError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"cochain has no value at {index}")

    def __str__(self):
        return self.args[0]


def _rational(value):
    if isinstance(value, Scalar):
        if value.nil:
            raise ValueError(f"Cochain values must be rational, got {value}")
        return value.real
    return Fraction(value)


class Cochain1:
    def __init__(self, phi=None):
        self.phi = {int(x): _rational(v) for x, v in (phi or {}).items()}

    @classmethod
    def from_function(cls, fn, window):
        return cls({x: fn(x) for x in window.values()})

    def value(self, x):
        try:
            return self.phi[x]
        except KeyError:
            raise MissingSupport(x) from None

    def support(self):
        return sorted(self.phi)

    def __eq__(self, other):
        if not isinstance(other, Cochain1):
            return NotImplemented
        return {x: v for x, v in self.phi.items() if v} == {x: v for x, v in other.phi.items() if v}

    def __sub__(self, other):
        keys = set(self.phi) | set(other.phi)
        return Cochain1({x: self.phi.get(x, 0) - other.phi.get(x, 0) for x in keys})

    def to_text(self):
        return ''.join(f"{x} {v}\n" for x, v in sorted(self.phi.items()))

    def __repr__(self):
        return f"Cochain1({dict(sorted(self.phi.items()))})"


class Cochain2:
    """Antisymmetric 2-cochain; the mirror entry is filled in, diagonal entries are 0."""

    def __init__(self, psi=None):
        table = {}
        for (i, j), v in (psi or {}).items():
            i, j, v = int(i), int(j), _rational(v)
            if i == j:
                if v:
                    raise ValueError(f"Diagonal entry psi_{i},{j} = {v} breaks antisymmetry")
                table[(i, i)] = Fraction(0)
                continue
            for key, value in (((i, j), v), ((j, i), -v)):
                if key in table and table[key] != value:
                    raise ValueError(f"Entries for {key} conflict: {table[key]} vs {value} (not antisymmetric)")
                table[key] = value
        self.psi = table

    @classmethod
    def from_function(cls, fn, window, other=None):
        """Evaluate fn on pairs i < j of window x other (other defaults to window)."""
        other = other or window
        values = {}
        for i in window.values():
            for j in other.values():
                if i < j:
                    values[(i, j)] = fn(i, j)
                elif i == j:
                    values[(i, i)] = 0
        return cls(values)

    def value(self, i, j):
        if i == j:
            return Fraction(0)
        try:
            return self.psi[(i, j)]
        except KeyError:
            raise MissingSupport((i, j)) from None

    def __eq__(self, other):
        if not isinstance(other, Cochain2):
            return NotImplemented
        return {k: v for k, v in self.psi.items() if v} == {k: v for k, v in other.psi.items() if v}

    def to_text(self):
        return ''.join(f"{i} {j} {v}\n" for (i, j), v in sorted(self.psi.items()) if i < j)

    def __repr__(self):
        return f"Cochain2({len(self.psi)} entries)"


def _read_rows(text, width):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != width:
            raise ConfigError(f"expected {width} fields, got {raw.strip()!r}", number)
        try:
            indices = [int(p) for p in parts[:-1]]
            value = Scalar.parse(parts[-1]).real
        except ValueError as e:
            raise ConfigError(str(e), number) from e
        yield number, indices, value


def parse_cochain1(text):
    """Lines 'x value'."""
    return Cochain1({indices[0]: value for _, indices, value in _read_rows(text, 2)})


def parse_cochain2(text):
    """Lines 'i j value'; the mirror entries are implied."""
    values = {}
    for number, (i, j), value in _read_rows(text, 3):
        if (i, j) in values:
            raise ConfigError(f"duplicate entry for ({i}, {j})", number)
        values[(i, j)] = value
    try:
        return Cochain2(values)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _g(spec, i, j):
    return _rational(spec.g_pair(i, j)[0])


def delta1(spec, phi, w):
    values = {}
    for i in w.values():
        for j in w.values():
            if i < j:
                values[(i, j)] = _g(spec, i, j) * (phi.value(i + j) - phi.value(i) - phi.value(j))
            elif i == j:
                residual = _g(spec, i, i) * (phi.value(2 * i) - 2 * phi.value(i))
                if residual:
                    raise ValueError(f"g({i},{i}) != 0: delta1 is not antisymmetric for this bracket")
    # the (j, i) entries must agree with antisymmetry
    for i in w.values():
        for j in w.values():
            if i > j:
                mirrored = _g(spec, i, j) * (phi.value(i + j) - phi.value(i) - phi.value(j))
                if mirrored != -values[(j, i)]:
                    raise ValueError(f"delta1 at ({i}, {j}) is not antisymmetric; the bracket is not skew")
    return Cochain2(values)


def delta2(spec, psi, w):
    return {(i, j, k): _rational(cocycle_residual(spec, psi, i, j, k))
            for i in w.values() for j in w.values() for k in w.values()}


@dataclass
class Equation:
    pair: tuple
    coefficients: dict
    rhs: Fraction


@dataclass
class CoboundaryResult:
    solvable: bool
    window: Window
    unknowns: List[int]
    solution: Optional[Cochain1] = None
    witness: Optional[List[tuple]] = None
    poles: List[tuple] = field(default_factory=list)
    equations: int = 0
    window_relative: bool = True

    def summary(self):
        scope = ' (window-relative)' if self.window_relative else ''
        if self.solvable:
            return f"SOLVABLE on {self.window}{scope}: {self.equations} equations, {len(self.unknowns)} unknowns"
        return (f"INFEASIBLE on {self.window}{scope}: witness combines {len(self.witness)} equations "
                f"into 0 = nonzero")


def coboundary_equations(spec, psi, w):
    """One equation phi_{i+j} - phi_i - phi_j = psi_ij / g(i,j) per ordered non-pole pair;
    pairs with g(i,j) = 0 give the constraint 0 = psi_ij."""
    equations = []
    poles = []
    for i in w.values():
        for j in w.values():
            try:
                g = _g(spec, i, j)
            except PoleError:
                poles.append((i, j))
                continue
            target = psi.value(i, j)
            if g == 0:
                equations.append(Equation((i, j), {}, target))
                continue
            coefficients = {}
            for x, c in ((i + j, 1), (i, -1), (j, -1)):
                coefficients[x] = coefficients.get(x, 0) + c
            coefficients = {x: Fraction(c) for x, c in coefficients.items() if c}
            equations.append(Equation((i, j), coefficients, target / g))
    return equations, poles


def _system(equations, unknowns):
    column = {x: n for n, x in enumerate(unknowns)}
    A = Matrix.zeros(len(equations), len(unknowns))
    b = Matrix.zeros(len(equations), 1)
    for row, equation in enumerate(equations):
        for x, c in equation.coefficients.items():
            A[row, column[x]] = Rational(c.numerator, c.denominator)
        b[row, 0] = Rational(equation.rhs.numerator, equation.rhs.denominator)
    return A, b


def _fraction(value):
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def solve_coboundary(spec, psi, w):
    unknowns = list(w.doubled().values())
    equations, poles = coboundary_equations(spec, psi, w)
    result = CoboundaryResult(False, w, unknowns, poles=poles, equations=len(equations))
    if not equations:
        result.solvable = True
        result.solution = Cochain1({x: 0 for x in unknowns})
        return result

    A, b = _system(equations, unknowns)
    try:
        solution, params = A.gauss_jordan_solve(b)
    except ValueError:
        # a left-null vector of A that does not annihilate b certifies infeasibility
        for y in A.T.nullspace():
            product = (y.T * b)[0, 0]
            if product != 0:
                y = y / product
                result.witness = [(equations[r].pair, _fraction(y[r, 0]))
                                  for r in range(len(equations)) if y[r, 0] != 0]
                break
        logger.info(f"🧮 psi is not a coboundary on {w}; witness uses {len(result.witness)} equations")
        return result

    solution = solution.xreplace({t: 0 for t in params})
    result.solvable = True
    result.solution = Cochain1({x: _fraction(solution[n, 0]) for n, x in enumerate(unknowns)})
    return result


def kernel_basis(spec, w):
    """Basis of the phi on the doubled window with g(i,j)(phi_{i+j} - phi_i - phi_j) = 0 for pairs in w."""
    unknowns = list(w.doubled().values())
    class _Zero:
        @staticmethod
        def value(i, j):
            return Fraction(0)

    equations, _ = coboundary_equations(spec, _Zero, w)
    equations = [eq for eq in equations if eq.coefficients]
    if not equations:
        return [Cochain1({y: 1 if y == x else 0 for y in unknowns}) for x in unknowns]
    A, _ = _system(equations, unknowns)
    return [Cochain1({x: _fraction(vector[n, 0]) for n, x in enumerate(unknowns)}) for vector in A.nullspace()]


def main():
    from expr import parse_config
    parser = argparse.ArgumentParser(description='Decide whether a 2-cochain is a coboundary on a window.')
    parser.add_argument('--config', type=str, required=True, help='Algebra configuration file.')
    parser.add_argument('--psi', type=str, required=True, help="2-cochain table with lines 'i j value'.")
    parser.add_argument('--window', type=str, default='-4..4', help='Index window lo..hi (default: %(default)s).')
    args = parser.parse_args()
    with open(args.config, encoding='utf-8') as fh:
        spec = parse_config(fh.read())
    with open(args.psi, encoding='utf-8') as fh:
        psi = parse_cochain2(fh.read())
    print(solve_coboundary(spec, psi, Window.parse(args.window)).summary())


if __name__ == '__main__':
    main()
