"""Structure-function expression language and algebra configuration files.

Grammar (LL, one or two tokens of lookahead):

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-'? atom ('^' nat)?
    atom     := 'i' | 'j' | 'eps' | rational | '(' expr ')' | 'delta' '(' expr ')'
    rational := int ('/' int)?

A leading minus binds looser than '^', so "-i^2" is Neg(Pow(i, 2)). "p/q" directly
between two integer literals is a single rational constant unless q is 0, in which
case it is kept as a division (and evaluates to UNDEFINED).
"""
import argparse
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from scalar import DUAL, MODES, RATIONAL, UNDEFINED, Scalar

logger = logging.getLogger(__name__)

NAMES = ('i', 'j', 'eps', 'delta')
CONFIG_KEYS = ('f', 'f_theta', 'a', 'b', 'eps', 'scalar')
REQUIRED_KEYS = ('f', 'a', 'b', 'eps', 'scalar')

_TOKEN = re.compile(r'\s*(?:(?P<INT>\d+)|(?P<NAME>[A-Za-z_][A-Za-z_0-9]*)|(?P<OP>[-+*/^()]))')


class ExprSyntaxError(ValueError):
    def __init__(self, message, position, offset, expected=()):
        self.position = position
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ''
        super().__init__(f"{message} at byte offset {offset}{detail}")


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ''
        super().__init__(f"{prefix}{message}")


# AST -------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction

    def evaluate(self, i, j, eps):
        return Scalar(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def evaluate(self, i, j, eps):
        return Scalar(i if self.name == 'i' else j)


@dataclass(frozen=True)
class Param:
    name: str = 'eps'

    def evaluate(self, i, j, eps):
        return eps


@dataclass(frozen=True)
class Neg:
    child: object

    def evaluate(self, i, j, eps):
        return -self.child.evaluate(i, j, eps)


@dataclass(frozen=True)
class Add:
    left: object
    right: object

    def evaluate(self, i, j, eps):
        return self.left.evaluate(i, j, eps) + self.right.evaluate(i, j, eps)


@dataclass(frozen=True)
class Sub:
    left: object
    right: object

    def evaluate(self, i, j, eps):
        return self.left.evaluate(i, j, eps) - self.right.evaluate(i, j, eps)


@dataclass(frozen=True)
class Mul:
    left: object
    right: object

    def evaluate(self, i, j, eps):
        return self.left.evaluate(i, j, eps) * self.right.evaluate(i, j, eps)


@dataclass(frozen=True)
class Div:
    left: object
    right: object

    def evaluate(self, i, j, eps):
        # ZeroDivisionError is turned into UNDEFINED by eval_ast
        return self.left.evaluate(i, j, eps) / self.right.evaluate(i, j, eps)


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int

    def evaluate(self, i, j, eps):
        return self.base.evaluate(i, j, eps) ** self.exponent


@dataclass(frozen=True)
class Delta:
    child: object

    def evaluate(self, i, j, eps):
        return Scalar(0 if self.child.evaluate(i, j, eps) else 1)


MAX_EXPONENT = 64
MAX_DEGREE = 1 << 16


BINARY = {'+': Add, '-': Sub, '*': Mul, '/': Div}
SYMBOLS = {Add: '+', Sub: '-', Mul: '*', Div: '/'}


def degree(ast):
    """Bound on the polynomial degree of ast in i, j, eps and its constants; caps evaluation cost."""
    if isinstance(ast, (Const, Var, Param)):
        return 1
    if isinstance(ast, (Neg, Delta)):
        return degree(ast.child)
    if isinstance(ast, Pow):
        return degree(ast.base) * ast.exponent
    if isinstance(ast, (Add, Sub)):
        return max(degree(ast.left), degree(ast.right))
    return degree(ast.left) + degree(ast.right)


def eval_ast(ast, i, j, eps):
    """Exact value of ast at (i, j), or UNDEFINED when a division hits a non-invertible scalar."""
    try:
        return ast.evaluate(i, j, eps)
    except ZeroDivisionError:
        return UNDEFINED


def print_canonical(ast):
    if isinstance(ast, Const):
        value = ast.value
        if value.denominator == 1:
            return f"({value.numerator})"
        return f"({value.numerator}/{value.denominator})"
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Param):
        return 'eps'
    if isinstance(ast, Neg):
        return f"(-{print_canonical(ast.child)})"
    if isinstance(ast, Pow):
        return f"({print_canonical(ast.base)}^{ast.exponent})"
    if isinstance(ast, Delta):
        return f"delta({print_canonical(ast.child)})"
    symbol = SYMBOLS[type(ast)]
    return f"({print_canonical(ast.left)}{symbol}{print_canonical(ast.right)})"


# Parser ----------------------------------------------------------------------

@dataclass
class Token:
    kind: str
    text: str
    position: int


def tokenize(src):
    tokens = []
    position = 0
    while position < len(src):
        if src[position:].strip() == '':
            break
        match = _TOKEN.match(src, position)
        if match is None or match.lastgroup is None:
            # skip whitespace to point at the offending character
            bad = position + len(src[position:]) - len(src[position:].lstrip())
            raise ExprSyntaxError(f"Unexpected character {src[bad]!r}", bad, _byte_offset(src, bad))
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        position = match.end()
    tokens.append(Token('EOF', '', len(src)))
    return tokens


def _byte_offset(src, position):
    return len(src[:position].encode('utf-8'))


ATOM_START = ("'i'", "'j'", "'eps'", "'delta'", "'('", 'integer')


class Parser:
    def __init__(self, src):
        self.src = src
        self.tokens = tokenize(src)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def peek(self, ahead=1):
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def advance(self):
        token = self.current
        self.index += 1
        return token

    def fail(self, expected, message=None):
        token = self.current
        if message is None:
            found = 'end of input' if token.kind == 'EOF' else repr(token.text)
            message = f"Unexpected {found}"
        raise ExprSyntaxError(message, token.position, _byte_offset(self.src, token.position), expected)

    def is_op(self, *ops):
        return self.current.kind == 'OP' and self.current.text in ops

    def expect_op(self, op):
        if not self.is_op(op):
            self.fail((f"'{op}'",))
        return self.advance()

    def parse(self):
        ast = self.expr()
        if self.current.kind != 'EOF':
            self.fail(("'+'", "'-'", "'*'", "'/'", "'^'", 'end of input'))
        return ast

    def expr(self):
        node = self.term()
        while self.is_op('+', '-'):
            op = self.advance().text
            node = BINARY[op](node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.is_op('*', '/'):
            op = self.advance().text
            node = BINARY[op](node, self.factor())
        return node

    def factor(self):
        negate = False
        if self.is_op('-'):
            self.advance()
            negate = True
        node = self.atom()
        if self.is_op('^'):
            self.advance()
            if self.current.kind != 'INT':
                self.fail(('integer',))
            digits = self.current.text.lstrip('0')
            if len(digits) > 2 or int(digits or 0) > MAX_EXPONENT:
                self.fail((), f"Exponent {self.current.text} exceeds {MAX_EXPONENT}")
            node = Pow(node, int(self.advance().text))
        return Neg(node) if negate else node

    def atom(self):
        token = self.current
        if token.kind == 'INT':
            self.advance()
            numerator = int(token.text)
            nxt, after = self.current, self.peek()
            if (nxt.kind == 'OP' and nxt.text == '/' and after.kind == 'INT'
                    and int(after.text) != 0):
                self.advance()
                denominator = int(self.advance().text)
                return Const(Fraction(numerator, denominator))
            return Const(Fraction(numerator))
        if token.kind == 'NAME':
            if token.text in ('i', 'j'):
                self.advance()
                return Var(token.text)
            if token.text == 'eps':
                self.advance()
                return Param()
            if token.text == 'delta':
                self.advance()
                self.expect_op('(')
                child = self.expr()
                self.expect_op(')')
                return Delta(child)
            self.fail(ATOM_START, f"Unknown name {token.text!r}")
        if self.is_op('('):
            self.advance()
            node = self.expr()
            self.expect_op(')')
            return node
        self.fail(ATOM_START)


def parse_expr(src):
    if isinstance(src, bytes):
        src = src.decode('utf-8')
    ast = Parser(src).parse()
    if degree(ast) > MAX_DEGREE:
        raise ExprSyntaxError(f"Expression degree exceeds {MAX_DEGREE}", 0, 0)
    return ast


# Configuration ---------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraConfig:
    """Raw configuration texts, kept for echoing in reports."""
    f: str
    a: str
    b: str
    eps: str
    scalar: str
    f_theta: Optional[str] = None
    lines: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def echo(self):
        data = {'f': self.f, 'f_theta': self.f_theta, 'a': self.a, 'b': self.b,
                'eps': self.eps, 'scalar': self.scalar}
        return {key: value for key, value in data.items() if value is not None}

    def to_spec(self):
        from algebra import AlgebraSpec

        def where(key):
            return self.lines.get(key)

        if self.scalar not in MODES:
            raise ConfigError(f"scalar must be one of {', '.join(MODES)}, got {self.scalar!r}", where('scalar'))
        mode = DUAL if self.scalar == DUAL else RATIONAL

        def expression(key, text):
            try:
                return parse_expr(text)
            except ExprSyntaxError as e:
                raise ConfigError(f"{key}: {e}", where(key)) from e

        def rational(key, text):
            try:
                return Scalar.parse(text).real
            except ValueError as e:
                raise ConfigError(f"{key}: {e}", where(key)) from e

        f = expression('f', self.f)
        f_theta = expression('f_theta', self.f_theta) if self.f_theta is not None else None
        a = rational('a', self.a)
        b = rational('b', self.b)
        eps = Scalar(rational('eps', self.eps), 0, mode)

        warnings = []
        if b < 0:
            msg = f"b = {b} is negative; structure constants are expected with b >= 0"
            logger.warning(f"⚠️ {msg}")
            warnings.append(msg)
        return AlgebraSpec(f=f, f_theta=f_theta, a=a, b=b, eps=eps, scalar_mode=mode,
                           warnings=tuple(warnings), echo=tuple(self.echo().items()))


def _strip_comment(line):
    quoted = False
    for index, char in enumerate(line):
        if char == '"':
            quoted = not quoted
        elif char == '#' and not quoted:
            return line[:index]
    return line


def _unquote(value):
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] == '"':
        return value[1:-1]
    return value


def parse_config_text(src):
    values = {}
    lines = {}
    for number, raw in enumerate(src.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", number)
        key, value = line.split('=', 1)
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", number)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", number)
        values[key] = _unquote(value)
        lines[key] = number
    missing = [key for key in REQUIRED_KEYS if key not in values]
    if missing:
        raise ConfigError(f"missing key(s): {', '.join(missing)}")
    return AlgebraConfig(f=values['f'], a=values['a'], b=values['b'], eps=values['eps'],
                         scalar=values['scalar'], f_theta=values.get('f_theta'), lines=lines)


def parse_config(src):
    return parse_config_text(src).to_spec()


def main():
    parser = argparse.ArgumentParser(description='Parse a structure-function expression and echo its AST.')
    parser.add_argument('expression', type=str, help='Expression text, e.g. "-j*(1+eps*j)/(1+eps*(i+j))".')
    args = parser.parse_args()
    ast = parse_expr(args.expression)
    print(print_canonical(ast))
    print(repr(ast))


if __name__ == '__main__':
    main()
