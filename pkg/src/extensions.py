"""Phase-space extension T*A, the left-symmetric double, first-order deformations and
the lifted deformation conditions.

Dual coordinates e'_x are stored as the second graded component of a PairedElement,
paired with A through <e'_a, e_b> = delta(a, b). With that pairing

    L*_{e_i} e'_j = -f(i, j-i) e'_{j-i}        R*_{e_i} e'_j = -f(j-i, i) e'_{j-i}
"""
import argparse
import itertools
import logging

from algebra import Element, EndoSpec, PairedElement, star
from burgers import format_terms
from identities import DEFAULT_LIMIT, sweep
from scalar import DUAL, Scalar

logger = logging.getLogger(__name__)

PRINTED = 'printed'
BIMODULE = 'bimodule'
ACTIONS = (PRINTED, BIMODULE)
PRIMAL = 0
DUAL_SLOT = 1

__all__ = ['PairedElement', 'tstar_product', 'double_product', 'check_tstar_lsa', 'check_double_lsa',
           'DeformedSpec', 'deform_product', 'check_rho1_lift', 'rho2_map', 'check_rho2_compat',
           'emit_extended_hydro', 'emit_deformed_hydro']


def _check_action(action):
    if action not in ACTIONS:
        raise ValueError(f"Unknown action {action!r}; expected one of {', '.join(ACTIONS)}")


def _theta_free(spec):
    if getattr(spec, 'has_theta', False):
        raise ValueError("Extensions are defined for specs without a central part (f_theta)")


def _coadjoint(spec, x, xi, side):
    terms = {}
    for i, c in x.items():
        for j, d in xi.items():
            coefficient = spec.f_pair(i, j - i)[0] if side == 'left' else spec.f_pair(j - i, i)[0]
            if coefficient:
                value = -(c * d * coefficient)
                terms[j - i] = terms[j - i] + value if j - i in terms else value
    return Element._canonical(terms)


def left_coadjoint(spec, x, xi):
    return _coadjoint(spec, x, xi, 'left')


def right_coadjoint(spec, x, xi):
    return _coadjoint(spec, x, xi, 'right')


def tstar_product(spec, P, Q, action=PRINTED):
    """(x, u) * (y, v) on A + A*.

    printed:  (x*y, L*_x v - L*_y u)
    bimodule: (x*y, (L*_x - R*_x) v - R*_y u)
    """
    _check_action(action)
    _theta_free(spec)
    x, u, y, v = P.primal, P.dual, Q.primal, Q.dual
    primal = star(spec, x, y)
    if action == PRINTED:
        dual = left_coadjoint(spec, x, v) - left_coadjoint(spec, y, u)
    else:
        dual = left_coadjoint(spec, x, v) - right_coadjoint(spec, x, v) - right_coadjoint(spec, y, u)
    return PairedElement(primal, dual)


def double_product(spec, P, Q, action=PRINTED):
    """(x, u) *2 (y, v) on A + A.

    printed:  (x*y, x*v - y*u)
    bimodule: (x*y, x*v + u*y)
    """
    _check_action(action)
    _theta_free(spec)
    x, u, y, v = P.primal, P.dual, Q.primal, Q.dual
    if action == PRINTED:
        second = star(spec, x, v) - star(spec, y, u)
    else:
        second = star(spec, x, v) + star(spec, u, y)
    return PairedElement(star(spec, x, y), second)


def _paired_basis(index, slot):
    return PairedElement.of_primal(index) if slot == PRIMAL else PairedElement.of_dual(index)


def _lsym_defect(product, P, Q, R):
    assoc = lambda X, Y, Z: product(product(X, Y), Z) - product(X, product(Y, Z))
    return assoc(P, Q, R) - assoc(Q, P, R)


def _slotted_tuples(w, arity):
    """(indices..., slots...) with slots in {0 primal, 1 dual}, indices varying slowest."""
    for indices in w.tuples(arity):
        for slots in itertools.product((PRIMAL, DUAL_SLOT), repeat=arity):
            yield indices + slots


def _check_paired_lsa(name, product, w, limit):
    def residual(i, j, k, si, sj, sk):
        return _lsym_defect(product, _paired_basis(i, si), _paired_basis(j, sj), _paired_basis(k, sk))

    return sweep(name, w, 6, residual, limit, tuples=_slotted_tuples(w, 3),
                 notes=["tuples are (i, j, k, slot_i, slot_j, slot_k); slot 0 = primal, 1 = dual"])


def check_tstar_lsa(spec, w, action=BIMODULE, limit=DEFAULT_LIMIT):
    _check_action(action)
    _theta_free(spec)
    return _check_paired_lsa(f"tstar-lsa-{action}", lambda P, Q: tstar_product(spec, P, Q, action), w, limit)


def check_double_lsa(spec, w, action=BIMODULE, limit=DEFAULT_LIMIT):
    _check_action(action)
    _theta_free(spec)
    return _check_paired_lsa(f"double-lsa-{action}", lambda P, Q: double_product(spec, P, Q, action), w, limit)


# First-order deformation ----------------------------------------------------------

class DeformedSpec:
    """x *' y = x*y + nil (rho(x) * y) over dual scalars; usable wherever a spec is expected
    by the element-mode checks."""

    def __init__(self, base, rho):
        if base.scalar_mode != DUAL:
            logger.error(f"Deformation needs dual scalars, got {base.scalar_mode!r}")
            raise ValueError("deform_product requires scalar = dual")
        self.base = base
        self.rho = rho
        self.a = base.a
        self.b = base.b
        self.eps = base.eps
        self.scalar_mode = DUAL
        self.has_theta = base.has_theta
        self.warnings = base.warnings
        self.echo = base.echo + (('rho', rho.describe()),)

    def multiply(self, A, B):
        return self.base.multiply(A, B) + self.base.multiply(self.rho(A), B).scale(Scalar.unit_nil())

    def f_pair(self, i, j):
        raise ValueError("A deformed product is not graded; use element-mode checks")

    g_pair = f_pair


def deform_product(spec, rho):
    return DeformedSpec(spec, rho)


# Lifted deformation conditions ----------------------------------------------------

def _strong_deformation_residual(product, lift, P, Q):
    return product(P, lift(Q)) - product(Q, lift(P)) - lift(product(P, Q) - product(Q, P))


def check_rho1_lift(spec, w, x0, component='primal', action=PRINTED, limit=DEFAULT_LIMIT):
    """rho1: (x, u) -> (rho(x), 0) with rho the shift by x0, tested as a strong deformation of T*A.

    primal: basis pairs (i, j) of A, residual in the primal slot
            (reproduces the scalar shift condition).
    dual:   mixed basis pairs (i, j, slot_i, slot_j), residual in the dual slot.
    """
    if component not in ('primal', 'dual'):
        raise ValueError(f"Unknown component {component!r}")
    _check_action(action)
    _theta_free(spec)
    rho = EndoSpec.shift(x0)
    lift = lambda P: PairedElement(rho(P.primal), Element.zero())
    product = lambda P, Q: tstar_product(spec, P, Q, action)
    notes = [f"rho = {rho.describe()}", f"T*A action = {action}"]

    if component == 'primal':
        def residual(i, j):
            return _strong_deformation_residual(product, lift, PairedElement.of_primal(i),
                                                PairedElement.of_primal(j)).primal
        return sweep('rho1-lift-primal', w, 2, residual, limit, notes=notes)

    def residual_dual(i, j, si, sj):
        return _strong_deformation_residual(product, lift, _paired_basis(i, si), _paired_basis(j, sj)).dual

    notes.append("tuples are (i, j, slot_i, slot_j); slot 0 = primal, 1 = dual")
    return sweep('rho1-lift-dual', w, 4, residual_dual, limit, tuples=_slotted_tuples(w, 2), notes=notes)


def rho2_map(rho, g, mu, nu):
    """(x, u) -> (rho(x) + g u, mu x + nu u) with rational constants g, mu, nu."""
    def apply(P):
        return PairedElement(rho(P.primal) + P.dual.scale(g), P.primal.scale(mu) + P.dual.scale(nu))
    return apply


def check_rho2_compat(spec, w, x0, g=0, mu=0, nu=0, action=PRINTED, limit=DEFAULT_LIMIT):
    _check_action(action)
    _theta_free(spec)
    lift = rho2_map(EndoSpec.shift(x0), g, mu, nu)
    product = lambda P, Q: double_product(spec, P, Q, action)

    def residual(i, j, si, sj):
        return _strong_deformation_residual(product, lift, _paired_basis(i, si), _paired_basis(j, sj))

    notes = [f"rho = shift({x0}), g = {g}, mu = {mu}, nu = {nu}", f"double action = {action}",
             "tuples are (i, j, slot_i, slot_j); slot 0 = primal, 1 = dual"]
    return sweep('rho2-compat', w, 4, residual, limit, tuples=_slotted_tuples(w, 2), notes=notes)


# Hydrodynamic systems ---------------------------------------------------------------

def _rho_matrix(rho, dim):
    """R[(j, i)]: coefficient of e_i in rho(e_j), restricted to 1..dim."""
    R = {}
    if rho is None:
        return R
    for j in range(1, dim + 1):
        for i, c in rho.image(j).items():
            if 1 <= i <= dim:
                R[(j, i)] = c.real
            else:
                logger.warning(f"⚠️ rho(e_{j}) has a component e_{i} outside the table; ignored")
    return R


def _hydro_terms(T, R, i):
    """Terms of rho(u_x) + u_x * u in component i."""
    terms = [(R.get((j, i), 0), [f"u{j}_x"]) for j in T.indices()]
    for j, k in itertools.product(T.indices(), repeat=2):
        terms.append((T.get(j, k, i), [f"u{j}_x", f"u{k}"]))
    return terms


def emit_extended_hydro(T, rho=None):
    """u_t = rho(u_x) + u_x * u on A, and u'_t = u_x . u' on the dual coordinates, where
    (u_x . u')_k = sum C_jk^i u^j_x u'_i (transpose of left multiplication)."""
    R = _rho_matrix(rho, T.dim)
    lines = [f"u{i}_t = {format_terms(_hydro_terms(T, R, i))}" for i in T.indices()]
    for k in T.indices():
        terms = [(T.get(j, k, i), [f"u{j}_x", f"u{i}'"]) for j, i in itertools.product(T.indices(), repeat=2)]
        lines.append(f"u{k}'_t = {format_terms(terms)}")
    return '\n'.join(lines)


def emit_deformed_hydro(T, rho=None):
    """Second hierarchy u_t = u_x * u + nil rho(u_x) * u."""
    R = _rho_matrix(rho, T.dim)
    lines = []
    for i in T.indices():
        plain = [(T.get(j, k, i), [f"u{j}_x", f"u{k}"]) for j, k in itertools.product(T.indices(), repeat=2)]
        deformed = []
        for j, l, k in itertools.product(T.indices(), repeat=3):
            deformed.append((R.get((j, l), 0) * T.get(l, k, i), [f"u{j}_x", f"u{k}"]))
        line = f"u{i}_t = {format_terms(plain)}"
        nil_part = format_terms(deformed)
        if nil_part != '0':
            line += f" + nil*({nil_part})"
        lines.append(line)
    return '\n'.join(lines)


def main():
    from burgers import parse_table
    from algebra import parse_endo_table
    parser = argparse.ArgumentParser(description='Emit the hydrodynamic systems of a structure table.')
    parser.add_argument('table', type=str, help='Structure table file.')
    parser.add_argument('--rho', type=str, help="Endomorphism table ('source target value' lines).")
    parser.add_argument('--deformed', action='store_true', help='Emit the second (deformed) hierarchy.')
    args = parser.parse_args()
    with open(args.table, encoding='utf-8') as fh:
        T = parse_table(fh.read())
    rho = None
    if args.rho:
        with open(args.rho, encoding='utf-8') as fh:
            rho = parse_endo_table(fh.read())
    print(emit_deformed_hydro(T, rho) if args.deformed else emit_extended_hydro(T, rho))


if __name__ == '__main__':
    main()
