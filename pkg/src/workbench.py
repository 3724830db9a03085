"""Command-line entry point.

    python src/workbench.py check --config config/algebras/witt.cfg --checks jacobi,lsa --window -6..6
    python src/workbench.py check --f "-j" --checks associative --expect fails
    python src/workbench.py lk --pmax 6
    python src/workbench.py burgers --op emit --table config/tables/one_dim.txt
"""
import argparse
import json
import logging
import sys
from traceback import format_exc

from algebra import parse_endo_table
from burgers import emit_burgers, format_table, graded_truncate, lsa_table_check, parse_table
from cohomology import (MissingSupport, delta1, delta2, kernel_basis, parse_cochain1, parse_cochain2,
                        solve_coboundary)
from diffop import LK_GROUPS
from expr import AlgebraConfig, ExprSyntaxError, parse_config, parse_expr, print_canonical
from extensions import emit_deformed_hydro, emit_extended_hydro
from identities import DEFAULT_LIMIT, Window
from log import setup_logging
from report import DEFAULT_WINDOWS, EXIT_INPUT, EXIT_OK, Job, RunPlan, consolidate, parse_expectations, run

logger = logging.getLogger(__name__)

DEFAULT_CHECKS = 'skew,jacobi,lsa'
EXTENSION_CHECKS = ('tstar', 'double', 'deform', 'rho1', 'rho2')


def _read(path):
    with open(path, encoding='utf-8') as fh:
        return fh.read()


def load_spec(args):
    """Algebra from --config, or from the inline --f/--f-theta/--a/--b/--eps/--scalar flags."""
    if getattr(args, 'config', None):
        return parse_config(_read(args.config))
    if getattr(args, 'f', None) is None:
        return None
    config = AlgebraConfig(f=args.f, f_theta=args.f_theta, a=args.a, b=args.b, eps=args.eps, scalar=args.scalar)
    return config.to_spec()


def _window(args):
    return Window.parse(args.window or args.default_window)


def _windows(args, names):
    """--windows entries first, then an explicit --window, then the per-check defaults."""
    default = _window(args)
    overrides = {}
    for item in filter(None, (args.windows or '').split(',')):
        name, _, text = item.partition('=')
        overrides[name.strip()] = Window.parse(text)
    if args.window is None:
        overrides = {**{n: w for n, w in DEFAULT_WINDOWS.items() if n in names}, **overrides}
    return {name: overrides.get(name, default) for name in names}


def _plan(args, spec, jobs):
    return RunPlan(spec=spec, jobs=jobs, limit=args.limit, fmt=args.format,
                   expectations=parse_expectations(args.expect), workers=args.workers, cache=args.cache)


def _emit(code, text, output=None):
    if text:
        if output:
            with open(output, 'w', encoding='utf-8') as fh:
                fh.write(text + '\n')
        else:
            print(text)
    return code


def _endo_options(args):
    options = {'x0': args.x0}
    if getattr(args, 'rho', None):
        options['rho'] = parse_endo_table(_read(args.rho))
    if getattr(args, 'phi', None):
        options['phi'] = parse_endo_table(_read(args.phi))
    return options


# Subcommands ---------------------------------------------------------------------

def cmd_check(args):
    spec = load_spec(args)
    names = [name.strip() for name in args.checks.split(',') if name.strip()]
    windows = _windows(args, names)
    options = _endo_options(args)
    options.update(variant=args.variant, circ=args.circ)
    if args.psi:
        options['psi'] = parse_cochain2(_read(args.psi))
    jobs = [Job(name, windows[name], options) for name in names]
    return _emit(*run(_plan(args, spec, jobs)), args.output)


def cmd_extensions(args):
    if args.emit_table:
        table = parse_table(_read(args.emit_table))
        rho = parse_endo_table(_read(args.rho)) if args.rho else None
        return _emit(EXIT_OK, emit_deformed_hydro(table, rho) if args.deformed else emit_extended_hydro(table, rho),
                     args.output)
    spec = load_spec(args)
    names = [name.strip() for name in args.checks.split(',') if name.strip()]
    unknown = [name for name in names if name not in EXTENSION_CHECKS]
    if unknown:
        raise ValueError(f"Unknown extension check(s) {', '.join(unknown)}; expected {', '.join(EXTENSION_CHECKS)}")
    windows = _windows(args, names)
    options = _endo_options(args)
    options.update(action=args.action, component=args.component, tstar_action=args.tstar_action,
                   double_action=args.double_action, g=args.g, mu=args.mu, nu=args.nu)
    jobs = [Job(name, windows[name], options) for name in names]
    return _emit(*run(_plan(args, spec, jobs)), args.output)


def cmd_lk(args):
    groups = [name.strip() for name in args.checks.split(',') if name.strip()]
    options = {'groups': groups, 'bremner_pmax': args.bremner_pmax}
    jobs = [Job('lk', Window(0, args.pmax), options)]
    return _emit(*run(_plan(args, None, jobs)), args.output)


def cmd_burgers(args):
    if args.op == 'truncate':
        spec = load_spec(args)
        if spec is None:
            raise ValueError("truncate needs an algebra (--config or --f)")
        result = graded_truncate(spec, _window(args))
        lines = [f"# basis e_{x} -> {result.position(x)}" for x in result.window.values()]
        lines.append(format_table(result.table).rstrip())
        lines.extend(f"# dropped {pair}" for pair in result.dropped)
        lines.extend(f"# undefined {pair}" for pair in result.undefined)
        return _emit(EXIT_OK, '\n'.join(lines), args.output)

    if not args.table:
        raise ValueError(f"burgers {args.op} needs --table")
    table = parse_table(_read(args.table))
    if args.op == 'emit':
        return _emit(EXIT_OK, emit_burgers(table, args.style), args.output)
    jobs = [Job('burgers-table', Window(1, table.dim), {'table': table})]
    return _emit(*run(_plan(args, None, jobs)), args.output)


def cmd_cohomology(args):
    spec = load_spec(args)
    if spec is None:
        raise ValueError("cohomology needs an algebra (--config or --f)")
    w = _window(args)
    if args.op == 'delta1':
        if not args.phi:
            raise ValueError("delta1 needs --phi")
        return _emit(EXIT_OK, delta1(spec, parse_cochain1(_read(args.phi)), w).to_text().rstrip(), args.output)
    if args.op == 'kernel':
        basis = kernel_basis(spec, w)
        text = '\n\n'.join(phi.to_text().rstrip() for phi in basis)
        return _emit(EXIT_OK, f"# {len(basis)} basis vectors on {w.doubled()}\n{text}", args.output)
    if not args.psi:
        raise ValueError(f"{args.op} needs --psi")
    psi = parse_cochain2(_read(args.psi))
    if args.op == 'delta2':
        values = delta2(spec, psi, w)
        return _emit(EXIT_OK, '\n'.join(f"{i} {j} {k} {v}" for (i, j, k), v in values.items() if v) or '# zero',
                     args.output)
    result = solve_coboundary(spec, psi, w)
    if args.format == 'json':
        document = {
            'solvable': result.solvable,
            'window': w.to_json(),
            'window_relative': result.window_relative,
            'solution': {str(x): str(v) for x, v in sorted(result.solution.phi.items())} if result.solvable else None,
            'witness': [{'pair': list(pair), 'weight': str(weight)} for pair, weight in result.witness or []],
            'poles': [list(pair) for pair in result.poles],
        }
        text = json.dumps(document, indent=2)
    else:
        lines = [result.summary()]
        if result.solvable:
            lines.append(result.solution.to_text().rstrip())
        else:
            lines.extend(f"  {weight} x equation {pair}" for pair, weight in result.witness)
        text = '\n'.join(lines)
    return _emit(EXIT_OK, text, args.output)


def cmd_parse(args):
    ast = parse_expr(args.expression)
    return _emit(EXIT_OK, print_canonical(ast))


def cmd_consolidate(args):
    output = args.output or f"consolidated_reports.{args.format}"
    df = consolidate(args.path, output, args.format)
    print(f"Consolidated data saved to {output}")
    print(f"Number of reports ingested: {len(df)}")
    return EXIT_OK


# Argument parsing ----------------------------------------------------------------

def _spec_arguments(parser):
    group = parser.add_argument_group('algebra')
    group.add_argument('--config', type=str, help='Algebra configuration file (key = value lines).')
    group.add_argument('--f', type=str, help='Structure function f(i,j), e.g. "-j".')
    group.add_argument('--f-theta', dest='f_theta', type=str, help='Central part of the structure function.')
    group.add_argument('--a', type=str, default='1', help='Bracket coefficient a (default: %(default)s).')
    group.add_argument('--b', type=str, default='1', help='Bracket coefficient b (default: %(default)s).')
    group.add_argument('--eps', type=str, default='0', help='Parameter eps (default: %(default)s).')
    group.add_argument('--scalar', type=str, choices=['rational', 'dual'], default='rational',
                       help='Scalar ring (default: %(default)s).')


def _run_arguments(parser, window='-4..4'):
    group = parser.add_argument_group('run')
    parser.set_defaults(default_window=window)
    group.add_argument('--window', type=str,
                       help=f'Index window lo..hi (default: {window}; filippov -2..2, bremner and bmod -1..1).')
    group.add_argument('--windows', type=str, help='Per-check windows, e.g. "filippov=-2..2,bremner=0..2".')
    group.add_argument('--limit', type=int, default=DEFAULT_LIMIT,
                       help='Counterexamples kept per report (default: %(default)s).')
    group.add_argument('--format', type=str, choices=['text', 'json'], default='text',
                       help='Report format (default: %(default)s).')
    group.add_argument('--expect', type=str, help="'holds', 'fails', or 'check=verdict,...'.")
    group.add_argument('--workers', type=int, default=1, help='Worker processes (default: %(default)s).')
    group.add_argument('--cache', type=str, help='JSON file caching reports between runs.')
    group.add_argument('-o', '--output', type=str, help='Write the report here instead of stdout.')


def build_parser():
    parser = argparse.ArgumentParser(description='Verify functional identities of generalized Virasoro-type algebras.')
    parser.add_argument('--log-file', type=str, help='Also log to this file (uncolored).')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging.')
    sub = parser.add_subparsers(dest='command', required=True)

    check = sub.add_parser('check', help='Windowed identity checks on a graded algebra.')
    _spec_arguments(check)
    _run_arguments(check)
    check.add_argument('--checks', type=str, default=DEFAULT_CHECKS, help='Comma separated (default: %(default)s).')
    check.add_argument('--x0', type=int, default=1, help='Shift for hereditary/bianchi/rho checks (default: %(default)s).')
    check.add_argument('--rho', type=str, help="Endomorphism table for rho-compat ('source target value').")
    check.add_argument('--phi', type=str, help="Endomorphism table for hereditary ('source target value').")
    check.add_argument('--psi', type=str, help="2-cochain table for cocycle ('i j value').")
    check.add_argument('--variant', type=str, default='scalar_shift',
                       choices=['scalar_shift', 'general_table', 'shift1_table', 'element_def'],
                       help='Hereditary variant (default: %(default)s).')
    check.add_argument('--circ', type=str, choices=['star', 'bracket'], default='star',
                       help='Composition for the element_def variant (default: %(default)s).')
    check.set_defaults(handler=cmd_check)

    coho = sub.add_parser('cohomology', help='Coboundary operators and the coboundary solver.')
    _spec_arguments(coho)
    coho.add_argument('--op', type=str, choices=['delta1', 'delta2', 'solve', 'kernel'], required=True)
    coho.add_argument('--phi', type=str, help="1-cochain table ('x value').")
    coho.add_argument('--psi', type=str, help="2-cochain table ('i j value').")
    coho.add_argument('--window', type=str, default='-4..4', help='Index window (default: %(default)s).')
    coho.add_argument('--format', type=str, choices=['text', 'json'], default='text')
    coho.add_argument('-o', '--output', type=str)
    coho.set_defaults(handler=cmd_cohomology)

    ext = sub.add_parser('extensions', help='T*A, the double, deformations and lifted conditions.')
    _spec_arguments(ext)
    _run_arguments(ext)
    ext.add_argument('--checks', type=str, default='tstar,double', help='Subset of ' + ','.join(EXTENSION_CHECKS))
    ext.add_argument('--action', type=str, choices=['printed', 'bimodule'], default='bimodule',
                     help='Action used by the tstar/double checks (default: %(default)s).')
    ext.add_argument('--tstar-action', dest='tstar_action', type=str, choices=['printed', 'bimodule'],
                     default='printed', help='T*A product for rho1 (default: %(default)s).')
    ext.add_argument('--double-action', dest='double_action', type=str, choices=['printed', 'bimodule'],
                     default='printed', help='Double product for rho2 (default: %(default)s).')
    ext.add_argument('--component', type=str, choices=['primal', 'dual'], default='primal')
    ext.add_argument('--x0', type=int, default=1)
    ext.add_argument('--rho', type=str, help="Endomorphism table ('source target value').")
    ext.add_argument('--g', type=str, default='0')
    ext.add_argument('--mu', type=str, default='0')
    ext.add_argument('--nu', type=str, default='0')
    ext.add_argument('--emit-table', dest='emit_table', type=str,
                     help='Emit the hydrodynamic system of this structure table instead of checking.')
    ext.add_argument('--deformed', action='store_true', help='With --emit-table: the second hierarchy.')
    ext.set_defaults(handler=cmd_extensions)

    lk = sub.add_parser('lk', help='Identity suite for polynomial vector fields x^(i+1) d/dx.')
    lk.add_argument('--pmax', type=int, default=4, help='Largest basis index (default: %(default)s).')
    lk.add_argument('--checks', type=str, default=','.join(LK_GROUPS), help='Check groups (default: all).')
    lk.add_argument('--bremner-pmax', dest='bremner_pmax', type=int, default=2)
    _run_arguments(lk, window='0..4')
    lk.set_defaults(handler=cmd_lk)

    burgers = sub.add_parser('burgers', help='Structure tables and Burgers systems.')
    _spec_arguments(burgers)
    _run_arguments(burgers, window='0..2')
    burgers.add_argument('--op', type=str, choices=['check', 'emit', 'truncate'], default='check')
    burgers.add_argument('--table', type=str, help="Structure table ('dim N' then 'j k i value').")
    burgers.add_argument('--style', type=str, choices=['plain', 'latex'], default='plain')
    burgers.set_defaults(handler=cmd_burgers)

    parse = sub.add_parser('parse', help='Echo the canonical form of a structure-function expression.')
    parse.add_argument('expression', type=str)
    parse.set_defaults(handler=cmd_parse)

    cons = sub.add_parser('consolidate', help='Collect saved JSON reports into one TSV or JSON table.')
    cons.add_argument('-p', '--path', type=str, default='./reports', help='Directory of JSON reports (default: %(default)s).')
    cons.add_argument('-o', '--output', type=str, help='Output file (default: consolidated_reports.<format>).')
    cons.add_argument('-f', '--format', type=str, choices=['tsv', 'json'], default='tsv')
    cons.set_defaults(handler=cmd_consolidate)
    return parser


def _rationals(args):
    from scalar import Scalar
    for key in ('g', 'mu', 'nu'):
        if hasattr(args, key):
            setattr(args, key, Scalar.parse(getattr(args, key)).real)


# Options whose values may start with '-' ("-3..3", "-j"); argparse would read those as flags.
DASHED_VALUE_OPTIONS = ('--window', '--windows', '--f', '--f-theta', '--a', '--b', '--eps', '--g', '--mu', '--nu')


def attach_dashed_values(argv):
    out = []
    for arg in argv:
        if out and out[-1] in DASHED_VALUE_OPTIONS and arg.startswith('-') and not arg.startswith('--'):
            out[-1] = f"{out[-1]}={arg}"
        else:
            out.append(arg)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(attach_dashed_values(sys.argv[1:] if argv is None else list(argv)))
    setup_logging(logging.DEBUG if args.verbose else logging.INFO, args.log_file)
    try:
        _rationals(args)
        return args.handler(args)
    except ExprSyntaxError as e:
        logger.error(f"Syntax error: {e}")
    except (ValueError, OSError, MissingSupport) as e:
        logger.error(f"{e}")
    except KeyboardInterrupt:
        logger.warning("🚯 Interrupted by user.")
        return 130
    except Exception as e:
        logger.error(f"Unexpected failure: {e}\n{format_exc()}")
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
