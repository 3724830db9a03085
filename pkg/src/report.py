"""Run plans, report rendering and the exit-code contract.

Exit codes: 0 every verdict matches the declared expectations (or none were declared),
1 at least one verdict does not, 2 invalid input.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from __init__ import __version__
from algebra import EndoSpec
from burgers import format_table, lsa_table_check
from cohomology import MissingSupport
from diffop import LK_GROUPS, lk_suite
from extensions import (check_double_lsa, check_rho1_lift, check_rho2_compat, check_tstar_lsa,
                        deform_product)
from identities import (DEFAULT_LIMIT, FAILS, HOLDS, VACUOUS, CheckReport, check_alternative,
                        check_associative, check_bianchi_P, check_bmod, check_bremner, check_cocycle,
                        check_derivation, check_filippov, check_hereditary, check_jacobi,
                        check_quasi_assoc, check_rho_compat, check_skew, check_universal, Window,
                        crosscheck_virasoro_closed_forms)
from persist import ReportCache, fingerprint
from worker import run_jobs

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INPUT = 2

VERDICTS = (HOLDS, FAILS, VACUOUS)
FORMATS = ('text', 'json')

# largest window size allowed for a check with this many free indices
CAPS = {1: 41, 2: 41, 3: 41, 4: 13, 5: 9, 6: 7, 7: 3}
# Used when neither --window nor --windows names the check.
DEFAULT_WINDOWS = {'filippov': Window(-2, 2), 'bremner': Window(-1, 1), 'bmod': Window(-1, 1)}


def _shift_or(options, key):
    return options.get(key) or EndoSpec.shift(options.get('x0', 1))


def _as_list(result):
    return list(result) if isinstance(result, (tuple, list)) else [result]


@dataclass(frozen=True)
class CheckEntry:
    arity: int
    runner: object
    needs_spec: bool = True


CHECKS = {
    'skew': CheckEntry(2, lambda s, w, n, o: check_skew(s, w, n)),
    'jacobi': CheckEntry(3, lambda s, w, n, o: check_jacobi(s, w, 'J', n)),
    'jacobi-tg': CheckEntry(3, lambda s, w, n, o: check_jacobi(s, w, 'TG', n)),
    'lsa': CheckEntry(3, lambda s, w, n, o: check_quasi_assoc(s, w, 'element', n)),
    'lsa-scalar': CheckEntry(3, lambda s, w, n, o: check_quasi_assoc(s, w, 'scalar', n)),
    'associative': CheckEntry(3, lambda s, w, n, o: check_associative(s, w, n)),
    'alternative': CheckEntry(2, lambda s, w, n, o: check_alternative(s, w, n)),
    'derivation': CheckEntry(3, lambda s, w, n, o: check_derivation(s, w, 'element', n)),
    'derivation-scalar': CheckEntry(3, lambda s, w, n, o: check_derivation(s, w, 'scalar', n)),
    'cocycle': CheckEntry(3, lambda s, w, n, o: check_cocycle(s, w, _required(o, 'psi', 'cocycle'), n)),
    'hereditary': CheckEntry(2, lambda s, w, n, o: check_hereditary(
        s, w, _shift_or(o, 'phi'), o.get('variant', 'scalar_shift'), o.get('circ', 'star'), n)),
    'bianchi': CheckEntry(3, lambda s, w, n, o: check_bianchi_P(s, w, o.get('x0', 1), n)),
    'rho-compat': CheckEntry(2, lambda s, w, n, o: check_rho_compat(
        s, w, _shift_or(o, 'rho'), 'element' if o.get('rho') else 'difference', n)),
    'universal': CheckEntry(4, lambda s, w, n, o: check_universal(s, w, n)),
    'filippov': CheckEntry(5, lambda s, w, n, o: check_filippov(s, w, n)),
    'bremner': CheckEntry(7, lambda s, w, n, o: check_bremner(s, w, n)),
    'bmod': CheckEntry(6, lambda s, w, n, o: check_bmod(s, w, n)),
    'closed-forms': CheckEntry(3, lambda s, w, n, o: crosscheck_virasoro_closed_forms(s, w, n)),
    # extensions
    'tstar': CheckEntry(3, lambda s, w, n, o: check_tstar_lsa(s, w, o.get('action', 'bimodule'), n)),
    'double': CheckEntry(3, lambda s, w, n, o: check_double_lsa(s, w, o.get('action', 'bimodule'), n)),
    'deform': CheckEntry(3, lambda s, w, n, o: check_quasi_assoc(deform_product(s, _shift_or(o, 'rho')), w,
                                                                 'element', n)),
    'rho1': CheckEntry(2, lambda s, w, n, o: check_rho1_lift(
        s, w, o.get('x0', 1), o.get('component', 'primal'), o.get('tstar_action', 'printed'), n)),
    'rho2': CheckEntry(2, lambda s, w, n, o: check_rho2_compat(
        s, w, o.get('x0', 1), o.get('g', 0), o.get('mu', 0), o.get('nu', 0), o.get('double_action', 'printed'),
        n)),
    # finite and operator algebras
    'lk': CheckEntry(3, lambda s, w, n, o: lk_suite(w.hi, o.get('groups'), o.get('bremner_pmax', 2), n),
                     needs_spec=False),
    'burgers-table': CheckEntry(4, lambda s, w, n, o: lsa_table_check(_required(o, 'table', 'burgers'), n),
                                needs_spec=False),
}


def _required(options, key, check):
    if options.get(key) is None:
        raise ValueError(f"check {check!r} needs a {key} input")
    return options[key]


@dataclass
class Job:
    check: str
    window: object
    options: dict = field(default_factory=dict)

    @property
    def arity(self):
        if self.check == 'lk':
            groups = self.options.get('groups') or LK_GROUPS
            return 5 if 'filippov' in groups else 3
        return CHECKS[self.check].arity


@dataclass
class RunPlan:
    spec: Optional[object]
    jobs: List[Job]
    limit: Optional[int] = DEFAULT_LIMIT
    fmt: str = 'text'
    expectations: Dict[str, str] = field(default_factory=dict)
    workers: int = 1
    cache: Optional[str] = None

    def validate(self):
        if self.fmt not in FORMATS:
            raise ValueError(f"Unknown output format {self.fmt!r}")
        if not self.jobs:
            raise ValueError("No checks selected")
        if self.limit is not None and self.limit < 1:
            raise ValueError(f"--limit must be at least 1, got {self.limit}")
        for job in self.jobs:
            if job.check not in CHECKS:
                raise ValueError(f"Unknown check {job.check!r}; expected one of {', '.join(CHECKS)}")
            if CHECKS[job.check].needs_spec and self.spec is None:
                raise ValueError(f"check {job.check!r} needs an algebra (--config or --f)")
            cap = CAPS[job.arity]
            if job.window.size > cap:
                raise ValueError(f"Window {job.window} for {job.check!r} has {job.window.size} indices; "
                                 f"the limit for {job.arity}-index checks is {cap}")
        for verdict in self.expectations.values():
            if verdict not in VERDICTS:
                raise ValueError(f"Unknown expected verdict {verdict!r}")

    @property
    def spec_echo(self):
        return tuple(self.spec.echo) if self.spec is not None else ()


def parse_expectations(text):
    """'holds' applies to every report; 'lsa=fails,skew=holds' targets reports by name prefix."""
    if not text:
        return {}
    if '=' not in text:
        return {'*': text.strip()}
    expectations = {}
    for item in text.split(','):
        if '=' not in item:
            raise ValueError(f"Expected 'check=verdict', got {item!r}")
        name, verdict = (part.strip() for part in item.split('=', 1))
        expectations[name] = verdict
    return expectations


def _matches(report_name, key):
    return key == '*' or report_name == key or report_name.startswith(key + '-')


# Serialization -------------------------------------------------------------------

def report_to_dict(report):
    if isinstance(report, dict):
        return report
    return {
        'check': report.check_name,
        'window': report.window.to_json(),
        'verdict': report.verdict,
        'tuples_checked': report.tuples_checked,
        'counterexamples': [{'indices': list(indices), 'residual': residual.to_json()}
                            for indices, residual in report.counterexamples],
        'undefined_points': [list(indices) for indices in report.undefined_points],
        'failures': report.failures,
        'notes': list(report.notes),
    }


REPORT_KEYS = ('check', 'window', 'verdict', 'tuples_checked', 'counterexamples', 'undefined_points')


def report_to_json(report):
    data = report_to_dict(report)
    return {key: data[key] for key in REPORT_KEYS}


def _residual_text(residual):
    terms = residual.get('terms', {})
    parts = [f"{c}*e_{x}" for x, c in terms.items()]
    if residual.get('theta', '0') != '0':
        parts.append(f"{residual['theta']}*theta")
    text = ' + '.join(parts) if parts else '0'
    if 'dual' in residual:
        text = f"({text}, {_residual_text(residual['dual'])})"
    return text


def render_report(report, fmt='text'):
    data = report_to_dict(report)
    if fmt == 'json':
        return json.dumps(report_to_json(data), indent=2)
    window = data['window']
    poles = len(data['undefined_points'])
    line = (f"{data['check']} on [{window['lo']},{window['hi']}]: "
            f"{data['verdict'].upper()} ({data['tuples_checked']} tuples, {poles} poles)")
    lines = [line]
    if data['counterexamples']:
        first = data['counterexamples'][0]
        lines.append(f"  first counterexample at {tuple(first['indices'])}: {_residual_text(first['residual'])}")
        more = data.get('failures', len(data['counterexamples'])) - 1
        if more > 0:
            lines.append(f"  ... and {more} more failing tuples")
    lines.extend(f"  note: {note}" for note in data.get('notes', []))
    return '\n'.join(lines)


def render_run(spec_echo, reports, fmt='text'):
    if fmt == 'json':
        document = {
            'artifact_version': __version__,
            'spec_echo': dict(spec_echo),
            'reports': [report_to_json(r) for r in reports],
        }
        return json.dumps(document, indent=2)
    lines = []
    if spec_echo:
        lines.append('algebra: ' + ', '.join(f"{key} = {value}" for key, value in spec_echo))
    lines.extend(render_report(r, 'text') for r in reports)
    return '\n'.join(lines)


def exit_code(reports, expectations):
    code = EXIT_OK
    for report in reports:
        data = report_to_dict(report)
        for key, verdict in expectations.items():
            if _matches(data['check'], key) and data['verdict'] != verdict:
                logger.warning(f"❗ {data['check']}: expected {verdict}, got {data['verdict']}")
                code = EXIT_UNEXPECTED
    return code


# Execution -----------------------------------------------------------------------

def execute_job(spec, job, limit):
    """Run one job; returns serialized reports so results travel cheaply between processes."""
    entry = CHECKS[job.check]
    return [report_to_dict(r) for r in _as_list(entry.runner(spec, job.window, limit, job.options))]


def _describe(value):
    if isinstance(value, (list, tuple)):
        return ','.join(map(str, value))
    if hasattr(value, 'to_text'):
        return value.to_text()
    if hasattr(value, 'C'):
        return format_table(value)
    return repr(value)


def run_reports(plan):
    """Execute every job of a validated plan; reports come back in plan order."""
    cache = ReportCache(plan.cache) if plan.cache else None
    keys = [fingerprint(plan.spec_echo, job.check, job.window, plan.limit,
                        {k: _describe(v) for k, v in job.options.items()}) for job in plan.jobs]

    pending = [n for n, key in enumerate(keys) if cache is None or key not in cache]
    if cache is not None and len(pending) < len(keys):
        logger.info(f"💾 {len(keys) - len(pending)} of {len(keys)} checks served from {plan.cache}")
    results = run_jobs(execute_job, [(plan.spec, plan.jobs[n], plan.limit) for n in pending], plan.workers)

    computed = dict(zip(pending, results))
    reports = []
    for n, key in enumerate(keys):
        if n in computed:
            if cache is not None:
                cache[key] = computed[n]
            reports.extend(computed[n])
        else:
            reports.extend(cache[key])
    return reports


def run(plan):
    """Returns (exit code, rendered output)."""
    try:
        plan.validate()
        reports = run_reports(plan)
    except (ValueError, OSError, MissingSupport) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INPUT, ''
    except RuntimeError as e:
        logger.error(f"A worker failed: {e}")
        return EXIT_INPUT, ''
    code = exit_code(reports, plan.expectations)
    summary = ', '.join(f"{r['check']}={r['verdict']}" for r in reports)
    logger.info(f"🏁 {len(reports)} reports: {summary}")
    return code, render_run(plan.spec_echo, reports, plan.fmt)


# Consolidation of saved runs -----------------------------------------------------

def collect_report_rows(input_directory):
    rows = []
    file_count = 0
    for root, dirs, files in os.walk(input_directory):
        dirs.sort()
        for file in sorted(files):
            if not file.endswith('.json'):
                continue
            file_path = os.path.join(root, file)
            try:
                with open(file_path, 'r', encoding='utf-8') as json_file:
                    data = json.load(json_file)
            except json.JSONDecodeError as e:
                logger.warning(f"⚠️ Skipping {file_path}: {e}")
                continue
            if not isinstance(data, dict):
                continue
            reports = data.get('reports', [data] if 'verdict' in data else [])
            for report in reports:
                rows.append({
                    'file': os.path.relpath(file_path, input_directory),
                    'artifact_version': data.get('artifact_version', 'NA'),
                    'check': report['check'],
                    'lo': report['window']['lo'],
                    'hi': report['window']['hi'],
                    'verdict': report['verdict'],
                    'tuples_checked': report['tuples_checked'],
                    'counterexamples': len(report['counterexamples']),
                    'poles': len(report['undefined_points']),
                })
            if reports:
                file_count += 1
    return rows, file_count


def consolidate(input_directory, output_file, fmt='tsv'):
    rows, file_count = collect_report_rows(input_directory)
    if not rows:
        raise ValueError(f"No reports found under {input_directory}")
    df = pd.DataFrame(rows)
    if fmt == 'tsv':
        df.to_csv(output_file, sep='\t', index=False)
    elif fmt == 'json':
        df.to_json(output_file, orient='records', indent=2)
    else:
        raise ValueError(f"Unknown consolidation format {fmt!r}")
    logger.info(f"📊 Consolidated {len(rows)} reports from {file_count} files into {output_file}")
    return df
