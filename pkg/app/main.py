"""
Command-line entry point
File: app/main.py

    python -m app.main build so-split --n 3
    python -m app.main reproduce-paper --family g2 --seed 7 --trials 10000 --pretty

Exit codes: 0 all checks pass, 1 a verified property failed, 2 malformed input.
"""

from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple
import argparse
import json
import logging
import sys

from pydantic import ValidationError

from core.exact_linalg import Subspace, fraction_to_str
from core.exceptions import InputError, NotBracketGeneratingError
from models.algebra_base import GradedLieAlgebra, NilpotentGradedAlgebra
from services.algebra_service import default_service, validate
from services.cohomology_service import (
    class_coordinates, class_from_coordinates, class_stabilizer_dim, cohomology_dims,
    h1_negative_test, max_stabilizer_probe,
)
from services.distribution_service import (
    Rank4Type, classify_rank4, genericity_test, growth_vector_at, symbol_at,
)
from services.reproduction_service import ReproductionService
from services.prolongation_service import compare_with_algebra, tanaka_prolong
from services.report_service import ReportService
from services.subalgebra_service import (
    gap_scan, subspace_stabilizer_dim, verify_subalgebra, witness_bk, witness_catalog,
)
from utils.logging_setup import setup_logging
from utils.serialization import (
    AlgebraDocument, ClassDocument, CohomologyTable, FieldsDocument, RunConfig, SubalgebraDocument,
    dumps, load_document, load_json, parse_rational,
)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

# random classes tried by the stabilizer probe on top of the highest weight vectors
PROBE_TRIALS = 20


# -- inputs ---------------------------------------------------------------------


def _family_params(config: RunConfig) -> Dict[str, int]:
    return {'n': config.n} if config.n is not None else {}


def load_algebra(config: RunConfig) -> GradedLieAlgebra:
    """Algebra from --input JSON or from a built-in family"""
    if config.input is not None:
        return load_document(AlgebraDocument, config.input).to_algebra()
    if config.family is None:
        raise InputError(f"{config.command} needs a family or --input algebra.json")
    return default_service().build(config.family, **_family_params(config))


def _load_a0(path: Path, n: GradedLieAlgebra) -> Subspace:
    """a0 as JSON rows of "p/q" strings, each a derivation flattened as s*dim + r"""
    data = load_json(path)
    rows = data.get('derivations') if isinstance(data, dict) else data
    if not isinstance(rows, list):
        raise InputError(f"{path} must hold a list of flattened derivations")
    size = n.dim * n.dim
    vectors = []
    for row in rows:
        if not isinstance(row, list) or len(row) != size:
            raise InputError(f"Each derivation needs {size} entries")
        vectors.append({i: parse_rational(c) for i, c in enumerate(row) if parse_rational(c)})
    return Subspace.from_vectors(vectors, size)


# -- subcommands ----------------------------------------------------------------


def cmd_build(config: RunConfig) -> Tuple[int, Dict]:
    if config.family is None:
        raise InputError("build needs a family")
    g = default_service().build(config.family, **_family_params(config))
    return EXIT_OK, AlgebraDocument.from_algebra(g).model_dump(exclude_none=True)


def cmd_check(config: RunConfig) -> Tuple[int, Dict]:
    g = load_algebra(config)
    report = validate(g)
    return (EXIT_OK if report.passed else EXIT_FAILED), report.to_dict()


def cmd_cohomology(config: RunConfig) -> Tuple[int, Dict]:
    g = load_algebra(config)
    q = 2 if config.q is None else config.q
    dims = cohomology_dims(g, q)
    if config.homogeneity is not None:
        dims = {h: d for h, d in dims.items() if h == config.homogeneity}
    table = CohomologyTable.from_dims(g.name, q, dims, h1_negative_test(g) if q == 1 else None)
    return EXIT_OK, table.model_dump(exclude_none=True)


def cmd_prolong(config: RunConfig) -> Tuple[int, Dict]:
    g = load_algebra(config)
    n = g if isinstance(g, NilpotentGradedAlgebra) else g.negative_part()
    a0 = _load_a0(config.a0, n) if config.a0 is not None else None
    result = tanaka_prolong(n, a0, config.max_degree)
    out = {'algebra': n.name, **result.to_dict()}
    if n is g:
        return EXIT_OK, out
    report = compare_with_algebra(result, g)
    out['comparison'] = report.to_dict()
    return (EXIT_OK if report.passed else EXIT_FAILED), out


def cmd_witness(config: RunConfig) -> Tuple[int, Dict]:
    if config.k is not None:
        if config.n is None:
            raise InputError("witness --k needs --n")
        witnesses = [witness_bk(config.n, config.k)]
    else:
        witnesses = witness_catalog(load_algebra(config))
    entries = []
    for b in witnesses:
        report = verify_subalgebra(b)
        entries.append({**b.to_dict(), 'closed': report.passed, 'report': report.to_dict()})
    passed = all(e['closed'] for e in entries)
    return (EXIT_OK if passed else EXIT_FAILED), {'witnesses': entries, 'passed': passed}


def cmd_stabilizer(config: RunConfig) -> Tuple[int, Dict]:
    g = load_algebra(config)
    mode = config.mode or 'probe'
    if mode == 'probe':
        probe = max_stabilizer_probe(g, seed=config.seed, trials=PROBE_TRIALS)
        x, y = class_coordinates(g, probe.witness)
        witness = ClassDocument(
            homogeneity=probe.witness.homogeneity,
            coords=[fraction_to_str(c) for c in x],
            imag=[fraction_to_str(c) for c in y] if probe.witness.is_complex else None,
        )
        return EXIT_OK, {
            'algebra': g.name,
            'best_dim': probe.best_dim,
            'candidates': probe.candidates,
            'certified_weights': probe.certified_weights,
            'witness': witness.model_dump(exclude_none=True),
        }
    if mode == 'subspace':
        if config.subspace is None:
            raise InputError("stabilizer --subspace needs a subspace file")
        doc = load_document(SubalgebraDocument, config.subspace)
        comps = doc.component_vectors(g)
        if len(comps) != 1:
            raise InputError("The subspace must lie in a single component")
        (degree, vectors), = comps.items()
        w = Subspace.from_vectors(vectors, g.dim)
        return EXIT_OK, {'algebra': g.name, 'degree': degree, 'subspace_dim': w.dim,
                         'stabilizer_dim': subspace_stabilizer_dim(g, degree, w)}
    if mode == 'class':
        if config.class_file is None:
            raise InputError("stabilizer --class needs a class file")
        doc = load_document(ClassDocument, config.class_file)
        coords = [parse_rational(c) for c in doc.coords]
        imag = [parse_rational(c) for c in doc.imag] if doc.imag else None
        cls = class_from_coordinates(g, doc.homogeneity, coords, imag)
        return EXIT_OK, {'algebra': g.name, 'homogeneity': doc.homogeneity,
                         'stabilizer_dim': class_stabilizer_dim(g, cls)}
    raise InputError(f"Unknown stabilizer mode {mode!r}")


def cmd_scan_gap(config: RunConfig) -> Tuple[int, Dict]:
    g = load_algebra(config)
    if config.forbidden is not None:
        forbidden = config.forbidden
    elif g.family is not None:
        forbidden = default_service().get_family(g.family).gap_interval(g.param('n'))
    else:
        raise InputError("scan-gap needs --forbidden LO HI for algebras outside the built-in families")
    scan = gap_scan(g, tuple(forbidden), trials=config.trials, seed=config.seed, workers=config.workers)
    return (EXIT_FAILED if scan['violations'] else EXIT_OK), scan


def cmd_analyze(config: RunConfig) -> Tuple[int, Dict]:
    if config.input is None:
        raise InputError("analyze needs --input fields.json")
    doc = load_document(FieldsDocument, config.input)
    fields = doc.to_fields()
    point = doc.point_values() or [Fraction(0)] * doc.vars
    if len(point) != doc.vars:
        raise InputError(f"Point has {len(point)} coordinates, expected {doc.vars}")
    growth = growth_vector_at(fields, point)
    out: Dict = {
        'growth': list(growth.dims),
        'bracket_generating': growth.bracket_generating,
        'capped': growth.capped,
    }
    try:
        symbol = symbol_at(fields, point)
    except NotBracketGeneratingError as e:
        logger.warning(str(e))
        return EXIT_FAILED, out
    out['symbol'] = AlgebraDocument.from_algebra(symbol.algebra).model_dump(exclude_none=True)
    out['symbol_dims'] = list(symbol.component_dims)
    code = EXIT_OK
    if config.genericity is not None:
        report = genericity_test(symbol, config.genericity)
        out['genericity'] = report.to_dict()
        code = EXIT_OK if report.passed else EXIT_FAILED
    if symbol.component_dims == (4, 3):
        kind = classify_rank4(symbol)
        out['rank4_type'] = kind.value
        if config.genericity == 'rank4' and kind == Rank4Type.NON_GENERIC:
            code = EXIT_FAILED
    return code, out


def cmd_reproduce(config: RunConfig) -> Tuple[int, Dict]:
    reproduction = ReproductionService(seed=config.seed, trials=config.trials, workers=config.workers)
    envelope = reproduction.process_family(config.family or 'all', config.n)
    if not envelope['success']:
        raise InputError(envelope['error'])
    result = envelope['result']
    if config.xlsx is not None:
        reports = ReportService()
        table = reports.reproduction_table(result['rows'])
        if not reports.export_to_excel({'Reproduction': table}, str(config.xlsx)):
            raise InputError(f"Could not write {config.xlsx}")
    return (EXIT_OK if result['passed'] else EXIT_FAILED), result


HANDLERS = {
    'build': cmd_build,
    'check': cmd_check,
    'cohomology': cmd_cohomology,
    'prolong': cmd_prolong,
    'witness': cmd_witness,
    'stabilizer': cmd_stabilizer,
    'scan-gap': cmd_scan_gap,
    'analyze': cmd_analyze,
    'reproduce-paper': cmd_reproduce,
}


# -- output ---------------------------------------------------------------------


def render(command: str, payload: Dict, pretty: bool) -> str:
    if not pretty:
        return dumps(payload)
    reports = ReportService()
    if command == 'reproduce-paper' and 'rows' in payload:
        table = reports.reproduction_table(payload['rows'])
        counts = reports.summary(table)
        footer = f"\n{counts['pass']} pass, {counts['fail']} fail, {counts['cited']} cited"
        return reports.render(table) + footer
    if command == 'scan-gap' and payload.get('histogram'):
        head = f"{payload['algebra']}: {payload['trials']} trials, forbidden {tuple(payload['forbidden'])}\n"
        tail = f"\nviolations: {len(payload['violations'])}"
        return head + reports.render(reports.histogram_table(payload['histogram'])) + tail
    if command == 'check' and 'checks' in payload:
        head = f"{payload['subject']}: {'pass' if payload['passed'] else 'FAIL'}\n"
        return head + reports.render(reports.checks_table(payload))
    if command == 'cohomology' and 'by_homogeneity' in payload:
        head = f"H^{payload['q']}({payload['algebra']}), total {payload['total']}\n"
        return head + reports.render(reports.cohomology_table(payload['by_homogeneity']))
    return json.dumps(json.loads(dumps(payload)), indent=2, sort_keys=True)


def run(config: RunConfig) -> Tuple[int, str]:
    """
    Execute one subcommand

    Returns:
        (exit code, text for stdout)
    """
    try:
        code, payload = HANDLERS[config.command](config)
    except (InputError, ValidationError, FileNotFoundError) as e:
        logger.error(f"{config.command}: {e}")
        return EXIT_INPUT, dumps({'error': str(e), 'command': config.command})
    text = render(config.command, payload, config.pretty)
    if config.output is not None:
        config.output.write_text(dumps(payload) + "\n")
    return code, text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='graded-lie-lab',
        description="Exact computations on graded Lie algebras and their distributions",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('family', nargs='?', help="built-in family: so-split, g2, sp6-split, sp21")
    common.add_argument('--family', dest='family_flag', help="same as the positional family ('all' for reproduce-paper)")
    common.add_argument('--n', type=int, help="size parameter of so-split")
    common.add_argument('--input', type=Path, help="algebra (or fields) JSON")
    common.add_argument('--output', type=Path, help="also write the JSON report here")
    common.add_argument('--seed', type=int, default=0)
    common.add_argument('--trials', type=int, default=10000)
    common.add_argument('--workers', type=int, default=1)
    common.add_argument('--pretty', action='store_true', help="human-readable output")
    common.add_argument('--verbose', action='store_true', help="debug logging on stderr")

    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('build', parents=[common], help="family + parameters -> algebra JSON")
    sub.add_parser('check', parents=[common], help="validate an algebra")

    p = sub.add_parser('cohomology', parents=[common], help="H^q(g_-, g) by homogeneity")
    p.add_argument('--q', type=int, default=2)
    p.add_argument('--homogeneity', type=int)

    p = sub.add_parser('prolong', parents=[common], help="Tanaka prolongation of g_-")
    p.add_argument('--max-degree', dest='max_degree', type=int)
    p.add_argument('--a0', type=Path, help="JSON list of flattened derivations spanning a0")

    p = sub.add_parser('witness', parents=[common], help="witness catalog or b^k")
    p.add_argument('--k', type=int)

    p = sub.add_parser('stabilizer', parents=[common], help="stabilizer dimensions in g_0")
    group = p.add_mutually_exclusive_group()
    group.add_argument('--probe', dest='mode', action='store_const', const='probe')
    group.add_argument('--subspace', type=Path, help="subalgebra JSON with a single component")
    group.add_argument('--class', dest='class_file', type=Path, help="class JSON")

    p = sub.add_parser('scan-gap', parents=[common], help="random search for gap violations")
    p.add_argument('--forbidden', type=int, nargs=2, metavar=('LO', 'HI'))

    p = sub.add_parser('analyze', parents=[common], help="growth, symbol and type of a distribution")
    p.add_argument('--genericity', choices=['so_n', 'g2', 'rank4'])

    p = sub.add_parser('reproduce-paper', parents=[common], help="expected vs computed table")
    p.add_argument('--xlsx', type=Path, help="export the table to a formatted workbook")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None}
    flag = values.pop('family_flag', None)
    if flag is not None:
        values['family'] = flag
    if values.get('subspace') is not None:
        values['mode'] = 'subspace'
    elif values.get('class_file') is not None:
        values['mode'] = 'class'
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        config = config_from_args(args)
    except ValidationError as e:
        print(dumps({'error': str(e), 'command': args.command}))
        return EXIT_INPUT
    code, text = run(config)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
