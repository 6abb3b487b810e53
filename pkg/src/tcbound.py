import argparse
import logging
import os
import sys
from datetime import datetime

import numpy as np
import pandas as pd
from tqdm import tqdm

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from bounds import InconsistentAssertionsError, analyze_map, analyze_space, nil_index, positive_part
from catalog import SPACE_NAMES, UnknownEntryError, builtin, entries
from cohomology import NotMultiplicativeError, cup_ring, diagonal_hom
from config_utils import apply_cfg, explicit_arg_dests, load_cfg
from exact_linalg import parse_field
from formats import complex_to_dict, resolve_input
from oracle import (
    MAX_KERNEL_DIM,
    OracleSizeError,
    brute_nil_check,
    catalog_pairs,
    kunneth_check,
    random_complex,
    ring_axioms_check,
)
from report import map_report, render, space_report, to_json
from simplicial import NotSurjectiveError, ParseError, SimplicialError


BLUE = '\033[94m'
ENDC = '\033[0m'

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_INCONSISTENT = 4
EXIT_NOT_SURJECTIVE = 5


def make_saving_folder_and_logger(args, timestamp):
    logger = logging.getLogger()
    logger.setLevel(args.log_level)

    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    handlers = [logging.StreamHandler(sys.stderr)]

    folder_path = None
    if getattr(args, 'save', None):
        source = (args.builtin or os.path.splitext(os.path.basename(args.input))[0]).replace(':', '-')
        folder_name = f'{args.command}_{source}_{timestamp}'
        folder_path = os.path.join(args.save, folder_name)
        os.makedirs(folder_path, exist_ok=True)
        handlers.append(logging.FileHandler(f'{folder_path}/log.txt'))

    for handler in handlers:
        handler.setLevel(args.log_level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return folder_path, logger, handlers


def print_init_msg(logger, args):
    logger.info(BLUE + 'Command: ' + ENDC + f'{args.command}')
    logger.info(BLUE + 'Input: ' + ENDC + f'{args.builtin or args.input}')
    logger.info(BLUE + 'Fields: ' + ENDC + f'{", ".join(args.fields)}')
    logger.info(BLUE + 'Assertions: ' + ENDC + f'{", ".join(args.assertions or []) or "none"}')
    logger.info(BLUE + 'Format: ' + ENDC + f'{args.format}')
    logger.info(BLUE + 'Profile: ' + ENDC + f'{args.profile}')


def delete_special_tokens(file_path):
    with open(file_path, 'r', encoding='utf-8') as file:
        content = file.read()
    content = content.replace(BLUE, '')
    content = content.replace(ENDC, '')
    with open(file_path, 'w', encoding='utf-8') as file:
        file.write(content)


def parse_fields(names):
    try:
        fields = [parse_field(name) for name in names]
    except ValueError as e:
        raise ParseError(str(e)) from e
    return list(dict.fromkeys(fields))


def cmd_space(args):
    fields = parse_fields(args.fields)
    entry = resolve_input(args.builtin, args.input, 'space', args.assertions or ())
    analysis = analyze_space(entry.model, fields, entry.assertions, entry.known)
    return space_report(entry, analysis, rings=args.rings)


def cmd_map(args):
    fields = parse_fields(args.fields)
    entry = resolve_input(args.builtin, args.input, 'map', args.assertions or ())
    analysis = analyze_map(
        entry.model, fields, entry.assertions,
        domain_known=entry.domain.known, codomain_known=entry.codomain.known, known=entry.known,
    )
    return map_report(entry, analysis, rings=args.rings)


def _known_text(entry):
    return '; '.join(f'{k}={v.value} ({v.citation})' for k, v in entry.known.items())


def catalog_table():
    rows = []
    for e in entries():
        if e.kind == 'space':
            model = e.model
            shape = f'dim {model.dim}, f={list(model.f_vector)}, chi={model.euler_characteristic}'
            tokens = e.assertions.tokens()
        else:
            shape = f'{e.domain.name} -> {e.codomain.name}'
            tokens = e.assertions.map.tokens()
        rows.append({
            'name': e.name,
            'kind': e.kind,
            'model': shape,
            'assertions': ', '.join(tokens),
            'known': _known_text(e),
        })
    return pd.DataFrame(rows, columns=['name', 'kind', 'model', 'assertions', 'known'])


def catalog_show(name):
    try:
        e = builtin(name)
    except UnknownEntryError as err:
        raise ParseError(str(err.args[0])) from err
    if e.kind == 'space':
        doc = complex_to_dict(e.model)
        doc.update({
            'kind': 'space',
            'dim': e.model.dim,
            'euler_characteristic': e.model.euler_characteristic,
            'assertions': e.assertions.tokens(),
            'known': {k: {'value': v.value, 'citation': v.citation} for k, v in e.known.items()},
        })
        return doc
    f = e.model
    return {
        'name': e.name,
        'kind': 'map',
        'domain': e.domain.name,
        'codomain': e.codomain.name,
        'surjective': f.is_surjective,
        'vertex_map': dict(f.vertex_map),
        'assertions': e.assertions.map.tokens(),
        'known': {k: {'value': v.value, 'citation': v.citation} for k, v in e.known.items()},
    }


def _show_markdown(doc):
    lines = [f'# {doc["name"]} ({doc["kind"]})', '']
    if doc['kind'] == 'space':
        lines.append(f'dim {doc["dim"]}, Euler characteristic {doc["euler_characteristic"]}, '
                     f'{len(doc["vertices"])} vertices, {len(doc["facets"])} facets')
        lines += ['', 'facets:'] + [f'- {" ".join(s)}' for s in doc['facets']]
    else:
        lines.append(f'{doc["domain"]} -> {doc["codomain"]}, surjective: {doc["surjective"]}')
        table = pd.DataFrame(sorted(doc['vertex_map'].items()), columns=['vertex', 'image'])
        lines += ['', table.to_string(index=False)]
    lines += ['', f'assertions: {", ".join(doc["assertions"]) or "none"}']
    for k, v in doc['known'].items():
        lines.append(f'known {k} = {v["value"]}: {v["citation"]}')
    return '\n'.join(lines) + '\n'


def catalog_verify(fields, oracle_cfg, logger):
    """Ring axioms, Kunneth and brute-force nil over the whole catalog."""
    spaces = [builtin(n).model for n in SPACE_NAMES]
    failures = []
    checked = 0
    for X in tqdm(spaces, desc='ring axioms'):
        for F in fields:
            result = ring_axioms_check(cup_ring(X, F))
            checked += 1
            if not result.ok:
                failures.append(f'ring axioms {X.name}/{F}: {result.failure} at {result.offending}')

    rng = np.random.default_rng(int(oracle_cfg.get('seed', 12)))
    for _ in tqdm(range(int(oracle_cfg.get('random_complexes', 100))), desc='random complexes'):
        X = random_complex(rng)
        for F in fields:
            result = ring_axioms_check(cup_ring(X, F))
            checked += 1
            if not result.ok:
                failures.append(f'ring axioms {X.facets}/{F}: {result.failure}')

    pairs = catalog_pairs(spaces, int(oracle_cfg.get('max_product_simplices', 10 ** 4)))
    for X, Y in tqdm(pairs, desc='kunneth'):
        for F in fields:
            report = kunneth_check(X, Y, F)
            checked += 1
            if not report.equal:
                failures.append(f'kunneth {X.name} x {Y.name}/{F}: {report.product_dims} vs {report.tensor_dims}')

    guard = int(oracle_cfg.get('max_kernel_dim', MAX_KERNEL_DIM))
    f2 = [F for F in fields if F.p == 2]
    for X in tqdm(spaces if f2 else [], desc='brute-force nil'):
        F = f2[0]
        hom = diagonal_hom(X, F)
        R = cup_ring(X, F)
        for ring, K in ((hom.source, hom.kernel()), (R, positive_part(R))):
            if K.shape[0] > guard:
                logger.info(f'skipping brute-force nil for {X.name}: kernel dimension {K.shape[0]}')
                continue
            engine, brute = nil_index(ring, K).value, brute_nil_check(ring, K, guard).value
            checked += 1
            if engine != brute:
                failures.append(f'nil {X.name}: engine {engine} vs oracle {brute}')
    return checked, failures


def cmd_catalog(args, logger):
    fields = parse_fields(args.fields)
    if args.action == 'list':
        table = catalog_table()
        if args.format == 'json':
            return to_json(table.to_dict(orient='records')), EXIT_OK
        return table.to_string(index=False) + '\n', EXIT_OK
    if args.action == 'show':
        if not args.name:
            raise ParseError('catalog show needs an entry name')
        doc = catalog_show(args.name)
        return (to_json(doc) if args.format == 'json' else _show_markdown(doc)), EXIT_OK
    oracle_cfg = load_cfg(args.profile, 'oracle')
    checked, failures = catalog_verify(fields, oracle_cfg, logger)
    for failure in failures:
        logger.error(failure)
    summary = {'checked': checked, 'failures': failures}
    text = to_json(summary) if args.format == 'json' else f'{checked} checks, {len(failures)} failures\n'
    return text, EXIT_FAILURE if failures else EXIT_OK


def run(args, logger):
    """Dispatch one command; returns (report text, exit code)."""
    try:
        if args.command == 'catalog':
            return cmd_catalog(args, logger)
        doc = cmd_space(args) if args.command == 'space' else cmd_map(args)
        return render(doc, args.format), EXIT_OK
    except NotSurjectiveError as e:
        logger.error(f'{e}')
        return None, EXIT_NOT_SURJECTIVE
    except InconsistentAssertionsError as e:
        logger.error(f'inconsistent assertions: {e}')
        return None, EXIT_INCONSISTENT
    except (ParseError, UnknownEntryError) as e:
        logger.error(f'parse error: {e}')
        return None, EXIT_PARSE
    except SimplicialError as e:
        logger.error(f'validation error: {e}')
        return None, EXIT_INVALID
    except (NotMultiplicativeError, OracleSizeError) as e:
        logger.error(f'internal check failed: {e}')
        return None, EXIT_FAILURE


def build_parser():
    parser = argparse.ArgumentParser(prog='tcbound', description='certified bounds for TC(f), TC(X), cat(X), sec(f)')
    parser.add_argument('--profile', default='default', type=str, help='section of config.yaml to read defaults from')
    parser.add_argument('--log_level', default='INFO', type=str.upper, help='logging level')
    sub = parser.add_subparsers(dest='command', required=True)

    for command in ('space', 'map'):
        p = sub.add_parser(command, help=f'analyse a {command}')
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument('--builtin', default=None, type=str, help='catalog entry name')
        source.add_argument('--input', default=None, type=str, help=f'{command} file (YAML)')
        p.add_argument('--field', dest='fields', action='append', default=None, type=str,
                       help='coefficient field q or f<p>, repeatable')
        p.add_argument('--assert', dest='assertions', action='append', default=None, type=str,
                       help='homotopy-level assertion, repeatable')
        p.add_argument('--format', default='markdown', choices=['markdown', 'json'], help='report format')
        p.add_argument('--rings', action='store_true', help='include cohomology ring structure constants')
        p.add_argument('--save', default=None, type=str, help='folder for the report and log.txt')

    p = sub.add_parser('catalog', help='list, show or verify catalog entries')
    p.add_argument('action', choices=['list', 'show', 'verify'])
    p.add_argument('name', nargs='?', default=None)
    p.add_argument('--field', dest='fields', action='append', default=None, type=str,
                   help='coefficient field q or f<p>, repeatable')
    p.add_argument('--format', default='markdown', choices=['markdown', 'json'], help='output format')
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)

    cfg = load_cfg(args.profile, args.command)
    apply_cfg(parser, args, cfg, explicit_arg_dests(parser, argv))
    for key in ('builtin', 'input', 'assertions', 'save'):
        if not hasattr(args, key):
            setattr(args, key, None)
    if not args.fields:
        args.fields = ['q']

    timestamp = datetime.now().strftime('%Y-%m-%d_%H-%M-%S')
    folder_path, logger, handlers = make_saving_folder_and_logger(args, timestamp)
    try:
        if args.command != 'catalog':
            print_init_msg(logger, args)
        text, code = run(args, logger)
        if text is not None:
            sys.stdout.write(text)
            if folder_path:
                suffix = 'json' if args.format == 'json' else 'md'
                with open(os.path.join(folder_path, f'report.{suffix}'), 'w', encoding='utf-8') as f:
                    f.write(text)
                logger.info(f'report saved to {folder_path}')
        return code
    finally:
        for handler in handlers:
            logging.getLogger().removeHandler(handler)
            handler.close()
        if folder_path:
            delete_special_tokens(os.path.join(folder_path, 'log.txt'))


if __name__ == '__main__':
    sys.exit(main())
