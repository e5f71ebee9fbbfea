#!/usr/bin/env python3
"""
mtcf: exact modular data workbench

Usage:
    mtcf [mtcf args] <command> [command args]

mtcf arguments:
    -h, --help      Show this help message
    -j, --jobs N    Maximum worker processes (default: MTCF_THREADS or CPU count)
    -v, --verbose   Debug logging
    -q, --quiet     Only warnings and errors

Commands:
    build [input.json | --input input.json | --rank28 h|e] [--out data.json]
    validate data.json [--out report.json]
    fuse data.json [--out ring.json]
    grade data.json
    condense data.json [--boson auto|LABEL] [--domain adjoint|centralizer] [--no-resolve] [--out report.json]
    su3 --level K [--component full|psu] [--out file.json]
    compare ringA.json ringB.json [--dims] [--twists] [--first]
    compare-data A.json B.json
    galois data.json --k K [--out data.json]
    enumerate --family z2z2|z4 [--out list.json | --out dir/]
    pipeline-theorem [--variant h|e|both] [--out report.json]
    pipeline-sixteen [--out report.json]

Documents are JSON and written to stdout unless --out is given.
enumerate writes one modular-data document per data set when --out names a
directory or ends with a slash.
Exit codes: 0 success, 1 mathematical failure, 2 usage or IO error.
"""

import os
import sys
import json
import traceback
from typing import Any, Callable, Dict, List, Optional, Tuple

from .category import serial
from .category.condense import NoSolutionError, SearchBudgetExceeded, condense
from .category.gidata import GIConditionError, build_gi_data, enumerate_small, rank28_input
from .category.modular import (
    ModularData, NotModularError, galois_conjugate_data, grading_components, validate_modular, verlinde_fusion,
)
from .category.rings import find_ring_iso, match_modular_data
from .category.su3k import psu3_component, psu3_data, su3_ring
from .pipelines import run_pipeline_sixteen, run_pipeline_theorem
from .system.logger import mlog
from .system.param import Settings, thread_count
from .system.pipeline import StageError
from .version import __version__

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    """Bad command line."""


MTCF_ARGS = [
    {'flags': ['-h', '--help'], 'key': 'help', 'action': 'store_true'},
    {'flags': ['-j', '--jobs'], 'key': 'threads', 'action': 'store', 'type': int, 'default': None},
    {'flags': ['-v', '--verbose'], 'key': 'verbose', 'action': 'store_true'},
    {'flags': ['-q', '--quiet'], 'key': 'quiet', 'action': 'store_true'},
]


def _parse_table(table: List[Dict[str, Any]], args: List[str], stop_at_positional: bool) -> Tuple[Dict[str, Any], List[str], List[str]]:
    """Parse flags described by `table`; returns (values, positionals, rest)."""
    values: Dict[str, Any] = {}
    flag_map = {}
    for arg_def in table:
        for flag in arg_def['flags']:
            flag_map[flag] = arg_def
        if 'default' in arg_def:
            values[arg_def['key']] = arg_def['default']
        elif arg_def['action'] == 'store_true':
            values[arg_def['key']] = False

    positionals: List[str] = []
    i = 0
    while i < len(args):
        arg = args[i]
        name = arg.split('=', 1)[0]
        if name in flag_map:
            arg_def = flag_map[name]
            key = arg_def['key']
            if arg_def['action'] == 'store_true':
                values[key] = True
                i += 1
                continue
            if '=' in arg:
                _, value = arg.split('=', 1)
                i += 1
            elif i + 1 < len(args):
                value = args[i + 1]
                i += 2
            else:
                raise UsageError(f"{arg} requires a value")
            try:
                values[key] = arg_def.get('type', str)(value)
            except ValueError:
                raise UsageError(f"{name} expects {arg_def.get('type', str).__name__}, got {value!r}") from None
            if 'choices' in arg_def and values[key] not in arg_def['choices']:
                raise UsageError(f"{name} must be one of {arg_def['choices']}, got {values[key]!r}")
        elif arg.startswith('-') and arg != '-':
            raise UsageError(f"Unknown option {arg}")
        else:
            if stop_at_positional:
                return values, [arg], args[i + 1:]
            positionals.append(arg)
            i += 1
    return values, positionals, []


def parse_mtcf_args(args: List[str]) -> Tuple[Dict[str, Any], Optional[str], List[str]]:
    values, command, rest = _parse_table(MTCF_ARGS, args, stop_at_positional=True)
    return values, (command[0] if command else None), rest


# -- command helpers ---------------------------------------------------------------

def _emit(doc: Dict[str, Any], out: Optional[str]) -> None:
    if out:
        serial.write_document(out, doc)
        mlog.info(f"wrote {doc.get('kind')} to {out}")
    else:
        sys.stdout.write(serial.dumps(doc))


def _positionals(opts: Dict[str, Any], count: int, names: str) -> List[str]:
    pos = opts['_positional']
    if len(pos) != count:
        raise UsageError(f"expected {names}, got {pos}")
    return pos


def _load_data(path: str) -> ModularData:
    return serial.read_document(path, "modular-data")


# -- commands -----------------------------------------------------------------------

def cmd_build(opts: Dict[str, Any], settings: Settings) -> int:
    pos = opts['_positional']
    sources = [s for s in (opts['input'], *pos) if s]
    if opts['rank28']:
        if sources:
            raise UsageError("give either an input file or --rank28, not both")
        inp = rank28_input(opts['rank28'])
    elif len(sources) == 1:
        inp = serial.read_document(sources[0], "gi-input")
    elif sources:
        raise UsageError(f"build takes one input file, got {sources}")
    else:
        raise UsageError("build needs an input file or --rank28 h|e")
    _emit(serial.modular_to_json(build_gi_data(inp)), opts['out'])
    return EXIT_OK


def cmd_validate(opts: Dict[str, Any], settings: Settings) -> int:
    (path,) = _positionals(opts, 1, "data.json")
    report = validate_modular(_load_data(path))
    _emit(serial.validation_to_json(report), opts['out'])
    return EXIT_OK if report.overall else EXIT_FAILURE


def cmd_fuse(opts: Dict[str, Any], settings: Settings) -> int:
    (path,) = _positionals(opts, 1, "data.json")
    _emit(serial.ring_to_json(verlinde_fusion(_load_data(path))), opts['out'])
    return EXIT_OK


def cmd_grade(opts: Dict[str, Any], settings: Settings) -> int:
    (path,) = _positionals(opts, 1, "data.json")
    grading = grading_components(_load_data(path))
    body = {
        "generator": serial.label_to_json(grading.generator),
        "order": grading.order,
        "components": {str(t): [serial.label_to_json(l) for l in members] for t, members in grading.components.items()},
    }
    _emit(serial.report_document("grading", body), opts['out'])
    return EXIT_OK


def cmd_condense(opts: Dict[str, Any], settings: Settings) -> int:
    (path,) = _positionals(opts, 1, "data.json")
    data = _load_data(path)
    boson = None if opts['boson'] == 'auto' else opts['boson']
    report = condense(data, boson, opts['domain'], not opts['no_resolve'],
                      thread_count(settings), settings.get_int("search_budget"))
    _emit(serial.condensation_to_json(report), opts['out'])
    return EXIT_OK


def cmd_su3(opts: Dict[str, Any], settings: Settings) -> int:
    if opts['level'] is None:
        raise UsageError("su3 needs --level K")
    k = opts['level']
    if opts['component'] == 'psu':
        ring = psu3_component(k)
        body = {"level": k, "component": "psu", "ring": serial.ring_to_json(ring, True)}
        if k % 3:
            body["modular_data"] = serial.modular_to_json(psu3_data(k))
    else:
        body = {"level": k, "component": "full", "ring": serial.ring_to_json(su3_ring(k), True)}
    _emit(serial.report_document("su3", body), opts['out'])
    return EXIT_OK


def cmd_compare(opts: Dict[str, Any], settings: Settings) -> int:
    a, b = _positionals(opts, 2, "ringA.json ringB.json")
    ring_a, ring_b = serial.read_document(a, "fusion-ring"), serial.read_document(b, "fusion-ring")
    isos = find_ring_iso(ring_a, ring_b, opts['dims'], opts['twists'], opts['first'], thread_count(settings))
    _emit(serial.report_document("ring-comparison", {"isomorphisms": [list(s) for s in isos]}), opts['out'])
    return EXIT_OK if isos else EXIT_FAILURE


def cmd_compare_data(opts: Dict[str, Any], settings: Settings) -> int:
    a, b = _positionals(opts, 2, "A.json B.json")
    sigma = match_modular_data(_load_data(a), _load_data(b))
    _emit(serial.report_document("data-comparison", {"permutation": list(sigma) if sigma else None}), opts['out'])
    return EXIT_OK if sigma is not None else EXIT_FAILURE


def cmd_galois(opts: Dict[str, Any], settings: Settings) -> int:
    (path,) = _positionals(opts, 1, "data.json")
    if opts['k'] is None:
        raise UsageError("galois needs --k K")
    _emit(serial.modular_to_json(galois_conjugate_data(_load_data(path), opts['k'])), opts['out'])
    return EXIT_OK


def cmd_enumerate(opts: Dict[str, Any], settings: Settings) -> int:
    family, out = opts['family'], opts['out']
    found = enumerate_small(family, thread_count(settings))
    if out and (os.path.isdir(out) or out.endswith(("/", os.sep))):
        os.makedirs(out, exist_ok=True)
        paths = []
        for i, data in enumerate(found):
            path = os.path.join(out, f"{family}_{i:02d}.json")
            serial.write_document(path, serial.modular_to_json(data))
            paths.append(path)
        mlog.info(f"wrote {len(paths)} modular-data documents to {out}")
        body = {"family": family, "count": len(found), "files": paths}
        sys.stdout.write(serial.dumps(serial.report_document("enumeration", body)))
        return EXIT_OK
    body = {"family": family, "count": len(found), "data": [serial.modular_to_json(d) for d in found]}
    _emit(serial.report_document("enumeration", body), out)
    return EXIT_OK


def cmd_pipeline_theorem(opts: Dict[str, Any], settings: Settings) -> int:
    variants = ("h", "e") if opts['variant'] == 'both' else (opts['variant'],)
    report = run_pipeline_theorem(variants, thread_count(settings), settings.get_int("search_budget"))
    _emit(report, opts['out'])
    return EXIT_OK if report["passed"] else EXIT_FAILURE


def cmd_pipeline_sixteen(opts: Dict[str, Any], settings: Settings) -> int:
    report = run_pipeline_sixteen(thread_count(settings))
    _emit(report, opts['out'])
    return EXIT_OK if report["passed"] else EXIT_FAILURE


OUT = {'flags': ['-o', '--out'], 'key': 'out', 'action': 'store', 'default': None}

COMMANDS: Dict[str, Tuple[Callable[[Dict[str, Any], Settings], int], List[Dict[str, Any]]]] = {
    'build': (cmd_build, [
        OUT,
        {'flags': ['-i', '--input'], 'key': 'input', 'action': 'store', 'default': None},
        {'flags': ['--rank28'], 'key': 'rank28', 'action': 'store', 'default': None, 'choices': ['h', 'e']},
    ]),
    'validate': (cmd_validate, [OUT]),
    'fuse': (cmd_fuse, [OUT]),
    'grade': (cmd_grade, [OUT]),
    'condense': (cmd_condense, [
        OUT,
        {'flags': ['--boson'], 'key': 'boson', 'action': 'store', 'default': 'auto'},
        {'flags': ['--domain'], 'key': 'domain', 'action': 'store', 'default': 'adjoint', 'choices': ['adjoint', 'centralizer']},
        {'flags': ['--no-resolve'], 'key': 'no_resolve', 'action': 'store_true'},
    ]),
    'su3': (cmd_su3, [
        OUT,
        {'flags': ['--level'], 'key': 'level', 'action': 'store', 'type': int, 'default': None},
        {'flags': ['--component'], 'key': 'component', 'action': 'store', 'default': 'full', 'choices': ['full', 'psu']},
    ]),
    'compare': (cmd_compare, [
        OUT,
        {'flags': ['--dims'], 'key': 'dims', 'action': 'store_true'},
        {'flags': ['--twists'], 'key': 'twists', 'action': 'store_true'},
        {'flags': ['--first'], 'key': 'first', 'action': 'store_true'},
    ]),
    'compare-data': (cmd_compare_data, [OUT]),
    'galois': (cmd_galois, [OUT, {'flags': ['--k'], 'key': 'k', 'action': 'store', 'type': int, 'default': None}]),
    'enumerate': (cmd_enumerate, [OUT, {'flags': ['--family'], 'key': 'family', 'action': 'store', 'default': 'z2z2', 'choices': ['z2z2', 'z4']}]),
    'pipeline-theorem': (cmd_pipeline_theorem, [OUT, {'flags': ['--variant'], 'key': 'variant', 'action': 'store', 'default': 'both', 'choices': ['h', 'e', 'both']}]),
    'pipeline-sixteen': (cmd_pipeline_sixteen, [OUT]),
}

MATH_ERRORS = (StageError, NotModularError, GIConditionError, NoSolutionError, SearchBudgetExceeded)


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        mtcf_args, command, rest = parse_mtcf_args(args)
    except UsageError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if mtcf_args['verbose']:
        mlog.set_level("DEBUG")
    elif mtcf_args['quiet']:
        mlog.set_level("WARNING")

    if mtcf_args['help'] or command is None:
        print(__doc__)
        return EXIT_OK if mtcf_args['help'] else EXIT_USAGE
    if command not in COMMANDS:
        print(f"Error: unknown command '{command}'", file=sys.stderr)
        return EXIT_USAGE

    settings = Settings.default() + {"threads": mtcf_args['threads']}
    mlog.debug(f"mtcf {__version__}, Python {sys.version}")
    handler, table = COMMANDS[command]
    try:
        opts, positionals, _ = _parse_table(table, rest, stop_at_positional=False)
        opts['_positional'] = positionals
        if mtcf_args['threads'] is not None and mtcf_args['threads'] < 1:
            raise UsageError("Number of jobs must be at least 1")
        return handler(opts, settings)
    except (UsageError, serial.SchemaError, OSError, json.JSONDecodeError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MATH_ERRORS as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        mlog.debug(traceback.format_exc())
        return EXIT_FAILURE
    except KeyboardInterrupt:
        return EXIT_FAILURE
    except Exception as e:
        print(f"Error running '{command}': {type(e).__name__}: {e}", file=sys.stderr)
        mlog.debug(traceback.format_exc())
        return EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == '__main__':
    main()
