"""Core configuration and JSON helpers for the pseudoalgebra toolkit."""

import json
import os
from fractions import Fraction
from typing import Any, List, Union

# Configuration
ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OUTPUT_DIR = os.path.join(ROOT_DIR, "output")
SPECS_DIR = os.path.join(ROOT_DIR, "specs")

DEFAULT_DEGREE = 2
DEFAULT_SEED = 0

# Leg-degree bounds tried when re-expressing S(d, chi) brackets in the s_ab span
SOLVE_LEG_DEGREES = (2, 3)

# Worker processes for generator-triple verification loops
THREADS = max(1, int(os.environ.get('PSEUDOALG_THREADS', '1') or 1))

# Exit codes (stable contract)
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

# Random elements per algebra in the seeded Hopf identity checks
HOPF_SAMPLES = 50

# Nominal ell values of the primitive pseudoalgebras
ELL_BY_KIND = {
    'W': 1,
    'S': 2,
    'H': 2,
    'K': 2,
}


class SpecFormatError(ValueError):
    """Raised when a JSON input file does not match the expected layout."""


def ensure_directories():
    """Create necessary directories."""
    os.makedirs(OUTPUT_DIR, exist_ok=True)


def save_json(data, filepath):
    """Save data as JSON file."""
    directory = os.path.dirname(filepath)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(filepath, 'w') as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
    print(f"✓ Saved {filepath}")


def load_json(filepath):
    """Load a JSON spec file."""
    with open(filepath, 'r') as f:
        return json.load(f)


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """Parse a rational given as "p/q", "p" or an integer.

    Floats are rejected: every input must be exact.
    """
    if isinstance(value, bool):
        raise SpecFormatError(f"Not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SpecFormatError(f"Not a rational: {value!r}")
    raise SpecFormatError(f"Not a rational: {value!r}")


def format_rational(q) -> str:
    """Format a rational as "p/q" (or "p" when integral)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_vector(values: List[Any]) -> List[Fraction]:
    if not isinstance(values, list):
        raise SpecFormatError(f"Expected a list of rationals, got {values!r}")
    return [parse_rational(v) for v in values]


def parse_matrix(rows: List[List[Any]]) -> List[List[Fraction]]:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SpecFormatError(f"Expected a list of rows, got {rows!r}")
    return [parse_vector(r) for r in rows]


def format_vector(values) -> List[str]:
    return [format_rational(v) for v in values]


def format_matrix(rows) -> List[List[str]]:
    return [format_vector(r) for r in rows]


_TASK_CONTEXT = None
_TASK_FN = None


def _init_worker(fn, context):
    global _TASK_CONTEXT, _TASK_FN
    _TASK_FN = fn
    _TASK_CONTEXT = context


def _run_task(task):
    return _TASK_FN(_TASK_CONTEXT, task)


def run_tasks(fn, context, tasks):
    """Map fn(context, task) over tasks, in a process pool when THREADS > 1.

    fn must be a module-level function and context picklable.
    """
    tasks = list(tasks)
    if THREADS <= 1 or len(tasks) < 2:
        return [fn(context, task) for task in tasks]
    from multiprocessing import Pool
    with Pool(min(THREADS, len(tasks)), initializer=_init_worker, initargs=(fn, context)) as pool:
        return pool.map(_run_task, tasks)
