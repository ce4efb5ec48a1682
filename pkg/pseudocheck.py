"""Main script to build and verify Lie pseudoalgebras and their modules."""

import json
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'scripts'))

from core_data import EXIT_FAILURE, EXIT_INPUT, SpecFormatError
from cli_commands import COMMANDS, parse_job


def show_help():
    """Show help message."""
    print("""
Lie Pseudoalgebra Checker

Usage:
  python pseudocheck.py <command> [flags]

Commands:
  validate         Lie axioms, traceform and symplectic data of an algebra file
  verify-algebra   Skew-symmetry and Jacobi identity of the pseudoalgebra in an algebra file
  verify-module    Action axiom and Fourier modes of a module file (twist obstruction if twisted)
  admissible-t     Admissible twist parameters t for an H-type pair
  singular         Singular vectors and kernel of a module up to --degree
  properties       Seeded randomized Hopf and admissible-difference suites
  all              Run the sweep over specs/ (default)
  --help           Show this help message

Flags:
  --algebra FILE   Algebra JSON (brackets, optional subalgebra_split, chi, omega, pseudo)
  --module FILE    Module JSON (rep, optional twist)
  --degree D       Degree bound for solvers and random elements (default 2)
  --seed S         Seed for randomized suites (default 0)
  --json OUT       Also write the report as JSON

Environment:
  PSEUDOALG_THREADS   Worker processes for verification loops (default 1)

Exit codes:
  0 all checks pass, 1 mathematical failure, 2 input error

Examples:
  python pseudocheck.py validate --algebra specs/heisenberg.json
  python pseudocheck.py verify-algebra --algebra specs/heisenberg_W.json
  python pseudocheck.py verify-module --algebra specs/abelian_2_3_H.json --module specs/twist_d1_heisenberg_rep.json
  python pseudocheck.py singular --algebra specs/abelian_2_3_H.json --module specs/twist_d1_sp_rep.json --degree 3
""")


def run(argv):
    """Dispatch argv (without the program name); returns the exit code."""
    command = argv[0].lower() if argv else 'all'
    if command in ['--help', '-h']:
        show_help()
        return 0
    if command not in COMMANDS:
        print(f"Unknown command: {command}")
        print("Run 'python pseudocheck.py --help' for usage information.")
        return EXIT_INPUT
    try:
        job = parse_job(command, argv[1:])
        return COMMANDS[command](job)
    except (SpecFormatError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"\n❌ Input error: {e}")
        return EXIT_INPUT
    except ValueError as e:
        print(f"\n❌ {type(e).__name__}: {e}")
        return EXIT_FAILURE
    except Exception as e:
        print(f"\n❌ Error running {command}: {e}")
        import traceback
        traceback.print_exc()
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
