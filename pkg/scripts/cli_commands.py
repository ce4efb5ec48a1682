"""Command implementations for pseudocheck.py.

Each cmd_* prints a banner and progress lines, optionally writes a JSON
report and returns an exit code (EXIT_OK, EXIT_FAILURE). Input problems are
raised as SpecFormatError / FileNotFoundError and mapped to EXIT_INPUT by
the dispatcher.
"""

import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from core_data import (DEFAULT_DEGREE, DEFAULT_SEED, ensure_directories, EXIT_FAILURE, EXIT_OK, format_rational,
                       format_vector, HOPF_SAMPLES, load_json, parse_matrix, parse_rational, parse_vector,
                       OUTPUT_DIR, save_json, SPECS_DIR, SpecFormatError)
from htensor import format_tensor
from lie_core import (build_symplectic, check_traceform, LieAlgebra, lemma_equivalent_check,
                      rational_array, ShapeError, SubalgebraPair, SymplecticData, validate_lie)
from pmodules import (admissible_t_space, carrier_to_json, current_module, fourier_round_trip,
                      ker_solver, PseudoModule, RepSpec, singular_vectors, tensor_module,
                      twist_obstruction, twisted_module, verify_action)
from pseudoalg import (build_H, build_rank1, build_S, build_W, current_algebra, key_label,
                       PseudoAlgebra, verify_jacobi, verify_rank1_embedding, verify_skew, wedge_matrix)
from sparse import SparseVector
from uea_hopf import hopf_report, random_element, UEA

import instances

MAX_PRINTED_TERMS = 12

FLAGS = {'--algebra': 'algebra', '--module': 'module', '--degree': 'degree',
         '--seed': 'seed', '--json': 'json_out'}


@dataclass
class JobSpec:
    command: str
    algebra: Optional[str] = None
    module: Optional[str] = None
    degree: int = DEFAULT_DEGREE
    seed: int = DEFAULT_SEED
    json_out: Optional[str] = None


def parse_job(command: str, argv: List[str]) -> JobSpec:
    job = JobSpec(command)
    i = 0
    while i < len(argv):
        flag = argv[i]
        if flag not in FLAGS:
            raise SpecFormatError(f"Unknown flag: {flag}")
        if i + 1 >= len(argv):
            raise SpecFormatError(f"Flag {flag} needs a value")
        value = argv[i + 1]
        if flag in ('--degree', '--seed'):
            try:
                value = int(value)
            except ValueError:
                raise SpecFormatError(f"{flag} expects an integer, got {value!r}")
        setattr(job, FLAGS[flag], value)
        i += 2
    return job


def _require(job: JobSpec, name: str) -> str:
    path = getattr(job, name)
    if not path:
        raise SpecFormatError(f"'{job.command}' needs --{name} FILE")
    return path


def _banner(title: str):
    print("=" * 80)
    print(title)
    print("=" * 80)


def _finish(ok: bool, report: dict, job: JobSpec) -> int:
    report["ok"] = ok
    if job.json_out:
        save_json(report, job.json_out)
    print("\n" + "=" * 80)
    print("✅ ALL CHECKS PASSED" if ok else "❌ CHECKS FAILED")
    print("=" * 80)
    return EXIT_OK if ok else EXIT_FAILURE


def _print_terms(lines: List[str]):
    for line in lines[:MAX_PRINTED_TERMS]:
        print(f"      {line}")
    if len(lines) > MAX_PRINTED_TERMS:
        print(f"      ... {len(lines) - MAX_PRINTED_TERMS} more terms")


# ----------------------------------------------------------------------
# Loading inputs
# ----------------------------------------------------------------------

ALGEBRA_KEYS = {'dim', 'labels', 'brackets', 'subalgebra_split', 'chi', 'omega', 'pseudo'}
PSEUDO_KEYS = {
    'W': {'kind'},
    'S': {'kind', 'chi'},
    'H': {'kind', 'r', 's', 'chi'},
    'K': {'kind', 'r', 's'},
    'rank1': {'kind', 'r', 's'},
}
MODULE_KEYS = {'rep', 'twist'}


def _check_keys(data: dict, allowed, where: str):
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise SpecFormatError(f"{where}: unknown keys {unknown}, expected a subset of {sorted(allowed)}")


@dataclass
class Setup:
    """Everything an algebra file describes."""
    big: LieAlgebra
    pair: Optional[SubalgebraPair] = None
    symp: Optional[SymplecticData] = None
    chi: Optional[np.ndarray] = None
    omega: Optional[list] = None
    raw: Dict = field(default_factory=dict)

    @property
    def base(self) -> LieAlgebra:
        return self.pair.small() if self.pair is not None else self.big


def load_setup(path: str, with_symplectic: bool = True) -> Setup:
    """Algebra file: brackets of d', optional 'subalgebra_split', 'chi', 'omega' and 'pseudo'.

    'subalgebra_split' counts the directions of d' outside d; d is spanned by
    the remaining last basis vectors. 'chi' and 'omega' live on d.
    """
    data = load_json(path)
    if not isinstance(data, dict):
        raise SpecFormatError(f"{path}: expected a JSON object")
    _check_keys(data, ALGEBRA_KEYS, path)
    big = LieAlgebra.from_json(data)
    setup = Setup(big, raw=data)
    if 'subalgebra_split' in data:
        split = data['subalgebra_split']
        if isinstance(split, bool) or not isinstance(split, int) or not 0 <= split <= big.dim:
            raise SpecFormatError(f"{path}: subalgebra_split must be an integer in 0..{big.dim}")
        setup.pair = SubalgebraPair(big, big.dim - split)
    n = setup.base.dim
    if 'chi' in data:
        chi = parse_vector(data['chi'])
        if len(chi) != n:
            raise SpecFormatError(f"{path}: chi has {len(chi)} entries, d has dimension {n}")
        setup.chi = rational_array(chi)
    if 'omega' in data:
        omega = parse_matrix(data['omega'])
        if len(omega) != n or any(len(row) != n for row in omega):
            raise SpecFormatError(f"{path}: omega must be {n}×{n}")
        setup.omega = omega
        if with_symplectic:
            chi = setup.chi if setup.chi is not None else [0] * n
            setup.symp = build_symplectic(setup.base, omega, chi)
    return setup


def _parse_wedge(block: dict, n: int):
    try:
        terms = [(int(i), int(j), parse_rational(q)) for i, j, q in block['r']]
    except (KeyError, TypeError, ValueError):
        raise SpecFormatError("'r' must be a list of [i, j, \"p/q\"] wedge terms")
    if any(not (0 <= i < n and 0 <= j < n) for i, j, _ in terms):
        raise SpecFormatError(f"wedge indices of 'r' must lie in 0..{n - 1}")
    s = parse_vector(block.get('s', [0] * n))
    if len(s) != n:
        raise SpecFormatError(f"'s' has {len(s)} entries, d has dimension {n}")
    return wedge_matrix(n, terms), s


def build_pseudoalgebra(setup: Setup) -> PseudoAlgebra:
    block = setup.raw.get('pseudo')
    if not isinstance(block, dict) or 'kind' not in block:
        raise SpecFormatError("algebra file needs a 'pseudo' block with a 'kind'")
    kind = block['kind']
    if kind not in PSEUDO_KEYS:
        raise SpecFormatError(f"unknown pseudoalgebra kind {kind!r}, expected one of {sorted(PSEUDO_KEYS)}")
    _check_keys(block, PSEUDO_KEYS[kind], f"pseudo block of kind {kind}")
    d = setup.base
    if kind == 'W':
        A = build_W(d)
    elif kind == 'S':
        if 'chi' in block:
            chi = parse_vector(block['chi'])
        else:
            chi = setup.chi if setup.chi is not None else [0] * d.dim
        A = build_S(d, chi)
    elif kind == 'H' and 'r' not in block:
        if 's' in block or 'chi' in block:
            raise SpecFormatError("H-type 's'/'chi' in the pseudo block need 'r'; otherwise give top-level 'omega' and 'chi'")
        if setup.symp is None:
            raise SpecFormatError("H-type pseudoalgebras need top-level 'omega' or pseudo 'r' and 's'")
        A = build_H(setup.symp)
    else:
        if setup.omega is not None:
            raise SpecFormatError("give either top-level 'omega' or pseudo 'r'/'s', not both")
        r, s = _parse_wedge(block, d.dim)
        A = build_rank1(d, r, s)
        if kind != 'rank1' and A.kind != kind:
            raise ShapeError(f"(r, s) defines a rank-one algebra of kind {A.kind}, not {kind}")
        if 'chi' in block:
            chi = parse_vector(block['chi'])
            if len(chi) != d.dim or any(a != b for a, b in zip(chi, A.chi)):
                raise SpecFormatError(f"pseudo 'chi' {format_vector(chi)} differs from ι_s ω = {format_vector(A.chi)}")
        if setup.chi is not None and A.chi is not None and any(a != b for a, b in zip(setup.chi, A.chi)):
            raise SpecFormatError(f"top-level 'chi' differs from ι_s ω = {format_vector(A.chi)}")
    if setup.pair is not None and setup.pair.offset:
        A = current_algebra(A, setup.pair)
    return A


def setup_symplectic(setup: Setup) -> Optional[SymplecticData]:
    """Symplectic data from top-level omega, or from an H-type pseudo block given by (r, s)."""
    if setup.symp is not None:
        return setup.symp
    if isinstance(setup.raw.get('pseudo'), dict):
        A = build_pseudoalgebra(setup)
        return (A.inner if A.is_current else A).symp
    return None


def build_module(setup: Setup, A: PseudoAlgebra, path: str) -> PseudoModule:
    """Module file: {"rep": {...}, "twist": [t coordinates in d']} (twist for current H only)."""
    data = load_json(path)
    if not isinstance(data, dict) or 'rep' not in data:
        raise SpecFormatError(f"{path}: module file needs a 'rep' block")
    _check_keys(data, MODULE_KEYS, path)
    R = RepSpec.from_json(data['rep'])
    if 'twist' in data:
        return twisted_module(A, R, parse_vector(data['twist']))
    if A.is_current:
        return current_module(tensor_module(A.inner, R), A.pair)
    return tensor_module(A, R)


def _module_label(M: PseudoModule):
    def label(key):
        L, b = key
        return f"({M.H.format(SparseVector({L: 1}))})·v{b}"
    return label


def _vector_lines(M: PseudoModule, v) -> List[str]:
    label = _module_label(M)
    return [f"{format_rational(c)} * {label(key)}" for key, c in sorted(v.items())]


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def cmd_validate(job: JobSpec) -> int:
    path = _require(job, 'algebra')
    _banner(f"VALIDATE {path}")
    setup = load_setup(path, with_symplectic=False)
    report = {"file": path, "lie": validate_lie(setup.big.c)}
    ok = not report["lie"]
    if ok:
        print(f"  ✓ Lie axioms hold (dim {setup.big.dim})")
    else:
        print(f"  ❌ {len(report['lie'])} Lie axiom violations")
        for line in report["lie"][:MAX_PRINTED_TERMS]:
            print(f"      {line}")
    if setup.pair is not None:
        print(f"  ✓ Last {setup.pair.small_dim} basis vectors form a subalgebra")
    if ok and setup.chi is not None:
        traceform = check_traceform(setup.base, setup.chi)
        report["traceform"] = traceform
        print(f"  {'✓' if traceform else '❌'} chi {'is' if traceform else 'is not'} a traceform")
        ok = ok and traceform
    if ok and setup.omega is not None:
        chi = setup.chi if setup.chi is not None else [0] * setup.base.dim
        try:
            sd = build_symplectic(setup.base, setup.omega, chi)
            report["r"] = [format_vector(row) for row in sd.r]
            report["s"] = format_vector(sd.s)
            print(f"  ✓ Symplectic data accepted, s = {format_vector(sd.s)}")
        except ValueError as e:
            report["symplectic_error"] = str(e)
            print(f"  ❌ {e}")
            ok = False
    return _finish(ok, report, job)


def cmd_verify_algebra(job: JobSpec) -> int:
    path = _require(job, 'algebra')
    _banner(f"VERIFY PSEUDOALGEBRA {path}")
    A = build_pseudoalgebra(load_setup(path))
    print(f"  {A.kind} pseudoalgebra, {A.rank} generators: {', '.join(A.labels)}")
    label = key_label(A)
    report = {"file": path, "kind": A.kind, "skew": [], "jacobi": []}
    skew = verify_skew(A)
    jacobi = verify_jacobi(A)
    for entry in skew:
        print(f"  ❌ skew-symmetry fails for {entry['pair']}")
        report["skew"].append({"pair": list(entry["pair"]), "terms": len(entry["residual"])})
    for entry in jacobi:
        print(f"  ❌ Jacobi identity fails for {entry['triple']}")
        report["jacobi"].append({"triple": list(entry["triple"]), "terms": len(entry["residual"])})
    if not skew:
        print("  ✓ Skew-symmetry")
    if not jacobi:
        print("  ✓ Jacobi identity")
    ok = not skew and not jacobi
    base = A.inner if A.is_current else A
    if base.r is not None:
        residual = verify_rank1_embedding(base)
        report["embedding_terms"] = len(residual)
        if residual:
            print("  ❌ e ↦ −r + 1⊗s is not a homomorphism into W(d)")
            ok = False
        else:
            print("  ✓ Embedding into W(d)")
    if not ok and (skew or jacobi):
        first = (skew or jacobi)[0]["residual"]
        print("    first residual:")
        _print_terms(format_tensor(first, A.H, label))
    return _finish(ok, report, job)


def cmd_verify_module(job: JobSpec) -> int:
    algebra_path = _require(job, 'algebra')
    module_path = _require(job, 'module')
    _banner(f"VERIFY MODULE {module_path} over {algebra_path}")
    setup = load_setup(algebra_path)
    A = build_pseudoalgebra(setup)
    M = build_module(setup, A, module_path)
    print(f"  {M.kind}-type module of rank {M.rep.dim} over {A.kind}")
    residuals = verify_action(M)
    report = {"algebra": algebra_path, "module": module_path, "action": [], "fourier": 0}
    for entry in residuals:
        a, b = entry["pair"]
        print(f"  ❌ action axiom fails for ({A.labels[a]}, {A.labels[b]}) on v{entry['sample']}")
        report["action"].append({"pair": [a, b], "sample": entry["sample"], "terms": len(entry["residual"])})
    if residuals:
        print("    first residual:")
        _print_terms(format_tensor(residuals[0]["residual"], M.H, _module_label(M)))
    else:
        print("  ✓ Action axiom")
    fourier = fourier_round_trip(M)
    report["fourier"] = len(fourier)
    print(f"  {'✓' if not fourier else '❌'} Fourier mode reconstruction")
    if M.twist_t is not None:
        parts = twist_obstruction(A.pair, A.symp, M.twist_t, M.H)
        report["obstruction"] = {}
        for name, part in parts.items():
            report["obstruction"][name] = len(part)
            status = '✓' if not part else '⚠️'
            print(f"  {status} obstruction {name}: {len(part)} terms")
            _print_terms([f"{format_rational(c)} * {M.H.format(SparseVector({K1: 1}))} ⊗ {M.H.format(SparseVector({K2: 1}))}"
                          for (K1, K2), c in sorted(part.items())])
    return _finish(not residuals and not fourier, report, job)


def cmd_admissible_t(job: JobSpec) -> int:
    path = _require(job, 'algebra')
    _banner(f"ADMISSIBLE TWISTS {path}")
    setup = load_setup(path)
    sd = setup_symplectic(setup)
    if sd is None:
        raise SpecFormatError("admissible-t needs top-level 'omega' or an H-type pseudo block with 'r'")
    pair = setup.pair or SubalgebraPair.trivial(setup.big)
    space = admissible_t_space(pair, sd.chi, sd)
    report = {"file": path, "verdict": space.verdict,
              "basis": [format_vector(v) for v in space.basis], "in_d": space.in_d}
    print(f"  Solution space of dimension {len(space.basis)}:")
    for v, inside in zip(space.basis, space.in_d):
        print(f"    {format_vector(v)}{'  (in d)' if inside else ''}")
    messages = {
        "degenerate": "⚠️ d' = d: no directions to twist along",
        "full": "✓ every t ∈ d' is admissible",
        "exceptional": "✓ admissible t outside d exist",
        "none": "✓ no exceptional modules: every admissible t lies in d",
    }
    print(f"  {messages[space.verdict]}")
    return _finish(True, report, job)


def cmd_singular(job: JobSpec) -> int:
    algebra_path = _require(job, 'algebra')
    module_path = _require(job, 'module')
    _banner(f"SINGULAR VECTORS {module_path} up to degree {job.degree}")
    setup = load_setup(algebra_path)
    A = build_pseudoalgebra(setup)
    M = build_module(setup, A, module_path)
    sing = singular_vectors(M, job.degree)
    ker = ker_solver(M, job.degree)
    print(f"  singular space of dimension {len(sing)}")
    for v in sing:
        _print_terms(_vector_lines(M, v))
        print()
    print(f"  kernel of dimension {len(ker)}")
    report = {"algebra": algebra_path, "module": module_path, "degree": job.degree,
              "singular": [carrier_to_json(v, M.rep.dim) for v in sing],
              "kernel": [carrier_to_json(v, M.rep.dim) for v in ker]}
    return _finish(True, report, job)


def cmd_properties(job: JobSpec) -> int:
    _banner(f"RANDOMIZED PROPERTIES (seed {job.seed})")
    rng = np.random.default_rng(job.seed)
    report = {"seed": job.seed, "hopf": {}, "lemma": {}}
    ok = True
    for name in ('abelian2', 'heisenberg', 'sl2'):
        H = UEA(instances.BUILTIN_ALGEBRAS[name]())
        failures = []
        for _ in range(HOPF_SAMPLES):
            f = random_element(H, rng, min(job.degree, 4))
            g = random_element(H, rng, 2, terms=2)
            failures.extend(hopf_report(H, f, g))
        report["hopf"][name] = sorted(set(failures))
        status = '✓' if not failures else '❌'
        print(f"  {status} Hopf identities on U({name}): {len(failures)} failures")
        ok = ok and not failures
    setups = (('abelian2', instances.standard_symplectic()), ('borel', instances.borel_symplectic()),
              ('heisenberg_line', instances.heisenberg_line_symplectic()))
    for name, sd in setups:
        mismatches = 0
        for _ in range(HOPF_SAMPLES):
            delta = [int(x) for x in rng.integers(-3, 4, size=sd.dim)]
            first, second = lemma_equivalent_check(sd, delta)
            mismatches += first != second
        report["lemma"][name] = mismatches
        print(f"  {'✓' if not mismatches else '❌'} admissible-difference criteria agree on {name}")
        ok = ok and not mismatches
    return _finish(ok, report, job)


SWEEP = [
    ('validate', 'heisenberg.json', None),
    ('validate', 'borel_symplectic.json', None),
    ('verify-algebra', 'heisenberg_W.json', None),
    ('verify-algebra', 'abelian2_S.json', None),
    ('verify-algebra', 'abelian2_H.json', None),
    ('verify-algebra', 'abelian2_H_rank1.json', None),
    ('verify-algebra', 'borel_H.json', None),
    ('verify-algebra', 'heisenberg_K.json', None),
    ('admissible-t', 'abelian_2_3_H.json', None),
    ('admissible-t', 'sl2_borel_H.json', None),
    ('verify-module', 'abelian_2_3_H.json', 'twist_d1_heisenberg_rep.json'),
    ('verify-module', 'sl2_borel_H.json', 'twist_f_trivial.json'),
]


def cmd_all(job: JobSpec) -> int:
    """Run the verification sweep over the bundled specs."""
    commands = {'validate': cmd_validate, 'verify-algebra': cmd_verify_algebra,
                'verify-module': cmd_verify_module, 'admissible-t': cmd_admissible_t}
    results = {}
    for command, algebra, module in SWEEP:
        sub = JobSpec(command, os.path.join(SPECS_DIR, algebra),
                      os.path.join(SPECS_DIR, module) if module else None, job.degree, job.seed)
        print()
        results[f"{command} {algebra} {module or ''}".strip()] = commands[command](sub)
    # the twisted module along f over the Borel pair is the expected failure
    expected_failure = "verify-module sl2_borel_H.json twist_f_trivial.json"
    ok = all(code == EXIT_OK for name, code in results.items() if name != expected_failure)
    ok = ok and results.get(expected_failure) == EXIT_FAILURE
    print("\n" + "=" * 80)
    for name, code in results.items():
        print(f"  {'✓' if code == EXIT_OK else '⚠️' if name == expected_failure else '❌'} {name}")
    if not job.json_out:
        ensure_directories()
        job.json_out = os.path.join(OUTPUT_DIR, "sweep_report.json")
    return _finish(ok, {"results": results}, job)


COMMANDS = {
    'validate': cmd_validate,
    'verify-algebra': cmd_verify_algebra,
    'verify-module': cmd_verify_module,
    'admissible-t': cmd_admissible_t,
    'singular': cmd_singular,
    'properties': cmd_properties,
    'all': cmd_all,
}
