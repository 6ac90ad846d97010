"""Command-line front end.

Every check prints ``key=value`` lines followed by a final ``pass=true|false``.
Exit status: 0 when every check passes, 1 when a check fails, 2 on a
configuration or input error.
"""

from __future__ import annotations

import argparse
import random
import sys
from math import gcd

from . import __version__
from .arith import is_prime, primes_coprime_to
from .characters import character_from_label, enumerate_characters
from .coeffs import (
    CoefficientFileError,
    CoefficientSequence,
    EisensteinInputError,
    check_hecke_relations,
    dumps_coefficients,
    eisenstein_coefficients,
    eta_sequence,
    load_coefficients,
    twist_coefficients,
)
from .datasets import DATASETS, EISENSTEIN_PARAMETERS, load_dataset
from .lfun import (
    DEFAULT_S_GRID,
    DEFAULT_Y_GRID,
    ConstantTermError,
    DegenerateCutPairError,
    InsufficientCoefficientsError,
    eisenstein_L_factorization,
    verify_fe,
    verify_ramanujan_twist,
)
from .modular import (
    Matrix2x2,
    balanced_points,
    check_slash_coefficients,
    modularity_check,
    random_gamma0,
    verify_matrix_identities,
    verify_sq_equals_one,
)


class ConfigError(ValueError):
    pass


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12e}"
    if isinstance(v, complex):
        return f"{v.real:.12e},{v.imag:.12e}"
    return str(v)


class Report:
    """Ordered key=value lines; the overall verdict is the conjunction of recorded checks."""

    def __init__(self):
        self.lines: list[str] = []
        self.ok = True

    def put(self, key: str, value) -> None:
        self.lines.append(f"{key}={_fmt(value)}")

    def verdict(self, prefix: str, passed: bool, reasons=()) -> None:
        if not passed and reasons:
            self.put(f"{prefix}reason", ",".join(reasons))
        if prefix:
            # the final line carries the verdict of an unprefixed check
            self.put(f"{prefix}pass", bool(passed))
        self.ok = self.ok and bool(passed)

    def text(self) -> str:
        return "\n".join(self.lines + [f"pass={_fmt(self.ok)}"]) + "\n"


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def _label(text: str):
    try:
        return character_from_label(text)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad character label {text!r}: {exc}") from None


def _complex_list(text: str) -> tuple[complex, ...]:
    try:
        out = tuple(complex(t.strip().replace("i", "j")) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"bad complex list {text!r}") from None
    if not out:
        raise ConfigError("grid must be nonempty")
    return out


def _real_list(text: str) -> tuple[float, ...]:
    try:
        out = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"bad number list {text!r}") from None
    if any(not (y > 0) for y in out):
        raise ConfigError("cut points must be positive")
    return out


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"bad integer list {text!r}") from None


def _load_input(args) -> CoefficientSequence:
    if args.coeffs and args.dataset:
        raise ConfigError("give --coeffs or --dataset, not both")
    if args.coeffs:
        try:
            seq = load_coefficients(args.coeffs)
        except OSError as exc:
            raise ConfigError(f"cannot read {args.coeffs}: {exc.strerror}") from None
        if args.count is not None:
            seq = seq.truncate(min(args.count, seq.X))
    elif args.dataset:
        seq = load_dataset(args.dataset, args.count)
    else:
        raise ConfigError("an input is required: --coeffs PATH or --dataset NAME")
    if getattr(args, "twist", None):
        chi = _label(args.twist)
        if gcd(chi.modulus, seq.N) != 1:
            raise ConfigError(f"twist modulus {chi.modulus} is not coprime to level {seq.N}")
        seq = twist_coefficients(seq, chi)
    return seq


def _tol(args) -> float:
    if not args.tol > 0:
        raise ConfigError("tolerance must be positive")
    return args.tol


def _prime(q: int, N: int) -> int:
    if not is_prime(q) or N % q == 0:
        raise ConfigError(f"q={q} must be a prime not dividing the level {N}")
    return q


# ---------------------------------------------------------------------------
# Checks, each appending to a Report
# ---------------------------------------------------------------------------


def _describe(rep: Report, seq: CoefficientSequence) -> None:
    rep.put("k", seq.k)
    rep.put("N", seq.N)
    rep.put("chi", seq.nebentypus.label)
    rep.put("X", seq.X)
    if seq.twist:
        rep.put("twist", seq.twist)


def run_hecke(rep: Report, seq: CoefficientSequence, tol: float, prefix: str = "") -> None:
    r = check_hecke_relations(seq, tol=tol)
    rep.put(f"{prefix}exact", r.exact)
    for kind in sorted(r.checked):
        rep.put(f"{prefix}checked_{kind}", r.checked[kind])
    rep.put(f"{prefix}violations", len(r.violations))
    kinds = sorted({v.kind for v in r.violations})
    if r.violations:
        rep.put(f"{prefix}first_violation", ":".join(map(str, r.violations[0].indices)))
    rep.verdict(prefix, r.passed, kinds)


def run_fe(rep: Report, seq: CoefficientSequence, s_grid, y_grid, tol: float, prefix: str = "") -> None:
    r = verify_fe(seq, s_grid, y_grid, tol=tol)
    d = r.as_dict()
    rep.put(f"{prefix}epsilon_re", float(d["epsilon_re"]))
    rep.put(f"{prefix}epsilon_im", float(d["epsilon_im"]))
    rep.put(f"{prefix}unimodularity_defect", float(d["unimodularity_defect"]))
    rep.put(f"{prefix}max_dispersion", float(d["max_dispersion"]))
    rep.put(f"{prefix}eps_spread", float(d["eps_spread"]))
    rep.put(f"{prefix}X_used", int(d["X_used"]))
    rep.put(f"{prefix}tol", float(tol))
    reasons = [
        name
        for name, value in (
            ("dispersion", r.max_dispersion),
            ("unimodularity", r.unimodularity_defect),
            ("eps_spread", r.eps_spread),
        )
        if not value <= tol
    ]
    rep.verdict(prefix, r.passed, reasons)


def run_ramanujan(rep: Report, seq: CoefficientSequence, qs, X, tol: float, prefix: str = "") -> None:
    ok = True
    for q in qs:
        r = verify_ramanujan_twist(seq, _prime(q, seq.N), X=X, tol=tol)
        rep.put(f"{prefix}q{q}_X", r.X)
        rep.put(f"{prefix}q{q}_exact", r.exact)
        rep.put(f"{prefix}q{q}_hecke_ok", r.hecke_ok)
        rep.put(f"{prefix}q{q}_violations", len(r.violations))
        ok = ok and r.passed
    rep.verdict(prefix, ok, ["identity"])


def run_sq(rep: Report, seq: CoefficientSequence, qs, s_grid, y_grid, tol: float, prefix: str = "") -> None:
    ok = True
    for q in qs:
        r = verify_sq_equals_one(seq, _prime(q, seq.N), s_grid, y_grid, tol=tol)
        rep.put(f"{prefix}q{q}_eps1", complex(r.eps1))
        for label in sorted(r.eps_chi, key=lambda s: int(s.split(".")[1])):
            rep.put(f"{prefix}q{q}_eps_{label}", complex(r.eps_chi[label]))
        rep.put(f"{prefix}q{q}_max_deviation", float(r.max_deviation))
        ok = ok and r.passed
    rep.verdict(prefix, ok, ["deviation"])


def run_slash(rep: Report, seq: CoefficientSequence, gammas, points, seed: int, tol: float, qs=(), prefix: str = "") -> None:
    rng = random.Random(seed)
    ok = True
    for i, g in enumerate(gammas):
        if not g.in_gamma0(seq.N):
            raise ConfigError(f"{g} is not in Gamma_0({seq.N})")
        zs = points if points else balanced_points(g, 3, rng)
        r = modularity_check(seq, g, zs, tol=tol)
        rep.put(f"{prefix}gamma{i}", str(g))
        rep.put(f"{prefix}gamma{i}_max_residual", float(r.max_residual))
        rep.put(f"{prefix}gamma{i}_error_bound", float(r.error_bound))
        ok = ok and r.passed
    for q in qs:
        _prime(q, seq.N)
        for b in range(1, q):
            r = check_slash_coefficients(seq, q, b)
            rep.put(f"{prefix}fgamma_q{q}_b{b}", str(r.gamma))
            rep.put(f"{prefix}fgamma_q{q}_b{b}_max_error", float(r.max_error))
            ok = ok and r.passed
    rep.verdict(prefix, ok, ["modularity"])


def run_matrix(rep: Report, N: int, qs, q1s, prefix: str = "") -> None:
    try:
        r = verify_matrix_identities(N, qs, q1s)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rep.put(f"{prefix}N", N)
    rep.put(f"{prefix}q_list", ",".join(map(str, qs)))
    rep.put(f"{prefix}q1_list", ",".join(map(str, q1s)))
    rep.put(f"{prefix}checks", len(r.checks))
    rep.put(f"{prefix}failures", len(r.failures))
    for c in r.failures[:5]:
        rep.put(f"{prefix}failed_{c.name}", ":".join(map(str, c.params)))
    rep.verdict(prefix, r.passed, sorted({c.name for c in r.failures}))


def run_factorization(rep: Report, name: str, X: int, prefix: str = "") -> None:
    xi1, xi2, k = EISENSTEIN_PARAMETERS[name]
    r = eisenstein_L_factorization(_label(xi1), _label(xi2), k, X)
    rep.put(f"{prefix}X", r.X)
    rep.put(f"{prefix}exact", r.exact)
    rep.put(f"{prefix}mismatches", len(r.mismatches))
    rep.verdict(prefix, r.passed, ["mismatch"])


def _default_primes(N: int, count: int = 3) -> list[int]:
    return primes_coprime_to(N, count, start=3)


def _matrix_primes(N: int) -> tuple[list[int], list[int]]:
    q1 = primes_coprime_to(N, 10, residue=1) if N > 1 else primes_coprime_to(N, 10)
    return primes_coprime_to(N, 10), q1


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _write_coeffs(seq: CoefficientSequence, args) -> int:
    text = dumps_coefficients(seq)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote={args.output}")
        print(f"k={seq.k}")
        print(f"N={seq.N}")
        print(f"X={seq.X}")
        print("pass=true")
    else:
        sys.stdout.write(text)
    return 0


def cmd_eisenstein(args) -> int:
    xi1, xi2 = _label(args.xi1), _label(args.xi2)
    if args.count < 1:
        raise ConfigError("--count must be positive")
    try:
        seq = eisenstein_coefficients(xi1, xi2, args.k, args.count)
    except EisensteinInputError as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from None
    return _write_coeffs(seq, args)


def cmd_eta(args) -> int:
    if args.count < 1:
        raise ConfigError("--count must be positive")
    try:
        seq = eta_sequence(args.spec, args.count)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return _write_coeffs(seq, args)


def cmd_hecke(args, rep: Report) -> None:
    seq = _load_input(args)
    _describe(rep, seq)
    run_hecke(rep, seq, _tol(args))


def cmd_verify_fe(args, rep: Report) -> None:
    seq = _load_input(args)
    _describe(rep, seq)
    run_fe(rep, seq, args.s_grid, args.y_grid, _tol(args))


def cmd_ramanujan(args, rep: Report) -> None:
    seq = _load_input(args)
    _describe(rep, seq)
    qs = args.q or _default_primes(seq.N)
    run_ramanujan(rep, seq, qs, args.max_n, _tol(args))


def cmd_sq(args, rep: Report) -> None:
    seq = _load_input(args)
    _describe(rep, seq)
    qs = args.q or _default_primes(seq.N, 1)
    run_sq(rep, seq, qs, args.s_grid, args.y_grid, _tol(args))


def cmd_slash(args, rep: Report) -> None:
    seq = _load_input(args)
    _describe(rep, seq)
    if args.gamma:
        gammas = args.gamma
    else:
        rng = random.Random(args.seed)
        gammas = [random_gamma0(seq.N, rng) for _ in range(args.random)]
    run_slash(rep, seq, gammas, args.z, args.seed, _tol(args), args.q or ())


def cmd_matrix(args, rep: Report) -> None:
    qs, q1s = _matrix_primes(args.N)
    if args.q:
        qs = list(args.q)
    if args.q1:
        q1s = list(args.q1)
    run_matrix(rep, args.N, qs, q1s)


def cmd_report(args, rep: Report) -> None:
    seq = _load_input(args)
    _describe(rep, seq)
    tol = _tol(args)
    eisenstein = seq.origin == "eisenstein" and not seq.twist
    run_hecke(rep, seq, 1e-10, "hecke.")
    qs = _default_primes(seq.N)
    run_ramanujan(rep, seq, qs, min(seq.X, 1000), 1e-10, "ramanujan.")
    q = qs[0]
    if eisenstein:
        # Lambda of an Eisenstein series has poles; its twists are entire
        for chi in enumerate_characters(q)[1:]:
            run_fe(rep, twist_coefficients(seq, chi), args.s_grid, args.y_grid, tol, f"fe.{chi.label}.")
        if args.dataset in EISENSTEIN_PARAMETERS:
            run_factorization(rep, args.dataset, min(seq.X, 500), "factorization.")
    else:
        run_fe(rep, seq, args.s_grid, args.y_grid, tol, "fe.")
        run_sq(rep, seq, [q], args.s_grid, args.y_grid, max(tol, 1e-5), "sq.")
        rng = random.Random(args.seed)
        gammas = [random_gamma0(seq.N, rng) for _ in range(3)]
        run_slash(rep, seq, gammas, None, args.seed, max(tol, 1e-7), [q], "slash.")
    run_matrix(rep, seq.N, *_matrix_primes(seq.N), prefix="matrix.")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_input(p: argparse.ArgumentParser, twist: bool = True) -> None:
    p.add_argument("--coeffs", help="coefficient file")
    p.add_argument("--dataset", choices=sorted(DATASETS), help="bundled dataset")
    p.add_argument("--count", type=int, help="number of coefficients to use")
    if twist:
        p.add_argument("--twist", help="twist by the character q.j first")


def _add_grids(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-grid", type=_complex_list, default=DEFAULT_S_GRID, help="comma-separated s values")
    p.add_argument("--y-grid", type=_real_list, default=DEFAULT_Y_GRID, help="cut points in units of 1/sqrt(N)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistfe", description="Verify twisted functional equations and modularity numerically.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--report", help="also write the report to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eisenstein", help="build Eisenstein coefficients")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--xi1", required=True, help="character label q.j")
    p.add_argument("--xi2", required=True, help="character label q.j")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_eisenstein, checks=False)

    p = sub.add_parser("eta", help="build eta-product coefficients")
    p.add_argument("--spec", required=True, help='e.g. "1^2*11^2"')
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_eta, checks=False)

    p = sub.add_parser("hecke-check", help="check the Euler-product relations")
    _add_input(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_hecke, checks=True)

    p = sub.add_parser("verify-fe", help="recover the root number and check the functional equation")
    _add_input(p)
    _add_grids(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify_fe, checks=True)

    p = sub.add_parser("ramanujan-check", help="check the Ramanujan-sum twist identity")
    _add_input(p)
    p.add_argument("--q", type=_int_list, help="comma-separated primes")
    p.add_argument("--max-n", type=int, help="check n up to this bound")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_ramanujan, checks=True)

    p = sub.add_parser("sq-check", help="check S_q(x) = 1 from recovered root numbers")
    _add_input(p, twist=False)
    _add_grids(p)
    p.add_argument("--q", type=_int_list, help="comma-separated primes")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_sq, checks=True)

    p = sub.add_parser("slash-check", help="check f|gamma against the nebentypus")
    _add_input(p, twist=False)
    p.add_argument("--gamma", type=Matrix2x2.parse, action="append", help='matrix "a,b;c,d" (repeatable)')
    p.add_argument("--random", type=int, default=5, help="random Gamma_0(N) elements when no --gamma")
    p.add_argument("--z", type=_complex_list, help="evaluation points (default: balanced points per gamma)")
    p.add_argument("--q", type=_int_list, help="also recover Fourier coefficients of f|gamma_{q,b}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_slash, checks=True)

    p = sub.add_parser("matrix-check", help="exact matrix identities for level N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--q", type=_int_list, help="primes not dividing N")
    p.add_argument("--q1", type=_int_list, help="primes = 1 mod N")
    p.set_defaults(func=cmd_matrix, checks=True)

    p = sub.add_parser("report", help="run every applicable check on one input")
    _add_input(p, twist=False)
    _add_grids(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_report, checks=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    rep = Report()
    try:
        if not args.checks:
            return args.func(args)
        args.func(args, rep)
    except ConfigError as exc:
        print(f"error={exc}")
        print("pass=false")
        return 2
    except (CoefficientFileError, InsufficientCoefficientsError, ConstantTermError, DegenerateCutPairError) as exc:
        print("\n".join(rep.lines) if rep.lines else "", end="\n" if rep.lines else "")
        print(f"error={type(exc).__name__}: {exc}")
        print("pass=false")
        return 2
    text = rep.text()
    sys.stdout.write(text)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
