"""Command-line interface.

Every subcommand reads its options from flags and, optionally, from a
``[subcommand]`` table in a TOML file given with ``--config``; flags win.
Exit codes: 0 success, 1 computational failure, 2 bad arguments or input.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
import time
from pathlib import Path

from . import __version__
from .errors import PrimeZerosError, TruncationInfeasible
from .explicit_formula import (identity_residual, prime_side_S, zero_side_S)
from .scan import KPolicy, ZeroCandidate, detect_zeros, scan_profile
from .sieve import sieve_lambda
from .tables import ZeroTableFormatError, read_zero_table, write_zero_table
from .weights import WeightParams
from .zeta_oracle import find_zeros

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("primezeros")

# hard defaults, applied after config-file values
DEFAULTS = {
    "eps": 0.05,
    "threads": 1,
    "step": 0.02,
    "alpha": None,
    "policy": None,
    "beta": None,
    "t_max": None,
    "start": 1,
    "printed_phase": False,
    "tilde": False,
    "exact": False,
}


class UsageError(Exception):
    """Bad user input; mapped to exit code 2."""


def _fmt(v) -> str:
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return f"{float(v):.12g}"


def _write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="TOML file with a [subcommand] table of defaults")
    p.add_argument("--threads", type=int, help="worker threads (default 1)")


def _policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, help="fixed-alpha policy, k = ceil(alpha xi^2) (default 1)")
    p.add_argument("--policy", choices=["fixed_alpha", "figure1", "theorem_remark"])
    p.add_argument("--beta", type=float, help="beta for the theorem_remark policy")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primezeros",
        description="Explicit formula for zeta zeros from primes: evaluation, scans, checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="von Mangoldt values on a range")
    _common(p)
    p.add_argument("--start", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--out", type=Path, help="CSV with columns n,Lambda")

    p = sub.add_parser("eval", help="prime-side S at one point")
    _common(p)
    p.add_argument("--xi", type=float)
    p.add_argument("--k", type=int)
    _policy_flags(p)
    p.add_argument("--eps", type=float)
    p.add_argument("--tilde", action="store_true", default=None,
                   help="use the asymptotic cosine weight instead of the Hermite weight")
    p.add_argument("--printed-phase", action="store_true", default=None,
                   help="with --tilde, use cos(xi log x - k pi)")
    p.add_argument("--out", type=Path)

    for name, helptext in (("profile", "prime-side S on a grid"),
                           ("detect", "profile plus half-mass zero detection")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--lo", type=float)
        p.add_argument("--hi", type=float)
        p.add_argument("--step", type=float)
        _policy_flags(p)
        p.add_argument("--eps", type=float)
        p.add_argument("--exact", action="store_true", default=None,
                       help="use the Hermite weight (slow for large k)")
        p.add_argument("--out", type=Path)
        if name == "detect":
            p.add_argument("--profile-out", type=Path)
            p.add_argument("--zeros", type=Path, help="zero table to compare candidates against")

    p = sub.add_parser("identity-check", help="residual of the exact contour identity")
    _common(p)
    p.add_argument("--xi", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--zeros", type=Path)
    p.add_argument("--t-max", type=float, help="compute the zero table up to this height instead")
    p.add_argument("--tol", type=float, help="exit 1 if |residual| exceeds this")

    p = sub.add_parser("oracle-zeros", help="critical-line zeros from the zeta oracle")
    _common(p)
    p.add_argument("--t-max", type=float)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("compare", help="prime side versus zero side at given xi")
    _common(p)
    p.add_argument("--xi", type=float, nargs="+")
    p.add_argument("--k", type=int)
    _policy_flags(p)
    p.add_argument("--eps", type=float)
    p.add_argument("--zeros", type=Path)
    p.add_argument("--t-max", type=float)
    p.add_argument("--tilde", action="store_true", default=None)
    p.add_argument("--out", type=Path)
    return parser


def _merge_config(args: argparse.Namespace) -> None:
    values = {}
    if getattr(args, "config", None) is not None:
        try:
            data = tomllib.loads(args.config.read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"config: cannot read {args.config}: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise UsageError(f"config: {exc}") from None
        values = data.get(args.command, {})
        if not isinstance(values, dict):
            raise UsageError(f"config: [{args.command}] must be a table")
    for key, value in values.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"config: unknown key {key!r} for {args.command}")
        if getattr(args, attr) is None:
            if attr in ("out", "zeros", "profile_out", "config"):
                value = Path(value)
            setattr(args, attr, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _positive(args, *names) -> None:
    for name in names:
        v = getattr(args, name)
        if v is not None and not (v > 0 and math.isfinite(v)):
            raise UsageError(f"--{name.replace('_', '-')} must be positive, got {v}")


def _policy(args) -> KPolicy:
    kind = args.policy or "fixed_alpha"
    try:
        if kind == "figure1":
            return KPolicy.figure1()
        if kind == "theorem_remark":
            if args.beta is None:
                raise UsageError("--beta is required for the theorem_remark policy")
            return KPolicy.theorem_remark(args.beta)
        return KPolicy.fixed_alpha(args.alpha if args.alpha is not None else 1.0)
    except ValueError as exc:
        raise UsageError(f"--policy: {exc}") from None


def _params(args, xi: float) -> WeightParams:
    if getattr(args, "k", None) is not None:
        if args.k < 1:
            raise UsageError("--k must be a positive integer")
        return WeightParams(xi, args.k)
    return _policy(args).params(xi)


def _zero_table(args, need_to: float):
    if args.zeros is not None:
        try:
            return read_zero_table(args.zeros)
        except OSError as exc:
            raise UsageError(f"--zeros: cannot read {args.zeros}: {exc}") from None
        except ZeroTableFormatError as exc:
            raise UsageError(f"--zeros: {exc}") from None
    t_max = args.t_max if getattr(args, "t_max", None) is not None else max(need_to, 30.0)
    return find_zeros(min(t_max, 1000.0))


def cmd_sieve(args) -> int:
    _require(args, "length")
    if args.start < 1 or args.length < 0:
        raise UsageError("--start must be >= 1 and --length >= 0")
    seg = sieve_lambda(args.start, args.length)
    psi = math.fsum(seg.values.tolist())
    nonzero = int((seg.values > 0).sum())
    print(f"range [{seg.start}, {seg.stop - 1}]: {nonzero} prime powers, sum Lambda = {psi:.12g}")
    if args.out:
        _write_csv(args.out, ["n", "Lambda"],
                   ((seg.start + i, v) for i, v in enumerate(seg.values.tolist())))
    return 0


def cmd_eval(args) -> int:
    _require(args, "xi")
    _positive(args, "xi", "eps")
    p = _params(args, args.xi)
    b = prime_side_S(p, args.eps, use_exact_weight=not args.tilde, workers=args.threads,
                     printed_phase=args.printed_phase)
    print(f"xi={b.xi:.12g} k={b.k} alpha={p.alpha:.12g} eps={b.eps_requested:g} tau={b.tau:.6g}")
    print(f"  smooth term  {b.smooth_term:.12g}")
    print(f"  prime sum    {b.prime_sum:.12g}  ({b.terms_used} prime powers)")
    print(f"  pole term    {b.pole_term:.12g}")
    print(f"  S estimate   {b.total:.12g}")
    print(f"  error scale  {b.error_bound:.6g}  (uncalibrated)")
    if args.out:
        _write_csv(args.out, ["xi", "k", "smooth_term", "prime_sum", "pole_term", "S",
                              "terms_used", "error_bound"],
                   [(b.xi, b.k, b.smooth_term, b.prime_sum, b.pole_term, b.total,
                     b.terms_used, b.error_bound)])
    return 0


def _profile(args):
    _require(args, "lo", "hi")
    _positive(args, "step", "eps")
    return scan_profile(args.lo, args.hi, args.step, _policy(args), args.eps,
                        exact=args.exact, workers=args.threads)


def _write_profile(path, prof) -> None:
    _write_csv(path, ["xi", "S", "k", "terms_used", "error_bound"],
               zip(prof.xis.tolist(), prof.values.tolist(), prof.ks.tolist(),
                   prof.terms_used.tolist(), prof.error_bounds.tolist()))


def cmd_profile(args) -> int:
    t0 = time.perf_counter()
    prof = _profile(args)
    i = int(prof.values.argmax())
    print(f"{len(prof.xis)} points on [{prof.xis[0]:g}, {prof.xis[-1]:g}], "
          f"policy {prof.policy.describe()}, eps={prof.eps:g}; "
          f"max S = {prof.values[i]:.6g} at xi = {prof.xis[i]:.6g} "
          f"({time.perf_counter() - t0:.1f} s)")
    if args.out:
        _write_profile(args.out, prof)
    return 0


def _write_candidates(path, cands: list[ZeroCandidate]) -> None:
    _write_csv(path, ["location", "mass", "window_lo", "window_hi"],
               ((c.location, c.mass, c.window[0], c.window[1]) for c in cands))


def cmd_detect(args) -> int:
    prof = _profile(args)
    cands = detect_zeros(prof)
    zt = read_zero_table(args.zeros) if args.zeros else None
    print(f"{len(cands)} candidate(s) on [{prof.xis[0]:g}, {prof.xis[-1]:g}]")
    for c in cands:
        line = f"  xi = {c.location:.6f}  mass = {c.mass:.4f}  window [{c.window[0]:g}, {c.window[1]:g}]"
        if zt is not None and len(zt):
            nearest = min(zt, key=lambda g: abs(g - c.location))
            line += f"  nearest zero {nearest:.6f} (off by {c.location - nearest:+.4f})"
        print(line)
    if args.out:
        _write_candidates(args.out, cands)
    if args.profile_out:
        _write_profile(args.profile_out, prof)
    return 0


def cmd_identity_check(args) -> int:
    _require(args, "xi", "k")
    _positive(args, "xi", "eps")
    p = WeightParams(args.xi, args.k)
    zt = _zero_table(args, p.xi + 8.0 / math.sqrt(p.alpha))
    r = identity_residual(p, zt, args.eps, workers=args.threads)
    print(f"identity residual at xi={p.xi:g}, k={p.k}, eps={args.eps:g}: {r:.6e}")
    if args.tol is not None and abs(r) > args.tol:
        print(f"residual exceeds tolerance {args.tol:g}")
        return 1
    return 0


def cmd_oracle_zeros(args) -> int:
    _require(args, "t_max")
    _positive(args, "t_max")
    zt = find_zeros(args.t_max)
    print(f"{len(zt)} zeros with 0 < gamma <= {args.t_max:g}")
    for g in zt.gammas[:5].tolist():
        print(f"  {g:.10f}")
    if len(zt) > 5:
        print("  ...")
    if args.out:
        write_zero_table(zt, args.out, header=f"zeros of zeta on the critical line, 0 < gamma <= {args.t_max:g}")
    return 0


def cmd_compare(args) -> int:
    _require(args, "xi")
    _positive(args, "eps")
    params = [_params(args, x) for x in args.xi]
    need = max(p.xi + 8.0 / math.sqrt(p.alpha) for p in params)
    zt = _zero_table(args, need)
    rows = []
    for p in params:
        b = prime_side_S(p, args.eps, use_exact_weight=not args.tilde, workers=args.threads)
        z = zero_side_S(p, zt)
        rows.append((p.xi, p.k, b.total, z, b.total - z))
        print(f"xi={p.xi:<12.8g} k={p.k:<6d} prime side {b.total:.10f}  zero side {z:.10f}  "
              f"diff {b.total - z:+.3e}")
    if args.out:
        _write_csv(args.out, ["xi", "k", "prime_side", "zero_side", "difference"], rows)
    return 0


COMMANDS = {
    "sieve": cmd_sieve,
    "eval": cmd_eval,
    "profile": cmd_profile,
    "detect": cmd_detect,
    "identity-check": cmd_identity_check,
    "oracle-zeros": cmd_oracle_zeros,
    "compare": cmd_compare,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _merge_config(args)
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return COMMANDS[args.command](args)
    except (UsageError, TruncationInfeasible, ZeroTableFormatError) as exc:
        print(f"primezeros {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except PrimeZerosError as exc:
        code = 2 if isinstance(exc, ValueError) else 1
        print(f"primezeros {args.command}: error: {exc}", file=sys.stderr)
        return code
    except (ValueError, TypeError) as exc:
        print(f"primezeros {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"primezeros {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"primezeros {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
