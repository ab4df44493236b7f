"""Command-line interface: figure data, verification sweep, spectrum tables.

Subcommands
-----------
figure
    Eigenvalue curves lambda1(|nu|), lambda2(|nu|) as long-format CSV,
    either for one (delta, beta) panel or for the default 12-panel grid.
spectrum
    Torus eigenvalue table as CSV, lexicographic in the mode index.
verify
    Random dual-path sweep (closed forms vs quadrature oracle) with a JSON
    report; exit code 0 only if every tuple agrees within tolerance.

All numeric CSV fields carry 17 significant digits so values round-trip
exactly; identical invocations produce byte-identical files.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import multipliers as mt
from . import oracle
from .errors import InvalidParams, PerispecError
from .multipliers import Material, NonlocalParams
from .spectrum import TorusSpec, spectrum_table

#: Material curves of the reference figure: mu = 1, lambda* sweep.
FIGURE_LAMBDA_STARS = (-1.9, -1.0, 0.0, 1.0, 2.0)

#: Default (delta, beta) panel grid.  The kernel exponent column covers the
#: four qualitative regimes (near-local, asymptotically linear, logarithmic,
#: bounded); the horizon column covers near-zero and order-one nonlocality.
#: These values approximate the regimes rather than any published table.
FIGURE_DELTAS = (1e-3, 1.0, 2.0)


def figure_betas(n):
    return (n + 2 - 1e-3, n + 1.0, float(n), n - 1.0)


#: Absolute floor used by the verification pass criterion
#: |closed - quad| <= max(tol * |quad|, VERIFY_ABS_FLOOR).
VERIFY_ABS_FLOOR = 1e-8


def _fmt(x):
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class FigureJob:
    """One figure panel: eigenvalues on an equispaced |nu| grid."""

    n: int
    mu: float
    lambda_star_list: tuple
    delta: float
    beta: float
    nu_norm_min: float
    nu_norm_max: float
    samples: int

    def __post_init__(self):
        if self.samples < 2:
            raise InvalidParams(f"samples must be >= 2, got {self.samples}")
        if not (0.0 <= self.nu_norm_min < self.nu_norm_max):
            raise InvalidParams(
                f"need 0 <= nu_norm_min < nu_norm_max, got "
                f"[{self.nu_norm_min}, {self.nu_norm_max}]")


FIGURE_HEADER = "n,delta,beta,mu,lambda_star,nu_norm,lambda1,lambda2"


def figure_rows(job):
    """Yield CSV rows for one panel.

    One lambda1 row per (lambda_star, sample); since lambda2 does not
    depend on lambda*, it is emitted once per sample in a trailing row
    whose lambda_star field is the sentinel NA.  The frequency is taken
    along the first axis (rotation invariance makes the direction
    immaterial).
    """
    params = NonlocalParams(job.n, job.delta, job.beta)
    grid = np.linspace(job.nu_norm_min, job.nu_norm_max, job.samples)
    prefix = f"{job.n},{_fmt(job.delta)},{_fmt(job.beta)},{_fmt(job.mu)}"
    for nu_norm in grid:
        nu = np.zeros(job.n)
        nu[0] = nu_norm
        for lam_star in job.lambda_star_list:
            material = Material(job.mu, lam_star)
            lam1 = mt.eigenvalue_parallel(params, material, nu)
            yield f"{prefix},{_fmt(lam_star)},{_fmt(nu_norm)},{_fmt(lam1)},NA"
        lam2 = mt.eigenvalue_transverse(params, Material(job.mu, 0.0), nu)
        yield f"{prefix},NA,{_fmt(nu_norm)},NA,{_fmt(lam2)}"


def _write_lines(path, lines):
    """Write atomically: no partial file survives an evaluation failure."""
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_figure_csv(job, path):
    _write_lines(path, [FIGURE_HEADER] + list(figure_rows(job)))


def _cmd_figure(args):
    base = dict(n=args.n, mu=args.mu,
                lambda_star_list=tuple(args.lambda_star or FIGURE_LAMBDA_STARS),
                nu_norm_min=args.nu_min, nu_norm_max=args.nu_max,
                samples=args.samples)
    if (args.delta is None) != (args.beta is None):
        raise InvalidParams("give both --delta and --beta, or neither")
    if args.delta is not None:
        write_figure_csv(FigureJob(delta=args.delta, beta=args.beta, **base),
                         args.out)
        return 0
    os.makedirs(args.out, exist_ok=True)
    for delta in FIGURE_DELTAS:
        for beta in figure_betas(args.n):
            job = FigureJob(delta=delta, beta=beta, **base)
            name = f"figure_delta{delta:g}_beta{beta:g}.csv"
            write_figure_csv(job, os.path.join(args.out, name))
    return 0


def _cmd_spectrum(args):
    params = NonlocalParams(args.n, args.delta, args.beta)
    material = Material(args.mu, args.lambda_star[0] if args.lambda_star else 0.0)
    lengths = args.lengths or [2.0 * math.pi] * args.n
    torus = TorusSpec(tuple(lengths))
    records = spectrum_table(params, material, torus, args.k_max)
    header = ",".join(f"k{i + 1}" for i in range(args.n))
    header += ",nu_norm,lambda1,lambda2,multiplicity2"
    lines = [header]
    for rec in records:
        cells = [str(ki) for ki in rec.k]
        cells += [_fmt(np.linalg.norm(rec.nu_k)), _fmt(rec.lambda1),
                  _fmt(rec.lambda2), str(rec.multiplicity2)]
        lines.append(",".join(cells))
    _write_lines(args.out, lines)
    return 0


def _deviation(a, b):
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def _passes(closed, quad, tol):
    dev = np.abs(np.asarray(closed, dtype=float) - np.asarray(quad, dtype=float))
    allow = np.maximum(tol * np.abs(np.asarray(quad, dtype=float)), VERIFY_ABS_FLOOR)
    return bool(np.all(dev <= allow))


def run_verification(seed, count, tol, overrides=None):
    """Dual-path sweep over ``count`` random parameter tuples.

    Samples n in {1,2,3}, delta in [0.1, 4], beta in [-2, n+2-0.05],
    mu in [0.5, 3], lambda* in [-2 mu, 3], |nu| in [0, 20] with a random
    direction, and compares every closed-form quantity against its
    quadrature counterpart.  ``overrides`` pins named tuple components
    (n, delta, beta, mu, lambda_star) to fixed values instead of sampling.
    Returns the report dict.
    """
    if count < 1:
        raise InvalidParams(f"count must be >= 1, got {count}")
    overrides = overrides or {}
    rng = np.random.default_rng(seed)
    entries = []
    failures = 0
    for _ in range(count):
        n = int(overrides.get("n", rng.integers(1, 4)))
        params = NonlocalParams(
            n,
            overrides.get("delta", rng.uniform(0.1, 4.0)),
            overrides.get("beta", rng.uniform(-2.0, n + 2 - 0.05)))
        mu = overrides.get("mu", rng.uniform(0.5, 3.0))
        material = Material(
            mu, overrides.get("lambda_star", rng.uniform(-2.0 * mu, 3.0)))
        direction = rng.standard_normal(n)
        direction /= np.linalg.norm(direction)
        nu = rng.uniform(0.0, 20.0) * direction
        nu_norm = float(np.linalg.norm(nu))

        checks = {}
        m_c = mt.scalar_multiplier(params, nu)
        m_q, _ = oracle.scalar_multiplier_quad(params, nu)
        checks["scalar"] = {"closed": m_c, "quad": m_q,
                            "deviation": _deviation(m_c, m_q),
                            "pass": _passes(m_c, m_q, tol)}
        b_c = mt.tensor_multiplier_bond(params, material, nu).matrix
        b_q, _ = oracle.tensor_bond_quad(params, material, nu)
        checks["bond"] = {"closed": b_c.tolist(), "quad": b_q.tolist(),
                          "deviation": _deviation(b_c, b_q),
                          "pass": _passes(b_c, b_q, tol)}
        s_c = mt.tensor_multiplier_state(params, material, nu).matrix
        s_q, _ = oracle.tensor_state_quad(params, material, nu)
        checks["state"] = {"closed": s_c.tolist(), "quad": s_q.tolist(),
                           "deviation": _deviation(s_c, s_q),
                           "pass": _passes(s_c, s_q, tol)}
        if nu_norm > 0.0:
            l1_c = mt.eigenvalue_parallel(params, material, nu)
            l1_q, _ = oracle.lambda1_quad(params, material, nu)
            checks["lambda1"] = {"closed": l1_c, "quad": l1_q,
                                 "deviation": _deviation(l1_c, l1_q),
                                 "pass": _passes(l1_c, l1_q, tol)}
            l2_c = mt.eigenvalue_transverse(params, material, nu)
            l2_q, _ = oracle.lambda2_quad(params, material, nu)
            checks["lambda2"] = {"closed": l2_c, "quad": l2_q,
                                 "deviation": _deviation(l2_c, l2_q),
                                 "pass": _passes(l2_c, l2_q, tol)}
        ok = all(chk["pass"] for chk in checks.values())
        failures += 0 if ok else 1
        entries.append({
            "n": n, "delta": params.delta, "beta": params.beta,
            "mu": material.mu, "lambda_star": material.lambda_star,
            "nu": nu.tolist(), "checks": checks, "pass": ok,
        })
    return {
        "seed": seed, "count": count, "tol": tol,
        "abs_floor": VERIFY_ABS_FLOOR,
        "entries": entries, "failures": failures,
        "all_pass": failures == 0,
    }


def _cmd_verify(args):
    overrides = {}
    for name in ("n", "delta", "beta", "mu"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.lambda_star:
        overrides["lambda_star"] = args.lambda_star[0]
    report = run_verification(args.seed, args.count, args.tol, overrides)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        _write_lines(args.out, [text])
    else:
        print(text)
    return 0 if report["all_pass"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="perispec",
        description="Fourier multipliers and spectra of linear peridynamic "
                    "operators: figure data, verification, spectrum tables.")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser(
        "figure",
        help="eigenvalue curves as CSV; one panel with --delta/--beta, "
             "else the default 12-panel (delta, beta) grid")
    fig.add_argument("--n", type=int, default=3)
    fig.add_argument("--mu", type=float, default=1.0)
    fig.add_argument("--lambda-star", type=float, action="append",
                     help="repeatable; default " + repr(list(FIGURE_LAMBDA_STARS)))
    fig.add_argument("--delta", type=float, default=None)
    fig.add_argument("--beta", type=float, default=None)
    fig.add_argument("--nu-min", type=float, default=0.0)
    fig.add_argument("--nu-max", type=float, default=15.0)
    fig.add_argument("--samples", type=int, default=1000)
    fig.add_argument("--out", required=True,
                     help="output CSV path (single panel) or directory (grid)")
    fig.set_defaults(func=_cmd_figure)

    ver = sub.add_parser(
        "verify",
        help="random closed-form vs quadrature sweep; JSON report; "
             "exit 1 on any disagreement")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--count", type=int, default=100)
    ver.add_argument("--tol", type=float, default=1e-6,
                     help="relative tolerance (absolute floor 1e-8)")
    ver.add_argument("--n", type=int, default=None,
                     help="pin the dimension instead of sampling it")
    ver.add_argument("--delta", type=float, default=None,
                     help="pin the horizon instead of sampling it")
    ver.add_argument("--beta", type=float, default=None,
                     help="pin the kernel exponent instead of sampling it")
    ver.add_argument("--mu", type=float, default=None,
                     help="pin the shear modulus instead of sampling it")
    ver.add_argument("--lambda-star", type=float, action="append",
                     help="pin the second Lame parameter instead of sampling it")
    ver.add_argument("--out", default=None, help="report path; default stdout")
    ver.set_defaults(func=_cmd_verify)

    spec = sub.add_parser("spectrum", help="torus eigenvalue table as CSV")
    spec.add_argument("--n", type=int, default=3)
    spec.add_argument("--delta", type=float, required=True)
    spec.add_argument("--beta", type=float, required=True)
    spec.add_argument("--mu", type=float, default=1.0)
    spec.add_argument("--lambda-star", type=float, action="append")
    spec.add_argument("--lengths", type=float, nargs="+", default=None,
                      help="edge lengths; default 2*pi per axis")
    spec.add_argument("--k-max", type=int, default=4)
    spec.add_argument("--out", required=True)
    spec.set_defaults(func=_cmd_spectrum)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PerispecError, OSError) as exc:
        print(f"perispec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
