"""Command-line front end.

Exit codes: 0 success, 1 domain failure (infeasible data, boundary
termination, factorization failure), 2 usage or input error.
"""

import argparse
import datetime
import json
import sys

import numpy as np

from . import io as cio
from .cepstral import CepstralData, solve_joint
from .cones import (CovarianceData, FullPeriodicSequence, certify_membership, toeplitz_positive,
                    validate_full_sequence)
from .exceptions import CircArmaError, InfeasibleError
from .experiments import ArmaTruth, ar8_truth, arma_truth, arma_vs_ar, me_decay_sweep
from .harmonics import DiscreteCircle, DiscreteSpectrum, PseudoPolynomial, moments_of, parse_complex
from .multivar import MatrixPseudoPolynomial, solve_dual_block
from .realization import extend_covariances, factor_banded, sample_covariances, simulate, unilateral_arma
from .solver import SolverConfig, solve_dual, spectrum_of


class InputError(Exception):
    """Malformed or inconsistent input; maps to exit code 2."""


def _load(spec):
    if spec is None or spec == "-":
        text = sys.stdin.read()
    elif spec.lstrip().startswith("{"):
        text = spec
    else:
        try:
            with open(spec, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise InputError(f"cannot read input: {err}") from err
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"input is not valid JSON: {err}") from err
    if not isinstance(obj, dict):
        raise InputError("input must be a JSON object")
    return obj


def _poly(obj, default=None):
    if obj is None:
        if default is None:
            raise InputError("missing pseudo-polynomial")
        return default
    if isinstance(obj, dict):
        return PseudoPolynomial.from_json(obj)
    return PseudoPolynomial([parse_complex(v) for v in obj])


def _config(obj):
    raw = obj.get("solver", {})
    return SolverConfig(**{k: raw[k] for k in ("max_iter", "gtol", "backtrack", "armijo") if k in raw})


def _covariances(obj):
    try:
        return CovarianceData.from_json(obj)
    except KeyError as err:
        raise InputError(f"missing field {err}") from err


def _emit(args, payload, csv_header=None, csv_rows=None):
    if args.format == "csv" and csv_header is not None:
        text = cio.csv_text(csv_header, csv_rows)
    else:
        if isinstance(payload, dict) and not args.reproducible:
            payload = dict(payload, timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat())
        text = cio.dumps(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _moment_residual(phi, c):
    return float(np.max(np.abs(moments_of(phi, c.n) - c.lags)))


def cmd_check(args, obj):
    if "full_lags" in obj:
        seq = FullPeriodicSequence([parse_complex(v) for v in obj["full_lags"]], int(obj["N"]))
        valid = validate_full_sequence(seq)
        _emit(args, {"valid": valid, "wraparound_residual": seq.wraparound_residual()})
        return 0 if valid else 1
    c = _covariances(obj)
    tpd = toeplitz_positive(c)
    cert = certify_membership(c, _config(obj))
    _emit(args, {"toeplitz_pd": tpd, "membership": cert.status, "diagnostic": cert.diagnostic})
    return 0 if cert.feasible else 1


def cmd_solve(args, obj):
    c = _covariances(obj)
    if not c.is_scalar:
        raise InputError("solve expects scalar data; use block-solve")
    P = _poly(obj.get("P"), PseudoPolynomial.constant(1.0))
    sol = solve_dual(c, P, _config(obj))
    payload = {"N": c.N, "n": c.n, "P": sol.P.to_json(), "Q": sol.Q.to_json(),
               "iterations": sol.iterations, "grad_norm": sol.grad_norm,
               "moment_residual": _moment_residual(sol.phi, c), "primal": sol.primal, "dual": sol.dual}
    _emit(args, payload, ["k", "theta", "phi", "P", "Q"], cio.spectrum_rows(sol.phi, sol.P, sol.Q))
    return 0


def cmd_cepstral(args, obj):
    c = _covariances(obj)
    if "gamma" not in obj:
        raise InputError("missing field 'gamma'")
    gamma = CepstralData.from_json(obj["gamma"])
    lam = args.lam if args.lam is not None else obj.get("lambda")
    sol = solve_joint(c, gamma, lam, _config(obj))
    payload = {"N": c.N, "n": c.n, "lambda": sol.lam, "P": sol.P.to_json(), "Q": sol.Q.to_json(),
               "epsilon": cio.complex_list(sol.epsilon), "covariance_residual": sol.covariance_residual,
               "cepstral_residual": sol.cepstral_residual, "iterations": sol.iterations,
               "grad_norm": sol.grad_norm}
    _emit(args, payload, ["k", "theta", "phi", "P", "Q"], cio.spectrum_rows(sol.phi, sol.P, sol.Q))
    return 0


def cmd_block(args, obj):
    c = _covariances(obj)
    P = _poly(obj.get("P"), PseudoPolynomial.constant(1.0))
    sol = solve_dual_block(c, P, _config(obj))
    resid = float(np.max(np.abs(moments_of(sol.phi.values, c.n) - c.blocks)))
    _emit(args, {"N": c.N, "n": c.n, "m": c.m, "P": sol.P.to_json(), "Q": sol.Q.to_json(),
                 "iterations": sol.iterations, "grad_norm": sol.grad_norm, "moment_residual": resid})
    return 0


def _pair(obj):
    if "Q" in obj:
        return _poly(obj.get("P"), PseudoPolynomial.constant(1.0)), _poly(obj["Q"])
    c = _covariances(obj)
    P = _poly(obj.get("P"), PseudoPolynomial.constant(1.0))
    return P, solve_dual(c, P, _config(obj)).Q


def cmd_extend(args, obj):
    if "N" not in obj:
        raise InputError("missing field 'N'")
    N = int(obj["N"])
    P, Q = _pair(obj)
    seq = extend_covariances(Q, P, N)
    lags = seq.scalar_lags()
    _emit(args, {"N": N, "lags": cio.complex_list(lags)}, ["k", "re", "im"],
          [(k, float(v.real), float(v.imag)) for k, v in enumerate(lags)])
    return 0


def cmd_factor(args, obj):
    if "M" in obj:
        a = factor_banded(_poly(obj["M"]))
        _emit(args, {"a": cio.complex_list(a)})
        return 0
    P, Q = _pair(obj)
    fwd, bwd = unilateral_arma(P, Q)
    _emit(args, {"forward": fwd.to_json(), "backward": bwd.to_json()})
    return 0


def cmd_simulate(args, obj):
    R = int(obj.get("R", 1))
    real = bool(obj.get("real", False))
    seed = args.seed if args.seed is not None else obj.get("seed")
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (2**63))
    if "spectrum" in obj:
        vals = np.array([float(v) for v in obj["spectrum"]])
        phi = DiscreteSpectrum(DiscreteCircle(vals.size // 2), vals)
    else:
        if "N" not in obj:
            raise InputError("missing field 'N'")
        P, Q = _pair(obj)
        phi = spectrum_of(P, Q, int(obj["N"]))
    y = simulate(phi, R, seed=seed, real=real)
    t = phi.circle.indices
    payload = {"N": phi.N, "R": R, "seed": int(seed), "real": real, "samples": cio.complex_list(y)}
    if obj.get("n") is not None:
        n = int(obj["n"])
        mean, se = sample_covariances(y, n)
        payload["sample_lags"] = cio.complex_list(mean)
        payload["standard_errors"] = cio.complex_list(se)
    if real:
        header = ["t", "realization", "value"]
        rows = [(int(tt), r, float(y[r, j])) for r in range(R) for j, tt in enumerate(t)]
    else:
        header = ["t", "realization", "value", "value_imag"]
        rows = [(int(tt), r, float(y[r, j].real), float(y[r, j].imag)) for r in range(R) for j, tt in enumerate(t)]
    _emit(args, payload, header, rows)
    return 0


def _truth(obj):
    spec = obj.get("truth", "ar8")
    if spec == "ar8":
        return ar8_truth()
    if spec == "arma":
        return arma_truth()
    if isinstance(spec, dict):
        return ArmaTruth(tuple(parse_complex(v) for v in spec.get("poles", [])),
                         tuple(parse_complex(v) for v in spec.get("zeros", [])),
                         float(spec.get("gain", 1.0)))
    raise InputError(f"unknown truth model {spec!r}")


def cmd_sweep(args, obj):
    truth = _truth(obj)
    experiment = obj.get("experiment", "ar-decay")
    if experiment == "ar-decay":
        Ns = obj.get("N", [32, 64, 128, 256])
        if not Ns:
            raise InputError("sweep list 'N' must be non-empty")
        rows = me_decay_sweep(truth, int(obj.get("n", 8)), Ns, workers=int(obj.get("workers", 4)),
                              config=_config(obj))
    elif experiment == "arma-vs-ar":
        ar = obj.get("ar", {"n": 12, "N": 1024})
        arma = obj.get("arma", {"n": 8, "N": 128})
        lam = args.lam if args.lam is not None else obj.get("lambda", 1e-3)
        rows = arma_vs_ar(truth, (int(ar["n"]), int(ar["N"])), (int(arma["n"]), int(arma["N"])),
                          float(lam), _config(obj))
    else:
        raise InputError(f"unknown experiment {experiment!r}")
    _emit(args, {"experiment": experiment, "rows": rows}, ["N", "n", "model", "error"],
          [(r["N"], r["n"], r["model"], r["error"]) for r in rows])
    return 0


COMMANDS = {
    "check": (cmd_check, "feasibility of covariance data or validity of a full periodic sequence"),
    "solve": (cmd_solve, "scalar dual solve for Q given lags and numerator P"),
    "cepstral-solve": (cmd_cepstral, "joint covariance and cepstral matching"),
    "block-solve": (cmd_block, "block dual solve with scalar P and matrix Q"),
    "extend": (cmd_extend, "full circulant covariance extension"),
    "factor": (cmd_factor, "banded spectral factorization and unilateral ARMA models"),
    "simulate": (cmd_simulate, "spectral-domain simulation of the periodic process"),
    "sweep": (cmd_sweep, "approximation-error sweeps against a ground-truth model"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="JSON file, inline JSON object, or - for stdin (default)")
    common.add_argument("--output", "-o", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, help="random seed for simulate")
    common.add_argument("--lambda", dest="lam", type=float, help="regularization for cepstral problems")
    common.add_argument("--reproducible", action="store_true", help="omit the timestamp field")
    parser = argparse.ArgumentParser(prog="circarma", description="Circulant rational covariance extension.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        obj = _load(args.input)
        return handler(args, obj)
    except InfeasibleError as err:
        payload = {"status": "Infeasible", "message": str(err)}
        if err.direction is not None:
            payload["boundary_direction"] = cio.complex_list(np.ravel(err.direction))
        sys.stdout.write(cio.dumps(payload))
        print(f"circarma: {err}", file=sys.stderr)
        return 1
    except CircArmaError as err:
        sys.stdout.write(cio.dumps({"status": type(err).__name__, "message": str(err)}))
        print(f"circarma: {err}", file=sys.stderr)
        return 1
    except (InputError, ValueError, TypeError, KeyError) as err:
        print(f"circarma: invalid input: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
