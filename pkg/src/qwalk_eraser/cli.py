"""
Command-line front end.

Subcommands ``dtqw``, ``erase-hadamard``, ``erase-uniform`` and ``sample``
write probability series as CSV (``series,x,p``) or JSON. Human-readable
summaries go to stderr so that stdout can carry the data.

Errors exit non-zero with a single ``qwalk: error[CODE]: message`` line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .dicke import canonical_phi_T, spatial_marginal
from .erasure import complement_distribution, conditional_distribution, pi_state
from .errors import CapacityError, ImpossibleOutcomeError, QWalkError
from .povm import (
    INCONCLUSIVE,
    POVM_MAX_T,
    build_povm,
    outcome_probabilities,
    post_measurement_distribution,
    sample_outcomes,
    success_probability,
)
from .walk import CoinInit, classical_distribution, dtqw_distribution, dtqw_evolve, std_dev

EXIT_USAGE = 2
EXIT_RANGE = 3
EXIT_IMPOSSIBLE = 4
EXIT_INTERNAL = 5

_ERROR_CODES = {
    EXIT_USAGE: "E_USAGE",
    EXIT_RANGE: "E_RANGE",
    EXIT_IMPOSSIBLE: "E_IMPOSSIBLE",
    EXIT_INTERNAL: "E_INTERNAL",
}

MIXTURE_TOL = 1e-12
ENV_MAX_T = "QWALK_MAX_T"


class CliError(Exception):
    def __init__(self, message: str, status: int = EXIT_USAGE):
        super().__init__(message)
        self.status = status


@dataclass
class Series:
    label: str
    x: np.ndarray
    p: np.ndarray


@dataclass
class ExperimentConfig:
    command: str
    T: Optional[int]
    coin_init: CoinInit
    seed: int
    shots: Optional[int]
    output_path: Optional[str]
    format: str
    normalized: bool = False
    sweep: Optional[tuple[int, int]] = None
    records_path: Optional[str] = None


@dataclass
class Result:
    series: list[Series]
    meta: dict = field(default_factory=dict)
    records: Optional[list] = None


def _advise(msg: str) -> None:
    print(msg, file=sys.stderr)


def povm_cap() -> int:
    """POVM size cap, overridable through ``QWALK_MAX_T``."""
    raw = os.environ.get(ENV_MAX_T)
    if raw is None or raw == "":
        return POVM_MAX_T
    try:
        cap = int(raw)
    except ValueError:
        raise CliError(f"{ENV_MAX_T} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise CliError(f"{ENV_MAX_T} must be >= 1")
    return cap


def _as_fraction(value: float) -> str:
    frac = Fraction(value).limit_denominator(10**6)
    if abs(float(frac) - value) <= 1e-15 * max(1.0, abs(value)):
        return f"{frac.numerator}/{frac.denominator}"
    return f"{value:.17g}"


def _require_T(config: ExperimentConfig) -> int:
    if config.T is None:
        raise CliError(f"{config.command} requires --steps")
    return config.T


def _check_mixture(parts: Sequence[np.ndarray], whole: np.ndarray, what: str) -> None:
    err = float(np.max(np.abs(np.sum(parts, axis=0) - whole)))
    if err > MIXTURE_TOL:
        raise CliError(f"{what}: mixture identity violated by {err:.3g}", EXIT_INTERNAL)


def cmd_dtqw(config: ExperimentConfig) -> Result:
    T = _require_T(config)
    quantum = dtqw_distribution(dtqw_evolve(T, config.coin_init))
    classical = classical_distribution(T)
    sq, sc = std_dev(quantum), std_dev(classical)
    _advise(f"T={T} sigma_hadamard={sq:.17g} sigma_classical={sc:.17g}")
    return Result(
        [
            Series("hadamard", quantum.positions, quantum.weights),
            Series("gaussian", classical.positions, classical.weights),
        ],
        {"sigma_hadamard": sq, "sigma_gaussian": sc},
    )


def _erase_hadamard_sweep(config: ExperimentConfig) -> Result:
    lo, hi = config.sweep
    Ts = np.arange(lo, hi + 1)
    values = np.array([pi_state(int(t), config.coin_init).success_prob for t in Ts])
    for t, v in zip(Ts, values):
        _advise(f"N_{t} = {v:.17g} ({_as_fraction(v)})")
    return Result([Series("success_probability", Ts, values)], {"sweep": [lo, hi]})


def cmd_erase_hadamard(config: ExperimentConfig) -> Result:
    if config.sweep is not None:
        if config.T is not None:
            raise CliError("--steps and --sweep are mutually exclusive")
        return _erase_hadamard_sweep(config)
    T = _require_T(config)
    if T == 1:
        _advise("advisory: at T=1 the walk distribution already is the Hadamard one; "
                "measuring the coin is unnecessary")
    state = canonical_phi_T(T)
    proj = pi_state(T, config.coin_init)
    p = spatial_marginal(state)
    q = conditional_distribution(state, proj)
    N = proj.success_prob
    _advise(f"N_{T} = {N:.17g} ({_as_fraction(N)})")
    series = [Series("gaussian", p.positions, p.weights), Series("hadamard", q.positions, q.weights)]
    if 1.0 - N > 1e-15:
        r = complement_distribution(state, proj)
        _check_mixture([N * q.weights, (1.0 - N) * r.weights], p.weights, "erase-hadamard")
        series.append(Series("failure", r.positions, r.weights))
    else:
        _advise("advisory: the projection succeeds with certainty; no failure branch")
    return Result(series, {"p_success": N})


def cmd_erase_uniform(config: ExperimentConfig) -> Result:
    T = _require_T(config)
    cap = povm_cap()
    if T > cap:
        raise CliError(
            f"T={T} exceeds the POVM dynamic-range limit {cap} (gamma_k^-1 spans 2^(T/2)); "
            f"set {ENV_MAX_T} to override",
            EXIT_RANGE,
        )
    state = canonical_phi_T(T)
    povm = build_povm(T, max_T=cap)
    probs = outcome_probabilities(state, povm)
    P = float(probs[:-1].sum())
    analytic = success_probability(T)
    if abs(P - analytic) > MIXTURE_TOL:
        raise CliError(f"P_success {P!r} disagrees with (T+1)2^-T = {analytic!r}", EXIT_INTERNAL)
    p = spatial_marginal(state)
    q = sum(probs[m] * post_measurement_distribution(state, povm, m).weights for m in range(T + 1)) / P
    if probs[-1] > 0:
        r = post_measurement_distribution(state, povm, INCONCLUSIVE).weights
    else:
        r = np.zeros(T + 1)
    _advise(f"P_success = {P:.17g} ({_as_fraction(P)})")
    _check_mixture([P * q, (1.0 - P) * r], p.weights, "erase-uniform")
    series = [Series("gaussian", p.positions, p.weights)]
    if config.normalized:
        series.append(Series("uniform", p.positions, q))
        if probs[-1] > 0:
            series.append(Series("failure", p.positions, r))
        else:
            _advise("advisory: the inconclusive outcome never occurs at T=1")
    else:
        series.append(Series("failure_scaled", p.positions, (1.0 - P) * r))
        series.append(Series("uniform_scaled", p.positions, P * q))
    return Result(series, {"p_success": P, "normalized": config.normalized})


def cmd_sample(config: ExperimentConfig) -> Result:
    T = _require_T(config)
    if config.shots is None:
        raise CliError("sample requires --shots")
    cap = povm_cap()
    if T > cap:
        raise CliError(f"T={T} exceeds the POVM dynamic-range limit {cap}", EXIT_RANGE)
    state = canonical_phi_T(T)
    povm = build_povm(T, max_T=cap)
    outcomes, xs = sample_outcomes(state, povm, config.seed, config.shots)
    n = config.shots
    conclusive = outcomes <= T
    rate = float(conclusive.mean())
    stderr = math.sqrt(rate * (1.0 - rate) / n)
    expected = success_probability(T)
    _advise(f"shots={n} success_rate={rate:.6f} +- {stderr:.6f} (expected {expected:.6f})")

    positions = 2 * np.arange(T + 1) - T
    series = []
    for label, mask in (("conclusive", conclusive), ("inconclusive", ~conclusive)):
        count = int(mask.sum())
        if count == 0:
            continue
        hist = np.bincount((xs[mask] + T) // 2, minlength=T + 1)
        series.append(Series(label, positions, hist / count))
    records = [[None if o == T + 1 else int(o), int(x)] for o, x in zip(outcomes.tolist(), xs.tolist())]
    meta = {
        "shots": n,
        "p_success": expected,
        "p_success_empirical": rate,
        "p_success_stderr": stderr,
    }
    return Result(series, meta, records)


COMMANDS = {
    "dtqw": cmd_dtqw,
    "erase-hadamard": cmd_erase_hadamard,
    "erase-uniform": cmd_erase_uniform,
    "sample": cmd_sample,
}


def render(config: ExperimentConfig, result: Result) -> str:
    """Serialize a result; identical inputs give identical text."""
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["series", "x", "p"])
        for s in result.series:
            for x, p in zip(s.x.tolist(), s.p.tolist()):
                writer.writerow([s.label, int(x), format(float(p), ".17g")])
        return buf.getvalue()

    meta = {
        "T": config.T,
        "coin_init": config.coin_init.value,
        "seed": config.seed,
        "command": config.command,
    }
    meta.update(result.meta)
    doc = {
        "meta": meta,
        "series": [
            {"label": s.label, "points": [[int(x), float(p)] for x, p in zip(s.x.tolist(), s.p.tolist())]}
            for s in result.series
        ],
    }
    if result.records is not None:
        doc["records"] = result.records
    return json.dumps(doc, indent=2) + "\n"


def render_records(records: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["shot", "outcome", "x"])
    for i, (m, x) in enumerate(records):
        writer.writerow([i, "?" if m is None else m, x])
    return buf.getvalue()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _parse_sweep(value: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in value.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected Tmin:Tmax, got {value!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 1 <= Tmin <= Tmax, got {value!r}")
    return lo, hi


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _seed(value: str) -> int:
    n = int(value)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--steps", type=_positive_int, help="number of walk steps T")
    common.add_argument("--coin-init", choices=[c.value for c in CoinInit], default="symmetric")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", help="output file (default: stdout)")

    parser = _Parser(prog="qwalk", description="Which-way erasure in multi-coin quantum walks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("dtqw", parents=[common], help="Hadamard walk vs classical walk")
    p = sub.add_parser("erase-hadamard", parents=[common], help="projective erasure onto |pi(T)>")
    p.add_argument("--sweep", type=_parse_sweep, metavar="TMIN:TMAX", help="tabulate N_T over a range")
    p = sub.add_parser("erase-uniform", parents=[common], help="maximum-confidence POVM erasure")
    p.add_argument("--normalized", action="store_true", help="emit normalized conditional distributions")
    p = sub.add_parser("sample", parents=[common], help="Monte Carlo shots of the POVM")
    p.add_argument("--shots", type=_positive_int)
    p.add_argument("--records", help="also write per-shot records as CSV")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    return ExperimentConfig(
        command=args.command,
        T=args.steps,
        coin_init=CoinInit.parse(args.coin_init),
        seed=args.seed,
        shots=getattr(args, "shots", None),
        output_path=args.output,
        format=args.format,
        normalized=getattr(args, "normalized", False),
        sweep=getattr(args, "sweep", None),
        records_path=getattr(args, "records", None),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
        result = COMMANDS[config.command](config)
        _write(config.output_path, render(config, result))
        if config.records_path and result.records is not None:
            _write(config.records_path, render_records(result.records))
        return 0
    except CliError as exc:
        status, message = exc.status, str(exc)
    except CapacityError as exc:
        status, message = EXIT_RANGE, str(exc)
    except ImpossibleOutcomeError as exc:
        status, message = EXIT_IMPOSSIBLE, str(exc)
    except (QWalkError, ValueError, OSError) as exc:
        status, message = EXIT_USAGE, str(exc)
    print(f"qwalk: error[{_ERROR_CODES[status]}]: {message}", file=sys.stderr)
    return status

if __name__ == "__main__":
    sys.exit(main())
