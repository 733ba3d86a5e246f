"""Command-line front end: build code bundles, run check suites, bridge and
block-pipeline reports.

Exit codes: 0 all checks pass, 1 at least one check fails, 2 malformed input.
Reports are JSON by default (sorted keys, so identical configs give
byte-identical output) or markdown tables with --format md.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .bridge import bridge_gate_table, map_error_generators
from .combs import comb_to_json_dict, gkp_codeword
from .errors import CVCodeError
from .fock import (
    FockVector,
    approx_ideal_rot_codeword,
    coherent_state,
    fock_operator,
    rot_codeword_from_primitive,
    rot_logical_op,
    rot_primitive_validity,
)
from .isometries import alg1_report
from .verify import (
    convergence_scan,
    detectability_check,
    gkp_exact_suite,
    logical_action,
    markdown_table,
    stabilizer_check,
    suite_markdown,
)

MAX_D = 4096
MAX_N = 64
MAX_BRIDGE_N = 8
MAX_ALG1_CELLS = 4096

# exact rows (rational phases, disjoint supports) vs truncation-limited rows
LOGICAL_TOL_EXACT = 1e-9
LOGICAL_TOL_APPROX = 5e-2
DETECT_TOL_SHIFT = 1e-6
DETECT_TOL_ROTATION = 1e-2

GATE_TARGETS = {
    "Z": np.diag([1.0 + 0j, -1.0]),
    "S": np.diag([1.0 + 0j, 1j]),
    "T": np.diag([1.0 + 0j, np.exp(1j * np.pi / 4)]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
}


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on, echoed into its report."""

    command: str
    family: str | None = None
    N: int | None = None
    D: int | None = None
    eps: float | None = None
    primitive: str | None = None
    window: int | None = None
    suite: str | None = None
    code: str | None = None
    tol: float | None = None
    tol_rot: float | None = None
    inject_gamma: int | None = None
    samples: int | None = None
    seed: int | None = None
    G: int | None = None
    eps_series: tuple[float, ...] | None = None
    hadamard_dim: int | None = None
    fmt: str = "json"
    out: str | None = None

    def public_dict(self) -> dict:
        data = asdict(self)
        data.pop("out")
        if data.get("eps_series") is not None:
            data["eps_series"] = list(data["eps_series"])
        return {k: v for k, v in data.items() if v is not None}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _report_text(config: RunConfig, results: list[dict]) -> str:
    if config.fmt == "md":
        return suite_markdown(results)
    passed = sum(1 for r in results if r["pass"])
    report = {
        "tool_version": __version__,
        "config": config.public_dict(),
        "results": results,
        "summary": {"total": len(results), "passed": passed, "failed": len(results) - passed},
    }
    return json.dumps(report, indent=2, sort_keys=True)


def _finish(config: RunConfig, results: list[dict]) -> int:
    _emit(_report_text(config, results), config.out)
    return 0 if all(r["pass"] for r in results) else 1


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _parse_primitive(text: str, dim: int) -> FockVector | None:
    """Parse a primitive descriptor; returns None for the ideal family member."""
    if text == "ideal":
        return None
    if text.startswith("fock:"):
        levels = [int(part) for part in text[len("fock:"):].split(",") if part]
        _require(bool(levels), "fock primitive needs at least one level")
        amps = np.zeros(dim, dtype=complex)
        for level in levels:
            _require(0 <= level < dim, f"fock level {level} outside [0, {dim})")
            amps[level] = 1.0
        return FockVector(dim, amps / np.linalg.norm(amps))
    if text.startswith("coherent:"):
        return coherent_state(complex(text[len("coherent:"):]), dim)
    raise ValueError(f"unrecognized primitive {text!r} (use ideal, fock:..., coherent:...)")


# --- commands ----------------------------------------------------------------


def cmd_build_code(config: RunConfig) -> int:
    _require(config.family in ("rot", "gkp"), "family must be rot or gkp")
    _require(1 <= config.N <= MAX_N, f"N must be in [1, {MAX_N}]")
    bundle = {"tool_version": __version__, "family": config.family, "N": config.N}
    if config.family == "rot":
        _require(1 <= config.D <= MAX_D, f"D must be in [1, {MAX_D}]")
        primitive = _parse_primitive(config.primitive, config.D)
        if primitive is None:
            _require(config.D >= 2 * config.N, "ideal family needs D >= 2N")
            words = [
                approx_ideal_rot_codeword(config.N, j, config.D, config.eps) for j in (0, 1)
            ]
        else:
            _require(
                rot_primitive_validity(primitive, config.N),
                "primitive misses one of the two codeword sectors",
            )
            words = [rot_codeword_from_primitive(primitive, config.N, j) for j in (0, 1)]
        bundle.update(
            {
                "D": config.D,
                "primitive": config.primitive,
                "eps": config.eps if primitive is None else None,
                "codewords": [w.to_json_dict() for w in words],
            }
        )
    else:
        _require(config.window is None or config.window >= 0, "window must be nonnegative")
        words = [gkp_codeword(config.N, j, window=config.window) for j in (0, 1)]
        bundle.update(
            {
                "primitive": "ideal" if config.window is None else f"window:{config.window}",
                "codewords": [comb_to_json_dict(w) for w in words],
            }
        )
    _emit(json.dumps(bundle, indent=2, sort_keys=True), config.out)
    return 0


def _logical_suite_rot(bundle: dict, config: RunConfig) -> list[dict]:
    N, D = int(bundle["N"]), int(bundle["D"])
    words = [FockVector.from_json_dict(d) for d in bundle["codewords"]]
    ideal = bundle.get("primitive") == "ideal"
    tol_exact = config.tol if config.tol is not None else LOGICAL_TOL_EXACT
    results = []
    for gate in ("Z", "S", "T"):
        action = logical_action(rot_logical_op(gate, N, D), words, GATE_TARGETS[gate], tol_exact)
        results.append(
            {
                "name": f"logical_{gate}",
                "pass": bool(action.passed),
                "metrics": {
                    "aligned_fidelity": action.aligned_fidelity,
                    "global_phase": action.global_phase,
                    "tol": tol_exact,
                },
            }
        )
    stab_ok = stabilizer_check(
        fock_operator("rotation", D, theta=Fraction(2, N)), words, tol_exact
    )
    results.append(
        {"name": "stabilizer_rotation", "pass": bool(stab_ok), "metrics": {"tol": tol_exact}}
    )
    if ideal:
        # truncation-limited rows: fidelity is capped by the envelope's edge teeth
        tol_approx = config.tol if config.tol is not None else LOGICAL_TOL_APPROX
        for gate in ("X", "H"):
            action = logical_action(rot_logical_op(gate, N, D), words, GATE_TARGETS[gate], tol_approx)
            results.append(
                {
                    "name": f"logical_{gate}",
                    "pass": bool(action.passed),
                    "metrics": {
                        "aligned_fidelity": action.aligned_fidelity,
                        "global_phase": action.global_phase,
                        "tol": tol_approx,
                    },
                }
            )
    return results


def _detect_suite_rot(bundle: dict, config: RunConfig) -> list[dict]:
    N, D = int(bundle["N"]), int(bundle["D"])
    words = [FockVector.from_json_dict(d) for d in bundle["codewords"]]
    ideal = bundle.get("primitive") == "ideal"
    samples = config.samples if config.samples is not None else 8
    generators = map_error_generators(N, D, rotation_samples=samples)
    shifts = {k: v for k, v in generators.items() if k.startswith("gamma")}
    rotations = {k: v for k, v in generators.items() if k.startswith("rotation")}
    if config.inject_gamma is not None:
        _require(1 <= config.inject_gamma < D, "injected shift outside [1, D)")
        shifts[f"gamma_{config.inject_gamma}_injected"] = fock_operator(
            "number_shift", D, shift=config.inject_gamma
        )
    results = []
    tol_shift = config.tol if config.tol is not None else DETECT_TOL_SHIFT
    if shifts:
        report = detectability_check(words, shifts, tol_shift)
        for row in report.rows:
            results.append(
                {
                    "name": f"detect_{row.name}",
                    "pass": row.passed,
                    "metrics": {
                        "off_diag_max": row.off_diag_max,
                        "diag_spread": row.diag_spread,
                        "tol": tol_shift,
                    },
                }
            )
    if ideal and rotations:
        tol_rot = config.tol_rot if config.tol_rot is not None else DETECT_TOL_ROTATION
        report = detectability_check(words, rotations, tol_rot)
        for row in report.rows:
            results.append(
                {
                    "name": f"detect_{row.name}",
                    "pass": row.passed,
                    "metrics": {
                        "off_diag_max": row.off_diag_max,
                        "diag_spread": row.diag_spread,
                        "tol": tol_rot,
                    },
                }
            )
    return results


def cmd_check(config: RunConfig) -> int:
    with open(config.code, encoding="utf-8") as fh:
        bundle = json.load(fh)
    family = bundle.get("family")
    _require(family in ("rot", "gkp"), f"bundle has unknown family {family!r}")
    if family == "gkp":
        _require(
            config.suite == "logical",
            "detect suite needs Fock-side codes; comb-side checks live in the logical suite",
        )
        results = gkp_exact_suite(int(bundle["N"]))
    elif config.suite == "logical":
        results = _logical_suite_rot(bundle, config)
    else:
        results = _detect_suite_rot(bundle, config)
    return _finish(config, results)


def cmd_bridge(config: RunConfig) -> int:
    _require(1 <= config.N <= MAX_BRIDGE_N, f"N must be in [1, {MAX_BRIDGE_N}]")
    _require(2 * config.N <= config.D <= MAX_D, f"D must be in [2N, {MAX_D}]")
    results = []
    for gate, row in bridge_gate_table(config.N, config.D).items():
        results.append({"name": f"gate_{gate}", "pass": row["exact_match"], "metrics": row})
    eps_series = config.eps_series or (1e-1, 1e-2, 1e-3)
    dim = config.hadamard_dim or 256
    _require(2 * config.N <= dim <= MAX_D, f"hadamard dim must be in [2N, {MAX_D}]")
    hadamard = rot_logical_op("H", config.N, dim)

    def fidelity(eps: float) -> float:
        words = [approx_ideal_rot_codeword(config.N, j, dim, eps) for j in (0, 1)]
        return logical_action(hadamard, words, GATE_TARGETS["H"]).aligned_fidelity

    scan = convergence_scan(fidelity, list(eps_series))
    final = scan.points[-1][1]
    results.append(
        {
            "name": "hadamard_series",
            "pass": scan.monotonicity in ("nondecreasing", "constant") and final >= 1 - 1e-3,
            "metrics": {
                "eps": list(eps_series),
                "fidelities": [m for _, m in scan.points],
                "monotonicity": scan.monotonicity,
                "dim": dim,
            },
        }
    )
    return _finish(config, results)


def cmd_alg1(config: RunConfig) -> int:
    _require(config.D >= 1 and config.G >= 1, "D and G must be >= 1")
    _require(config.D * config.G <= MAX_ALG1_CELLS, f"D*G must stay <= {MAX_ALG1_CELLS}")
    report = alg1_report(config.D, config.G)
    ok = (
        report["union_ok"]
        and report["disjoint_ok"]
        and all(v == 0.0 for v in report["residuals"].values())
    )
    results = [{"name": "alg1_pipeline", "pass": ok, "metrics": report}]
    return _finish(config, results)


# --- argument plumbing --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvqec", description="Bosonic code construction and verification."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build-code", help="construct codewords and write a bundle")
    build.add_argument("--family", required=True, choices=["rot", "gkp"])
    build.add_argument("--N", required=True, type=int)
    build.add_argument("--D", type=int, default=64)
    build.add_argument("--primitive", default="ideal")
    build.add_argument("--eps", type=float, default=1e-3)
    build.add_argument("--window", type=int, default=None)
    build.add_argument("--out", default=None)

    check = sub.add_parser("check", help="run a verification suite on a bundle")
    check.add_argument("--code", required=True)
    check.add_argument("--suite", required=True, choices=["logical", "detect"])
    check.add_argument("--tol", type=float, default=None)
    check.add_argument("--tol-rot", dest="tol_rot", type=float, default=None)
    check.add_argument("--inject-gamma", dest="inject_gamma", type=int, default=None)
    check.add_argument("--samples", type=int, default=None)
    check.add_argument("--seed", type=int, default=None)
    check.add_argument("--format", dest="fmt", choices=["json", "md"], default="json")
    check.add_argument("--out", default=None)

    bridge = sub.add_parser("bridge", help="compare bridged gates against rotation-side ones")
    bridge.add_argument("--N", required=True, type=int)
    bridge.add_argument("--D", type=int, default=64)
    bridge.add_argument("--eps-series", dest="eps_series", default=None)
    bridge.add_argument("--hadamard-dim", dest="hadamard_dim", type=int, default=None)
    bridge.add_argument("--format", dest="fmt", choices=["json", "md"], default="json")
    bridge.add_argument("--out", default=None)

    alg1 = sub.add_parser("alg1", help="run the block discretization pipeline")
    alg1.add_argument("--D", required=True, type=int)
    alg1.add_argument("--G", required=True, type=int)
    alg1.add_argument("--format", dest="fmt", choices=["json", "md"], default="json")
    alg1.add_argument("--out", default=None)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    eps_series = None
    if getattr(args, "eps_series", None):
        eps_series = tuple(float(part) for part in args.eps_series.split(","))
    return RunConfig(
        command=args.command,
        family=getattr(args, "family", None),
        N=getattr(args, "N", None),
        D=getattr(args, "D", None),
        eps=getattr(args, "eps", None),
        primitive=getattr(args, "primitive", None),
        window=getattr(args, "window", None),
        suite=getattr(args, "suite", None),
        code=getattr(args, "code", None),
        tol=getattr(args, "tol", None),
        tol_rot=getattr(args, "tol_rot", None),
        inject_gamma=getattr(args, "inject_gamma", None),
        samples=getattr(args, "samples", None),
        seed=getattr(args, "seed", None),
        G=getattr(args, "G", None),
        eps_series=eps_series,
        hadamard_dim=getattr(args, "hadamard_dim", None),
        fmt=getattr(args, "fmt", "json"),
        out=getattr(args, "out", None),
    )


_COMMANDS = {
    "build-code": cmd_build_code,
    "check": cmd_check,
    "bridge": cmd_bridge,
    "alg1": cmd_alg1,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = _config_from_args(args)
    try:
        return _COMMANDS[config.command](config)
    except CVCodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
