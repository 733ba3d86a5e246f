"""Quantitative checks: detectability, logical action, stabilizers, scans.

Fock-side checks compare restricted 2x2 matrices against targets with
explicit tolerances.  Comb-side checks are aggregated from the exact
rational-arithmetic identities and carry tolerance zero.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import combs
from .errors import NonOrthonormalCodewords
from .fock import FockOperator, FockVector, adjoint, apply_operator, inner
from .phases import mod2

ORTHONORMAL_TOL = 1e-10
MONOTONE_SLACK = 1e-12


def _check_codewords(codewords: Sequence[FockVector]) -> None:
    if len(codewords) != 2:
        raise NonOrthonormalCodewords("need exactly two codewords")
    for i, a in enumerate(codewords):
        for j, b in enumerate(codewords):
            target = 1.0 if i == j else 0.0
            if abs(inner(a, b) - target) > ORTHONORMAL_TOL:
                raise NonOrthonormalCodewords(
                    f"<{i}|{j}> deviates from {target} beyond {ORTHONORMAL_TOL}"
                )


def restricted_matrix(op: FockOperator, codewords: Sequence[FockVector]) -> np.ndarray:
    """The 2x2 matrix of op in the codeword basis, <i|op|j>."""
    M = np.zeros((2, 2), dtype=complex)
    for j, ket in enumerate(codewords):
        image = apply_operator(op, ket)
        for i, bra in enumerate(codewords):
            M[i, j] = inner(bra, image)
    return M


# --- detectability ----------------------------------------------------------


@dataclass(frozen=True)
class ErrorRow:
    name: str
    c_E: complex
    off_diag_max: float
    diag_spread: float
    passed: bool


@dataclass(frozen=True)
class DetectabilityReport:
    rows: tuple[ErrorRow, ...]
    tol: float
    passed: bool
    pair_rows: tuple[ErrorRow, ...] = ()

    def to_json_dict(self) -> dict:
        def row(r: ErrorRow) -> dict:
            return {
                "name": r.name,
                "c_E": [r.c_E.real, r.c_E.imag],
                "off_diag_max": r.off_diag_max,
                "diag_spread": r.diag_spread,
                "pass": r.passed,
            }

        out = {"tol": self.tol, "pass": self.passed, "rows": [row(r) for r in self.rows]}
        if self.pair_rows:
            out["pair_rows"] = [row(r) for r in self.pair_rows]
        return out


def _error_row(name: str, op: FockOperator, codewords, tol: float) -> ErrorRow:
    M = restricted_matrix(op, codewords)
    c = (M[0, 0] + M[1, 1]) / 2
    off = float(max(abs(M[0, 1]), abs(M[1, 0])))
    spread = float(abs(M[0, 0] - M[1, 1]))
    return ErrorRow(name, complex(c), off, spread, max(off, spread) <= tol)


def detectability_check(
    codewords: Sequence[FockVector],
    errors: Mapping[str, FockOperator] | Sequence[FockOperator],
    tol: float,
    pairwise: bool = False,
) -> DetectabilityReport:
    """Check P E P = c_E P for each error, against orthonormal codewords.

    Each error's restricted matrix must be a multiple of the identity within
    tol (off-diagonals and diagonal spread).  With pairwise=True the products
    E_a^dag E_b are checked too, upgrading detection to the correctability
    condition for the given set.
    """
    _check_codewords(codewords)
    if isinstance(errors, Mapping):
        named = list(errors.items())
    else:
        named = [(f"E{i}", op) for i, op in enumerate(errors)]
    rows = tuple(_error_row(name, op, codewords, tol) for name, op in named)
    pair_rows = ()
    if pairwise:
        acc = []
        for i, (name_a, a) in enumerate(named):
            a_dag = adjoint(a)
            for name_b, b in named[i:]:
                prod = FockOperator(a.dim, a_dag.entries @ b.entries, "dense")
                acc.append(_error_row(f"{name_a}^dag {name_b}", prod, codewords, tol))
        pair_rows = tuple(acc)
    all_pass = all(r.passed for r in rows) and all(r.passed for r in pair_rows)
    return DetectabilityReport(rows, tol, all_pass, pair_rows)


# --- logical action ---------------------------------------------------------


@dataclass(frozen=True)
class LogicalActionResult:
    matrix: np.ndarray
    aligned_fidelity: float
    global_phase: float
    passed: bool | None = None

    def to_json_dict(self) -> dict:
        return {
            "matrix": [[[z.real, z.imag] for z in row] for row in self.matrix],
            "aligned_fidelity": self.aligned_fidelity,
            "global_phase": self.global_phase,
            "pass": self.passed,
        }


def logical_action(
    op: FockOperator,
    codewords: Sequence[FockVector],
    target: np.ndarray,
    tol: float | None = None,
) -> LogicalActionResult:
    """Compare op's code-space action against a target 2x2 unitary.

    The restricted matrix is normalized by its dominant singular value (the
    truncated operator need not be unitary) and phase-aligned to the target;
    the fidelity |sum conj(T) M| / 2 is 1 exactly when they agree up to a
    global phase.
    """
    _check_codewords(codewords)
    M = restricted_matrix(op, codewords)
    s = float(np.linalg.svd(M, compute_uv=False)[0])
    if s == 0.0:
        return LogicalActionResult(M, 0.0, 0.0, False if tol is not None else None)
    Mn = M / s
    overlap = complex(np.sum(np.conj(np.asarray(target, dtype=complex)) * Mn))
    fidelity = abs(overlap) / 2
    phase = cmath.phase(overlap)
    passed = None if tol is None else fidelity >= 1 - tol
    return LogicalActionResult(Mn, fidelity, phase, passed)


def stabilizer_check(op: FockOperator, codewords: Sequence[FockVector], tol: float) -> bool:
    """True iff op restricts to the identity on the code space, up to global phase."""
    _check_codewords(codewords)
    M = restricted_matrix(op, codewords)
    tr = M[0, 0] + M[1, 1]
    if abs(tr) == 0.0:
        return False
    phase = tr / abs(tr)
    return float(np.max(np.abs(M / phase - np.eye(2)))) <= tol


# --- convergence scans ------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceScan:
    points: tuple[tuple[object, float], ...]
    monotonicity: str

    def to_json_dict(self) -> dict:
        return {
            "points": [[repr(p), m] for p, m in self.points],
            "monotonicity": self.monotonicity,
        }


def convergence_scan(builder: Callable[[object], float], params: Sequence[object]) -> ConvergenceScan:
    """Evaluate a metric over parameters and classify its monotonicity.

    Classification allows a tiny slack so float noise on genuinely flat or
    monotone series does not flip the verdict.
    """
    if not params:
        raise ValueError("params must be nonempty")
    points = tuple((p, float(builder(p))) for p in params)
    values = [m for _, m in points]
    nondecreasing = all(b >= a - MONOTONE_SLACK for a, b in zip(values, values[1:]))
    nonincreasing = all(b <= a + MONOTONE_SLACK for a, b in zip(values, values[1:]))
    constant = all(abs(b - a) <= MONOTONE_SLACK for a, b in zip(values, values[1:]))
    if constant:
        label = "constant"
    elif nondecreasing:
        label = "nondecreasing"
    elif nonincreasing:
        label = "nonincreasing"
    else:
        label = "none"
    return ConvergenceScan(points, label)


# --- exact comb-side suite --------------------------------------------------


def _phase_row(name: str, state_in, gate: str, n_fold: int, expected: Fraction, reference=None) -> dict:
    """Apply a comb gate and demand equality with the reference up to the expected phase."""
    result = combs.gkp_apply(gate, state_in, n_fold)
    base = reference if reference is not None else state_in
    same, phase = combs.comb_equal_up_to_phase(base, result)
    ok = same and phase == mod2(expected)
    return {
        "name": name,
        "pass": bool(ok),
        "metrics": {
            "phase": None if phase is None else f"{phase.numerator}/{phase.denominator}",
            "expected": f"{mod2(expected).numerator}/{mod2(expected).denominator}",
        },
    }


def gkp_exact_suite(n_fold: int) -> list[dict]:
    """Exact comb-side checks for one code order; every row carries tolerance 0.

    Covers the single-qubit gate phases on both ideal codewords, the
    stabilizers acting as identity, codeword swap under the mapped bit flip,
    the entangling gate's phase on windowed codeword products, and the
    gate-algebra identities (two half gates compose to the next gate up).
    """
    N = n_fold
    words = {j: combs.gkp_codeword(N, j) for j in (0, 1)}
    rows: list[dict] = []
    for j in (0, 1):
        rows.append(_phase_row(f"Z_on_{j}", words[j], "Z", N, Fraction(j)))
        rows.append(_phase_row(f"S_on_{j}", words[j], "S", N, Fraction(j, 2)))
        rows.append(_phase_row(f"T_on_{j}", words[j], "T", N, Fraction(j, 4)))
        rows.append(_phase_row(f"stab_q_on_{j}", words[j], "stab_q", N, Fraction(0)))
        rows.append(_phase_row(f"stab_p_on_{j}", words[j], "stab_p", N, Fraction(0)))
        rows.append(
            _phase_row(f"X_swaps_{j}", words[j], "X", N, Fraction(0), reference=words[1 - j])
        )
    # CZ acts tooth by tooth, so windowed codewords witness the ideal phases
    for j in (0, 1):
        for jp in (0, 1):
            prod = combs.product_comb(
                combs.gkp_codeword(N, j, window=2), combs.gkp_codeword(N, jp, window=2)
            )
            out = combs.gkp_apply("CZ", prod, N)
            same, phase = combs.twomode_equal_up_to_phase(prod, out)
            ok = same and phase == mod2(Fraction(j * jp))
            rows.append(
                {
                    "name": f"CZ_on_{j}{jp}",
                    "pass": bool(ok),
                    "metrics": {
                        "phase": None if phase is None else f"{phase.numerator}/{phase.denominator}",
                        "expected": f"{j * jp}/1",
                    },
                }
            )
    # composition identities on the ideal codewords
    for j in (0, 1):
        w = words[j]
        checks = [
            ("ZZ_is_stab_q", combs.gkp_apply("Z", combs.gkp_apply("Z", w, N), N),
             combs.gkp_apply("stab_q", w, N), Fraction(0)),
            ("XX_is_stab_p", combs.gkp_apply("X", combs.gkp_apply("X", w, N), N),
             combs.gkp_apply("stab_p", w, N), Fraction(0)),
        ]
        for name, got, want, expected in checks:
            same, phase = combs.comb_equal_up_to_phase(want, got)
            ok = same and phase == expected
            rows.append(
                {
                    "name": f"{name}_on_{j}",
                    "pass": bool(ok),
                    "metrics": {
                        "phase": None if phase is None else f"{phase.numerator}/{phase.denominator}",
                        "expected": "0/1",
                    },
                }
            )
        for name, double, single in (("SS_is_Z", "S", "Z"), ("TT_is_S", "T", "S")):
            got = combs.gkp_apply(double, combs.gkp_apply(double, w, N), N)
            want = combs.gkp_apply(single, w, N)
            same, phase = combs.comb_equal_up_to_phase(want, got)
            rows.append(
                {
                    "name": f"{name}_on_{j}",
                    "pass": bool(same and phase is not None),
                    "metrics": {
                        "phase": None if phase is None else f"{phase.numerator}/{phase.denominator}",
                        "expected": "any global",
                    },
                }
            )
    return rows


# --- markdown ---------------------------------------------------------------


def markdown_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    head = "| " + " | ".join(headers) + " |"
    rule = "| " + " | ".join("---" for _ in headers) + " |"
    body = ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join([head, rule, *body])


def detectability_markdown(report: DetectabilityReport) -> str:
    rows = [
        (
            r.name,
            f"{r.c_E.real:+.3e}{r.c_E.imag:+.3e}j",
            f"{r.off_diag_max:.3e}",
            f"{r.diag_spread:.3e}",
            "pass" if r.passed else "FAIL",
        )
        for r in (*report.rows, *report.pair_rows)
    ]
    return markdown_table(["error", "c_E", "off_diag_max", "diag_spread", "status"], rows)


def suite_markdown(rows: Sequence[dict]) -> str:
    table_rows = []
    for r in rows:
        metrics = ", ".join(f"{k}={v}" for k, v in sorted(r.get("metrics", {}).items()))
        table_rows.append((r["name"], metrics, "pass" if r["pass"] else "FAIL"))
    return markdown_table(["check", "metrics", "status"], table_rows)
