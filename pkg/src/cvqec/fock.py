"""Truncated number-basis states, operators, and rotation-code constructions.

Operators on the first D number states are plain complex matrices with a
structure tag.  Diagonal operators built from rational angles additionally
carry their phases as exact rationals of pi (see `phases`), which is what
makes cross-checks between independently derived gate sets exact rather
than approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidDimension, ZeroProjection
from .phases import (
    RationalLike,
    as_fraction,
    mod2,
    phase_to_complex,
    phases_to_array,
    rational_from_json,
    rational_to_json,
)

SUPPORT_TOL = 1e-12

STRUCTURES = ("diagonal", "upper_shift", "lower_shift", "dense")


def _check_structure(entries: np.ndarray, structure: str, shift: int) -> None:
    dim = entries.shape[0]
    if structure == "dense":
        return
    if structure == "diagonal":
        mask = ~np.eye(dim, dtype=bool)
    elif structure in ("upper_shift", "lower_shift"):
        if shift < 1 or shift >= dim:
            raise InvalidDimension(f"shift {shift} out of range for dim {dim}")
        k = shift if structure == "upper_shift" else -shift
        mask = ~np.eye(dim, k=k, dtype=bool)
    else:
        raise ValueError(f"unknown structure tag {structure!r}")
    if np.any(np.abs(entries[mask]) > 0):
        raise ValueError(f"entries do not match structure tag {structure!r}")


@dataclass(frozen=True)
class FockVector:
    """A vector over the first `dim` number states."""

    dim: int
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if self.dim <= 0:
            raise InvalidDimension(f"dim must be positive, got {self.dim}")
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        if amps.shape != (self.dim,):
            raise InvalidDimension(
                f"amplitude vector has shape {amps.shape}, expected ({self.dim},)"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized and abs(self.norm - 1.0) > 1e-12:
            raise ValueError("vector tagged normalized but norm deviates from 1")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.amplitudes == 0))

    def normalized_copy(self) -> "FockVector":
        n = self.norm
        if n < SUPPORT_TOL:
            raise ZeroProjection("cannot normalize a (near-)zero vector")
        return FockVector(self.dim, self.amplitudes / n, normalized=True)

    @staticmethod
    def basis(dim: int, m: int) -> "FockVector":
        if not 0 <= m < dim:
            raise InvalidDimension(f"basis index {m} outside [0, {dim})")
        amps = np.zeros(dim, dtype=complex)
        amps[m] = 1.0
        return FockVector(dim, amps, normalized=True)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "structure": "vector",
            "entries": [[z.real, z.imag] for z in self.amplitudes],
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "FockVector":
        amps = np.array([complex(re, im) for re, im in obj["entries"]])
        v = FockVector(int(obj["dim"]), amps)
        if abs(v.norm - 1.0) <= 1e-12:
            v = FockVector(v.dim, v.amplitudes, normalized=True)
        return v


@dataclass(frozen=True)
class FockOperator:
    """Matrix on the truncated number basis with a sparsity-structure tag.

    `phases` (optional) stores exact diagonal phases in units of pi for
    unit-modulus diagonal operators; `exact_diag` stores exact rational
    diagonal values for Hermitian diagonal generators.  Either implies the
    float entries agree with the exact data at materialization precision.
    """

    dim: int
    entries: np.ndarray
    structure: str = "dense"
    shift: int = 0
    phases: tuple[Fraction, ...] | None = None
    exact_diag: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.dim <= 0:
            raise InvalidDimension(f"dim must be positive, got {self.dim}")
        entries = np.asarray(self.entries, dtype=complex).copy()
        if entries.shape != (self.dim, self.dim):
            raise InvalidDimension(
                f"entries have shape {entries.shape}, expected ({self.dim}, {self.dim})"
            )
        if self.structure not in STRUCTURES:
            raise ValueError(f"unknown structure tag {self.structure!r}")
        _check_structure(entries, self.structure, self.shift)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        for name in ("phases", "exact_diag"):
            data = getattr(self, name)
            if data is None:
                continue
            if self.structure != "diagonal":
                raise ValueError(f"{name} only makes sense for diagonal operators")
            if len(data) != self.dim:
                raise InvalidDimension(f"{name} length {len(data)} != dim {self.dim}")
            object.__setattr__(self, name, tuple(Fraction(x) for x in data))

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.entries == 0))

    def to_json_dict(self) -> dict:
        out = {
            "dim": self.dim,
            "structure": self.structure,
            "entries": [[z.real, z.imag] for z in self.entries.ravel()],
        }
        if self.structure in ("upper_shift", "lower_shift"):
            out["shift"] = self.shift
        if self.phases is not None:
            out["phases"] = [rational_to_json(p, unit="pi") for p in self.phases]
        if self.exact_diag is not None:
            out["exact_diag"] = [rational_to_json(x) for x in self.exact_diag]
        return out

    @staticmethod
    def from_json_dict(obj: dict) -> "FockOperator":
        dim = int(obj["dim"])
        flat = np.array([complex(re, im) for re, im in obj["entries"]])
        phases = obj.get("phases")
        exact = obj.get("exact_diag")
        return FockOperator(
            dim,
            flat.reshape(dim, dim),
            structure=obj.get("structure", "dense"),
            shift=int(obj.get("shift", 0)),
            phases=None if phases is None else tuple(rational_from_json(p) for p in phases),
            exact_diag=None if exact is None else tuple(rational_from_json(x) for x in exact),
        )


@dataclass(frozen=True)
class TwoModeOperator:
    """Operator on a product of two truncated number-basis modes.

    Entries are indexed lexicographically: row m*dim2 + m'.  Diagonal
    two-mode phase gates keep their angles exactly, like FockOperator.
    """

    dims: tuple[int, int]
    entries: np.ndarray
    phases: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        d1, d2 = self.dims
        if d1 <= 0 or d2 <= 0:
            raise InvalidDimension(f"dims must be positive, got {self.dims}")
        total = d1 * d2
        entries = np.asarray(self.entries, dtype=complex).copy()
        if entries.shape != (total, total):
            raise InvalidDimension(
                f"entries have shape {entries.shape}, expected ({total}, {total})"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        if self.phases is not None:
            if len(self.phases) != total:
                raise InvalidDimension("phase table length mismatch")
            object.__setattr__(self, "phases", tuple(Fraction(p) for p in self.phases))


def identity(dim: int) -> FockOperator:
    return FockOperator(dim, np.eye(dim, dtype=complex), structure="diagonal")


def diagonal_phase_operator(phases: Sequence[RationalLike], dim: int | None = None) -> FockOperator:
    """Unit-modulus diagonal operator diag(e^{i pi phase_m}), phases kept exact."""
    reduced = tuple(mod2(p) for p in phases)
    if dim is None:
        dim = len(reduced)
    if len(reduced) != dim:
        raise InvalidDimension("phase list length != dim")
    return FockOperator(dim, np.diag(phases_to_array(reduced)), structure="diagonal", phases=reduced)


def diagonal_value_operator(values: Sequence[RationalLike], dim: int | None = None) -> FockOperator:
    """Hermitian diagonal operator with exact rational eigenvalues."""
    exact = tuple(as_fraction(v) for v in values)
    if dim is None:
        dim = len(exact)
    if len(exact) != dim:
        raise InvalidDimension("value list length != dim")
    return FockOperator(
        dim,
        np.diag(np.array([float(v) for v in exact], dtype=complex)),
        structure="diagonal",
        exact_diag=exact,
    )


def fock_operator(
    kind: str,
    dim: int,
    *,
    theta: float | RationalLike | None = None,
    shift: int | None = None,
) -> FockOperator:
    """Standard single-mode operators on the first `dim` number states.

    kind:
      "number"        diag(0, 1, ..., dim-1), exact
      "annihilation"  a|l> = sqrt(l)|l-1>
      "rotation"      diag(e^{i theta m}); pass theta as a Fraction to mean
                      theta = (that rational) * pi with exact phase storage,
                      or as a float in radians
      "number_shift"  sum_l |l><l+shift|, unit-amplitude lowering by `shift`
    """
    if dim <= 0:
        raise InvalidDimension(f"dim must be positive, got {dim}")
    if kind == "number":
        return diagonal_value_operator(range(dim))
    if kind == "annihilation":
        return FockOperator(
            dim,
            np.diag(np.sqrt(np.arange(1, dim)), k=1),
            structure="upper_shift",
            shift=1,
        )
    if kind == "rotation":
        if theta is None:
            raise ValueError("rotation requires theta")
        if isinstance(theta, (int, Fraction)):
            frac = as_fraction(theta)
            return diagonal_phase_operator([frac * m for m in range(dim)], dim)
        angles = float(theta) * np.arange(dim)
        return FockOperator(dim, np.diag(np.exp(1j * angles)), structure="diagonal")
    if kind == "number_shift":
        if shift is None:
            raise ValueError("number_shift requires shift")
        if not 1 <= shift < dim:
            raise InvalidDimension(f"shift {shift} outside [1, {dim})")
        return FockOperator(dim, np.eye(dim, k=shift, dtype=complex), structure="upper_shift", shift=shift)
    raise ValueError(f"unknown operator kind {kind!r}")


def adjoint(op: FockOperator) -> FockOperator:
    structure = op.structure
    if structure == "upper_shift":
        structure = "lower_shift"
    elif structure == "lower_shift":
        structure = "upper_shift"
    return FockOperator(
        op.dim,
        op.entries.conj().T,
        structure=structure,
        shift=op.shift,
        phases=None if op.phases is None else tuple(mod2(-p) for p in op.phases),
        exact_diag=op.exact_diag,
    )


def apply_operator(op: FockOperator, vec: FockVector) -> FockVector:
    if op.dim != vec.dim:
        raise InvalidDimension(f"operator dim {op.dim} != vector dim {vec.dim}")
    return FockVector(vec.dim, op.entries @ vec.amplitudes)


def inner(left: FockVector, right: FockVector) -> complex:
    if left.dim != right.dim:
        raise InvalidDimension("dimension mismatch in inner product")
    return complex(np.vdot(left.amplitudes, right.amplitudes))


def coherent_state(alpha: complex, dim: int) -> FockVector:
    """Truncated coherent state, renormalized on the first `dim` levels."""
    if dim <= 0:
        raise InvalidDimension(f"dim must be positive, got {dim}")
    amps = np.array(
        [alpha**m / math.sqrt(math.factorial(m)) for m in range(dim)], dtype=complex
    )
    return FockVector(dim, amps).normalized_copy()


def u_invariant_projector(
    spectrum: Sequence[RationalLike], s_z: RationalLike, j: int
) -> FockOperator:
    """Diagonal 0/1 projector onto generator eigenvalues (2k+j)/s_z, k integer.

    `spectrum` lists the exact eigenvalues of the diagonal generator in basis
    order; `s_z` is the logical-Z angle in units of pi.  An empty selection is
    legal and yields the zero projector (query with `FockOperator.is_zero`).
    """
    if j not in (0, 1):
        raise ValueError(f"j must be 0 or 1, got {j}")
    s = as_fraction(s_z)
    if s == 0:
        raise ValueError("s_z must be nonzero")
    picked = []
    for value in spectrum:
        q = as_fraction(value) * s
        picked.append(q.denominator == 1 and (q.numerator - j) % 2 == 0)
    diag = np.array([1.0 if p else 0.0 for p in picked], dtype=complex)
    return FockOperator(
        len(picked),
        np.diag(diag),
        structure="diagonal",
        exact_diag=tuple(Fraction(1 if p else 0) for p in picked),
    )


def rot_primitive_validity(primitive: FockVector, n_fold: int) -> bool:
    """True iff both codewords of order `n_fold` survive projection.

    Requires weight above threshold on some |kN> with k even and on some
    |kN> with k odd.
    """
    if n_fold <= 0:
        raise InvalidDimension(f"n_fold must be positive, got {n_fold}")
    amps = primitive.amplitudes
    seen = {0: False, 1: False}
    for k in range(0, (primitive.dim - 1) // n_fold + 1):
        if abs(amps[k * n_fold]) > SUPPORT_TOL:
            seen[k % 2] = True
    return seen[0] and seen[1]


def rot_codeword_from_primitive(primitive: FockVector, n_fold: int, j: int) -> FockVector:
    """Project a primitive onto the order-N codeword with logical index j.

    Computes the projection twice, by index selection (keep m = jN mod 2N)
    and by the 2N-term rotation sum, and demands the two agree to 1e-12
    before returning the normalized index-selected result.
    """
    if n_fold <= 0:
        raise InvalidDimension(f"n_fold must be positive, got {n_fold}")
    if j not in (0, 1):
        raise ValueError(f"j must be 0 or 1, got {j}")
    dim = primitive.dim
    if dim < 2 * n_fold:
        raise InvalidDimension(f"dim {dim} < 2*n_fold = {2 * n_fold}")

    m = np.arange(dim)
    selected = np.where(m % (2 * n_fold) == (j * n_fold) % (2 * n_fold), primitive.amplitudes, 0.0)

    # rotation-sum route: (1/2N) sum_s ((-1)^j R_{pi/N})^s
    rot_diag = np.exp(1j * np.pi * m / n_fold) * ((-1) ** j)
    acc = np.zeros(dim, dtype=complex)
    term = primitive.amplitudes.astype(complex)
    for _ in range(2 * n_fold):
        acc += term
        term = rot_diag * term
    acc /= 2 * n_fold

    if np.max(np.abs(acc - selected)) > 1e-12:
        raise RuntimeError("projector routes disagree beyond 1e-12; numerical fault")

    norm = np.linalg.norm(selected)
    if norm < SUPPORT_TOL:
        raise ZeroProjection(
            f"primitive has no weight on the j={j} sector of order {n_fold}"
        )
    return FockVector(dim, selected / norm, normalized=True)


def rot_logical_op(kind: str, n_fold: int, dim: int) -> FockOperator:
    """Logical operators of the order-N rotation code on `dim` levels.

    Z, S, T are diagonal with exact phases m/N, m^2/(2N^2), m^4/(4N^4)
    (units of pi).  X is the unit-amplitude lowering shift by N.  H is the
    dense kernel (2 pi)^{-1/2} e^{-i pi m m' / N^2}.
    """
    if n_fold <= 0:
        raise InvalidDimension(f"n_fold must be positive, got {n_fold}")
    if dim <= 0:
        raise InvalidDimension(f"dim must be positive, got {dim}")
    N = n_fold
    if kind == "Z":
        return diagonal_phase_operator([Fraction(m, N) for m in range(dim)], dim)
    if kind == "S":
        return diagonal_phase_operator([Fraction(m * m, 2 * N * N) for m in range(dim)], dim)
    if kind == "T":
        return diagonal_phase_operator([Fraction(m**4, 4 * N**4) for m in range(dim)], dim)
    if kind == "X":
        if dim <= N:
            raise InvalidDimension(f"dim {dim} too small for shift {N}")
        return fock_operator("number_shift", dim, shift=N)
    if kind == "H":
        m = np.arange(dim)
        kernel = np.exp(-1j * np.pi * np.outer(m, m) / N**2) / math.sqrt(2 * math.pi)
        return FockOperator(dim, kernel, structure="dense")
    raise ValueError(f"unknown logical operator kind {kind!r}")


def crot(n_fold: int, m_fold: int, dim1: int, dim2: int) -> TwoModeOperator:
    """Two-mode diagonal phase gate e^{i pi m m' / (N M)} on |m, m'>."""
    if n_fold <= 0 or m_fold <= 0:
        raise InvalidDimension("orders must be positive")
    phases = []
    for m in range(dim1):
        for mp in range(dim2):
            phases.append(mod2(Fraction(m * mp, n_fold * m_fold)))
    return TwoModeOperator(
        (dim1, dim2), np.diag(phases_to_array(phases)), phases=tuple(phases)
    )


def approx_ideal_rot_codeword(n_fold: int, j: int, dim: int, eps: float) -> FockVector:
    """Normalized envelope comb sum_k e^{-eps (2k+j)N} |(2k+j)N> below `dim`."""
    if n_fold <= 0:
        raise InvalidDimension(f"n_fold must be positive, got {n_fold}")
    if j not in (0, 1):
        raise ValueError(f"j must be 0 or 1, got {j}")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    support = np.arange(j * n_fold, dim, 2 * n_fold)
    if support.size == 0:
        raise InvalidDimension(f"dim {dim} leaves no support for j={j}, N={n_fold}")
    amps = np.zeros(dim, dtype=complex)
    amps[support] = np.exp(-eps * support.astype(float))
    return FockVector(dim, amps).normalized_copy()


def operators_close(a: FockOperator, b: FockOperator, tol: float = 1e-12) -> bool:
    return a.dim == b.dim and bool(np.max(np.abs(a.entries - b.entries)) <= tol)


def phases_equal(a: FockOperator, b: FockOperator) -> bool:
    """Exact diagonal-phase comparison; both operators must carry phases."""
    if a.phases is None or b.phases is None:
        raise ValueError("both operators must carry exact phases")
    return a.phases == b.phases
