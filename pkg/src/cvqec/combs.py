"""Momentum combs with exact rational arithmetic.

States here are formal combs of momentum eigenstates.  Support indices are
the raw momentum values (exact rationals); in the integer-spacing regime the
order-N code has codeword teeth at (2k+j)N.  Magnitudes are nonnegative
rationals and phases are rationals in units of pi, reduced into [0, 2), so
every gate action below is exact: there is no tolerance anywhere in this
module.

Gate amounts are given in logical units: a q-translation by r acquires phase
-r*(v/N)*pi at raw index v, and a p-translation by r shifts raw indices by
r*N.  Quadratic and quartic phase gates act through the logical index
l = v/N as l^2/2 and l^4/4 (units of pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import UnitMismatch, ZeroProjection
from .phases import RationalLike, as_fraction, mod2, rational_from_json, rational_to_json


@dataclass(frozen=True)
class CombUnit:
    """Spacing descriptor: the code's base momentum step is scale*(sqrt pi)^exp.

    The integer-spacing regime of an order-N code is CombUnit(0, N): raw
    indices are dimensionless momentum values and one logical step spans N
    of them.
    """

    sqrt_pi_exp: int
    scale: Fraction

    def __post_init__(self):
        if self.sqrt_pi_exp not in (-1, 0, 1):
            raise ValueError("sqrt_pi_exp must be -1, 0, or 1")
        object.__setattr__(self, "scale", as_fraction(self.scale))
        if self.scale <= 0:
            raise ValueError("unit scale must be positive")


def bridge_unit(n_fold: int) -> CombUnit:
    return CombUnit(0, Fraction(n_fold))


@dataclass(frozen=True)
class CombTooth:
    index: Fraction
    magnitude: Fraction
    phase: Fraction


@dataclass(frozen=True)
class PeriodicSupport:
    """Teeth at offset + t*period (t over all integers), uniform magnitude.

    Tooth t carries phase pattern[t mod len(pattern)].  The pattern is any
    finite cycle; constructors reduce it to its minimal period.
    """

    offset: Fraction
    period: int
    pattern: tuple[Fraction, ...]
    magnitude: Fraction = Fraction(1)


@dataclass(frozen=True)
class CombState:
    unit: CombUnit
    entries: tuple[CombTooth, ...] | None = None
    periodic: PeriodicSupport | None = None

    def __post_init__(self):
        if (self.entries is None) == (self.periodic is None):
            raise ValueError("exactly one of entries/periodic must be given")

    @property
    def support_kind(self) -> str:
        return "finite" if self.entries is not None else "periodic"


@dataclass(frozen=True)
class TwoModeTooth:
    index1: Fraction
    index2: Fraction
    magnitude: Fraction
    phase: Fraction


@dataclass(frozen=True)
class TwoModeComb:
    units: tuple[CombUnit, CombUnit]
    entries: tuple[TwoModeTooth, ...]


def finite_comb(unit: CombUnit, teeth: Iterable[tuple[RationalLike, RationalLike, RationalLike]]) -> CombState:
    """Build a finite comb; zero-magnitude teeth are dropped, indices must be distinct."""
    cleaned = []
    for index, magnitude, phase in teeth:
        mag = as_fraction(magnitude)
        if mag < 0:
            raise ValueError("magnitudes must be nonnegative")
        if mag == 0:
            continue
        cleaned.append(CombTooth(as_fraction(index), mag, mod2(phase)))
    cleaned.sort(key=lambda t: t.index)
    for a, b in zip(cleaned, cleaned[1:]):
        if a.index == b.index:
            raise ValueError(f"duplicate tooth index {a.index}")
    return CombState(unit, entries=tuple(cleaned))


def _minimal_cycle(pattern: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(pattern)
    for d in range(1, n + 1):
        if n % d == 0 and all(pattern[i] == pattern[(i + d) % n] for i in range(n)):
            return tuple(pattern[:d])
    return tuple(pattern)


def periodic_comb(
    unit: CombUnit,
    offset: RationalLike,
    period: int,
    pattern: Sequence[RationalLike],
    magnitude: RationalLike = 1,
) -> CombState:
    """Build a periodic comb in canonical form (offset in [0, period), minimal pattern)."""
    if period <= 0:
        raise ValueError("period must be a positive integer")
    if not pattern:
        raise ValueError("pattern must be nonempty")
    mag = as_fraction(magnitude)
    if mag <= 0:
        raise ValueError("periodic magnitude must be positive")
    rho = as_fraction(offset)
    rho_canon = rho % period
    shift = int((rho - rho_canon) / period)
    cycle = [mod2(p) for p in pattern]
    n = len(cycle)
    rotated = tuple(cycle[(t - shift) % n] for t in range(n))
    return CombState(
        unit,
        periodic=PeriodicSupport(rho_canon, period, _minimal_cycle(rotated), mag),
    )


def _require_regime(state_unit: CombUnit, n_fold: int) -> None:
    if state_unit != bridge_unit(n_fold):
        raise UnitMismatch(
            f"state unit {state_unit} is not the integer-spacing regime of order {n_fold}"
        )


def gkp_codeword(n_fold: int, j: int, window: int | None = None) -> CombState:
    """Order-N comb codeword: teeth at (2k+j)N, uniform magnitude, zero phase.

    window=None gives the periodic (infinite) comb; window=W keeps
    k = -W..W only.
    """
    if n_fold <= 0:
        raise ValueError("n_fold must be positive")
    if j not in (0, 1):
        raise ValueError("j must be 0 or 1")
    unit = bridge_unit(n_fold)
    if window is None:
        return periodic_comb(unit, j * n_fold, 2 * n_fold, [Fraction(0)])
    if window < 0:
        raise ValueError("window must be nonnegative")
    teeth = [
        (Fraction((2 * k + j) * n_fold), Fraction(1), Fraction(0))
        for k in range(-window, window + 1)
    ]
    return finite_comb(unit, teeth)


# --- exact polynomial phase machinery for periodic supports ---------------


def _newton_coeffs(values: Sequence[Fraction]) -> list[Fraction]:
    """Forward-difference coefficients at 0: f(t) = sum_i c_i * C(t, i)."""
    row = list(values)
    coeffs = []
    while row:
        coeffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return coeffs


def _binomial(t: int, i: int) -> Fraction:
    num = Fraction(1)
    for s in range(i):
        num *= t - s
    return num / math.factorial(i)


def _eval_newton(coeffs: Sequence[Fraction], t: int) -> Fraction:
    return sum((c * _binomial(t, i) for i, c in enumerate(coeffs)), Fraction(0))


def _monomial_coeffs(newton: Sequence[Fraction]) -> list[Fraction]:
    """Convert binomial-basis coefficients to monomial coefficients."""
    poly = [Fraction(0)] * (len(newton) or 1)
    for i, c in enumerate(newton):
        # expand C(t, i) = t(t-1)...(t-i+1)/i! as a polynomial in t
        basis = [Fraction(1)]
        for s in range(i):
            shifted = [Fraction(0)] + basis
            scaled = [(-s) * b for b in basis] + [Fraction(0)]
            basis = [x + y for x, y in zip(shifted, scaled)]
        for d, b in enumerate(basis):
            poly[d] += c * b / math.factorial(i)
    return poly


def _is_valid_period(delta_newton: Sequence[Fraction], degree: int, T: int) -> bool:
    # g(t) = delta(t+T) - delta(t) must lie in 2Z for every integer t,
    # i.e. its binomial-basis coefficients are even integers.
    g_values = [
        _eval_newton(delta_newton, t + T) - _eval_newton(delta_newton, t)
        for t in range(degree + 1)
    ]
    for b in _newton_coeffs(g_values):
        if b.denominator != 1 or b.numerator % 2 != 0:
            return False
    return True


def _phase_cycle_period(delta_newton: Sequence[Fraction], degree: int) -> int:
    mono = _monomial_coeffs(delta_newton)
    q = math.lcm(*(c.denominator for c in mono)) if mono else 1
    cap = 2 * q
    for T in range(1, cap + 1):
        if _is_valid_period(delta_newton, degree, T):
            return T
    raise RuntimeError("no phase period found below the guaranteed bound")


def _apply_phase_fn(
    state: CombState,
    n_fold: int,
    fn: Callable[[Fraction], Fraction],
    degree: int,
) -> CombState:
    _require_regime(state.unit, n_fold)
    N = n_fold
    if state.entries is not None:
        teeth = [
            (t.index, t.magnitude, mod2(t.phase + fn(t.index / N)))
            for t in state.entries
        ]
        return finite_comb(state.unit, teeth)
    p = state.periodic
    delta_values = [fn((p.offset + t * p.period) / N) for t in range(degree + 1)]
    delta_newton = _newton_coeffs(delta_values)
    T = _phase_cycle_period(delta_newton, degree)
    L = len(p.pattern)
    length = math.lcm(L, T)
    new_pattern = [
        mod2(p.pattern[t % L] + _eval_newton(delta_newton, t)) for t in range(length)
    ]
    return periodic_comb(state.unit, p.offset, p.period, new_pattern, p.magnitude)


def _translate_q(state: CombState, n_fold: int, r: Fraction) -> CombState:
    return _apply_phase_fn(state, n_fold, lambda l: -r * l, degree=1)


def _translate_p(state: CombState, n_fold: int, r: Fraction) -> CombState:
    _require_regime(state.unit, n_fold)
    shift = r * n_fold
    if state.entries is not None:
        teeth = [(t.index + shift, t.magnitude, t.phase) for t in state.entries]
        return finite_comb(state.unit, teeth)
    p = state.periodic
    return periodic_comb(state.unit, p.offset + shift, p.period, p.pattern, p.magnitude)


def _apply_cz(state: TwoModeComb, n_fold: int) -> TwoModeComb:
    for u in state.units:
        _require_regime(u, n_fold)
    N = n_fold
    teeth = tuple(
        TwoModeTooth(
            t.index1,
            t.index2,
            t.magnitude,
            mod2(t.phase - (t.index1 / N) * (t.index2 / N)),
        )
        for t in state.entries
    )
    return TwoModeComb(state.units, teeth)


def gkp_apply(
    kind: str,
    state: CombState | TwoModeComb,
    n_fold: int,
    amount: RationalLike | None = None,
):
    """Apply a comb gate exactly.

    Single-mode kinds: Z, S, T, X, stab_q, stab_p, translate_q, translate_p
    (the last two take `amount` in logical units).  CZ acts on a TwoModeComb.
    Amounts must be exact rationals; floats raise NonRationalPhase.
    """
    if kind == "CZ":
        if not isinstance(state, TwoModeComb):
            raise TypeError("CZ needs a TwoModeComb")
        return _apply_cz(state, n_fold)
    if not isinstance(state, CombState):
        raise TypeError(f"{kind} needs a single-mode CombState")
    if kind == "Z":
        return _translate_q(state, n_fold, Fraction(1))
    if kind == "stab_q":
        return _translate_q(state, n_fold, Fraction(2))
    if kind == "translate_q":
        if amount is None:
            raise ValueError("translate_q requires amount")
        return _translate_q(state, n_fold, as_fraction(amount))
    if kind == "X":
        return _translate_p(state, n_fold, Fraction(1))
    if kind == "stab_p":
        return _translate_p(state, n_fold, Fraction(2))
    if kind == "translate_p":
        if amount is None:
            raise ValueError("translate_p requires amount")
        return _translate_p(state, n_fold, as_fraction(amount))
    if kind == "S":
        return _apply_phase_fn(state, n_fold, lambda l: l * l / 2, degree=2)
    if kind == "T":
        return _apply_phase_fn(state, n_fold, lambda l: l**4 / 4, degree=4)
    raise ValueError(f"unknown comb gate {kind!r}")


def comb_equal_up_to_phase(a: CombState, b: CombState) -> tuple[bool, Fraction | None]:
    """Exact equality test modulo one global phase.

    Returns (True, phase) with b = e^{i pi phase} a when supports and
    magnitudes coincide and all phase differences agree; (False, None)
    otherwise.
    """
    if a.unit != b.unit:
        raise UnitMismatch("combs live in different unit regimes")
    if a.support_kind != b.support_kind:
        raise ValueError("support kinds differ")
    if a.entries is not None:
        if len(a.entries) != len(b.entries):
            return (False, None)
        if not a.entries:
            return (True, Fraction(0))
        diffs = set()
        for ta, tb in zip(a.entries, b.entries):
            if ta.index != tb.index or ta.magnitude != tb.magnitude:
                return (False, None)
            diffs.add(mod2(tb.phase - ta.phase))
        return (True, diffs.pop()) if len(diffs) == 1 else (False, None)
    pa, pb = a.periodic, b.periodic
    if pa.offset != pb.offset or pa.period != pb.period or pa.magnitude != pb.magnitude:
        return (False, None)
    span = math.lcm(len(pa.pattern), len(pb.pattern))
    diffs = {
        mod2(pb.pattern[t % len(pb.pattern)] - pa.pattern[t % len(pa.pattern)])
        for t in range(span)
    }
    return (True, diffs.pop()) if len(diffs) == 1 else (False, None)


def twomode_equal_up_to_phase(a: TwoModeComb, b: TwoModeComb) -> tuple[bool, Fraction | None]:
    if a.units != b.units:
        raise UnitMismatch("two-mode combs live in different unit regimes")
    if len(a.entries) != len(b.entries):
        return (False, None)
    if not a.entries:
        return (True, Fraction(0))
    key = lambda t: (t.index1, t.index2)
    diffs = set()
    for ta, tb in zip(sorted(a.entries, key=key), sorted(b.entries, key=key)):
        if key(ta) != key(tb) or ta.magnitude != tb.magnitude:
            return (False, None)
        diffs.add(mod2(tb.phase - ta.phase))
    return (True, diffs.pop()) if len(diffs) == 1 else (False, None)


def product_comb(a: CombState, b: CombState) -> TwoModeComb:
    """Tensor product of two finite combs."""
    if a.entries is None or b.entries is None:
        raise ValueError("product_comb needs finite combs")
    teeth = tuple(
        TwoModeTooth(ta.index, tb.index, ta.magnitude * tb.magnitude, mod2(ta.phase + tb.phase))
        for ta in a.entries
        for tb in b.entries
    )
    return TwoModeComb((a.unit, b.unit), teeth)


def _solve_lattice_congruence(
    offset: Fraction, period: int, target_offset: Fraction, target_period: int
) -> tuple[int, int] | None:
    """Solve offset + t*period = target_offset (mod target_period) over t.

    Returns (t0, step) describing all solutions t = t0 + s*step, or None.
    """
    den = offset.denominator
    rhs_frac = (target_offset - offset) * den
    if rhs_frac.denominator != 1:
        return None
    rhs = rhs_frac.numerator
    a = period * den
    modulus = target_period * den
    g = math.gcd(a, modulus)
    if rhs % g != 0:
        return None
    reduced_mod = modulus // g
    t0 = ((rhs // g) * pow(a // g, -1, reduced_mod)) % reduced_mod if reduced_mod > 1 else 0
    return (t0, reduced_mod)


def trans_projector_apply(state: CombState, j: int, n_fold: int) -> CombState:
    """Keep the teeth whose index lies in (2Z + j) * N; phases and magnitudes stay."""
    if j not in (0, 1):
        raise ValueError("j must be 0 or 1")
    _require_regime(state.unit, n_fold)
    N = n_fold
    if state.entries is not None:
        kept = []
        for t in state.entries:
            q = (t.index - j * N) / (2 * N)
            if q.denominator == 1:
                kept.append((t.index, t.magnitude, t.phase))
        if not kept:
            raise ZeroProjection(f"no teeth in the j={j} sector of order {N}")
        return finite_comb(state.unit, kept)
    p = state.periodic
    sol = _solve_lattice_congruence(p.offset, p.period, Fraction(j * N), 2 * N)
    if sol is None:
        raise ZeroProjection(f"lattice misses the j={j} sector of order {N}")
    t0, step = sol
    L = len(p.pattern)
    length = L // math.gcd(L, step)
    new_pattern = [p.pattern[(t0 + s * step) % L] for s in range(length)]
    return periodic_comb(
        state.unit, p.offset + t0 * p.period, p.period * step, new_pattern, p.magnitude
    )


def trans_primitive_validity(state: CombState, n_fold: int) -> bool:
    """True iff the comb meets both codeword sectors of order N."""
    _require_regime(state.unit, n_fold)
    N = n_fold
    if state.entries is not None:
        seen = {0: False, 1: False}
        for t in state.entries:
            q = t.index / N
            if q.denominator == 1:
                seen[q.numerator % 2] = True
        return seen[0] and seen[1]
    p = state.periodic
    return all(
        _solve_lattice_congruence(p.offset, p.period, Fraction(j * N), 2 * N) is not None
        for j in (0, 1)
    )


def teeth_in_range(state: CombState, lo: int, hi: int) -> list[CombTooth]:
    """All teeth with lo <= index < hi, materialized as CombTooth records."""
    if state.entries is not None:
        return [t for t in state.entries if lo <= t.index < hi]
    p = state.periodic
    t_min = math.ceil((lo - p.offset) / p.period)
    t_max = math.floor((hi - p.offset) / p.period)
    if Fraction(t_max) * p.period + p.offset >= hi:
        t_max -= 1
    out = []
    L = len(p.pattern)
    for t in range(t_min, t_max + 1):
        out.append(CombTooth(p.offset + t * p.period, p.magnitude, p.pattern[t % L]))
    return out


# --- serialization ---------------------------------------------------------


def comb_to_json_dict(state: CombState) -> dict:
    out = {
        "unit": {
            "sqrtPiExp": state.unit.sqrt_pi_exp,
            "rational": rational_to_json(state.unit.scale),
        },
        "kind": state.support_kind,
    }
    if state.entries is not None:
        out["entries"] = [
            {
                "index": rational_to_json(t.index),
                "magnitude": rational_to_json(t.magnitude),
                "phase": rational_to_json(t.phase, unit="pi"),
            }
            for t in state.entries
        ]
    else:
        p = state.periodic
        out["offset"] = rational_to_json(p.offset)
        out["period"] = p.period
        out["pattern"] = [rational_to_json(ph, unit="pi") for ph in p.pattern]
        out["magnitude"] = rational_to_json(p.magnitude)
    return out


def comb_from_json_dict(obj: dict) -> CombState:
    unit = CombUnit(int(obj["unit"]["sqrtPiExp"]), rational_from_json(obj["unit"]["rational"]))
    if obj["kind"] == "finite":
        teeth = [
            (
                rational_from_json(e["index"]),
                rational_from_json(e["magnitude"]),
                rational_from_json(e["phase"]),
            )
            for e in obj["entries"]
        ]
        return finite_comb(unit, teeth)
    return periodic_comb(
        unit,
        rational_from_json(obj["offset"]),
        int(obj["period"]),
        [rational_from_json(p) for p in obj["pattern"]],
        rational_from_json(obj.get("magnitude", {"num": 1, "den": 1})),
    )
