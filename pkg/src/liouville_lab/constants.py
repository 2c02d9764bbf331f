"""Closed-form approximation constants, scalar equations, and the
parameter search for the sign-pattern (Schmidt-type) witnesses.

Conventions: omega-family constants are indexed j = 1..k+1; infinity is a
first-class value (float('inf')), never a large stand-in.  Everything on
the certified path is exact rational; bisection is exact-rational too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .construct import EtaSpec
from .numeric import MixedSequence

INF = float("inf")

Extended = Fraction | float  # finite rational or +inf


def _is_inf(v: Extended) -> bool:
    return isinstance(v, float) and math.isinf(v)


# ---------------------------------------------------------------------------
# transfer between omega-side and psi-side constants


def transfer(value: Extended, k: int) -> Extended:
    """The involution pairing omega_j with psi-underbar_j (and omega-hat_j
    with psi-overbar_j): (1+a)(1+b) = (k+1)/k.  Infinity maps to -1 and
    back; finite input at or below -1 is outside the domain."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if _is_inf(value):
        return Fraction(-1)
    v = Fraction(value) if not isinstance(value, Fraction) else value
    if v == -1:
        return INF
    if v < -1:
        raise ValueError(f"transfer undefined for value {v} <= -1")
    return Fraction(k + 1, k) / (1 + v) - 1


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ConstantEntry:
    """One constant with its epistemic status: 'equal' (proved closed form),
    'lower' (proved lower bound), 'estimate' (finite-window surrogate),
    'unproven' (stated without proof; emitted for empirical comparison)."""

    value: Extended
    kind: str

    def __post_init__(self):
        if self.kind not in ("equal", "lower", "estimate", "unproven"):
            raise ValueError(f"bad kind {self.kind}")


@dataclass(frozen=True)
class ConstantsReport:
    k: int
    omega: tuple[ConstantEntry, ...]  # j = 1..k+1
    omega_hat: tuple[ConstantEntry, ...]  # j = 1..k+1
    source: str
    gate_ok: bool = True
    window: dict = field(default_factory=dict)

    def psi_low(self, j: int) -> Extended:
        return transfer(self.omega[j - 1].value, self.k)

    def psi_high(self, j: int) -> Extended:
        return transfer(self.omega_hat[j - 1].value, self.k)

    def omega_value(self, j: int) -> Extended:
        return self.omega[j - 1].value

    def omega_hat_value(self, j: int) -> Extended:
        return self.omega_hat[j - 1].value


# ---------------------------------------------------------------------------
# the eta-route constants (Liouville case)


def wp(spec: EtaSpec, j: int) -> Extended:
    """omega_j for the eta-profile construction: infinity at j=1, then the
    running maximum of trailing-gap quotients
    max over l of eta_{k+3-j-l} / (eta_1+...+eta_{k+1-l})."""
    k = spec.k
    if not 1 <= j <= k + 1:
        raise ValueError(f"j must be in 1..{k + 1}")
    if j == 1:
        return INF
    sigma = [Fraction(0)] + [sum(spec.eta[:t], Fraction(0)) for t in range(1, k + 1)]
    best = Fraction(0)
    for el in range(1, k + 3 - j):
        num = spec.eta[k + 2 - j - el]  # eta_{k+3-j-l}, 1-based
        best = max(best, num / sigma[k + 1 - el])
    return best


def wp_hat1(spec: EtaSpec) -> Fraction:
    """omega-hat_1 for the eta route: the minimum of the same quotient
    family whose maximum gives omega_2."""
    k = spec.k
    sigma = [Fraction(0)] + [sum(spec.eta[:t], Fraction(0)) for t in range(1, k + 1)]
    return min(spec.eta[k - el] / sigma[k + 1 - el] for el in range(1, k + 1))


def eta_constants(spec: EtaSpec) -> ConstantsReport:
    """Full report for the eta route: omega_j as above, omega-hat_1 the
    minimum quotient, omega-hat_j = 0 beyond."""
    k = spec.k
    omega = tuple(ConstantEntry(wp(spec, j), "equal") for j in range(1, k + 2))
    hats = [ConstantEntry(wp_hat1(spec), "equal")]
    hats += [ConstantEntry(Fraction(0), "equal") for _ in range(k)]
    return ConstantsReport(k=k, omega=omega, omega_hat=tuple(hats), source="eta")


# ---------------------------------------------------------------------------
# the geometric route (finite omega)


def korolar_constants(
    C: Extended, k: int, d: int = 0, remark_mode: bool = False
) -> ConstantsReport:
    """Closed forms when the mixed-sequence ratio tends to C.

    d = 0 is the strict case (every ratio > 2): equalities for the first
    k-1 constants.  d >= 1 relaxes the growth gate to kappa_d and truncates
    the equality range to k-d.  remark_mode additionally emits the sharper
    tail values stated without proof, flagged 'unproven'.
    """
    if not 0 <= d <= k - 1:
        raise ValueError(f"d must be in 0..{k - 1}")
    if _is_inf(C):
        # Degenerate limit: omega infinite, omega_2 = omega-hat = 1, rest 0.
        omega = [ConstantEntry(INF, "equal"), ConstantEntry(Fraction(1), "equal")]
        omega += [ConstantEntry(Fraction(0), "equal") for _ in range(k - 1)]
        hats = [ConstantEntry(Fraction(1), "equal")]
        hats += [ConstantEntry(Fraction(0), "equal") for _ in range(k)]
        return ConstantsReport(
            k=k, omega=tuple(omega), omega_hat=tuple(hats), source="geometric C=inf"
        )
    C = Fraction(C)
    if d == 0:
        if C < 2:
            raise ValueError(f"d=0 requires C >= 2, got {C}")
    else:
        kd = kappa(d, Fraction(1, 10**15))
        if C < kd:
            raise ValueError(f"d={d} requires C >= kappa_d (~{float(kd):.6f}), got {C}")
    n_eq = k - max(d, 1)  # omega_j and omega-hat_j are equalities for j <= n_eq
    omega: list[ConstantEntry] = []
    hats: list[ConstantEntry] = []
    for j in range(1, k + 2):
        val = (C - 1) / C ** (j - 1)
        omega.append(ConstantEntry(val, "equal" if j <= n_eq else "lower"))
        hval = (C - 1) / C**j
        hats.append(ConstantEntry(hval, "equal" if j <= n_eq else "lower"))
    if remark_mode and d == 0:
        hats[k - 1] = ConstantEntry((C - 1) / (C**k - 1), "unproven")  # hat_k
        omega[k] = ConstantEntry(Fraction(1) / C ** (k - 1), "unproven")  # omega_{k+1}
        hats[k] = ConstantEntry(Fraction(1) / (C**k - 1), "unproven")  # hat_{k+1}
    return ConstantsReport(
        k=k,
        omega=tuple(omega),
        omega_hat=tuple(hats),
        source=f"geometric C={C}" + (f" d={d}" if d else "") + (" remark" if remark_mode else ""),
    )


def satz2_constants(
    b: MixedSequence, k: int, d: int | None = None, window: int | None = None
) -> ConstantsReport:
    """Finite-window estimates of the gap-quotient constants of the
    geometric route, evaluated on an explicit mixed sequence.

    The j-th constant reads the (j-1 steps back) gap over the current term:
    omega_j ~ max over the window of (b_{n-j+2}-b_{n-j+1})/b_n and
    omega-hat_j ~ min of (b_{n-j+1}-b_{n-j})/b_n.  Entries are estimates,
    never limits; the equality range claimed by the theorems (k-1, or k-d
    when the relaxed gate with d applies) is recorded in `window`.
    """
    bs = b.terms
    N = len(bs)
    W = window if window is not None else max(2, N // 2)
    if W < 1 or N < k + 2:
        raise ValueError(f"sequence too short ({N} terms) for k={k}")
    gap = [bs[i + 1] - bs[i] for i in range(N - 1)]

    def est_max(j: int) -> Fraction | None:
        vals = [
            Fraction(gap[i - j + 1], bs[i])
            for i in range(max(j - 1, N - W), N)
            if 0 <= i - j + 1 < N - 1
        ]
        return max(vals) if vals else None

    def est_min(j: int) -> Fraction | None:
        vals = [
            Fraction(gap[i - j], bs[i])
            for i in range(max(j, N - W), N)
            if 0 <= i - j < N - 1
        ]
        return min(vals) if vals else None

    from .construct import validate_growth

    growth = validate_growth(b, d=d)
    if d is None:
        gate_ok = growth.ratio_gate_2
        n_eq = k - 1
    else:
        if not 1 <= d <= k - 1:
            raise ValueError(f"d must be in 1..{k - 1}")
        gate_ok = bool(growth.ratio_gate_kappa) and growth.gaps_increasing
        n_eq = k - d
    omega: list[ConstantEntry] = []
    hats: list[ConstantEntry] = []
    for j in range(1, k + 2):
        mx, mn = est_max(j), est_min(j)
        if mx is None or mn is None:
            raise ValueError(f"window too short to estimate constants at j={j}")
        omega.append(ConstantEntry(mx, "estimate"))
        hats.append(ConstantEntry(mn, "estimate"))
    return ConstantsReport(
        k=k,
        omega=tuple(omega),
        omega_hat=tuple(hats),
        source="gap quotients" + (f" d={d}" if d is not None else ""),
        gate_ok=gate_ok,
        window={
            "window": W,
            "equality_range": n_eq if gate_ok else 0,
            "min_ratio": growth.min_ratio,
        },
    )


# ---------------------------------------------------------------------------
# scalar equations


def kappa(d: int, tol: Fraction | float = Fraction(1, 10**13)) -> Fraction:
    """Largest real root of x**d - x**(d-1) - 1, by exact-rational bisection
    on (1 + 1/d, 2]; the result r satisfies |P_d(r)| < tol exactly."""
    if d < 1:
        raise ValueError("d must be >= 1")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if d == 1:
        return Fraction(2)

    def P(x: Fraction) -> Fraction:
        return x**d - x ** (d - 1) - 1

    lo, hi = Fraction(1) + Fraction(1, d), Fraction(2)
    # P(lo) < 0 < P(hi) for d >= 2
    while True:
        mid = (lo + hi) / 2
        v = P(mid)
        if -tol < v < tol:
            return mid
        if v < 0:
            lo = mid
        else:
            hi = mid


def phi(u: int, alpha: Fraction) -> Fraction:
    """alpha**u over the geometric sum 1 + alpha + ... + alpha**u;
    increasing on (0,1), with phi(u, 1) = 1/(u+1)."""
    if u < 1:
        raise ValueError("u must be >= 1")
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0,1], got {alpha}")
    return alpha**u / sum(alpha**i for i in range(u + 1))


def psi_fn(u: int, x: Fraction) -> Fraction:
    """(x-1)/x**u; increases up to x = u/(u-1), then decreases to 0."""
    if u < 1:
        raise ValueError("u must be >= 1")
    x = Fraction(x)
    if x <= 1:
        raise ValueError(f"x must exceed 1, got {x}")
    return (x - 1) / x**u


def psi_peak(u: int) -> Extended:
    """Argmax of psi_fn(u, .): u/(u-1) for u >= 2, +inf for u = 1."""
    if u < 1:
        raise ValueError("u must be >= 1")
    return INF if u == 1 else Fraction(u, u - 1)


def r_bound(k: int) -> float:
    """Upper limit R(k) = k-1 + (k-2) * log(k**(1/(k-2)) - 1)/log(k) for the
    reachable sign-pattern index."""
    if k < 3:
        raise ValueError("k must be >= 3")
    return k - 1 + (k - 2) * math.log(k ** (1 / (k - 2)) - 1) / math.log(k)


# ---------------------------------------------------------------------------
# sign-pattern witnesses


@dataclass(frozen=True)
class SchmidtWitness:
    """A ratio C0 > kappa_{k-T} with psi_fn(T-1, C0) < 1/k < psi_fn(T-2, C0):
    the geometric construction at C0 then has omega_T < 1/k < omega-hat_{T-2},
    the sign pattern psi-overbar_{T-2} < 0 < psi-underbar_T."""

    k: int
    T: int
    C0: Fraction
    omega_T: Fraction
    omega_hat_Tm2: Fraction

    @property
    def d(self) -> int:
        return self.k - self.T


def kappa_upper_rational(d: int, slack: Fraction = Fraction(1, 10**9)) -> Fraction:
    """A rational strictly above kappa_d (exact: P_d there is positive)."""
    if d == 1:
        return Fraction(2) + slack
    r = kappa(d, slack)
    while r**d - r ** (d - 1) - 1 <= 0:
        r += slack
    return r


def schmidt_params(k: int, T: int) -> SchmidtWitness:
    """Find C0 for the (k, T) sign pattern, 3 <= T <= R(k), by walking the
    decreasing branch of psi_fn(T-1, .) past its crossing of 1/k.  All three
    defining inequalities are verified exactly in rational arithmetic."""
    if k < 4:
        raise ValueError(f"the ratio-form witness needs k >= 4 (R({k}) < 3)")
    if T < 3 or T > r_bound(k):
        raise ValueError(f"T must satisfy 3 <= T <= R({k}) = {r_bound(k):.4f}")
    d = k - T
    if d < 1:
        raise ValueError(f"k - T must be >= 1, got {d}")
    target = Fraction(1, k)
    lo = max(Fraction(psi_peak(T - 1)), kappa_upper_rational(d))
    hi = lo + 1
    while psi_fn(T - 1, hi) >= target:
        hi += 1
    # Bisect to a C0 just right of the crossing, keeping psi_fn(T-2) above 1/k.
    for _ in range(200):
        mid = (lo + hi) / 2
        if psi_fn(T - 1, mid) < target:
            hi = mid
        else:
            lo = mid
        if psi_fn(T - 1, hi) < target < psi_fn(T - 2, hi):
            break
    C0 = hi
    # Exact verification (rational comparisons, plus positivity of P_d at C0).
    if not psi_fn(T - 1, C0) < target:
        raise ArithmeticError("witness search failed the upper inequality")
    if not target < psi_fn(T - 2, C0):
        raise ArithmeticError("witness search failed the lower inequality")
    if not C0**d - C0 ** (d - 1) - 1 > 0:
        raise ArithmeticError("witness search failed the growth gate")
    return SchmidtWitness(
        k=k, T=T, C0=C0, omega_T=psi_fn(T - 1, C0), omega_hat_Tm2=psi_fn(T - 2, C0)
    )


def schmidt_eta_witness(k: int, r: int) -> tuple[Fraction, EtaSpec]:
    """The Liouville-route witness for the pattern index r (3 <= r <= k+1):
    an alpha in (0,1) with phi(r-2, alpha) < 1/k < phi(r-3, alpha) (for
    r = 3 only the left inequality is needed), returned with its geometric
    eta profile."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if not 3 <= r <= k + 1:
        raise ValueError(f"r must be in 3..{k + 1}")
    target = Fraction(1, k)
    if r == 3:
        alpha = Fraction(1, 2 * k)  # any alpha with phi(1, alpha) < 1/k
        if not phi(1, alpha) < target:
            raise ArithmeticError("alpha choice failed")
        return alpha, EtaSpec.geometric(k, alpha)
    u = r - 3
    # phi(u, .) increasing with phi(u, 1) = 1/(u+1) > 1/k: bisect the crossing,
    # then pick alpha slightly right where phi(u+1) is still below 1/k.
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(200):
        mid = (lo + hi) / 2
        if phi(u, mid) > target:
            hi = mid
        else:
            lo = mid
        if phi(u, hi) > target > phi(u + 1, hi):
            break
    alpha = hi
    if not (phi(u + 1, alpha) < target < phi(u, alpha)):
        raise ArithmeticError(f"no alpha found for (k, r) = ({k}, {r})")
    return alpha, EtaSpec.geometric(k, alpha)


# ---------------------------------------------------------------------------
# the coincidence case: all constants from omega alone


@dataclass(frozen=True)
class SpecialCaseReport:
    k: int
    omega: Extended
    omega_hat_last: Extended  # the small root, index k+1
    omega_j: tuple[float, ...]  # j = 1..k+1, geometric interpolation
    omega_hat: float  # = omega_2
    band_ok: bool  # omega/(omega+1) < omega_hat <= 1
    jarnik_ok: bool  # hat^2/(1-hat) <= omega <= hat/(1-hat), small slack


def _fk(x: Fraction, k: int) -> Fraction:
    return (1 + x) ** (k + 1) / x


def special_case_relations(omega: Extended, k: int, tol: float = 1e-12) -> SpecialCaseReport:
    """Solve (1+w)**(k+1)/w = (1+omega)**(k+1)/omega for the small root
    w < 1/k, interpolate omega_j = omega**(1-(j-1)/(k+1)) * w**((j-1)/(k+1)),
    and check the two published sandwich bounds."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if _is_inf(omega):
        omega_j = (INF, 1.0) + tuple(0.0 for _ in range(k - 1))
        return SpecialCaseReport(
            k=k, omega=INF, omega_hat_last=Fraction(0), omega_j=omega_j,
            omega_hat=1.0, band_ok=True, jarnik_ok=True,
        )
    om = Fraction(omega)
    if om < Fraction(1, k):
        raise ValueError(f"omega must be >= 1/k = 1/{k}, got {om}")
    if om == Fraction(1, k):
        w = Fraction(1, k)
    else:
        target = _fk(om, k)
        lo = Fraction(1, 10**6 * k)
        while _fk(lo, k) <= target:
            lo /= 2
        hi = Fraction(1, k)
        # f_k decreasing on (0, 1/k): bisect f_k(w) = target
        for _ in range(300):
            mid = (lo + hi) / 2
            if _fk(mid, k) > target:
                lo = mid
            else:
                hi = mid
            if hi - lo < Fraction(1, 10**18) * max(1, hi):
                break
        w = (lo + hi) / 2
    om_f, w_f = float(om), float(w)
    omega_j = tuple(
        om_f ** (1 - (j - 1) / (k + 1)) * w_f ** ((j - 1) / (k + 1))
        for j in range(1, k + 2)
    )
    omega_hat = omega_j[1]  # omega_2
    band_ok = om_f / (om_f + 1) < omega_hat <= 1 + tol
    jarnik_ok = (
        omega_hat**2 / (1 - omega_hat) <= om_f * (1 + 1e-9) + tol
        and om_f <= omega_hat / (1 - omega_hat) * (1 + 1e-9) + tol
    )
    return SpecialCaseReport(
        k=k, omega=om, omega_hat_last=w, omega_j=omega_j,
        omega_hat=omega_hat, band_ok=band_ok, jarnik_ok=jarnik_ok,
    )
