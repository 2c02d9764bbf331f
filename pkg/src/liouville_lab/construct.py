"""Generators for the exponent sequences behind the example vectors.

Three construction routes: gap-profile driven recurrences (eta route),
geometric growth toward a target ratio C, and explicit exponent lists.
All of them end in a ZetaVector: k dyadic components whose exponent
sequences interleave strictly round-robin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numeric import (
    DyadicReal,
    ExponentSequence,
    MixedSequence,
    mix_sequences,
)

INF = float("inf")


@dataclass(frozen=True)
class EtaSpec:
    """Target gap profile (eta_1..eta_k), rationals summing to 1, ordered
    0 < eta_1 <= ... <= eta_k; the implied eta_{k+1} is infinite."""

    eta: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.eta:
            raise ValueError("EtaSpec: empty profile")
        if any(e <= 0 for e in self.eta):
            raise ValueError("EtaSpec: all entries must be positive")
        for i in range(1, len(self.eta)):
            if self.eta[i] < self.eta[i - 1]:
                raise ValueError(
                    "EtaSpec: entries must be non-decreasing "
                    f"(violated at index {i}: {self.eta[i - 1]} then {self.eta[i]})"
                )
        if sum(self.eta) != 1:
            raise ValueError(f"EtaSpec: entries must sum to 1, got {sum(self.eta)}")

    @property
    def k(self) -> int:
        return len(self.eta)

    @property
    def eta_last(self) -> float:
        return INF

    @staticmethod
    def uniform(k: int) -> "EtaSpec":
        return EtaSpec(tuple(Fraction(1, k) for _ in range(k)))

    @staticmethod
    def geometric(k: int, alpha: Fraction) -> "EtaSpec":
        """eta_j / eta_{j+1} = alpha with alpha in (0,1); eta_1 is
        alpha**(k-1) over the geometric sum."""
        if not 0 < alpha < 1:
            raise ValueError("alpha must be in (0,1)")
        weights = [alpha ** (k - 1 - j) for j in range(k)]
        total = sum(weights)
        return EtaSpec(tuple(Fraction(w, 1) / total for w in weights))


@dataclass(frozen=True)
class GrowthSpec:
    """Geometric growth b_{n+1} = ceil(C*b_n) from b_1 = start; the variant
    flag switches to b_{n+1} = 2*b_n - 1 (the one affine recurrence used
    by the second figure family)."""

    C: Fraction
    start: int
    n_terms: int
    double_minus_one: bool = False

    def __post_init__(self):
        if not self.double_minus_one and self.C <= 1:
            raise ValueError(f"growth ratio must exceed 1, got {self.C}")
        if self.start < 2:
            raise ValueError(f"start must be >= 2, got {self.start}")
        if self.n_terms < 2:
            raise ValueError("need at least two terms")


@dataclass(frozen=True)
class ZetaVector:
    """k dyadic components plus the construction bookkeeping."""

    components: tuple[DyadicReal, ...]
    sequences: tuple[ExponentSequence, ...]
    mixed: MixedSequence
    provenance: object = None

    @property
    def k(self) -> int:
        return len(self.components)

    def min_last_exponent(self) -> int:
        return min(c.last_exponent for c in self.components)

    def truncated_to(self, max_exponent: int) -> "ZetaVector":
        """Per-component truncation keeping exponents <= max_exponent."""
        comps = tuple(c.truncated(max_exponent) for c in self.components)
        seqs = tuple(
            ExponentSequence(c.exponents, s.label)
            for c, s in zip(comps, self.sequences)
        )
        return ZetaVector(comps, seqs, mix_sequences(seqs), self.provenance)


def interleaves(seqs: Sequence[Sequence[int]]) -> bool:
    """Round-robin strict interleaving: a_{1,1} < a_{1,2} < ... < a_{1,k}
    < a_{2,1} < ...  Ragged tails (sequences differing in length by one
    round) are allowed."""
    k = len(seqs)
    n_max = max(len(s) for s in seqs)
    flat: list[int] = []
    for n in range(n_max):
        for j in range(k):
            if n < len(seqs[j]):
                if n > 0 and len(seqs[j]) < n:  # gap in the pattern
                    return False
                flat.append(seqs[j][n])
    return all(flat[i] < flat[i + 1] for i in range(len(flat) - 1))


def zeta_from_sequences(
    seqs: Sequence[Sequence[int]], provenance: object = None
) -> ZetaVector:
    exp_seqs = tuple(
        ExponentSequence(tuple(s), label=f"zeta{j + 1}") for j, s in enumerate(seqs)
    )
    if not interleaves([s.terms for s in exp_seqs]):
        raise ValueError("component sequences do not interleave round-robin")
    comps = tuple(DyadicReal(s.terms) for s in exp_seqs)
    return ZetaVector(comps, exp_seqs, mix_sequences(exp_seqs), provenance)


def eta_sequences(spec: EtaSpec, n_terms: int, max_seed_doublings: int = 8) -> ZetaVector:
    """Generate exponent rows by the floor recurrence
    a_{n+1,j} = floor(n * a_{n,k} * (eta_1+...+eta_j) / eta_1).

    The textbook seed row (m, 2m, ..., km) always collides with the first
    generated row at j=1: the n=1 multiplier is exactly a_{1,k} there, so
    a_{2,1} == a_{1,k} whatever the seed.  The generator therefore escalates
    the seed (m doubling) while the seed row is in play and, once the
    collision is seen to be seed-invariant, drops the seed row from the
    output; the recurrence-generated rows interleave strictly on their own,
    which is certified before returning.
    """
    if n_terms < 2:
        raise ValueError("n_terms must be >= 2")
    k = spec.k
    prefix = [sum(spec.eta[: j + 1]) for j in range(k)]  # sigma_j, sigma_k == 1
    inv_eta1 = 1 / spec.eta[0]

    def generate(seed_scale: int, rows_wanted: int) -> list[list[int]]:
        rows = [[(j + 1) * seed_scale for j in range(k)]]
        for n in range(1, rows_wanted):
            base = inv_eta1 * n * rows[-1][k - 1]
            rows.append([math.floor(base * prefix[j]) for j in range(k)])
        return rows

    m = 1
    dropped_seed = False
    for _ in range(max_seed_doublings):
        rows = generate(m, n_terms + 1)
        cols = [[row[j] for row in rows] for j in range(k)]
        if interleaves(cols):
            rows = rows[:n_terms]
            break
        # Seed-invariant structural collision: retry, then discard the seed.
        m *= 2
    else:
        rows = generate(1, n_terms + 1)[1:]
        dropped_seed = True
        cols = [[row[j] for row in rows] for j in range(k)]
        if not interleaves(cols):
            raise ValueError(
                "recurrence rows fail to interleave even without the seed row; "
                f"profile {spec.eta} is too degenerate"
            )
    seqs = [[row[j] for row in rows] for j in range(k)]
    provenance = {"spec": spec, "seed_scale": m, "seed_dropped": dropped_seed}
    return zeta_from_sequences(seqs, provenance)


def eta_ratio_report(zeta: ZetaVector, spec: EtaSpec) -> dict:
    """Empirical gap ratios at the deepest available row, next to their
    targets.  The middle family is evaluated in both published index forms
    (same-row and next-row); the discrepancy between those two displays is
    reported, not adjudicated."""
    seqs = [s.terms for s in zeta.sequences]
    k = spec.k
    n = min(len(s) for s in seqs) - 1
    if n < 1:
        raise ValueError("need at least two rows")
    a = lambda row, j: seqs[j][row]  # noqa: E731
    out = {
        "first": (a(n, 0) - a(n - 1, k - 1)) / a(n, k - 1),
        "first_target": float(spec.eta[0]),
        "middle_same_row": [
            (a(n, j) - a(n, j - 1)) / a(n, k - 1) for j in range(1, k)
        ],
        "middle_next_row": [
            (a(n - 1, j) - a(n - 1, j - 1)) / a(n - 1, k - 1) for j in range(1, k)
        ],
        "middle_targets": [float(e) for e in spec.eta[1:]],
        "last_ratio": a(n, 0) / a(n - 1, k - 1),
    }
    return out


def geometric_sequence(spec: GrowthSpec) -> MixedSequence:
    """b_1 = start, then b_{n+1} = ceil(C*b_n) (ratios >= C, tending to C),
    or b_{n+1} = 2*b_n - 1 under the variant flag (ratios < 2, tending to 2)."""
    terms = [spec.start]
    for _ in range(spec.n_terms - 1):
        if spec.double_minus_one:
            terms.append(2 * terms[-1] - 1)
        else:
            terms.append(math.ceil(spec.C * terms[-1]))
    if terms[1] <= terms[0]:
        raise ValueError(
            f"start {spec.start} too small for ratio {spec.C}: b_2 = {terms[1]}"
        )
    return MixedSequence(tuple(terms), tuple(-1 for _ in terms))


def split_round_robin(b: MixedSequence, k: int, provenance: object = None) -> ZetaVector:
    """Component j takes terms j, j+k, j+2k, ... of b; mixing the result
    reproduces b exactly."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(b) < k:
        raise ValueError(f"need at least k={k} terms, got {len(b)}")
    seqs = [[b[i] for i in range(j, len(b), k)] for j in range(k)]
    return zeta_from_sequences(seqs, provenance if provenance is not None else b)


def perturb(b: MixedSequence, positions: set[int]) -> MixedSequence:
    """Add one to b_n for each 1-based n in `positions`; the result must
    still be strictly increasing."""
    terms = list(b.terms)
    for n in positions:
        if not 1 <= n <= len(terms):
            raise ValueError(f"position {n} out of range 1..{len(terms)}")
        terms[n - 1] += 1
    for i in range(1, len(terms)):
        if terms[i] <= terms[i - 1]:
            raise ValueError(
                f"perturbation breaks monotonicity at position {i + 1} "
                f"({terms[i - 1]} then {terms[i]})"
            )
    return MixedSequence(tuple(terms), b.origin)


@dataclass(frozen=True)
class GrowthReport:
    """Hypothesis gates for the two finite-constant theorems: the ratio
    floor (strict-liminf surrogate), the tail ratio as a limit estimate,
    gap monotonicity, and the kappa_d comparison when d is supplied."""

    min_ratio: Fraction
    last_ratio: Fraction
    gaps_increasing: bool
    ratio_gate_2: bool  # every ratio > 2
    d: int | None = None
    kappa_d: float | None = None
    ratio_gate_kappa: bool | None = None


def validate_growth(b: MixedSequence, d: int | None = None) -> GrowthReport:
    if len(b) < 3:
        raise ValueError("need at least three terms to validate growth")
    ratios = b.ratios()
    gaps = b.gaps()
    min_ratio = min(ratios)
    report = dict(
        min_ratio=min_ratio,
        last_ratio=ratios[-1],
        gaps_increasing=_nondecreasing(gaps),
        ratio_gate_2=min_ratio > 2,
    )
    if d is not None:
        from .constants import kappa

        kd = float(kappa(d, Fraction(1, 10**15)))
        report.update(d=d, kappa_d=kd, ratio_gate_kappa=all(float(r) > kd for r in ratios))
    return GrowthReport(**report)


def _nondecreasing(xs: Sequence[int]) -> bool:
    return all(xs[i] <= xs[i + 1] for i in range(len(xs) - 1))
