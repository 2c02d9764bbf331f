"""Successive minima of the approximation lattice against the stretched box.

The lattice is {(x, zeta_1 x - y_1, ..., zeta_k x - y_k)}; the box at
parameter Q has long side Q and short sides Q**(-1/k).  On the grid
Q = 2**j every comparison happens in the exact k-th-power domain, where
each candidate value is rational: lambda**k = max(x**k/Q**k, Q * d**k).

Three routes compute a row:
  * brute force  - complete enumeration, the independent oracle;
  * structured   - the divisor-ladder candidate family plus a small-x
                   sweep, optionally backed by the reduction engine;
  * reduction    - exact LLL / saturation-quotient enumeration / certified
                   convex integer lifts, valid at any Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _lattice as lat
from ._dyadic_value import P2
from .construct import ZetaVector

LN2 = math.log(2)


class BudgetError(RuntimeError):
    """Enumeration bound exceeds the caller's ceiling."""


def _lg(n: int) -> float:
    bl = n.bit_length()
    if bl <= 512:
        return math.log(n)
    shift = bl - 64
    return math.log(n >> shift) + shift * LN2


def log_of_fraction(fr: Fraction) -> float:
    if fr <= 0:
        raise ValueError("log of non-positive value")
    return _lg(fr.numerator) - _lg(fr.denominator)




# ---------------------------------------------------------------------------
# row context


@dataclass(frozen=True)
class BoxParameter:
    """Grid parameter: Q = 2**j, q = j*ln2; the short side Q**(-1/k) is an
    exact power of two iff k divides j."""

    k: int
    j: int

    @property
    def q(self) -> float:
        return self.j * LN2

    @property
    def exact_root(self) -> bool:
        return self.j % self.k == 0


class RowContext:
    """Per-(zeta, Q) exact evaluation machinery."""

    def __init__(self, zeta: ZetaVector, j: int):
        if j < 1:
            raise ValueError("need Q > 1, i.e. j >= 1")
        self.zeta = zeta
        self.k = zeta.k
        self.j = j
        self.p: list[int] = []
        self.e: list[int] = []
        for comp in zeta.components:
            num, e = comp.as_integer_pair()
            self.p.append(num)
            self.e.append(e)
        k = self.k
        self.exact_weights = j % k == 0
        self.r = (2 * j + k) // (2 * k)  # round(j/k); equals j//k when k | j
        self.A = max(j, max(self.e) - self.r)
        self.Qpow = 1 << (j * k)  # Q**k
        self.Q = 1 << j
        # weight-rounding slack (squared, value domain); 1 when exact
        self.slack_sq = Fraction(1) if self.exact_weights else Fraction(2)

    def dist_num(self, x: int, y: int, t: int) -> int:
        return abs(self.p[t] * x - (y << self.e[t]))

    def nearest_y(self, x: int) -> list[int]:
        ys = []
        for t in range(self.k):
            r = self.p[t] * x
            den = 1 << self.e[t]
            frac = r & (den - 1)
            y = r >> self.e[t]
            if 2 * frac > den:
                y += 1
            ys.append(y)
        return ys

    def value_pow(self, x: int, ys: Sequence[int]) -> P2:
        """lambda(x, y, Q)**k, exact (dyadic-denominator rational)."""
        k = self.k
        best = P2(abs(x) ** k, self.j * k)
        for t in range(k):
            dn = self.dist_num(x, ys[t], t)
            if dn:
                cand = P2(dn**k, k * self.e[t] - self.j)
                if cand > best:
                    best = cand
        return best

    def value_exact(self, x: int, ys: Sequence[int]) -> Fraction | None:
        """lambda itself when the short side is an exact power of two."""
        if not self.exact_weights:
            return None
        side = 1 << (self.j // self.k)
        best = Fraction(abs(x), self.Q)
        for t in range(self.k):
            cand = Fraction(self.dist_num(x, ys[t], t) * side, 1 << self.e[t])
            if cand > best:
                best = cand
        return best

    # scaled integer embedding: plain sup norm ~ 2**A * value (with slack)

    def embed(self, x: int, ys: Sequence[int]) -> list[int]:
        raw = [x << (self.A - self.j)]
        for t in range(self.k):
            raw.append(
                (self.p[t] * x - (ys[t] << self.e[t])) << (self.A + self.r - self.e[t])
            )
        return raw

    def unscale(self, raw: Sequence[int]) -> tuple[int, tuple[int, ...]]:
        x = int(raw[0]) >> (self.A - self.j)
        ys = []
        for t in range(self.k):
            dint = int(raw[t + 1]) >> (self.A + self.r - self.e[t])
            ys.append((self.p[t] * x - dint) >> self.e[t])
        return x, tuple(ys)

    def pow_of_raw(self, raw: Sequence[int]) -> P2:
        x, ys = self.unscale(raw)
        return self.value_pow(x, ys)

    def initial_basis_raw(self) -> list[list[int]]:
        rows = [self.embed(1, [0] * self.k)]
        for t in range(self.k):
            ys = [0] * self.k
            ys[t] = 1
            rows.append(self.embed(0, ys))
        return rows

    def sup_sq_to_pow_lower(self, sup_sq: Fraction) -> P2:
        """Certified lower bound for value**k given (a lower bound on) the
        squared scaled sup-norm."""
        lo, _ = P2.from_fraction(sup_sq)
        val_sq = lo.shift(-2 * self.A)
        if not self.exact_weights:
            val_sq = val_sq.half()  # divide by the slack factor 2
        k = self.k
        if k % 2 == 0:
            return val_sq.pow_int(k // 2)
        return val_sq.pow_int(k // 2) * val_sq.root_lower(2)

    def pow_to_scaled_sup_upper(self, pw: P2) -> P2:
        """P2 upper bound for 2**A * slack * value given value**k."""
        out = pw.root_upper(self.k).shift(self.A)
        if not self.exact_weights:
            out = out * P2(1449, 10)  # 1449/1024 > sqrt(2)
        return out


# ---------------------------------------------------------------------------
# candidate points and greedy selection


@dataclass(frozen=True)
class CandidatePoint:
    """Integer vector (x, y_1..y_k) with its exact value at the row's Q."""

    x: int
    y: tuple[int, ...]
    value_pow: P2  # lambda**k, exact
    value: Fraction | None  # lambda, exact when representable

    def sort_key(self):
        return (self.value_pow, self.x, self.y)

    def vector(self) -> tuple[int, ...]:
        return (self.x,) + self.y

    @property
    def log_value(self) -> float:
        return self.value_pow.log2() * LN2 / len(self.y)


def _normalize_sign(x: int, ys: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    if x < 0:
        return -x, tuple(-y for y in ys)
    if x == 0:
        for y in ys:
            if y < 0:
                return 0, tuple(-t for t in ys)
            if y > 0:
                break
    return x, tuple(ys)


def make_point(ctx: RowContext, x: int, ys: Sequence[int]) -> CandidatePoint:
    x, ys = _normalize_sign(x, ys)
    return CandidatePoint(
        x=x, y=tuple(ys), value_pow=ctx.value_pow(x, ys), value=ctx.value_exact(x, ys)
    )


def candidate_value(zeta: ZetaVector, x: int, ys: Sequence[int], j: int) -> CandidatePoint:
    """Exact lambda-value of one integer vector at Q = 2**j."""
    if x < 0:
        raise ValueError("x must be >= 0 (signs are normalized away)")
    if x == 0 and not any(ys):
        raise ValueError("the zero vector has no value")
    return make_point(RowContext(zeta, j), x, ys)


def _rank_append(rows: list[list[Fraction]], vec: Sequence[int]) -> bool:
    v = [Fraction(a) for a in vec]
    for row in rows:
        piv = next(i for i, a in enumerate(row) if a)
        if v[piv]:
            f = v[piv] / row[piv]
            v = [a - f * b for a, b in zip(v, row)]
    if any(v):
        rows.append(v)
        return True
    return False


def greedy_select(candidates: Iterable[CandidatePoint], k: int) -> list[CandidatePoint]:
    """Sort by (value, x, y) and keep points that grow the integer rank,
    until k+1 are chosen."""
    chosen: list[CandidatePoint] = []
    echelon: list[list[Fraction]] = []
    for pt in sorted(candidates, key=CandidatePoint.sort_key):
        if _rank_append(echelon, pt.vector()):
            chosen.append(pt)
            if len(chosen) == k + 1:
                return chosen
    raise ValueError(f"only {len(chosen)} independent candidates, need {k + 1}")


@dataclass(frozen=True)
class MinimaResult:
    k: int
    j: int
    points: tuple[CandidatePoint, ...]
    mode: str
    certified: bool

    @property
    def lambdas_pow(self) -> tuple[P2, ...]:
        return tuple(p.value_pow for p in self.points)

    @property
    def lambdas(self) -> tuple[Fraction | None, ...]:
        return tuple(p.value for p in self.points)

    @property
    def L(self) -> tuple[float, ...]:
        return tuple(p.value_pow.log2() * LN2 / self.k for p in self.points)

    @property
    def q(self) -> float:
        return self.j * LN2


# ---------------------------------------------------------------------------
# brute force (the oracle)


def brute_force_minima(zeta: ZetaVector, j: int, budget: float = 10**6) -> MinimaResult:
    """Complete enumeration of every lattice point with value below the
    running (k+1)-th-minimum bound.  Provably exact; cost ~ Q**((k+1)/k)."""
    ctx = RowContext(zeta, j)
    k = ctx.k
    bound = 2.0 ** (j * (k + 1) / k)
    if bound > budget:
        raise BudgetError(
            f"enumeration bound 2**{j * (k + 1) / k:.1f} exceeds budget {budget:g}"
        )
    cands: list[CandidatePoint] = []
    for t in range(k):
        ys = [0] * k
        ys[t] = 1
        cands.append(make_point(ctx, 0, ys))
    lam_pow_ub = P2(1, -j)  # fallback (Q**(1/k))**k = Q
    x = 1
    last_prune = 0
    while P2(x**k, j * k) <= lam_pow_ub:
        ys0 = ctx.nearest_y(x)
        w_pow = lam_pow_ub.shift(-j)  # per-coordinate d**k window
        options: list[list[int]] = []
        for t in range(k):
            opts = [ys0[t]]
            for direction in (-1, 1):
                y = ys0[t] + direction
                while P2(ctx.dist_num(x, y, t) ** k, k * ctx.e[t]) <= w_pow:
                    opts.append(y)
                    y += direction
            options.append(opts)
        for ys in _product(options):
            pt = make_point(ctx, x, ys)
            if pt.value_pow <= lam_pow_ub:
                cands.append(pt)
        if len(cands) > last_prune + 512:
            sel = greedy_select(cands, k)
            lam_pow_ub = sel[-1].value_pow
            cands = [c for c in cands if c.value_pow <= lam_pow_ub]
            last_prune = len(cands)
        x += 1
    points = greedy_select(cands, k)
    return MinimaResult(k=k, j=j, points=tuple(points), mode="brute", certified=True)


def _product(options: Sequence[Sequence[int]]):
    if not options:
        yield ()
        return
    for head in options[0]:
        for rest in _product(options[1:]):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# exact reduction engine


def _convex_walk_min(f, c0: int, hard_cap: int = 100_000):
    """Locate a local integer minimum by downhill gallop with doubling
    steps.  Exact global minimum for convex f; callers on near-convex
    functions re-certify around the result."""
    cache: dict[int, object] = {}

    def g(c: int):
        if c not in cache:
            cache[c] = f(c)
        return cache[c]

    c = c0
    iters = 0
    while not (g(c) <= g(c - 1) and g(c) <= g(c + 1)):
        iters += 1
        if iters > hard_cap:
            raise AssertionError("convex walk failed to converge")
        direction = 1 if g(c + 1) < g(c) else -1
        step = 1
        while g(c + direction * step * 2) < g(c + direction * step):
            step *= 2
            iters += 1
            if iters > hard_cap:
                raise AssertionError("convex walk failed to converge")
        c = c + direction * step
    return c, g(c)


class _Lifter:
    """Bounds for min value(base + sum c_i w_i) over integer c; the w_i are
    fixed witnesses sorted by ascending value.

    Level 0 is genuinely convex in c_0, so a bracketed walk is exact.  An
    outer level sees g(c) = inner-lattice minimum, sandwiched between the
    exact convex real relaxation h (computed by pairwise elimination) and
    h + wiggle, where wiggle is half the summed inner witness values (the
    cost of rounding a real minimizer).  The sublevel interval
    {c : h(c) <= best} is localized by convex bisection; when it is short
    it is scanned outright (exact), otherwise the returned upper bound is
    the best scanned point and the lower bound comes from min h, leaving a
    certified gap of at most wiggle -- astronomically small whenever the
    inner witnesses are far smaller than the current minimum.
    """

    WINDOW = 2

    @staticmethod
    def _scan_limit(level: int) -> int:
        # scanning cost per point grows with level; level 1 points are a
        # handful of closed-form solves, deeper ones recurse
        return 4096 if level == 1 else 256

    def __init__(self, ctx: RowContext, dirs_raw: list[list[int]]):
        self.ctx = ctx
        self.dirs = [list(map(int, r)) for r in dirs_raw]
        rows = [[Fraction(x) for x in r] for r in self.dirs]
        self.ortho, _, self.norms = lat.gram_schmidt(rows)
        self.dir_val_ub = [ctx.pow_of_raw(r).root_upper(ctx.k) for r in self.dirs]

    def minimize(self, base_raw: Sequence[int]):
        """(pow_upper, raw_witness, pow_lower); exact when upper == lower."""
        return self._solve(len(self.dirs) - 1, [int(v) for v in base_raw])

    # -- helpers -------------------------------------------------------------

    def _center(self, level: int, cur: list[int]) -> int:
        if self.norms[level] == 0:
            return 0
        c = -lat.dot([Fraction(x) for x in cur], self.ortho[level]) / self.norms[level]
        return round(c)

    def _h_family(self, level: int, cur: list[int]):
        fam = []
        for coord in range(len(cur)):
            slopes = tuple(Fraction(self.dirs[i][coord]) for i in range(level))
            fam.append((slopes, Fraction(cur[coord])))
        return fam

    def _solve(self, level: int, cur: list[int]):
        ctx = self.ctx
        if level < 0:
            pw = ctx.pow_of_raw(cur)
            return pw, list(cur), pw
        d = self.dirs[level]

        def shifted(c: int) -> list[int]:
            return [a + c * b for a, b in zip(cur, d)]

        if level == 0:
            def f0(c: int) -> P2:
                return ctx.pow_of_raw(shifted(c))

            # closed-form seed: the scaled embedding is within the weight
            # slack of the true objective, and f0 is convex, so a local
            # minimum around the Chebyshev argmin is the global one
            fam = [(Fraction(a), Fraction(b)) for a, b in zip(cur, d)]
            c_star = round(lat.chebyshev_1d_argmin(fam))
            if not (f0(c_star) <= f0(c_star - 1) and f0(c_star) <= f0(c_star + 1)):
                c_star, _ = _convex_walk_min(f0, c_star)
            best = None
            for c in (c_star - 1, c_star, c_star + 1):
                raw = shifted(c)
                key = (ctx.pow_of_raw(raw),) + ctx.unscale(raw)
                if best is None or key < best[0]:
                    best = (key, raw)
            return best[0][0], best[1], best[0][0]

        h_cache: dict[int, Fraction] = {}

        def h(c: int) -> Fraction:
            if c not in h_cache:
                h_cache[c] = lat.real_min_family(self._h_family(level, shifted(c)))
            return h_cache[c]

        sub: dict[int, tuple[P2, list[int], P2]] = {}

        def g(c: int) -> P2:
            if c not in sub:
                sub[c] = self._solve(level - 1, shifted(c))
            return sub[c][0]

        # localize the convex envelope minimum, seed the upper bound there
        c_h, h_min = _convex_walk_min(h, self._center(level, cur))
        for c in range(c_h - self.WINDOW, c_h + self.WINDOW + 1):
            g(c)
        best_pow = min(v[0] for v in sub.values())
        # superset of the sublevel interval {c : h(c) <= cut}, gallop only
        sup_cut = ctx.pow_to_scaled_sup_upper(best_pow).to_fraction()
        lo_end = _sublevel_reach(h, c_h, -1, sup_cut)
        hi_end = _sublevel_reach(h, c_h, +1, sup_cut)
        exact = True
        if hi_end - lo_end <= self._scan_limit(level):
            for c in range(lo_end, hi_end + 1):
                g(c)
        else:
            exact = False
            for c in range(lo_end, lo_end + self.WINDOW + 1):
                g(c)
            for c in range(hi_end - self.WINDOW, hi_end + 1):
                g(c)
        best = None
        for c, (pw, raw, lb) in sub.items():
            key = (pw,) + ctx.unscale(raw)
            if best is None or key < best[0]:
                best = (key, raw)
        lower = min(v[2] for v in sub.values())
        if not exact:
            lower = min(lower, ctx.sup_sq_to_pow_lower(h_min * h_min))
        return best[0][0], best[1], lower


def _sublevel_reach(h, c_min: int, direction: int, cut: Fraction) -> int:
    """An integer at or just beyond the end of {c : h(c) <= cut} in the
    given direction (h convex, minimized at c_min): gallop with doubling
    steps; the first failing point over-approximates the interval end."""
    if h(c_min) > cut:
        return c_min
    step = 1
    c = c_min
    while h(c + direction * step) <= cut:
        c += direction * step
        step *= 2
        if step > (1 << 70):
            raise AssertionError("sublevel interval unbounded")
    return c + direction * step


def _babai_reduce(raw: Sequence[int], against: list[list[int]]) -> list[int]:
    rows = [[Fraction(x) for x in r] for r in against]
    ortho, _, norms = lat.gram_schmidt(rows)
    v = [Fraction(x) for x in raw]
    for i in range(len(rows) - 1, -1, -1):
        if norms[i] == 0:
            continue
        c = round(lat.dot(v, ortho[i]) / norms[i])
        if c:
            v = [a - c * b for a, b in zip(v, rows[i])]
    return [int(x) for x in v]


def _combo(coeffs: Sequence[int], rows: Sequence[Sequence[int]]) -> list[int]:
    out = [0] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c:
            out = [a + c * b for a, b in zip(out, row)]
    return out


def _combo_frac(coeffs: Sequence[int], rows: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    out = [Fraction(0)] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c:
            out = [a + c * b for a, b in zip(out, row)]
    return out


def _lll_with_transform(rows: list[list[Fraction]]):
    """LLL returning (reduced, Z) with reduced = Z @ rows, Z unimodular."""
    n = len(rows)
    m = len(rows[0])
    b = [list(r) + [Fraction(int(i == t)) for t in range(n)] for i, r in enumerate(rows)]

    def geo():
        return [row[:m] for row in b]

    ortho, mu, norms = lat.gram_schmidt(geo())
    i = 1
    while i < n:
        for jj in range(i - 1, -1, -1):
            if abs(mu[i][jj]) > Fraction(1, 2):
                qq = round(mu[i][jj])
                b[i] = [a - qq * c for a, c in zip(b[i], b[jj])]
                for t in range(jj + 1):
                    mu[i][t] -= qq * mu[jj][t]
        if norms[i] >= (Fraction(3, 4) - mu[i][i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            ortho, mu, norms = lat.gram_schmidt(geo())
            i = max(i - 1, 1)
    return geo(), [[int(x) for x in row[m:]] for row in b]


def reduced_minima_points(
    zeta_or_ctx, j: int | None = None
) -> tuple[list[CandidatePoint], list[P2], bool]:
    """Successive-minima witnesses via lattice reduction, valid at any
    Q = 2**j: LLL on the scaled embedding, then per minimum an enumeration
    of the saturation quotient with certified convex lifts.

    Returns (points, lower bounds on lambda**k, exact) where `exact` means
    every lower bound coincides with its witness value.  Any gap is bounded
    by the rounding wiggle of far smaller witnesses (see _Lifter)."""
    ctx = zeta_or_ctx if isinstance(zeta_or_ctx, RowContext) else RowContext(zeta_or_ctx, j)
    n = ctx.k + 1
    basis = lat.lll_reduce([[Fraction(v) for v in r] for r in ctx.initial_basis_raw()])
    basis_int = [[int(x) for x in row] for row in basis]
    chosen: list[tuple[P2, list[int], P2]] = []  # (pow_ub, raw, pow_lb) ascending

    def key_of(pw: P2, raw: Sequence[int]):
        x, ys = ctx.unscale(raw)
        return (pw, x, ys)

    def ball_radius(pw: P2) -> Fraction:
        s = ctx.pow_to_scaled_sup_upper(pw)
        return Fraction(n) * (s * s).to_fraction()

    for _step in range(n):
        s = len(chosen)
        if s == 0:
            ub = min(ctx.pow_of_raw(r) for r in basis_int)
            cell = [ball_radius(ub)]
            best = None
            for coeffs in lat.enumerate_ball(basis, cell[0], cell):
                raw = _combo(coeffs, basis_int)
                pw = ctx.pow_of_raw(raw)
                key = key_of(pw, raw)
                if best is None or key < best[0]:
                    best = (key, raw)
                    cell[0] = ball_radius(pw)
            chosen.append((best[0][0], best[1], best[0][0]))
            continue
        W_coeff = []
        for _, raw, _lb in chosen:
            x, ys = ctx.unscale(raw)
            W_coeff.append([x, *ys])
        S = lat.saturate(W_coeff)
        T = lat.complete_to_unimodular(S)
        W_raw = [ctx.embed(c[0], c[1:]) for c in S]
        T_raw = [_babai_reduce(ctx.embed(c[0], c[1:]), W_raw) for c in T]
        # project transversal rows orthogonally against span(W)
        Wq = [[Fraction(x) for x in r] for r in W_raw]
        w_ortho, _, w_norms = lat.gram_schmidt(Wq)
        proj = []
        for r in T_raw:
            v = [Fraction(x) for x in r]
            for o, ns in zip(w_ortho, w_norms):
                if ns:
                    coef = lat.dot(v, o) / ns
                    v = [a - coef * b for a, b in zip(v, o)]
            proj.append(v)
        proj_red, Z = _lll_with_transform(proj)
        T_red = [_combo(z, T_raw) for z in Z]
        dirs = [raw for _, raw, _lb in chosen]  # ascending by value
        lifter = _Lifter(ctx, dirs)
        best = None
        best_lb = None
        for rep in T_red:
            pw, raw, lb = lifter.minimize(rep)
            key = key_of(pw, raw)
            if best is None or key < best[0]:
                best = (key, raw)
            best_lb = lb if best_lb is None else min(best_lb, lb)
        cell = [ball_radius(best[0][0])]
        for coeffs in lat.enumerate_ball(proj_red, cell[0], cell):
            if sum(1 for c in coeffs if c) == 1 and abs(max(coeffs, key=abs)) == 1:
                continue  # single reduced rows already lifted above
            pvec = _combo_frac(coeffs, proj_red)
            class_lb = ctx.sup_sq_to_pow_lower(lat.dot(pvec, pvec) / n)
            if class_lb > best[0][0]:
                continue
            rep = _combo(coeffs, T_red)
            pw, raw, lb = lifter.minimize(rep)
            key = key_of(pw, raw)
            if key < best[0]:
                best = (key, raw)
                cell[0] = ball_radius(pw)
            best_lb = min(best_lb, lb)
        # a lower bound can never exceed the found value, and the previous
        # minimum is itself a valid lower bound for this one
        lb = min(best_lb, best[0][0])
        if chosen:
            lb = max(lb, chosen[-1][2])
        chosen.append((best[0][0], best[1], lb))
    points = [make_point(ctx, *ctx.unscale(raw)) for _, raw, _lb in chosen]
    lowers = [lb for _, _raw, lb in chosen]
    exact = all(pw == lb for (pw, _r, lb) in chosen)
    return points, lowers, exact


# ---------------------------------------------------------------------------
# structured candidate family and the public row entry points


def required_last_exponent(k: int, j_max: int) -> int:
    """Truncation depth certifying a sweep up to Q = 2**j_max: the dyadic
    tail must stay below a quarter of the smallest residual that can touch
    any minimum, itself bounded through the product theorem."""
    slack = math.ceil(math.log2(8 * math.factorial(k + 1)))
    return math.ceil(j_max * (k + 1) / k) + slack + 1


def check_depth(zeta: ZetaVector, j_max: int) -> None:
    need = required_last_exponent(zeta.k, j_max)
    have = zeta.min_last_exponent()
    if have < need:
        from .numeric import DepthError

        raise DepthError(
            f"sweep to Q = 2**{j_max} needs every component truncated at "
            f"exponent >= {need}, but one stops at {have}",
            required_exponent=need,
        )


def _ladder_candidates(ctx: RowContext, multiples: int) -> list[CandidatePoint]:
    """The divisor-ladder family m * 2**b for mixed-sequence entries b, with
    nearest y and single-coordinate +-1 perturbations, plus the unit basis."""
    k = ctx.k
    pts: list[CandidatePoint] = []
    for t in range(k):
        ys = [0] * k
        ys[t] = 1
        pts.append(make_point(ctx, 0, ys))
    lam_pow_ub = P2(1, -ctx.j)  # fallback bound Q
    xs: list[int] = []
    for b in ctx.zeta.mixed.terms:
        for m in range(1, multiples + 1):
            x = m << b
            if P2(x**k, ctx.j * k) <= lam_pow_ub:
                xs.append(x)
    for x in sorted(set(xs)):
        ys0 = ctx.nearest_y(x)
        pts.append(make_point(ctx, x, ys0))
        for t in range(k):
            for dlt in (-1, 1):
                ys = list(ys0)
                ys[t] += dlt
                pts.append(make_point(ctx, x, ys))
    return pts


def _window_candidates(
    ctx: RowContext, x_max: int, lam_pow_ub: P2
) -> list[CandidatePoint]:
    """All points with x <= x_max and value within the bound (complete
    enumeration of that slab)."""
    k = ctx.k
    pts: list[CandidatePoint] = []
    x = 1
    while x <= x_max and P2(x**k, ctx.j * k) <= lam_pow_ub:
        ys0 = ctx.nearest_y(x)
        w_pow = lam_pow_ub.shift(-ctx.j)
        options: list[list[int]] = []
        for t in range(k):
            opts = [ys0[t]]
            for direction in (-1, 1):
                y = ys0[t] + direction
                while P2(ctx.dist_num(x, y, t) ** k, k * ctx.e[t]) <= w_pow:
                    opts.append(y)
                    y += direction
            options.append(opts)
        for ys in _product(options):
            pt = make_point(ctx, x, ys)
            if pt.value_pow <= lam_pow_ub:
                pts.append(pt)
        x += 1
    return pts


def structured_minima(
    zeta: ZetaVector,
    j: int,
    multiples: int = 8,
    x_small: int = 1 << 12,
    window_limit: float = 2 * 10**5,
    use_reduction: bool = True,
) -> MinimaResult:
    """Greedy minima over the structured candidate family: the divisor
    ladder, the unit basis, and an exhaustive small-x slab.

    The result is certified exact when either the slab covered the whole
    enumeration window (the fallback-window argument) or the reduction
    engine contributed witnesses for every minimum and closed its bounds;
    otherwise the lambdas are upper bounds and `certified` is False.
    """
    ctx = RowContext(zeta, j)
    k = ctx.k
    cands = _ladder_candidates(ctx, multiples)
    lam_pow_ub = greedy_select(cands, k)[-1].value_pow
    # full window when affordable: completeness is then unconditional
    full_bound = 2.0 ** (j * (k + 1) / k)
    certified = False
    if full_bound <= window_limit:
        cands += _window_candidates(ctx, 1 << 63, lam_pow_ub)
        certified = True
    else:
        cands += _window_candidates(ctx, x_small, lam_pow_ub)
        if use_reduction:
            pts, _lbs, exact = reduced_minima_points(ctx)
            cands += pts
            certified = exact
    points = greedy_select(cands, k)
    return MinimaResult(
        k=k, j=j, points=tuple(points), mode="structured", certified=certified
    )


def minima_row(
    zeta: ZetaVector, j: int, mode: str = "auto", brute_budget: float = 10**5
) -> MinimaResult:
    """One grid row in the requested mode; auto picks the oracle when the
    enumeration bound is affordable and the structured engine otherwise."""
    if mode == "brute":
        return brute_force_minima(zeta, j, budget=brute_budget)
    if mode == "structured":
        return structured_minima(zeta, j)
    if mode == "auto":
        if 2.0 ** (j * (zeta.k + 1) / zeta.k) <= brute_budget:
            return brute_force_minima(zeta, j, budget=brute_budget)
        return structured_minima(zeta, j)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# sweeps and profiles


@dataclass(frozen=True)
class ProfileRow:
    j: int
    result: MinimaResult

    @property
    def q(self) -> float:
        return self.result.q

    @property
    def L(self) -> tuple[float, ...]:
        return self.result.L

    @property
    def psi(self) -> tuple[float, ...]:
        q = self.q
        return tuple(v / q for v in self.L)

    @property
    def sum_L(self) -> float:
        return sum(self.L)


@dataclass(frozen=True)
class MinimaProfile:
    k: int
    rows: tuple[ProfileRow, ...]

    @property
    def q_grid(self) -> list[float]:
        return [r.q for r in self.rows]

    def L_column(self, idx: int) -> list[float]:
        """L_{idx+1} over the grid."""
        return [r.L[idx] for r in self.rows]

    def psi_column(self, idx: int) -> list[float]:
        return [r.psi[idx] for r in self.rows]


@dataclass(frozen=True)
class InvariantReport:
    """Exact per-row checks; `violations` lists (j, check) pairs."""

    rows_checked: int
    violations: tuple[tuple[int, str], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_row_invariants(result: MinimaResult) -> list[str]:
    """Exact invariants: ordering, Dirichlet, the fallback cap, and the
    product-theorem band [1/(2(k+1)!), 2] (checked in the k-th-power
    domain)."""
    bad: list[str] = []
    k = result.k
    pows = result.lambdas_pow
    for i in range(len(pows) - 1):
        if not pows[i] <= pows[i + 1]:
            bad.append("ordering")
            break
    if not pows[0] < P2(1, 0):
        bad.append("dirichlet")
    if not pows[-1] <= P2(1, -result.j):
        bad.append("fallback")
    prod = P2(1, 0)
    for p in pows:
        prod = prod * p
    band = 2 * math.factorial(k + 1)
    # product of lambdas must lie in [1/band, 2]: in the k-th-power domain
    # that is prod * band**k >= 1 and prod <= 2**k
    if not prod * P2(band**k, 0) >= P2(1, 0):
        bad.append("minkowski_lower")
    if not prod <= P2(2**k, 0):
        bad.append("minkowski_upper")
    return bad


def sweep(
    zeta: ZetaVector,
    js: Sequence[int],
    mode: str = "auto",
    jobs: int = 1,
    brute_budget: float = 10**5,
) -> MinimaProfile:
    """Per-row minima over a strictly increasing grid of exponents j
    (Q = 2**j).  Rows are independent; with jobs > 1 they are computed in
    parallel and merged in grid order, bit-identically."""
    js = list(js)
    if any(b <= a for a, b in zip(js, js[1:])):
        raise ValueError("grid must be strictly increasing")
    check_depth(zeta, max(js))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    _sweep_row_task,
                    [(zeta, j, mode, brute_budget) for j in js],
                    chunksize=max(1, len(js) // (4 * jobs)),
                )
            )
    else:
        results = [minima_row(zeta, j, mode, brute_budget) for j in js]
    rows = tuple(ProfileRow(j=j, result=res) for j, res in zip(js, results))
    return MinimaProfile(k=zeta.k, rows=rows)


def _sweep_row_task(args) -> MinimaResult:
    zeta, j, mode, brute_budget = args
    return minima_row(zeta, j, mode, brute_budget)


def profile_invariants(profile: MinimaProfile) -> InvariantReport:
    violations = []
    for row in profile.rows:
        for what in check_row_invariants(row.result):
            violations.append((row.j, what))
    return InvariantReport(
        rows_checked=len(profile.rows), violations=tuple(violations)
    )


# ---------------------------------------------------------------------------
# slope segmentation


@dataclass(frozen=True)
class SlopeSegment:
    column: int  # 0-based index of L_{column+1}
    q_start: float
    q_end: float
    slope: float
    n_intervals: int


def profile_slopes(
    profile: MinimaProfile, merge_tol: float = 0.02, min_len: int = 2
) -> tuple[list[SlopeSegment], list[SlopeSegment]]:
    """Break each L_j into maximal near-constant-slope runs.

    Returns (segments, transitions): runs of at least `min_len` grid
    intervals are fitted segments; shorter runs are reported separately as
    transitions -- a kink strictly inside one grid interval produces a
    single unconstrained slope sample, which is a breakpoint artifact, not
    a segment.
    """
    segments: list[SlopeSegment] = []
    transitions: list[SlopeSegment] = []
    qs = profile.q_grid
    for col in range(profile.k + 1):
        Ls = profile.L_column(col)
        slopes = [
            (Ls[i + 1] - Ls[i]) / (qs[i + 1] - qs[i]) for i in range(len(Ls) - 1)
        ]
        start = 0
        while start < len(slopes):
            end = start + 1
            acc = slopes[start]
            count = 1
            while end < len(slopes) and abs(slopes[end] - acc / count) <= merge_tol:
                acc += slopes[end]
                count += 1
                end += 1
            seg = SlopeSegment(
                column=col,
                q_start=qs[start],
                q_end=qs[end],
                slope=acc / count,
                n_intervals=count,
            )
            (segments if count >= min_len else transitions).append(seg)
            start = end
    return segments, transitions
