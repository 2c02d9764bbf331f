"""Exact small-dimension lattice tools: LLL, ball enumeration, saturation,
unimodular completion, and exact minimization of piecewise-linear convex
objectives over integer shifts.

Everything is exact rational arithmetic; dimensions stay tiny (<= 6) while
entries may be thousands of bits.  These are the primitives behind the
certified successive-minima engine.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterator, Sequence

Vec = list[Fraction]
Mat = list[Vec]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def gram_schmidt(rows: Mat) -> tuple[Mat, list[list[Fraction]], list[Fraction]]:
    """Exact GS: (orthogonal rows, mu coefficients, squared norms)."""
    n = len(rows)
    ortho: Mat = []
    mu: list[list[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
    norms: list[Fraction] = []
    for i in range(n):
        v = [Fraction(x) for x in rows[i]]
        mu[i][i] = Fraction(1)
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = dot(rows[i], ortho[j]) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, ortho[j])]
        ortho.append(v)
        norms.append(dot(v, v))
    return ortho, mu, norms


def lll_reduce(rows: Mat, delta: Fraction = Fraction(3, 4)) -> Mat:
    """Textbook exact LLL on rational rows; returns a new reduced basis."""
    b = [[Fraction(x) for x in row] for row in rows]
    n = len(b)
    if n <= 1:
        return b
    ortho, mu, norms = gram_schmidt(b)

    def size_reduce(i: int, j: int) -> None:
        if abs(mu[i][j]) > Fraction(1, 2):
            q = round(mu[i][j])
            b[i] = [a - q * c for a, c in zip(b[i], b[j])]
            for t in range(j + 1):
                mu[i][t] -= q * mu[j][t]

    i = 1
    while i < n:
        for j in range(i - 1, -1, -1):
            size_reduce(i, j)
        if norms[i] >= (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            ortho, mu, norms = gram_schmidt(b)
            i = max(i - 1, 1)
    return b


def _frac_sqrt_upper(fr: Fraction) -> Fraction:
    """Rational upper bound for sqrt(fr), fr >= 0."""
    if fr <= 0:
        return Fraction(0)
    n, d = fr.numerator, fr.denominator
    return Fraction(math.isqrt(n * d) + 1, d)


def enumerate_ball(
    rows: Mat, radius_sq: Fraction, radius_cell: list[Fraction] | None = None
) -> Iterator[tuple[int, ...]]:
    """Nonzero coefficient vectors c (one per +/- pair) with
    l2-norm-squared of sum(c_i rows_i) <= radius_sq.  Exact Fincke-Pohst.

    When `radius_cell` is given, its [0] entry is re-read continuously, so
    the caller may shrink the search radius as better vectors turn up."""
    n = len(rows)
    _, mu, norms = gram_schmidt(rows)
    if any(ns == 0 for ns in norms):
        raise ValueError("enumerate_ball needs linearly independent rows")
    cell = radius_cell if radius_cell is not None else [Fraction(radius_sq)]
    coeffs = [0] * n

    def canonical(c: tuple[int, ...]) -> bool:
        for x in reversed(c):
            if x:
                return x > 0
        return False

    def walk(level: int, used_above: Fraction) -> Iterator[tuple[int, ...]]:
        if cell[0] - used_above < 0:
            return
        if level < 0:
            if any(coeffs):
                yield tuple(coeffs)
            return
        center = -sum(
            coeffs[t] * mu[t][level] for t in range(level + 1, n) if coeffs[t]
        )
        # walk outward from the center so shrinking radii prune early
        base = round(center)
        off = 0
        while True:
            any_ok = False
            for c in (base,) if off == 0 else (base + off, base - off):
                used = norms[level] * (c - center) ** 2
                if used <= cell[0] - used_above:
                    any_ok = True
                    coeffs[level] = c
                    yield from walk(level - 1, used_above + used)
            if off > 0 and not any_ok:
                break
            off += 1
        coeffs[level] = 0

    for c in walk(n - 1, Fraction(0)):
        if canonical(c):
            yield c


def row_hnf(m_in: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-echelon Hermite reduction: (H, U) with U unimodular, U @ M = H,
    zero rows of H last."""
    M = [list(map(int, row)) for row in m_in]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        U[r], U[piv] = U[piv], U[r]
        while True:
            nz = [i for i in range(r + 1, rows) if M[i][c]]
            if not nz:
                break
            for i in nz:
                q = M[i][c] // M[r][c]
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                if M[i][c] and abs(M[i][c]) < abs(M[r][c]):
                    M[r], M[i] = M[i], M[r]
                    U[r], U[i] = U[i], U[r]
        if M[r][c] < 0:
            M[r] = [-a for a in M[r]]
            U[r] = [-a for a in U[r]]
        r += 1
    return M, U


def left_kernel(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x in Z^rows : x @ M = 0}."""
    H, U = row_hnf(M)
    return [U[i] for i in range(len(H)) if not any(H[i])]


def right_kernel(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x in Z^cols : M @ x = 0}, as row vectors."""
    cols = len(M[0])
    Mt = [[M[i][j] for i in range(len(M))] for j in range(cols)]
    return left_kernel(Mt)


def saturate(A: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {c in Z^n : c in Q-rowspan(A)} (the saturation)."""
    n = len(A[0])
    K = right_kernel(A)
    if not K:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    Kt = [[K[i][j] for i in range(len(K))] for j in range(n)]  # n x (n-s)
    return left_kernel(Kt)


def complete_to_unimodular(S: Sequence[Sequence[int]]) -> list[list[int]]:
    """Rows T with stack(S, T) unimodular; S must be a basis of a saturated
    sublattice of Z^n."""
    s = len(S)
    n = len(S[0])
    A = [list(map(int, row)) for row in S]
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_addmul(j_dst: int, j_src: int, q: int) -> None:
        if q == 0:
            return
        for row in A:
            row[j_dst] -= q * row[j_src]
        Vinv[j_src] = [a + q * b for a, b in zip(Vinv[j_src], Vinv[j_dst])]

    def col_swap(j1: int, j2: int) -> None:
        for row in A:
            row[j1], row[j2] = row[j2], row[j1]
        Vinv[j1], Vinv[j2] = Vinv[j2], Vinv[j1]

    def col_neg(j: int) -> None:
        for row in A:
            row[j] = -row[j]
        Vinv[j] = [-a for a in Vinv[j]]

    for i in range(s):
        while True:
            nz = [j for j in range(i, n) if A[i][j]]
            if not nz:
                raise ValueError("rows of S are not independent")
            jmin = min(nz, key=lambda j: abs(A[i][j]))
            if jmin != i:
                col_swap(i, jmin)
            if A[i][i] < 0:
                col_neg(i)
            others = [j for j in range(i + 1, n) if A[i][j]]
            if not others:
                break
            for j in others:
                col_addmul(j, i, A[i][j] // A[i][i])
        if A[i][i] != 1:
            raise ValueError(f"S is not saturated (pivot {A[i][i]})")
        for j in range(i):
            col_addmul(j, i, A[i][j])
    return Vinv[s:]


# ---------------------------------------------------------------------------
# exact Chebyshev machinery: min over c of max_i |a_i + <c, slopes_i>|


def chebyshev_1d(family: Sequence[tuple[Fraction, Fraction]]) -> Fraction:
    """Exact min over real c of max_i |a_i + c*b_i|; family of (a, b)."""
    best = Fraction(0)
    varying = []
    for a, b in family:
        if b == 0:
            best = max(best, abs(a))
        else:
            varying.append((a, b))
    for i in range(len(varying)):
        a1, b1 = varying[i]
        for j in range(i + 1, len(varying)):
            a2, b2 = varying[j]
            val = abs(a1 * b2 - a2 * b1) / (abs(b1) + abs(b2))
            if val > best:
                best = val
    return best


def chebyshev_1d_argmin(family: Sequence[tuple[Fraction, Fraction]]) -> Fraction:
    """A real minimizer of max_i |a_i + c*b_i|."""
    varying = [(a, b) for a, b in family if b != 0]
    if not varying:
        return Fraction(0)
    best = chebyshev_1d(family)
    for i in range(len(varying)):
        a1, b1 = varying[i]
        for j in range(i + 1, len(varying)):
            a2, b2 = varying[j]
            if abs(a1 * b2 - a2 * b1) == best * (abs(b1) + abs(b2)):
                # equalize the two active lines with opposing slopes signs
                for s1 in (1, -1):
                    for s2 in (1, -1):
                        den = s1 * b1 - s2 * b2
                        if den == 0:
                            continue
                        c = -(s1 * a1 - s2 * a2) / den
                        if max(abs(a1 + c * b1), abs(a2 + c * b2)) == best:
                            return c
    a1, b1 = max(varying, key=lambda ab: abs(ab[1]))
    return -a1 / b1


def _canon_form(slopes: tuple[Fraction, ...], a: Fraction):
    for x in slopes + (a,):
        if x > 0:
            return slopes, a
        if x < 0:
            return tuple(-s for s in slopes), -a
    return slopes, a


def eliminate_real_var(
    family: Sequence[tuple[tuple[Fraction, ...], Fraction]]
) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Eliminate the last variable: returns a family whose pointwise max (in
    the remaining variables) equals min over that variable of the input max.
    Pairwise-resultant construction."""
    consts = []
    varying = []
    for slopes, a in family:
        if slopes[-1] == 0:
            consts.append((slopes[:-1], a))
        else:
            varying.append((slopes, a))
    out = set(_canon_form(s, a) for s, a in consts)
    for i in range(len(varying)):
        s1, a1 = varying[i]
        b1 = s1[-1]
        for j in range(i + 1, len(varying)):
            s2, a2 = varying[j]
            b2 = s2[-1]
            w = abs(b1) + abs(b2)
            slopes = tuple((x1 * b2 - x2 * b1) / w for x1, x2 in zip(s1[:-1], s2[:-1]))
            out.add(_canon_form(slopes, (a1 * b2 - a2 * b1) / w))
    return list(out)


def real_min_family(
    family: Sequence[tuple[tuple[Fraction, ...], Fraction]]
) -> Fraction:
    """Exact min over all-real c of max_i |a_i + <c, slopes_i>|."""
    fam = [(tuple(Fraction(x) for x in s), Fraction(a)) for s, a in family]
    while fam and fam[0][0]:
        fam = eliminate_real_var(fam)
    return max((abs(a) for _, a in fam), default=Fraction(0))


def ternary_int_min(f: Callable[[int], object], lo: int, hi: int):
    """Exact minimum of a convex function on the integers of [lo, hi];
    returns (argmin, min).  f values need only support comparison."""
    cache: dict[int, object] = {}

    def g(c: int):
        if c not in cache:
            cache[c] = f(c)
        return cache[c]

    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if m1 == m2:
            m2 += 1
        if g(m1) < g(m2):  # type: ignore[operator]
            hi = m2 - 1
        elif g(m1) > g(m2):  # type: ignore[operator]
            lo = m1 + 1
        else:
            lo, hi = m1, m2
    best = min(range(lo, hi + 1), key=g)  # type: ignore[arg-type]
    return best, g(best)
