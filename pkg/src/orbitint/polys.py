"""Dense polynomial arithmetic over Z and Q in ascending coefficient order.

Just enough machinery for normalized rational maps: content and primitive
parts, gcd over Q with an integer witness, homogeneous resultants by
fraction-free elimination, and the cofactor identities behind certified
height-difference constants.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Coeffs = tuple

def strip(cs: Sequence) -> tuple:
    """Drop trailing zero coefficients."""
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(cs: Sequence) -> int:
    """Degree of the stripped polynomial; -1 for the zero polynomial."""
    return len(strip(cs)) - 1


def add(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return strip([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                  for i in range(n)])


def neg(a: Sequence) -> tuple:
    return tuple(-c for c in a)


def sub(a: Sequence, b: Sequence) -> tuple:
    return add(a, neg(b))


def mul(a: Sequence, b: Sequence) -> tuple:
    a, b = strip(a), strip(b)
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def scale(a: Sequence, s) -> tuple:
    return strip([c * s for c in a])


def pow_poly(a: Sequence, e: int) -> tuple:
    out = (1,)
    for _ in range(e):
        out = mul(out, a)
    return out


def derivative(a: Sequence) -> tuple:
    return strip([i * a[i] for i in range(1, len(a))])


def eval_at(a: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def eval_homogeneous(a: Sequence, d: int, x: int, y: int) -> int:
    """Evaluate the degree-d homogenization sum a_i X^i Y^(d-i) at (x, y)."""
    acc = 0
    ypow = [1] * (d + 1)
    for i in range(1, d + 1):
        ypow[i] = ypow[i - 1] * y
    xpow = 1
    for i in range(d + 1):
        c = a[i] if i < len(a) else 0
        if c:
            acc += c * xpow * ypow[d - i]
        xpow *= x
    return acc


def content(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def clear_denominators(a: Sequence[Fraction]) -> tuple:
    """Smallest positive integer multiple with integer coefficients."""
    lcm = 1
    for c in a:
        c = Fraction(c)
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return tuple(int(Fraction(c) * lcm) for c in a)


def to_fractions(a: Sequence) -> tuple:
    return tuple(Fraction(c) for c in a)


def divmod_q(a: Sequence, b: Sequence) -> tuple:
    """Quotient and remainder over Q; b must be nonzero."""
    a, b = list(to_fractions(strip(a))), list(to_fractions(strip(b)))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for i, cb in enumerate(b):
            a[k + i] -= c * cb
        while a and a[-1] == 0:
            a.pop()
    return strip(q), strip(a)


def gcd_q(a: Sequence, b: Sequence) -> tuple:
    """Monic gcd over Q, returned as a primitive integer polynomial."""
    a, b = strip(to_fractions(a)), strip(to_fractions(b))
    while b:
        a, b = b, divmod_q(a, b)[1]
    if not a:
        return ()
    ints = clear_denominators(a)
    c = content(ints)
    ints = tuple(v // c for v in ints)
    if ints[-1] < 0:
        ints = neg(ints)
    return ints


def _homogeneous_vector(a: Sequence, d: int) -> list:
    """Coefficients of the degree-d homogenization, descending in X."""
    return [(a[i] if i < len(a) else 0) for i in range(d, -1, -1)]


def sylvester_matrix(f: Sequence, g: Sequence, d: int) -> list[list[int]]:
    """Sylvester matrix of the degree-d homogenizations of f and g (2d x 2d)."""
    fv = _homogeneous_vector(f, d)
    gv = _homogeneous_vector(g, d)
    n = 2 * d
    rows = []
    for shift in range(d):
        rows.append([0] * shift + fv + [0] * (n - d - 1 - shift))
    for shift in range(d):
        rows.append([0] * shift + gv + [0] * (n - d - 1 - shift))
    return rows


def det_bareiss(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    m = [list(row) for row in matrix]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def homogeneous_resultant(f: Sequence, g: Sequence, d: int) -> int:
    """Resultant of the degree-d homogenizations; zero iff a common root exists."""
    return det_bareiss(sylvester_matrix(f, g, d))


def solve_exact(matrix: Sequence[Sequence[int]], rhs: Sequence) -> list[Fraction]:
    """Solve a nonsingular integer system exactly over Q."""
    n = len(matrix)
    m = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for k in range(n):
        pivot = None
        for i in range(k, n):
            if m[i][k] != 0:
                pivot = i
                break
        if pivot is None:
            raise ZeroDivisionError("singular system")
        m[k], m[pivot] = m[pivot], m[k]
        pk = m[k][k]
        for i in range(n):
            if i == k or m[i][k] == 0:
                continue
            factor = m[i][k] / pk
            for j in range(k, n + 1):
                m[i][j] -= factor * m[k][j]
    return [m[i][n] / m[i][i] for i in range(n)]


def cofactor_identities(f: Sequence, g: Sequence, d: int):
    """Integer cofactor forms for the degree-d homogenizations F, G.

    Returns (res, identities) where each identity is (u, v, target) with u, v
    the descending coefficient vectors of degree-(d-1) forms satisfying
    u*F + v*G = res * X^target * Y^(2d-1-target), for target 2d-1 and 0.
    Exists exactly when the resultant is nonzero.
    """
    syl = sylvester_matrix(f, g, d)
    res = det_bareiss(syl)
    if res == 0:
        raise ValueError("maps with vanishing resultant have no cofactor identity")
    n = 2 * d
    # Row vector (u, v) times Sylvester gives the product coefficients, so
    # the cofactors solve the transposed system.
    transpose = [[syl[i][j] for i in range(n)] for j in range(n)]
    identities = []
    for column in (0, n - 1):  # X^(2d-1) and Y^(2d-1)
        rhs = [res if j == column else 0 for j in range(n)]
        sol = solve_exact(transpose, rhs)
        ints = []
        for value in sol:
            assert value.denominator == 1, "cofactor coefficients must be integral"
            ints.append(int(value))
        identities.append((ints[:d], ints[d:], n - 1 - column))
    return res, identities


def resultant_cofactor_sum(f: Sequence, g: Sequence, d: int) -> int:
    """Larger total absolute coefficient sum |u| + |v| over the two cofactor
    identities; controls how much height evaluation can lose to cancellation.
    """
    _res, identities = cofactor_identities(f, g, d)
    return max(sum(abs(c) for c in u) + sum(abs(c) for c in v)
               for u, v, _ in identities)
