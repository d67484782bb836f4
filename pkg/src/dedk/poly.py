"""Exact univariate polynomial helpers over the rationals.

Polynomials are tuples of ``Fraction`` coefficients in ascending powers, so
``(a0, a1, a2)`` is ``a0 + a1*x + a2*x**2``.  The zero polynomial is ``()``.
Everything here is exact; floats only appear when a caller asks for them.
"""

from fractions import Fraction
from math import comb, gcd, lcm

ZERO = Fraction(0)
ONE = Fraction(1)


def as_poly(coeffs):
    return trim(tuple(Fraction(c) for c in coeffs))


def trim(p):
    p = tuple(p)
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return p[:n]


def degree(p):
    return len(trim(p)) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim(
        (p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n)
    )


def sub(p, q):
    return add(p, scale(q, -1))


def scale(p, s):
    s = Fraction(s)
    return trim(c * s for c in p)


def mul(p, q):
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def power(p, n):
    out = (ONE,)
    for _ in range(n):
        out = mul(out, p)
    return out


def deriv(p):
    return trim(i * p[i] for i in range(1, len(p)))


def antideriv(p):
    """Antiderivative vanishing at 0."""
    if not p:
        return ()
    return trim((ZERO,) + tuple(c / (i + 1) for i, c in enumerate(p)))


def evaluate(p, x):
    """Exact Horner evaluation at a rational (or int) point."""
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def compose_linear(p, a, b):
    """Return the polynomial ``x -> p(a + b*x)``."""
    a, b = Fraction(a), Fraction(b)
    out = [ZERO] * len(p)
    bpow = [ONE]
    for _ in range(len(p)):
        bpow.append(bpow[-1] * b)
    for n, c in enumerate(p):
        if c == 0:
            continue
        # c * (a + b x)^n
        apow = ONE
        terms = []
        for j in range(n + 1):
            terms.append(apow)
            apow *= a
        for j in range(n + 1):
            out[j] += c * comb(n, j) * bpow[j] * terms[n - j]
    return trim(out)


def to_chebyshev(p):
    """Chebyshev-T coefficients of ``p`` (exact), for evaluation on [-1, 1]."""
    # Horner in the Chebyshev basis: c <- x*c + a, using x*T_n = (T_{n+1} + T_{|n-1|})/2.
    c = []
    for a in reversed(p):
        nxt = [ZERO] * (len(c) + 1)
        for n, cn in enumerate(c):
            if cn == 0:
                continue
            if n == 0:
                nxt[1] += cn
            else:
                nxt[n + 1] += cn / 2
                nxt[n - 1] += cn / 2
        if nxt:
            nxt[0] += a
        else:
            nxt = [a]
        c = nxt
    return trim(c)


# --- real root isolation -------------------------------------------------------
#
# Descartes/bisection (Vincent-Collins-Akritas) on integer polynomials mapped to
# [0, 1].  Each node keeps q with integer coefficients such that the roots of q in
# (0, 1) are the roots of p in (a, a + w) under x = a + w*s.


def _integerize(p):
    den = 1
    for c in p:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _taylor_shift1(q):
    """Coefficients of q(x + 1)."""
    c = list(q)
    n = len(c) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _sign_variations(seq):
    count = 0
    last = 0
    for v in seq:
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def _descartes_01(q):
    """Upper bound on the number of roots of q in (0, 1) (exact when 0 or 1)."""
    return _sign_variations(_taylor_shift1(q[::-1]))


def _halves(q):
    n = len(q) - 1
    left = [c << (n - i) for i, c in enumerate(q)]  # 2^n q(x/2)
    right = _taylor_shift1(left)  # 2^n q((x+1)/2)
    return left, right


def _strip_zero_at_0(q):
    k = 0
    while k < len(q) and q[k] == 0:
        k += 1
    return q[k:], k > 0


def _strip_zero_at_1(q):
    # deflate by (x - 1) while q(1) == 0
    while len(q) > 1 and sum(q) == 0:
        n = len(q) - 1
        out = [0] * n
        acc = 0
        for i in range(n, 0, -1):
            acc += q[i]
            out[i - 1] = acc
        q = out
    return q


def _eval_int_poly(q, s):
    acc = ZERO
    for c in reversed(q):
        acc = acc * s + c
    return acc


def isolate_real_roots(p, lo, hi, tol=Fraction(1, 10**12), max_depth=200):
    """Rational approximations of the distinct real roots of ``p`` in the open
    interval ``(lo, hi)``.

    Each returned value lies within ``tol`` of a true root.  Roots exactly on a
    bisection point are returned exactly.  Clusters narrower than 2**-max_depth
    relative width (only possible for repeated roots) are reported once at their
    midpoint.
    """
    p = trim(p)
    lo, hi = Fraction(lo), Fraction(hi)
    if len(p) <= 1 or hi <= lo:
        return []
    q = compose_linear(p, lo, hi - lo)
    q = _integerize(q)
    q, _ = _strip_zero_at_0(q)
    q = _strip_zero_at_1(q)

    roots = []
    stack = [(q, ZERO, ONE, 0)]  # polynomial, local offset, local width, depth
    while stack:
        q, a, w, depth = stack.pop()
        if len(q) <= 1:
            continue
        v = _descartes_01(q)
        if v == 0:
            continue
        if v == 1:
            roots.append(_refine_simple(q, a, w, tol / (hi - lo)))
            continue
        if depth >= max_depth:
            roots.append(a + w / 2)
            continue
        left, right = _halves(q)
        half = w / 2
        right, at_mid = _strip_zero_at_0(right)
        if at_mid:
            roots.append(a + half)
        left = _strip_zero_at_1(left)
        stack.append((right, a + half, half, depth + 1))
        stack.append((left, a, half, depth + 1))

    return sorted(lo + (hi - lo) * s for s in roots)


def _refine_simple(q, a, w, tol):
    """Bisect the single sign change of q on (0, 1); return the local coordinate."""
    lo_s, hi_s = ZERO, ONE
    sign_lo = 1 if q[0] > 0 else -1
    while (hi_s - lo_s) * w > tol:
        mid = (lo_s + hi_s) / 2
        v = _eval_int_poly(q, mid)
        if v == 0:
            return a + w * mid
        if (v > 0) == (sign_lo > 0):
            lo_s = mid
        else:
            hi_s = mid
    return a + w * (lo_s + hi_s) / 2
