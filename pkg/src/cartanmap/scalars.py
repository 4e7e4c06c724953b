"""Exact Gaussian-rational arithmetic.

Every quantity in this package is a Gaussian rational (re + im*i with
rational re, im), stored in the canonical form (a + b*i)/d with integer
a, b and positive integer d satisfying gcd(a, b, d) = 1.  There is no
floating point anywhere; all operations are exact.

The field Q(i) is the smallest one in which every desk-scale instance
splits: the Cartan subalgebra of the Hamiltonian family acts with purely
imaginary integer eigenvalues, and fourth roots of unity are needed for
order-4 twists.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt


class Scalar:
    """An element of Q(i), value (a + b*i) / d, always in reduced form."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int, b: int, d: int):
        # Assumes (a, b, d) already reduced with d > 0; use Scalar.make otherwise.
        self.a = a
        self.b = b
        self.d = d

    @staticmethod
    def make(a: int, b: int, d: int) -> "Scalar":
        if d == 0:
            raise ZeroDivisionError("scalar with zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        if d != 1:
            g = gcd(gcd(abs(a), abs(b)), d)
            if g > 1:
                a //= g
                b //= g
                d //= g
        return Scalar(a, b, d)

    @staticmethod
    def from_int(n: int) -> "Scalar":
        return Scalar(n, 0, 1)

    @staticmethod
    def from_fraction(fr: Fraction) -> "Scalar":
        return Scalar(fr.numerator, 0, fr.denominator)

    @staticmethod
    def from_parts(re: Fraction, im: Fraction) -> "Scalar":
        d = (re.denominator * im.denominator) // gcd(re.denominator, im.denominator)
        return Scalar.make(
            re.numerator * (d // re.denominator),
            im.numerator * (d // im.denominator),
            d,
        )

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0 and self.d == 1

    def is_real(self) -> bool:
        return self.b == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def __neg__(self) -> "Scalar":
        return Scalar(-self.a, -self.b, self.d)

    def conjugate(self) -> "Scalar":
        return Scalar(self.a, -self.b, self.d)

    def __add__(self, other: "Scalar") -> "Scalar":
        d1, d2 = self.d, other.d
        if d1 == 1 and d2 == 1:
            return Scalar(self.a + other.a, self.b + other.b, 1)
        return Scalar.make(self.a * d2 + other.a * d1, self.b * d2 + other.b * d1, d1 * d2)

    def __sub__(self, other: "Scalar") -> "Scalar":
        d1, d2 = self.d, other.d
        if d1 == 1 and d2 == 1:
            return Scalar(self.a - other.a, self.b - other.b, 1)
        return Scalar.make(self.a * d2 - other.a * d1, self.b * d2 - other.b * d1, d1 * d2)

    def __mul__(self, other: "Scalar") -> "Scalar":
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        d = self.d * other.d
        if b1 == 0 and b2 == 0:
            if d == 1:
                return Scalar(a1 * a2, 0, 1)
            return Scalar.make(a1 * a2, 0, d)
        if d == 1:
            return Scalar(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, 1)
        return Scalar.make(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, d)

    def inverse(self) -> "Scalar":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar.make(self.d * self.a, -self.d * self.b, n)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        n = other.a * other.a + other.b * other.b
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        a1, b1, a2, b2 = self.a, self.b, other.a, -other.b
        return Scalar.make(
            (a1 * a2 - b1 * b2) * other.d,
            (a1 * b2 + b1 * a2) * other.d,
            self.d * n,
        )

    def norm_sq(self) -> Fraction:
        """|z|^2 as an exact rational."""
        return Fraction(self.a * self.a + self.b * self.b, self.d * self.d)

    def lex_key(self) -> tuple:
        """Sort key ordering by real part, then imaginary part."""
        return (Fraction(self.a, self.d), Fraction(self.b, self.d))

    def is_lex_positive(self) -> bool:
        return self.a > 0 or (self.a == 0 and self.b > 0)

    # -- serialization ------------------------------------------------------

    def __str__(self) -> str:
        return scalar_to_str(self)

    def __repr__(self) -> str:
        return f"Scalar({scalar_to_str(self)!r})"


ZERO = Scalar(0, 0, 1)
ONE = Scalar(1, 0, 1)
MINUS_ONE = Scalar(-1, 0, 1)
I = Scalar(0, 1, 1)


def scalar(value) -> Scalar:
    """Coerce ints, Fractions, and strings to Scalar."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, int):
        return Scalar(value, 0, 1)
    if isinstance(value, Fraction):
        return Scalar.from_fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def _frac_str(num: int, den: int) -> str:
    return str(num) if den == 1 else f"{num}/{den}"


def scalar_to_str(s: Scalar) -> str:
    """Serialize as "a/b", "c/d*i", or "a/b+c/d*i" (denominator 1 omitted)."""
    re = Fraction(s.a, s.d)
    im = Fraction(s.b, s.d)
    if im == 0:
        return _frac_str(re.numerator, re.denominator)
    if abs(im.numerator) == 1 and im.denominator == 1:
        im_part = "i"
    else:
        im_part = _frac_str(abs(im.numerator), im.denominator) + "*i"
    if re == 0:
        return im_part if im > 0 else "-" + im_part
    sign = "+" if im > 0 else "-"
    return _frac_str(re.numerator, re.denominator) + sign + im_part


def parse_scalar(text: str) -> Scalar:
    """Parse the formats emitted by scalar_to_str, plus bare "i" and "-i"."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty scalar string")
    # Split into real and imaginary summands at a +/- that is not leading.
    parts = []
    start = 0
    for k in range(1, len(t)):
        if t[k] in "+-" and t[k - 1] not in "+-/*":
            parts.append(t[start:k])
            start = k
    parts.append(t[start:])
    re = Fraction(0)
    im = Fraction(0)
    for part in parts:
        if part.endswith("i"):
            body = part[:-1]
            if body.endswith("*"):
                body = body[:-1]
            if body in ("", "+"):
                im += 1
            elif body == "-":
                im -= 1
            else:
                im += Fraction(body)
        else:
            re += Fraction(part)
    return Scalar.from_parts(re, im)


# -- rational and Gaussian square roots -------------------------------------


def rational_sqrt(x: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp != p or rq * rq != q:
        return None
    return Fraction(rp, rq)


def scalar_sqrt(s: Scalar):
    """Exact square root inside Q(i), or None when no such root exists."""
    x, y = s.re, s.im
    if y == 0:
        r = rational_sqrt(x)
        if r is not None:
            return Scalar.from_fraction(r)
        r = rational_sqrt(-x)
        if r is not None:
            return Scalar.from_parts(Fraction(0), r)
        return None
    r = rational_sqrt(x * x + y * y)
    if r is None:
        return None
    u = rational_sqrt((x + r) / 2)
    if u is None or u == 0:
        return None
    v = y / (2 * u)
    root = Scalar.from_parts(u, v)
    if root * root == s:
        return root
    return None


# -- Gaussian integer factorization (for root candidate search) -------------


def _gi_divmod(a, b):
    """Rounded division in Z[i]: returns q with a - q*b of minimal norm."""
    (ax, ay), (bx, by) = a, b
    n = bx * bx + by * by
    rx = ax * bx + ay * by
    ry = ay * bx - ax * by
    qx = (2 * rx + n) // (2 * n)
    qy = (2 * ry + n) // (2 * n)
    return qx, qy


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gi_norm(a):
    return a[0] * a[0] + a[1] * a[1]


def gaussian_gcd(a, b):
    while b != (0, 0):
        q = _gi_divmod(a, b)
        a, b = b, _gi_sub(a, _gi_mul(q, b))
    return a


def _gi_divexact(a, b):
    n = _gi_norm(b)
    rx = a[0] * b[0] + a[1] * b[1]
    ry = a[1] * b[0] - a[0] * b[1]
    if n == 0 or rx % n or ry % n:
        return None
    return (rx // n, ry // n)


def _trial_factor(n: int) -> dict:
    fs: dict = {}
    for p in (2, 3):
        while n % p == 0:
            fs[p] = fs.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                fs[p] = fs.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        fs[n] = fs.get(n, 0) + 1
    return fs


def _sqrt_minus_one_mod(p: int) -> int:
    for g in range(2, p):
        if pow(g, (p - 1) // 2, p) == p - 1:
            return pow(g, (p - 1) // 4, p)
    raise ValueError(f"no square root of -1 modulo {p}")


def gaussian_divisors(z) -> list:
    """All divisors of a nonzero Gaussian integer, up to unit multiples."""
    if z == (0, 0):
        raise ValueError("divisors of zero")
    prime_powers = []
    w = z
    for p, _ in sorted(_trial_factor(_gi_norm(z)).items()):
        if p == 2:
            pis = [(1, 1)]
        elif p % 4 == 3:
            pis = [(p, 0)]
        else:
            x = _sqrt_minus_one_mod(p)
            pi = gaussian_gcd((p, 0), (x, 1))
            pis = [pi, (pi[0], -pi[1])]
        for pi in pis:
            e = 0
            while True:
                q = _gi_divexact(w, pi)
                if q is None:
                    break
                w = q
                e += 1
            if e:
                prime_powers.append((pi, e))
    divisors = [(1, 0)]
    for pi, e in prime_powers:
        new = []
        for d in divisors:
            cur = d
            for _ in range(e + 1):
                new.append(cur)
                cur = _gi_mul(cur, pi)
        divisors = new
    seen = set()
    out = []
    for d in divisors:
        canon = max(
            (d, (-d[0], -d[1]), (-d[1], d[0]), (d[1], -d[0]))
        )
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return out


UNITS = ((1, 0), (-1, 0), (0, 1), (0, -1))
