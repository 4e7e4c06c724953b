"""The exterior algebra on n odd generators xi_1 .. xi_n.

Monomials are n-bit masks: bit i-1 set means xi_i is a factor, and a
monomial always means the wedge of its factors in increasing index
order.  Every sign in the package is derived from counting the
transpositions needed to reach that normal form, so there is exactly one
sign convention to get wrong.

Elements carry a Z-grading by monomial degree (deg xi_i = 1) and the
induced Z_2-grading (even wedge-degree terms are even, odd are odd).
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .scalars import MINUS_ONE, ONE, Scalar

MAX_GENERATORS = 62  # masks must fit comfortably in a machine word


class ExteriorError(ValueError):
    pass


def monomial_degree(mask: int) -> int:
    return bin(mask).count("1")


def merge_sign(a: int, b: int) -> int:
    """Sign (+1/-1) of sorting the concatenation of two disjoint masks."""
    sign = 1
    rest = a
    while rest:
        low = rest & -rest
        # factors of b strictly below this factor of a each cost a swap
        if monomial_degree(b & (low - 1)) & 1:
            sign = -sign
        rest ^= low
    return sign


def monomial_str(mask: int) -> str:
    if mask == 0:
        return "1"
    return "*".join(f"xi{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)


class ExteriorElement:
    """Sparse Q(i)-combination of exterior monomials."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[int, Scalar]):
        if n < 0 or n > MAX_GENERATORS:
            raise ExteriorError(f"generator count {n} out of range")
        self.n = n
        clean: Dict[int, Scalar] = {}
        for mask, c in terms.items():
            if mask >> n:
                raise ExteriorError(f"monomial {mask:#x} uses generators beyond n={n}")
            if not c.is_zero():
                clean[mask] = c
        self.terms = clean

    @staticmethod
    def zero(n: int) -> "ExteriorElement":
        return ExteriorElement(n, {})

    @staticmethod
    def unit(n: int) -> "ExteriorElement":
        return ExteriorElement(n, {0: ONE})

    @staticmethod
    def generator(n: int, i: int) -> "ExteriorElement":
        """xi_i, 1-indexed."""
        if not 1 <= i <= n:
            raise ExteriorError(f"generator index {i} out of range 1..{n}")
        return ExteriorElement(n, {1 << (i - 1): ONE})

    @staticmethod
    def monomial(n: int, mask: int, coeff: Scalar = ONE) -> "ExteriorElement":
        return ExteriorElement(n, {mask: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        raise TypeError("exterior elements are not hashable")

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        self._check(other)
        out = dict(self.terms)
        for mask, c in other.terms.items():
            cur = out.get(mask)
            if cur is None:
                out[mask] = c
            else:
                s = cur + c
                if s.is_zero():
                    del out[mask]
                else:
                    out[mask] = s
        return ExteriorElement(self.n, out)

    def __neg__(self) -> "ExteriorElement":
        return ExteriorElement(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "ExteriorElement":
        if c.is_zero():
            return ExteriorElement.zero(self.n)
        return ExteriorElement(self.n, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "ExteriorElement") -> "ExteriorElement":
        return wedge(self, other)

    def degree(self) -> int:
        """Z-degree of a homogeneous element; raises if mixed."""
        degs = {monomial_degree(m) for m in self.terms}
        if len(degs) != 1:
            raise ExteriorError("element is not Z-homogeneous")
        return degs.pop()

    def parity(self) -> int:
        """Z_2-parity of a parity-homogeneous element (0 even, 1 odd)."""
        ps = {monomial_degree(m) & 1 for m in self.terms}
        if len(ps) != 1:
            raise ExteriorError("element is not parity-homogeneous")
        return ps.pop()

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self.terms}) <= 1

    def _check(self, other: "ExteriorElement") -> None:
        if self.n != other.n:
            raise ExteriorError(
                f"generator count mismatch: {self.n} vs {other.n}"
            )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mask in sorted(self.terms, key=lambda m: (monomial_degree(m), m)):
            c = self.terms[mask]
            cs = str(c)
            if mask == 0:
                parts.append(cs)
            elif c.is_one():
                parts.append(monomial_str(mask))
            else:
                if ("+" in cs[1:]) or ("-" in cs[1:]):
                    cs = "(" + cs + ")"
                parts.append(f"{cs}*{monomial_str(mask)}")
        return " + ".join(parts)

    __repr__ = __str__


def wedge(a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
    """Product in the exterior algebra: xi_i^2 = 0, xi_i xi_j = -xi_j xi_i."""
    a._check(b)
    out: Dict[int, Scalar] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            c = ca * cb
            if merge_sign(ma, mb) < 0:
                c = -c
            mask = ma | mb
            cur = out.get(mask)
            if cur is None:
                out[mask] = c
            else:
                s = cur + c
                if s.is_zero():
                    del out[mask]
                else:
                    out[mask] = s
    return ExteriorElement(a.n, out)


def apply_partial(i: int, f: ExteriorElement) -> ExteriorElement:
    """The odd superderivation d_i with d_i(xi_j) = delta_ij.

    On a monomial containing xi_i it deletes xi_i, with sign (-1)^k for
    the k factors to the left of xi_i; monomials without xi_i die.
    """
    if not 1 <= i <= f.n:
        raise ExteriorError(f"derivation index {i} out of range 1..{f.n}")
    bit = 1 << (i - 1)
    out: Dict[int, Scalar] = {}
    for mask, c in f.terms.items():
        if not mask & bit:
            continue
        if monomial_degree(mask & (bit - 1)) & 1:
            c = -c
        out[mask ^ bit] = c
    return ExteriorElement(f.n, out)


def grade_decompose(f: ExteriorElement) -> Dict[int, ExteriorElement]:
    """Split into Z-homogeneous components, keyed by degree."""
    buckets: Dict[int, Dict[int, Scalar]] = {}
    for mask, c in f.terms.items():
        buckets.setdefault(monomial_degree(mask), {})[mask] = c
    return {k: ExteriorElement(f.n, t) for k, t in sorted(buckets.items())}


def all_monomials(n: int, degree: int = -1) -> List[int]:
    """All masks for Lambda(n), optionally restricted to one degree."""
    masks = range(1 << n)
    if degree < 0:
        return list(masks)
    return [m for m in masks if monomial_degree(m) == degree]


def parse_monomial(text: str, n: int) -> Tuple[int, int]:
    """Inverse of monomial_str; returns (mask, sign) for unsorted input."""
    t = text.strip()
    if t == "1":
        return 0, 1
    mask = 0
    sign = 1
    indices = []
    for piece in t.split("*"):
        piece = piece.strip()
        if not piece.startswith("xi"):
            raise ExteriorError(f"bad monomial factor {piece!r}")
        idx = int(piece[2:])
        if not 1 <= idx <= n:
            raise ExteriorError(f"generator index {idx} out of range")
        indices.append(idx - 1)
    for idx in indices:
        bit = 1 << idx
        if mask & bit:
            return 0, 0
        if monomial_degree(mask & ~(bit - 1)) & 1:
            sign = -sign
        mask |= bit
    return mask, sign
