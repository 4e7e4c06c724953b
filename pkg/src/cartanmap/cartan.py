"""The finite-dimensional Cartan-type Lie superalgebra families.

W(n) is the superalgebra of superderivations of the exterior algebra on
n odd generators; every element is written sum_i f_i d_i with f_i in
Lambda(n).  Inside it live

  S(n)        divergence-free derivations, div(sum f_i d_i) = sum d_i(f_i),
  S~(n)       derivations D with div((1 + xi_1...xi_n) D) = 0, n even,
  H~(n)       the span of D_f = sum_i d_i(f) d_i over f in Lambda(n),
  H(n)        the derived subalgebra [H~(n), H~(n)].

Each family is built as an explicit basis of superderivations together
with exact structure constants; closure of the bracket table is checked
at construction time.  The Z-grading (by coefficient degree minus one),
the Z_2-grading, the degree-zero identifications with gl/sl/so, the
distinguished triangular decomposition, root data, and a simplicity
test by ideal closure are all computed from that table.

The S~ grading is special: its degree -1 component consists of the
mixed-degree elements (1 - xi_1...xi_n) d_i, and the Z-grading is not an
algebra grading.  Both facts are surfaced by this module rather than
papered over; see degree_additivity_violations.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .exterior import (
    ExteriorElement,
    all_monomials,
    apply_partial,
    monomial_degree,
    monomial_str,
    wedge,
)
from .linalg import (
    Echelon,
    LinalgError,
    Matrix,
    Subspace,
    TrackedEchelon,
    Vec,
    kernel_basis,
    simultaneous_eigenspaces,
    vec_add_scaled,
    vec_scale,
)
from .scalars import MINUS_ONE, ONE, ZERO, Scalar

FAMILIES = ("W", "S", "S_tilde", "H_tilde", "H")


class ConstructionError(ValueError):
    pass


# -- superderivations --------------------------------------------------------


class SuperDerivation:
    """D = sum_i f_i d_i acting on Lambda(n)."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[ExteriorElement]):
        if len(coeffs) != n:
            raise ConstructionError("need one coefficient per generator")
        self.n = n
        self.coeffs = tuple(coeffs)

    @staticmethod
    def zero(n: int) -> "SuperDerivation":
        return SuperDerivation(n, [ExteriorElement.zero(n)] * n)

    @staticmethod
    def monomial(n: int, mask: int, i: int, coeff: Scalar = ONE) -> "SuperDerivation":
        """coeff * xi_mask d_i (i is 1-indexed)."""
        coeffs = [ExteriorElement.zero(n) for _ in range(n)]
        coeffs[i - 1] = ExteriorElement.monomial(n, mask, coeff)
        return SuperDerivation(n, coeffs)

    @staticmethod
    def hamiltonian(n: int, f: ExteriorElement) -> "SuperDerivation":
        """D_f = sum_i d_i(f) d_i."""
        return SuperDerivation(n, [apply_partial(i, f) for i in range(1, n + 1)])

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperDerivation):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __add__(self, other: "SuperDerivation") -> "SuperDerivation":
        return SuperDerivation(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "SuperDerivation") -> "SuperDerivation":
        return SuperDerivation(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "SuperDerivation":
        return SuperDerivation(self.n, [-a for a in self.coeffs])

    def scale(self, c: Scalar) -> "SuperDerivation":
        return SuperDerivation(self.n, [a.scale(c) for a in self.coeffs])

    def apply(self, g: ExteriorElement) -> ExteriorElement:
        """Apply the superderivation to an element of Lambda(n)."""
        out = ExteriorElement.zero(self.n)
        for j, f in enumerate(self.coeffs):
            if not f.is_zero():
                out = out + wedge(f, apply_partial(j + 1, g))
        return out

    def parity(self) -> int:
        """Parity (d_i is odd, so f d_i has parity of f plus one)."""
        ps = set()
        for f in self.coeffs:
            if not f.is_zero():
                ps.add((f.parity() + 1) & 1)
        if len(ps) != 1:
            raise ConstructionError("derivation is not parity-homogeneous")
        return ps.pop()

    def z_degree(self) -> int:
        """Z-degree of a homogeneous derivation (coefficient degree - 1)."""
        ds = set()
        for f in self.coeffs:
            if not f.is_zero():
                ds.add(f.degree() - 1)
        if len(ds) != 1:
            raise ConstructionError("derivation is not Z-homogeneous")
        return ds.pop()

    def __str__(self) -> str:
        parts = []
        for j, f in enumerate(self.coeffs):
            for mask in sorted(f.terms, key=lambda m: (monomial_degree(m), m)):
                c = f.terms[mask]
                head = "" if mask == 0 else monomial_str(mask) + "*"
                cs = str(c)
                if c.is_one():
                    pre = ""
                elif cs == "-1":
                    pre = "-"
                else:
                    pre = f"({cs})*" if ("+" in cs[1:] or "-" in cs[1:]) else f"{cs}*"
                parts.append(f"{pre}{head}d{j + 1}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__


def superbracket(d1: SuperDerivation, d2: SuperDerivation) -> SuperDerivation:
    """Supercommutator [d1, d2] = d1 d2 - (-1)^(p1 p2) d2 d1.

    A superderivation is determined by its values on generators, so the
    bracket coefficients are [d1,d2](xi_i) = d1(e_i) -+ d2(f_i).
    """
    if d1.n != d2.n:
        raise ConstructionError("generator count mismatch")
    sign = -1 if (d1.parity() and d2.parity()) else 1
    coeffs = []
    for i in range(d1.n):
        term = d1.apply(d2.coeffs[i])
        other = d2.apply(d1.coeffs[i])
        coeffs.append(term - other if sign > 0 else term + other)
    return SuperDerivation(d1.n, coeffs)


def divergence(d: SuperDerivation) -> ExteriorElement:
    """div(sum f_i d_i) = sum d_i(f_i); S(n) is its kernel."""
    out = ExteriorElement.zero(d.n)
    for i, f in enumerate(d.coeffs):
        out = out + apply_partial(i + 1, f)
    return out


# -- W(n) coordinates --------------------------------------------------------


@lru_cache(maxsize=None)
def w_enumeration(n: int) -> Tuple[Tuple[Tuple[int, int], ...], dict]:
    """Canonical ordering of the monomial basis xi_mask d_i of W(n)."""
    basis = sorted(
        ((mask, i) for mask in all_monomials(n) for i in range(1, n + 1)),
        key=lambda t: (monomial_degree(t[0]), t[0], t[1]),
    )
    pos = {b: k for k, b in enumerate(basis)}
    return tuple(basis), pos


def derivation_to_w_vec(d: SuperDerivation) -> Vec:
    _, pos = w_enumeration(d.n)
    out: Vec = {}
    for i, f in enumerate(d.coeffs):
        for mask, c in f.terms.items():
            out[pos[(mask, i + 1)]] = c
    return out


def w_vec_to_derivation(n: int, v: Vec) -> SuperDerivation:
    basis, _ = w_enumeration(n)
    coeffs = [ExteriorElement.zero(n) for _ in range(n)]
    for k, c in v.items():
        mask, i = basis[k]
        coeffs[i - 1] = coeffs[i - 1] + ExteriorElement.monomial(n, mask, c)
    return SuperDerivation(n, coeffs)


class CoordSolver:
    """Expresses vectors in the span of a fixed basis (exact, cached echelon)."""

    def __init__(self, basis: Sequence[Vec]):
        self._tracked = TrackedEchelon()
        for k, v in enumerate(basis):
            if self._tracked.add(dict(v), {k: ONE}) is not None:
                raise ConstructionError("basis vectors are dependent")

    def coords(self, v: Vec) -> Optional[Vec]:
        tmp = TrackedEchelon()
        tmp.rows = self._tracked.rows
        res, comb = tmp.reduce(dict(v), {})
        if res:
            return None
        return {k: -c for k, c in comb.items() if not c.is_zero()}


# -- the superalgebra container ----------------------------------------------


class SuperAlgebra:
    """Finite-dimensional Lie superalgebra given by exact structure constants.

    table[(i, j)] is the bracket [e_i, e_j] as a sparse coordinate vector;
    unsorted pairs are stored explicitly, absent keys mean zero.
    """

    def __init__(
        self,
        labels: Sequence[str],
        parities: Sequence[int],
        degrees: Optional[Sequence[int]],
        table: Dict[Tuple[int, int], Vec],
        meta: Optional[dict] = None,
    ):
        self.labels = list(labels)
        self.parities = list(parities)
        self.degrees = list(degrees) if degrees is not None else None
        self.table = {k: dict(v) for k, v in table.items() if v}
        self.meta = dict(meta or {})
        self._ad_cache: Optional[List[Matrix]] = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket_basis(self, i: int, j: int) -> Vec:
        return self.table.get((i, j), {})

    def bracket_vec(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, cu in u.items():
            for j, cv in v.items():
                t = self.table.get((i, j))
                if t:
                    vec_add_scaled(out, t, cu * cv)
        return out

    def ad_matrix_basis(self, i: int) -> Matrix:
        if self._ad_cache is None:
            self._ad_cache = [None] * self.dim  # type: ignore
        cached = self._ad_cache[i]
        if cached is None:
            cols = [dict(self.table.get((i, j), {})) for j in range(self.dim)]
            cached = Matrix.from_cols(cols, self.dim)
            self._ad_cache[i] = cached
        return cached

    def ad_matrix(self, v: Vec) -> Matrix:
        cols = [self.bracket_vec(v, {j: ONE}) for j in range(self.dim)]
        return Matrix.from_cols(cols, self.dim)

    def parity_of_vec(self, v: Vec) -> int:
        ps = {self.parities[k] for k in v}
        if len(ps) != 1:
            raise ConstructionError("vector is not parity-homogeneous")
        return ps.pop()

    def degree_indices(self, k: int) -> List[int]:
        if self.degrees is None:
            return []
        return [i for i, d in enumerate(self.degrees) if d == k]

    def even_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parities) if p == 0]

    def odd_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parities) if p == 1]

    # -- validation ----------------------------------------------------------

    def anticommutativity_violations(self) -> List[Tuple[int, int]]:
        """Pairs where [x,y] != -(-1)^(px py) [y,x]."""
        bad = []
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = self.table.get((i, j), {})
                rhs = dict(self.table.get((j, i), {}))
                sign = MINUS_ONE if not (self.parities[i] and self.parities[j]) else ONE
                if lhs != vec_scale(rhs, sign):
                    bad.append((i, j))
        return bad

    def jacobi_violations(self) -> List[Tuple[int, int]]:
        """Pairs (i, j) where ad([e_i,e_j]) != [ad e_i, ad e_j].

        Checking this operator identity for a pair checks the graded
        Jacobi identity for every triple (e_i, e_j, e_k) at once, so a
        full sweep over pairs is an exhaustive sweep over basis triples.
        """
        bad = []
        ads = [self.ad_matrix_basis(i) for i in range(self.dim)]
        for i in range(self.dim):
            ad_i = ads[i]
            for j in range(self.dim):
                ad_j = ads[j]
                lhs = Matrix.zero(self.dim, self.dim)
                for k, c in self.table.get((i, j), {}).items():
                    lhs = lhs + ads[k].scale(c)
                rhs = ad_i @ ad_j
                if self.parities[i] and self.parities[j]:
                    rhs = rhs + ad_j @ ad_i
                else:
                    rhs = rhs - ad_j @ ad_i
                if lhs != rhs:
                    bad.append((i, j))
        return bad

    def degree_additivity_violations(self) -> List[Tuple[int, int]]:
        """Pairs whose bracket has a component off degree deg(i)+deg(j)."""
        if self.degrees is None:
            return []
        bad = []
        for (i, j), t in self.table.items():
            want = self.degrees[i] + self.degrees[j]
            if any(self.degrees[k] != want for k in t):
                bad.append((i, j))
        return sorted(bad)

    def parity_additivity_violations(self) -> List[Tuple[int, int]]:
        bad = []
        for (i, j), t in self.table.items():
            want = (self.parities[i] + self.parities[j]) & 1
            if any(self.parities[k] != want for k in t):
                bad.append((i, j))
        return sorted(bad)

    def __repr__(self) -> str:
        name = self.meta.get("name", "SuperAlgebra")
        return f"{name}(dim={self.dim})"


class CartanAlgebra(SuperAlgebra):
    """A built family member, carrying its superderivation witnesses."""

    def __init__(self, family: str, n: int, witnesses: List[SuperDerivation],
                 labels, parities, degrees, table):
        super().__init__(labels, parities, degrees, table,
                         meta={"name": f"{family}({n})", "family": family, "n": n})
        self.family = family
        self.n = n
        self.witnesses = witnesses
        self.w_coords = [derivation_to_w_vec(d) for d in witnesses]
        self._solver = CoordSolver(self.w_coords)

    def coords_of_derivation(self, d: SuperDerivation) -> Optional[Vec]:
        """Coordinates of a derivation in this basis, or None if outside."""
        return self._solver.coords(derivation_to_w_vec(d))

    def vec_to_derivation(self, v: Vec) -> SuperDerivation:
        out = SuperDerivation.zero(self.n)
        for k, c in v.items():
            out = out + self.witnesses[k].scale(c)
        return out


# -- family constructions ----------------------------------------------------


def _family_constraints(family: str, n: int) -> None:
    if family not in FAMILIES:
        raise ConstructionError(f"unknown family {family!r}; expected one of {FAMILIES}")
    minimum = {"W": 2, "S": 3, "S_tilde": 4, "H_tilde": 4, "H": 4}[family]
    if n < minimum:
        raise ConstructionError(f"{family} requires n >= {minimum}, got {n}")
    if family == "S_tilde" and n % 2:
        raise ConstructionError("S_tilde requires even n")


def _build_table(family: str, n: int, witnesses: List[SuperDerivation],
                 labels: List[str], parities: List[int], degrees: List[int]) -> CartanAlgebra:
    coords = [derivation_to_w_vec(d) for d in witnesses]
    solver = CoordSolver(coords)
    dim = len(witnesses)
    table: Dict[Tuple[int, int], Vec] = {}
    for i in range(dim):
        for j in range(i, dim):
            br = superbracket(witnesses[i], witnesses[j])
            if br.is_zero():
                continue
            c = solver.coords(derivation_to_w_vec(br))
            if c is None:
                raise ConstructionError(
                    f"{family}({n}) is not closed: [{labels[i]}, {labels[j]}] leaves the span"
                )
            table[(i, j)] = c
            if i != j:
                sign = ONE if (parities[i] and parities[j]) else MINUS_ONE
                table[(j, i)] = vec_scale(c, sign)
    alg = CartanAlgebra(family, n, witnesses, labels, parities, degrees, table)
    return alg


def _w_witnesses(n: int):
    basis, _ = w_enumeration(n)
    witnesses = [SuperDerivation.monomial(n, mask, i) for mask, i in basis]
    labels = [str(d) for d in witnesses]
    parities = [(monomial_degree(mask) + 1) & 1 for mask, _ in basis]
    degrees = [monomial_degree(mask) - 1 for mask, _ in basis]
    return witnesses, labels, parities, degrees


def _div_sign(mask: int, i: int) -> int:
    """Sign s with d_i(xi_(mask|i)) = s * xi_mask, for i not in mask."""
    bit = 1 << (i - 1)
    return -1 if monomial_degree(mask & (bit - 1)) & 1 else 1


def _s_witnesses(n: int):
    witnesses: List[SuperDerivation] = []
    degrees: List[int] = []
    for d in range(-1, n - 1):
        size = d + 1
        for mask in all_monomials(n, size):
            for i in range(1, n + 1):
                if not mask >> (i - 1) & 1:
                    witnesses.append(SuperDerivation.monomial(n, mask, i))
                    degrees.append(d)
        for s in all_monomials(n, d):
            outside = [i for i in range(1, n + 1) if not s >> (i - 1) & 1]
            if len(outside) < 2:
                continue
            j0 = outside[0]
            anchor = SuperDerivation.monomial(
                n, s | 1 << (j0 - 1), j0, Scalar.from_int(_div_sign(s, j0))
            )
            for i in outside[1:]:
                u = SuperDerivation.monomial(
                    n, s | 1 << (i - 1), i, Scalar.from_int(_div_sign(s, i))
                )
                witnesses.append(u - anchor)
                degrees.append(d)
    labels = [str(w) for w in witnesses]
    parities = [(d + 1) & 1 for d in degrees]
    return witnesses, labels, parities, degrees


def _s_tilde_witnesses(n: int):
    """Kernel of D -> div((1 + xi_1..xi_n) D) inside W(n).

    The homogeneous components of degree 0..n-2 coincide with those of
    S(n); the degree -1 slot is filled by the mixed elements
    (1 - xi_1..xi_n) d_i, labeled with degree -1.
    """
    top = (1 << n) - 1
    basis, pos = w_enumeration(n)
    rows: Dict[Tuple[int, int], Scalar] = {}
    for col, (mask, i) in enumerate(basis):
        img = apply_partial(i, ExteriorElement.monomial(n, mask))
        if mask == 0:
            img = img + apply_partial(i, ExteriorElement.monomial(n, top))
        for m, c in img.terms.items():
            rows[(m, col)] = c
    mat = Matrix(1 << n, len(basis), rows)
    kern = kernel_basis(mat)
    witnesses = [w_vec_to_derivation(n, v) for v in kern.basis]
    degrees = []
    for w in witnesses:
        degs = sorted({f.degree() - 1 for f in w.coeffs if not f.is_zero()
                       for f in [comp for comp in _split_degrees(f)]})
        degrees.append(min(degs))
    # order by (degree, label) for a stable presentation
    order = sorted(range(len(witnesses)), key=lambda k: (degrees[k], str(witnesses[k])))
    witnesses = [witnesses[k] for k in order]
    degrees = [degrees[k] for k in order]
    labels = [str(w) for w in witnesses]
    parities = []
    for w in witnesses:
        parities.append(w.parity())
    return witnesses, labels, parities, degrees


def _split_degrees(f: ExteriorElement) -> List[ExteriorElement]:
    from .exterior import grade_decompose

    return list(grade_decompose(f).values())


def _h_tilde_witnesses(n: int, top_included: bool):
    witnesses: List[SuperDerivation] = []
    labels: List[str] = []
    degrees: List[int] = []
    limit = n if top_included else n - 1
    masks = [m for m in all_monomials(n) if 1 <= monomial_degree(m) <= limit]
    masks.sort(key=lambda m: (monomial_degree(m), m))
    for mask in masks:
        witnesses.append(SuperDerivation.hamiltonian(n, ExteriorElement.monomial(n, mask)))
        labels.append(f"D[{monomial_str(mask)}]")
        degrees.append(monomial_degree(mask) - 2)
    parities = [(d & 1) for d in [monomial_degree(m) for m in masks]]
    return witnesses, labels, parities, degrees


@lru_cache(maxsize=None)
def build_family(family: str, n: int) -> CartanAlgebra:
    """Construct a Cartan family member with verified-closed bracket table.

    Results are cached per (family, n); treat them as immutable.
    """
    _family_constraints(family, n)
    if family == "W":
        witnesses, labels, parities, degrees = _w_witnesses(n)
    elif family == "S":
        witnesses, labels, parities, degrees = _s_witnesses(n)
    elif family == "S_tilde":
        witnesses, labels, parities, degrees = _s_tilde_witnesses(n)
    elif family == "H_tilde":
        witnesses, labels, parities, degrees = _h_tilde_witnesses(n, top_included=True)
    else:
        witnesses, labels, parities, degrees = _h_tilde_witnesses(n, top_included=False)
    return _build_table(family, n, witnesses, labels, parities, degrees)


def family_dimension(family: str, n: int) -> int:
    """Closed-form dimensions used as the stated formulas."""
    return {
        "W": n * 2 ** n,
        "S": (n - 1) * 2 ** n + 1,
        "S_tilde": (n - 1) * 2 ** n + 1,
        "H_tilde": 2 ** n - 1,
        "H": 2 ** n - 2,
    }[family]


def family_dimension_oracle(family: str, n: int) -> int:
    """Independent dimension computation, avoiding build_family's basis.

    W counts monomial coefficients directly; S is the nullity of the
    divergence matrix on all of W(n); S~ the nullity of the twisted
    divergence; H~ the rank of the span {D_f}; H the rank of the span of
    all brackets [D_f, D_g].
    """
    _family_constraints(family, n)
    if family == "W":
        return len(w_enumeration(n)[0])
    _, pos = w_enumeration(n)
    if family in ("S", "S_tilde"):
        top = (1 << n) - 1
        basis, _ = w_enumeration(n)
        rows: Dict[Tuple[int, int], Scalar] = {}
        for col, (mask, i) in enumerate(basis):
            img = apply_partial(i, ExteriorElement.monomial(n, mask))
            if family == "S_tilde" and mask == 0:
                img = img + apply_partial(i, ExteriorElement.monomial(n, top))
            for m, c in img.terms.items():
                rows[(m, col)] = c
        return kernel_basis(Matrix(1 << n, len(basis), rows)).dim
    hams = [SuperDerivation.hamiltonian(n, ExteriorElement.monomial(n, m))
            for m in all_monomials(n) if m]
    if family == "H_tilde":
        ech = Echelon()
        for d in hams:
            ech.add(derivation_to_w_vec(d))
        return ech.rank
    ech = Echelon()
    for a in hams:
        for b in hams:
            br = superbracket(a, b)
            if not br.is_zero():
                ech.add(derivation_to_w_vec(br))
    return ech.rank


def grading_component(g: SuperAlgebra, k: int) -> Subspace:
    """Span of basis elements labeled with Z-degree k, in g's coordinates."""
    return Subspace(g.dim, [{i: ONE} for i in g.degree_indices(k)])


# -- degree-zero identification ----------------------------------------------


class G0Identification:
    """Explicit linear map from g_0 onto a matrix Lie algebra.

    Each degree-zero basis element acts on the span of the generators
    xi_1..xi_n; that n x n matrix is its image.  W(n)_0 lands on gl(n),
    S(n)_0 and S~(n)_0 on sl(n), H(n)_0 and H~(n)_0 on so(n).
    """

    def __init__(self, algebra: CartanAlgebra):
        self.algebra = algebra
        self.g0_indices = algebra.degree_indices(0)
        self.target = {"W": "gl", "S": "sl", "S_tilde": "sl",
                       "H": "so", "H_tilde": "so"}[algebra.family]
        n = algebra.n
        self.n = n
        self.matrices: List[Matrix] = []
        for idx in self.g0_indices:
            witness = algebra.witnesses[idx]
            entries: Dict[Tuple[int, int], Scalar] = {}
            for c in range(1, n + 1):
                img = witness.coeffs[c - 1]
                for mask, val in img.terms.items():
                    if monomial_degree(mask) != 1:
                        raise ConstructionError("degree-zero witness has bad image")
                    r = mask.bit_length() - 1
                    entries[(r, c - 1)] = val
            self.matrices.append(Matrix(n, n, entries))
        self._index_of = {idx: k for k, idx in enumerate(self.g0_indices)}

    def target_dim(self) -> int:
        n = self.n
        return {"gl": n * n, "sl": n * n - 1, "so": n * (n - 1) // 2}[self.target]

    def image_of_vec(self, v: Vec) -> Matrix:
        out = Matrix.zero(self.n, self.n)
        for idx, c in v.items():
            out = out + self.matrices[self._index_of[idx]].scale(c)
        return out

    def verify(self) -> dict:
        """Check the map is a bracket-preserving bijection onto the target."""
        alg = self.algebra
        ech = Echelon()
        for m in self.matrices:
            ech.add({r * self.n + c: v for (r, c), v in m.entries.items()})
        injective = ech.rank == len(self.g0_indices)
        shape_ok = True
        for m in self.matrices:
            if self.target == "sl" and not m.trace().is_zero():
                shape_ok = False
            if self.target == "so" and (m.transpose() + m).entries:
                shape_ok = False
        pairs_checked = 0
        bracket_ok = True
        for a, idx_a in enumerate(self.g0_indices):
            for b, idx_b in enumerate(self.g0_indices):
                lhs = self.matrices[a] @ self.matrices[b] - self.matrices[b] @ self.matrices[a]
                rhs = self.image_of_vec(alg.bracket_basis(idx_a, idx_b))
                pairs_checked += 1
                if lhs != rhs:
                    bracket_ok = False
        return {
            "target": f"{self.target}({self.n})",
            "dim_match": len(self.g0_indices) == self.target_dim(),
            "injective": injective,
            "shape_ok": shape_ok,
            "bracket_preserving": bracket_ok,
            "pairs_checked": pairs_checked,
            "ok": injective and shape_ok and bracket_ok
            and len(self.g0_indices) == self.target_dim(),
        }


def identify_g0(g: CartanAlgebra) -> G0Identification:
    ident = G0Identification(g)
    report = ident.verify()
    if not report["ok"]:
        raise ConstructionError(f"g_0 identification failed: {report}")
    return ident


# -- triangular decomposition ------------------------------------------------


class RootDatum:
    __slots__ = ("weight", "parity", "degree", "space")

    def __init__(self, weight: Tuple[Scalar, ...], parity: int, degree: int, space: Subspace):
        self.weight = weight
        self.parity = parity
        self.degree = degree
        self.space = space

    def is_zero_weight(self) -> bool:
        return all(c.is_zero() for c in self.weight)

    def is_positive(self) -> bool:
        """Degree first, then lexicographic order on the weight tuple."""
        if self.degree != 0:
            return self.degree > 0
        for c in self.weight:
            if not c.is_zero():
                return c.is_lex_positive()
        return False

    def __repr__(self):
        w = ",".join(str(c) for c in self.weight)
        return f"RootDatum(({w}), parity={self.parity}, degree={self.degree}, dim={self.space.dim})"


class TriangularData:
    """g = n^- + h + n with n = n_0 + g^+ and n^- = n_0^- + g_-1."""

    def __init__(self, algebra: CartanAlgebra, h: Subspace, n_plus: Subspace,
                 n_minus: Subspace, roots: List[RootDatum], h_vectors: List[Vec]):
        self.algebra = algebra
        self.h = h
        self.n_plus = n_plus
        self.n_minus = n_minus
        self.roots = roots
        self.h_vectors = h_vectors

    def nonzero_weights(self) -> set:
        return {r.weight for r in self.roots if not r.is_zero_weight()}

    def verify(self) -> dict:
        alg = self.algebra
        dims_ok = self.h.dim + self.n_plus.dim + self.n_minus.dim == alg.dim
        direct = self.h.add(self.n_plus).add(self.n_minus).dim == alg.dim
        cartan_abelian = all(
            not alg.bracket_vec(u, v)
            for u in self.h_vectors for v in self.h_vectors
        )
        weights = self.nonzero_weights()
        sym = all(tuple(-c for c in w) in weights for w in weights)
        invariant = True
        for r in self.roots:
            for hv in self.h_vectors:
                for bv in r.space.basis:
                    img = alg.bracket_vec(hv, bv)
                    if img and not r.space.contains_vec(img):
                        invariant = False
        return {
            "dims_ok": dims_ok,
            "direct_sum": direct,
            "cartan_abelian": cartan_abelian,
            "weights_symmetric": sym,
            "root_spaces_ad_invariant": invariant,
            "ok": dims_ok and direct and cartan_abelian and sym and invariant,
        }


def _cartan_witnesses(g: CartanAlgebra) -> List[SuperDerivation]:
    n = g.n
    if g.family == "W":
        return [SuperDerivation.monomial(n, 1 << (i - 1), i) for i in range(1, n + 1)]
    if g.family in ("S", "S_tilde"):
        return [
            SuperDerivation.monomial(n, 1 << (i - 1), i)
            - SuperDerivation.monomial(n, 1 << i, i + 1)
            for i in range(1, n)
        ]
    pairs = n // 2
    out = []
    for k in range(pairs):
        mask = (1 << (2 * k)) | (1 << (2 * k + 1))
        out.append(SuperDerivation.hamiltonian(n, ExteriorElement.monomial(n, mask)))
    return out


def triangular_decomposition(g: CartanAlgebra) -> TriangularData:
    """Distinguished triangular decomposition with root data.

    Roots are the joint ad(h) eigenvalue tuples; each eigenspace is
    refined into parity- and degree-homogeneous pieces.  Pieces of
    positive Z-degree go to n, negative to n^-, and degree-zero pieces
    split by lexicographic sign of the weight.
    """
    h_vectors = []
    for d in _cartan_witnesses(g):
        c = g.coords_of_derivation(d)
        if c is None:
            raise ConstructionError("Cartan witness lies outside the algebra")
        h_vectors.append(c)
    h = Subspace(g.dim, h_vectors)
    ads = [g.ad_matrix(v) for v in h_vectors]
    components = simultaneous_eigenspaces(ads)

    roots: List[RootDatum] = []
    for tup, space in components:
        groups: Dict[Tuple[int, int], List[Vec]] = {}
        for row in space.basis:
            ps = {g.parities[k] for k in row}
            ds = {g.degrees[k] for k in row}
            if len(ps) != 1 or len(ds) != 1:
                raise ConstructionError("root space vector is not homogeneous")
            groups.setdefault((ps.pop(), ds.pop()), []).append(row)
        for (parity, degree), vecs in sorted(groups.items()):
            roots.append(RootDatum(tup, parity, degree, Subspace(g.dim, vecs)))

    plus_vecs: List[Vec] = []
    minus_vecs: List[Vec] = []
    for r in roots:
        if r.is_zero_weight() and r.degree == 0:
            if r.parity != 0 or not h.contains(r.space):
                raise ConstructionError("zero-weight degree-0 space exceeds the Cartan")
            continue
        target = plus_vecs if r.is_positive() else minus_vecs
        target.extend(r.space.basis)
    n_plus = Subspace(g.dim, plus_vecs)
    n_minus = Subspace(g.dim, minus_vecs)
    tri = TriangularData(g, h, n_plus, n_minus, roots, h_vectors)
    report = tri.verify()
    if not report["ok"]:
        raise ConstructionError(f"triangular decomposition inconsistent: {report}")
    return tri


# -- simplicity ---------------------------------------------------------------


def ideal_closure(g: SuperAlgebra, seeds: Sequence[Vec]) -> Subspace:
    """Smallest subspace containing the seeds and closed under ad(g)."""
    ech = Echelon()
    frontier: List[Vec] = []
    for s in seeds:
        res = ech.reduce(s)
        if res:
            p = min(res)
            row = vec_scale(res, res[p].inverse())
            ech.pivot_rows[p] = row
            frontier.append(row)
    while frontier:
        v = frontier.pop()
        for i in range(g.dim):
            br = g.bracket_vec({i: ONE}, v)
            if not br:
                continue
            res = ech.reduce(br)
            if res:
                p = min(res)
                row = vec_scale(res, res[p].inverse())
                ech.pivot_rows[p] = row
                frontier.append(row)
    return Subspace(g.dim, list(ech.pivot_rows.values()))


def is_simple(g: SuperAlgebra) -> bool:
    """True iff every basis element generates the whole algebra as an ideal.

    The ideal generated by x is the closure of {x} under bracketing with
    all of g; g is simple exactly when no basis element generates a
    proper nonzero ideal (brackets are nontrivial, so dim > 1 suffices
    for the nonabelian requirement at desk scale).
    """
    if g.dim <= 1:
        return False
    for i in range(g.dim):
        if ideal_closure(g, [{i: ONE}]).dim != g.dim:
            return False
    return True
