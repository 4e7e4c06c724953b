"""Sparse exact linear algebra over Q(i).

Vectors are dicts {index: Scalar} holding only nonzero entries; matrices
store a sparse (row, col) -> Scalar map.  Subspaces are kept in reduced
row echelon form, which makes every subspace have one canonical basis,
so subspace equality is literal comparison.

Eigenvalue extraction is exact: minimal polynomials come from Krylov
dependencies, and their roots are found inside Q(i) by Gaussian-divisor
candidate search plus the quadratic formula.  Anything that fails to
split over Q(i) raises SplittingFieldError rather than approximating.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .scalars import (
    MINUS_ONE,
    ONE,
    UNITS,
    ZERO,
    Scalar,
    _gi_mul,
    gaussian_divisors,
)

Vec = Dict[int, Scalar]


class LinalgError(ValueError):
    pass


class SplittingFieldError(LinalgError):
    """An eigenvalue problem does not split over Q(i)."""


# -- sparse vector helpers ---------------------------------------------------


def vec_add_scaled(target: Vec, src: Vec, c: Scalar) -> None:
    """target += c * src, in place, eliding zeros."""
    if c.is_zero():
        return
    for k, v in src.items():
        cur = target.get(k)
        if cur is None:
            target[k] = c * v
        else:
            w = cur + c * v
            if w.is_zero():
                del target[k]
            else:
                target[k] = w


def vec_scale(v: Vec, c: Scalar) -> Vec:
    if c.is_zero():
        return {}
    return {k: c * x for k, x in v.items()}


def vec_sub(u: Vec, w: Vec) -> Vec:
    out = dict(u)
    vec_add_scaled(out, w, MINUS_ONE)
    return out


def vec_eq(u: Vec, w: Vec) -> bool:
    return u == w


def vec_dot(u: Vec, w: Vec) -> Scalar:
    if len(w) < len(u):
        u, w = w, u
    acc = ZERO
    for k, v in u.items():
        x = w.get(k)
        if x is not None:
            acc = acc + v * x
    return acc


def vec_from_list(values: Sequence) -> Vec:
    out: Vec = {}
    for k, v in enumerate(values):
        s = v if isinstance(v, Scalar) else Scalar.from_int(v)
        if not s.is_zero():
            out[k] = s
    return out


def vec_to_list(v: Vec, n: int) -> List[Scalar]:
    return [v.get(k, ZERO) for k in range(n)]


# -- matrices ----------------------------------------------------------------


class Matrix:
    """Immutable sparse matrix; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries", "_col_cache")

    def __init__(self, rows: int, cols: int, entries: Dict[Tuple[int, int], Scalar]):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in entries.items() if not v.is_zero()}
        self._col_cache: Optional[List[Vec]] = None

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "Matrix":
        entries: Dict[Tuple[int, int], Scalar] = {}
        ncols = max((len(r) for r in rows), default=0)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                s = v if isinstance(v, Scalar) else Scalar.from_int(v)
                if not s.is_zero():
                    entries[(i, j)] = s
        return Matrix(len(rows), ncols, entries)

    @staticmethod
    def from_cols(cols: Sequence[Vec], nrows: int) -> "Matrix":
        entries: Dict[Tuple[int, int], Scalar] = {}
        for j, col in enumerate(cols):
            for i, v in col.items():
                entries[(i, j)] = v
        return Matrix(nrows, len(cols), entries)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, {(i, i): ONE for i in range(n)})

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, {})

    def columns(self) -> List[Vec]:
        if self._col_cache is None:
            cols: List[Vec] = [dict() for _ in range(self.cols)]
            for (i, j), v in self.entries.items():
                cols[j][i] = v
            self._col_cache = cols
        return self._col_cache

    def row_dicts(self) -> List[Vec]:
        rows: List[Vec] = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries.get((i, j), ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        raise TypeError("matrices are not hashable")

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise LinalgError("matrix shape mismatch in addition")
        out = dict(self.entries)
        for k, v in other.entries.items():
            cur = out.get(k)
            if cur is None:
                out[k] = v
            else:
                w = cur + v
                if w.is_zero():
                    del out[k]
                else:
                    out[k] = w
        return Matrix(self.rows, self.cols, out)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(MINUS_ONE)

    def scale(self, c: Scalar) -> "Matrix":
        if c.is_zero():
            return Matrix.zero(self.rows, self.cols)
        return Matrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def mul_vec(self, v: Vec) -> Vec:
        out: Vec = {}
        cols = self.columns()
        for j, c in v.items():
            vec_add_scaled(out, cols[j], c)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError("matrix shape mismatch in product")
        out_cols = [self.mul_vec(col) for col in other.columns()]
        return Matrix.from_cols(out_cols, self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def trace(self) -> Scalar:
        acc = ZERO
        for (i, j), v in self.entries.items():
            if i == j:
                acc = acc + v
        return acc

    def commutes_with(self, other: "Matrix") -> bool:
        return (self @ other).entries == (other @ self).entries

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


# -- echelon forms -----------------------------------------------------------


class Echelon:
    """Incremental row echelon basis with unit pivots.

    Rows are kept pivot-normalized and pivot-sorted; full reduction
    (entries above pivots cleared) happens in rref_rows(), giving the
    canonical basis used by Subspace.
    """

    def __init__(self):
        self.pivot_rows: Dict[int, Vec] = {}

    def reduce(self, vec: Vec) -> Vec:
        out = dict(vec)
        while out:
            p = min(out)
            row = self.pivot_rows.get(p)
            if row is None:
                return out
            vec_add_scaled(out, row, -out[p])
        return out

    def add(self, vec: Vec) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        res = self.reduce(vec)
        if not res:
            return False
        p = min(res)
        inv = res[p].inverse()
        self.pivot_rows[p] = vec_scale(res, inv)
        return True

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def rref_rows(self) -> List[Vec]:
        pivots = sorted(self.pivot_rows)
        rows = [dict(self.pivot_rows[p]) for p in pivots]
        for i in range(len(rows) - 1, -1, -1):
            p = pivots[i]
            for k in range(i):
                above = rows[k]
                c = above.get(p)
                if c is not None:
                    vec_add_scaled(above, rows[i], -c)
        return rows


class TrackedEchelon:
    """Echelon that also tracks the combination producing each row."""

    def __init__(self):
        self.rows: List[Tuple[int, Vec, Vec]] = []  # (pivot, row, combo)

    def reduce(self, vec: Vec, combo: Vec) -> Tuple[Vec, Vec]:
        out = dict(vec)
        comb = dict(combo)
        changed = True
        while changed and out:
            changed = False
            p = min(out)
            for piv, row, rcomb in self.rows:
                if piv == p:
                    c = -out[p]
                    vec_add_scaled(out, row, c)
                    vec_add_scaled(comb, rcomb, c)
                    changed = True
                    break
        return out, comb

    def add(self, vec: Vec, combo: Vec) -> Optional[Tuple[Vec, Vec]]:
        """Returns (residual, combo) if dependent, else None after inserting."""
        res, comb = self.reduce(vec, combo)
        if not res:
            return res, comb
        p = min(res)
        inv = res[p].inverse()
        self.rows.append((p, vec_scale(res, inv), vec_scale(comb, inv)))
        return None


# -- subspaces ---------------------------------------------------------------


class Subspace:
    """A subspace of Q(i)^ambient_dim with canonical RREF basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, vectors: Iterable[Vec]):
        ech = Echelon()
        for v in vectors:
            for k in v:
                if k < 0 or k >= ambient_dim:
                    raise LinalgError("vector coordinate outside ambient space")
            ech.add(v)
        self.ambient_dim = ambient_dim
        self.basis: Tuple[Vec, ...] = tuple(ech.rref_rows())

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, [])

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, [{k: ONE} for k in range(ambient_dim)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> List[int]:
        return [min(row) for row in self.basis]

    def contains_vec(self, v: Vec) -> bool:
        ech = Echelon()
        for row in self.basis:
            ech.add(row)
        return ech.contains(v)

    def contains(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise LinalgError("ambient dimension mismatch")
        ech = Echelon()
        for row in self.basis:
            ech.add(row)
        return all(ech.contains(v) for v in other.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def add(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise LinalgError("ambient dimension mismatch")
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize [u|u] and [w|0]; zero-left rows carry it."""
        if self.ambient_dim != other.ambient_dim:
            raise LinalgError("ambient dimension mismatch")
        n = self.ambient_dim
        ech = Echelon()
        for u in self.basis:
            doubled = dict(u)
            for k, v in u.items():
                doubled[k + n] = v
            ech.add(doubled)
        for w in other.basis:
            ech.add(dict(w))
        out = []
        for p, row in ech.pivot_rows.items():
            if p >= n:
                out.append({k - n: v for k, v in row.items()})
        return Subspace(n, out)

    def project_coords(self, coords: Iterable[int]) -> "Subspace":
        """Projection onto a coordinate subset (kept in ambient indexing)."""
        cs = set(coords)
        return Subspace(
            self.ambient_dim,
            [{k: v for k, v in row.items() if k in cs} for row in self.basis],
        )

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def subspace_ops(u: Subspace, w: Subspace) -> dict:
    """Sum, intersection and containment in one call."""
    return {
        "sum": u.add(w),
        "intersection": u.intersect(w),
        "contains": u.contains(w),
    }


# -- kernels, solving, rank --------------------------------------------------


def rank(m: Matrix) -> int:
    ech = Echelon()
    for row in m.row_dicts():
        ech.add(row)
    return ech.rank


def kernel_basis(m: Matrix) -> Subspace:
    """Null space {x : m x = 0}; rank + dim(kernel) = cols."""
    ech = Echelon()
    for row in m.row_dicts():
        ech.add(row)
    rows = ech.rref_rows()
    pivots = [min(r) for r in rows]
    pivot_set = set(pivots)
    out: List[Vec] = []
    for j in range(m.cols):
        if j in pivot_set:
            continue
        v: Vec = {j: ONE}
        for p, row in zip(pivots, rows):
            c = row.get(j)
            if c is not None:
                v[p] = -c
        out.append(v)
    return Subspace(m.cols, out)


def solve(m: Matrix, b: Vec) -> Optional[Vec]:
    """Some x with m x = b, or None when b is outside the column space."""
    n = m.cols
    ech = Echelon()
    for i, row in enumerate(m.row_dicts()):
        aug = dict(row)
        # the augmented column sits at index n
        bv = b.get(i)
        if bv is not None:
            aug[n] = bv
        ech.add(aug)
    rows = ech.rref_rows()
    x: Vec = {}
    for row in rows:
        p = min(row)
        if p == n:
            return None
        rhs = row.get(n)
        if rhs is not None:
            x[p] = rhs
    return x


def solve_matrix(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """Columnwise solve; None if any column is unsolvable."""
    cols = []
    for col in b.columns():
        x = solve(m, col)
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_cols(cols, m.cols)


# -- polynomials over Q(i) ---------------------------------------------------

Poly = List[Scalar]


def poly_trim(p: Poly) -> Poly:
    while p and p[-1].is_zero():
        p.pop()
    return p


def poly_eval(p: Poly, x: Scalar) -> Scalar:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p: Poly) -> Poly:
    return poly_trim([c * Scalar.from_int(k) for k, c in enumerate(p)][1:])


def poly_divmod(p: Poly, q: Poly) -> Tuple[Poly, Poly]:
    q = poly_trim(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = poly_trim(list(p))
    out = [ZERO] * max(0, len(r) - len(q) + 1)
    inv = q[-1].inverse()
    while len(r) >= len(q):
        if r[-1].is_zero():
            r.pop()
            continue
        c = r[-1] * inv
        k = len(r) - len(q)
        out[k] = c
        for j, qc in enumerate(q):
            r[k + j] = r[k + j] - c * qc
        r.pop()
    return poly_trim(out), poly_trim(r)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    a, b = poly_trim(list(p)), poly_trim(list(q))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def poly_is_squarefree(p: Poly) -> bool:
    return len(poly_gcd(p, poly_deriv(list(p)))) <= 1


def _root_candidates(p: Poly) -> List[Scalar]:
    """Gaussian-rational candidates u/v from divisors of the end coefficients."""
    den = 1
    for c in p:
        den = den * c.d // __import__("math").gcd(den, c.d)
    ints = [(c.a * (den // c.d), c.b * (den // c.d)) for c in p]
    lead = ints[-1]
    k = 0
    while ints[k] == (0, 0):
        k += 1
    const = ints[k]
    cands: List[Scalar] = []
    seen = set()
    if k > 0:
        cands.append(ZERO)
        seen.add((0, 0, 1))
    for u in gaussian_divisors(const):
        for unit in UNITS:
            uu = _gi_mul(u, unit)
            for v in gaussian_divisors(lead):
                s = Scalar.make(uu[0] * v[0] + uu[1] * v[1],
                                uu[1] * v[0] - uu[0] * v[1],
                                v[0] * v[0] + v[1] * v[1])
                key = (s.a, s.b, s.d)
                if key not in seen:
                    seen.add(key)
                    cands.append(s)
    return cands


def poly_roots(p: Poly) -> List[Scalar]:
    """All roots of a squarefree polynomial, provided they all lie in Q(i).

    Raises SplittingFieldError when the polynomial has an irreducible
    factor of degree >= 2 over Q(i).
    """
    from .scalars import scalar_sqrt

    p = poly_trim(list(p))
    if len(p) <= 1:
        return []
    roots: List[Scalar] = []
    while len(p) > 3:
        found = None
        for cand in _root_candidates(p):
            if poly_eval(p, cand).is_zero():
                found = cand
                break
        if found is None:
            raise SplittingFieldError(
                "polynomial of degree %d has no root in Q(i)" % (len(p) - 1)
            )
        roots.append(found)
        p, rem = poly_divmod(p, [-found, ONE])
        assert not rem
    if len(p) == 2:
        roots.append(-p[0] / p[1])
    elif len(p) == 3:
        inv = p[2].inverse()
        b, c = p[1] * inv, p[0] * inv
        disc = b * b - Scalar.from_int(4) * c
        s = scalar_sqrt(disc)
        if s is None:
            raise SplittingFieldError("quadratic factor does not split over Q(i)")
        half = Scalar.make(1, 0, 2)
        roots.append((-b + s) * half)
        roots.append((-b - s) * half)
    return roots


# -- minimal polynomials and joint eigenspaces -------------------------------


def minimal_polynomial(m: Matrix) -> Poly:
    """Minimal polynomial via Krylov dependency among vectorized powers."""
    if m.rows != m.cols:
        raise LinalgError("minimal polynomial of a non-square matrix")
    n = m.rows
    tracked = TrackedEchelon()
    power = Matrix.identity(n)
    k = 0
    while True:
        vec = {i * n + j: v for (i, j), v in power.entries.items()}
        res = tracked.add(vec, {k: ONE})
        if res is not None:
            _, combo = res
            coeffs = [combo.get(j, ZERO) for j in range(k + 1)]
            inv = coeffs[-1].inverse()
            return [c * inv for c in coeffs]
        k += 1
        power = m @ power


def eigenvalues(m: Matrix) -> List[Scalar]:
    """Eigenvalues of a diagonalizable matrix; exact, over Q(i) only."""
    mp = minimal_polynomial(m)
    if not poly_is_squarefree(mp):
        raise LinalgError("matrix is not diagonalizable over Q(i)")
    return poly_roots(mp)


def eigenspace(m: Matrix, lam: Scalar) -> Subspace:
    shifted = m - Matrix.identity(m.rows).scale(lam)
    return kernel_basis(shifted)


def _restrict(op: Matrix, basis: List[Vec]) -> Matrix:
    """Matrix of op on an invariant subspace, in the given basis."""
    bmat = Matrix.from_cols(basis, op.rows)
    image_cols = [op.mul_vec(v) for v in basis]
    r = solve_matrix(bmat, Matrix.from_cols(image_cols, op.rows))
    if r is None:
        raise LinalgError("subspace is not invariant under the operator")
    return r


def simultaneous_eigenspaces(ops: Sequence[Matrix]) -> List[Tuple[Tuple[Scalar, ...], Subspace]]:
    """Joint eigenspace decomposition of commuting diagonalizable operators.

    Returns (eigenvalue tuple, subspace) pairs covering the full ambient
    space; raises on non-commuting input or an operator that fails to
    diagonalize over Q(i).
    """
    if not ops:
        raise LinalgError("no operators given")
    n = ops[0].rows
    for op in ops:
        if op.rows != n or op.cols != n:
            raise LinalgError("operators must be square of equal size")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not ops[i].commutes_with(ops[j]):
                raise LinalgError(f"operators {i} and {j} do not commute")

    components: List[Tuple[Tuple[Scalar, ...], List[Vec]]] = [
        ((), [{k: ONE} for k in range(n)])
    ]
    for op in ops:
        refined: List[Tuple[Tuple[Scalar, ...], List[Vec]]] = []
        for tup, basis in components:
            r = _restrict(op, basis)
            mp = minimal_polynomial(r)
            if not poly_is_squarefree(mp):
                raise LinalgError("operator not diagonalizable on a component")
            lams = poly_roots(mp)
            total = 0
            for lam in lams:
                ker = kernel_basis(r - Matrix.identity(r.rows).scale(lam))
                if ker.dim == 0:
                    continue
                sub_basis = []
                for kv in ker.basis:
                    amb: Vec = {}
                    for bk, c in kv.items():
                        vec_add_scaled(amb, basis[bk], c)
                    sub_basis.append(amb)
                total += ker.dim
                refined.append((tup + (lam,), sub_basis))
            if total != len(basis):
                raise LinalgError("eigenspaces fail to fill a component")
        components = refined
    out = [(tup, Subspace(n, basis)) for tup, basis in components]
    out.sort(key=lambda item: tuple(s.lex_key() for s in item[0]))
    return out
