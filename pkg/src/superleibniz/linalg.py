"""Exact linear algebra over GaussianRational and integer Smith normal form.

Dense row-oriented routines; every dimension in this package is desk scale
(at most ~20), so clarity and exactness win over asymptotics.
"""

from __future__ import annotations

from .scalar import GaussianRational, ZERO, ONE


class SingularMatrixError(ValueError):
    pass


def zeros(rows: int, cols: int):
    return [[ZERO] * cols for _ in range(rows)]


def identity(k: int):
    return [[ONE if i == j else ZERO for j in range(k)] for i in range(k)]


def mat_vec(A, v):
    return [sum((A[i][j] * v[j] for j in range(len(v)) if v[j]), ZERO) for i in range(len(A))]


def mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = zeros(rows, cols)
    for i in range(rows):
        Ai = A[i]
        row = out[i]
        for k in range(inner):
            a = Ai[k]
            if not a:
                continue
            Bk = B[k]
            for j in range(cols):
                if Bk[j]:
                    row[j] = row[j] + a * Bk[j]
    return out


def mat_eq(A, B) -> bool:
    return len(A) == len(B) and all(ra == rb for ra, rb in zip(A, B))


def is_zero_matrix(A) -> bool:
    return all(not x for row in A for x in row)


def rref(rows):
    """Reduced row echelon form.

    Returns (rows, pivots): nonzero rows as tuples, pivot entries normalized
    to 1 and cleared above and below.  Canonical for the row space.
    """
    work = [list(r) for r in rows if any(r)]
    if not work:
        return [], []
    cols = len(work[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, len(work)) if work[i][c]), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = work[r][c].inverse()
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return [tuple(row) for row in work[:r]], pivots


def rank(A) -> int:
    return len(rref(A)[0])


def solve_columns(A, columns):
    """Solve A x = b exactly for each column b; raises if A is singular."""
    k = len(A)
    if any(len(row) != k for row in A):
        raise SingularMatrixError("matrix is not square")
    width = len(columns)
    aug = [list(A[i]) + [col[i] for col in columns] for i in range(k)]
    for c in range(k):
        pivot_row = next((i for i in range(c, k) if aug[i][c]), None)
        if pivot_row is None:
            raise SingularMatrixError("singular matrix")
        aug[c], aug[pivot_row] = aug[pivot_row], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(k):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [[aug[i][k + j] for i in range(k)] for j in range(width)]


def invert(A):
    k = len(A)
    unit_cols = [[ONE if i == j else ZERO for i in range(k)] for j in range(k)]
    cols = solve_columns(A, unit_cols)
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def nullspace(A):
    """Canonical basis of {x : A x = 0} from the RREF free-variable split."""
    if not A:
        return []
    cols = len(A[0])
    reduced, pivots = rref(A)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [ZERO] * cols
        vec[free] = ONE
        for row, pc in zip(reduced, pivots):
            vec[pc] = -row[free]
        basis.append(tuple(vec))
    return basis


class Subspace:
    """A subspace of an ambient coordinate space in canonical RREF basis."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient: int, vectors=()):
        self.ambient = ambient
        rows, pivots = rref([tuple(v) for v in vectors])
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def reduce(self, v):
        """Residual of v after eliminating against the basis rows."""
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add_vector(self, v) -> "Subspace":
        return Subspace(self.ambient, list(self.rows) + [tuple(v)])

    def union(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, list(self.rows) + list(other.rows))

    def row_support_split(self, boundary: int):
        """Counts of rows supported purely below / purely at-or-above / across boundary."""
        low = high = mixed = 0
        for row in self.rows:
            has_low = any(row[:boundary])
            has_high = any(row[boundary:])
            if has_low and has_high:
                mixed += 1
            elif has_low:
                low += 1
            else:
                high += 1
        return low, high, mixed

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


# -- integer lattice kernels ------------------------------------------------


def smith_normal_form(M):
    """Smith normal form with transforms: returns (S, D, T) with S*M*T = D.

    S and T are unimodular; D is diagonal with d_1 | d_2 | ... >= 0.
    Plain integer arithmetic, small matrices only.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    D = [list(r) for r in M]
    S = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    T = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, a, b, c, d):
        for mat, width in ((D, cols), (S, rows)):
            for k in range(width):
                e, f = mat[i][k], mat[j][k]
                mat[i][k] = a * e + b * f
                mat[j][k] = c * e + d * f

    def col_op(i, j, a, b, c, d):
        for mat, height in ((D, rows), (T, cols)):
            for k in range(height):
                e, f = mat[k][i], mat[k][j]
                mat[k][i] = a * e + b * f
                mat[k][j] = c * e + d * f

    def xgcd(a, b):
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        return old_r, old_s, old_t

    def pivot_step(k):
        for i in range(k, rows):
            for j in range(k, cols):
                if D[i][j]:
                    if i != k:
                        row_op(k, i, 0, 1, 1, 0)
                    if j != k:
                        col_op(k, j, 0, 1, 1, 0)
                    return True
        return False

    k = 0
    while k < min(rows, cols):
        if not pivot_step(k):
            break
        while True:
            for i in range(k + 1, rows):
                if D[i][k] % D[k][k]:
                    g, u, v = xgcd(D[k][k], D[i][k])
                    row_op(k, i, u, v, -(D[i][k] // g), D[k][k] // g)
                elif D[i][k]:
                    row_op(k, i, 1, 0, -(D[i][k] // D[k][k]), 1)
            for j in range(k + 1, cols):
                if D[k][j] % D[k][k]:
                    g, u, v = xgcd(D[k][k], D[k][j])
                    col_op(k, j, u, v, -(D[k][j] // g), D[k][k] // g)
                elif D[k][j]:
                    col_op(k, j, 1, 0, -(D[k][j] // D[k][k]), 1)
            if all(not D[i][k] for i in range(k + 1, rows)) and all(
                not D[k][j] for j in range(k + 1, cols)
            ):
                break
        k += 1

    def negate_row(i):
        for kk in range(cols):
            D[i][kk] = -D[i][kk]
        for kk in range(rows):
            S[i][kk] = -S[i][kk]

    for i in range(min(rows, cols)):
        if D[i][i] < 0:
            negate_row(i)

    # enforce d_i | d_{i+1} by the diag(a, b) -> diag(gcd, lcm) reduction
    changed = True
    while changed:
        changed = False
        for i in range(min(rows, cols) - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if not (a and b) or b % a == 0:
                continue
            row_op(i, i + 1, 1, 1, 0, 1)          # row_i += row_{i+1}: [[a, b], [0, b]]
            g, u, v = xgcd(a, b)
            col_op(i, i + 1, u, v, -(b // g), a // g)   # -> [[g, 0], [v*b, lcm]]
            row_op(i, i + 1, 1, 0, -(v * b // g), 1)    # clear the subdiagonal
            if D[i][i] < 0:
                negate_row(i)
            if D[i + 1][i + 1] < 0:
                negate_row(i + 1)
            changed = True
    return S, D, T


def snf_diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def left_kernel_basis(M):
    """Basis of the lattice {t : t*M = 0}: the rows of S at zero rows of D."""
    if not M:
        return []
    S, D, _T = smith_normal_form(M)
    basis = []
    for i in range(len(M)):
        if all(not x for x in D[i]):
            basis.append(tuple(S[i]))
    return basis
