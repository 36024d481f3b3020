"""Z2-graded algebras by structure constants, with their nilpotent invariants.

Basis convention everywhere: flat indices 0..n-1 are the even basis
x_1..x_n, indices n..n+m-1 are the odd basis y_1..y_m.  Absent table
entries are zero products.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import Subspace
from .scalar import GaussianRational, ONE, ZERO


class NotNilpotentError(ValueError):
    pass


def _coeff(c) -> GaussianRational:
    return c if isinstance(c, GaussianRational) else GaussianRational(c)


class SuperAlgebra:
    """Structure-constant table of a finite-dimensional Z2-graded algebra."""

    __slots__ = ("n", "m", "table")

    def __init__(self, n: int, m: int, table):
        if n < 0 or m < 0:
            raise ValueError("dimensions must be nonnegative")
        self.n = n
        self.m = m
        normalized: dict[tuple[int, int], dict[int, GaussianRational]] = {}
        dim = n + m
        for (p, q), entry in table.items():
            if not (0 <= p < dim and 0 <= q < dim):
                raise ValueError(f"basis index out of range in cell ({p}, {q})")
            cell = {}
            for r, c in entry.items():
                if not 0 <= r < dim:
                    raise ValueError(f"result index {r} out of range")
                c = _coeff(c)
                if c:
                    cell[r] = c
            if cell:
                normalized[(p, q)] = cell
        self.table = normalized

    @property
    def dim(self) -> int:
        return self.n + self.m

    def parity(self, k: int) -> int:
        return 0 if k < self.n else 1

    def x_index(self, i: int) -> int:
        """Flat index of x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"x_{i} out of range")
        return i - 1

    def y_index(self, j: int) -> int:
        """Flat index of y_j (1-based)."""
        if not 1 <= j <= self.m:
            raise ValueError(f"y_{j} out of range")
        return self.n + j - 1

    def basis_vector(self, k: int):
        v = [ZERO] * self.dim
        v[k] = ONE
        return v

    def product_basis(self, p: int, q: int) -> dict[int, GaussianRational]:
        return self.table.get((p, q), {})

    def product(self, u, v):
        """Bilinear extension of the table to coordinate vectors."""
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError("vector length must equal n + m")
        out = [ZERO] * self.dim
        for p, up in enumerate(u):
            if not up:
                continue
            for q, vq in enumerate(v):
                if not vq:
                    continue
                cell = self.table.get((p, q))
                if not cell:
                    continue
                f = up * vq
                for r, c in cell.items():
                    out[r] = out[r] + f * c
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SuperAlgebra)
            and (self.n, self.m) == (other.n, other.m)
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.n, self.m, tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.table.items()))))

    def __repr__(self):
        return f"SuperAlgebra(n={self.n}, m={self.m}, cells={len(self.table)})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        cells = []
        for (p, q) in sorted(self.table):
            entries = [
                {"r": r, "c": self.table[(p, q)][r].to_json()}
                for r in sorted(self.table[(p, q)])
            ]
            cells.append({"p": p, "q": q, "entries": entries})
        return {"n": self.n, "m": self.m, "table": cells}

    @classmethod
    def from_json(cls, obj) -> "SuperAlgebra":
        try:
            n, m = int(obj["n"]), int(obj["m"])
            table = {}
            for cell in obj.get("table", []):
                entry = {
                    int(e["r"]): GaussianRational.from_json(e["c"])
                    for e in cell["entries"]
                }
                table[(int(cell["p"]), int(cell["q"]))] = entry
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed algebra JSON: {exc}") from exc
        return cls(n, m, table)


@dataclass(frozen=True)
class CharSequence:
    """Pair of descending Jordan-block size lists (even part | odd part)."""

    even_part: tuple[int, ...]
    odd_part: tuple[int, ...]

    def __post_init__(self):
        for part in (self.even_part, self.odd_part):
            if any(a < b for a, b in zip(part, part[1:])):
                raise ValueError("block sizes must be weakly decreasing")
            if any(a < 1 for a in part):
                raise ValueError("block sizes must be positive")

    def __str__(self):
        left = ",".join(map(str, self.even_part))
        right = ",".join(map(str, self.odd_part))
        return f"({left} | {right})"


@dataclass(frozen=True)
class BaseChange:
    """Degree-zero base change: new basis columns in old coordinates."""

    even: tuple
    odd: tuple

    @classmethod
    def from_matrices(cls, even_matrix, odd_matrix) -> "BaseChange":
        return cls(
            tuple(tuple(row) for row in even_matrix),
            tuple(tuple(row) for row in odd_matrix),
        )

    @classmethod
    def identity(cls, n: int, m: int) -> "BaseChange":
        return cls.from_matrices(linalg.identity(n), linalg.identity(m))

    def full_matrix(self):
        n, m = len(self.even), len(self.odd)
        out = linalg.zeros(n + m, n + m)
        for i in range(n):
            for j in range(n):
                out[i][j] = self.even[i][j]
        for i in range(m):
            for j in range(m):
                out[n + i][n + j] = self.odd[i][j]
        return out

    def inverse(self) -> "BaseChange":
        return BaseChange.from_matrices(
            linalg.invert([list(r) for r in self.even]),
            linalg.invert([list(r) for r in self.odd]),
        )


@dataclass
class ClosureReport:
    ok: bool
    violations: list  # of (p, q, r)


@dataclass
class LeibnizViolation:
    x: int
    y: int
    z: int
    residual: tuple


@dataclass
class LeibnizReport:
    ok: bool
    violations: list


@dataclass
class SymmetrizationReport:
    ok: bool
    failures: list  # of (p, q)


@dataclass
class LieSuperReport:
    ok: bool
    closed: bool
    antisymmetry_ok: bool
    jacobi_ok: bool


@dataclass
class CharSequenceResult:
    sequence: CharSequence
    witness_even: tuple
    witness_odd: tuple


# -- sparse right-multiplication operators ----------------------------------


class _Op:
    """Sparse linear operator as a dict of nonzero columns."""

    __slots__ = ("dim", "cols")

    def __init__(self, dim, cols=None):
        self.dim = dim
        self.cols = cols if cols is not None else {}

    def apply(self, vec_items):
        out: dict[int, GaussianRational] = {}
        for p, c in vec_items:
            col = self.cols.get(p)
            if not col:
                continue
            for r, w in col.items():
                acc = out.get(r, ZERO) + c * w
                if acc:
                    out[r] = acc
                elif r in out:
                    del out[r]
        return out

    def compose(self, other: "_Op") -> "_Op":
        cols = {}
        for p, col in other.cols.items():
            image = self.apply(col.items())
            if image:
                cols[p] = image
        return _Op(self.dim, cols)

    def scaled_add(self, factor, other: "_Op") -> "_Op":
        cols = {p: dict(col) for p, col in self.cols.items()}
        for p, col in other.cols.items():
            target = cols.setdefault(p, {})
            for r, w in col.items():
                acc = target.get(r, ZERO) + factor * w
                if acc:
                    target[r] = acc
                elif r in target:
                    del target[r]
            if not target:
                del cols[p]
        return _Op(self.dim, cols)

    def is_zero(self) -> bool:
        return not self.cols

    def column(self, p):
        return self.cols.get(p, {})

    def to_matrix(self):
        out = linalg.zeros(self.dim, self.dim)
        for p, col in self.cols.items():
            for r, w in col.items():
                out[r][p] = w
        return out

    def flatten(self):
        vec = [ZERO] * (self.dim * self.dim)
        for p, col in self.cols.items():
            for r, w in col.items():
                vec[r * self.dim + p] = w
        return tuple(vec)


def right_mult_op(A: SuperAlgebra, x) -> _Op:
    """z |-> [z, x] as a sparse operator, x a coordinate vector."""
    cols = {}
    for (p, q), cell in A.table.items():
        if not x[q]:
            continue
        col = cols.setdefault(p, {})
        f = x[q]
        for r, c in cell.items():
            acc = col.get(r, ZERO) + f * c
            if acc:
                col[r] = acc
            elif r in col:
                del col[r]
    return _Op(A.dim, {p: col for p, col in cols.items() if col})


def right_mult_basis_op(A: SuperAlgebra, k: int) -> _Op:
    cols = {}
    for (p, q), cell in A.table.items():
        if q == k and cell:
            cols[p] = dict(cell)
    return _Op(A.dim, cols)


def right_mult_matrix(A: SuperAlgebra, x):
    """Blocks of R_x on the even and odd parts (restrictions when x is even)."""
    op = right_mult_op(A, x)
    n, m = A.n, A.m
    even = linalg.zeros(n, n)
    odd = linalg.zeros(m, m)
    for p, col in op.cols.items():
        for r, w in col.items():
            if p < n and r < n:
                even[r][p] = w
            elif p >= n and r >= n:
                odd[r - n][p - n] = w
    return even, odd


# -- checks ------------------------------------------------------------------


def check_graded_closure(A: SuperAlgebra) -> ClosureReport:
    violations = []
    for (p, q), cell in sorted(A.table.items()):
        expected = (A.parity(p) + A.parity(q)) % 2
        for r in sorted(cell):
            if A.parity(r) != expected:
                violations.append((p, q, r))
    return ClosureReport(ok=not violations, violations=violations)


def check_leibniz(A: SuperAlgebra) -> LeibnizReport:
    """Graded Leibniz identity on all homogeneous basis triples.

    Checked in operator form: for basis elements y, z of parities a, b the
    identity for every x is equivalent to R_[y,z] = R_z R_y - (-1)^{ab} R_y R_z.
    A nonzero column x of the residual operator is reported as the violating
    triple (x, y, z) with its residual vector.
    """
    dim = A.dim
    ops = [right_mult_basis_op(A, k) for k in range(dim)]
    violations = []
    for y in range(dim):
        ry = ops[y]
        for z in range(dim):
            rz = ops[z]
            sign = -ONE if A.parity(y) and A.parity(z) else ONE
            rhs = rz.compose(ry).scaled_add(-sign, ry.compose(rz))
            lhs = _Op(dim)
            for r, c in A.product_basis(y, z).items():
                lhs = lhs.scaled_add(c, ops[r])
            residual = lhs.scaled_add(-ONE, rhs)
            for x in sorted(residual.cols):
                col = residual.column(x)
                vec = tuple(col.get(r, ZERO) for r in range(dim))
                violations.append(LeibnizViolation(x=x, y=y, z=z, residual=vec))
    return LeibnizReport(ok=not violations, violations=violations)


# -- series, annihilator, generators ----------------------------------------


def lower_central_series(A: SuperAlgebra) -> list[Subspace]:
    """L^1 = L, L^{k+1} = [L^k, L], until zero or stabilization."""
    dim = A.dim
    current = Subspace(dim, [A.basis_vector(k) for k in range(dim)])
    series = [current]
    while current.dim:
        products = []
        for row in current.rows:
            for k in range(dim):
                w = A.product(list(row), A.basis_vector(k))
                if any(w):
                    products.append(w)
        nxt = Subspace(dim, products)
        series.append(nxt)
        if nxt.dim == current.dim:
            break
        current = nxt
    return series


def nilindex(A: SuperAlgebra) -> int | None:
    """Minimal s with L^s = 0, or None when the series stabilizes nonzero."""
    series = lower_central_series(A)
    if series[-1].dim:
        return None
    return len(series)


def right_annihilator(A: SuperAlgebra) -> Subspace:
    """Exact solution space of [b_p, z] = 0 for all basis elements b_p."""
    dim = A.dim
    rows = []
    for p in range(dim):
        # constraint rows of z |-> [e_p, z], one per output coordinate
        by_output: dict[int, list] = {}
        for (pp, q), cell in A.table.items():
            if pp != p:
                continue
            for r, c in cell.items():
                by_output.setdefault(r, [ZERO] * dim)[q] = c
        rows.extend(tuple(row) for row in by_output.values())
    if not rows:
        return Subspace(dim, [A.basis_vector(k) for k in range(dim)])
    return Subspace(dim, linalg.nullspace([list(r) for r in rows]))


def symmetrized_in_annihilator(A: SuperAlgebra) -> SymmetrizationReport:
    """[a,b] + (-1)^{ab}[b,a] lies in the right annihilator, per basis pair."""
    ann = right_annihilator(A)
    failures = []
    for p in range(A.dim):
        for q in range(A.dim):
            sign = -ONE if A.parity(p) and A.parity(q) else ONE
            v = [ZERO] * A.dim
            for r, c in A.product_basis(p, q).items():
                v[r] = v[r] + c
            for r, c in A.product_basis(q, p).items():
                v[r] = v[r] + sign * c
            if any(v) and not ann.contains(v):
                failures.append((p, q))
    return SymmetrizationReport(ok=not failures, failures=failures)


def minimal_generators(A: SuperAlgebra):
    """Graded dimensions of L/L^2 with basis-vector representatives."""
    series = lower_central_series(A)
    if series[-1].dim:
        raise NotNilpotentError("algebra is not nilpotent")
    l2 = series[1] if len(series) > 1 else Subspace(A.dim)
    even = odd = 0
    reps = []
    span = l2
    for k in range(A.dim):
        v = A.basis_vector(k)
        grown = span.add_vector(v)
        if grown.dim > span.dim:
            span = grown
            reps.append(tuple(v))
            if A.parity(k):
                odd += 1
            else:
                even += 1
    return even, odd, reps


def subalgebra_generated(A: SuperAlgebra, gens) -> Subspace:
    """Smallest product-closed subspace containing gens."""
    span = Subspace(A.dim, [tuple(g) for g in gens])
    while True:
        products = []
        for u in span.rows:
            for v in span.rows:
                w = A.product(list(u), list(v))
                if any(w) and not span.contains(w):
                    products.append(w)
        if not products:
            return span
        span = Subspace(A.dim, list(span.rows) + products)


def restricted_algebra(A: SuperAlgebra, span: Subspace) -> SuperAlgebra:
    """The bracket of A restricted to a graded product-closed subspace.

    Basis rows are reordered even-first; raises when the span mixes parities
    or is not closed under the product.
    """
    even_rows = [r for r in span.rows if not any(r[A.n:])]
    odd_rows = [r for r in span.rows if not any(r[: A.n])]
    if len(even_rows) + len(odd_rows) != span.dim:
        raise ValueError("subspace is not graded")
    basis = even_rows + odd_rows
    flat = [list(r) for r in basis]
    table = {}
    for p, u in enumerate(flat):
        for q, v in enumerate(flat):
            w = A.product(u, v)
            if not any(w):
                continue
            coeffs = _express_in_rows(w, basis)
            if coeffs is None:
                raise ValueError("subspace is not product-closed")
            table[(p, q)] = {r: c for r, c in enumerate(coeffs) if c}
    return SuperAlgebra(len(even_rows), len(odd_rows), table)


# -- Jordan data and the characteristic sequence ------------------------------


def jordan_blocks(M) -> tuple[int, ...]:
    """Descending Jordan block sizes of a nilpotent matrix, by rank sequence.

    blocks of size >= k equal rank(M^{k-1}) - rank(M^k).
    """
    dim = len(M)
    if dim == 0:
        return ()
    powers = [linalg.identity(dim)]
    for _ in range(dim):
        powers.append(linalg.mat_mul(powers[-1], M))
    if not linalg.is_zero_matrix(powers[dim]):
        raise NotNilpotentError("matrix is not nilpotent")
    ranks = [linalg.rank(P) for P in powers]
    sizes = []
    for k in range(1, dim + 1):
        at_least_k = ranks[k - 1] - ranks[k]
        at_least_k1 = ranks[k] - ranks[k + 1] if k < dim else 0
        sizes.extend([k] * (at_least_k - at_least_k1))
    return tuple(sorted(sizes, reverse=True))


def even_derived_subspace(A: SuperAlgebra) -> Subspace:
    """Span of [L_0, L_0] inside the even coordinates."""
    vectors = []
    for (p, q), cell in A.table.items():
        if A.parity(p) == 0 and A.parity(q) == 0 and cell:
            v = [ZERO] * A.dim
            for r, c in cell.items():
                v[r] = c
            vectors.append(v)
    return Subspace(A.dim, vectors)


def _random_scalar(rng: random.Random) -> GaussianRational:
    return GaussianRational(
        Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
        Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
    )


def char_sequence(A: SuperAlgebra, extra_samples: int = 0, seed: int = 0) -> CharSequenceResult:
    """Lexicographic maxima of the Jordan data of R_x over even test elements.

    Test set: every even basis vector outside [L_0, L_0], plus seeded random
    even vectors (discarded when they fall inside [L_0, L_0]).  The even and
    odd maxima are taken independently, each with its attaining witness.
    """
    if A.n == 0:
        raise ValueError("no even part to sample from")
    derived = even_derived_subspace(A)
    candidates = []
    for i in range(A.n):
        v = A.basis_vector(i)
        if not derived.contains(v):
            candidates.append(v)
    rng = random.Random(seed)
    target = len(candidates) + extra_samples
    attempts = 0
    while len(candidates) < target and attempts < 20 * (extra_samples + 1):
        attempts += 1
        v = [_random_scalar(rng) for _ in range(A.n)] + [ZERO] * A.m
        if any(v) and not derived.contains(v):
            candidates.append(v)
    if not candidates:
        raise ValueError("L_0 \\ [L_0, L_0] is empty")
    best_even = best_odd = None
    witness_even = witness_odd = None
    for v in candidates:
        even_block, odd_block = right_mult_matrix(A, v)
        c0 = jordan_blocks(even_block)
        c1 = jordan_blocks(odd_block)
        if best_even is None or c0 > best_even:
            best_even, witness_even = c0, tuple(v)
        if best_odd is None or c1 > best_odd:
            best_odd, witness_odd = c1, tuple(v)
    return CharSequenceResult(
        sequence=CharSequence(even_part=best_even, odd_part=best_odd),
        witness_even=witness_even,
        witness_odd=witness_odd,
    )


# -- base change ---------------------------------------------------------------


def transport(A: SuperAlgebra, T: BaseChange) -> SuperAlgebra:
    """Structure constants of the same bracket in the new basis.

    New constants solve T c' = [T e_p, T e_q] columnwise by exact elimination;
    raises SingularMatrixError when either block of T is singular.
    """
    if len(T.even) != A.n or len(T.odd) != A.m:
        raise ValueError("base change blocks do not match algebra dimensions")
    full = T.full_matrix()
    dim = A.dim
    new_basis = [[full[i][j] for i in range(dim)] for j in range(dim)]
    columns = []
    cells = []
    for p in range(dim):
        for q in range(dim):
            w = A.product(new_basis[p], new_basis[q])
            if any(w):
                columns.append(w)
                cells.append((p, q))
    solved = linalg.solve_columns(full, columns) if columns else []
    if not columns:
        # still validate invertibility
        linalg.solve_columns(full, [[ZERO] * dim])
    table = {}
    for (p, q), coeffs in zip(cells, solved):
        table[(p, q)] = {r: c for r, c in enumerate(coeffs) if c}
    return SuperAlgebra(A.n, A.m, table)


# -- the right-multiplication Lie superalgebra ---------------------------------


def right_mult_superalgebra(A: SuperAlgebra):
    """Span of the right multiplications closed under the graded commutator.

    Returns (SuperAlgebra of the operator span, LieSuperReport).  The report
    checks closure, graded antisymmetry of the assembled table, and the graded
    Jacobi identity (via the Leibniz checker, which it coincides with for
    antisymmetric brackets).
    """
    dim = A.dim
    even_ops: list[_Op] = []
    odd_ops: list[_Op] = []
    even_span = Subspace(dim * dim)
    odd_span = Subspace(dim * dim)
    for k in range(dim):
        op = right_mult_basis_op(A, k)
        if op.is_zero():
            continue
        if A.parity(k) == 0:
            grown = even_span.add_vector(op.flatten())
            if grown.dim > even_span.dim:
                even_span, even_ops = grown, even_ops + [op]
        else:
            grown = odd_span.add_vector(op.flatten())
            if grown.dim > odd_span.dim:
                odd_span, odd_ops = grown, odd_ops + [op]

    def bracket(u: _Op, pu: int, v: _Op, pv: int) -> _Op:
        sign = -ONE if pu and pv else ONE
        return u.compose(v).scaled_add(-sign, v.compose(u))

    closed = True
    changed = True
    while changed:
        changed = False
        ops = [(op, 0) for op in even_ops] + [(op, 1) for op in odd_ops]
        for u, pu in ops:
            for v, pv in ops:
                w = bracket(u, pu, v, pv)
                if w.is_zero():
                    continue
                pw = (pu + pv) % 2
                span = even_span if pw == 0 else odd_span
                if span.contains(w.flatten()):
                    continue
                if pw == 0:
                    even_span = even_span.add_vector(w.flatten())
                    even_ops.append(w)
                else:
                    odd_span = odd_span.add_vector(w.flatten())
                    odd_ops.append(w)
                changed = True

    basis = [(op, 0) for op in even_ops] + [(op, 1) for op in odd_ops]
    ne, no = len(even_ops), len(odd_ops)
    flat_rows = [op.flatten() for op, _ in basis]
    table = {}
    for a, (u, pu) in enumerate(basis):
        for b, (v, pv) in enumerate(basis):
            w = bracket(u, pu, v, pv)
            if w.is_zero():
                continue
            residual = list(w.flatten())
            coeffs = _express_in_rows(residual, flat_rows)
            if coeffs is None:
                closed = False
                continue
            table[(a, b)] = {r: c for r, c in enumerate(coeffs) if c}
    R = SuperAlgebra(ne, no, table)
    anti_ok = True
    for a in range(ne + no):
        for b in range(ne + no):
            sign = -ONE if a >= ne and b >= ne else ONE
            lhs = R.product_basis(a, b)
            rhs = R.product_basis(b, a)
            for r in set(lhs) | set(rhs):
                if lhs.get(r, ZERO) != -sign * rhs.get(r, ZERO):
                    anti_ok = False
    jacobi_ok = check_leibniz(R).ok
    return R, LieSuperReport(
        ok=closed and anti_ok and jacobi_ok,
        closed=closed,
        antisymmetry_ok=anti_ok,
        jacobi_ok=jacobi_ok,
    )


def _express_in_rows(vec, rows):
    """Coefficients writing vec in the given independent rows, else None."""
    if not rows:
        return None if any(vec) else []
    width = len(vec)
    aug = [list(r) + [ZERO] * len(rows) for r in rows]
    for i in range(len(rows)):
        aug[i][width + i] = ONE
    reduced, pivots = linalg.rref(aug)
    residual = list(vec) + [ZERO] * len(rows)
    coeffs = [ZERO] * len(rows)
    for row, pc in zip(reduced, pivots):
        if pc >= width:
            continue
        if residual[pc]:
            f = residual[pc]
            residual = [a - f * b for a, b in zip(residual, row)]
            for k in range(len(rows)):
                coeffs[k] = coeffs[k] + f * row[width + k]
    if any(residual[:width]):
        return None
    return coeffs
