"""Exact fields and exact matrix algebra.

Scalars are either arbitrary-precision rationals (`fractions.Fraction`) or
elements of a finite field GF(q) stored as canonical integers 0..q-1.
Everything downstream (Hom spaces, criteria, enumeration cross-checks)
reduces to the rank / kernel / solve routines here, so there is no floating
point anywhere in this package.

Prime-field elimination has a vectorized integer backend (numpy int64 with
explicit modular reduction, which is exact); the rationals and small
extension fields use the generic elimination.  Both paths produce the same
reduced row echelon form, pivoting on the first nonzero entry in column
order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gflin import factor_prime_power, gfq, is_prime

MAX_CHARACTERISTIC = 2**31


@dataclass(frozen=True)
class FieldSpec:
    """An exact ground field: the rationals, or GF(p**degree)."""

    kind: str  # "Q" or "GF"
    characteristic: int
    degree: int = 1

    def __post_init__(self):
        if self.kind == "Q":
            if self.characteristic != 0 or self.degree != 1:
                raise ValueError("rational field must have characteristic 0")
        elif self.kind == "GF":
            p = self.characteristic
            if not is_prime(p) or p > MAX_CHARACTERISTIC:
                raise ValueError(f"characteristic must be a prime <= 2^31, got {p}")
            if self.degree < 1:
                raise ValueError("degree must be >= 1")
            if self.degree > 1:
                gfq(p**self.degree)  # raises if unsupported
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("Q", 0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("GF", p)

    @classmethod
    def of_order(cls, q: int) -> "FieldSpec":
        p, k = factor_prime_power(q)
        return cls("GF", p, k)

    @classmethod
    def parse(cls, name: str) -> "FieldSpec":
        name = name.strip()
        if name in ("Q", "QQ", "rationals"):
            return cls.rationals()
        if name.startswith("F_"):
            return cls.of_order(int(name[2:]))
        if name.startswith("F") and name[1:].isdigit():
            return cls.of_order(int(name[1:]))
        raise ValueError(f"cannot parse field name {name!r}")

    # -- basic data -----------------------------------------------------

    @property
    def is_rationals(self) -> bool:
        return self.kind == "Q"

    @property
    def is_finite(self) -> bool:
        return self.kind == "GF"

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "GF" and self.degree == 1

    @property
    def order(self) -> int:
        if self.is_rationals:
            raise ValueError("the rationals are infinite")
        return self.characteristic**self.degree

    @property
    def name(self) -> str:
        return "Q" if self.is_rationals else f"F_{self.order}"

    def __str__(self) -> str:
        return self.name

    def _gf(self):
        return gfq(self.order)

    # -- scalar arithmetic ----------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.is_rationals else 0

    @property
    def one(self):
        return Fraction(1) if self.is_rationals else 1

    def add(self, a, b):
        if self.is_rationals:
            return a + b
        if self.degree == 1:
            return (a + b) % self.characteristic
        return self._gf().add(a, b)

    def sub(self, a, b):
        if self.is_rationals:
            return a - b
        if self.degree == 1:
            return (a - b) % self.characteristic
        return self._gf().sub(a, b)

    def mul(self, a, b):
        if self.is_rationals:
            return a * b
        if self.degree == 1:
            return (a * b) % self.characteristic
        return self._gf().mul(a, b)

    def neg(self, a):
        if self.is_rationals:
            return -a
        if self.degree == 1:
            return (-a) % self.characteristic
        return self._gf().neg(a)

    def inv(self, a):
        if self.is_rationals:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        if self.degree == 1:
            if a % self.characteristic == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, self.characteristic)
        return self._gf().inv(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n: int):
        if self.is_rationals:
            return Fraction(n)
        if self.degree == 1:
            return n % self.characteristic
        return self._gf().from_int(n)

    def coerce(self, value):
        """Canonicalize a scalar given as int, Fraction, or string."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if self.is_rationals:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, int):
                return Fraction(value)
            raise TypeError(f"not a rational scalar: {value!r}")
        if not isinstance(value, int):
            raise TypeError(f"finite field scalar must be an integer: {value!r}")
        if 0 <= value < self.order:
            return value
        return self.from_int(value)

    def random(self, rng, box: int = 100):
        """Seeded random scalar: uniform on GF(q), uniform integer in [-box, box] on Q."""
        if self.is_rationals:
            return Fraction(rng.randint(-box, box))
        return rng.randrange(self.order)

    def elements(self):
        if self.is_rationals:
            raise ValueError("cannot enumerate the rationals")
        return range(self.order)

    # -- serialization ---------------------------------------------------

    def format_scalar(self, a) -> str:
        if self.is_rationals:
            return str(a)
        return str(a)

    def parse_scalar(self, s: str):
        if self.is_rationals:
            return Fraction(s)
        return self.coerce(int(s))


QQ = FieldSpec.rationals()


def GF(q: int) -> FieldSpec:
    return FieldSpec.of_order(q)


# ----------------------------------------------------------------------
# Matrices


class Matrix:
    """Immutable dense matrix over a FieldSpec.

    Zero-row matrices carry an explicit column count (and vice versa), since
    representations routinely have zero-dimensional vertex spaces.
    """

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: FieldSpec, rows, validate: bool = True, ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if validate:
            rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row width")
        else:
            width = 0 if ncols is None else ncols
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "Matrix":
        return cls(field, rows)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(
            field,
            tuple(tuple(z for _ in range(ncols)) for _ in range(nrows)),
            validate=False,
            ncols=ncols,
        )

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), validate=False)

    @classmethod
    def from_cols(cls, field: FieldSpec, cols, nrows: int | None = None) -> "Matrix":
        cols = [tuple(c) for c in cols]
        if cols:
            nrows = len(cols[0])
        elif nrows is None:
            nrows = 0
        return cls(field, tuple(tuple(c[i] for c in cols) for i in range(nrows)), ncols=len(cols))

    @classmethod
    def column(cls, field: FieldSpec, vec) -> "Matrix":
        return cls(field, tuple((x,) for x in vec), ncols=1)

    # -- basic structure ---------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def row(self, i: int):
        return self.rows[i]

    def col(self, j: int):
        return tuple(r[j] for r in self.rows)

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols)),
            validate=False,
            ncols=self.nrows,
        )

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    def to_lists(self):
        return [list(r) for r in self.rows]

    def flatten(self):
        return tuple(x for r in self.rows for x in r)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.field, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.nrows}x{self.ncols})"

    # -- arithmetic --------------------------------------------------------

    def _check_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        add = self.field.add
        return Matrix(
            self.field,
            tuple(tuple(add(x, y) for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            validate=False,
            ncols=self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        sub = self.field.sub
        return Matrix(
            self.field,
            tuple(tuple(sub(x, y) for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            validate=False,
            ncols=self.ncols,
        )

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(
            self.field,
            tuple(tuple(neg(x) for x in r) for r in self.rows),
            validate=False,
            ncols=self.ncols,
        )

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(
            self.field,
            tuple(tuple(mul(c, x) for x in r) for r in self.rows),
            validate=False,
            ncols=self.ncols,
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch in product: {self.shape} @ {other.shape}")
        f = self.field
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return Matrix.zeros(f, self.nrows, other.ncols)
        if f.is_prime_field:
            p = f.characteristic
            # Guard against int64 overflow of the inner-product accumulation.
            if self.ncols * (p - 1) * (p - 1) < 2**62:
                a = np.array(self.rows, dtype=np.int64)
                b = np.array(other.rows, dtype=np.int64)
                c = (a @ b) % p
                return Matrix(
                    f,
                    tuple(tuple(int(x) for x in row) for row in c),
                    validate=False,
                    ncols=other.ncols,
                )
        add, mul, zero = f.add, f.mul, f.zero
        bt = other.transpose().rows
        out = []
        for r in self.rows:
            out_row = []
            for c in bt:
                acc = zero
                for x, y in zip(r, c):
                    if x != zero and y != zero:
                        acc = add(acc, mul(x, y))
                out_row.append(acc)
            out.append(tuple(out_row))
        return Matrix(f, tuple(out), validate=False, ncols=other.ncols)

    def apply(self, vec):
        """Matrix times column vector, returned as a tuple."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        col = Matrix.column(self.field, [self.field.coerce(v) for v in vec])
        return (self @ col).col(0)

    # -- stacking ----------------------------------------------------------

    @staticmethod
    def hstack(mats) -> "Matrix":
        mats = list(mats)
        field = mats[0].field
        nrows = mats[0].nrows
        for m in mats:
            if m.field != field or m.nrows != nrows:
                raise ValueError("hstack mismatch")
        ncols = sum(m.ncols for m in mats)
        return Matrix(
            field,
            tuple(sum((m.rows[i] for m in mats), ()) for i in range(nrows)),
            validate=False,
            ncols=ncols,
        )

    @staticmethod
    def vstack(mats) -> "Matrix":
        mats = list(mats)
        field = mats[0].field
        ncols = mats[0].ncols
        for m in mats:
            if m.field != field or m.ncols != ncols:
                raise ValueError("vstack mismatch")
        rows = []
        for m in mats:
            rows.extend(m.rows)
        return Matrix(field, tuple(rows), validate=False, ncols=ncols)

    @staticmethod
    def block_diag(field: FieldSpec, mats) -> "Matrix":
        mats = list(mats)
        nrows = sum(m.nrows for m in mats)
        ncols = sum(m.ncols for m in mats)
        out = [[field.zero] * ncols for _ in range(nrows)]
        r0 = c0 = 0
        for m in mats:
            if m.field != field:
                raise ValueError("block_diag field mismatch")
            for i, row in enumerate(m.rows):
                out[r0 + i][c0 : c0 + m.ncols] = list(row)
            r0 += m.nrows
            c0 += m.ncols
        return Matrix(field, tuple(tuple(r) for r in out), validate=False, ncols=ncols)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        return Matrix(
            self.field,
            tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx),
            validate=False,
            ncols=len(col_idx),
        )

    # -- elimination ---------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot columns."""
        f = self.field
        if self.nrows == 0 or self.ncols == 0:
            return self, ()
        if f.is_prime_field:
            arr = np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)
            arr, pivots = _rref_mod_p(f.characteristic, arr)
            mat = Matrix(
                f,
                tuple(tuple(int(x) for x in row) for row in arr),
                validate=False,
                ncols=self.ncols,
            )
            return mat, pivots
        rows, pivots = _rref_generic(f, [list(r) for r in self.rows])
        return Matrix(f, tuple(tuple(r) for r in rows), validate=False, ncols=self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Matrix whose columns form a basis of the right kernel.

        Free columns are taken in ascending order, so the result is
        deterministic.  A trivial kernel yields a ncols x 0 matrix.
        """
        red, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivset]
        f = self.field
        cols = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(red.rows[i][fc])
            cols.append(v)
        return Matrix.from_cols(f, cols, nrows=self.ncols)

    def solve(self, b):
        """Some x with self @ x = b (as a tuple), or None if inconsistent."""
        if len(b) != self.nrows:
            raise ValueError("right-hand side length mismatch")
        f = self.field
        aug = Matrix.hstack([self, Matrix.column(f, [f.coerce(x) for x in b])])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [f.zero] * self.ncols
        for i, pc in enumerate(pivots):
            x[pc] = red.rows[i][self.ncols]
        return tuple(x)

    def solve_matrix(self, b: "Matrix"):
        """Some X with self @ X = b, or None if any column is inconsistent."""
        self._check_same_field(b)
        if b.nrows != self.nrows:
            raise ValueError("shape mismatch in solve_matrix")
        f = self.field
        aug = Matrix.hstack([self, b])
        red, pivots = aug.rref()
        if any(p >= self.ncols for p in pivots):
            return None
        cols = []
        for j in range(b.ncols):
            x = [f.zero] * self.ncols
            for i, pc in enumerate(pivots):
                x[pc] = red.rows[i][self.ncols + j]
            cols.append(x)
        return Matrix.from_cols(f, cols, nrows=self.ncols)

    def column_space_pivots(self) -> tuple[int, ...]:
        return self.rref()[1]

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        f = self.field
        mat = [list(r) for r in self.rows]
        n = self.nrows
        sign_flip = False
        det = f.one
        for col in range(n):
            pr = None
            for r in range(col, n):
                if mat[r][col] != f.zero:
                    pr = r
                    break
            if pr is None:
                return f.zero
            if pr != col:
                mat[col], mat[pr] = mat[pr], mat[col]
                sign_flip = not sign_flip
            pivot = mat[col][col]
            det = f.mul(det, pivot)
            inv = f.inv(pivot)
            for r in range(col + 1, n):
                if mat[r][col] != f.zero:
                    c = f.mul(mat[r][col], inv)
                    mat[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(mat[r], mat[col])]
        return f.neg(det) if sign_flip else det

    # -- change of field --------------------------------------------------

    def change_field(self, new_field: FieldSpec) -> "Matrix":
        """Reduce a rational/integer matrix into a finite field, or embed
        the prime field into an extension of the same characteristic."""
        if new_field == self.field:
            return self
        if self.field.is_rationals and new_field.is_finite:
            p = new_field.characteristic
            out = []
            for r in self.rows:
                row = []
                for x in r:
                    if x.denominator % p == 0:
                        raise ValueError(f"denominator of {x} not invertible mod {p}")
                    val = (x.numerator * pow(x.denominator, -1, p)) % p
                    row.append(val)
                out.append(tuple(row))
            return Matrix(new_field, tuple(out), validate=False, ncols=self.ncols)
        if (
            self.field.is_finite
            and new_field.is_finite
            and self.field.characteristic == new_field.characteristic
            and self.field.degree == 1
        ):
            return Matrix(new_field, self.rows, validate=False, ncols=self.ncols)
        raise ValueError(f"cannot move matrix from {self.field} to {new_field}")


def _rref_mod_p(p: int, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    a = a % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, tuple(pivots)


def _rref_generic(f: FieldSpec, mat: list[list]) -> tuple[list[list], tuple[int, ...]]:
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    zero = f.zero
    for c in range(ncols):
        if r == nrows:
            break
        pr = None
        for i in range(r, nrows):
            if mat[i][c] != zero:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        inv = f.inv(mat[r][c])
        if inv != f.one:
            mat[r] = [f.mul(inv, x) for x in mat[r]]
        prow = mat[r]
        for i in range(nrows):
            if i != r and mat[i][c] != zero:
                coef = mat[i][c]
                mat[i] = [f.sub(x, f.mul(coef, y)) for x, y in zip(mat[i], prow)]
        pivots.append(c)
        r += 1
    return mat, tuple(pivots)


# ----------------------------------------------------------------------
# Module-level operation names matching the rest of the package.


def rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> Matrix:
    return m.kernel_basis()


def solve(m: Matrix, b):
    return m.solve(b)


def rank_fraction_free(int_rows) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    Kept separate from the field elimination so the two can cross-check
    each other on rational inputs.
    """
    mat = [list(map(int, r)) for r in int_rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    rank_ = 0
    prev = 1
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if mat[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                mat[i][j] = (mat[r][c] * mat[i][j] - mat[i][c] * mat[r][j]) // prev
            mat[i][c] = 0
        prev = mat[r][c]
        rank_ += 1
        r += 1
        if r == nrows:
            break
    return rank_


def det_bareiss(int_rows) -> int:
    """Determinant of a square integer matrix, fraction-free."""
    mat = [list(map(int, r)) for r in int_rows]
    n = len(mat)
    if n == 0:
        return 1
    if any(len(r) != n for r in mat):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for c in range(n - 1):
        pr = None
        for i in range(c, n):
            if mat[i][c] != 0:
                pr = i
                break
        if pr is None:
            return 0
        if pr != c:
            mat[c], mat[pr] = mat[pr], mat[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                mat[i][j] = (mat[c][c] * mat[i][j] - mat[i][c] * mat[c][j]) // prev
            mat[i][c] = 0
        prev = mat[c][c]
    return sign * mat[n - 1][n - 1]
