"""Exact linear algebra over any field whose elements overload arithmetic.

Matrices are plain lists of lists.  The `field` argument is any object with
`.zero` and `.one` attributes producing elements that support +, -, *, /, ==
(both number-field elements and residue-field elements qualify).  Nothing
here is numerical: pivots are exact equality tests against field.zero.
"""

from __future__ import annotations

from .errors import DimensionMismatch, SingularMatrix


def mat_copy(a):
    return [row[:] for row in a]


def identity(field, n: int):
    z, o = field.zero, field.one
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def zeros(field, r: int, c: int):
    z = field.zero
    return [[z for _ in range(c)] for _ in range(r)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_add(a, b):
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        raise DimensionMismatch("matrix addition shape mismatch")
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        raise DimensionMismatch("matrix subtraction shape mismatch")
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_mul(a, b):
    if len(a[0]) != len(b):
        raise DimensionMismatch(
            f"matrix product shape mismatch: {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def scalar_mul(c, a):
    return [[c * x for x in row] for row in a]


def mat_apply(fn, a):
    return [[fn(x) for x in row] for row in a]


def mat_eq(a, b) -> bool:
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
        for ra, rb in zip(a, b))


def is_zero_matrix(a, field) -> bool:
    z = field.zero
    return all(x == z for row in a for x in row)


def mat_pow(a, k: int, field):
    n = len(a)
    out = identity(field, n)
    cur = mat_copy(a)
    while k:
        if k & 1:
            out = mat_mul(out, cur)
        cur = mat_mul(cur, cur)
        k >>= 1
    return out


def kron(a, b):
    out = []
    for ra in a:
        for rb in b:
            out.append([x * y for x in ra for y in rb])
    return out


def block_diag(field, blocks):
    total = sum(len(b) for b in blocks)
    out = zeros(field, total, total)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def conj_transpose(a, conj):
    return [[conj(x) for x in col] for col in zip(*a)]


def solve(a, b, field):
    """X with a @ X = b (a square); raises SingularMatrix when singular."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise DimensionMismatch("solve needs a square system")
    z = field.zero
    m = [ra[:] + rb[:] for ra, rb in zip(a, b)]
    w = len(m[0])
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != z), None)
        if piv is None:
            raise SingularMatrix("coefficient matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = field.one / m[col][col]
        m[col] = [inv * x for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != z:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:w] for row in m]


def mat_inv(a, field):
    return solve(a, identity(field, len(a)), field)


def det(a, field):
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("determinant needs a square matrix")
    z = field.zero
    m = mat_copy(a)
    sign = 1
    out = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != z), None)
        if piv is None:
            return z
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        out = out * pv
        inv = field.one / pv
        for r in range(col + 1, n):
            if m[r][col] != z:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return out if sign == 1 else -out


def kernel_basis(a, field):
    """Basis of the right kernel of a (possibly rectangular) matrix."""
    if not a:
        return []
    z = field.zero
    nr, nc = len(a), len(a[0])
    m = mat_copy(a)
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != z), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.one / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != z:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        vec = [z] * nc
        vec[fc] = field.one
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def rank(a, field) -> int:
    if not a:
        return 0
    return len(a[0]) - len(kernel_basis(a, field))


# ----------------------------------------------------------------------
# characteristic polynomial, division-light (only by nonzero field elements)


def _hessenberg(a, field):
    z = field.zero
    h = mat_copy(a)
    n = len(h)
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j] != z), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = field.one / h[j + 1][j]
        for i in range(j + 2, n):
            if h[i][j] != z:
                f = h[i][j] * inv
                h[i] = [x - f * y for x, y in zip(h[i], h[j + 1])]
                for row in h:
                    row[j + 1] = row[j + 1] + f * row[i]
    return h


def charpoly(a, field):
    """Coefficients of det(x*I - a), low degree first, monic.

    Works over any exact field (similarity reduction to Hessenberg form, then
    the leading-minor recurrence); length is len(a) + 1.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("characteristic polynomial needs a square matrix")
    z, o = field.zero, field.one
    if n == 0:
        return [o]
    h = _hessenberg(a, field)

    def pmul_x_minus(poly, c):
        # poly * (x - c)
        out = [z] + poly[:]
        for i, p in enumerate(poly):
            out[i] = out[i] - c * p
        return out

    def psub_scaled(poly, other, c):
        out = poly[:]
        for i, p in enumerate(other):
            out[i] = out[i] - c * p
        return out

    minors = [[o]]
    for k in range(1, n + 1):
        cur = pmul_x_minus(minors[k - 1], h[k - 1][k - 1])
        prod = o
        for i in range(k - 1, 0, -1):
            # product of subdiagonal entries h[i][i-1] ... h[k-1][k-2]
            prod = prod * h[i][i - 1]
            coeff = h[i - 1][k - 1] * prod
            if coeff != z:
                cur = psub_scaled(cur, minors[i - 1], coeff)
        minors.append(cur)
    return minors[n]
