"""Exact integer and rational linear algebra.

Matrices are plain lists of rows holding Python ints (or Fractions where
noted). Nothing here ever touches floating point.
"""

from fractions import Fraction
from math import gcd


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def copy(A):
    return [list(row) for row in A]


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def column(A, j):
    return [row[j] for row in A]


def from_columns(cols, nrows=None):
    if not cols:
        return [[] for _ in range(nrows or 0)]
    return [list(r) for r in zip(*cols)]


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return out


def xgcd(a, b):
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def gcd_list(values):
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def det(A):
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(A)
    if n == 0:
        return 1
    M = copy(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def det_rational(A):
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    result = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            M[k], M[p] = M[p], M[k]
            result = -result
        result *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            if f:
                for j in range(k, n):
                    M[i][j] -= f * M[k][j]
    return result


def hnf(A):
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U @ A == H``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots and the entries above each pivot
    reduced into ``[0, pivot)``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = copy(A)
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            rows = [i for i in range(r, m) if H[i][c] != 0]
            if not rows:
                break
            piv = min(rows, key=lambda i: abs(H[i][c]))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    _row_sub(H, i, r, q)
                    _row_sub(U, i, r, q)
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                _row_sub(H, i, r, q)
                _row_sub(U, i, r, q)
        r += 1
    return H, U


def _row_sub(M, i, k, q):
    # row_i -= q * row_k
    ri, rk = M[i], M[k]
    for j in range(len(ri)):
        ri[j] -= q * rk[j]


def _col_sub(M, j, k, q):
    # col_j -= q * col_k
    for row in M:
        row[j] -= q * row[k]


def _swap_cols(M, a, b):
    for row in M:
        row[a], row[b] = row[b], row[a]


def snf(A):
    """Smith normal form.

    Returns ``(D, U, V)`` with ``U @ A @ V == D``, ``U`` and ``V``
    unimodular, ``D`` diagonal with nonnegative entries d1 | d2 | ...
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = copy(A)
    U = identity(m)
    V = identity(n)
    for t in range(min(m, n)):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        if i0 != t:
            D[t], D[i0] = D[i0], D[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            _swap_cols(D, t, j0)
            _swap_cols(V, t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    _row_sub(D, i, t, q)
                    _row_sub(U, i, t, q)
                    if D[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    _col_sub(D, j, t, q)
                    _col_sub(V, j, t, q)
                    if D[t][j]:
                        changed = True
            if changed:
                entries = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                entries += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
                _, i0, j0 = min(entries)
                if i0 != t:
                    D[t], D[i0] = D[i0], D[t]
                    U[t], U[i0] = U[i0], U[t]
                if j0 != t:
                    _swap_cols(D, t, j0)
                    _swap_cols(V, t, j0)
                continue
            p = D[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t and redo the elimination
            _row_sub(D, t, bad, -1)
            _row_sub(U, t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


def invariant_factors(A):
    D, _, _ = snf(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def rank(A):
    H, _ = hnf(A)
    return sum(1 for row in H if any(row))


def kernel_rows(A):
    """Basis (as rows, in HNF) of the saturated integer kernel {x : A x = 0}."""
    n = len(A[0]) if A else 0
    if not A:
        return identity(n)
    H, U = hnf(transpose(A))
    basis = [U[i] for i in range(n) if not any(H[i])]
    if not basis:
        return []
    K, _ = hnf(basis)
    return [row for row in K if any(row)]


def kernel_saturated(A):
    """Columns form a basis of the saturated integer kernel of ``A``.

    >>> kernel_saturated([[2, 4]])
    [[2], [-1]]
    """
    n = len(A[0]) if A else 0
    rows = kernel_rows(A)
    return from_columns(rows, n)


def lattice_basis(vectors):
    """HNF basis (rows) of the Z-span of the given vectors."""
    if not vectors:
        return []
    H, _ = hnf([list(v) for v in vectors])
    return [row for row in H if any(row)]


def solve_rational(A, b):
    """Solve ``A x = b`` exactly; returns a list of Fractions or None.

    ``A`` may be rectangular; when the system is underdetermined the free
    variables are set to zero.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return x


def solve_integer(A, b):
    """Integer solution of ``A x = b`` when ``A`` has full column rank."""
    x = solve_rational(A, b)
    if x is None or any(v.denominator != 1 for v in x):
        return None
    if matvec(A, [int(v) for v in x]) != list(b):
        return None
    return [int(v) for v in x]


def inverse_rational(A):
    n = len(A)
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_rational(A, e)
        if x is None:
            raise ZeroDivisionError("singular matrix")
        cols.append(x)
    return from_columns(cols, n)


def complete_to_basis(v):
    """Unimodular matrix whose first column is the primitive vector ``v``."""
    H, U = hnf([[x] for x in v])
    if H[0][0] != 1:
        raise ValueError("vector is not primitive")
    # U v = e1, so v is the first column of U^-1
    W = inverse_rational(U)
    return [[int(x) for x in row] for row in W]
