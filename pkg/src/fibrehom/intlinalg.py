"""Exact integer linear algebra.

Everything here works over arbitrary-precision Python ints.  Matrices are
plain lists of row lists; the empty matrix with a declared shape is
represented by ``zeros(m, n)`` with ``m`` or ``n`` possibly zero.

The central routine is ``smith_normal_form``: for any integer matrix A it
returns (S, U, V) with ``U @ A @ V == S``, U and V unimodular and S diagonal
with a divisibility chain.  Kernels, Diophantine solves, quotient lattices
and homology groups are all derived from it.

>>> S, U, V = smith_normal_form([[2, 4], [6, 8]])
>>> [S[i][i] for i in range(2)]
[2, 4]
>>> str(homology_of_pair(zeros(1, 1), [[2]]))
'C2'
"""

from __future__ import annotations

from .errors import NotAChainMap, NotAComplex


# ---------------------------------------------------------------------------
# basic matrix helpers


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(a):
    return [row[:] for row in a]


def shape(a):
    return (len(a), len(a[0]) if a else 0)


def transpose(a):
    m, n = shape(a)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def mat_mul(a, b):
    m, n = shape(a)
    n2, p = shape(b)
    if n != n2:
        raise ValueError(f"shape mismatch {m}x{n} * {n2}x{p}")
    out = zeros(m, p)
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for k in range(n):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(p):
                    oi[j] += aik * bk[j]
    return out

def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def mat_eq(a, b):
    return shape(a) == shape(b) and all(ra == rb for ra, rb in zip(a, b))


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def column(a, j):
    return [row[j] for row in a]


def columns(a):
    m, n = shape(a)
    return [column(a, j) for j in range(n)]


def from_columns(cols, nrows=None):
    if not cols:
        return zeros(nrows or 0, 0)
    m = len(cols[0])
    return [[col[i] for col in cols] for i in range(m)]


def hstack(a, b):
    ma, na = shape(a)
    mb, nb = shape(b)
    if na == 0:
        return copy_matrix(b) if nb else copy_matrix(a)
    if nb == 0:
        return copy_matrix(a)
    if ma != mb:
        raise ValueError("hstack row mismatch")
    return [ra + rb for ra, rb in zip(a, b)]


def det(a):
    """Determinant by fraction-free Bareiss elimination."""
    n, n2 = shape(a)
    if n != n2:
        raise ValueError("det of non-square matrix")
    if n == 0:
        return 1
    m = copy_matrix(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, c):
    # row[dst] += c * row[src]
    rd, rs = m[dst], m[src]
    for j in range(len(rd)):
        rd[j] += c * rs[j]


def _add_col(m, dst, src, c):
    for row in m:
        row[dst] += c * row[src]


def _neg_row(m, i):
    m[i] = [-x for x in m[i]]


def _exgcd(a, b):
    """(g, x, y) with x*a + y*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _row_gcd_step(mats, k, i, a, b):
    """Left-multiply rows (k, i) by the unimodular [[x, y], [-b/g, a/g]].

    Sends (a, b) in a shared column to (g, 0); the same transform is
    applied to every matrix in ``mats``.
    """
    g, x, y = _exgcd(a, b)
    u, v = -(b // g), a // g
    for m in mats:
        rk, ri = m[k], m[i]
        for j in range(len(rk)):
            s, t = rk[j], ri[j]
            rk[j] = x * s + y * t
            ri[j] = u * s + v * t


def _col_gcd_step(mats, k, j, a, b):
    """Column version of the gcd step: (a, b) in a shared row to (g, 0)."""
    g, x, y = _exgcd(a, b)
    u, v = -(b // g), a // g
    for m in mats:
        for row in m:
            s, t = row[k], row[j]
            row[k] = x * s + y * t
            row[j] = u * s + v * t


def smith_normal_form(a, check=True):
    """Return (S, U, V) with U*A*V = S in Smith normal form.

    S is diagonal, its diagonal entries are nonnegative and form a
    divisibility chain d1 | d2 | ...; U and V are unimodular.  With
    ``check`` (the default) the contract U*A*V = S, det U, det V = +-1 and
    the chain condition are asserted on every call.
    """
    m, n = shape(a)
    s = copy_matrix(a)
    u = identity(m)
    v = identity(n)

    def pivot_search(k):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                x = s[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return best

    k = 0
    while k < min(m, n):
        best = pivot_search(k)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            _swap_rows(s, k, pi)
            _swap_rows(u, k, pi)
        if pj != k:
            _swap_cols(s, k, pj)
            _swap_cols(v, k, pj)
        while True:
            # gcd-eliminate column k, then row k; a row pass can dirty the
            # column again, in which case the pivot gcd strictly shrank
            for i in range(k + 1, m):
                if s[i][k]:
                    _row_gcd_step([s, u], k, i, s[k][k], s[i][k])
            dirty = False
            for j in range(k + 1, n):
                if s[k][j]:
                    _col_gcd_step([s, v], k, j, s[k][k], s[k][j])
                    dirty = True
            if dirty and any(s[i][k] for i in range(k + 1, m)):
                continue
            # pivot now alone on its row and column; force divisibility of
            # the trailing block
            fixed = True
            for i in range(k + 1, m):
                if not fixed:
                    break
                for j in range(k + 1, n):
                    if s[i][j] % s[k][k]:
                        _add_row(s, k, i, 1)
                        _add_row(u, k, i, 1)
                        fixed = False
                        break
            if fixed:
                break
        if s[k][k] < 0:
            _neg_row(s, k)
            _neg_row(u, k)
        k += 1

    if check:
        assert mat_eq(mat_mul(mat_mul(u, a), v), s), "SNF: U*A*V != S"
        assert abs(det(u)) == 1, "SNF: U not unimodular"
        assert abs(det(v)) == 1, "SNF: V not unimodular"
        diag = [s[i][i] for i in range(min(m, n))]
        for x, y in zip(diag, diag[1:]):
            assert (y == 0) if x == 0 else (y % x == 0), "SNF: chain broken"
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert s[i][j] == 0, "SNF: not diagonal"
    return s, u, v


def snf_diagonal(s):
    m, n = shape(s)
    return [s[i][i] for i in range(min(m, n))]


def diagonalize(a, rhs=None):
    """U A V = D with D diagonal (no divisibility chain).

    Row operations are applied directly to the columns of ``rhs`` instead
    of tracking U, which avoids the coefficient blowup of an explicit
    unimodular factor; +-1 pivots are preferred so sparse systems with
    unit structure constants eliminate without growth.

    Returns (D, transformed_rhs, V).
    """
    m, n = shape(a)
    d = copy_matrix(a)
    r = copy_matrix(rhs) if rhs is not None else None
    v = identity(n)

    def find_pivot(k):
        best = None
        for i in range(k, m):
            row = d[i]
            for j in range(k, n):
                x = row[j]
                if x:
                    ax = abs(x)
                    if ax == 1:
                        return (1, i, j)
                    if best is None or ax < best[0]:
                        best = (ax, i, j)
        return best

    k = 0
    while k < min(m, n):
        best = find_pivot(k)
        if best is None:
            break
        _, pi_, pj = best
        if pi_ != k:
            _swap_rows(d, k, pi_)
            if r is not None:
                _swap_rows(r, k, pi_)
        if pj != k:
            _swap_cols(d, k, pj)
            _swap_cols(v, k, pj)
        while True:
            row_mats = [d, r] if r is not None else [d]
            for i in range(k + 1, m):
                if d[i][k]:
                    _row_gcd_step(row_mats, k, i, d[k][k], d[i][k])
            dirty = False
            for j in range(k + 1, n):
                if d[k][j]:
                    _col_gcd_step([d, v], k, j, d[k][k], d[k][j])
                    dirty = True
            if not (dirty and any(d[i][k] for i in range(k + 1, m))):
                break
        if d[k][k] < 0:
            _neg_row(d, k)
            if r is not None:
                _neg_row(r, k)
        k += 1
    return d, r, v


def int_inverse(a):
    """Exact inverse of a unimodular integer matrix."""
    n, n2 = shape(a)
    if n != n2:
        raise ValueError("inverse of non-square matrix")
    s, u, v = smith_normal_form(a)
    if snf_diagonal(s) != [1] * n:
        raise ValueError("matrix is not unimodular")
    return mat_mul(v, u)


def kernel_basis(a):
    """Basis of the integer kernel lattice, as an n x k matrix of columns."""
    m, n = shape(a)
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return identity(n)
    d, _r, v = diagonalize(a)
    diag = snf_diagonal(d)
    free = [j for j in range(n) if j >= len(diag) or diag[j] == 0]
    return from_columns([column(v, j) for j in free], nrows=n)


def solve_matrix(a, b):
    """Integer X with A X = B, or None.  One elimination, many columns."""
    m, n = shape(a)
    if len(b) != m:
        raise ValueError("shape mismatch in solve_matrix")
    p = shape(b)[1]
    if m == 0:
        return zeros(n, p)
    if n == 0:
        return zeros(0, p) if is_zero_matrix(b) else None
    if p == 0:
        return zeros(n, 0)
    d, c, v = diagonalize(a, rhs=b)
    diag = snf_diagonal(d)
    cols = []
    for j in range(p):
        y = [0] * n
        ok = True
        for i in range(m):
            dv = diag[i] if i < len(diag) else 0
            ci = c[i][j]
            if dv == 0:
                if ci != 0:
                    ok = False
                    break
            else:
                if ci % dv:
                    ok = False
                    break
                if i < n:
                    y[i] = ci // dv
        if not ok:
            return None
        cols.append(mat_vec(v, y))
    return from_columns(cols, nrows=n)


def solve(a, b):
    """One integer solution x of A x = b, or None."""
    m, n = shape(a)
    if len(b) != m:
        raise ValueError("rhs length mismatch")
    if m == 0:
        return [0] * n
    out = solve_matrix(a, from_columns([list(b)], nrows=m))
    if out is None:
        return None
    return column(out, 0) if n else []


def column_lattice_basis(a):
    """Reduce the columns of A to a basis of the lattice they span."""
    m, n = shape(a)
    w = copy_matrix(a)
    c = 0
    for r in range(m):
        if c == n:
            break
        while True:
            nz = [j for j in range(c, n) if w[r][j]]
            if not nz:
                break
            if len(nz) == 1:
                if nz[0] != c:
                    _swap_cols(w, c, nz[0])
                break
            j0 = min(nz, key=lambda j: abs(w[r][j]))
            if j0 != c:
                _swap_cols(w, c, j0)
            for j in nz:
                j = j if j != j0 else c
                if j == c:
                    continue
                q = w[r][j] // w[r][c]
                _add_col(w, j, c, -q)
        if c < n and w[r][c]:
            if w[r][c] < 0:
                for row in w:
                    row[c] = -row[c]
            c += 1
    return [row[:c] for row in w]


def in_lattice(basis, v):
    """Is v an integer combination of the columns of ``basis``?"""
    return solve(basis, v) is not None


# ---------------------------------------------------------------------------
# canonical abelian groups


class AbGroupPresentation:
    """Canonical form of a finitely generated abelian group.

    ``rank`` free summands plus cyclic summands Z/d1 + ... + Z/dk with
    2 <= d1 | d2 | ... | dk.  Torsion coefficients equal to 1 are dropped.
    """

    __slots__ = ("rank", "torsion")

    def __init__(self, rank=0, torsion=()):
        torsion = tuple(int(d) for d in torsion)
        assert rank >= 0
        assert all(d >= 2 for d in torsion)
        for x, y in zip(torsion, torsion[1:]):
            assert y % x == 0, "torsion list must be a divisibility chain"
        self.rank = rank
        self.torsion = torsion

    @classmethod
    def from_diagonal(cls, diag, ambient_rank):
        """Group Z^ambient_rank / <d_i e_i> for the SNF diagonal ``diag``."""
        nonzero = [d for d in diag if d != 0]
        return cls(ambient_rank - len(nonzero), [d for d in nonzero if d != 1])

    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    def order(self):
        if self.rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __eq__(self, other):
        if not isinstance(other, AbGroupPresentation):
            return NotImplemented
        return self.rank == other.rank and self.torsion == other.torsion

    def __hash__(self):
        return hash((self.rank, self.torsion))

    def __repr__(self):
        return f"AbGroupPresentation({self.rank}, {self.torsion})"

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"C{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"

    def to_record(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}


# ---------------------------------------------------------------------------
# homology of a pair of composable maps


class HomologyBasis:
    """Homology group with a tracked canonical basis.

    ``lattice`` has the cycle-lattice basis as columns (chain coordinates).
    ``kept`` lists (index-into-SNF-coordinates, divisor) pairs: divisor 0
    marks a free generator, d >= 2 a torsion generator of order d.
    """

    __slots__ = ("group", "lattice", "u", "uinv", "kept", "chain_rank")

    def __init__(self, group, lattice, u, uinv, kept, chain_rank):
        self.group = group
        self.lattice = lattice
        self.u = u
        self.uinv = uinv
        self.kept = kept
        self.chain_rank = chain_rank

    def generator_chain_vectors(self):
        vecs = []
        for idx, _d in self.kept:
            e = column(self.uinv, idx)
            vecs.append(mat_vec(self.lattice, e))
        return vecs

    def coords_of_cycle(self, vec):
        """Canonical coordinates of a cycle given in chain coordinates."""
        y = solve(self.lattice, vec)
        if y is None:
            raise ValueError("vector is not a cycle of this complex")
        z = mat_vec(self.u, y)
        out = []
        for idx, d in self.kept:
            out.append(z[idx] % d if d else z[idx])
        return out


def _homology_from_lattices(cycle_basis, boundary_gens, chain_rank):
    """Common core: cycles given by a lattice basis, boundaries by generators."""
    k = len(cycle_basis[0]) if cycle_basis and cycle_basis[0] else 0
    if chain_rank == 0 or k == 0:
        group = AbGroupPresentation(0, ())
        return HomologyBasis(group, zeros(chain_rank, 0), identity(0),
                             identity(0), [], chain_rank)
    x = solve_matrix(cycle_basis, boundary_gens)
    if x is None:
        raise NotAComplex("boundaries do not lie in the cycle lattice")
    s, u, _v = smith_normal_form(x)
    diag = snf_diagonal(s)
    group = AbGroupPresentation.from_diagonal(diag, k)
    uinv = int_inverse(u)
    kept = []
    for i in range(k):
        d = diag[i] if i < len(diag) else 0
        if d != 1:
            kept.append((i, d))
    return HomologyBasis(group, cycle_basis, u, uinv, kept, chain_rank)


def _mid_rank(d_out, d_in):
    """Middle chain rank, robust against 0-row list matrices."""
    if len(d_out):
        n = shape(d_out)[1]
        if len(d_in) and len(d_in) != n:
            raise ValueError("middle ranks disagree")
        return n
    return len(d_in)


def homology_of_pair(d_out, d_in, with_basis=False):
    """ker(d_out) / im(d_in) for free chain groups.

    d_out is the outgoing differential of the middle degree, d_in the
    incoming one; raises NotAComplex unless d_out * d_in = 0.
    """
    n = _mid_rank(d_out, d_in)
    if not len(d_out):
        d_out = zeros(1, n)
    if not len(d_in):
        d_in = zeros(n, 0)
    if not is_zero_matrix(mat_mul(d_out, d_in)):
        raise NotAComplex("d_out * d_in is nonzero")
    cycles = kernel_basis(d_out)
    hb = _homology_from_lattices(cycles, d_in, n)
    return hb if with_basis else hb.group


def homology_of_presented_pair(d_out, rel_low, d_in, rel_mid, with_basis=False):
    """Homology when the chain groups are presented abelian groups.

    The middle group is Z^n / <columns of rel_mid>, the lower one
    Z^m / <columns of rel_low>; d_out and d_in act on free levels.
    """
    n = _mid_rank(d_out, d_in)
    if not len(d_in):
        d_in = zeros(n, 0)
    if not len(d_out):
        m = len(rel_low) if rel_low is not None else 0
        d_out = zeros(max(m, 1), n)
    m = len(d_out)
    if rel_low is None or not len(rel_low):
        rel_low = zeros(m, 0)
    if rel_mid is None or not len(rel_mid):
        rel_mid = zeros(n, 0)
    # image of d_in must die in the lower quotient
    prod = mat_mul(d_out, d_in)
    if not is_zero_matrix(prod):
        if solve_matrix(rel_low, prod) is None:
            raise NotAComplex("d_out * d_in nonzero modulo relations")
    # cycles: x with d_out(x) in the relation lattice of the lower group
    stacked = hstack(d_out, mat_scale(-1, rel_low))
    kb = kernel_basis(stacked)
    xparts = [row[:] for row in kb[:n]] if n else zeros(0, 0)
    cycles = column_lattice_basis(xparts) if xparts and xparts[0] else zeros(n, 0)
    if shape(cycles)[1] == 0:
        cycles = zeros(n, 0)
    boundaries = hstack(d_in, rel_mid)
    hb = _homology_from_lattices(cycles, boundaries, n)
    return hb if with_basis else hb.group


def induced_on_homology(f_mid, src, tgt):
    """Matrix of the induced map between canonical homology presentations.

    ``src`` and ``tgt`` are HomologyBasis objects; f_mid a chain-level
    integer matrix in their chain coordinates.  Columns are indexed by the
    source canonical generators.
    """
    cols = []
    for vec in src.generator_chain_vectors():
        w = mat_vec(f_mid, vec)
        cols.append(tgt.coords_of_cycle(w))
    return from_columns(cols, nrows=len(tgt.kept))


def is_group_isomorphism(matrix, src, tgt):
    """Does ``matrix`` define an isomorphism between the canonical groups?"""
    if src.group != tgt.group:
        return False
    if not tgt.kept:
        return True
    torsion_cols = []
    for pos, (idx, d) in enumerate(tgt.kept):
        if d:
            col = [0] * len(tgt.kept)
            col[pos] = d
            torsion_cols.append(col)
    rel = hstack(matrix, from_columns(torsion_cols, nrows=len(tgt.kept)))
    s, _u, _v = smith_normal_form(rel)
    diag = snf_diagonal(s)
    # surjective onto the canonical presentation iff all factors are 1
    if len([d for d in diag if d != 0]) < len(tgt.kept):
        return False
    return all(d == 1 for d in diag if d != 0)


def verify_chain_map_square(f_low, d_src, d_tgt, f_mid, degree=None):
    """Check d_tgt * f_mid == f_low * d_src, else raise NotAChainMap."""
    lhs = mat_mul(d_tgt, f_mid)
    rhs = mat_mul(f_low, d_src)
    if not mat_eq(lhs, rhs):
        raise NotAChainMap("chain map square does not commute", degree=degree)
