"""Independent oracles used by the test suite.

Everything here deliberately avoids the package's own linear algebra and
category machinery where independence matters: ranks and Smith forms come
from sympy, counting arguments are plain enumeration, and the Bredon
complexes are written down as explicit integer matrices per space.
"""

from itertools import product

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from fibrehom import AbGroupPresentation


# ---------------------------------------------------------------------------
# classical cellular tables (hand computation, committed fixtures)

CLASSICAL_HOMOLOGY = {
    "S1": ["Z", "Z"],
    "S2": ["Z", "0", "Z"],
    "S3": ["Z", "0", "0", "Z"],
    "T2": ["Z", "Z^2", "Z"],
    "RP2": ["Z", "C2", "0"],
    "Klein": ["Z", "Z x C2", "0"],
}

CLASSICAL_COHOMOLOGY = {
    "S1": ["Z", "Z"],
    "S2": ["Z", "0", "Z"],
    "S3": ["Z", "0", "0", "Z"],
    "T2": ["Z", "Z^2", "Z"],
    "RP2": ["Z", "0", "C2"],
    "Klein": ["Z", "Z", "C2"],
}

# twisted RP2 fixture: d1 evaluates to -2, d2 to 0 under t -> -1, so the
# complex is Z --0--> Z --(-2)--> Z and the groups follow by 1x1 Smith
RP2_SIGN_HOMOLOGY = ["C2", "0", "Z"]


def sympy_homology_free(d_out, d_in):
    """H = ker/im for free chain groups, by ranks and invariant factors.

    Torsion equals the nonunit invariant factors of d_in because the
    kernel of d_out is a saturated sublattice.
    """
    rows_out = len(d_out)
    n = len(d_out[0]) if rows_out and d_out[0] else (len(d_in) if d_in else 0)
    rank_out = Matrix(d_out).rank() if rows_out and n else 0
    cols_in = len(d_in[0]) if d_in and d_in[0] else 0
    rank_in = Matrix(d_in).rank() if cols_in else 0
    torsion = []
    if cols_in:
        s = smith_normal_form(Matrix(d_in))
        for i in range(min(s.rows, s.cols)):
            v = abs(int(s[i, i]))
            if v > 1:
                torsion.append(v)
    torsion.sort()
    return AbGroupPresentation(n - rank_out - rank_in, torsion)


def sympy_group_of_relators(num_gens, relator_columns):
    """Z^num_gens modulo the span of the given relator vectors."""
    if not relator_columns:
        return AbGroupPresentation(num_gens, ())
    m = Matrix([[col[i] for col in relator_columns] for i in range(num_gens)])
    s = smith_normal_form(m)
    diag = [abs(int(s[i, i])) for i in range(min(s.rows, s.cols))]
    nonzero = [d for d in diag if d]
    torsion = sorted(d for d in nonzero if d > 1)
    return AbGroupPresentation(num_gens - len(nonzero), torsion)


# ---------------------------------------------------------------------------
# counting oracle for homology groups (dims <= 3, small entries)


def _rank_q(mat):
    if not mat or not mat[0]:
        return 0
    return Matrix(mat).rank()


def hom_count_to_cyclic(d_out, d_in, m):
    """#Hom(ker d_out / im d_in, Z/m) by pure counting.

    Each phi on the kernel extends to Z^n since the image of d_out is
    torsion free; extensions killing im(d_in) are the vectors x with
    d_in^T x = 0 mod m, and the fibres of restriction have size
    m^rank(d_out).
    """
    n = len(d_in) if d_in else (len(d_out[0]) if d_out and d_out[0] else 0)
    cols_in = len(d_in[0]) if d_in and d_in[0] else 0
    total = 0
    for x in product(range(m), repeat=n):
        ok = True
        for j in range(cols_in):
            acc = 0
            for i in range(n):
                acc += d_in[i][j] * x[i]
            if acc % m:
                ok = False
                break
        if ok:
            total += 1
    return total // (m ** _rank_q(d_out))


def group_hom_count(group, m):
    """#Hom(G, Z/m) for a canonical presentation."""
    total = m ** group.rank
    import math
    for d in group.torsion:
        total *= math.gcd(d, m)
    return total


def counting_oracle_agrees(d_out, d_in, group, prime_bound=48, power_cap=128):
    """Does the claimed group match hom-counts at all small prime powers?"""
    n = len(d_in) if d_in else (len(d_out[0]) if d_out and d_out[0] else 0)
    expected_rank = n - _rank_q(d_out) - _rank_q(d_in)
    if group.rank != expected_rank:
        return False
    primes = [p for p in range(2, prime_bound)
              if all(p % q for q in range(2, p))]
    for p in primes:
        q = p
        while q <= power_cap:
            if hom_count_to_cyclic(d_out, d_in, q) != group_hom_count(group, q):
                return False
            if all(d % q for d in group.torsion) and q > max(group.torsion, default=1):
                break
            q *= p
    return True


# ---------------------------------------------------------------------------
# independent Bredon homology for Z/2 spaces

# A coefficient system for Z/2 is given here by plain data: ranks of the
# values at the free and fixed orbits and the matrices of the deck map t
# and the projection p (covariant: M(p): M(G/e) -> M(G/G)).


class Z2System:
    def __init__(self, rank_free, rank_fixed, mat_t, mat_p, name):
        self.rank_free = rank_free
        self.rank_fixed = rank_fixed
        self.mat_t = mat_t
        self.mat_p = mat_p
        self.name = name


Z2_SYSTEMS = [
    Z2System(1, 1, [[1]], [[1]], "constant"),
    Z2System(2, 1, [[0, 1], [1, 0]], [[1, 1]], "free-orbit"),
    Z2System(1, 1, [[-1]], [[0]], "sign-like"),
]


def _msub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _madd(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _ident(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def bredon_oracle(space, system):
    """Bredon chain complexes from the fixed-point data, hand assembled.

    Chain groups are one copy of the coefficient value per orbit cell;
    differentials come from the classical boundary matrices of the total
    space with the deck action folded in.
    """
    k = system.rank_free
    t = system.mat_t
    p = system.mat_p
    if space == "point-free":
        chains = [k]
        diffs = {}
    elif space == "point-fixed":
        chains = [system.rank_fixed]
        diffs = {}
    elif space == "antipodal-S1":
        chains = [k, k]
        diffs = {1: _msub(t, _ident(k))}
    elif space == "antipodal-S2":
        chains = [k, k, k]
        diffs = {1: _msub(t, _ident(k)), 2: _madd(t, _ident(k))}
    elif space == "reflection-S1":
        # two fixed vertices, one free arc orbit; d(arc) = south - north
        chains = [2 * system.rank_fixed, k]
        d1 = [[-x for x in row] for row in p] + [row[:] for row in p]
        diffs = {1: d1}
    else:
        raise ValueError(space)
    out = []
    for n, rank in enumerate(chains):
        d_out = diffs.get(n, [])
        d_in = diffs.get(n + 1, [[] for _ in range(rank)])
        out.append(sympy_homology_free(d_out, d_in))
    return out


# ---------------------------------------------------------------------------
# counting homomorphisms out of a finite presentation


def count_presentation_homs(generators, relation_pairs, elements, mult, identity):
    """#Hom into a finite monoid-with-chosen-structure by brute force.

    ``generators`` is an ordered list of names, ``relation_pairs`` pairs of
    words (tuples of names, applied left to right).  Identity-valued empty
    words are handled via ``identity``.
    """

    def evaluate(word, assignment):
        # word is in application order; fold by left multiplication
        acc = identity
        for gen in word:
            acc = mult[(assignment[gen], acc)]
        return acc

    count = 0
    for values in product(elements, repeat=len(generators)):
        assignment = dict(zip(generators, values))
        if all(evaluate(w1, assignment) == evaluate(w2, assignment)
               for w1, w2 in relation_pairs):
            count += 1
    return count


def permutation_group_table(n):
    """The symmetric group on n letters as explicit tuple data."""
    from itertools import permutations
    elems = list(permutations(range(n)))
    mult = {(a, b): tuple(a[b[i]] for i in range(n))
            for a in elems for b in elems}
    return elems, mult, tuple(range(n))


def cyclic_group_table(n):
    elems = list(range(n))
    mult = {(a, b): (a + b) % n for a in elems for b in elems}
    return elems, mult, 0
