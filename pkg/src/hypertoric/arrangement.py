"""Torus data, circuits, and the associated hyperplane arrangement.

Torus data is a d x n integer matrix `a` (columns a_1..a_n spanning Z^d)
together with an integer lift theta_hat in Z^n of the stability parameter.
The kernel of a is recorded by a saturated n x k integer matrix iota whose
columns are the canonical (HNF) Z-basis, so 0 -> Z^k -> Z^n -> Z^d -> 0 is
exact.

A circuit is a minimal dependent set S of columns.  Its kernel line carries a
primitive integer vector beta_S supported on S, oriented by
theta_hat . beta_S > 0; the induced signs split S = S+ u S-.  Stability data
with theta_hat . beta_S = 0 for some circuit sits on a wall and is refused.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    DimensionMismatch,
    NonGenericStability,
    NotSurjective,
    RankDeficient,
)
from .exact import (
    hermite_normal_form,
    integer_kernel_basis,
    mat_vec,
    nullspace_rational,
    primitive_integer_vector,
    rank_rational,
    smith_normal_form,
    solve_rational,
    transpose,
)


@dataclass(frozen=True)
class TorusData:
    a: tuple            # d x n, rows are tuples
    theta_hat: tuple    # length n
    iota: tuple         # n x k kernel basis, rows are tuples
    d: int
    n: int
    k: int
    surjective: bool

    def column(self, i):
        return [self.a[j][i] for j in range(self.d)]

    def describe(self):
        return {
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "a": [list(r) for r in self.a],
            "theta_hat": list(self.theta_hat),
            "iota": [list(r) for r in self.iota],
            "surjective": self.surjective,
        }


@dataclass(frozen=True)
class Circuit:
    support: tuple      # 0-based column indices, increasing
    plus: tuple         # S+ (indices with beta_i > 0)
    minus: tuple        # S- (beta_i < 0)
    beta: tuple         # primitive kernel vector in Z^n, theta_hat . beta > 0
    beta_k: tuple       # coordinates of beta in the iota basis (length k)

    @property
    def size(self):
        return len(self.support)


def build_torus_data(a, theta_hat, strict=False):
    """Validate and freeze torus data; computes the canonical kernel basis.

    strict=True additionally requires a to be surjective onto Z^d
    (all Smith invariants 1); by default non-surjective full-rank data is
    allowed and simply classifies as non-unimodular downstream.
    """
    a = [list(map(int, row)) for row in a]
    d = len(a)
    if d == 0 or any(len(row) != len(a[0]) for row in a):
        raise DimensionMismatch("a must be a nonempty rectangular matrix")
    n = len(a[0])
    theta_hat = [int(x) for x in theta_hat]
    if len(theta_hat) != n:
        raise DimensionMismatch(
            f"theta_hat has length {len(theta_hat)}, expected n={n}")
    if rank_rational(a) < d:
        raise RankDeficient(f"a has rank < d={d} over Q")
    D, _, _ = smith_normal_form(a)
    surjective = all(D[i][i] == 1 for i in range(d))
    if strict and not surjective:
        raise NotSurjective("a is not surjective onto Z^d")
    iota_cols = integer_kernel_basis(a)  # n x k
    k = len(iota_cols[0]) if iota_cols and n else 0
    iota = tuple(tuple(row) for row in iota_cols) if k else tuple(() for _ in range(n))
    return TorusData(
        a=tuple(tuple(r) for r in a),
        theta_hat=tuple(theta_hat),
        iota=iota,
        d=d, n=n, k=k,
        surjective=surjective,
    )


def _columns(td, idx):
    return [[td.a[j][i] for i in idx] for j in range(td.d)]


def enumerate_circuits(td):
    """All circuits of the column matroid of a, sorted lex by support.

    Enumerates supports in size-then-lex order, pruning supersets of found
    circuits, so each surviving dependent candidate is automatically minimal.
    Raises NonGenericStability if theta_hat pairs to zero with some circuit.
    """
    found = []
    for size in range(1, td.n + 1):
        for S in combinations(range(td.n), size):
            if any(set(c.support) <= set(S) for c in found):
                continue
            sub = _columns(td, S)
            if rank_rational(sub) == size:
                continue
            ns = nullspace_rational(sub)
            if len(ns) != 1:
                # contains a smaller dependent set; cannot happen after pruning
                raise AssertionError("non-minimal dependent candidate survived pruning")
            beta_s = primitive_integer_vector(ns[0])
            beta = [0] * td.n
            for pos, i in enumerate(S):
                beta[i] = beta_s[pos]
            pairing = sum(t * b for t, b in zip(td.theta_hat, beta))
            if pairing == 0:
                raise NonGenericStability(
                    f"theta_hat pairs to zero with circuit {tuple(i + 1 for i in S)}")
            if pairing < 0:
                beta = [-x for x in beta]
            plus = tuple(i for i in S if beta[i] > 0)
            minus = tuple(i for i in S if beta[i] < 0)
            beta_k = _in_kernel_coords(td, beta)
            found.append(Circuit(
                support=tuple(S), plus=plus, minus=minus,
                beta=tuple(beta), beta_k=tuple(beta_k)))
    found.sort(key=lambda c: c.support)
    return found


def _in_kernel_coords(td, beta):
    """Coordinates of a kernel vector beta in the iota basis (exact, integer)."""
    if td.k == 0:
        return []
    iota = [list(r) for r in td.iota]
    x = solve_rational(iota, beta)
    if x is None or any(v.denominator != 1 for v in x):
        raise AssertionError("kernel vector not in the iota lattice")
    return [int(v) for v in x]


def classify(td, circuits=None):
    """Report {simple, unimodular, smooth} for the arrangement of td.

    simple: every subset of hyperplanes with nonempty common intersection
    meets in codimension = its size (checked brute force up to size d+1).
    unimodular: every independent d-subset of columns has determinant +-1.
    """
    simple = True
    for size in range(2, td.d + 2):
        for S in combinations(range(td.n), size):
            sub = _columns(td, S)  # d x size
            rows = transpose(sub)  # size x d: equations a_i . x = -theta_i
            rhs = [-td.theta_hat[i] for i in S]
            if solve_rational(rows, rhs) is None:
                continue  # empty intersection
            if rank_rational(rows) != size:
                simple = False
                break
        if not simple:
            break
    unimodular = True
    for S in combinations(range(td.n), td.d):
        sub = _columns(td, S)
        if rank_rational(sub) < td.d:
            continue
        det = _det_int(sub)
        if abs(det) != 1:
            unimodular = False
            break
    return {"simple": simple, "unimodular": unimodular,
            "smooth": simple and unimodular}


def _det_int(M):
    from .exact import det_unimodular
    return det_unimodular(M)


@dataclass(frozen=True)
class Vertex:
    basis: tuple    # d-subset of column indices
    position: tuple  # Fractions, the common point of the d hyperplanes


def vertices(td):
    """Vertices of the arrangement: one per independent d-subset of columns.

    Meaningful for simple arrangements (then these are exactly the vertices
    and their count is the ring rank).
    """
    out = []
    for S in combinations(range(td.n), td.d):
        rows = transpose(_columns(td, S))
        if rank_rational(rows) < td.d:
            continue
        rhs = [Fraction(-td.theta_hat[i]) for i in S]
        x = solve_rational(rows, rhs)
        out.append(Vertex(basis=tuple(S), position=tuple(x)))
    return out


def root_hyperplanes(td, circuits):
    """For each circuit S, the hyperplane in t^k spanned by {iota_i : i not in S}.

    Returns a list of (circuit, spanning_rows) where spanning_rows are the
    iota rows off the support; their span must be a hyperplane (dim k-1),
    and beta_S in iota coordinates pairs to zero with each of them.
    """
    out = []
    for c in circuits:
        rows = [list(td.iota[i]) for i in range(td.n) if i not in c.support]
        if td.k and rank_rational(rows) != td.k - 1:
            raise DimensionMismatch(
                f"complement of circuit {c.support} does not span a hyperplane")
        for r in rows:
            if sum(x * y for x, y in zip(r, c.beta_k)) != 0:
                raise AssertionError("beta_k not orthogonal to complement rows")
        out.append((c, rows))
    return out
