"""Classical and quantum equivariant cohomology ring presentations.

The quantum ring of smooth hypertoric data is the quotient of
Q(h, c)[u_1..u_n, q] by the linear relations sum_i a_ij u_i = c_j and one
relation per circuit S:

    prod_{S+} u_i prod_{S-} (h - u_i)  =  q^{beta_S} prod_{S+} (h - u_i) prod_{S-} u_i

with no shift in the deformation parameter.  The classical ring is the same
with every q^{beta_S} set to 0.  Both are presented by a reduced Groebner
basis over the parameter field; the staircase monomials form the working
basis of the underlying vector space, and its size equals the number of
vertices of the arrangement.

Steinberg operators L_S are recovered from the simple pole of a quantum
multiplication matrix at q^S = 1, where q^S = (-1)^{|S|} q^{beta_S}; the
divisor formula

    A_i(q) = A_i(0) + h sum_S (u_i, beta_S) (q^S / (1 - q^S)) L_S

is then an exact identity of matrices over Q(h, c, q).  Cohomology classes
(as opposed to operators) are represented throughout by their *classical*
normal forms on the common staircase; using quantum normal forms for the
product identities below is off by exactly 1/(1 - q^S).
"""

import random
from fractions import Fraction

from .arrangement import classify, enumerate_circuits
from .errors import (
    InconsistentExtraction,
    NotSmooth,
    ParameterDegeneracy,
    PoleOrderError,
)
from .exact import hermite_normal_form, mat_vec
from .params import ParamField
from .upoly import GrevlexOrder, UPoly, buchberger, normal_form, staircase


def make_field(td):
    return ParamField(td.d, td.k)


class RingPresentation:
    def __init__(self, td, mode, field, order, generators, gb, std, circuits):
        self.td = td
        self.mode = mode
        self.field = field
        self.order = order
        self.generators = generators
        self.gb = gb
        self.std = std
        self.circuits = circuits
        self._index = {m: i for i, m in enumerate(std)}
        self._mult = {}

    @property
    def rank(self):
        return len(self.std)

    def u(self, i):
        return UPoly.variable(i, self.td.n, self.field.one)

    def nf(self, p):
        return normal_form(p, self.gb, self.order)

    def nf_vector(self, p):
        """Coordinates of [p] on the staircase basis."""
        r = self.nf(p)
        vec = [self.field.zero] * len(self.std)
        for m, c in r.terms.items():
            vec[self._index[m]] = c
        return vec

    def multiplication_matrix(self, i):
        """Matrix of multiplication by u_i on the staircase basis (columns
        are images of basis monomials)."""
        M = self._mult.get(i)
        if M is None:
            cols = []
            ui = self.u(i)
            for m in self.std:
                p = ui * UPoly(self.td.n, {m: self.field.one})
                cols.append(self.nf_vector(p))
            M = [[cols[c][r] for c in range(len(self.std))]
                 for r in range(len(self.std))]
            self._mult[i] = M
        return M

    def multiplication_matrix_poly(self, p):
        cols = []
        for m in self.std:
            cols.append(self.nf_vector(p * UPoly(self.td.n, {m: self.field.one})))
        return [[cols[c][r] for c in range(len(self.std))]
                for r in range(len(self.std))]

    def relation_strings(self):
        names = [f"u{i + 1}" for i in range(self.td.n)]
        return [g.render(names, coeff_str=self.field.render) for g in self.gb]


def linear_generators(td, field):
    gens = []
    for j in range(td.d):
        terms = {}
        for i in range(td.n):
            if td.a[j][i]:
                exp = tuple(1 if t == i else 0 for t in range(td.n))
                terms[exp] = field.from_rational(td.a[j][i])
        p = UPoly(td.n, terms) - UPoly.constant(field.c[j], td.n)
        gens.append(p)
    return gens


def circuit_generator(td, field, circuit, qfactor):
    one = field.one
    h = field.h
    n = td.n

    def u(i):
        return UPoly.variable(i, n, one)

    def hmu(i):
        return UPoly.constant(h, n) - u(i)

    left = UPoly.constant(one, n)
    for i in circuit.plus:
        left = left * u(i)
    for i in circuit.minus:
        left = left * hmu(i)
    if not qfactor:
        return left
    right = UPoly.constant(qfactor, n)
    for i in circuit.plus:
        right = right * hmu(i)
    for i in circuit.minus:
        right = right * u(i)
    return left - right


_PRES_CACHE = {}


def presentation(td, mode="quantum", field=None, qmono=None, budget=20000,
                 check_smooth=True):
    """Groebner presentation of the classical or quantum ring.

    qmono overrides the Novikov factor per circuit (used by the Steinberg
    extraction); default is q^{beta_S} for quantum, 0 for classical.
    Results with default field/qmono are cached per (td, mode).
    """
    cacheable = field is None and qmono is None
    if cacheable and (td, mode) in _PRES_CACHE:
        return _PRES_CACHE[(td, mode)]
    if mode not in ("quantum", "classical"):
        raise ValueError(f"unknown mode {mode!r}")
    if check_smooth:
        rep = classify(td)
        if not rep["smooth"]:
            raise NotSmooth(f"arrangement is not smooth: {rep}")
    circuits = enumerate_circuits(td)
    if field is None:
        field = make_field(td)
    order = GrevlexOrder(td.n)
    gens = linear_generators(td, field)
    for c in circuits:
        if mode == "classical":
            qf = field.zero
        elif qmono is not None:
            qf = qmono(c)
        else:
            qf = field.q_monomial(c.beta_k)
        gens.append(circuit_generator(td, field, c, qf))
    gb = buchberger(gens, order, budget=budget)
    std = staircase(gb, order)
    pres = RingPresentation(td, mode, field, order, gens, gb, std, circuits)
    if cacheable:
        _PRES_CACHE[(td, mode)] = pres
    return pres


# matrix helpers over a coefficient field (lists of lists of field elements)

def mat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[x * c for x in row] for row in A]


def mat_apply(A, v):
    return [sum((x * y for x, y in zip(row, v)), row[0] * 0) for row in A]


def mat_is_zero(A):
    return all(not x for row in A for x in row)


def frac_matrix_rank(A):
    """Rank of a matrix over the parameter field (exact division)."""
    M = [list(row) for row in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][c]
        for i in range(r + 1, rows):
            if M[i][c]:
                f = M[i][c] / inv
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def q_shift(field, circuit):
    """q^S = (-1)^{|S|} q^{beta_S} as a field element."""
    sign = field.from_rational((-1) ** circuit.size)
    return sign * field.q_monomial(circuit.beta_k)


def extract_steinberg(pres, circuit, seed=0):
    """Steinberg operator L_S from the simple pole of A_i at q^S = 1.

    Substitutes q^{beta} -> gamma * s^{w} along an HNF-completed direction
    with seeded generic rational constants, so q^S -> (-1)^{|S|} s and the
    pole sits at s0 = (-1)^{|S|}.  The residue is exact: after fraction
    cancellation a simple pole is detected by the denominator being nonzero
    at s0 (PoleOrderError otherwise).  Extraction runs twice (two divisor
    choices and two constant draws); disagreement raises
    InconsistentExtraction.  Entries are returned in pres.field (q-free).
    """
    if pres.mode != "quantum":
        raise ValueError("Steinberg extraction needs the quantum presentation")
    td = pres.td
    col = [[b] for b in circuit.beta_k]
    H, W = hermite_normal_form(col)
    if H[0][0] != 1:
        raise AssertionError("circuit beta_k is not primitive")
    first = _extract_once(pres, circuit, W, seed)
    second = _extract_once(pres, circuit, W, seed + 1)
    if first != second:
        raise InconsistentExtraction(
            f"extractions for circuit {circuit.support} disagree between draws")
    return first


def _extract_once(pres, circuit, W, seed):
    td = pres.td
    sign = Fraction((-1) ** circuit.size)
    rnd = random.Random(f"steinberg:{seed}:{circuit.support}")
    fs = ParamField(td.d, 1, qnames=("s",))
    s = fs.q[0]
    pres_s = None
    for _ in range(8):
        rs = [Fraction(rnd.randint(1, 19), rnd.randint(1, 19))
              for _ in range(td.k - 1)]
        ws = {c2.support: mat_vec(W, list(c2.beta_k)) for c2 in pres.circuits}
        ok = True
        for c2 in pres.circuits:
            if c2.support == circuit.support:
                continue
            w = ws[c2.support]
            gamma = Fraction(1)
            for m in range(1, td.k):
                if w[m]:
                    gamma *= rs[m - 1] ** w[m]
            # other circuits' walls must stay away from s0 = sign
            val = 1 - Fraction((-1) ** c2.size) * gamma * sign ** w[0]
            if val == 0:
                ok = False
                break
        if not ok:
            continue

        def qmono(c2, _rs=rs, _ws=ws):
            w = _ws[c2.support]
            gamma = Fraction(1)
            for m in range(1, td.k):
                if w[m]:
                    gamma *= _rs[m - 1] ** w[m]
            return fs.from_rational(gamma) * s ** w[0]

        cand = presentation(td, "quantum", field=fs, qmono=qmono,
                            check_smooth=False)
        if cand.std == pres.std:
            pres_s = cand
            break
    if pres_s is None:
        raise ParameterDegeneracy(
            f"no generic substitution found for circuit {circuit.support}")

    s0 = fs.from_rational(sign)
    one_minus = fs.one - s0 * s   # = 1 - q^S after substitution
    images_eval = list(fs.gens)
    images_eval[-1] = s0          # substitute s -> s0
    images_out = list(pres.field.gens[:1 + td.d]) + [pres.field.one] * 1

    mats = []
    divisors = circuit.support[:2] if circuit.size >= 2 else circuit.support[:1]
    for i in divisors:
        Ai = pres_s.multiplication_matrix(i)
        beta_i = fs.from_rational(circuit.beta[i])
        denom = fs.h * beta_i
        L = []
        for row in Ai:
            out = []
            for f in row:
                g = f * one_minus
                try:
                    val = fs.transfer(g, fs, images_eval)
                except ZeroDivisionError:
                    raise PoleOrderError(
                        f"pole of A_{i + 1} at q^S=1 is not simple for "
                        f"circuit {circuit.support}")
                out.append(val / denom)
            L.append(out)
        # move entries (now s-free) into the main field
        Lmain = [[fs.transfer(x, pres.field, images_out) for x in row]
                 for row in L]
        mats.append(Lmain)
    if len(mats) == 2 and mats[0] != mats[1]:
        raise InconsistentExtraction(
            f"extractions for circuit {circuit.support} disagree between divisors")
    return mats[0]


def verify_divisor_formula(td, seed=0):
    """Check A_i(q) = A_i(0) + h sum_S (u_i,beta_S) q^S/(1-q^S) L_S exactly.

    A_i(0) is the classical multiplication matrix on the shared staircase.
    Returns a report with one exactness flag per divisor.
    """
    presq = presentation(td, "quantum")
    presc = presentation(td, "classical", field=presq.field, check_smooth=False)
    if presq.std != presc.std:
        raise ParameterDegeneracy("classical and quantum staircases differ")
    F = presq.field
    steins = [(c, extract_steinberg(presq, c, seed)) for c in presq.circuits]
    per_divisor = []
    for i in range(td.n):
        A = presq.multiplication_matrix(i)
        R = presc.multiplication_matrix(i)
        for c, L in steins:
            beta_i = c.beta[i]
            if not beta_i:
                continue
            qs = q_shift(F, c)
            ratio = qs / (F.one - qs)
            R = mat_add(R, mat_scale(L, F.h * F.from_rational(beta_i) * ratio))
        diff = mat_sub(A, R)
        per_divisor.append({"divisor": i + 1, "exact": mat_is_zero(diff)})
    return {
        "instance": td.describe(),
        "per_divisor": per_divisor,
        "all_exact": all(e["exact"] for e in per_divisor),
    }


def _product_poly(pres, factors):
    p = UPoly.constant(pres.field.one, pres.td.n)
    for f in factors:
        p = p * f
    return p


def verify_steinberg_identities(td, seed=0, vanishing_cap=4):
    """Exact checks of the vanishing and product identities for each circuit.

    With v_i = u_i on S+ and h - u_i on S-:
      product identity A:  h L_S prod_{i in S, i != i0} v_i
                              = (-1)^{|S|} prod_{i in S} (h - v_i)
      product identity B:  h L_S prod_{i in S, i != i0} (h - v_i)
                              = - prod_{i in S} (h - v_i)
      vanishing: L_S kills every monomial class u_{M+} (h-u)_{M-} where M is
      circuit-free and M u {i} is circuit-free for all i in S \\ M.
    Classes are represented by classical normal forms on the staircase.
    """
    presq = presentation(td, "quantum")
    presc = presentation(td, "classical", field=presq.field, check_smooth=False)
    if presq.std != presc.std:
        raise ParameterDegeneracy("classical and quantum staircases differ")
    F = presq.field
    h = F.h
    n = td.n
    supports = [set(c.support) for c in presq.circuits]

    def u(i):
        return UPoly.variable(i, n, F.one)

    def hmu(i):
        return UPoly.constant(h, n) - u(i)

    report = {"circuits": [], "all_pass": True}
    for c in presq.circuits:
        L = extract_steinberg(presq, c, seed)
        v = {i: (u(i) if i in c.plus else hmu(i)) for i in c.support}
        hv = {i: (hmu(i) if i in c.plus else u(i)) for i in c.support}
        rhs_poly = _product_poly(presq, [hv[i] for i in c.support])
        rhs_vec = presc.nf_vector(rhs_poly)
        sign = F.from_rational((-1) ** c.size)
        prodA = prodB = True
        for i0 in c.support:
            argA = _product_poly(presq, [v[i] for i in c.support if i != i0])
            lhsA = [h * x for x in mat_apply(L, presc.nf_vector(argA))]
            if lhsA != [sign * x for x in rhs_vec]:
                prodA = False
            argB = _product_poly(presq, [hv[i] for i in c.support if i != i0])
            lhsB = [h * x for x in mat_apply(L, presc.nf_vector(argB))]
            if lhsB != [-x for x in rhs_vec]:
                prodB = False
        # vanishing lemma over admissible circuit-free M
        vanish = True
        from itertools import combinations
        S = set(c.support)
        for msize in range(0, min(vanishing_cap, n) + 1):
            for M in combinations(range(n), msize):
                Mset = set(M)
                if any(sup <= Mset for sup in supports):
                    continue
                if any(any(sup <= Mset | {i} for sup in supports)
                       for i in S - Mset):
                    continue
                for split in range(1 << len(M)):
                    factors = []
                    for t, i in enumerate(M):
                        factors.append(u(i) if (split >> t) & 1 == 0 else hmu(i))
                    vec = presc.nf_vector(_product_poly(presq, factors))
                    img = mat_apply(L, vec)
                    if any(x for x in img):
                        vanish = False
                        break
                if not vanish:
                    break
            if not vanish:
                break
        entry = {
            "circuit": tuple(i + 1 for i in c.support),
            "product_identity_A": prodA,
            "product_identity_B": prodB,
            "vanishing": vanish,
        }
        report["circuits"].append(entry)
        report["all_pass"] &= prodA and prodB and vanish
    return report
