"""Mirror side: twisted periods, critical points, and the comparison checks.

The mirror space for torus data (a, theta_hat) at Kahler point q is the
dual torus minus the multiplicative hyperplanes {q_i t^{a_i} = -1}, carrying
the multivalued form

    Omega = prod_i (1 + q_i t^{a_i})^h  prod_j t_j^{-c_j}  dt_j / t_j .

Periods over Pochhammer double loops (commutators of loops around puncture
pairs) are computed by direct quadrature with continuous branch tracking of
every logarithm along the contour; a closed commutator must return the
branch state to its start, which is checked.  Period integration is
implemented for d = 1 (all it is needed for); critical points of the
superpotential

    Y_q = h sum_i log(1 + q_i t^{a_i}) - sum_j c_j log t_j

are computed for d = 1 (companion polynomial) and d = 2 (damped Newton
multistart in log t).
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (BranchTrackingFailure, DegenerateModel,
                     IncompleteCriticalSet, ParameterDegeneracy,
                     QuadratureFailure, UnsupportedDimension)

TWOPI = 2.0 * math.pi


# -- model --------------------------------------------------------------------


class MirrorModel:
    def __init__(self, td, hbar, cvals, qn):
        self.td = td
        self.hbar = complex(hbar)
        self.cvals = [complex(c) for c in cvals]
        if len(self.cvals) != td.d:
            raise DegenerateModel("need one c_j per base dimension")
        self.qn = np.asarray(qn, dtype=complex)
        if self.qn.shape != (td.n,):
            raise DegenerateModel("need one q_i per hyperplane")
        if np.any(np.abs(self.qn) < 1e-300):
            raise DegenerateModel("q has a vanishing coordinate")

    def t_pow(self, t, i):
        """t^{a_i} for a point t of the d-torus."""
        acc = 1.0 + 0.0j
        for j in range(self.td.d):
            e = self.td.a[j][i]
            if e:
                acc *= t[j] ** e
        return acc

    def phi(self, t):
        """phi_i = q_i t^{a_i} / (1 + q_i t^{a_i}), the log-derivative data."""
        out = np.empty(self.td.n, dtype=complex)
        for i in range(self.td.n):
            x = self.qn[i] * self.t_pow(t, i)
            w = 1.0 + x
            if abs(w) < 1e-13:
                raise DegenerateModel("evaluation on a mirror hyperplane")
            out[i] = x / w
        return out

    # d = 1 specifics ---------------------------------------------------------

    def exponents(self):
        if self.td.d != 1:
            raise UnsupportedDimension("scalar exponents need d = 1")
        return [self.td.a[0][i] for i in range(self.td.n)]

    def punctures(self):
        """Finite nonzero punctures (roots of 1 + q_i t^{a_i}), d = 1."""
        exps = self.exponents()
        pts = []
        for i, e in enumerate(exps):
            if e == 0:
                if abs(1.0 + self.qn[i]) < 1e-12:
                    raise DegenerateModel("constant hyperplane degenerates")
                continue
            # 1 + q t^e = 0:  t^e = -1/q; e < 0 gives t^{-e} = -q
            if e > 0:
                rhs = -1.0 / self.qn[i]
                k = e
            else:
                rhs = -self.qn[i]
                k = -e
            r = abs(rhs) ** (1.0 / k)
            th = cmath.phase(rhs)
            for m in range(k):
                pts.append(r * cmath.exp(1j * (th + TWOPI * m) / k)
                           if k > 1 else rhs)
        # canonical deterministic order
        pts.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        for s, t in zip(pts, pts[1:]):
            if abs(s - t) < 1e-9:
                raise DegenerateModel("colliding punctures")
        if any(abs(p) < 1e-9 for p in pts):
            raise DegenerateModel("puncture collides with t = 0")
        return pts


# -- contours (d = 1) ---------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    z0: complex
    z1: complex

    def at(self, s):
        return self.z0 + s * (self.z1 - self.z0), self.z1 - self.z0


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    th0: float
    th1: float

    def at(self, s):
        th = self.th0 + s * (self.th1 - self.th0)
        e = cmath.exp(1j * th)
        return (self.center + self.radius * e,
                1j * self.radius * e * (self.th1 - self.th0))


def _loop_pieces(p, r, x0, inverse=False):
    """Out-circle-back loop around p based at x0, split into smooth pieces."""
    u = (x0 - p) / abs(x0 - p)
    entry = p + r * u
    th = cmath.phase(u)
    arcs = [Arc(p, r, th + TWOPI * k / 4, th + TWOPI * (k + 1) / 4)
            for k in range(4)]
    if inverse:
        arcs = [Arc(p, r, a.th1, a.th0) for a in reversed(arcs)]
    return [Segment(x0, entry)] + arcs + [Segment(entry, x0)]


def pochhammer_contour(p_a, p_b, all_punctures):
    """Commutator loop_a loop_b loop_a^{-1} loop_b^{-1} based between a, b."""
    x0 = 0.5 * (p_a + p_b)

    if min(abs(x0 - o) for o in all_punctures) < 1e-9 * (1 + abs(x0)):
        raise DegenerateModel("contour base point hits a puncture")

    def radius(p):
        d = min(abs(p - o) for o in all_punctures if abs(p - o) > 1e-12)
        return 0.3 * min(d, abs(p - x0))

    ra, rb = radius(p_a), radius(p_b)
    pieces = []
    pieces += _loop_pieces(p_a, ra, x0)
    pieces += _loop_pieces(p_b, rb, x0)
    pieces += _loop_pieces(p_a, ra, x0, inverse=True)
    pieces += _loop_pieces(p_b, rb, x0, inverse=True)
    return pieces


def cycle_basis(model):
    """Pochhammer contours for adjacent puncture pairs including t = 0."""
    pts = [0.0 + 0.0j] + model.punctures()
    return [pochhammer_contour(pts[k], pts[k + 1], pts)
            for k in range(len(pts) - 1)]


# -- branch-tracked integration (d = 1) ----------------------------------------


class _BranchPiece:
    """Branch anchors along one smooth piece.

    Stores continued values of log t and each log(1 + q_i t^{a_i}) at K+1
    uniform knots; arbitrary parameters get the nearest left knot's state
    plus one principal-log correction (valid when knots are dense enough,
    enforced by the pi/4 step rule).
    """

    def __init__(self, model, piece, state0, knots=48):
        self.model = model
        self.piece = piece
        maxdouble = 8
        for _ in range(maxdouble):
            ok = True
            states = [np.array(state0, dtype=complex)]
            vals_prev = self._raw(piece.at(0.0)[0])
            for k in range(1, knots + 1):
                t, _ = piece.at(k / knots)
                vals = self._raw(t)
                delta = np.log(vals / vals_prev)
                if np.max(np.abs(delta.imag)) >= math.pi / 4:
                    ok = False
                    break
                states.append(states[-1] + delta)
                vals_prev = vals
            if ok:
                self.knots = knots
                self.states = states
                return
            knots *= 2
        raise BranchTrackingFailure("branch step never fell under pi/4")

    def _raw(self, t):
        model = self.model
        out = np.empty(model.td.n + 1, dtype=complex)
        out[0] = t
        for i in range(model.td.n):
            out[i + 1] = 1.0 + model.qn[i] * model.t_pow((t,), i)
        if np.any(np.abs(out) < 1e-13):
            raise BranchTrackingFailure("contour touches a puncture")
        return out

    def state_at(self, s):
        k = min(int(s * self.knots), self.knots)
        t, _ = self.piece.at(k / self.knots)
        anchor_vals = self._raw(t)
        t2, _ = self.piece.at(s)
        vals = self._raw(t2)
        delta = np.log(vals / anchor_vals)
        if np.max(np.abs(delta.imag)) >= math.pi / 2:
            raise BranchTrackingFailure("quadrature node too far from anchor")
        return self.states[k] + delta

    def end_state(self):
        return self.states[-1]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


def _piece_integral(model, bp, insertion, s0, s1, tol, depth=0):
    def quad(a, b):
        total = 0.0 + 0.0j
        for x, w in zip(_GL_NODES, _GL_WEIGHTS):
            s = a + x * (b - a)
            t, dt = bp.piece.at(s)
            st = bp.state_at(s)
            # log integrand: h sum_i log w_i - c log t
            expo = model.hbar * np.sum(st[1:]) - model.cvals[0] * st[0]
            val = cmath.exp(expo) * dt / t
            if insertion is not None:
                val *= insertion(model.phi((t,)))
            total += w * val
        return total * (b - a)

    whole = quad(s0, s1)
    mid = 0.5 * (s0 + s1)
    split = quad(s0, mid) + quad(mid, s1)
    if abs(whole - split) <= tol * max(1.0, abs(split)):
        return split
    if depth >= 14:
        raise QuadratureFailure("adaptive bisection depth exhausted")
    return (_piece_integral(model, bp, insertion, s0, mid, tol, depth + 1)
            + _piece_integral(model, bp, insertion, mid, s1, tol, depth + 1))


def period(model, contour, insertion=None, tol=1e-12, state0=None):
    """Integrate Omega (times an optional single-valued insertion) over a
    contour, tracking branches; returns (value, start_state).

    insertion: callable phi-vector -> complex; used for exact Euler
    derivatives of periods, E^M J = integral of Omega * prod_{i in M} h phi_i.
    For closed commutator contours the branch state must return to its
    initial value, which is asserted.
    """
    if model.td.d != 1:
        raise UnsupportedDimension("period integration implemented for d = 1")
    t_start, _ = contour[0].at(0.0)
    if state0 is None:
        state0 = _principal_state(model, t_start)
    state = np.array(state0, dtype=complex)
    total = 0.0 + 0.0j
    for piece in contour:
        bp = _BranchPiece(model, piece, state)
        total += _piece_integral(model, bp, insertion, 0.0, 1.0, tol)
        state = bp.end_state()
    if np.max(np.abs(state - np.asarray(state0))) > 1e-8:
        raise BranchTrackingFailure("branch state did not close up")
    return total, np.asarray(state0)


def _principal_state(model, t):
    out = np.empty(model.td.n + 1, dtype=complex)
    out[0] = cmath.log(t)
    for i in range(model.td.n):
        out[i + 1] = cmath.log(1.0 + model.qn[i] * model.t_pow((t,), i))
    return out


def _continue_state(model_from, state, t_from, model_to, t_to, steps=32):
    """Continue the branch state from (q0, t0) to (q1, t1) along straight
    interpolation, for branch-consistent period comparisons across q."""
    lq0 = np.log(model_from.qn)
    lq1 = np.log(model_to.qn)
    cur = np.array(state, dtype=complex)

    def raw(lam):
        q = np.exp((1 - lam) * lq0 + lam * lq1)
        t = (1 - lam) * t_from + lam * t_to
        m = MirrorModel(model_from.td, model_from.hbar, model_from.cvals, q)
        vals = np.empty(m.td.n + 1, dtype=complex)
        vals[0] = t
        for i in range(m.td.n):
            vals[i + 1] = 1.0 + m.qn[i] * m.t_pow((t,), i)
        return vals

    prev = raw(0.0)
    for k in range(1, steps + 1):
        vals = raw(k / steps)
        delta = np.log(vals / prev)
        if np.max(np.abs(delta.imag)) >= math.pi / 4:
            return _continue_state(model_from, state, t_from, model_to, t_to,
                                   steps * 2)
        cur = cur + delta
        prev = vals
    return cur


# -- GKZ verification on periods (finite differences in log q) -----------------


def euler_expansion(op, model):
    """Expand a GKZ operator into Euler monomials {m: coefficient} at fixed
    (h, c, q); m is an exponent tuple over the n Euler operators E_i."""
    from .connection import GkzCircuit, GkzLinear
    n = model.td.n
    h = model.hbar

    def mul(p1, p2):
        out = {}
        for m1, c1 in p1.items():
            for m2, c2 in p2.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out.get(m, 0.0) + c1 * c2
        return out

    def unit(i):
        m = [0] * n
        m[i] = 1
        return tuple(m)

    zero = (0,) * n
    if isinstance(op, GkzLinear):
        out = {zero: -model.cvals[op.j]}
        for i, aij in enumerate(op.coeffs):
            if aij:
                out[unit(i)] = out.get(unit(i), 0.0) + aij
        return out
    c = op.circuit
    first = {zero: 1.0 + 0.0j}
    for i in c.plus:
        first = mul(first, {unit(i): 1.0 + 0.0j})
    for i in c.minus:
        first = mul(first, {zero: h, unit(i): -1.0})
    second = {zero: 1.0 + 0.0j}
    for i in c.plus:
        second = mul(second, {zero: h, unit(i): -1.0})
    for i in c.minus:
        second = mul(second, {unit(i): 1.0 + 0.0j})
    qb = 1.0 + 0.0j
    for i, b in enumerate(c.beta):
        if b:
            qb *= model.qn[i] ** b
    out = dict(first)
    for m, coeff in second.items():
        out[m] = out.get(m, 0.0) - qb * coeff
    return {m: coeff for m, coeff in out.items() if abs(coeff) > 0}


def _stencil_offsets(orders):
    """Tensor grid of integer offsets covering central differences of the
    requested per-variable orders (0 -> {0}, 1 or 2 -> {-1, 0, 1})."""
    grids = [(0,) if o == 0 else (-1, 0, 1) for o in orders]
    out = [()]
    for g in grids:
        out = [o + (x,) for o in out for x in g]
    return out


_FD_W1 = {-1: -0.5, 0: 0.0, 1: 0.5}
_FD_W2 = {-1: 1.0, 0: -2.0, 1: 1.0}


def _fd_weight(offset, orders, h):
    w = 1.0
    for o, k in zip(orders, offset):
        if o == 0:
            w *= 1.0 if k == 0 else 0.0
        elif o == 1:
            w *= _FD_W1[k] / h
        else:
            w *= _FD_W2[k] / (h * h)
    return w


class PeriodGrid:
    """Periods of one cycle on a stencil around a center q, branch-anchored
    to the center so the whole grid sits on one consistent branch."""

    def __init__(self, td, hbar, cvals, q_center, cycle_index, offsets, h,
                 tol=1e-12):
        self.center = MirrorModel(td, hbar, cvals, q_center)
        contour = cycle_basis(self.center)[cycle_index]
        t0, _ = contour[0].at(0.0)
        base_state = _principal_state(self.center, t0)
        self.values = {}
        lq = np.log(self.center.qn)
        for off in offsets:
            q = np.exp(lq + h * np.array(off, dtype=float))
            m = MirrorModel(td, hbar, cvals, q)
            cont = _matched_contour(self.center, m, cycle_index)
            t_s, _ = cont[0].at(0.0)
            st = _continue_state(self.center, base_state, t0, m, t_s)
            val, _ = period(m, cont, tol=tol, state0=st)
            self.values[off] = val

    def derivative(self, orders, h):
        total = 0.0 + 0.0j
        for off, val in self.values.items():
            w = _fd_weight(off, orders, h)
            if w:
                total += w * val
        return total


def _match_nearest(prev, cands):
    matched, used = [], set()
    for p in prev:
        best, bd = None, None
        for idx, cand in enumerate(cands):
            if idx in used:
                continue
            dd = abs(cand - p)
            if bd is None or dd < bd:
                best, bd = idx, dd
        used.add(best)
        matched.append(cands[best])
    return matched


def _matched_contour(center_model, shifted_model, cycle_index, steps=32):
    """Rebuild the cycle at a shifted q with punctures matched to the center
    ordering, so the contour deforms continuously with q.

    Matching walks the straight log-q path in steps so nearest-neighbor
    pairing stays valid when the endpoints are not close.  (Full braid
    monodromy of wildly wandering punctures is out of scope: the pair
    identity is tracked, the contour is rebuilt at the endpoint.)"""
    td = center_model.td
    lq0 = np.log(center_model.qn)
    lq1 = np.log(shifted_model.qn)
    steps = max(1, min(steps, int(np.max(np.abs(lq1 - lq0)) / 0.05) + 1))
    matched = center_model.punctures()
    for k in range(1, steps + 1):
        q = np.exp((1 - k / steps) * lq0 + (k / steps) * lq1)
        m = MirrorModel(td, center_model.hbar, center_model.cvals, q)
        matched = _match_nearest(matched, m.punctures())
    pts = [0.0 + 0.0j] + matched
    return pochhammer_contour(pts[cycle_index], pts[cycle_index + 1], pts)


def verify_gkz_on_periods(td, hbar, cvals, q_points, tol=1e-6, h=6e-3,
                          quad_tol=1e-12):
    """Finite-difference check that every period solves every GKZ operator.

    For each q point and each cycle: compute periods on a Richardson pair of
    stencils (h and h/2), apply each operator's Euler-monomial expansion,
    and report the residual relative to the largest contributing term.
    Also reports the rank of the period matrix (values and first Euler
    derivatives across cycles).
    """
    from .connection import gkz_system
    ops = gkz_system(td)
    report = {"points": [], "pass": True}
    for qn in q_points:
        model = MirrorModel(td, hbar, cvals, np.asarray(qn, dtype=complex))
        ncyc = len(cycle_basis(model))
        expansions = [euler_expansion(op, model) for op in ops]
        needed = {m for e in expansions for m in e}
        needed.add((0,) * td.n)
        needed.add(tuple(1 if i == 0 else 0 for i in range(td.n)))
        orders = tuple(max(m[i] for m in needed) for i in range(td.n))
        offsets = _stencil_offsets(orders)
        worst = 0.0
        rows = []
        for cyc in range(ncyc):
            g1 = PeriodGrid(td, hbar, cvals, model.qn, cyc, offsets, h,
                            tol=quad_tol)
            g2 = PeriodGrid(td, hbar, cvals, model.qn, cyc, offsets, h / 2,
                            tol=quad_tol)
            derivs = {}
            for m in needed:
                d1 = g1.derivative(m, h)
                d2 = g2.derivative(m, h / 2)
                derivs[m] = (4.0 * d2 - d1) / 3.0
            for e in expansions:
                terms = [coeff * derivs[m] for m, coeff in e.items()]
                scale = max(abs(t) for t in terms)
                resid = abs(sum(terms)) / max(scale, 1e-300)
                worst = max(worst, resid)
            rows.append([derivs[(0,) * td.n],
                         derivs[tuple(1 if i == 0 else 0
                                      for i in range(td.n))]])
        Y = np.array(rows)
        sv = np.linalg.svd(Y, compute_uv=False)
        rank = int(np.sum(sv > 1e-6 * sv[0]))
        ok = worst <= tol and rank == min(Y.shape)
        report["points"].append({
            "q": [complex(z) for z in model.qn],
            "max_relative_residual": worst,
            "period_matrix_rank": rank,
            "cycles": ncyc,
            "pass": bool(ok),
        })
        report["pass"] = report["pass"] and ok
    return report


# -- critical points ------------------------------------------------------------


def _poly_mul(p1, p2):
    out = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            out[e1 + e2] = out.get(e1 + e2, 0.0) + c1 * c2
    return out


def critical_points(model, seed=0, budget=600):
    """Critical points of Y_q on the mirror torus; returns a list of t tuples.

    d = 1: clears denominators to one Laurent polynomial and takes numpy
    roots.  d = 2: damped Newton in log t with seeded multistart, deduped;
    raises IncompleteCriticalSet if the expected count (the ring rank) is
    not reached within budget starts.
    """
    td = model.td
    if td.d == 1:
        return _critical_d1(model)
    if td.d == 2:
        return _critical_d2(model, seed=seed, budget=budget)
    raise UnsupportedDimension("critical points implemented for d <= 2")


def _expected_count(td):
    from .quantum_ring import presentation
    return presentation(td).rank


def _critical_d1(model):
    exps = model.exponents()
    h = model.hbar
    c = model.cvals[0]
    # h sum_i a_i q_i t^{a_i} prod_{k != i}(1 + q_k t^{a_k})
    #   - c prod_k (1 + q_k t^{a_k}) = 0
    factors = [{0: 1.0 + 0.0j, exps[k]: model.qn[k]} if exps[k]
               else {0: 1.0 + model.qn[k]} for k in range(model.td.n)]
    poly = {0: -c}
    for k in range(model.td.n):
        poly = _poly_mul(poly, factors[k])
    for i in range(model.td.n):
        if exps[i] == 0:
            continue
        term = {exps[i]: h * exps[i] * model.qn[i]}
        for k in range(model.td.n):
            if k != i:
                term = _poly_mul(term, factors[k])
        for e, coeff in term.items():
            poly[e] = poly.get(e, 0.0) + coeff
    lo = min(poly)
    hi = max(poly)
    coeffs = np.zeros(hi - lo + 1, dtype=complex)
    for e, coeff in poly.items():
        coeffs[hi - e] = coeff
    roots = np.roots(coeffs)
    out = []
    for t in roots:
        if abs(t) < 1e-10:
            continue
        if any(abs(1.0 + model.qn[i] * model.t_pow((t,), i)) < 1e-8
               for i in range(model.td.n)):
            continue
        t = _newton_polish(model, (t,))[0]
        if any(abs(t - s) < 1e-8 * (1 + abs(t)) for (s,) in out):
            continue
        out.append((t,))
    expected = _expected_count(model.td)
    if len(out) != expected:
        raise IncompleteCriticalSet(
            f"found {len(out)} critical points, expected {expected}")
    out.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    return out


def _crit_F(model, t):
    phi = model.phi(t)
    out = np.empty(model.td.d, dtype=complex)
    for j in range(model.td.d):
        out[j] = model.hbar * sum(model.td.a[j][i] * phi[i]
                                  for i in range(model.td.n)) - model.cvals[j]
    return out


def _crit_J(model, t):
    # J_{jl} = h sum_i a_ij a_il phi_i (1 - phi_i)   (derivative in log t_l)
    phi = model.phi(t)
    J = np.zeros((model.td.d, model.td.d), dtype=complex)
    for j in range(model.td.d):
        for l in range(model.td.d):
            J[j, l] = model.hbar * sum(
                model.td.a[j][i] * model.td.a[l][i] * phi[i] * (1 - phi[i])
                for i in range(model.td.n))
    return J


def _newton_polish(model, t, iters=6):
    x = np.log(np.array(t, dtype=complex))
    for _ in range(iters):
        F = _crit_F(model, tuple(np.exp(x)))
        try:
            step = np.linalg.solve(_crit_J(model, tuple(np.exp(x))), F)
        except np.linalg.LinAlgError:
            break
        x = x - step
    return tuple(np.exp(x))


def _vertex_starts(model):
    """Newton starts from the tropical q -> 0 limit, one per arrangement
    vertex (independent d-subset B).  At the vertex scale log|t| the active
    factors q_i t^{a_i} are O(1) for i in B; each complement factor tends to
    0 or infinity according to the sign of log|q_i t^{a_i}|, contributing
    phi_i -> 0 or 1.  The active phi_B then solve the shifted linear system
    h sum_B a_ij phi_i = c_j - h sum_{N_1} a_ij."""
    from .arrangement import vertices
    td = model.td
    w = np.log(np.abs(model.qn))
    cv = np.array(model.cvals)
    starts = []
    for v in vertices(td):
        B = v.basis
        M = np.array([[td.a[j][i] for i in B] for j in range(td.d)],
                     dtype=float)
        u = np.linalg.solve(M.T, -w[list(B)])
        rhs = cv / model.hbar
        for i in range(td.n):
            if i in B:
                continue
            s = w[i] + sum(td.a[j][i] * u[j] for j in range(td.d))
            if s > 0:  # q_i t^{a_i} -> infinity, phi_i -> 1
                rhs = rhs - np.array([td.a[j][i] for j in range(td.d)])
        phiB = np.linalg.solve(M.astype(complex), rhs)
        if np.any(np.abs(1.0 - phiB) < 1e-10) or np.any(np.abs(phiB) < 1e-12):
            continue
        y = phiB / (1.0 - phiB)
        ly = np.log(y / np.array([model.qn[i] for i in B]))
        lt = np.linalg.solve(M.T.astype(complex), ly)
        starts.append(lt)
    return starts


def _tropical_scale(model):
    """Scaling exponent lam such that q_lam = |q|^lam e^{i arg q} makes every
    vertex's complement factors strongly asymptotic (all tropical signs
    |s_i| >= 6 after scaling).  None if the data is tropically degenerate."""
    from .arrangement import vertices
    td = model.td
    w = np.log(np.abs(model.qn))
    smin = np.inf
    for v in vertices(td):
        B = v.basis
        M = np.array([[td.a[j][i] for i in B] for j in range(td.d)],
                     dtype=float)
        try:
            u = np.linalg.solve(M.T, -w[list(B)])
        except np.linalg.LinAlgError:
            return None
        for i in range(td.n):
            if i in B:
                continue
            s = abs(w[i] + sum(td.a[j][i] * u[j] for j in range(td.d)))
            smin = min(smin, s)
    if not np.isfinite(smin) or smin < 1e-9:
        return None
    lam = max(1.0, 6.0 / smin)
    mmax = np.abs(model.qn).max()
    if mmax < 1.0:
        lam = max(lam, math.log(1e-3) / math.log(mmax))
    return lam


def _homotopy_roots(model, expected):
    """Track the critical points from the tropical limit q_small back to q
    along the log-linear path returned roots, or None if tracking failed."""
    td = model.td
    lam = _tropical_scale(model)
    if lam is None:
        return None
    qt = np.abs(model.qn) ** lam * np.exp(1j * np.angle(model.qn))

    def model_at(s):
        q = np.abs(model.qn) ** ((1 - s) * lam + s) * np.exp(
            1j * np.angle(model.qn))
        return MirrorModel(td, model.hbar, model.cvals, q)

    m0 = MirrorModel(td, model.hbar, model.cvals, qt)
    roots = []
    for st in _vertex_starts(m0):
        x = _newton_logt(m0, np.array(st, dtype=complex))
        if x is None:
            return None
        roots.append(x)
    if len(roots) != expected or _log_collision(roots):
        return None
    s, ds = 0.0, 1.0 / 16
    while s < 1.0 - 1e-12:
        step = min(ds, 1.0 - s)
        m_next = model_at(s + step)
        nxt = []
        okall = True
        for x in roots:
            x2 = _newton_logt(m_next, np.array(x), iters=14)
            if x2 is None or np.max(np.abs(x2 - x)) > 1.5:
                okall = False
                break
            nxt.append(x2)
        if okall and not _log_collision(nxt):
            roots = nxt
            s += step
            ds = min(ds * 2.0, 0.25)
        else:
            ds *= 0.5
            if ds < 1.0 / 4096:
                return None
    return [tuple(np.exp(x)) for x in roots]


def _newton_logt(model, x, iters=60, tol=1e-13):
    for _ in range(iters):
        if np.max(np.abs(x.real)) > 700.0:
            return None
        try:
            with np.errstate(all="ignore"):
                F = _crit_F(model, tuple(np.exp(x)))
        except DegenerateModel:
            return None
        if not np.all(np.isfinite(F)):
            return None
        if np.max(np.abs(F)) < tol:
            return x
        try:
            with np.errstate(all="ignore"):
                step = np.linalg.solve(_crit_J(model, tuple(np.exp(x))), F)
        except (np.linalg.LinAlgError, DegenerateModel):
            return None
        if not np.all(np.isfinite(step)):
            return None
        norm = np.max(np.abs(step))
        if norm > 2.0:
            step = step * (2.0 / norm)
        x = x - step
    return None


def _log_collision(xs, tol=1e-6):
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            d = xs[a] - xs[b]
            # same t iff log t differs by 2 pi i integers
            if (np.max(np.abs(d.real)) < tol
                    and np.max(np.abs(d.imag - TWOPI * np.round(
                        d.imag / TWOPI))) < tol):
                return True
    return False


def _critical_d2(model, seed, budget):
    expected = _expected_count(model.td)
    tracked = _homotopy_roots(model, expected)
    if tracked is not None:
        out = [_newton_polish(model, t) for t in tracked]
        out.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9),
                                round(t[1].real, 9), round(t[1].imag, 9)))
        return out
    return _critical_d2_multistart(model, seed, budget, expected)


def _critical_d2_multistart(model, seed, budget, expected):
    rng = np.random.default_rng(seed)
    found = []

    def safe_F(x):
        if np.max(np.abs(x.real)) > 40.0:
            return None
        try:
            with np.errstate(all="ignore"):
                F = _crit_F(model, tuple(np.exp(x)))
        except DegenerateModel:
            return None
        if not np.all(np.isfinite(F)):
            return None
        return F

    queue = _vertex_starts(model)
    mods = np.linspace(-3.0, 3.0, 5)
    phases = np.linspace(-math.pi, math.pi, 5, endpoint=False)
    queue += [np.array([m1 + 1j * p1, m2 + 1j * p2])
              for m1 in mods for p1 in phases
              for m2 in mods for p2 in phases]
    for trial in range(len(queue) + budget):
        if trial < len(queue):
            x = np.array(queue[trial], dtype=complex)
        else:
            x = (rng.uniform(-3.5, 3.5, 2)
                 + 1j * rng.uniform(-math.pi, math.pi, 2))
        ok = False
        for _ in range(80):
            F = safe_F(x)
            if F is None:
                break
            nF = np.max(np.abs(F))
            if nF < 1e-12:
                ok = True
                break
            try:
                with np.errstate(all="ignore"):
                    step = np.linalg.solve(_crit_J(model, tuple(np.exp(x))), F)
            except (np.linalg.LinAlgError, DegenerateModel):
                break
            if not np.all(np.isfinite(step)):
                break
            norm = np.max(np.abs(step))
            if norm > 3.0:  # trust region in log coordinates
                step = step * (3.0 / norm)
            lam = 1.0
            for _ in range(24):
                F2 = safe_F(x - lam * step)
                if F2 is not None and np.max(np.abs(F2)) < nF * (1 - 0.2 * lam):
                    break
                lam *= 0.5
            else:
                break
            x = x - lam * step
        if not ok:
            continue
        t = _newton_polish(model, tuple(np.exp(x)))
        if any(max(abs(t[0] - s[0]), abs(t[1] - s[1]))
               < 1e-7 * (1 + abs(t[0]) + abs(t[1])) for s in found):
            continue
        found.append(t)
        if len(found) == expected:
            break
    if len(found) != expected:
        raise IncompleteCriticalSet(
            f"found {len(found)} critical points, expected {expected}")
    found.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9),
                              round(t[1].real, 9), round(t[1].imag, 9)))
    return found


# -- spectra -------------------------------------------------------------------


def joint_eigenvalues(nc, qn, seed=0):
    """Joint spectrum of the commuting family A_1..A_n at a numeric q.

    Diagonalizes a seeded random combination and reads the diagonal of each
    conjugated A_i; retries the combination if the eigenbasis is ill
    conditioned.  Returns an array of shape (rank, n)."""
    As = nc.matrices_at(np.asarray(qn, dtype=complex))
    rng = np.random.default_rng(seed)
    for _ in range(8):
        r = rng.uniform(1.0, 2.0, nc.td.n)
        R = sum(ri * A for ri, A in zip(r, As))
        _, V = np.linalg.eig(R)
        sv = np.linalg.svd(V, compute_uv=False)
        if sv[-1] < 1e-8 * sv[0]:
            continue
        Vi = np.linalg.inv(V)
        lams = np.empty((nc.rank, nc.td.n), dtype=complex)
        okay = True
        for i, A in enumerate(As):
            C = Vi @ A @ V
            off = np.abs(C - np.diag(np.diag(C))).max()
            if off > 1e-7 * max(1.0, np.abs(C).max()):
                okay = False
                break
            lams[:, i] = np.diag(C)
        if okay:
            return lams
    raise ParameterDegeneracy("no well-conditioned joint eigenbasis found")


def compare_spectra(td, hbar, cvals, qn, seed=0, tol=1e-8):
    """Match joint eigenvalues of quantum multiplication against mirror
    critical values h phi_i(t*) by optimal assignment; returns a report."""
    from .connection import ConnectionFamily, NumericConnection
    from .quantum_ring import presentation
    fam = ConnectionFamily(presentation(td))
    nc = NumericConnection(fam, Fraction(hbar), [Fraction(c) for c in cvals])
    lams = joint_eigenvalues(nc, qn, seed=seed)
    model = MirrorModel(td, hbar, cvals, qn)
    crit = critical_points(model, seed=seed)
    mir = np.array([complex(hbar) * model.phi(t) for t in crit])
    cost = np.zeros((len(lams), len(mir)))
    for aa in range(len(lams)):
        for bb in range(len(mir)):
            cost[aa, bb] = np.max(np.abs(lams[aa] - mir[bb]))
    rows, cols = linear_sum_assignment(cost)
    dev = float(cost[rows, cols].max())
    return {
        "count": len(crit),
        "rank": nc.rank,
        "max_deviation": dev,
        "pass": bool(dev <= tol and len(crit) == nc.rank),
    }


# -- transport consistency -------------------------------------------------------


def _insertion_poly_for_monomial(mono):
    """Euler monomial E^mono acting on Omega as multiplication by a
    polynomial in (phi_i, h): returns {phi-exponent tuple: h-power dict}.

    Representation: dict mapping phi exponents e to dict {k: coeff} meaning
    coeff * h^k * phi^e.  Recursion: E_i (h^k phi^e) =
    e_i h^k (phi^e - phi^{e+delta_i}) + [then multiply by h phi_i when
    applying one more E_i to Omega itself]."""
    # poly: {exp tuple: {hpow: rational coeff}}
    n = len(mono)
    poly = {(0,) * n: {0: 1.0}}

    def mul_hphi(p, i):
        out = {}
        for e, hp in p.items():
            e2 = tuple(x + (1 if k == i else 0) for k, x in enumerate(e))
            d = out.setdefault(e2, {})
            for k, cf in hp.items():
                d[k + 1] = d.get(k + 1, 0.0) + cf
        return out

    def euler(p, i):
        out = {}
        for e, hp in p.items():
            if e[i] == 0:
                continue
            e_up = tuple(x + (1 if k == i else 0) for k, x in enumerate(e))
            for tgt, sgn in ((e, 1.0), (e_up, -1.0)):
                d = out.setdefault(tgt, {})
                for k, cf in hp.items():
                    d[k] = d.get(k, 0.0) + sgn * e[i] * cf
        return {e: hp for e, hp in out.items() if any(hp.values())}

    def add(p1, p2):
        out = {e: dict(hp) for e, hp in p1.items()}
        for e, hp in p2.items():
            d = out.setdefault(e, {})
            for k, cf in hp.items():
                d[k] = d.get(k, 0.0) + cf
        return out

    for i in range(n):
        for _ in range(mono[i]):
            poly = add(mul_hphi(poly, i), euler(poly, i))
    return poly


def make_insertion(mono, hbar):
    poly = _insertion_poly_for_monomial(mono)
    h = complex(hbar)
    flat = [(e, sum(cf * h ** k for k, cf in hp.items()))
            for e, hp in poly.items()]

    def f(phi):
        total = 0.0 + 0.0j
        for e, coeff in flat:
            term = coeff
            for i, ei in enumerate(e):
                if ei:
                    term *= phi[i] ** ei
            total += term
        return total

    return f


def period_frame(td, hbar, cvals, qn, quad_tol=1e-12, base_states=None):
    """Y matrix: rows = cycles, columns = E^{m_alpha} J for the staircase
    monomials m_alpha (exact integrand insertions, no finite differences).

    Returns (Y, base data) where base data lets the caller re-anchor branches
    at a nearby q for consistent comparisons."""
    from .quantum_ring import presentation
    pres = presentation(td)
    model = MirrorModel(td, hbar, cvals, qn)
    contours = cycle_basis(model)
    monos = pres.std
    inserts = [make_insertion(m, hbar) if any(m) else None for m in monos]
    Y = np.zeros((len(contours), len(monos)), dtype=complex)
    bases = []
    for g, cont in enumerate(contours):
        t0, _ = cont[0].at(0.0)
        st0 = (base_states[g] if base_states is not None
               else _principal_state(model, t0))
        for aidx, ins in enumerate(inserts):
            val, _ = period(model, cont, insertion=ins, tol=quad_tol,
                            state0=st0)
            Y[g, aidx] = val
        bases.append((t0, st0))
    return Y, bases


def gtilde_matrix(td, hbar, cvals, qn):
    """G~(q): columns are nabla^{m_alpha} e_0 evaluated at q, the change of
    frame between derivative-coordinates and the staircase frame."""
    from .connection import ConnectionFamily, NumericConnection
    from .quantum_ring import presentation
    pres = presentation(td)
    fam = ConnectionFamily(pres)
    F = fam.field
    cols = []
    secs = {(0,) * td.n: fam.unit_section()}
    for m in pres.std:
        if m not in secs:
            # peel one variable already present in a known prefix
            for i in range(td.n):
                if m[i]:
                    prev = tuple(x - (1 if k == i else 0)
                                 for k, x in enumerate(m))
                    if prev in secs:
                        secs[m] = fam.nabla(i, secs[prev])
                        break
            else:
                raise ValueError("staircase not closed under division")
        cols.append(secs[m])
    ncon = NumericConnection(fam, Fraction(hbar),
                             [Fraction(c) for c in cvals])
    qk = ncon.qk_of(np.asarray(qn, dtype=complex))
    vals = [complex(Fraction(hbar))] + [complex(Fraction(c)) for c in cvals]
    vals += list(qk)
    G = np.zeros((pres.rank, pres.rank), dtype=complex)
    for aidx, col in enumerate(cols):
        for r, entry in enumerate(col):
            G[r, aidx] = complex(F.evaluate(entry, vals)) if entry else 0.0
    return G


def transport_consistency(td, hbar, cvals, q0, q1, tol=1e-6, quad_tol=1e-12):
    """Criterion: T(q) := Y(q) G~(q)^{-1} satisfies T(q1) = T(q0) Phi^{-1}
    with Phi the parallel transport along the path, so the period vector at
    q1 is predicted by data at q0 after the single basis change T(q0).

    Compares predicted vs directly recomputed period vectors at q1 (branches
    continued from q0 so both sides use the same cycle identification)."""
    from .connection import (ConnectionFamily, NumericConnection, QPath,
                             transport_matrix)
    from .quantum_ring import presentation
    q0 = np.asarray(q0, dtype=complex)
    q1 = np.asarray(q1, dtype=complex)
    Y0, bases = period_frame(td, hbar, cvals, q0, quad_tol=quad_tol)
    G0 = gtilde_matrix(td, hbar, cvals, q0)
    T0 = Y0 @ np.linalg.inv(G0)
    pres = presentation(td)
    fam = ConnectionFamily(pres)
    nc = NumericConnection(fam, Fraction(hbar), [Fraction(c) for c in cvals])
    Phi = transport_matrix(nc, QPath([q0, q1]), rtol=1e-12, atol=1e-14)
    e0 = np.zeros(pres.rank, dtype=complex)
    e0[pres.std.index((0,) * td.n)] = 1.0
    predicted = T0 @ np.linalg.solve(Phi, e0)
    # direct recomputation at q1 on the continued branch
    model0 = MirrorModel(td, hbar, cvals, q0)
    model1 = MirrorModel(td, hbar, cvals, q1)
    contours1 = [_matched_contour(model0, model1, k)
                 for k in range(len(cycle_basis(model0)))]
    direct = np.zeros(len(contours1), dtype=complex)
    for g, cont in enumerate(contours1):
        t0b, st0 = bases[g]
        t1b, _ = cont[0].at(0.0)
        st1 = _continue_state(model0, st0, t0b, model1, t1b)
        direct[g], _ = period(model1, cont, tol=quad_tol, state0=st1)
    scale = max(np.abs(direct).max(), 1e-300)
    dev = float(np.abs(predicted - direct).max() / scale)
    return {"max_relative_deviation": dev, "pass": bool(dev <= tol)}
