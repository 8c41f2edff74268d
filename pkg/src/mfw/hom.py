"""The even part of the endomorphism complex of a matrix factorization.

Even maps ``(alpha0, alpha1)`` are closed when ``alpha0 delta1 = delta1
alpha1`` and ``alpha1 delta0 = delta0 alpha0``; an odd map ``(h0, h1)`` with
``h0 : F0 -> F1`` and ``h1 : F1 -> F0`` has boundary
``(delta1 h0 + h1 delta0, delta0 h1 + h0 delta1)``.

Maps are handled as sparse vectors keyed by ``(block, row, col, monomial)``.
When the factorization admits a weighted grading (positive integer variable
weights and integer shifts on the basis vectors making W and every entry of
delta homogeneous) the complex splits into finite-dimensional strata, each
computed exactly.  Otherwise a total-degree window is used.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np
from scipy.optimize import linprog

from .errors import BudgetExceeded, NotStabilized, PreconditionError
from .findim import FinDimAlgebra
from .linalg import Echelon, kernel_and_image, solve_in_image, sparse_rank
from .mf import MFMorphism, euler_pairing, morphism_check, pm_add, pm_mul
from .polyring import Poly, monomials_up_to
from .stdbasis import Budget


# -- grading detection ---------------------------------------------------------

@dataclass(frozen=True)
class Grading:
    weights: tuple     # positive integer weight per variable
    p: tuple           # degrees of the F0 basis vectors
    q: tuple           # degrees of the F1 basis vectors
    c1: int            # degree of delta1
    c0: int            # degree of delta0
    wdeg: int          # weighted degree of W

    def wt(self, m):
        return sum(a * b for a, b in zip(m, self.weights))


def detect_grading(E):
    """Find a weighted grading of the factorization, verified exactly, or None."""
    n, r = E.ring.nvars, E.rank
    if r == 0:
        return None
    nv = n + 2 * r + 2        # v, p, q, c1, Wd
    iC1, iWd = n + 2 * r, n + 2 * r + 1
    rows = []

    def row():
        return [0.0] * nv

    for m in E.W.terms:
        rw = row()
        for i, e in enumerate(m):
            rw[i] += e
        rw[iWd] -= 1
        rows.append(rw)
    for t in range(r):
        for s in range(r):
            for m in E.delta1[t][s].terms:       # p_t + wt = q_s + c1
                rw = row()
                for i, e in enumerate(m):
                    rw[i] += e
                rw[n + t] += 1
                rw[n + r + s] -= 1
                rw[iC1] -= 1
                rows.append(rw)
            for m in E.delta0[s][t].terms:       # q_s + wt = p_t + Wd - c1
                rw = row()
                for i, e in enumerate(m):
                    rw[i] += e
                rw[n + r + s] += 1
                rw[n + t] -= 1
                rw[iWd] -= 1
                rw[iC1] += 1
                rows.append(rw)
    anchor = row()
    anchor[n] = 1
    rows.append(anchor)
    # extra column t bounds every weight; minimizing t first keeps weights balanced
    rows = [rw + [0.0] for rw in rows]
    ub = []
    for i in range(n):
        rw = [0.0] * (nv + 1)
        rw[i] = 1.0
        rw[nv] = -1.0
        ub.append(rw)
    bounds = [(1, None)] * n + [(None, None)] * (2 * r + 2) + [(1, None)]
    cost = [1.0] * n + [0.0] * (2 * r + 2) + [1000.0]
    res = linprog(cost, A_ub=np.array(ub), b_ub=np.zeros(n), A_eq=np.array(rows),
                  b_eq=np.zeros(len(rows)), bounds=bounds, method="highs")
    if res.status != 0:
        return None
    vals = [Fraction(float(x)).limit_denominator(10_000) for x in res.x[:nv]]
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    v, p, q = ints[:n], ints[n:n + r], ints[n + r:n + 2 * r]
    c1, wd = ints[iC1], ints[iWd]
    g = Grading(tuple(v), tuple(p), tuple(q), c1, wd - c1, wd)
    if any(x < 1 for x in v) or not _grading_ok(E, g):
        return None
    return g


def _grading_ok(E, g):
    r = E.rank
    if any(g.wt(m) != g.wdeg for m in E.W.terms):
        return False
    for t in range(r):
        for s in range(r):
            if any(g.p[t] + g.wt(m) != g.q[s] + g.c1 for m in E.delta1[t][s].terms):
                return False
            if any(g.q[s] + g.wt(m) != g.p[t] + g.c0 for m in E.delta0[s][t].terms):
                return False
    return True


class _WeightedMonomials:
    def __init__(self, weights):
        self.weights = weights
        self.cache = {}

    def of_weight(self, w):
        if w < 0:
            return []
        if w not in self.cache:
            out = []
            n = len(self.weights)

            def rec(i, remaining, prefix):
                if i == n - 1:
                    if remaining % self.weights[i] == 0:
                        out.append(tuple(prefix) + (remaining // self.weights[i],))
                    return
                for e in range(remaining // self.weights[i] + 1):
                    rec(i + 1, remaining - e * self.weights[i], prefix + [e])

            rec(0, w, [])
            self.cache[w] = out
        return self.cache[w]


# -- the complex -----------------------------------------------------------------

def _mono_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _deg_desc(k):
    # slot keys are (block, row, col, monomial); high degree first suits closure maps
    return (-sum(k[3]), k[3], k[0], k[1], k[2])


def _deg_asc(k):
    return (sum(k[3]), k[3], k[0], k[1], k[2])


class HomComplex:
    def __init__(self, E, grading="auto", budget=None):
        self.E = E
        self.ring = E.ring
        self.n = E.ring.nvars
        self.r = E.rank
        self.budget = budget or Budget.from_env()
        self.grading = detect_grading(E) if grading == "auto" else grading
        self.wm = _WeightedMonomials(self.grading.weights) if self.grading else None
        self.d1 = [[list(E.delta1[i][j].terms.items()) for j in range(self.r)] for i in range(self.r)]
        self.d0 = [[list(E.delta0[i][j].terms.items()) for j in range(self.r)] for i in range(self.r)]

    # slot enumeration ---------------------------------------------------------
    def _even_weight(self, blk, i, j, d):
        g = self.grading
        return (g.p[j] - g.p[i] + d) if blk == 0 else (g.q[j] - g.q[i] + d)

    def _odd_weight(self, blk, i, j, d):
        g = self.grading
        if blk == 0:     # h0[s][t], F0 -> F1 of degree d - c1
            return g.p[j] + d - g.c1 - g.q[i]
        return g.q[j] + d - g.c0 - g.p[i]    # h1[t][s], F1 -> F0 of degree d - c0

    def even_slots(self, d=None, max_degree=None):
        """Keys of even maps: stratum d (graded) or total degree < max_degree."""
        r = self.r
        out = []
        for blk in (0, 1):
            for i in range(r):
                for j in range(r):
                    if d is not None:
                        monos = self.wm.of_weight(self._even_weight(blk, i, j, d))
                        if max_degree is not None:
                            monos = [m for m in monos if sum(m) < max_degree]
                    else:
                        monos = monomials_up_to(self.n, max_degree)
                    out.extend((blk, i, j, m) for m in monos)
        return out

    def odd_slots(self, d=None, max_degree=None):
        r = self.r
        out = []
        for blk in (0, 1):
            for i in range(r):
                for j in range(r):
                    if d is not None:
                        monos = self.wm.of_weight(self._odd_weight(blk, i, j, d))
                        if max_degree is not None:
                            monos = [m for m in monos if sum(m) < max_degree]
                    else:
                        monos = monomials_up_to(self.n, max_degree)
                    out.extend((blk, i, j, m) for m in monos)
        return out

    # linear maps on slots -----------------------------------------------------
    def closure_image(self, key):
        """(alpha0 delta1 - delta1 alpha1, alpha1 delta0 - delta0 alpha0) of one slot."""
        blk, t, s, mu = key
        r = self.r
        out = {}

        def put(k, c):
            nv = out.get(k, 0) + c
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)

        if blk == 0:
            for c in range(r):
                for m, v in self.d1[s][c]:
                    put((0, t, c, _mono_add(mu, m)), v)
                for m, v in self.d0[c][t]:
                    put((1, c, s, _mono_add(mu, m)), -v)
        else:
            for c in range(r):
                for m, v in self.d1[c][t]:
                    put((0, c, s, _mono_add(mu, m)), -v)
                for m, v in self.d0[s][c]:
                    put((1, t, c, _mono_add(mu, m)), v)
        return out

    def boundary_image(self, key):
        """delta H + H delta for the odd map with a single monomial entry."""
        blk, t, s, mu = key
        r = self.r
        out = {}

        def put(k, c):
            nv = out.get(k, 0) + c
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)

        if blk == 0:      # h0 = E_ts: F0 -> F1
            for c in range(r):
                for m, v in self.d1[c][t]:
                    put((0, c, s, _mono_add(mu, m)), v)
                for m, v in self.d1[s][c]:
                    put((1, t, c, _mono_add(mu, m)), v)
        else:             # h1 = E_ts: F1 -> F0
            for c in range(r):
                for m, v in self.d0[s][c]:
                    put((0, t, c, _mono_add(mu, m)), v)
                for m, v in self.d0[c][t]:
                    put((1, c, s, _mono_add(mu, m)), v)
        return out

    # conversions ----------------------------------------------------------------
    def to_vector(self, m):
        out = {}
        for blk, mat in enumerate(m.blocks):
            for i, row in enumerate(mat):
                for j, p in enumerate(row):
                    for mono, c in p.terms.items():
                        out[(blk, i, j, mono)] = c
        return out

    def to_blocks(self, vec, odd=False):
        r = self.r
        terms = [[[{} for _ in range(r)] for _ in range(r)] for _ in range(2)]
        for (blk, i, j, mono), c in vec.items():
            terms[blk][i][j][mono] = c
        return tuple([[Poly(self.ring, terms[b][i][j]) for j in range(r)] for i in range(r)]
                     for b in range(2))

    def to_morphism(self, vec):
        return MFMorphism(self.E, self.E, "even", self.to_blocks(vec))

    def split_by_degree(self, vec):
        """Weighted-homogeneous components of an even map."""
        parts = {}
        g = self.grading
        for (blk, i, j, mono), c in vec.items():
            shift = (g.p[i] - g.p[j]) if blk == 0 else (g.q[i] - g.q[j])
            d = g.wt(mono) + shift
            parts.setdefault(d, {})[(blk, i, j, mono)] = c
        return parts

    def identity_vector(self):
        zero = (0,) * self.n
        out = {}
        for blk in (0, 1):
            for i in range(self.r):
                out[(blk, i, i, zero)] = Fraction(1)
        return out

    def degree_range(self, max_degree):
        """Strata d whose even slots contain a monomial of total degree < max_degree."""
        g = self.grading
        r = self.r
        offsets = [g.p[j] - g.p[i] for i in range(r) for j in range(r)]
        offsets += [g.q[j] - g.q[i] for i in range(r) for j in range(r)]
        top = (max_degree - 1) * max(g.weights)
        out = []
        for d in range(-max(offsets), top - min(offsets) + 1):
            if self.even_slots(d, max_degree):
                out.append(d)
        return out

    # cohomology of one window -----------------------------------------------------
    def window(self, d, max_degree, basis=True):
        """Closed maps and boundaries with entries of total degree < max_degree.

        ``d`` selects one weighted stratum (graded case) or ``None`` for the
        whole window.  Boundaries are the images dH of odd maps H of total
        degree < max_degree whose every term stays inside the window.  With
        ``basis=False`` only the dimensions are computed, from ranks:
        dim B = rank(dH) - rank(part of dH outside the window).
        """
        slots = self.even_slots(d, max_degree)
        hslots = self.odd_slots(d, max_degree)
        if max(len(slots), len(hslots)) > self.budget.max_cochains:
            raise BudgetExceeded(f"{max(len(slots), len(hslots))} unknowns exceed the budget")
        allowed = set(slots)
        if not basis:
            rank_z = sparse_rank((self.closure_image(k) for k in slots), _deg_desc)
            full, high = [], []
            for k in hslots:
                im = self.boundary_image(k)
                full.append(im)
                high.append({kk: c for kk, c in im.items() if kk not in allowed})
            dim_b = sparse_rank(full, _deg_asc) - sparse_rank(high, _deg_asc)
            return _Window(d, None, None, dim_z=len(slots) - rank_z, dim_b=dim_b)
        kernel, _ = kernel_and_image([self.closure_image(k) for k in slots], _deg_desc)
        Z = [{slots[i]: c for i, c in combo.items() if c} for combo in kernel]
        low, high = [], []
        for k in hslots:
            im = self.boundary_image(k)
            low.append({kk: c for kk, c in im.items() if kk in allowed})
            high.append({kk: c for kk, c in im.items() if kk not in allowed})
        if any(high):
            ker, _ = kernel_and_image(high, _deg_asc)
            images = []
            for combo in ker:
                v = {}
                for i, c in combo.items():
                    for k, x in low[i].items():
                        nv = v.get(k, 0) + c * x
                        if nv:
                            v[k] = nv
                        else:
                            v.pop(k, None)
                images.append(v)
        else:
            images = low
        B = Echelon(_deg_asc)
        for im in images:
            B.add(im)
        if len(B) > len(Z):
            raise AssertionError("boundaries exceed closed maps")
        return _Window(d, Z, B, dim_z=len(Z), dim_b=len(B))


@dataclass
class _Window:
    d: object
    Z: list
    B: Echelon
    dim_z: int = 0
    dim_b: int = 0
    reps: list = field(default_factory=list)
    classes: Echelon = None
    tagged: bool = False

    @property
    def dim(self):
        return self.dim_z - self.dim_b

    def choose_reps(self, first=None, start=0):
        """Representatives of Z/B; ``first`` (if given and nonzero mod B) comes first."""
        ech = self.B.copy()
        reps = []
        cands = ([first] if first is not None else []) + list(self.Z)
        for v in cands:
            if len(reps) == self.dim:
                break
            r, cb = ech.reduce(v, {start + len(reps): Fraction(1)})
            if r:
                ech.insert(r, cb)
                reps.append(v)
        self.reps = reps
        self.classes = ech
        return reps

    def coordinates(self, vec):
        """Coefficients on the representatives of the class of ``vec``, or None."""
        r, cb = self.classes.reduce(vec, {})
        if r:
            return None
        return {k: -c for k, c in cb.items() if c}


# -- homotopy decision ---------------------------------------------------------------

@dataclass
class HomotopyResult:
    verdict: str                 # "yes" | "no_up_to_D" | "inconclusive"
    witness: tuple = None        # (h0, h1) when verdict == "yes"
    jet_order: int = None
    message: str = ""


def _solve_homotopy(hc, vec, D):
    """H with total degree < D and dH == vec, as a slot vector, or None."""
    if not vec:
        return {}
    if hc.grading:
        total = {}
        for d, part in sorted(hc.split_by_degree(vec).items()):
            hslots = hc.odd_slots(d, D)
            if len(hslots) > hc.budget.max_cochains:
                raise BudgetExceeded("homotopy system too large")
            _, ech = kernel_and_image([hc.boundary_image(k) for k in hslots], _deg_asc)
            x = solve_in_image(ech, part)
            if x is None:
                return None
            for i, c in x.items():
                total[hslots[i]] = c
        return total
    hslots = hc.odd_slots(None, D)
    if len(hslots) > hc.budget.max_cochains:
        raise BudgetExceeded("homotopy system too large")
    _, ech = kernel_and_image([hc.boundary_image(k) for k in hslots], _deg_asc)
    x = solve_in_image(ech, vec)
    if x is None:
        return None
    return {hslots[i]: c for i, c in x.items()}


def homotopic(E, m, D=8, budget=None, hc=None):
    """Decide whether the even endomorphism ``m`` is null-homotopic.

    A witness H (entries of total degree < D, then < D+2) is replayed
    exactly before ``yes`` is returned; ``no_up_to_D`` means both windows
    are infeasible.
    """
    if m.parity != "even":
        raise PreconditionError("homotopic expects an even endomorphism")
    if not morphism_check(E, m):
        raise PreconditionError("map does not commute with the differential")
    hc = hc or HomComplex(E, budget=budget)
    vec = hc.to_vector(m)
    try:
        for jet in (D, D + 2):
            H = _solve_homotopy(hc, vec, jet)
            if H is not None:
                h0, h1 = hc.to_blocks(H)
                if not _replay(E, m, h0, h1):
                    raise AssertionError("homotopy witness failed replay")
                return HomotopyResult("yes", (h0, h1), jet)
    except BudgetExceeded as exc:
        return HomotopyResult("inconclusive", message=str(exc))
    return HomotopyResult("no_up_to_D", jet_order=D + 2)


def _replay(E, m, h0, h1):
    out0 = pm_add(pm_mul(E.delta1, h0), pm_mul(h1, E.delta0))
    out1 = pm_add(pm_mul(E.delta0, h1), pm_mul(h0, E.delta1))
    a0, a1 = m.blocks
    return out0 == a0 and out1 == a1


# -- contraction algebra ----------------------------------------------------------------

@dataclass
class ContractionAlgebraResult:
    algebra: FinDimAlgebra
    representatives: list
    jet_order_used: int
    stabilized: bool
    chi: int
    dims: dict                   # jet order -> dimension
    grading: Grading = None
    rep_degrees: list = None


def _strata(hc, D):
    return hc.degree_range(D) if hc.grading else [None]


def _max_total_degree(vec):
    return max((sum(k[3]) for k in vec), default=0)


def _window_dims(hc, D, windows):
    dims = {}
    for jet in (D, D + 2):
        total = 0
        for d in _strata(hc, jet):
            w = hc.window(d, jet, basis=False)
            if w.dim and jet == D:
                w = hc.window(d, jet)
            windows[(d, jet)] = w
            total += w.dim
        dims[jet] = total
    return dims


def hom_dimensions(E, D=8, budget=None):
    """Dimensions of the degree-zero Hom windows at jet orders D and D+2."""
    if E.rank == 0:
        return {D: 0, D + 2: 0}
    hc = HomComplex(E, budget=budget)
    dims = {}
    for jet in (D, D + 2):
        dims[jet] = sum(hc.window(d, jet, basis=False).dim for d in _strata(hc, jet))
    return dims


def contraction_algebra(E, ma, D=8, budget=None):
    """Degree-zero endomorphisms of E in the homotopy category, with products.

    Closed even maps with entries of total degree < D modulo boundaries of
    odd maps of total degree < D; the dimension must agree at D and D+2 and
    equal the Euler pairing before the algebra structure is computed.
    """
    if E.rank == 0:
        alg = FinDimAlgebra([], {}, [])
        return ContractionAlgebraResult(alg, [], D, True, 0, {D: 0, D + 2: 0})
    if not ma.origin_only:
        raise PreconditionError("contraction_algebra needs the global residue route")
    chi = euler_pairing(E, E, ma)
    hc = HomComplex(E, budget=budget)
    windows = {}
    dims = _window_dims(hc, D, windows)
    stabilized = dims[D] == dims[D + 2] == chi
    partial = ContractionAlgebraResult(None, [], D, stabilized, chi, dims, hc.grading)
    if not stabilized:
        raise NotStabilized(f"dimensions {dims} do not stabilize at chi = {chi}", partial)

    ident = hc.identity_vector()
    reps, rep_deg = [], []
    strata = _strata(hc, D)
    order = ([0] if 0 in strata else []) + [d for d in strata if d != 0] if hc.grading else [None]
    for d in order:
        w = windows[(d, D)]
        if not w.dim:
            continue
        chosen = w.choose_reps(ident if d in (0, None) else None, start=len(reps))
        reps.extend(chosen)
        rep_deg.extend([d] * len(chosen))
    if not reps or reps[0] != ident:
        raise AssertionError("identity is not a nonzero class")
    by_degree = {}
    for k, d in enumerate(rep_deg):
        by_degree.setdefault(d, []).append(k)

    def product_window(d, jet):
        key = (d, jet)
        if key not in windows or windows[key].Z is None:
            windows[key] = hc.window(d, jet)
        w = windows[key]
        if not w.tagged:
            idx = by_degree.get(d, [])
            if w.dim != len(idx):
                raise NotStabilized(f"window of degree {jet} in stratum {d} has dimension "
                                    f"{w.dim}, expected {len(idx)}", partial)
            ech = w.B.copy()
            for k in idx:
                r_, cb = ech.reduce(reps[k], {k: Fraction(1)})
                if not r_:
                    raise NotStabilized("representatives become dependent in a larger window", partial)
                ech.insert(r_, cb)
            w.classes = ech
            w.tagged = True
        return w

    dim = len(reps)
    table = {}
    morphs = [hc.to_morphism(v) for v in reps]
    for i in range(dim):
        for j in range(dim):
            prod = hc.to_vector(morphs[i].compose(morphs[j]))
            if not prod:
                continue
            d = rep_deg[i] + rep_deg[j] if hc.grading else None
            jet = max(D, _max_total_degree(prod) + 1)
            coords = product_window(d, jet).coordinates(prod)
            if coords is None:
                raise NotStabilized("a product leaves the span of the representatives", partial)
            if coords:
                table[(i, j)] = coords
    labels = ["1"] + [f"e{i}" for i in range(1, dim)]
    unit = [Fraction(int(i == 0)) for i in range(dim)]
    alg = FinDimAlgebra(labels, table, unit)
    result = ContractionAlgebraResult(alg, morphs, D, True, chi, dims, hc.grading, rep_deg)
    result._hc = hc
    result._product_window = product_window
    return result


def class_coordinates(result, m):
    """Coordinates of an even endomorphism on the representatives of ``result``."""
    hc = result._hc
    vec = hc.to_vector(m)
    parts = hc.split_by_degree(vec) if hc.grading else {None: vec}
    total = {}
    for d, part in parts.items():
        jet = max(result.jet_order_used, _max_total_degree(part) + 1)
        coords = result._product_window(d, jet).coordinates(part)
        if coords is None:
            raise NotStabilized("map is not in the span of the representatives")
        for k, c in coords.items():
            total[k] = total.get(k, 0) + c
    return [total.get(k, Fraction(0)) for k in range(len(result.representatives))]
