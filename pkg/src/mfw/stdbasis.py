"""Groebner and standard bases with cofactor certificates.

Under ``global-degrevlex`` the basis is computed with Buchberger's algorithm
(normal selection strategy, Gebauer-Moeller pair criteria) and every basis
element carries a polynomial cofactor row over the input generators.

Under ``local-negdegrevlex`` the leading term of a polynomial is its lowest
degree part, reduction need not terminate, and Mora's ecart-driven normal
form is used instead.  Certificates then take the form
``unit * s == sum(c_j * g_j)`` with ``unit(0) != 0``.
"""

import os
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush

from .errors import BudgetExceeded, CertificateUnavailable, NotMember, PreconditionError
from .polyring import (
    GLOBAL, LOCAL, Poly, format_poly, mono_div, mono_divides, mono_lcm, mono_mul,
)


@dataclass(frozen=True)
class Budget:
    max_degree: int = 40
    max_pairs: int = 100_000
    max_cochains: int = 200_000

    @classmethod
    def from_env(cls, env=None):
        """Read overrides such as ``MFW_BUDGET="max_degree=30,max_pairs=5000"``."""
        env = os.environ if env is None else env
        raw = env.get("MFW_BUDGET", "").strip()
        if not raw:
            return cls()
        values = {}
        for item in raw.split(","):
            if not item.strip():
                continue
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown budget key {key!r} in MFW_BUDGET")
            values[key] = int(val)
        return cls(**values)


@dataclass(frozen=True)
class InfiniteDimensional:
    """Returned (not raised) when the quotient has infinite dimension."""
    missing_variables: tuple

    def __bool__(self):
        return False


@dataclass
class IdealBasis:
    ring: object
    generators: tuple
    std: tuple
    certs: tuple = None
    pairs_reduced: int = 0
    _lms: tuple = field(default=None, repr=False)

    @property
    def leading_monomials(self):
        if self._lms is None:
            self._lms = tuple(s.lm() for s in self.std)
        return self._lms

    @property
    def is_local(self):
        return self.ring.ordering == LOCAL

    def serialize(self):
        return [format_poly(s) for s in self.std]


def _negkey(ring):
    if ring.ordering == GLOBAL:
        return lambda m: (-sum(m), tuple(reversed(m)))
    return lambda m: (sum(m), tuple(reversed(m)))


# -- global (terminating) reduction -------------------------------------------

def _reduce_global(f, reducers, track=False):
    """Full reduction of ``f`` by monic polynomials with distinct leading terms.

    Returns ``(remainder, quotients)`` with quotients a dict index -> terms.
    """
    ring = f.ring
    negkey = _negkey(ring)
    lms = [g.lm() for g in reducers]
    p = dict(f.terms)
    heap = [(negkey(m), m) for m in p]
    heapify(heap)
    rem = {}
    quot = {} if track else None
    while heap:
        _, m = heappop(heap)
        c = p.get(m)
        if not c:
            continue
        for idx, lm in enumerate(lms):
            if mono_divides(lm, m):
                break
        else:
            rem[m] = c
            del p[m]
            continue
        q = mono_div(m, lm)
        g = reducers[idx]
        coef = c / g.terms[lm]
        for gm, gc in g.terms.items():
            mm = mono_mul(gm, q)
            nv = p.get(mm, 0) - coef * gc
            if nv:
                if mm not in p:
                    heappush(heap, (negkey(mm), mm))
                p[mm] = nv
            else:
                p.pop(mm, None)
        if track:
            qd = quot.setdefault(idx, {})
            qd[q] = qd.get(q, 0) + coef
    return Poly._raw(ring, rem), quot


def _combine_cert(quot, certs, ring, ngens):
    rows = [ring.zero() for _ in range(ngens)]
    for idx, qterms in quot.items():
        qpoly = Poly(ring, qterms)
        for j, c in enumerate(certs[idx]):
            if c:
                rows[j] = rows[j] + qpoly * c
    return rows


def _spoly(f, g):
    lf, lg = f.lm(), g.lm()
    l = mono_lcm(lf, lg)
    qf, qg = mono_div(l, lf), mono_div(l, lg)
    cf, cg = 1 / f.lc(), 1 / g.lc()
    return f.mul_term(qf, cf) - g.mul_term(qg, cg), (qf, cf), (qg, cg)


def _gm_update(lm_of, active, pairs, h):
    """Gebauer-Moeller update; ``active`` and ``pairs`` are lists of indices."""
    lh = lm_of[h]
    cands = list(active)
    kept = []
    for pos, g1 in enumerate(cands):
        l1 = mono_lcm(lh, lm_of[g1])
        coprime = all(not (a and b) for a, b in zip(lh, lm_of[g1]))
        if coprime:
            kept.append((g1, True))
            continue
        redundant = False
        for g2 in cands[pos + 1:]:
            if mono_divides(mono_lcm(lh, lm_of[g2]), l1):
                redundant = True
                break
        if not redundant:
            for g2, _ in kept:
                if mono_divides(mono_lcm(lh, lm_of[g2]), l1):
                    redundant = True
                    break
        if not redundant:
            kept.append((g1, False))
    new_pairs = []
    for g1, g2 in pairs:
        l12 = mono_lcm(lm_of[g1], lm_of[g2])
        if (not mono_divides(lh, l12)
                or mono_lcm(lm_of[g1], lh) == l12
                or mono_lcm(lm_of[g2], lh) == l12):
            new_pairs.append((g1, g2))
    new_pairs.extend((g, h) for g, coprime in kept if not coprime)
    new_active = [g for g in active if not mono_divides(lh, lm_of[g])] + [h]
    return new_active, new_pairs


def _buchberger(gens, ring, with_certificates, budget):
    n = len(gens)
    polys, certs, lm_of = [], [], []
    active, pairs = [], []
    key = ring.key

    def add(p, cert):
        p_lc = p.lc()
        p = p.scale(1 / p_lc)
        if with_certificates:
            cert = [c.scale(1 / p_lc) for c in cert]
        if p.degree() > budget.max_degree:
            raise BudgetExceeded(f"basis element of degree {p.degree()} exceeds max_degree")
        polys.append(p)
        certs.append(cert)
        lm_of.append(p.lm())
        return len(polys) - 1

    for j, g in enumerate(gens):
        cert = [ring.one() if i == j else ring.zero() for i in range(n)] if with_certificates else None
        reducers = [polys[i] for i in active]
        r, quot = _reduce_global(g, reducers, with_certificates)
        if not r:
            continue
        if with_certificates:
            sub = _combine_cert({active[i]: q for i, q in quot.items()}, certs, ring, n)
            cert = [a - b for a, b in zip(cert, sub)]
        h = add(r, cert)
        active, pairs = _gm_update(lm_of, active, pairs, h)

    reduced_count = 0
    while pairs:
        best = min(pairs, key=lambda pr: (key(mono_lcm(lm_of[pr[0]], lm_of[pr[1]])), pr))
        pairs.remove(best)
        i, j = best
        if sum(mono_lcm(lm_of[i], lm_of[j])) > budget.max_degree:
            raise BudgetExceeded("S-pair degree exceeds max_degree")
        reduced_count += 1
        if reduced_count > budget.max_pairs:
            raise BudgetExceeded(f"more than {budget.max_pairs} pair reductions")
        s, (qi, ci), (qj, cj) = _spoly(polys[i], polys[j])
        reducers = [polys[a] for a in active]
        r, quot = _reduce_global(s, reducers, with_certificates)
        if not r:
            continue
        cert = None
        if with_certificates:
            cert = [a.mul_term(qi, ci) - b.mul_term(qj, cj) for a, b in zip(certs[i], certs[j])]
            sub = _combine_cert({active[a]: q for a, q in quot.items()}, certs, ring, n)
            cert = [a - b for a, b in zip(cert, sub)]
        h = add(r, cert)
        active, pairs = _gm_update(lm_of, active, pairs, h)

    # interreduce the minimal basis
    order = sorted(active, key=lambda a: key(lm_of[a]))
    final, final_certs = [], []
    for a in order:
        others = [polys[b] for b in order if b != a]
        tail = polys[a] - Poly._raw(ring, {lm_of[a]: polys[a].lc()})
        r, quot = _reduce_global(tail, others, with_certificates)
        p = r + Poly._raw(ring, {lm_of[a]: polys[a].lc()})
        final.append(p)
        if with_certificates:
            other_idx = [b for b in order if b != a]
            sub = _combine_cert({other_idx[i]: q for i, q in quot.items()}, certs, ring, n)
            final_certs.append(tuple(c - s for c, s in zip(certs[a], sub)))
    certs_out = tuple((ring.one(), c) for c in final_certs) if with_certificates else None
    return tuple(final), certs_out, reduced_count


# -- Mora normal form (local orderings) ---------------------------------------

def _mora_reduce(h, basis, rep=None, rep_mode=None, basis_reps=None):
    """Mora's weak normal form of ``h`` with respect to ``basis``.

    ``rep_mode`` selects what is tracked alongside the working polynomial:

    * ``None``: nothing.
    * ``"unit"``: a unit ``u`` with ``u * f == h (mod ideal)``; basis
      elements need no representation.
    * ``"cert"``: a pair ``(u, cofs)`` with ``u * h == sum(cofs_j * src_j)``;
      ``basis_reps`` holds the same kind of pair for each basis element.
    """
    T = [(g, g.ecart(), basis_reps[i] if basis_reps else None, False)
         for i, g in enumerate(basis)]
    steps = 0
    while h:
        lm_h = h.lm()
        best = None
        for item in T:
            if mono_divides(item[0].lm(), lm_h):
                if best is None or item[1] < best[1]:
                    best = item
        if best is None:
            break
        t, et, trep, is_h = best
        eh = h.ecart()
        if et > eh:
            T.append((h, eh, rep, True))
        q = mono_div(lm_h, t.lm())
        c = h.lc() / t.lc()
        new_h = h - t.mul_term(q, c)
        if rep_mode == "unit":
            if is_h:
                rep = rep - trep.mul_term(q, c)
        elif rep_mode == "cert":
            u_h, c_h = rep
            u_t, c_t = trep
            rep = (u_h * u_t,
                   [a * u_t - (b * u_h).mul_term(q, c) for a, b in zip(c_h, c_t)])
        h = new_h
        steps += 1
        if steps > 1_000_000:
            raise BudgetExceeded("Mora reduction did not finish")
    return h, rep


def _mora_std(gens, ring, with_certificates, budget):
    n = len(gens)
    basis, reps = [], []
    for j, g in enumerate(gens):
        basis.append(g.monic())
        if with_certificates:
            cofs = [ring.const(1 / g.lc()) if i == j else ring.zero() for i in range(n)]
            reps.append((ring.one(), cofs))
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    count = 0

    def pair_key(pr):
        l = mono_lcm(basis[pr[0]].lm(), basis[pr[1]].lm())
        return (sum(l), ring.key(l), pr)

    while pairs:
        best = min(pairs, key=pair_key)
        pairs.remove(best)
        i, j = best
        count += 1
        if count > budget.max_pairs:
            raise BudgetExceeded(f"more than {budget.max_pairs} pair reductions")
        f, g = basis[i], basis[j]
        if sum(mono_lcm(f.lm(), g.lm())) > budget.max_degree:
            raise BudgetExceeded("S-pair degree exceeds max_degree")
        s, (qf, cf), (qg, cg) = _spoly(f, g)
        rep = None
        if with_certificates:
            (uf, cfs), (ug, cgs) = reps[i], reps[j]
            # uf*f = sum cfs, ug*g = sum cgs  =>  uf*ug*s = ug*qf*cf*sum cfs - uf*qg*cg*sum cgs
            rep = (uf * ug, [(a * ug).mul_term(qf, cf) - (b * uf).mul_term(qg, cg)
                             for a, b in zip(cfs, cgs)])
        r, rep = _mora_reduce(s, basis, rep, "cert" if with_certificates else None,
                              reps if with_certificates else None)
        if not r:
            continue
        if r.low_degree() > budget.max_degree:
            raise BudgetExceeded("standard basis element exceeds max_degree")
        lc = r.lc()
        r = r.scale(1 / lc)
        if with_certificates:
            rep = (rep[0], [c.scale(1 / lc) for c in rep[1]])
        basis.append(r)
        reps.append(rep)
        k = len(basis) - 1
        pairs.extend((a, k) for a in range(k))

    # keep elements with minimal leading monomials
    keep = []
    for idx, b in enumerate(basis):
        lm = b.lm()
        dominated = False
        for jdx, c in enumerate(basis):
            if jdx == idx:
                continue
            lc_ = c.lm()
            if mono_divides(lc_, lm) and (lc_ != lm or jdx < idx):
                dominated = True
                break
        if not dominated:
            keep.append(idx)
    keep.sort(key=lambda a: (sum(basis[a].lm()), ring.key(basis[a].lm())))
    std = tuple(basis[a] for a in keep)
    certs = tuple((reps[a][0], tuple(reps[a][1])) for a in keep) if with_certificates else None
    return std, certs, count


# -- public operations ---------------------------------------------------------

def std_basis(gens, ring, with_certificates=False, budget=None):
    """Groebner basis (global ordering) or standard basis (local ordering).

    The result is verified before returning: every S-polynomial of the final
    basis reduces to zero, and every certificate replays exactly.
    """
    budget = budget or Budget.from_env()
    gens = tuple(g.in_ring(ring) for g in gens)
    if not gens or any(not g for g in gens):
        raise PreconditionError("generators must be nonzero")
    if ring.ordering == GLOBAL:
        std, certs, count = _buchberger(gens, ring, with_certificates, budget)
    else:
        std, certs, count = _mora_std(gens, ring, with_certificates, budget)
    basis = IdealBasis(ring, gens, std, certs, count)
    _verify(basis)
    return basis


def _verify(basis):
    ring = basis.ring
    std = basis.std
    for i in range(len(std)):
        for j in range(i + 1, len(std)):
            s, _, _ = _spoly(std[i], std[j])
            if ring.ordering == GLOBAL:
                r, _ = _reduce_global(s, std)
            else:
                r, _ = _mora_reduce(s, std)
            if r:
                raise AssertionError("standard basis verification failed: S-pair does not reduce")
    if basis.certs is not None:
        for s, (unit, cofs) in zip(std, basis.certs):
            total = ring.zero()
            for c, g in zip(cofs, basis.generators):
                if c:
                    total = total + c * g
            if total != unit * s:
                raise AssertionError("certificate replay failed")


def _pure_powers(basis):
    n = basis.ring.nvars
    best = [None] * n
    for lm in basis.leading_monomials:
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            i = support[0]
            if best[i] is None or lm[i] < best[i]:
                best[i] = lm[i]
        elif not support:
            return [0] * n
    return best


def quotient_basis(basis):
    """Standard monomials, or an :class:`InfiniteDimensional` marker."""
    n = basis.ring.nvars
    bounds = _pure_powers(basis)
    missing = tuple(basis.ring.variables[i] for i, b in enumerate(bounds) if b is None)
    if missing:
        return InfiniteDimensional(missing)
    lms = basis.leading_monomials
    out = []

    def rec(prefix, i):
        if i == n:
            m = tuple(prefix)
            if not any(mono_divides(l, m) for l in lms):
                out.append(m)
            return
        for e in range(bounds[i]):
            prefix.append(e)
            partial = tuple(prefix) + (0,) * (n - i - 1)
            if not any(mono_divides(l, partial) for l in lms):
                rec(prefix, i + 1)
            prefix.pop()

    rec([], 0)
    g = basis.ring.with_ordering(GLOBAL)
    out.sort(key=lambda m: g.key(m))
    return out


def _unit_inverse(u, order):
    """Inverse of a unit modulo terms of total degree >= order."""
    ring = u.ring
    u0 = u.constant_term()
    if not u0:
        raise ValueError("not a unit")
    v = (u - u0).scale(1 / u0)
    result = ring.one()
    power = ring.one()
    for _ in range(1, order + 1):
        power = (power * v).truncate(order)
        if not power:
            break
        result = result + power.scale(-1 if _ % 2 else 1)
    return result.truncate(order).scale(1 / u0)


def local_vanishing_order(basis):
    """Smallest N with every monomial of degree N in the ideal, or None."""
    q = quotient_basis(basis)
    if isinstance(q, InfiniteDimensional):
        return None
    return max((sum(m) for m in q), default=-1) + 1


def normal_form(f, basis, vanishing_order=None):
    """Normal form of ``f`` modulo the ideal.

    Global ordering: the classical fully reduced remainder.  Local ordering
    with a finite quotient: the exact class of ``f`` written in standard
    monomials (terms of degree >= N vanish since m^N lies in the ideal).
    Local ordering with an infinite quotient: Mora's weak normal form.
    """
    f = f.in_ring(basis.ring)
    if not basis.is_local:
        r, _ = _reduce_global(f, basis.std)
        return r
    N = vanishing_order if vanishing_order is not None else local_vanishing_order(basis)
    if N is None:
        r, _ = _mora_reduce(f, basis.std)
        return r
    ring = basis.ring
    result = {}
    h = f.truncate(N)
    while h:
        r, unit = _mora_reduce(h, basis.std, ring.one(), "unit")
        if not r:
            break
        r = (_unit_inverse(unit, N) * r).truncate(N)
        if not r:
            break
        lm = r.lm()
        c = r.lc()
        result[lm] = result.get(lm, 0) + c
        h = r - Poly._raw(ring, {lm: c})
    return Poly(ring, result)


@dataclass(frozen=True)
class LocalCertificate:
    """``unit * f == sum(cofactors_j * generators_j)`` with ``unit(0) != 0``."""
    unit: Poly
    cofactors: tuple


def lift_certificate(f, basis, allow_unit=False):
    """Cofactors ``c`` with ``f == sum(c_j * generators_j)``.

    Under a local ordering the membership witness involves a unit; it is
    returned as a :class:`LocalCertificate` when ``allow_unit`` is set,
    otherwise the unit must be a constant or ``CertificateUnavailable`` is
    raised.
    """
    ring = basis.ring
    f = f.in_ring(ring)
    gens = basis.generators
    n = len(gens)
    if basis.certs is None:
        raise CertificateUnavailable("basis was computed without certificates")
    if not basis.is_local:
        r, quot = _reduce_global(f, basis.std, True)
        if r:
            raise NotMember(f"normal form is {format_poly(r)}, not zero")
        rows = [ring.zero() for _ in range(n)]
        for idx, qterms in quot.items():
            qpoly = Poly(ring, qterms)
            for j, c in enumerate(basis.certs[idx][1]):
                if c:
                    rows[j] = rows[j] + qpoly * c
        total = ring.zero()
        for c, g in zip(rows, gens):
            total = total + c * g
        if total != f:
            raise AssertionError("certificate replay failed")
        return tuple(rows)
    # local: track f as an extra source so the final zero gives unit * f = sum c g
    zero = ring.zero()
    basis_reps = [(u, list(cofs) + [zero]) for u, cofs in basis.certs]
    rep = (ring.one(), [zero] * n + [ring.one()])
    r, rep = _mora_reduce(f, basis.std, rep, "cert", basis_reps)
    if r:
        raise NotMember(f"weak normal form is {format_poly(r)}, not zero")
    u, cofs = rep
    unit = -cofs[n]
    cofactors = tuple(cofs[:n])
    total = ring.zero()
    for c, g in zip(cofactors, gens):
        total = total + c * g
    if total != unit * f or not unit.constant_term():
        raise AssertionError("local certificate replay failed")
    if unit.degree() == 0:
        inv = 1 / unit.constant_term()
        return tuple(c.scale(inv) for c in cofactors)
    if allow_unit:
        return LocalCertificate(unit, cofactors)
    raise CertificateUnavailable("local membership certificate needs a non-constant unit")


def is_member(f, basis):
    return not normal_form(f, basis)


__all__ = [
    "Budget", "IdealBasis", "InfiniteDimensional", "LocalCertificate",
    "std_basis", "normal_form", "lift_certificate", "quotient_basis",
    "local_vanishing_order", "is_member",
]
