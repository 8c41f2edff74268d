"""Noncommutative polynomials and critical-pair completion in a free algebra.

Words are tuples of generator indices.  Words are compared degree-
lexicographically with the first generator largest; a relation is oriented
so that its largest word rewrites to the remaining terms.
"""

from fractions import Fraction
from heapq import heappop, heappush

from .errors import NotFiniteWithinBound, PreconditionError
from .expr import ParseError, parse_with


def word_key(w):
    return (len(w), tuple(-i for i in w))


def _add_into(target, source, coeff=1):
    for w, c in source.items():
        nv = target.get(w, 0) + coeff * c
        if nv:
            target[w] = nv
        else:
            target.pop(w, None)


class _NCBuilder:
    def __init__(self, names):
        self.names = list(names)
        self.index = {n: i for i, n in enumerate(self.names)}

    def const(self, q):
        return {(): Fraction(q)} if q else {}

    def var(self, name, pos, parser):
        if name not in self.index:
            raise ParseError(f"unknown generator {name!r}", pos, parser.text)
        return {(self.index[name],): Fraction(1)}

    def add(self, a, b):
        out = dict(a)
        _add_into(out, b)
        return out

    def sub(self, a, b):
        out = dict(a)
        _add_into(out, b, -1)
        return out

    def mul(self, a, b):
        out = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                w = wa + wb
                nv = out.get(w, 0) + ca * cb
                if nv:
                    out[w] = nv
                else:
                    out.pop(w, None)
        return out

    def neg(self, a):
        return {w: -c for w, c in a.items()}

    def pow(self, a, n):
        out = {(): Fraction(1)}
        for _ in range(n):
            out = self.mul(out, a)
        return out


def parse_ncpoly(text, generators):
    return parse_with(text, _NCBuilder(generators))


def format_word(w, names):
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        e = j - i
        parts.append(names[w[i]] if e == 1 else f"{names[w[i]]}^{e}")
        i = j
    return "*".join(parts)


class RewritingSystem:
    """Rules ``lhs -> rhs`` with every word of ``rhs`` smaller than ``lhs``."""

    def __init__(self, ngens):
        self.ngens = ngens
        self.rules = {}

    def _find(self, w):
        """First (position, lhs) with lhs a subword of w, scanning left to right."""
        rules = self.rules
        lens = sorted({len(l) for l in rules})
        for start in range(len(w)):
            for L in lens:
                if start + L > len(w):
                    break
                sub = w[start:start + L]
                if sub in rules:
                    return start, sub
        return None

    def reduce(self, poly):
        p = dict(poly)
        out = {}
        while p:
            w = max(p, key=word_key)
            c = p.pop(w)
            hit = self._find(w)
            if hit is None:
                out[w] = c
                continue
            start, lhs = hit
            pre, post = w[:start], w[start + len(lhs):]
            for rw, rc in self.rules[lhs].items():
                nw = pre + rw + post
                nv = p.get(nw, 0) + c * rc
                if nv:
                    p[nw] = nv
                else:
                    p.pop(nw, None)
        return out

    def is_reducible(self, w):
        return self._find(w) is not None


def _overlaps(l1, l2):
    """Proper overlaps: a nonempty suffix of l1 equals a proper prefix of l2."""
    out = []
    for i in range(1, len(l1)):
        k = len(l1) - i
        if k < len(l2) and l1[i:] == l2[:k]:
            out.append(i)
    return out


def _growth(system, ngens, bound):
    counts = [1]
    layer = [()]
    for _ in range(bound):
        nxt = []
        for w in layer:
            for g in range(ngens):
                nw = w + (g,)
                # only suffixes can newly match
                if not any(nw[len(nw) - L:] in system.rules
                           for L in {len(l) for l in system.rules} if L <= len(nw)):
                    nxt.append(nw)
        counts.append(len(nxt))
        layer = nxt
        if not nxt:
            break
    return counts


def complete(generators, relations, degree_bound=30):
    """Complete the presentation; returns ``(system, normal_words)``.

    Raises ``NotFiniteWithinBound`` unless the irreducible words die out at
    some length not exceeding ``degree_bound``.
    """
    ngens = len(generators)
    system = RewritingSystem(ngens)
    queue = []          # (overlap length, counter, l1, l2, i)
    counter = [0]

    def push_overlaps(lhs):
        for other in list(system.rules):
            for a, b in ((lhs, other), (other, lhs)):
                for i in _overlaps(a, b):
                    length = i + len(b)
                    counter[0] += 1
                    heappush(queue, (length, counter[0], a, b, i))

    def add_poly(p):
        work = [p]
        while work:
            q = system.reduce(work.pop())
            if not q:
                continue
            lhs = max(q, key=word_key)
            lc = q[lhs]
            rhs = {w: -c / lc for w, c in q.items() if w != lhs}
            # rules whose left side becomes reducible are retired and re-added
            for old in [l for l in system.rules if _contains(l, lhs)]:
                poly = dict(system.rules.pop(old))
                poly = {w: -c for w, c in poly.items()}
                poly[old] = Fraction(1)
                work.append(poly)
            system.rules[lhs] = rhs
            push_overlaps(lhs)

    for rel in relations:
        add_poly(rel)

    postponed = []

    def process(bounded):
        while queue:
            item = heappop(queue)
            length, _, a, b, i = item
            if bounded and length > degree_bound:
                postponed.append(item)
                continue
            if a not in system.rules or b not in system.rules:
                continue
            # word = a + b[len(a)-i:] = a[:i] + b
            ra = dict(system.rules[a])
            rb = dict(system.rules[b])
            left = {w + b[len(a) - i:]: c for w, c in ra.items()}
            right = {a[:i] + w: c for w, c in rb.items()}
            _add_into(left, right, -1)
            add_poly(left)

    process(True)
    growth = _growth(system, ngens, degree_bound)
    if growth[-1] != 0 or len(growth) > degree_bound + 1:
        raise NotFiniteWithinBound(
            f"irreducible words still present at length {degree_bound}", tuple(growth))
    for item in postponed:
        heappush(queue, item)
    process(False)
    # confluence check over all overlaps of the final system
    for a in system.rules:
        for b in system.rules:
            for i in _overlaps(a, b):
                left = {w + b[len(a) - i:]: c for w, c in system.rules[a].items()}
                right = {a[:i] + w: c for w, c in system.rules[b].items()}
                _add_into(left, right, -1)
                if system.reduce(left):
                    raise AssertionError("completed rewriting system is not confluent")
    words = []
    layer = [()]
    while layer:
        words.extend(layer)
        nxt = []
        for w in layer:
            for g in range(ngens):
                nw = w + (g,)
                if not system.is_reducible(nw):
                    nxt.append(nw)
        layer = nxt
    words.sort(key=word_key)
    return system, words


def _contains(word, sub):
    L = len(sub)
    return any(word[i:i + L] == sub for i in range(len(word) - L + 1))


def parse_relations(generators, relations):
    if len(set(generators)) != len(generators) or not generators:
        raise PreconditionError("generators must be distinct and nonempty")
    return [parse_ncpoly(r, generators) for r in relations]
