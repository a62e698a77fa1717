"""Multivariate division, Buchberger's algorithm, and ideal predicates.

The user-facing entry points (`divide`, `buchberger`, `reduce_basis`,
`Ideal`) exchange canonical `Polynomial` values.  Internally the engine
works on content-free integer term lists: reductions cross-multiply instead
of dividing, which keeps coefficients in Z and controls bignum growth, and
the exact rational normal form is recovered from the accumulated scale.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

from .poly import BlockElim, Lex, Polynomial, Symbol, SymbolUniverse


class ResourceLimitError(RuntimeError):
    """A configured pair budget or degree cap was exceeded.

    Raised instead of returning a wrong or partial answer.
    """


# ---------------------------------------------------------------------------
# integer term-list representation


def _intify(poly: Polynomial):
    """Sorted (exps, int) terms, content-free, positive leading coefficient."""
    items = poly.sorted_terms()
    if not items:
        return []
    denom = 1
    for _, c in items:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    nums = [(e, int(c * denom)) for e, c in items]
    g = 0
    for _, c in nums:
        g = gcd(g, abs(c))
    if nums[0][1] < 0:
        g = -g
    return [(e, c // g) for e, c in nums]


def _strip_content(items):
    g = 0
    for _, c in items:
        g = gcd(g, abs(c))
    if not g:
        return []
    if items[0][1] < 0:
        g = -g
    return [(e, c // g) for e, c in items]


class _GPoly:
    """Engine-side polynomial: integer terms split into lead and tail."""

    __slots__ = ("lead_exps", "lead_coeff", "tail", "degree")

    def __init__(self, terms):
        self.lead_exps, self.lead_coeff = terms[0]
        self.tail = terms[1:]
        self.degree = max(sum(e) for e, _ in terms)

    def terms(self):
        return [(self.lead_exps, self.lead_coeff)] + list(self.tail)


def _neg(key):
    return tuple(-v for v in key)


def _nf_int(terms, divisors, key):
    """Reduce integer terms by divisors; return (remainder_terms, scale).

    `scale` is the positive integer by which the dividend was cross-
    multiplied overall, so exact_remainder = remainder / scale.  The
    remainder is NOT content-stripped.
    """
    work = {}
    for e, c in terms:
        acc = work.get(e)
        if acc is None:
            work[e] = c
        else:
            acc += c
            if acc:
                work[e] = acc
            else:
                del work[e]
    heap = [(_neg(key(e)), e) for e in work]
    heapq.heapify(heap)
    emitted = []  # (exps, coeff, scale at emission)
    scale = 1
    while heap:
        _, e = heapq.heappop(heap)
        c = work.get(e)
        if not c:
            continue
        red = None
        for d in divisors:
            le = d.lead_exps
            for a, b in zip(le, e):
                if a > b:
                    break
            else:
                red = d
                break
        if red is None:
            del work[e]
            emitted.append((e, c, scale))
            continue
        del work[e]
        g = gcd(abs(c), red.lead_coeff)
        mult_work = red.lead_coeff // g
        mult_div = c // g
        if mult_work != 1:
            for k2 in work:
                work[k2] *= mult_work
            scale *= mult_work
        shift = tuple(x - y for x, y in zip(e, red.lead_exps))
        for de, dc in red.tail:
            ne = tuple(x + y for x, y in zip(de, shift))
            acc = work.get(ne)
            if acc is None:
                work[ne] = -mult_div * dc
                heapq.heappush(heap, (_neg(key(ne)), ne))
            else:
                acc -= mult_div * dc
                if acc:
                    work[ne] = acc
                else:
                    del work[ne]
    remainder = [(e, c * (scale // s)) for e, c, s in emitted]
    return remainder, scale


def _spoly_int(f: _GPoly, g: _GPoly):
    """Integer S-polynomial of two engine polynomials, content-free."""
    lcm = tuple(max(a, b) for a, b in zip(f.lead_exps, g.lead_exps))
    cf = g.lead_coeff
    cg = f.lead_coeff
    d = gcd(cf, cg)
    cf //= d
    cg //= d
    sf = tuple(a - b for a, b in zip(lcm, f.lead_exps))
    sg = tuple(a - b for a, b in zip(lcm, g.lead_exps))
    acc: dict = {}
    for e, c in f.terms():
        ne = tuple(a + b for a, b in zip(e, sf))
        acc[ne] = acc.get(ne, 0) + cf * c
    for e, c in g.terms():
        ne = tuple(a + b for a, b in zip(e, sg))
        v = acc.get(ne, 0) - cg * c
        if v:
            acc[ne] = v
        else:
            acc.pop(ne, None)
    return list(acc.items())


def _sorted_terms(items, key):
    return sorted(items, key=lambda t: key(t[0]), reverse=True)


def _to_poly(universe: SymbolUniverse, items, monic: bool) -> Polynomial:
    if not items:
        return Polynomial.zero(universe)
    items = _sorted_terms(items, universe.key)
    lead = items[0][1]
    if monic:
        return Polynomial(
            universe, {e: Fraction(c, lead) for e, c in items}
        )
    return Polynomial(universe, {e: Fraction(c) for e, c in items})


# ---------------------------------------------------------------------------
# user-facing multivariate division


class DivisionResult:
    """Outcome of dividing p by an ordered divisor list.

    Invariants: p = sum(quotients[i] * divisors[i]) + remainder, no monomial
    of the remainder is divisible by any divisor's leading term, and every
    quotient*divisor product has multidegree <= multideg(p).
    """

    __slots__ = ("remainder", "quotients")

    def __init__(self, remainder: Polynomial, quotients):
        self.remainder = remainder
        self.quotients = tuple(quotients)


def divide(p: Polynomial, divisors) -> DivisionResult:
    """Textbook multivariate division, deterministic in the divisor order."""
    universe = p.universe
    divisors = list(divisors)
    for d in divisors:
        if d.universe is not universe:
            raise ValueError("divisor from a different symbol universe")
        if d.is_zero():
            raise ValueError("zero polynomial among divisors")
    key = universe.key
    leads = [d.leading() for d in divisors]
    work = dict(p._terms)
    quotients = [dict() for _ in divisors]
    remainder: dict = {}
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        for i, (le, lc) in enumerate(leads):
            for a, b in zip(le, e):
                if a > b:
                    break
            else:
                shift = tuple(x - y for x, y in zip(e, le))
                coeff = c / lc
                q = quotients[i]
                q[shift] = q.get(shift, Fraction(0)) + coeff
                for de, dc in divisors[i].sorted_terms()[1:]:
                    ne = tuple(x + y for x, y in zip(de, shift))
                    acc = work.get(ne, Fraction(0)) - coeff * dc
                    if acc:
                        work[ne] = acc
                    else:
                        work.pop(ne, None)
                break
        else:
            remainder[e] = c
    return DivisionResult(
        Polynomial(universe, remainder),
        [Polynomial(universe, q) for q in quotients],
    )


def normal_form(p: Polynomial, divisors) -> Polynomial:
    """Exact remainder of p under division by the divisor list."""
    universe = p.universe
    gdivs = [_GPoly(_intify(d)) for d in divisors if not d.is_zero()]
    items = p.sorted_terms()
    if not items:
        return p
    denom = 1
    for _, c in items:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    rem, scale = _nf_int(
        [(e, int(c * denom)) for e, c in items], gdivs, universe.key
    )
    total = denom * scale
    return Polynomial(universe, {e: Fraction(c, total) for e, c in rem})


# ---------------------------------------------------------------------------
# Buchberger


def _lcm_exps(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides_exps(a, b):
    return all(x <= y for x, y in zip(a, b))


def _update_pairs(G, P, f, key):
    """Gebauer-Moeller pair update: installs Buchberger's coprime and chain
    criteria while adding f to the basis."""
    m = len(G)
    lmf = f.lead_exps
    kept = set()
    for i, j in P:
        lij = _lcm_exps(G[i].lead_exps, G[j].lead_exps)
        if (
            not _divides_exps(lmf, lij)
            or lij == _lcm_exps(G[i].lead_exps, lmf)
            or lij == _lcm_exps(G[j].lead_exps, lmf)
        ):
            kept.add((i, j))
    classes: dict = {}
    for i in range(m):
        classes.setdefault(_lcm_exps(G[i].lead_exps, lmf), []).append(i)
    minimal = []
    for lcm in sorted(classes, key=key):
        if all(not _divides_exps(other, lcm) for other in minimal):
            minimal.append(lcm)
    for lcm in minimal:
        coprime = any(
            lcm == tuple(a + b for a, b in zip(G[i].lead_exps, lmf))
            for i in classes[lcm]
        )
        if not coprime:
            kept.add((min(classes[lcm]), m))
    G.append(f)
    return kept


def _buchberger_core(seed, gens, key, pair_budget, max_degree, shuffle):
    """Complete `seed` (pairwise S-reduced already) with `gens` to a GB."""
    G: list = []
    P: set = set()
    for f in seed:
        G.append(f)
    for f in sorted(gens, key=lambda t: key(t.lead_exps)):
        rem, _ = _nf_int(f.terms(), G, key)
        rem = _strip_content(rem)
        if rem:
            P = _update_pairs(G, P, _GPoly(_sorted_terms(rem, key)), key)
    processed = 0
    while P:
        if shuffle is None:
            pair = min(
                P,
                key=lambda ij: (
                    key(_lcm_exps(G[ij[0]].lead_exps, G[ij[1]].lead_exps)),
                    ij,
                ),
            )
        else:
            pair = shuffle.choice(sorted(P))
        P.remove(pair)
        processed += 1
        if processed > pair_budget:
            raise ResourceLimitError(
                f"Buchberger pair budget of {pair_budget} exceeded"
            )
        s = _spoly_int(G[pair[0]], G[pair[1]])
        rem, _ = _nf_int(s, G, key)
        rem = _strip_content(rem)
        if rem:
            g = _GPoly(_sorted_terms(rem, key))
            if max_degree is not None and g.degree > max_degree:
                raise ResourceLimitError(
                    f"intermediate degree {g.degree} exceeds cap {max_degree}"
                )
            P = _update_pairs(G, P, g, key)
    return G


def _reduce_int_basis(G, key):
    """Minimalize and interreduce an integer GB; returns integer term lists."""
    order = sorted(range(len(G)), key=lambda i: key(G[i].lead_exps))
    minimal: list = []
    for i in order:
        if all(not _divides_exps(m.lead_exps, G[i].lead_exps) for m in minimal):
            minimal.append(G[i])
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        rem, _ = _nf_int(g.terms(), others, key)
        rem = _strip_content(rem)
        if rem:
            reduced.append(_GPoly(_sorted_terms(rem, key)))
    reduced.sort(key=lambda g: key(g.lead_exps), reverse=True)
    return reduced


DEFAULT_PAIR_BUDGET = 200_000


def buchberger(
    gens,
    *,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    max_degree: int | None = None,
    shuffle=None,
):
    """Reduced Groebner basis of the ideal generated by `gens`.

    Deterministic (normal selection, minimal lcm first); `shuffle` may be a
    `random.Random` to randomize pair selection, the reduced result is the
    same either way.  Raises ResourceLimitError when a cap is hit.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    universe = gens[0].universe
    for g in gens:
        if g.universe is not universe:
            raise ValueError("generators from different symbol universes")
    key = universe.key
    G = _buchberger_core(
        [], [_GPoly(_intify(g)) for g in gens], key, pair_budget, max_degree, shuffle
    )
    reduced = _reduce_int_basis(G, key)
    return [_to_poly(universe, g.terms(), monic=True) for g in reduced]


def buchberger_extend(
    gb,
    new_gens,
    *,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    max_degree: int | None = None,
):
    """Extend a known Groebner basis with additional generators.

    Pairs among the seed basis are skipped: they already reduce to zero.
    """
    new_gens = [g for g in new_gens if not g.is_zero()]
    gb = list(gb)
    if not gb:
        return buchberger(new_gens, pair_budget=pair_budget, max_degree=max_degree)
    if not new_gens:
        return list(gb)
    universe = gb[0].universe
    key = universe.key
    seed = [_GPoly(_intify(g)) for g in gb]
    G = _buchberger_core(
        seed,
        [_GPoly(_intify(g)) for g in new_gens],
        key,
        pair_budget,
        max_degree,
        None,
    )
    reduced = _reduce_int_basis(G, key)
    return [_to_poly(universe, g.terms(), monic=True) for g in reduced]


def reduce_basis(G):
    """Monic, auto-reduced form of a Groebner basis (unique per ideal)."""
    G = [g for g in G if not g.is_zero()]
    if not G:
        return []
    universe = G[0].universe
    key = universe.key
    reduced = _reduce_int_basis([_GPoly(_intify(g)) for g in G], key)
    return [_to_poly(universe, g.terms(), monic=True) for g in reduced]


def is_groebner_basis(G) -> bool:
    """Check that every S-polynomial reduces to zero (test helper)."""
    G = [g for g in G if not g.is_zero()]
    if len(G) < 2:
        return True
    key = G[0].universe.key
    gp = [_GPoly(_intify(g)) for g in G]
    for i in range(len(gp)):
        for j in range(i + 1, len(gp)):
            rem, _ = _nf_int(_spoly_int(gp[i], gp[j]), gp, key)
            if _strip_content(rem):
                return False
    return True


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """A polynomial ideal given by generators, with a cached reduced GB.

    The reduced basis is computed once on demand; generators and universe
    are immutable so the cache is single-assignment.
    """

    __slots__ = ("universe", "generators", "pair_budget", "max_degree", "_gb")

    def __init__(
        self,
        universe: SymbolUniverse,
        generators,
        *,
        pair_budget: int = DEFAULT_PAIR_BUDGET,
        max_degree: int | None = None,
    ):
        gens = tuple(g for g in generators if not g.is_zero())
        for g in gens:
            if g.universe is not universe:
                raise ValueError("generator from a different symbol universe")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "pair_budget", pair_budget)
        object.__setattr__(self, "max_degree", max_degree)
        object.__setattr__(self, "_gb", None)

    def __setattr__(self, *_):
        raise AttributeError("Ideal is immutable")

    @classmethod
    def from_groebner_basis(cls, universe, gb, generators=None, **caps) -> "Ideal":
        """Wrap an already reduced Groebner basis, optionally keeping the
        original generators for display."""
        ideal = cls(universe, gb if generators is None else generators, **caps)
        object.__setattr__(ideal, "_gb", tuple(gb))
        return ideal

    def reduced_groebner_basis(self):
        gb = self._gb
        if gb is None:
            gb = tuple(
                buchberger(
                    self.generators,
                    pair_budget=self.pair_budget,
                    max_degree=self.max_degree,
                )
            )
            object.__setattr__(self, "_gb", gb)
        return gb

    def member(self, p: Polynomial) -> bool:
        if p.is_zero():
            return True
        return normal_form(p, self.reduced_groebner_basis()).is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.reduced_groebner_basis()

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators)"


def member(p: Polynomial, ideal: Ideal) -> bool:
    return ideal.member(p)


def ideal_contains(outer: Ideal, inner: Ideal) -> bool:
    """outer ⊇ inner, decided by membership of inner's generators."""
    if outer.universe is not inner.universe:
        raise ValueError("ideals over different universes")
    return all(outer.member(g) for g in inner.generators)


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    """Equality via the unique reduced Groebner basis."""
    if a.universe is not b.universe:
        raise ValueError("ideals over different universes")
    return list(a.reduced_groebner_basis()) == list(b.reduced_groebner_basis())


def eliminate_parameters(G):
    """Parameter-free part of a GB under an elimination order.

    By the elimination property this is a Groebner basis of the ideal
    intersected with the state-variable subring.
    """
    if not G:
        return []
    universe = G[0].universe
    order = universe.order
    if isinstance(order, Lex):
        kinds = [s.kind for s in universe.symbols]
        np = sum(1 for k in kinds if k == Symbol.PARAM)
        if any(k == Symbol.PARAM for k in kinds[np:]):
            raise ValueError(
                "lex order eliminates parameters only when they precede "
                "all state variables"
            )
    elif not isinstance(order, BlockElim):
        raise ValueError(f"{order.name} is not an elimination order")
    return [
        g
        for g in G
        if all(s.kind != Symbol.PARAM for s in g.symbols())
    ]
