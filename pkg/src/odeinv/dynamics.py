"""Vector fields, Lie derivatives, and parameter-linear templates.

A template is a polynomial over the state variables whose coefficients are
linear forms in a disjoint parameter tuple.  Monomial keys live in the state
universe only; parameters never enter monomials, which keeps templates linear
by construction and lets the precondition basis reduce templates one state
monomial at a time.
"""

from __future__ import annotations

from fractions import Fraction

from . import groebner
from .linalg import LinearForm, Subspace
from .poly import (
    BlockElim,
    Monomial,
    Polynomial,
    Symbol,
    SymbolUniverse,
    as_fraction,
    monomials_up_to_degree,
)


class TemplateLinearityError(ValueError):
    """A polynomial claimed to be a template is not parameter-linear."""


class VectorField:
    """Drifts f_1..f_N aligned with the state variables of one universe."""

    __slots__ = ("universe", "state_vars", "drifts", "_lie_cache")

    def __init__(self, universe: SymbolUniverse, drifts):
        drifts = tuple(drifts)
        if len(drifts) != len(universe.symbols):
            raise ValueError("need exactly one drift per state variable")
        for sym in universe.symbols:
            if sym.kind != Symbol.STATE:
                raise ValueError("vector fields are defined over state variables only")
        for d in drifts:
            if d.universe is not universe:
                raise ValueError("drift from a different symbol universe")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "state_vars", universe.symbols)
        object.__setattr__(self, "drifts", drifts)
        object.__setattr__(self, "_lie_cache", {})

    def __setattr__(self, *_):
        raise AttributeError("VectorField is immutable")

    def drift_of(self, symbol: Symbol) -> Polynomial:
        return self.drifts[self.universe.index_of(symbol)]

    def lie_monomial(self, exps) -> dict:
        """Term map of the Lie derivative of a single monomial (cached)."""
        cached = self._lie_cache.get(exps)
        if cached is not None:
            return cached
        total: dict = {}
        for i, e in enumerate(exps):
            if not e:
                continue
            drift = self.drifts[i]
            if drift.is_zero():
                continue
            base = list(exps)
            base[i] = e - 1
            for de, dc in drift._terms.items():
                ne = tuple(a + b for a, b in zip(base, de))
                acc = total.get(ne)
                c = e * dc
                if acc is None:
                    total[ne] = c
                else:
                    acc = acc + c
                    if acc:
                        total[ne] = acc
                    else:
                        del total[ne]
        self._lie_cache[exps] = total
        return total

    def __repr__(self):
        names = ", ".join(s.name for s in self.state_vars)
        return f"VectorField({names})"


def lie_derivative(p: Polynomial, field: VectorField) -> Polynomial:
    """Syntactic Lie derivative <grad p, F>."""
    if p.universe is not field.universe:
        raise ValueError("polynomial and field use different universes")
    acc: dict = {}
    for exps, c in p._terms.items():
        for ne, dc in field.lie_monomial(exps).items():
            v = acc.get(ne)
            t = c * dc
            if v is None:
                acc[ne] = t
            else:
                v = v + t
                if v:
                    acc[ne] = v
                else:
                    del acc[ne]
    return Polynomial(p.universe, acc)


def lie_iterate(p: Polynomial, field: VectorField, j: int) -> Polynomial:
    """j-fold Lie derivative; j = 0 is the identity."""
    if j < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(j):
        p = lie_derivative(p, field)
    return p


class Template:
    """A polynomial with parameter-linear coefficients.

    Stored as {state exponent tuple: {parameter index: Fraction}}.
    """

    __slots__ = ("universe", "params", "_terms")

    def __init__(self, universe: SymbolUniverse, params, terms: dict):
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "params", tuple(params))
        clean = {}
        for exps, form in terms.items():
            form = {k: v for k, v in form.items() if v != 0}
            if form:
                clean[exps] = form
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("Template is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_instances(cls, universe, params, polys) -> "Template":
        """Sum of param_k * poly_k."""
        polys = list(polys)
        if len(polys) != len(params):
            raise ValueError("one polynomial per parameter required")
        terms: dict = {}
        for k, p in enumerate(polys):
            if p.universe is not universe:
                raise ValueError("instance from a different universe")
            for exps, c in p._terms.items():
                terms.setdefault(exps, {})[k] = c
        return cls(universe, params, terms)

    # -- views ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        """(Monomial, LinearForm) pairs, leading monomial first."""
        key = self.universe.key
        out = []
        for exps in sorted(self._terms, key=key, reverse=True):
            form = LinearForm(
                {self.params[k]: v for k, v in self._terms[exps].items()}
            )
            out.append((Monomial(self.universe, exps), form))
        return out

    def coefficient_vectors(self):
        """Rows (one per monomial, descending) of parameter coefficients."""
        key = self.universe.key
        n = len(self.params)
        rows = []
        for exps in sorted(self._terms, key=key, reverse=True):
            form = self._terms[exps]
            rows.append(
                tuple(form.get(k, Fraction(0)) for k in range(n))
            )
        return rows

    def max_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    # -- operations ---------------------------------------------------------

    def instantiate(self, valuation) -> Polynomial:
        """Substitute rationals for all parameters."""
        if isinstance(valuation, dict):
            v = [as_fraction(valuation[p]) for p in self.params]
        else:
            v = [as_fraction(x) for x in valuation]
        if len(v) != len(self.params):
            raise ValueError("valuation length does not match parameter count")
        terms: dict = {}
        for exps, form in self._terms.items():
            c = sum((coeff * v[k] for k, coeff in form.items()), Fraction(0))
            if c:
                terms[exps] = c
        return Polynomial(self.universe, terms)

    def instances(self, rows):
        """Instantiations at each of the given valuation rows."""
        return [self.instantiate(r) for r in rows]

    def unit_instances(self):
        """Instantiations at the standard basis of the parameter space."""
        n = len(self.params)
        cols: list = [dict() for _ in range(n)]
        for exps, form in self._terms.items():
            for k, c in form.items():
                cols[k][exps] = c
        return [Polynomial(self.universe, col) for col in cols]

    def lie(self, field: VectorField) -> "Template":
        """Lie derivative with linear expressions treated as constants."""
        if field.universe is not self.universe:
            raise ValueError("template and field use different universes")
        terms: dict = {}
        for exps, form in self._terms.items():
            for ne, dc in field.lie_monomial(exps).items():
                dst = terms.get(ne)
                if dst is None:
                    dst = {}
                    terms[ne] = dst
                for k, v in form.items():
                    acc = dst.get(k)
                    t = v * dc
                    if acc is None:
                        dst[k] = t
                    else:
                        acc = acc + t
                        if acc:
                            dst[k] = acc
                        else:
                            del dst[k]
        return Template(self.universe, self.params, terms)

    def compose(self, rows, new_params) -> "Template":
        """Reparametrize by valuations v = y . rows.

        Each new parameter y_k stands for the row rows[k] of old-parameter
        coordinates, so new coefficient k = sum_j form[j] * rows[k][j].
        """
        rows = [list(r) for r in rows]
        terms: dict = {}
        for exps, form in self._terms.items():
            dst = {}
            for k, row in enumerate(rows):
                c = Fraction(0)
                for j, v in form.items():
                    rj = row[j]
                    if rj:
                        c += v * rj
                if c:
                    dst[k] = c
            if dst:
                terms[exps] = dst
        return Template(self.universe, new_params, terms)

    def reduce_by(self, reducer: "GroebnerReducer") -> "Template":
        """Remainder template modulo the reducer's Groebner basis."""
        terms: dict = {}
        for exps, form in self._terms.items():
            for ne, dc in reducer.monomial_terms(exps).items():
                dst = terms.get(ne)
                if dst is None:
                    dst = {}
                    terms[ne] = dst
                for k, v in form.items():
                    acc = dst.get(k)
                    t = v * dc
                    if acc is None:
                        dst[k] = t
                    else:
                        acc = acc + t
                        if acc:
                            dst[k] = acc
                        else:
                            del dst[k]
        return Template(self.universe, self.params, terms)

    def as_polynomial(self, joint: SymbolUniverse) -> Polynomial:
        """Embed into a universe listing the parameters before the states."""
        np = len(self.params)
        for k, p in enumerate(self.params):
            if joint.symbols[k] is not p:
                raise ValueError("joint universe must list the parameters first")
        terms = {}
        for exps, form in self._terms.items():
            for k, c in form.items():
                unit = [0] * np
                unit[k] = 1
                terms[tuple(unit) + exps] = c
        return Polynomial(joint, terms)

    @classmethod
    def from_joint_polynomial(
        cls, p: Polynomial, nparams: int, state_universe: SymbolUniverse
    ) -> "Template":
        """Split a parameter-linear polynomial back into a template."""
        params = p.universe.symbols[:nparams]
        terms: dict = {}
        for exps, c in p._terms.items():
            ppart, spart = exps[:nparams], exps[nparams:]
            if sum(ppart) != 1:
                raise TemplateLinearityError(
                    "polynomial has a term of parameter degree "
                    f"{sum(ppart)}; templates must be parameter-linear"
                )
            k = ppart.index(1)
            terms.setdefault(spart, {})[k] = c
        return cls(state_universe, params, terms)

    def __eq__(self, other):
        return (
            isinstance(other, Template)
            and self.universe is other.universe
            and self.params == other.params
            and self._terms == other._terms
        )

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, inst in enumerate(self.unit_instances()):
            if inst.is_zero():
                continue
            parts.append(f"{self.params[k].name}*({inst})")
        return " + ".join(parts)

    __repr__ = __str__


def lie_template(template: Template, field: VectorField) -> Template:
    return template.lie(field)


def fresh_parameters(n: int, prefix: str = "a"):
    return tuple(Symbol(f"{prefix}{i + 1}", Symbol.PARAM) for i in range(n))


def complete_template(
    universe: SymbolUniverse,
    variables,
    degree: int,
    prefix: str = "a",
    exclude=(),
) -> Template:
    """One fresh parameter per monomial of total degree <= `degree`.

    Parameters are assigned in ascending (degree, order) sequence, so the
    first parameter always multiplies the constant monomial.  `exclude`
    drops specific monomials from the ansatz.
    """
    monos = monomials_up_to_degree(universe, variables, degree)
    monos.sort(key=lambda m: (m.degree(), universe.key(m.exps)))
    excluded = {m.exps for m in exclude}
    monos = [m for m in monos if m.exps not in excluded]
    params = fresh_parameters(len(monos), prefix)
    terms = {m.exps: {k: Fraction(1)} for k, m in enumerate(monos)}
    return Template(universe, params, terms)


def linear_combination_template(polys, prefix: str = "a") -> Template:
    """Template sum a_i * q_i over the given polynomials."""
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polynomial")
    universe = polys[0].universe
    params = fresh_parameters(len(polys), prefix)
    return Template.from_instances(universe, params, polys)


class GroebnerReducer:
    """Cached normal forms of state monomials against a reduced GB.

    Normal forms with respect to a Groebner basis are linear in the
    dividend, so reducing a template monomial-by-monomial equals dividing
    the whole template.
    """

    __slots__ = ("basis", "universe", "_cache")

    def __init__(self, basis, universe: SymbolUniverse):
        self.basis = tuple(basis)
        self.universe = universe
        self._cache: dict = {}

    def monomial_terms(self, exps) -> dict:
        cached = self._cache.get(exps)
        if cached is None:
            if not self.basis:
                cached = {exps: Fraction(1)}
            else:
                p = Polynomial(self.universe, {exps: Fraction(1)})
                cached = dict(groebner.normal_form(p, self.basis)._terms)
            self._cache[exps] = cached
        return cached

    def reduce(self, p: Polynomial) -> Polynomial:
        acc: dict = {}
        for exps, c in p._terms.items():
            for ne, dc in self.monomial_terms(exps).items():
                v = acc.get(ne)
                t = c * dc
                if v is None:
                    acc[ne] = t
                else:
                    v = v + t
                    if v:
                        acc[ne] = v
                    else:
                        del acc[ne]
        return Polynomial(p.universe, acc)


def template_remainder(template: Template, basis) -> Template:
    """Remainder template r = template mod basis; r[v] = template[v] mod basis."""
    reducer = GroebnerReducer(basis, template.universe)
    return template.reduce_by(reducer)


def template_remainder_via_division(
    template: Template, basis, state_order=None
) -> Template:
    """Oracle path: divide in Q[params, states] under an elimination order.

    Raises TemplateLinearityError when the remainder is not parameter-linear,
    which indicates the order does not dominate the states by the parameters.
    """
    state_universe = template.universe
    order = BlockElim(
        state_order if state_order is not None else state_universe.order
    )
    joint = SymbolUniverse(
        tuple(template.params) + state_universe.symbols, order
    )
    p = template.as_polynomial(joint)
    lifted = []
    for g in basis:
        terms = {
            (0,) * len(template.params) + exps: c
            for exps, c in g._terms.items()
        }
        lifted.append(Polynomial(joint, terms))
    rem = groebner.divide(p, lifted).remainder
    return Template.from_joint_polynomial(rem, len(template.params), state_universe)


def zero_constraints(template: Template):
    """Linear forms whose common vanishing makes the template instance zero."""
    key = template.universe.key
    out = []
    for exps in sorted(template._terms, key=key, reverse=True):
        out.append(
            LinearForm(
                {template.params[k]: v for k, v in template._terms[exps].items()}
            )
        )
    return out


def result_template(
    template: Template, space: Subspace, prefix: str = "b"
) -> Template:
    """Fresh-parameter template whose instances are exactly template[space].

    The k-th fresh parameter corresponds to the k-th row of `space.basis`.
    """
    if space.ambient_dim != len(template.params):
        raise ValueError("subspace ambient dimension must match parameter count")
    params = fresh_parameters(space.dim, prefix)
    restricted = template.compose(space.basis, params)
    return restricted
