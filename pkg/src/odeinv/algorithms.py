"""The postcondition and precondition chain algorithms.

`post` runs the double chain: a descending sequence of parameter-valuation
subspaces refined by remainder templates, paired with an ascending sequence
of instance ideals; it stops at the least step where both stabilize.  `pre`
iterates Lie derivatives of the postcondition generators until the generated
ideal stops growing.  Safety checking and invariant-ideal checking are thin
layers over these.
"""

from __future__ import annotations

from fractions import Fraction

from . import groebner
from .dynamics import (
    GroebnerReducer,
    Template,
    VectorField,
    fresh_parameters,
    lie_derivative,
    linear_combination_template,
    result_template,
)
from .groebner import Ideal, ResourceLimitError, buchberger, buchberger_extend
from .linalg import Subspace, nullspace
from .poly import Polynomial, SymbolUniverse


class ModeError(ValueError):
    """An operation required an exact vanishing-ideal mode."""


MODE_AUTO = "auto"
MODE_GENERATORS = "generators"
MODE_SINGLETON = "singleton"
MODE_GRAPH = "graph"
MODE_TRUSTED = "trusted"

_MODES = (MODE_AUTO, MODE_GENERATORS, MODE_SINGLETON, MODE_GRAPH, MODE_TRUSTED)


def triangular_bindings(generators, universe: SymbolUniverse):
    """Recognize generator sets that carve out a graph over free variables.

    Looks for an ordering g_1..g_k and distinct symbols z_1..z_k with
    g_i = c_i*z_i + h_i, c_i a nonzero rational and z_i absent from h_i;
    each pick substitutes z_i away in the remaining generators.  For such
    systems <Q> equals the full vanishing ideal of Var(Q), because modulo
    the bindings every polynomial has a unique representative over the free
    variables.

    Returns a list of (symbol, defining polynomial) in pick order, or None.
    To evaluate a point, bind free symbols and walk the list in reverse.
    """
    remaining = [g for g in generators if not g.is_zero()]
    bindings = []
    bound = set()
    while remaining:
        pick = None
        for idx, g in enumerate(remaining):
            for sym in sorted(g.symbols(), key=universe.index_of):
                i = universe.index_of(sym)
                lin = tuple(1 if j == i else 0 for j in range(len(universe)))
                coeff = g._terms.get(lin)
                if coeff is None:
                    continue
                if any(exps[i] and exps != lin for exps in g._terms):
                    continue
                pick = (idx, sym, coeff, lin)
                break
            if pick:
                break
        if pick is None:
            return None
        idx, sym, coeff, lin = pick
        g = remaining.pop(idx)
        h = Polynomial(
            g.universe,
            {e: -c / coeff for e, c in g._terms.items() if e != lin},
        )
        bindings.append((sym, h))
        bound.add(sym)
        new_remaining = []
        for other in remaining:
            other = other.substitute_symbol(sym, h)
            if not other.is_zero():
                new_remaining.append(other)
        remaining = new_remaining
    return bindings


def _is_singleton_pattern(generators, universe: SymbolUniverse) -> bool:
    covered = set()
    one = universe._one
    for g in generators:
        terms = dict(g._terms)
        terms.pop(one, None)
        if len(terms) != 1:
            return False
        ((exps, _),) = terms.items()
        if sum(exps) != 1:
            return False
        sym = universe.symbols[exps.index(1)]
        if sym in covered:
            return False
        covered.add(sym)
    return covered == set(universe.symbols)


class PreconditionAnalysis:
    """Resolved radical mode, reduced basis, and sampling structure."""

    __slots__ = (
        "generators",
        "requested_mode",
        "effective_mode",
        "exact",
        "basis",
        "bindings",
    )

    def __init__(self, generators, requested_mode, effective_mode, exact, basis, bindings):
        self.generators = tuple(generators)
        self.requested_mode = requested_mode
        self.effective_mode = effective_mode
        self.exact = exact
        self.basis = tuple(basis)
        self.bindings = bindings


class Precondition:
    """An algebraic precondition Var(Q) plus a vanishing-ideal policy.

    Modes: `generators` uses I = <Q>, always sound; `singleton` and `graph`
    certify I = Id(Var(Q)) from the shape of Q; `trusted` takes the caller's
    word that the generators span the full vanishing ideal (unchecked);
    `auto` picks the strongest applicable of the above.
    """

    __slots__ = ("generators", "mode")

    def __init__(self, generators, mode: str = MODE_AUTO):
        if mode not in _MODES:
            raise ValueError(f"unknown radical mode {mode!r}")
        self.generators = tuple(generators)
        self.mode = mode

    def analyze(self, universe: SymbolUniverse, **caps) -> PreconditionAnalysis:
        gens = [g for g in self.generators if not g.is_zero()]
        for g in gens:
            if g.universe is not universe:
                raise ValueError("precondition generator over a different universe")
        bindings = triangular_bindings(gens, universe)
        singleton = _is_singleton_pattern(gens, universe)
        mode = self.mode
        if mode == MODE_SINGLETON and not singleton:
            raise ModeError(
                "singleton mode requires generators x_i - c_i covering every "
                "state variable"
            )
        if mode == MODE_GRAPH and bindings is None:
            raise ModeError(
                "graph mode requires a triangular generator set (each "
                "generator solving one variable with a constant coefficient)"
            )
        if mode == MODE_AUTO:
            if singleton:
                mode = MODE_SINGLETON
            elif bindings is not None:
                mode = MODE_GRAPH
            else:
                mode = MODE_GENERATORS
        if mode == MODE_GENERATORS:
            # <0> = Id(R^N) and a unit ideal matches the empty variety, so
            # these two degenerate shapes are exact even in the sound mode.
            exact = not gens
        elif mode == MODE_TRUSTED:
            exact = True
        else:
            exact = True
        basis = buchberger(gens, **caps) if gens else []
        if not exact and basis and basis[0].degree() == 0:
            exact = True  # unit ideal: empty variety, Id(∅) is everything
        return PreconditionAnalysis(
            gens, self.mode, mode, exact, basis, bindings
        )


def sample_points(analysis: PreconditionAnalysis, universe: SymbolUniverse, count: int):
    """Rational points on the precondition variety, via the graph structure.

    Free variables draw from a fixed small-rational pool; bound variables
    are computed exactly.  Returns fewer than `count` points (possibly none)
    when the pattern is unavailable or the variety is empty.
    """
    if analysis.bindings is None:
        return []
    if any(p.degree() == 0 for p in analysis.basis):
        return []  # empty variety
    bound = {sym for sym, _ in analysis.bindings}
    free = [s for s in universe.symbols if s not in bound]
    pool = [
        Fraction(1),
        Fraction(2),
        Fraction(1, 2),
        Fraction(-1),
        Fraction(3, 2),
        Fraction(-1, 2),
        Fraction(3),
        Fraction(1, 3),
        Fraction(-2),
        Fraction(5, 2),
    ]
    points = []
    for s_idx in range(count):
        point = {}
        for k, sym in enumerate(free):
            point[sym] = pool[(s_idx + k) % len(pool)]
        for sym, h in reversed(analysis.bindings):
            point[sym] = h.evaluate(point) if not h.is_zero() else Fraction(0)
        if all(g.evaluate(point) == 0 for g in analysis.generators):
            points.append(point)
    return points


class PostResult:
    """Outcome of the postcondition chain."""

    __slots__ = (
        "template",
        "space",
        "result",
        "ideal",
        "iterations",
        "mode_exact",
        "analysis",
        "trace",
    )

    def __init__(self, template, space, result, ideal, iterations, mode_exact, analysis, trace):
        self.template = template
        self.space = space
        self.result = result
        self.ideal = ideal
        self.iterations = iterations
        self.mode_exact = mode_exact
        self.analysis = analysis
        self.trace = tuple(trace)


def post(
    precondition,
    template: Template,
    field: VectorField,
    *,
    max_iterations: int = 64,
    pair_budget: int = groebner.DEFAULT_PAIR_BUDGET,
    max_degree: int | None = None,
    verify_result: bool = True,
) -> PostResult:
    """Largest valuation space V with template[V] invariant from the
    precondition, plus the smallest invariant ideal containing template[V].

    In an exact mode both directions of the characterization hold; in the
    sound generator mode only the inclusions are guaranteed.
    """
    universe = field.universe
    if template.universe is not universe:
        raise ValueError("template and field use different universes")
    caps = {"pair_budget": pair_budget, "max_degree": max_degree}
    if isinstance(precondition, PreconditionAnalysis):
        analysis = precondition
    else:
        analysis = precondition.analyze(universe, **caps)
    reducer = GroebnerReducer(analysis.basis, universe)
    n = len(template.params)

    r0 = template.reduce_by(reducer)
    rows = [row for row in r0.coefficient_vectors() if any(row)]
    if rows:
        coords = nullspace(rows, n)
    else:
        coords = tuple(
            tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
        )
    basis_rows = [list(r) for r in coords]
    trace = [{"j": 0, "dim": len(basis_rows), "constraints": len(rows)}]

    def recompose(tmpls, rows_):
        params = fresh_parameters(len(rows_), "y")
        return [t.compose(rows_, params) for t in tmpls]

    chain = recompose([template], basis_rows) if len(basis_rows) < n else [template]
    j = 0
    j_gb = None
    j_generators: list = []
    while True:
        if j >= max_iterations:
            raise ResourceLimitError(
                f"postcondition chain exceeded {max_iterations} iterations"
            )
        nxt = chain[-1].lie(field)
        r = nxt.reduce_by(reducer)
        rows = [row for row in r.coefficient_vectors() if any(row)]
        entry = {"j": j + 1, "constraints": len(rows)}
        if rows:
            d = len(basis_rows)
            coords = nullspace(rows, d)
            assert len(coords) < d, "nonzero constraints must shrink the space"
            new_rows = []
            for yrow in coords:
                acc = [Fraction(0)] * n
                for y, brow in zip(yrow, basis_rows):
                    if y:
                        for i, b in enumerate(brow):
                            if b:
                                acc[i] += y * b
                new_rows.append(acc)
            basis_rows = new_rows
            chain = recompose(chain + [nxt], coords)
            j_gb = None
            entry.update({"dim": len(basis_rows), "v_stable": False})
            trace.append(entry)
            j += 1
            continue
        # V stabilized at this step; check the ideal chain.
        entry.update({"dim": len(basis_rows), "v_stable": True})
        if j_gb is None:
            j_generators = [
                inst
                for t in chain
                for inst in t.unit_instances()
                if not inst.is_zero()
            ]
            j_gb = buchberger(j_generators, **caps)
        new_gens = [g for g in nxt.unit_instances() if not g.is_zero()]
        stable = all(
            groebner.normal_form(g, j_gb).is_zero() if j_gb else g.is_zero()
            for g in new_gens
        )
        entry.update({"j_checked": True, "j_stable": stable, "j_generators": len(j_generators)})
        trace.append(entry)
        if stable:
            break
        j_generators = j_generators + new_gens
        j_gb = buchberger_extend(j_gb, new_gens, **caps) if j_gb else buchberger(new_gens, **caps)
        chain.append(nxt)
        j += 1

    space = Subspace.from_rows(basis_rows, n)
    out_template = result_template(template, space)
    ideal = Ideal.from_groebner_basis(
        universe, j_gb or [], generators=j_generators, **caps
    )
    result = PostResult(
        template, space, out_template, ideal, j, analysis.exact, analysis, trace
    )
    if verify_result:
        _verify_post(result, field)
    return result


def _verify_post(res: PostResult, field: VectorField):
    """Post-run soundness assertions: instances lie in J and J is Lie-closed."""
    gb = res.ideal.reduced_groebner_basis()
    for inst in res.result.unit_instances():
        if not inst.is_zero() and not (gb and groebner.normal_form(inst, gb).is_zero()):
            raise AssertionError("result-template instance escapes the invariant ideal")
    for g in gb:
        if not groebner.normal_form(lie_derivative(g, field), gb).is_zero():
            raise AssertionError("computed ideal is not Lie-closed")
    dims = [t["dim"] for t in res.trace]
    if any(a < b for a, b in zip(dims, dims[1:])):
        raise AssertionError("valuation-space chain must be descending")


class PreResult:
    """Outcome of the precondition chain."""

    __slots__ = ("ideal", "iterations", "derivative_closure")

    def __init__(self, ideal, iterations, derivative_closure):
        self.ideal = ideal
        self.iterations = iterations
        self.derivative_closure = tuple(derivative_closure)


def pre(
    postcondition,
    field: VectorField,
    *,
    max_iterations: int = 64,
    pair_budget: int = groebner.DEFAULT_PAIR_BUDGET,
    max_degree: int | None = None,
) -> PreResult:
    """Weakest algebraic precondition of Var(postcondition).

    Builds the ascending ideal chain generated by iterated Lie derivatives
    and returns the first stable ideal; its variety is the largest set of
    initial states keeping all postcondition polynomials at zero.
    """
    P = list(postcondition)
    if not P:
        raise ValueError("postcondition must contain at least one polynomial")
    universe = field.universe
    for p in P:
        if p.universe is not universe:
            raise ValueError("postcondition polynomial over a different universe")
    caps = {"pair_budget": pair_budget, "max_degree": max_degree}
    closure = [p for p in P if not p.is_zero()]
    gb = buchberger(closure, **caps)
    current = P
    for m in range(max_iterations):
        nxt = [lie_derivative(p, field) for p in current]
        fresh = [p for p in nxt if not p.is_zero()]
        if all(groebner.normal_form(p, gb).is_zero() if gb else p.is_zero() for p in fresh):
            ideal = Ideal.from_groebner_basis(universe, gb, generators=closure, **caps)
            return PreResult(ideal, m, closure)
        closure.extend(fresh)
        gb = buchberger_extend(gb, fresh, **caps) if gb else buchberger(fresh, **caps)
        current = nxt
    raise ResourceLimitError(
        f"precondition chain exceeded {max_iterations} iterations"
    )


HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"


class SafetyResult:
    """Verdict on `precondition implies [field] Var(postcondition)`."""

    __slots__ = ("verdict", "post_result", "postcondition", "witness")

    def __init__(self, verdict, post_result, postcondition, witness):
        self.verdict = verdict
        self.post_result = post_result
        self.postcondition = tuple(postcondition)
        self.witness = witness


def check_safety(
    precondition,
    postcondition,
    field: VectorField,
    **options,
) -> SafetyResult:
    """Decide the safety assertion by relativized strongest postcondition.

    The linear-combination template over the postcondition generators is
    propagated by `post`; the assertion holds iff every combination stays a
    conservation law, i.e. iff the returned valuation space is full.  With
    an exact vanishing ideal the negative answer is definite; otherwise a
    proper subspace is reported as inconclusive.
    """
    Q = [q for q in postcondition if not q.is_zero()]
    if not Q:
        raise ValueError("postcondition must contain a nonzero polynomial")
    template = linear_combination_template(Q)
    res = post(precondition, template, field, **options)
    if res.space.is_full():
        return SafetyResult(HOLDS, res, Q, None)
    if not res.mode_exact:
        return SafetyResult(INCONCLUSIVE, res, Q, None)
    witness = _find_witness(res, Q, field)
    return SafetyResult(FAILS, res, Q, witness)


def _find_witness(res: PostResult, Q, field: VectorField):
    """Best effort: a precondition point where some derivative of some
    postcondition polynomial is nonzero."""
    points = sample_points(res.analysis, field.universe, 5)
    horizon = res.iterations + 2
    for point in points:
        for q in Q:
            p = q
            for order in range(horizon + 1):
                value = p.evaluate(point)
                if value != 0:
                    return {
                        "point": point,
                        "polynomial": q,
                        "derivative_order": order,
                        "value": value,
                    }
                p = lie_derivative(p, field)
    return None


def check_invariant_ideal(ideal: Ideal, field: VectorField) -> bool:
    """True iff the Lie derivative of the ideal stays inside the ideal.

    Checking the reduced basis suffices: the derivative of h*g expands to
    h*L(g) + L(h)*g, both sides staying in the ideal when L(g) does.
    """
    gb = ideal.reduced_groebner_basis()
    for g in gb:
        d = lie_derivative(g, field)
        if d.is_zero():
            continue
        if not gb or not groebner.normal_form(d, gb).is_zero():
            return False
    return True


class WeakestPreconditionResult:
    """Result template for the postcondition and the ideal carving out the
    weakest precondition of its variety."""

    __slots__ = ("result", "ideal", "post_result")

    def __init__(self, result, ideal, post_result):
        self.result = result
        self.ideal = ideal
        self.post_result = post_result


def weakest_precondition_via_post(
    precondition,
    template: Template,
    field: VectorField,
    **options,
) -> WeakestPreconditionResult:
    """Weakest precondition of Var(template[V]) through one `post` run.

    Requires an exact vanishing-ideal mode for the seed precondition; the
    returned ideal's variety is then both the weakest precondition and the
    largest algebraic invariant inside the postcondition variety.
    """
    universe = field.universe
    if isinstance(precondition, PreconditionAnalysis):
        analysis = precondition
    else:
        caps = {
            k: v
            for k, v in options.items()
            if k in ("pair_budget", "max_degree")
        }
        analysis = precondition.analyze(universe, **caps)
    if not analysis.exact:
        raise ModeError(
            "weakest preconditions via the postcondition chain need an exact "
            f"vanishing ideal; mode {analysis.effective_mode!r} is only sound"
        )
    res = post(analysis, template, field, **options)
    return WeakestPreconditionResult(res.result, res.ideal, res)
