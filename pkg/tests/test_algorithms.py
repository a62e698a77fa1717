from fractions import Fraction

import pytest

from odeinv import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    Ideal,
    ModeError,
    Polynomial,
    Precondition,
    ResourceLimitError,
    Symbol,
    SymbolUniverse,
    VectorField,
    check_invariant_ideal,
    check_safety,
    complete_template,
    ideal_equal,
    lie_derivative,
    lie_iterate,
    linear_combination_template,
    post,
    pre,
    weakest_precondition_via_post,
)
from odeinv.algorithms import sample_points, triangular_bindings
from conftest import same_span


def test_post_running_example(running):
    U, (x, y), (X, Y), F = running
    res = post(Precondition([X - Y]), complete_template(U, [x, y], 2), F)
    assert res.iterations == 0
    assert res.space.dim == 3
    assert res.mode_exact
    assert [str(g) for g in res.ideal.reduced_groebner_basis()] == ["x - y"]
    assert same_span(
        res.result.unit_instances(),
        [Y * Y - X * X, X * Y - X * X, Y - X],
    )
    # both chains were verified one step past the answer
    last = res.trace[-1]
    assert last["j"] == 1 and last["v_stable"] and last["j_stable"]


def test_post_constraint_shape_matches_reference(running):
    # V is carved out by a1 = 0, a2 = -a3, a4 = -a5 - a6
    U, (x, y), _, F = running
    res = post(Precondition([Polynomial.variable(U, x) - Polynomial.variable(U, y)]),
               complete_template(U, [x, y], 2), F)
    V = res.space
    assert V.contains([0, -1, 1, 0, 0, 0])
    assert V.contains([0, 0, 0, -1, 1, 0])
    assert V.contains([0, 0, 0, -1, 0, 1])
    assert not V.contains([1, 0, 0, 0, 0, 0])
    assert not V.contains([0, 1, 1, 0, 0, 0])


def test_post_ghost_example(ghost):
    U, syms, (X, Y, X0, Y0), F = ghost
    res = post(
        Precondition([X - X0, Y - Y0]),
        complete_template(U, syms, 2),
        F,
    )
    gb = res.ideal.reduced_groebner_basis()
    assert len(gb) == 1
    expected = X * X - Y * Y - X0 * X0 + Y0 * Y0
    lead_coeff = expected.leading()[1]
    assert gb[0] == expected * (1 / lead_coeff)
    assert res.space.dim == 1


def test_post_trivial_precondition(running):
    U, (x, y), _, F = running
    res = post(Precondition([]), complete_template(U, [x, y], 2), F)
    assert res.mode_exact  # the zero ideal is the full vanishing ideal here
    assert res.space.is_zero()
    assert res.result.is_zero()
    assert res.ideal.is_zero_ideal()


def test_post_iteration_cap(running):
    U, (x, y), _, F = running
    with pytest.raises(ResourceLimitError):
        post(
            Precondition([]),
            complete_template(U, [x, y], 2),
            F,
            max_iterations=0,
        )


def test_post_chain_dimensions_descend(ghost):
    U, syms, (X, Y, X0, Y0), F = ghost
    res = post(Precondition([X - X0, Y - Y0]), complete_template(U, syms, 2), F)
    dims = [t["dim"] for t in res.trace]
    assert all(a >= b for a, b in zip(dims, dims[1:]))


def test_post_ideal_is_lie_closed(ghost):
    U, syms, (X, Y, X0, Y0), F = ghost
    res = post(Precondition([X - X0, Y - Y0]), complete_template(U, syms, 2), F)
    assert check_invariant_ideal(res.ideal, F)
    for inst in res.result.unit_instances():
        assert res.ideal.member(inst)


def test_ipsi_stabilizes_with_degree(ghost):
    # raising the ansatz degree beyond 2 must not change the answer, and
    # degree 1 finds nothing
    U, syms, _, F = ghost
    psi = Precondition(
        [
            Polynomial.variable(U, syms[0]) - Polynomial.variable(U, syms[2]),
            Polynomial.variable(U, syms[1]) - Polynomial.variable(U, syms[3]),
        ]
    )
    res1 = post(psi, complete_template(U, syms, 1), F)
    res2 = post(psi, complete_template(U, syms, 2), F)
    res3 = post(psi, complete_template(U, syms, 3), F)
    assert res1.ideal.is_zero_ideal()
    assert ideal_equal(res2.ideal, res3.ideal)


def test_pre_example(running):
    U, _, (X, Y), F = running
    q = X * X - X * Y
    res = pre([q], F)
    assert res.iterations == 1
    q1 = lie_derivative(q, F)
    q2 = lie_iterate(q, F, 2)
    assert ideal_equal(res.ideal, Ideal(U, [q, q1]))
    assert res.ideal.member(q2)
    assert list(res.derivative_closure) == [q, q1]


def test_pre_trivial_cases(running):
    U, _, (X, Y), F = running
    res0 = pre([Polynomial.zero(U)], F)
    assert res0.iterations == 0 and res0.ideal.is_zero_ideal()
    res1 = pre([Polynomial.constant(U, 1)], F)
    assert res1.iterations == 0
    assert [str(g) for g in res1.ideal.reduced_groebner_basis()] == ["1"]
    with pytest.raises(ValueError):
        pre([], F)


def test_check_safety_holds(running):
    U, _, (X, Y), F = running
    res = check_safety(Precondition([X - Y]), [X * X - X * Y], F)
    assert res.verdict == HOLDS
    assert res.post_result.space.is_full()


def test_check_safety_stationary_field(running):
    U, _, (X, Y), _ = running
    Fz = VectorField(U, [Polynomial.zero(U), Polynomial.zero(U)])
    res = check_safety(Precondition([X - Y]), [X - Y, 2 * X - 2 * Y], Fz)
    assert res.verdict == HOLDS


def test_check_safety_fails_with_witness(running):
    U, (x, y), (X, Y), F = running
    res = check_safety(Precondition([X - Y]), [X], F)
    assert res.verdict == FAILS
    w = res.witness
    assert w is not None
    assert w["value"] != 0
    point = w["point"]
    assert point[x] == point[y]  # the witness lies on the precondition


def test_check_safety_inconclusive_in_sound_mode(running):
    U, _, (X, Y), F = running
    res = check_safety(
        Precondition([X - Y], mode="generators"), [X], F
    )
    assert res.verdict == INCONCLUSIVE


def test_check_invariant_ideal(running):
    U, _, (X, Y), F = running
    assert check_invariant_ideal(Ideal(U, [X - Y]), F)
    assert check_invariant_ideal(Ideal(U, [Polynomial.constant(U, 1)]), F)
    Fc = VectorField(U, [Polynomial.constant(U, 1), Polynomial.zero(U)])
    assert not check_invariant_ideal(Ideal(U, [X]), Fc)


def test_weakest_precondition_cross_check(running):
    U, _, (X, Y), F = running
    seed = Precondition([X - 1, Y - 1])
    res = weakest_precondition_via_post(
        seed, linear_combination_template([X - Y]), F
    )
    assert ideal_equal(res.ideal, pre([X - Y], F).ideal)


def test_weakest_precondition_zero_space(running):
    U, (x, y), _, F = running
    res = weakest_precondition_via_post(
        Precondition([]), complete_template(U, [x, y], 2), F
    )
    assert res.result.is_zero()
    assert res.ideal.is_zero_ideal()


def test_weakest_precondition_rejects_sound_mode(running):
    U, _, (X, Y), F = running
    with pytest.raises(ModeError):
        weakest_precondition_via_post(
            Precondition([X - Y], mode="generators"),
            linear_combination_template([X - Y]),
            F,
        )


def test_mode_detection(running):
    U, _, (X, Y), _ = running
    assert Precondition([X - 1, Y - 2]).analyze(U).effective_mode == "singleton"
    assert Precondition([X - Y]).analyze(U).effective_mode == "graph"
    # the parabola y = x^2 is a graph too: its generator solves y exactly
    assert Precondition([X * X - Y]).analyze(U).effective_mode == "graph"
    # x^2 + y^2 has no linearly solvable variable; over the reals its
    # variety is the origin, whose vanishing ideal is strictly larger
    an = Precondition([X * X + Y * Y]).analyze(U)
    assert an.effective_mode == "generators" and not an.exact
    forced = Precondition([X - Y], mode="generators").analyze(U)
    assert forced.effective_mode == "generators" and not forced.exact
    trusted = Precondition([X * X + Y * Y], mode="trusted").analyze(U)
    assert trusted.exact
    with pytest.raises(ModeError):
        Precondition([X - Y], mode="singleton").analyze(U)
    with pytest.raises(ModeError):
        Precondition([X * X + Y * Y], mode="graph").analyze(U)


def test_unit_ideal_precondition_is_exact(running):
    U, _, (X, Y), _ = running
    an = Precondition([Polynomial.constant(U, 1)], mode="generators").analyze(U)
    assert an.exact  # empty variety: the unit ideal is its vanishing ideal


def test_triangular_bindings_nonlinear_graph(running):
    # v bound to a product of previously bound variables is still a graph
    syms = [Symbol(n) for n in ("v", "q", "u")]
    U = SymbolUniverse(syms)
    V, Q, Uu = (Polynomial.variable(U, s) for s in syms)
    bindings = triangular_bindings([V - Q * Uu, Q - 2], U)
    assert bindings is not None
    assert {s.name for s, _ in bindings} == {"v", "q"}
    assert triangular_bindings([V * V + Q * Q], U) is None


def test_sample_points_satisfy_generators(ghost):
    U, syms, (X, Y, X0, Y0), F = ghost
    pre_ = Precondition([X - X0, Y - Y0])
    an = pre_.analyze(U)
    pts = sample_points(an, U, 4)
    assert len(pts) == 4
    for p in pts:
        assert (X - X0).evaluate(p) == 0
        assert (Y - Y0).evaluate(p) == 0
    # no points for an empty variety
    bad = Precondition([Polynomial.constant(U, 1), X - X0]).analyze(U)
    assert sample_points(bad, U, 3) == []
