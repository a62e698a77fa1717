"""System specification files: schema, validation, and model building.

A spec is a YAML document (JSON, being a YAML subset, is accepted
interchangeably) declaring the state variables, the vector field, an
optional algebraic precondition, one query, and options.  All polynomial
data are expression strings in the grammar of `parser`.
"""

from __future__ import annotations

from fractions import Fraction

import yaml

from .algorithms import MODE_AUTO, Precondition, _MODES
from .dynamics import Template, VectorField, fresh_parameters
from .parser import ParseError, parse_polynomial
from .poly import (
    BlockElim,
    GrevLex,
    Lex,
    Monomial,
    Symbol,
    SymbolUniverse,
    monomials_up_to_degree,
)

QUERY_KINDS = ("post", "pre", "check", "invariant")
TIERS = ("quick", "extended", "data-only")


class SpecError(ValueError):
    """A malformed or inconsistent system specification."""


def _require(cond, message):
    if not cond:
        raise SpecError(message)


def _as_fraction_option(value, name):
    if isinstance(value, bool) or value is None:
        raise SpecError(f"{name} must be a number or exact string")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"{name}: {exc}") from exc
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    raise SpecError(f"{name} must be a number or exact string")


class NumericSpec:
    """Settings for the trajectory cross-check harness.

    `points`, when given, replaces pattern-based sampling with explicit
    rational start points (each a full variable binding).
    """

    __slots__ = ("enabled", "samples", "horizon", "step", "tolerance", "points")

    def __init__(self, enabled=False, samples=3, horizon=Fraction(1),
                 step=Fraction(1, 256), tolerance=1e-6, points=None):
        self.enabled = enabled
        self.samples = samples
        self.horizon = horizon
        self.step = step
        self.tolerance = tolerance
        self.points = points

    @classmethod
    def from_dict(cls, d):
        if d is None:
            return cls()
        _require(isinstance(d, dict), "numeric_check must be a mapping")
        known = {"enabled", "samples", "horizon", "step", "tolerance", "points"}
        unknown = set(d) - known
        _require(not unknown, f"unknown numeric_check keys: {sorted(unknown)}")
        points = d.get("points")
        if points is not None:
            _require(
                isinstance(points, list)
                and all(isinstance(p, dict) for p in points),
                "numeric_check points must be a list of variable bindings",
            )
            points = [
                {str(k): _as_fraction_option(v, f"point value for {k}") for k, v in p.items()}
                for p in points
            ]
        return cls(
            enabled=bool(d.get("enabled", True)),
            samples=int(d.get("samples", 3)),
            horizon=_as_fraction_option(d.get("horizon", 1), "horizon"),
            step=_as_fraction_option(d.get("step", "1/256"), "step"),
            tolerance=float(d.get("tolerance", 1e-6)),
            points=points,
        )


class SystemSpec:
    """Parsed but not yet model-checked specification document."""

    def __init__(self, data: dict, source: str = "<spec>"):
        _require(isinstance(data, dict), "specification must be a mapping")
        self.source = source
        known = {
            "name", "description", "tier", "variables", "order", "field",
            "precondition", "query", "options", "numeric_check",
        }
        unknown = set(data) - known
        _require(not unknown, f"unknown top-level keys: {sorted(unknown)}")
        self.name = str(data.get("name", "unnamed"))
        self.description = str(data.get("description", ""))
        self.tier = data.get("tier", "quick")
        _require(self.tier in TIERS, f"tier must be one of {TIERS}")

        variables = data.get("variables")
        _require(
            isinstance(variables, list) and variables,
            "variables must be a non-empty list",
        )
        names = [str(v) for v in variables]
        _require(len(set(names)) == len(names), "duplicate variable names")
        self.variables = names

        order = data.get("order", "lex")
        _require(order in ("lex", "grevlex"), "order must be lex or grevlex")
        self.order = order

        field = data.get("field")
        _require(isinstance(field, dict), "field must map variables to drifts")
        missing = [v for v in names if v not in field]
        _require(not missing, f"missing drifts for {missing}")
        extra = [v for v in field if v not in names]
        _require(not extra, f"drifts for undeclared variables {extra}")
        self.field = {str(k): str(v) for k, v in field.items()}

        pre = data.get("precondition") or {}
        _require(isinstance(pre, dict), "precondition must be a mapping")
        unknown = set(pre) - {"generators", "mode"}
        _require(not unknown, f"unknown precondition keys: {sorted(unknown)}")
        self.precondition_generators = [str(g) for g in pre.get("generators", [])]
        self.precondition_mode = str(pre.get("mode", MODE_AUTO))
        _require(
            self.precondition_mode in _MODES,
            f"precondition mode must be one of {_MODES}",
        )

        query = data.get("query")
        _require(isinstance(query, dict), "query must be a mapping")
        kind = query.get("kind")
        _require(kind in QUERY_KINDS, f"query kind must be one of {QUERY_KINDS}")
        self.query_kind = kind
        self.query = dict(query)

        options = data.get("options") or {}
        _require(isinstance(options, dict), "options must be a mapping")
        unknown = set(options) - {"max_iterations", "pair_budget", "max_degree"}
        _require(not unknown, f"unknown option keys: {sorted(unknown)}")
        self.max_iterations = int(options.get("max_iterations", 64))
        self.pair_budget = int(options.get("pair_budget", 200_000))
        md = options.get("max_degree")
        self.max_degree = None if md is None else int(md)

        self.numeric = NumericSpec.from_dict(data.get("numeric_check"))

    @classmethod
    def from_text(cls, text: str, source: str = "<spec>") -> "SystemSpec":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise SpecError(f"{source}: not valid YAML/JSON: {exc}") from exc
        return cls(data, source)

    @classmethod
    def load(cls, path) -> "SystemSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read(), source=str(path))

    def build(self) -> "BuiltSystem":
        return BuiltSystem(self)


def _parse_monomial(text, universe, what):
    p = _parse(text, universe, what)
    terms = p.sorted_terms()
    if len(terms) != 1 or terms[0][1] != 1:
        raise SpecError(f"{what}: {text!r} is not a monomial")
    return Monomial(universe, terms[0][0])


def _parse(text, universe, what):
    try:
        return parse_polynomial(str(text), universe)
    except ParseError as exc:
        raise SpecError(f"{what}: {exc}") from exc


class BuiltSystem:
    """Specification resolved into engine objects."""

    def __init__(self, spec: SystemSpec):
        self.spec = spec
        state_order = Lex() if spec.order == "lex" else GrevLex()
        self.state_order = state_order
        symbols = [Symbol(n) for n in spec.variables]
        self.universe = SymbolUniverse(symbols, state_order)
        drifts = [
            _parse(spec.field[s.name], self.universe, f"drift of {s.name}")
            for s in symbols
        ]
        self.field = VectorField(self.universe, drifts)
        gens = [
            _parse(g, self.universe, "precondition generator")
            for g in spec.precondition_generators
        ]
        self.precondition = Precondition(gens, spec.precondition_mode)
        self.template = None
        self.postcondition = None
        self.ideal_generators = None
        kind = spec.query_kind
        q = spec.query
        if kind == "post":
            _require("template" in q, "post query needs a template")
            unknown = set(q) - {"kind", "template"}
            _require(not unknown, f"unknown post query keys: {sorted(unknown)}")
            self.template = self._build_template(q["template"])
        elif kind in ("pre", "check"):
            unknown = set(q) - {"kind", "postcondition"}
            _require(not unknown, f"unknown {kind} query keys: {sorted(unknown)}")
            polys = q.get("postcondition")
            _require(
                isinstance(polys, list) and polys,
                f"{kind} query needs a non-empty postcondition list",
            )
            self.postcondition = [
                _parse(p, self.universe, "postcondition polynomial") for p in polys
            ]
        elif kind == "invariant":
            unknown = set(q) - {"kind", "generators"}
            _require(not unknown, f"unknown invariant query keys: {sorted(unknown)}")
            gens_q = q.get("generators")
            _require(
                isinstance(gens_q, list) and gens_q,
                "invariant query needs a non-empty generator list",
            )
            self.ideal_generators = [
                _parse(p, self.universe, "ideal generator") for p in gens_q
            ]

    def _build_template(self, tspec) -> Template:
        _require(isinstance(tspec, dict), "template must be a mapping")
        kind = tspec.get("kind")
        if kind == "complete":
            unknown = set(tspec) - {
                "kind", "degree", "variables", "exclude", "auxiliary_monomials",
            }
            _require(not unknown, f"unknown template keys: {sorted(unknown)}")
            degree = tspec.get("degree")
            _require(
                isinstance(degree, int) and degree >= 0,
                "template degree must be a non-negative integer",
            )
            var_names = tspec.get("variables", self.spec.variables)
            _require(isinstance(var_names, list) and var_names, "template variables must be a list")
            unknown_vars = [v for v in var_names if v not in self.spec.variables]
            _require(not unknown_vars, f"template over undeclared variables {unknown_vars}")
            tvars = [self.universe.by_name(str(v)) for v in var_names]
            monos = monomials_up_to_degree(self.universe, tvars, degree)
            seen = {m.exps for m in monos}
            for aux_text in tspec.get("auxiliary_monomials", []) or []:
                aux = _parse_monomial(aux_text, self.universe, "auxiliary monomial")
                products = [aux] + [
                    aux * Monomial(self.universe, tuple(
                        1 if i == self.universe.index_of(v) else 0
                        for i in range(len(self.universe))
                    ))
                    for v in tvars
                ]
                for m in products:
                    if m.exps not in seen:
                        seen.add(m.exps)
                        monos.append(m)
            for text in tspec.get("exclude", []) or []:
                m = _parse_monomial(text, self.universe, "excluded monomial")
                seen.discard(m.exps)
            monos = [m for m in monos if m.exps in seen]
            monos.sort(key=lambda m: (m.degree(), self.universe.key(m.exps)))
            params = fresh_parameters(len(monos))
            return Template(
                self.universe,
                params,
                {m.exps: {k: Fraction(1)} for k, m in enumerate(monos)},
            )
        if kind == "explicit":
            unknown = set(tspec) - {"kind", "parameters", "expression"}
            _require(not unknown, f"unknown template keys: {sorted(unknown)}")
            pnames = tspec.get("parameters")
            _require(
                isinstance(pnames, list) and pnames,
                "explicit template needs a parameter name list",
            )
            pnames = [str(p) for p in pnames]
            _require(len(set(pnames)) == len(pnames), "duplicate parameter names")
            clash = [p for p in pnames if p in self.spec.variables]
            _require(not clash, f"parameters clash with variables: {clash}")
            params = tuple(Symbol(p, Symbol.PARAM) for p in pnames)
            joint = SymbolUniverse(
                params + self.universe.symbols, BlockElim(self.state_order)
            )
            expr = tspec.get("expression")
            _require(isinstance(expr, str), "explicit template needs an expression")
            p = _parse(expr, joint, "template expression")
            try:
                return Template.from_joint_polynomial(p, len(params), self.universe)
            except ValueError as exc:
                raise SpecError(f"template expression: {exc}") from exc
        raise SpecError("template kind must be complete or explicit")

    def canonical_echo(self) -> dict:
        """Spec contents with all expressions reprinted canonically."""
        spec = self.spec
        echo = {
            "name": spec.name,
            "tier": spec.tier,
            "variables": spec.variables,
            "order": spec.order,
            "field": {
                s.name: str(d)
                for s, d in zip(self.universe.symbols, self.field.drifts)
            },
            "precondition": {
                "generators": [str(g) for g in self.precondition.generators],
                "mode": self.precondition.mode,
            },
            "query": {"kind": spec.query_kind},
        }
        if self.template is not None:
            echo["query"]["template_parameters"] = len(self.template.params)
        if self.postcondition is not None:
            echo["query"]["postcondition"] = [str(p) for p in self.postcondition]
        if self.ideal_generators is not None:
            echo["query"]["generators"] = [str(p) for p in self.ideal_generators]
        return echo
