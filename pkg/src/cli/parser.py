"""Problem description files.

    ring R = QQ[x, y] / (x^3);          # or FP<7>[...]
    ideal I = (x, y);
    module E = R^2 / {[x, 0], [0, y]};  # relations optional
    filtration F of E { 0: [1, 0], [0, 1]; 1: [x, 0], [y, 0]; };

Polynomials are stored in canonical text so that printing and parsing
again gives the same problem.
"""

from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import List, Optional

from algebra_core.errors import ParseError
from algebra_core.ideals import QuotientRing
from algebra_core.polynomial import Polynomial, PolynomialRing, format_polynomial
from algebra_core.scalars import field_from_name, field_name
from algebra_core.textual import TokenStream, parse_expression
from algebra_core.vectors import Vec, vec_from_polys
from graded.base_module import BaseModule
from rees.filtered import FilteredModule

Vector = List[str]


@dataclass
class ModuleDecl:
    name: str
    rank: int
    relations: List[Vector] = dataclass_field(default_factory=list)


@dataclass
class FiltrationDecl:
    name: str
    module: str
    levels: List[List[Vector]] = dataclass_field(default_factory=list)


@dataclass
class ProblemSpec:
    field: str
    ring_name: str
    variables: List[str]
    relations: List[str]
    ideal_name: str = ""
    ideal: List[str] = dataclass_field(default_factory=list)
    modules: List[ModuleDecl] = dataclass_field(default_factory=list)
    filtrations: List[FiltrationDecl] = dataclass_field(default_factory=list)

    @cached_property
    def ambient(self) -> PolynomialRing:
        return PolynomialRing(self.variables, field_from_name(self.field))

    @cached_property
    def base(self) -> QuotientRing:
        return QuotientRing(self.ambient, self.relations)

    def ideal_generators(self) -> List[Polynomial]:
        return [self.ambient.parse(g) for g in self.ideal]

    def _vector(self, vector: Vector) -> Vec:
        return vec_from_polys([self.ambient.parse(p) for p in vector])

    def module(self, name: str) -> BaseModule:
        for decl in self.modules:
            if decl.name == name:
                return BaseModule(self.base, decl.rank, [self._vector(v) for v in decl.relations])
        raise KeyError(f"[SPEC] no module named '{name}'")

    def filtration(self, name: str) -> FilteredModule:
        for decl in self.filtrations:
            if decl.name == name:
                levels = [[self._vector(v) for v in level] for level in decl.levels]
                return FilteredModule(self.base, self.ideal_generators(), self.module(decl.module), levels)
        raise KeyError(f"[SPEC] no filtration named '{name}'")


class _SpecParser:
    def __init__(self, text: str):
        self.stream = TokenStream.from_text(text)
        self.spec: Optional[ProblemSpec] = None

    def _ident(self) -> str:
        return self.stream.expect("IDENT").text

    def _ring(self) -> PolynomialRing:
        if self.spec is None:
            raise self.stream.fail("the ring must be declared first", ["ring"])
        return self.spec.ambient

    def _polynomial(self) -> str:
        return format_polynomial(parse_expression(self.stream, self._ring()))

    def _polynomial_list(self, close: str) -> List[str]:
        out = []
        if self.stream.at(close):
            return out
        out.append(self._polynomial())
        while self.stream.accept(","):
            out.append(self._polynomial())
        return out

    def _vector(self, rank: Optional[int] = None) -> Vector:
        start = self.stream.expect("[")
        entries = self._polynomial_list("]")
        self.stream.expect("]")
        if rank is not None and len(entries) != rank:
            raise ParseError(f"vector has {len(entries)} entries, expected {rank}", start.line, start.column)
        return entries

    def _vectors(self, rank: Optional[int]) -> List[Vector]:
        out = [self._vector(rank)]
        while self.stream.accept(","):
            out.append(self._vector(rank))
        return out

    def _field(self) -> str:
        token = self.stream.expect("IDENT")
        text = token.text
        if text == "FP" and self.stream.accept("<"):
            text = f"FP<{self.stream.expect('INT').text}>"
            self.stream.expect(">")
        try:
            return field_name(field_from_name(text))
        except ValueError as e:
            raise ParseError(str(e), token.line, token.column, ["QQ", "FP<p>"]) from e

    def ring(self):
        token = self.stream.expect("ring")
        if self.spec is not None:
            raise ParseError("only one ring may be declared", token.line, token.column)
        name = self._ident()
        self.stream.expect("=")
        field_text = self._field()
        self.stream.expect("[")
        variables = [self._ident()]
        while self.stream.accept(","):
            variables.append(self._ident())
        self.stream.expect("]")
        if len(set(variables)) != len(variables):
            raise ParseError("repeated variable name", token.line, token.column)
        self.spec = ProblemSpec(field_text, name, variables, [])
        if self.stream.accept("/"):
            self.stream.expect("(")
            self.spec.relations = self._polynomial_list(")")
            self.stream.expect(")")
        self.stream.expect(";")

    def ideal(self):
        self._ring()
        self.stream.expect("ideal")
        self.spec.ideal_name = self._ident()
        self.stream.expect("=")
        self.stream.expect("(")
        self.spec.ideal = self._polynomial_list(")")
        self.stream.expect(")")
        self.stream.expect(";")

    def module(self):
        self._ring()
        self.stream.expect("module")
        name = self._ident()
        self.stream.expect("=")
        ring_token = self.stream.expect("IDENT")
        if ring_token.text != self.spec.ring_name:
            raise ParseError(f"unknown ring '{ring_token.text}'", ring_token.line, ring_token.column,
                             [self.spec.ring_name])
        self.stream.expect("^")
        rank = int(self.stream.expect("INT").text)
        relations: List[Vector] = []
        if self.stream.accept("/"):
            self.stream.expect("{")
            relations = self._vectors(rank)
            self.stream.expect("}")
        self.stream.expect(";")
        self.spec.modules.append(ModuleDecl(name, rank, relations))

    def filtration(self):
        self._ring()
        self.stream.expect("filtration")
        name = self._ident()
        self.stream.expect("of")
        module_token = self.stream.expect("IDENT")
        ranks = {m.name: m.rank for m in self.spec.modules}
        if module_token.text not in ranks:
            raise ParseError(f"unknown module '{module_token.text}'", module_token.line, module_token.column,
                             sorted(ranks))
        rank = ranks[module_token.text]
        self.stream.expect("{")
        levels: List[List[Vector]] = []
        while not self.stream.at("}"):
            level_token = self.stream.expect("INT")
            if int(level_token.text) != len(levels):
                raise ParseError(f"level {level_token.text} out of order, expected {len(levels)}",
                                 level_token.line, level_token.column)
            self.stream.expect(":")
            levels.append([] if self.stream.at(";") else self._vectors(rank))
            self.stream.expect(";")
        self.stream.expect("}")
        self.stream.expect(";")
        self.spec.filtrations.append(FiltrationDecl(name, module_token.text, levels))

    def parse(self) -> ProblemSpec:
        statements = {"ring": self.ring, "ideal": self.ideal, "module": self.module, "filtration": self.filtration}
        while not self.stream.at("EOF"):
            token = self.stream.peek()
            if token.kind != "IDENT" or token.text not in statements:
                raise self.stream.fail("expected a declaration", sorted(statements))
            statements[token.text]()
        if self.spec is None:
            raise self.stream.fail("no ring declared", ["ring"])
        return self.spec


def parse(text: str) -> ProblemSpec:
    """Parse problem text; errors carry the line, column and expected tokens."""
    return _SpecParser(text).parse()


def _format_vector(vector: Vector) -> str:
    return "[" + ", ".join(vector) + "]"


def print_spec(spec: ProblemSpec) -> str:
    """Canonical source text of ``spec``."""
    lines = []
    ring = f"ring {spec.ring_name} = {spec.field}[{', '.join(spec.variables)}]"
    if spec.relations:
        ring += f" / ({', '.join(spec.relations)})"
    lines.append(ring + ";")
    if spec.ideal_name:
        lines.append(f"ideal {spec.ideal_name} = ({', '.join(spec.ideal)});")
    for decl in spec.modules:
        text = f"module {decl.name} = {spec.ring_name}^{decl.rank}"
        if decl.relations:
            text += " / {" + ", ".join(_format_vector(v) for v in decl.relations) + "}"
        lines.append(text + ";")
    for decl in spec.filtrations:
        levels = " ".join(f"{n}: {', '.join(_format_vector(v) for v in level)};"
                          for n, level in enumerate(decl.levels))
        lines.append(f"filtration {decl.name} of {decl.module} {{ {levels} }};")
    return "\n".join(lines) + "\n"
