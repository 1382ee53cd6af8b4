"""Structured-text schemas and the polynomial expression grammar.

Problem files are JSON with a version field; polynomials are written in a
small grammar (integer or rational literals, variable names, +, -, *, ^,
parentheses).  Emission is canonical: sorted keys, fixed separators, so
byte-identical reruns are a contract.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence

from .abelian import AbelianGroup, GroupElement, quotient
from .grpoly import GradedRing, Polynomial, Potential, graded_ring
from .sectors import DimensionTable
from .factorization import Factorization, PolyMatrix, make_factorization

PROBLEM_SCHEMA = "grmf-problem/1"
MF_SCHEMA = "grmf-mf/1"
MORPHISM_SCHEMA = "grmf-mor/1"


class SchemaError(ValueError):
    """The input file does not match its declared schema."""


# ---------------------------------------------------------------------------
# Polynomial grammar


class _Parser:
    def __init__(self, text: str, ring: GradedRing):
        self.text = text
        self.pos = 0
        self.ring = ring
        self.var_index = {n: i for i, n in enumerate(ring.names)}

    def error(self, msg: str):
        raise SchemaError(f"polynomial parse error at {self.pos}: {msg} in {self.text!r}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> Polynomial:
        out = self.expression()
        if self.peek():
            self.error("trailing input")
        return out

    def expression(self) -> Polynomial:
        sign = 1
        ch = self.peek()
        if ch in "+-":
            self.pos += 1
            sign = -1 if ch == "-" else 1
        term = self.term() * sign
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                term = term + self.term()
            elif ch == "-":
                self.pos += 1
                term = term - self.term()
            else:
                return term

    def term(self) -> Polynomial:
        out = self.power()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                out = out * self.power()
            elif ch.isalnum() or ch == "(":
                out = out * self.power()
            else:
                return out

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            exp = self.integer()
            if exp < 0:
                self.error("negative exponent")
            return base ** exp
        return base

    def atom(self) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            out = self.expression()
            self.expect(")")
            return out
        if ch.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                den = self.integer()
                return self.ring.constant(Fraction(num, den))
            return self.ring.constant(num)
        if ch.isalpha() or ch == "_":
            name = self.identifier()
            if name not in self.var_index:
                self.error(f"unknown variable {name!r}")
            return self.ring.var(self.var_index[name])
        self.error("expected an atom")

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def identifier(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]


def parse_polynomial(ring: GradedRing, text: str) -> Polynomial:
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------------------
# Groups and rings


def group_to_json(group: AbelianGroup) -> dict:
    out = {"free_rank": group.free_rank, "torsion": list(group.torsion)}
    if group.presentation is not None:
        out["relations"] = [list(r) for r in group.presentation.relations]
        out["ambient_rank"] = group.presentation.ambient_rank
    return out


def group_from_json(data: dict) -> AbelianGroup:
    if "ambient_rank" in data or "relations" in data:
        try:
            ambient = int(data["ambient_rank"])
            relations = [list(map(int, r)) for r in data.get("relations", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad group presentation: {exc}") from exc
        group, _ = quotient(ambient, relations)
        return group
    try:
        return AbelianGroup(int(data["free_rank"]), tuple(int(t) for t in data.get("torsion", ())))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad group spec: {exc}") from exc


def element_from_json(group: AbelianGroup, coords, ambient: bool) -> GroupElement:
    coords = [int(c) for c in coords]
    if ambient and group.presentation is not None:
        return group.from_ambient(coords)
    return group.element(coords)


def ring_from_json(data: dict) -> tuple[GradedRing, Optional[Potential]]:
    if data.get("schema") != PROBLEM_SCHEMA:
        raise SchemaError(f"expected schema {PROBLEM_SCHEMA!r}")
    group = group_from_json(data.get("group", {}))
    ambient = "ambient_rank" in data.get("group", {}) or "relations" in data.get("group", {})
    variables = []
    for var in data.get("variables", []):
        try:
            name = var["name"]
            deg = element_from_json(group, var["degree"], ambient)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad variable spec: {exc}") from exc
        variables.append((name, deg))
    witness_row = data.get("witness")
    ring = graded_ring(group, variables, witness_row=witness_row)
    potential = None
    if data.get("potential"):
        poly = parse_polynomial(ring, data["potential"])
        potential = Potential.create(ring, poly)
    return ring, potential


def ring_to_json(ring: GradedRing, potential: Optional[Potential] = None) -> dict:
    out = {
        "schema": PROBLEM_SCHEMA,
        "group": {"free_rank": ring.group.free_rank, "torsion": list(ring.group.torsion)},
        "variables": [
            {"name": n, "degree": list(d.coords)} for n, d in zip(ring.names, ring.degrees)
        ],
    }
    if potential is not None:
        out["potential"] = str(potential.poly)
    return out


# ---------------------------------------------------------------------------
# Factorizations


def factorization_to_json(f: Factorization) -> dict:
    return {
        "schema": MF_SCHEMA,
        "E_minus1": [list(l.coords) for l in f.e_minus1.labels],
        "E_0": [list(l.coords) for l in f.e_0.labels],
        "phi_0": [[str(p) for p in row] for row in f.phi_0.data],
        "phi_minus1": [[str(p) for p in row] for row in f.phi_minus1.data],
    }


def factorization_from_json(ring: GradedRing, potential: Potential, data: dict) -> Factorization:
    if data.get("schema") != MF_SCHEMA:
        raise SchemaError(f"expected schema {MF_SCHEMA!r}")
    try:
        labels_m1 = [ring.group.element(c) for c in data["E_minus1"]]
        labels_0 = [ring.group.element(c) for c in data["E_0"]]
        phi0_rows = [[parse_polynomial(ring, s) for s in row] for row in data["phi_0"]]
        phim1_rows = [[parse_polynomial(ring, s) for s in row] for row in data["phi_minus1"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad factorization file: {exc}") from exc
    phi0 = PolyMatrix(ring, phi0_rows, len(labels_0), len(labels_m1))
    phim1 = PolyMatrix(ring, phim1_rows, len(labels_m1), len(labels_0))
    return make_factorization(ring, potential, labels_m1, labels_0, phi0, phim1, check=False)


# ---------------------------------------------------------------------------
# Tables


def table_to_json(table: DimensionTable) -> dict:
    rows = []
    for m, t, dim in table.nonzero_cells():
        rows.append({"m": list(m.coords) if m is not None else None, "t": t, "dim": dim})
    window = {
        "t_lo": table.window.t_lo,
        "t_hi": table.window.t_hi,
        "m_keys": [list(m.coords) for m in table.window.m_keys]
        if table.window.m_keys is not None
        else None,
    }
    return {"window": window, "cells": rows}


def table_to_text(table: DimensionTable) -> str:
    cells = table.nonzero_cells()
    if not cells:
        return "(all dimensions zero in the window)"
    lines = [f"{'m':>16}  {'t':>4}  {'dim':>4}"]
    for m, t, dim in cells:
        label = "-" if m is None else "(" + ",".join(map(str, m.coords)) + ")"
        lines.append(f"{label:>16}  {t:>4}  {dim:>4}")
    return "\n".join(lines)


def dumps_canonical(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def morphism_from_json(ring: GradedRing, potential: Potential, data: dict):
    from .factorization import Morphism

    if data.get("schema") != MORPHISM_SCHEMA:
        raise SchemaError(f"expected schema {MORPHISM_SCHEMA!r}")
    try:
        source = factorization_from_json(ring, potential, data["source"])
        target = factorization_from_json(ring, potential, data["target"])
        fm1 = [[parse_polynomial(ring, s) for s in row] for row in data["f_minus1"]]
        f0 = [[parse_polynomial(ring, s) for s in row] for row in data["f_0"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad morphism file: {exc}") from exc
    return Morphism(
        source,
        target,
        PolyMatrix(ring, fm1, target.e_minus1.rank, source.e_minus1.rank),
        PolyMatrix(ring, f0, target.e_0.rank, source.e_0.rank),
    )


def morphism_to_json(m) -> dict:
    return {
        "schema": MORPHISM_SCHEMA,
        "source": factorization_to_json(m.source),
        "target": factorization_to_json(m.target),
        "f_minus1": [[str(p) for p in row] for row in m.f_minus1.data],
        "f_0": [[str(p) for p in row] for row in m.f_0.data],
    }
