"""Binary integer programs and their CPLEX-LP text form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

import numpy as np


@dataclass
class LpModel:
    objective: dict[str, int] = field(default_factory=dict)  # maximised
    constraints: list[tuple[str, dict[str, int], str, int]] = field(default_factory=list)
    variables: list[str] = field(default_factory=list)  # all binary, registration order

    def add_var(self, name: str) -> str:
        if name in self._known:
            raise ValueError(f"variable {name} registered twice")
        self._known.add(name)
        self.variables.append(name)
        return name

    def add_constraint(self, terms: dict[str, int], relation: str, rhs: int) -> None:
        if relation not in ("<=", ">=", "="):
            raise ValueError(f"bad relation {relation!r}")
        missing = [v for v in terms if v not in self._known]
        if missing:
            raise ValueError(f"unregistered variables {missing}")
        self.constraints.append((f"c{len(self.constraints) + 1}", dict(terms), relation, rhs))

    def __post_init__(self) -> None:
        self._known = set(self.variables)

    def to_arrays(self):
        """(c, A, lower, upper) for a maximisation over binary vectors."""
        index = {name: i for i, name in enumerate(self.variables)}
        c = np.zeros(len(index))
        for name, coef in self.objective.items():
            c[index[name]] = coef
        A = np.zeros((len(self.constraints), len(index)))
        lo = np.full(len(self.constraints), -np.inf)
        hi = np.full(len(self.constraints), np.inf)
        for r, (_, terms, rel, rhs) in enumerate(self.constraints):
            for name, coef in terms.items():
                A[r, index[name]] += coef
            if rel in ("<=", "="):
                hi[r] = rhs
            if rel in (">=", "="):
                lo[r] = rhs
        return c, A, lo, hi


def _expr(terms: dict[str, int]) -> str:
    parts = []
    for name, coef in terms.items():
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        parts.append(f"{sign} {body}")
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def write_lp(model: LpModel, sink: TextIO, comments=()) -> None:
    for line in comments:
        sink.write(f"\\ {line}\n")
    sink.write("Maximize\n")
    sink.write(f" obj: {_expr(model.objective)}\n")
    sink.write("Subject To\n")
    for name, terms, rel, rhs in model.constraints:
        sink.write(f" {name}: {_expr(terms)} {rel} {rhs}\n")
    sink.write("Binary\n")
    for name in model.variables:
        sink.write(f" {name}\n")
    sink.write("End\n")


def solve_with_scipy(model: LpModel) -> tuple[int, dict[str, int]]:
    """Solve the model with HiGHS through scipy; returns (optimum, assignment)."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    c, A, lo, hi = model.to_arrays()
    kwargs = {}
    if len(model.constraints):
        kwargs["constraints"] = LinearConstraint(A, lo, hi)
    res = milp(-c, integrality=np.ones(len(c)), bounds=Bounds(0, 1), **kwargs)
    if not res.success:
        raise RuntimeError(f"MILP solve failed: {res.message}")
    values = {name: int(round(x)) for name, x in zip(model.variables, res.x)}
    return int(round(-res.fun)), values
