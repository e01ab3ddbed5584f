"""Bundled solve command for the LP dialect written by netpricing.mip.

Usage: python -m netpricing.lpsolve MODEL.lp SOLUTION.sol SECONDS

Reads the model, solves it with scipy's HiGHS interface, and writes the
solution as plain "name value" lines, one variable per line. Exit codes
follow the adapter contract: 0 solved to optimality, 2 time limit reached
(an incumbent, if HiGHS had one, is still written), 3 infeasible, 1 for
anything else. A non-positive time budget exits 2 without solving at all,
so a zero budget can never produce a made-up answer.
"""

from __future__ import annotations

import sys

import numpy as np


def _solve(model, seconds: float):
    from scipy import optimize, sparse

    n = len(model.variables)
    index = {v.name: i for i, v in enumerate(model.variables)}
    cost = np.zeros(n)
    for name, coef in model.objective:
        cost[index[name]] -= coef  # maximisation via negated minimisation
    integrality = np.array(
        [1 if v.kind == "binary" else 0 for v in model.variables]
    )
    lb = np.array([-np.inf if v.lb is None else v.lb for v in model.variables])
    ub = np.array([np.inf if v.ub is None else v.ub for v in model.variables])
    constraints = []
    if model.constraints:
        data, rows, cols = [], [], []
        clo = np.full(len(model.constraints), -np.inf)
        chi = np.full(len(model.constraints), np.inf)
        for i, row in enumerate(model.constraints):
            for name, coef in row.terms:
                rows.append(i)
                cols.append(index[name])
                data.append(coef)
            if row.sense in ("<=", "="):
                chi[i] = row.rhs
            if row.sense in (">=", "="):
                clo[i] = row.rhs
        matrix = sparse.csr_matrix(
            (data, (rows, cols)), shape=(len(model.constraints), n)
        )
        constraints = [optimize.LinearConstraint(matrix, clo, chi)]
    options = {"mip_rel_gap": 0.0, "time_limit": seconds}
    return optimize.milp(
        c=cost,
        constraints=constraints,
        integrality=integrality,
        bounds=optimize.Bounds(lb, ub),
        options=options,
    )


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if len(argv) != 3:
        print("usage: lpsolve MODEL.lp SOLUTION.sol SECONDS", file=sys.stderr)
        return 1
    model_path, solution_path, seconds_text = argv
    try:
        seconds = float(seconds_text)
    except ValueError:
        print(f"bad time budget {seconds_text!r}", file=sys.stderr)
        return 1
    if seconds <= 0:
        return 2

    from .mip import LpParseError, read_lp

    try:
        model = read_lp(model_path)
    except (OSError, LpParseError) as exc:
        print(f"cannot read model: {exc}", file=sys.stderr)
        return 1

    def write_values(values):
        with open(solution_path, "w", encoding="utf-8") as out:
            for var, value in values:
                out.write(f"{var} {value!r}\n")

    if not model.variables:
        write_values([])
        return 0
    result = _solve(model, seconds)
    if result.status == 0:
        write_values(
            (v.name, float(x)) for v, x in zip(model.variables, result.x)
        )
        return 0
    if result.status == 1:  # iteration or time limit
        if result.x is not None:
            write_values(
                (v.name, float(x)) for v, x in zip(model.variables, result.x)
            )
        return 2
    if result.status == 2:
        return 3
    print(f"solver failure: {result.message}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
