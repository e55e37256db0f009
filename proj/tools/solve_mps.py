#!/usr/bin/env python3
"""Solve an MPS file with SciPy's HiGHS MILP interface.

Prints `status <name>` and, when a solution exists, `objective <value>`.
With --values every nonzero column follows as `value <name> <x>`.
Exit codes: 0 optimal, 3 infeasible, 1 anything else.
"""

import argparse
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix


def read_mps(path):
    rows, senses, obj_row = [], {}, None
    cols, col_index, integer = [], {}, []
    entries, objective, rhs = [], {}, {}
    lower, upper = {}, {}
    section, in_int = None, False
    with open(path) as f:
        for raw in f:
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("*"):
                continue
            tok = line.split()
            if not line[0].isspace():
                section = tok[0]
                if section not in ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"):
                    raise ValueError(f"unsupported section {section}")
                continue
            if section == "ROWS":
                kind, name = tok
                if kind == "N":
                    obj_row = obj_row or name
                else:
                    senses[name] = kind
                    rows.append(name)
            elif section == "COLUMNS":
                if len(tok) >= 3 and tok[1] == "'MARKER'":
                    in_int = tok[-1] == "'INTORG'"
                    continue
                name = tok[0]
                if name not in col_index:
                    col_index[name] = len(cols)
                    cols.append(name)
                    integer.append(in_int)
                    if in_int:
                        upper[name] = 1.0
                j = col_index[name]
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r == obj_row:
                        objective[j] = objective.get(j, 0.0) + float(v)
                    else:
                        entries.append((r, j, float(v)))
            elif section == "RHS":
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r != obj_row:
                        rhs[r] = float(v)
            elif section == "BOUNDS":
                kind, name = tok[0], tok[2]
                value = float(tok[3]) if len(tok) > 3 else None
                if kind == "BV":
                    lower[name], upper[name] = 0.0, 1.0
                    integer[col_index[name]] = True
                elif kind == "UP":
                    upper[name] = value
                elif kind == "LO":
                    lower[name] = value
                elif kind == "FX":
                    lower[name] = upper[name] = value
                elif kind == "FR":
                    lower[name], upper[name] = -np.inf, np.inf
                elif kind == "MI":
                    lower[name] = -np.inf
                elif kind == "PL":
                    upper[name] = np.inf
                else:
                    raise ValueError(f"unsupported bound {kind}")

    n, m = len(cols), len(rows)
    row_index = {r: i for i, r in enumerate(rows)}
    c = np.zeros(n)
    for j, v in objective.items():
        c[j] = v
    a = coo_matrix(
        ([v for _, _, v in entries], ([row_index[r] for r, _, _ in entries], [j for _, j, _ in entries])),
        shape=(m, n),
    ).tocsr()
    lo_row, hi_row = np.full(m, -np.inf), np.full(m, np.inf)
    for r, i in row_index.items():
        b = rhs.get(r, 0.0)
        if senses[r] in ("L", "E"):
            hi_row[i] = b
        if senses[r] in ("G", "E"):
            lo_row[i] = b
    lo = np.array([lower.get(name, 0.0) for name in cols])
    hi = np.array([upper.get(name, np.inf) for name in cols])
    return cols, c, a, lo_row, hi_row, lo, hi, np.array(integer, dtype=int)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("mps")
    parser.add_argument("--time-limit", type=float, default=600.0)
    parser.add_argument("--values", action="store_true")
    args = parser.parse_args()

    cols, c, a, lo_row, hi_row, lo, hi, integrality = read_mps(args.mps)
    constraints = [LinearConstraint(a, lo_row, hi_row)] if a.shape[0] else []
    res = milp(
        c,
        constraints=constraints,
        integrality=integrality,
        bounds=Bounds(lo, hi),
        options={"time_limit": args.time_limit, "mip_rel_gap": 0.0},
    )
    names = {0: "optimal", 1: "limit", 2: "infeasible", 3: "unbounded", 4: "other"}
    print(f"status {names.get(res.status, 'other')}")
    if res.x is not None:
        print(f"objective {float(res.fun)!r}")
        if args.values:
            for name, x in zip(cols, res.x):
                if abs(x) > 1e-9:
                    print(f"value {name} {float(x)!r}")
    if res.status == 0:
        return 0
    return 3 if res.status == 2 else 1


if __name__ == "__main__":
    sys.exit(main())
