#!/usr/bin/env python3
"""Solve a CPLEX-LP file with a free MILP solver and emit a plain solution file.

Usage: milp_backend.py [--solver {highs,glpk}] [--time-limit SECONDS] LP_FILE SOL_FILE

The input must use the LP subset emitted by the scheduler (linear maximize
objective, linear constraints, Bounds, Generals, Binaries). The output is one
status keyword on the first line, an `=obj= VALUE` line, then `name value`
pairs, one variable per line.
"""

import argparse
import sys


def tokenize_sections(text):
    sections = {"Maximize": [], "Subject To": [], "Bounds": [], "Generals": [], "Binaries": []}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in sections:
            current = line
            continue
        if line == "End":
            break
        if current is None:
            raise ValueError("token outside of any LP section: %r" % line)
        sections[current].extend(line.split())
    return sections


class Problem:
    def __init__(self):
        self.names = []
        self.index = {}
        self.obj = {}          # var index -> coefficient (maximize)
        self.rows = []         # (coeffs dict, op, rhs)
        self.lb = {}
        self.ub = {}
        self.binary = set()
        self.general = set()

    def var(self, name):
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
        return self.index[name]


def parse_terms(tokens, stop_ops=("<=", ">=", "=")):
    """Parse `[sign] [coef] name` sequences; returns (coeffs, consumed, op_or_None)."""
    coeffs = {}
    sign = 1.0
    coef = None
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok in stop_ops:
            return coeffs, i, tok
        if tok == "+":
            sign, coef = 1.0, None
        elif tok == "-":
            sign, coef = -1.0, None
        else:
            try:
                coef = float(tok)
                i += 1
                continue
            except ValueError:
                pass
            value = sign * (1.0 if coef is None else coef)
            coeffs[tok] = coeffs.get(tok, 0.0) + value
            sign, coef = 1.0, None
        i += 1
    return coeffs, i, None


def parse_lp(text):
    sections = tokenize_sections(text)
    prob = Problem()

    obj_tokens = sections["Maximize"]
    if obj_tokens and obj_tokens[0].endswith(":"):
        obj_tokens = obj_tokens[1:]
    coeffs, consumed, _ = parse_terms(obj_tokens, stop_ops=())
    if consumed != len(obj_tokens):
        raise ValueError("trailing tokens in objective")
    for name, c in coeffs.items():
        prob.obj[prob.var(name)] = c

    tokens = sections["Subject To"]
    i = 0
    while i < len(tokens):
        if not tokens[i].endswith(":"):
            raise ValueError("expected constraint label, got %r" % tokens[i])
        i += 1
        coeffs, consumed, op = parse_terms(tokens[i:])
        if op is None:
            raise ValueError("constraint without comparison operator")
        i += consumed + 1
        rhs = float(tokens[i])
        i += 1
        prob.rows.append(({prob.var(n): c for n, c in coeffs.items()}, op, rhs))

    btoks = sections["Bounds"]
    if len(btoks) % 5 != 0:
        raise ValueError("malformed Bounds section")
    for k in range(0, len(btoks), 5):
        lo, le1, name, le2, hi = btoks[k:k + 5]
        if le1 != "<=" or le2 != "<=":
            raise ValueError("malformed bound line")
        v = prob.var(name)
        prob.lb[v] = float(lo)
        prob.ub[v] = float(hi)

    for name in sections["Generals"]:
        prob.general.add(prob.var(name))
    for name in sections["Binaries"]:
        prob.binary.add(prob.var(name))

    for v in range(len(prob.names)):
        if v in prob.binary:
            prob.lb[v] = max(prob.lb.get(v, 0.0), 0.0)
            prob.ub[v] = min(prob.ub.get(v, 1.0), 1.0)
        elif v not in prob.lb:
            raise ValueError("general variable %s has no bounds" % prob.names[v])
    return prob


def solve_highs(prob, time_limit):
    import numpy as np
    from scipy import sparse
    from scipy.optimize import milp, LinearConstraint, Bounds

    n = len(prob.names)
    c = np.zeros(n)
    for v, coef in prob.obj.items():
        c[v] = -coef  # scipy minimizes
    data, ri, ci, lo, hi = [], [], [], [], []
    for r, (coeffs, op, rhs) in enumerate(prob.rows):
        for v, coef in coeffs.items():
            ri.append(r)
            ci.append(v)
            data.append(coef)
        if op == "<=":
            lo.append(-np.inf)
            hi.append(rhs)
        elif op == ">=":
            lo.append(rhs)
            hi.append(np.inf)
        else:
            lo.append(rhs)
            hi.append(rhs)
    constraints = []
    if prob.rows:
        a = sparse.csr_array((data, (ri, ci)), shape=(len(prob.rows), n))
        constraints.append(LinearConstraint(a, lo, hi))
    bounds = Bounds(
        [prob.lb[v] for v in range(n)],
        [prob.ub[v] for v in range(n)],
    )
    options = {"mip_rel_gap": 0.0, "presolve": True}
    if time_limit is not None:
        options["time_limit"] = time_limit
    res = milp(
        c,
        constraints=constraints,
        integrality=np.ones(n),
        bounds=bounds,
        options=options,
    )
    if res.status == 0:
        return "optimal", -res.fun, res.x
    if res.status == 2:
        return "infeasible", None, None
    if res.status == 1:
        return "timeout", None, None
    return "error", None, None


def solve_glpk(prob, time_limit):
    from cvxopt import matrix, spmatrix
    from cvxopt import glpk

    n = len(prob.names)
    c = matrix([-prob.obj.get(v, 0.0) for v in range(n)], tc="d")
    gv, gri, gci, h = [], [], [], []
    av, ari, aci, b = [], [], [], []
    for coeffs, op, rhs in prob.rows:
        if op == "=":
            row = len(b)
            for v, coef in coeffs.items():
                av.append(coef)
                ari.append(row)
                aci.append(v)
            b.append(rhs)
        else:
            sign = 1.0 if op == "<=" else -1.0
            row = len(h)
            for v, coef in coeffs.items():
                gv.append(sign * coef)
                gri.append(row)
                gci.append(v)
            h.append(sign * rhs)
    # glpk takes variable bounds as ordinary rows
    for v in range(n):
        row = len(h)
        gv.append(1.0)
        gri.append(row)
        gci.append(v)
        h.append(prob.ub[v])
        row = len(h)
        gv.append(-1.0)
        gri.append(row)
        gci.append(v)
        h.append(-prob.lb[v])
    g = spmatrix(gv, gri, gci, (len(h), n), tc="d")
    options = {"msg_lev": "GLP_MSG_OFF"}
    if time_limit is not None:
        options["tm_lim"] = int(time_limit * 1000)
    kwargs = {"I": set(range(n)), "options": options}
    if b:
        a = spmatrix(av, ari, aci, (len(b), n), tc="d")
        status, x = glpk.ilp(c, g, matrix(h, tc="d"), a, matrix(b, tc="d"), **kwargs)
    else:
        status, x = glpk.ilp(c, g, matrix(h, tc="d"), **kwargs)
    if status == "optimal":
        obj = sum(prob.obj.get(v, 0.0) * x[v] for v in range(n))
        return "optimal", obj, list(x)
    if "infeasible" in status:
        return "infeasible", None, None
    if status == "unknown":
        return "timeout", None, None
    return "error", None, None


def main(argv):
    ap = argparse.ArgumentParser()
    ap.add_argument("--solver", choices=["highs", "glpk"], default="highs")
    ap.add_argument("--time-limit", type=float, default=None)
    ap.add_argument("lp_file")
    ap.add_argument("sol_file")
    args = ap.parse_args(argv)

    with open(args.lp_file, "r", encoding="utf-8") as f:
        prob = parse_lp(f.read())

    if args.solver == "highs":
        status, obj, x = solve_highs(prob, args.time_limit)
    else:
        status, obj, x = solve_glpk(prob, args.time_limit)

    with open(args.sol_file, "w", encoding="utf-8") as f:
        f.write(status + "\n")
        if status == "optimal":
            f.write("=obj= %.12g\n" % obj)
            for v, name in enumerate(prob.names):
                f.write("%s %.12g\n" % (name, float(x[v])))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
