#!/usr/bin/env python3
"""Solve an LP-format model with scipy's MILP interface (HiGHS backend).

Reads the CPLEX-style LP text that `netgen export` writes (sections
Minimize/Maximize, Subject To, Bounds, Binaries, End) and prints the optimal
assignment as `name value` lines suitable for `netgen import`.

Usage: solve_lp.py model.lp [-o solution.txt] [--time-limit SECS]
"""

import argparse
import re
import sys

import numpy as np
from scipy import optimize, sparse

TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?|<=|>=|=|[+-]")


def tokenize(text):
    return TOKEN.findall(text)


def is_number(tok):
    try:
        float(tok)
        return True
    except ValueError:
        return False


def parse_terms(tokens):
    """Parses `c1 name1 + c2 name2 - ...` until a relational operator."""
    terms = []
    sign = 1.0
    coef = None
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok in ("<=", ">=", "="):
            break
        if tok == "+":
            sign = 1.0
        elif tok == "-":
            sign = -1.0
        elif is_number(tok):
            coef = sign * float(tok)
            sign = 1.0
        else:
            c = coef if coef is not None else sign
            terms.append((tok, c))
            coef = None
            sign = 1.0
        i += 1
    return terms, tokens[i:]


def parse_lp(text):
    lines = [ln.rstrip() for ln in text.splitlines()]
    section = None
    objective_sense = 1.0
    obj_tokens = []
    constraints = []  # (name, tokens)
    bounds = []
    binaries = []
    buf_name = None
    buf = []

    def flush():
        nonlocal buf_name, buf
        if buf:
            constraints.append((buf_name, buf))
        buf_name, buf = None, []

    for ln in lines:
        stripped = ln.strip()
        low = stripped.lower()
        if low in ("minimize", "maximize", "subject to", "bounds", "binaries", "end", "general"):
            flush()
            section = low
            objective_sense = -1.0 if low == "maximize" else objective_sense
            continue
        if not stripped:
            continue
        if section in ("minimize", "maximize"):
            body = stripped.split(":", 1)[-1]
            obj_tokens.extend(tokenize(body))
        elif section == "subject to":
            if ":" in stripped:
                flush()
                name, body = stripped.split(":", 1)
                buf_name = name.strip()
                buf = tokenize(body)
            else:
                buf.extend(tokenize(stripped))
        elif section == "bounds":
            bounds.append(tokenize(stripped))
        elif section == "binaries":
            binaries.extend(tokenize(stripped))
    flush()

    names = []
    index = {}

    def var(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    obj_terms, rest = parse_terms(obj_tokens)
    if rest:
        raise ValueError("unexpected tokens after objective: %s" % rest[:5])
    for name, _ in obj_terms:
        var(name)

    rows = []
    for cname, toks in constraints:
        terms, rest = parse_terms(toks)
        if not rest:
            raise ValueError("constraint %s has no relational operator" % cname)
        op = rest[0]
        rhs_terms = rest[1:]
        if len(rhs_terms) != 1 or not is_number(rhs_terms[0]):
            raise ValueError("constraint %s has a non-constant right-hand side" % cname)
        rhs = float(rhs_terms[0])
        for name, _ in terms:
            var(name)
        rows.append((terms, op, rhs))

    lb = {}
    ub = {}
    for toks in bounds:
        # form: lo <= name <= hi
        if len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
            name = toks[2]
            var(name)
            lb[name] = float(toks[0])
            ub[name] = float(toks[4])
        else:
            raise ValueError("unsupported bounds line: %s" % " ".join(toks))
    for name in binaries:
        var(name)

    n = len(names)
    c = np.zeros(n)
    for name, coef in obj_terms:
        c[index[name]] += objective_sense * coef

    data, ri, ci, lo_arr, hi_arr = [], [], [], [], []
    for k, (terms, op, rhs) in enumerate(rows):
        for name, coef in terms:
            data.append(coef)
            ri.append(k)
            ci.append(index[name])
        if op == "<=":
            lo_arr.append(-np.inf)
            hi_arr.append(rhs)
        elif op == ">=":
            lo_arr.append(rhs)
            hi_arr.append(np.inf)
        else:
            lo_arr.append(rhs)
            hi_arr.append(rhs)

    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    integrality = np.zeros(n)
    binset = set(binaries)
    for name in names:
        j = index[name]
        if name in binset:
            lower[j], upper[j] = 0.0, 1.0
            integrality[j] = 1
        if name in lb:
            lower[j] = lb[name]
            upper[j] = ub[name]

    a = sparse.csc_matrix((data, (ri, ci)), shape=(len(rows), n))
    return names, c, a, np.array(lo_arr), np.array(hi_arr), lower, upper, integrality, objective_sense


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("model")
    ap.add_argument("-o", "--output", default=None)
    ap.add_argument("--time-limit", type=float, default=None)
    args = ap.parse_args()

    with open(args.model) as f:
        text = f.read()
    names, c, a, clo, chi, lower, upper, integrality, sense = parse_lp(text)

    options = {}
    if args.time_limit is not None:
        options["time_limit"] = args.time_limit
    res = optimize.milp(
        c,
        constraints=optimize.LinearConstraint(a, clo, chi),
        bounds=optimize.Bounds(lower, upper),
        integrality=integrality,
        options=options,
    )
    if not res.success:
        sys.stderr.write("solve failed: %s\n" % res.message)
        sys.exit(3 if "infeasible" in res.message.lower() else 4)

    out_lines = ["# objective %.12g" % (sense * res.fun)]
    for name, v in zip(names, res.x):
        out_lines.append("%s %.12g" % (name, v))
    body = "\n".join(out_lines) + "\n"
    if args.output:
        with open(args.output, "w") as f:
            f.write(body)
    else:
        sys.stdout.write(body)


if __name__ == "__main__":
    main()
