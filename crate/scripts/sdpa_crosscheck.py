#!/usr/bin/env python3
"""Solve a sparse SDPA file with cvxpy and print the optimal value.

Reads the form  max F0 . Y  s.t.  Fi . Y = ci,  Y psd (negative block sizes
are nonnegative diagonal blocks). When the leading comment says
"sense: minimize", F0 holds -C, so the printed value is negated back.
"""
import argparse
import re
import sys

import cvxpy as cp
import numpy as np


def tokens(text):
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "*\"":
            continue
        for tok in re.split(r"[\s,{}()]+", line):
            if tok and not tok.startswith("="):
                yield tok


def parse(text):
    minimize = "sense: minimize" in text.splitlines()[0] if text else False
    it = tokens(text)
    m = int(next(it))
    nblocks = int(next(it))
    sizes = [int(next(it)) for _ in range(nblocks)]
    c = np.array([float(next(it)) for _ in range(m)])
    mats = [[{} for _ in range(nblocks)] for _ in range(m + 1)]
    rest = list(it)
    if len(rest) % 5:
        raise ValueError("entry list is not a multiple of five fields")
    for k in range(0, len(rest), 5):
        matno, blk, i, j = (int(x) for x in rest[k:k + 4])
        mats[matno][blk - 1][(i - 1, j - 1)] = float(rest[k + 4])
    return minimize, sizes, c, mats


def inner(entries, y, size):
    terms = []
    for (i, j), v in entries.items():
        if size < 0:
            terms.append(v * y[i])
        elif i == j:
            terms.append(v * y[i, i])
        else:
            terms.append(2 * v * y[i, j])
    return sum(terms) if terms else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("path")
    ap.add_argument("--solver", default="CLARABEL")
    args = ap.parse_args()
    with open(args.path) as f:
        minimize, sizes, c, mats = parse(f.read())
    ys, cons = [], []
    for s in sizes:
        if s < 0:
            y = cp.Variable(-s)
            cons.append(y >= 0)
        else:
            y = cp.Variable((s, s), symmetric=True)
            cons.append(y >> 0)
        ys.append(y)

    def form(k):
        return sum(inner(mats[k][b], ys[b], sizes[b]) for b in range(len(sizes)))

    cons += [form(k + 1) == c[k] for k in range(len(c))]
    prob = cp.Problem(cp.Maximize(form(0)), cons)
    prob.solve(solver=args.solver)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        print(prob.status)
        return 1
    value = -prob.value if minimize else prob.value
    print(f"{value:.12g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
