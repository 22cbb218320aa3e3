#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) file with cvxopt and print the optimum.

The file encodes: maximize tr(F0 Y) s.t. tr(Fk Y) = b_k, Y in the given
blocks (PSD, or nonnegative for negative block sizes). We solve it as the
cvxopt conelp dual and print the optimal objective value.
"""

import sys

import numpy as np
from cvxopt import matrix, solvers


def parse(path):
    with open(path) as fh:
        lines = [ln for ln in (l.strip() for l in fh) if ln and ln[0] not in "*\"#"]
    ncon = int(lines[0].split()[0])
    nblocks = int(lines[1].split()[0])
    sizes = [int(tok) for tok in lines[2].replace(",", " ").split()][:nblocks]
    rhs = [float(tok) for tok in lines[3].replace(",", " ").split()][:ncon]
    mats = {}
    for ln in lines[4:]:
        k, blk, i, j, v = ln.split()
        k, blk, i, j, v = int(k), int(blk), int(i), int(j), float(v)
        mats.setdefault((k, blk), []).append((i - 1, j - 1, v))
    return ncon, sizes, rhs, mats


def dense(entries, size):
    n = abs(size)
    m = np.zeros((n, n))
    for i, j, v in entries:
        m[i, j] = v
        m[j, i] = v
    return m


def main():
    path = sys.argv[1]
    ncon, sizes, rhs, mats = parse(path)

    # Y-problem: maximize tr(F0 Y) s.t. tr(Fk Y) = rhs_k, Y >= 0 per block.
    # cvxopt sdp() solves: minimize c'x s.t. x1 F1 + ... + xm Fm - F0 >= 0,
    # whose dual optimum equals the Y-problem optimum; we request the dual
    # value via the primal-dual pair of conelp.
    # Encode directly as conelp in the dual form:
    #   maximize -<F0, Y> is not native, so use sdp(): min rhs'x s.t.
    #   sum x_k Fk - F0 >= 0 and read the optimal value (strong duality).
    c = matrix(rhs)
    Gs, hs = [], []
    Gl_rows = []
    hl = []
    lin_index = None
    for b, size in enumerate(sizes, start=1):
        if size < 0:
            lin_index = b
    # PSD blocks for sdp(): G_k columns are -vec(Fk).
    for b, size in enumerate(sizes, start=1):
        if size < 0:
            n = -size
            g = np.zeros((n, ncon))
            h = dense(mats.get((0, b), []), size)
            for k in range(1, ncon + 1):
                gm = dense(mats.get((k, b), []), size)
                g[:, k - 1] = -np.diag(gm)
            Gl_rows.append(g)
            hl.append(-np.diag(h))
        else:
            n = size
            g = np.zeros((n * n, ncon))
            for k in range(1, ncon + 1):
                gm = dense(mats.get((k, b), []), size)
                g[:, k - 1] = -gm.reshape(n * n)
            Gs.append(matrix(g))
            hs.append(matrix(-dense(mats.get((0, b), []), size)))

    solvers.options["show_progress"] = False
    solvers.options["abstol"] = 1e-9
    solvers.options["reltol"] = 1e-9
    if Gl_rows:
        Gl = matrix(np.vstack(Gl_rows))
        hl_m = matrix(np.concatenate(hl))
        sol = solvers.sdp(c, Gl=Gl, hl=hl_m, Gs=Gs, hs=hs)
    else:
        sol = solvers.sdp(c, Gs=Gs, hs=hs)
    if sol["status"] != "optimal":
        print("status:", sol["status"], file=sys.stderr)
        sys.exit(2)
    # min rhs'x equals the Y-problem maximum by strong duality.
    print("%.12g" % sol["primal objective"])


if __name__ == "__main__":
    main()
