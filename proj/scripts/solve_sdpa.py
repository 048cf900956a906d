#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) file with cvxopt and print the objectives.

The file encodes
    maximize <F0, Y>  s.t.  <Fr, Y> = b_r,  Y in a product of psd and
    diagonal blocks,
which is passed to cvxopt.solvers.conelp in its dual form. Used by the test
suite as an independent solver for cross-checks.
"""

import sys

from cvxopt import matrix, solvers, spmatrix


def parse_sdpa(path):
    rows = None
    nblocks = None
    sizes = []
    rhs = []
    entries = []
    stage = 0
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line[0] in '"*':
                continue
            if stage == 0:
                rows = int(line.split()[0])
                stage = 1
            elif stage == 1:
                nblocks = int(line.split()[0])
                stage = 2
            elif stage == 2:
                for tok in line.replace(',', ' ').replace('{', ' ').replace('}', ' ').split():
                    sizes.append(int(tok))
                if len(sizes) >= nblocks:
                    stage = 3
            elif stage == 3:
                rhs.extend(float(t) for t in line.split())
                if len(rhs) >= rows:
                    stage = 4
            else:
                m, b, i, j, v = line.split()
                entries.append((int(m), int(b), int(i), int(j), float(v)))
    return rows, sizes, rhs, entries


def main():
    if len(sys.argv) != 2:
        print('usage: solve_sdpa.py problem.dat-s', file=sys.stderr)
        return 2
    m, sizes, b, entries = parse_sdpa(sys.argv[1])

    # vectorized cone layout: diagonal blocks -> 'l', psd blocks -> 's' (full, column-major)
    lin_dim = sum(-s for s in sizes if s < 0)
    psd_sizes = [s for s in sizes if s > 0]
    offsets = []
    lin_off = 0
    psd_off = lin_dim
    for s in sizes:
        if s < 0:
            offsets.append(('l', lin_off))
            lin_off += -s
        else:
            offsets.append(('s', psd_off, s))
            psd_off += s * s
    total = lin_dim + sum(s * s for s in psd_sizes)

    def positions(blkno, i, j):
        info = offsets[blkno - 1]
        if info[0] == 'l':
            assert i == j
            return [(info[1] + i - 1, 1.0)]
        _, off, s = info
        if i == j:
            return [(off + (j - 1) * s + (i - 1), 1.0)]
        return [(off + (j - 1) * s + (i - 1), 1.0), (off + (i - 1) * s + (j - 1), 1.0)]

    # conelp: min c'x s.t. Gx + s = h, s in K
    # here: variables y (the SDPA x), slack Z = sum y_r F_r - F0 in K, and the
    # SDPA dual problem is  minimize b'y
    # -> G = -[vec(F_1) ... vec(F_m)], h = -vec(F0), c = b
    gi, gj, gv = [], [], []
    h = [0.0] * total
    for matno, blkno, i, j, v in entries:
        for pos, w in positions(blkno, i, j):
            if matno == 0:
                h[pos] -= v * w
            else:
                gi.append(pos)
                gj.append(matno - 1)
                gv.append(-v * w)
    G = spmatrix(gv, gi, gj, (total, m))
    c = matrix(b)
    dims = {'l': lin_dim, 'q': [], 's': psd_sizes}
    solvers.options['show_progress'] = False
    solvers.options['maxiters'] = 200
    sol = solvers.conelp(c, G, matrix(h), dims)
    if sol['status'] != 'optimal':
        print(f"status {sol['status']}", file=sys.stderr)
    obj = sol['primal objective']  # = b'y, the bound in maximize sense
    dual_obj = sol['dual objective']
    print(f'objective {obj:.12e}')
    print(f'dual_objective {dual_obj:.12e}')
    print('y ' + ' '.join(f'{v:.12e}' for v in sol['x']))
    return 0 if sol['status'] == 'optimal' else 1


if __name__ == '__main__':
    sys.exit(main())
