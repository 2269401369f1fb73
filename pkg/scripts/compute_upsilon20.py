"""Hecke eigenvalues of the weight-20 non-lift eigenform, written incrementally.

Usage: python3 scripts/compute_upsilon20.py PMAX P2MAX OUT.json
"""

import json
import sys
import time

from sympy import primerange

from siegelbessel.siegel.deep import DeepEngine, deep_eigenvalues, weight20_product_form
from siegelbessel.siegel.halfint import disc
from siegelbessel.siegel.hecke import eigenforms
from siegelbessel.siegel.ring import cusp_space


def main():
    pmax, p2max, out = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
    S20 = cusp_space(20, 80)
    Y = next(e for e in eigenforms(S20, (2,)) if e.form is not None).form
    t0 = (1, 1, 1)
    pf = weight20_product_form(Y, 80)
    Nmax = max(3 * pmax**2, 3 * p2max**4) + 8
    t = time.time()
    eng = DeepEngine(pf, Nmax, nq=9)
    print("tables", round(time.time() - t, 1), flush=True)
    primes = list(primerange(2, pmax + 1))
    squares = list(primerange(2, p2max + 1))
    lam, lam2 = {}, {}

    def dump(p, l1, l2):
        lam[p] = l1
        if l2 is not None:
            lam2[p] = l2
        doc = {
            "name": "Upsilon20",
            "level": 1,
            "weight": [20, 0],
            "normalized_at": list(t0),
            "primes": {str(q): {"lam_p": lam[q], "lam_p2": lam2.get(q)} for q in sorted(lam)},
            "atkin_lehner": {},
            "local_type": {},
        }
        with open(out + ".tmp", "w") as f:
            json.dump(doc, f)
        import os

        os.replace(out + ".tmp", out)
        print(p, round(time.time() - t, 1), flush=True)

    deep_eigenvalues(eng, Y.coeffs[t0][0], t0, disc(t0), primes, squares, progress=dump)


if __name__ == "__main__":
    main()
