"""Bundled spinor data for chi10 and chi12 from their elliptic preimages.

Usage: python3 scripts/make_sk_eigen.py PMAX OUTDIR
"""

import json
import sys
from pathlib import Path

from siegelbessel.harness import saito_kurokawa_eigen


def main():
    pmax, out = int(sys.argv[1]), Path(sys.argv[2])
    for name, k in (("chi10", 10), ("chi12", 12)):
        doc = saito_kurokawa_eigen(k, pmax).to_json()
        doc["name"] = name
        doc["normalized_at"] = [1, 1, 1]
        (out / f"{name}.json").write_text(json.dumps(doc, sort_keys=True))
        print(name, len(doc["primes"]))


if __name__ == "__main__":
    main()
