"""Command line interface: ``siegelbessel <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def _emit(obj, out=None):
    text = json.dumps(obj, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_classgroup(a):
    from .quadforms import characters, class_group, kronecker

    G = class_group(a.disc)
    doc = {
        "D": G.D,
        "h": G.h,
        "wE": G.wE,
        "reduced": [[f.a, f.b, f.c] for f in G.reduced],
        "structure": list(G.structure),
        "generators": list(G.generators),
        "composition": G.comp.tolist(),
        "kronecker_2": kronecker(G.D, 2),
    }
    if a.characters:
        doc["characters"] = [{"index": c.index, "order": c.order, "angles": [str(x) for x in c.angles]}
                             for c in characters(G)]
    _emit(doc)


def _build_form(name: str, B: int):
    from .siegel.ring import eisenstein, igusa_cusp_generators
    from .siegel.satoh import satoh_bracket

    name = name.lower()
    if name.startswith("satoh:"):
        f, g = name[6:].split(",")
        return satoh_bracket(_build_form(f, B), _build_form(g, B), B)
    if name in ("e4", "e6", "e10", "e12"):
        return eisenstein(int(name[1:]), B)
    if name in ("chi10", "chi12"):
        chi10, chi12 = igusa_cusp_generators(max(B, 16))
        F = chi10 if name == "chi10" else chi12
        return F.truncate(B) if B < F.bound else F
    if name == "upsilon20":
        from .harness import upsilon20

        F = upsilon20(max(B, 80))
        return F.truncate(B) if B < F.bound else F
    raise SystemExit(f"unknown form {name!r}")


def cmd_expand(a):
    from .siegel.expansion import dumps

    F = _build_form(a.form, a.bound)
    text = dumps(F)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bessel(a):
    from .bessel import bessel_vector
    from .quadforms import characters, class_group
    from .siegel.expansion import loads

    F = loads(Path(a.form).read_text())
    G = class_group(a.disc)
    chars = characters(G)
    if not 0 <= a.char < len(chars):
        raise SystemExit(f"character index out of range (h = {G.h})")
    _emit(bessel_vector(F, G, chars[a.char]).to_json())


def _adjoint_series(spin, k: int, r: int):
    from .lfun.euler import adjoint_factor, motivic_weight
    from .lfun.series import LSeries, gamma_C, gamma_R

    w = motivic_weight(k, r)
    gam = gamma_C(w) + gamma_C(2 * r + 1) + gamma_C(k + 2 * r - 1) + gamma_C(k - 2) + gamma_R(1) * 2
    facs = {p: adjoint_factor(f) for p, f in spin.factors.items() if f.exact_order is None}
    return LSeries(10, spin.conductor, tuple(gam), facs, label="adjoint")


def cmd_lvalue(a):
    from .harness import ingest
    from .lfun.builders import dirichlet_quadratic, rankin_ai, spinor_lseries, twisted_spinor
    from .lfun.series import completed_value, euler_product_value
    from .quadforms import characters, class_group

    if a.series == "dirichlet":
        L = dirichlet_quadratic(a.disc, a.prime_bound)
    else:
        data = ingest(a.eigen, offline=a.offline).data
        k, r = data.weight.k, data.weight.r
        spin = spinor_lseries(data, a.prime_bound, {})
        if a.series == "spinor":
            L = spin
        elif a.series == "spinor-twist":
            L = twisted_spinor(spin, a.disc)
        elif a.series == "rankin":
            G = class_group(a.disc)
            L = rankin_ai(spin, G, characters(G)[a.char])
        else:
            L = _adjoint_series(spin, k, r)
    if a.series == "adjoint":
        v = euler_product_value(L, a.s0)
    elif a.s0 == 1.0 and L.gamma_shifts and min(L.gamma_shifts) <= 0:
        d = 1e-4
        lo, hi = completed_value(L, 1 - d), completed_value(L, 1 + d)
        v = lo
        v.value = 0.5 * (lo.value + hi.value)
    else:
        v = completed_value(L, a.s0)
    _emit({
        "series": a.series,
        "label": L.label,
        "s0": a.s0,
        "value": [float(complex(v.value).real), float(complex(v.value).imag)],
        "error_estimate": float(v.error),
        "root_number": [float(complex(v.sign).real), float(complex(v.sign).imag)],
        "terms": int(v.terms),
        "conductor": int(L.conductor),
    })


def cmd_yoshida(a):
    from .yoshida import instance_for, spinor_check, verify_formula1

    k1, k2 = (int(x) for x in a.weights.split(","))
    inst = instance_for(a.p, a.disc, a.char, k1, k2)
    doc = {
        "p": a.p,
        "weights": [k1, k2],
        "D": a.disc,
        "char": a.char,
        "classes": inst.classes.h,
        "atkin_lehner": inst.atkin_lehner,
        "spinor_check": {str(q): {k: str(v) for k, v in spinor_check(inst, q).items()} for q in (2, 3)},
    }
    if a.verify:
        doc["formula1"] = verify_formula1(inst).to_json()
    _emit(doc)


def cmd_verify(a):
    from .harness import VerificationTask, verify_boecherer

    task = VerificationTask.from_json(json.loads(Path(a.task).read_text()))
    cache = Path(a.cache) if a.cache else None
    report = verify_boecherer(task, offline=a.offline, cache=cache)
    text = report.dumps()
    if a.out:
        Path(a.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if report.verdict in ("pass", "mismatch-as-expected") else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegelbessel", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", help="class group of Q(sqrt(-D)) as JSON")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--characters", action="store_true")
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("expand", help="write a Fourier expansion in the coefficient file format")
    p.add_argument("--form", required=True, help="e4|e6|e10|e12|chi10|chi12|upsilon20|satoh:F,G")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("bessel", help="Bessel period of a coefficient file")
    p.add_argument("--form", required=True)
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--char", type=int, default=0)
    p.set_defaults(func=cmd_bessel)

    p = sub.add_parser("lvalue", help="central or edge value of an L-series")
    p.add_argument("--series", choices=("spinor", "spinor-twist", "rankin", "adjoint", "dirichlet"), required=True)
    p.add_argument("--eigen", default="upsilon20")
    p.add_argument("--disc", type=int, default=4)
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--s0", type=float, choices=(0.5, 1.0), default=0.5)
    p.add_argument("--prime-bound", type=int, default=500)
    p.add_argument("--offline", action="store_true")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("yoshida", help="scalar Yoshida lift instance and formula check")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--weights", default="0,0")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_yoshida)

    p = sub.add_parser("verify", help="run a ratio verification task")
    p.add_argument("--task", required=True)
    p.add_argument("--offline", action="store_true")
    p.add_argument("--cache", help="cache directory (overrides the environment variable)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rc = args.func(args)
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
