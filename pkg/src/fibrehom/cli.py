"""Batch command-line front end.

Exit codes: 0 success, 1 validation failure, 2 undecidable within the
configured bounds, 3 parse or I/O error.  All numeric output is emitted
through deterministic renderers (sorted keys, canonical group forms), so
identical jobs produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fileio
from .catmodule import (constant_module, pullback_module, representable_module,
                        sign_module)
from .chains import (build_chain_complex, chain_map_from_cellular,
                     trivialize_chain_map, verify_d_squared)
from .errors import (CapExceeded, FibrehomError, InfiniteFundamentalCategory,
                     NoNormalForm, ParseError, UndecidableWithinBounds)
from .fcomplex import elementary_expansion, klein_bottle, rp2, sphere, torus, \
    z2_point, z2_sphere
from .fundamental import build_pi
from .homology import (chain_setup, cohomology, euler_characteristics, homology,
                       total_homology, whitehead_check)
from .ktheory import Domination, finiteness_obstruction, reduce_trivial_pi, \
    torsion_of_equivalence
from .presented import FiniteGroup, orbit_category


def _load_complex(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fileio.parse_complex(fh.read(), path=path)


def _coefficient(spec, pi, variance, base_dir=None):
    """Resolve a --coeff argument into a CatModule over ``pi``."""
    if spec == "Z":
        return constant_module(pi, variance)
    if spec.startswith("Z/"):
        return constant_module(pi, variance, modulus=int(spec[2:]))
    if spec.startswith("sign:"):
        signs = {}
        for item in spec[5:].split(","):
            cell, value = item.split("=")
            signs[cell] = int(value)
        return sign_module(pi, signs, variance)
    if spec.startswith("freeF:"):
        mod = representable_module(pi._fcat, spec[6:], "left")
        assert variance == "left", "freeF systems are covariant"
        return pullback_module(pi, mod)
    if spec.startswith("corepF:"):
        mod = representable_module(pi._fcat, spec[7:], "right")
        assert variance == "right", "corepF systems are contravariant"
        return pullback_module(pi, mod)
    with open(spec, "r", encoding="utf-8") as fh:
        module = fileio.parse_module(fh.read(), pi, path=spec)
    if module.variance != variance:
        raise ParseError(f"module {module.name} is {module.variance}, "
                         f"need {variance}", path=spec)
    return module


def _emit(args, table_text, record):
    if args.format == "records":
        print(json.dumps(record, sort_keys=True, indent=2))
    else:
        print(table_text)


def cmd_validate(args):
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    kind = fileio.sniff_format(text)
    if kind == "fibcat":
        report = fileio.parse_category(text, path=args.file).validate()
    elif kind == "fibcomplex":
        report = fileio.parse_complex(text, path=args.file).validate_complex()
    else:
        raise ParseError(f"cannot validate files of type {kind}", path=args.file)
    print(report)
    return 0 if report.ok else 1


def cmd_pi(args):
    x = _load_complex(args.complex)
    pi = build_pi(x, object_policy=args.object_policy, hom_cap=args.hom_cap)
    text = fileio.write_category(pi.presented)
    lines = [text.rstrip("\n")]
    for gen in pi.presented.generators:
        tag = pi.provenance.get(gen)
        if tag:
            lines.append(f"# provenance {gen} = {' '.join(str(t) for t in tag)}")
    for warning in pi.warnings:
        lines.append(f"# warning {warning}")
    print("\n".join(lines))
    return 0


def cmd_chains(args):
    x = _load_complex(args.complex)
    pi, c = chain_setup(x, object_policy=args.object_policy, hom_cap=args.hom_cap)
    if args.d2_mode == "exact":
        report = verify_d_squared(c, mode="exact")
        if not report.ok:
            print(report)
            return 1
    print(fileio.write_chain_complex(c), end="")
    return 0


def _homology_command(args, variance):
    x = _load_complex(args.complex)
    pi, c = chain_setup(x, object_policy=args.object_policy, hom_cap=args.hom_cap)
    module = _coefficient(args.coeff, pi, variance)
    table = homology(c, module) if variance == "left" else cohomology(c, module)
    _emit(args, table.render(), table.to_record())
    return 0


def cmd_homology(args):
    return _homology_command(args, "left")


def cmd_cohomology(args):
    return _homology_command(args, "right")


def cmd_total_homology(args):
    x = _load_complex(args.complex)
    pi, c = chain_setup(x, object_policy=args.object_policy, hom_cap=args.hom_cap)
    result = total_homology(c, cap=args.hom_cap)
    record = result.to_record()
    lines = [f"total homology of {result.complex_name}"]
    for obj in sorted(result.values):
        groups = result.values[obj]
        body = ", ".join(f"H_{n}={groups[n]}" for n in sorted(groups))
        lines.append(f"  at {obj}: {body}")
    _emit(args, "\n".join(lines), record)
    return 0


def cmd_euler(args):
    x = _load_complex(args.complex)
    pi, c = chain_setup(x, object_policy=args.object_policy, hom_cap=args.hom_cap)
    module = _coefficient(args.coeff, pi, "left")
    chi = euler_characteristics(c, module)
    _emit(args, f"chi_chain = {chi['chain']}\nchi_homology = {chi['homology']}",
          {"chain": chi["chain"], "homology": chi["homology"]})
    return 0


def _load_chain_map(args):
    with open(args.map, "r", encoding="utf-8") as fh:
        data = fileio.parse_map_file(fh.read(), path=args.map)
    import os
    base = os.path.dirname(args.map)
    src_path = args.source or os.path.join(base, data["source"])
    tgt_path = args.target or os.path.join(base, data["target"])
    xs = _load_complex(src_path)
    xt = _load_complex(tgt_path)
    pis, cs = chain_setup(xs, object_policy=args.object_policy,
                          hom_cap=args.hom_cap)
    pit, ct = chain_setup(xt, object_policy=args.object_policy,
                          hom_cap=args.hom_cap)
    functor = None
    if data["objects"] or data["gens"]:
        functor = {
            "objects": dict(data["objects"]),
            "gens": {g: pit.word(w, at=data["objects"].get(
                pis.presented.generators[g][0]))
                     for g, w in data["gens"].items()},
        }
        for obj in pis.presented.objects:
            functor["objects"].setdefault(obj, obj)
    else:
        # no functor data: the complexes must share one presentation, and
        # the source is rebased onto the target's category
        if (pis.presented.objects != pit.presented.objects or
                pis.presented.generators != pit.presented.generators):
            raise ParseError(
                "map file gives no functor but the fundamental categories "
                "differ; add object/gen lines", path=args.map)
        cs.pi = pit
    images = {tag: [(t.coeff, t.word, t.cell) for t in row]
              for tag, row in data["cells"].items()}
    f = chain_map_from_cellular(cs, ct, images, functor=functor,
                                name=data["name"], verify=args.verify_mode)
    return f, pis, pit


def cmd_whitehead_check(args):
    f, _pis, pit = _load_chain_map(args)
    modules = [_coefficient(spec, pit, "left") for spec in args.modules]
    verdict = whitehead_check(f, modules=modules, cap=args.hom_cap)
    record = verdict.to_record()
    lines = [f"whitehead check for {f.name}"]
    for key in ("pi_iso", "chain_equivalence", "homology_isomorphism",
                "partial", "equivalence"):
        lines.append(f"  {key} = {record[key]}")
    for name, ok in sorted(record["modules"].items()):
        lines.append(f"  module {name}: {'iso' if ok else 'NOT iso'}")
    _emit(args, "\n".join(lines), record)
    return 0


def cmd_torsion(args):
    f, _pis, _pit = _load_chain_map(args)
    if args.trivialize:
        f = trivialize_chain_map(f)
    rep = torsion_of_equivalence(f, cap=args.hom_cap)
    decided = reduce_trivial_pi(rep, budget=args.budget)
    record = {"name": rep.name, "verified": rep.verify(), **decided}
    lines = [f"torsion of {f.name}: decided = {decided['decided']}"]
    if decided.get("witness_det") is not None:
        lines.append(f"  determinant witness = {decided['witness_det']}")
    _emit(args, "\n".join(lines), record)
    return 0


def cmd_finiteness(args):
    with open(args.dom, "r", encoding="utf-8") as fh:
        data = fileio.parse_domination_file(fh.read(), path=args.dom)
    import os
    base = os.path.dirname(args.dom)
    xa = _load_complex(os.path.join(base, data["dominated"]))
    xd = _load_complex(os.path.join(base, data["dominating"]))
    pia, ca = chain_setup(xa, hom_cap=args.hom_cap)
    pid, cd = chain_setup(xd, hom_cap=args.hom_cap)
    if sorted(pia.presented.objects) != sorted(pid.presented.objects) or \
            sorted(pia.presented.generators) != sorted(pid.presented.generators):
        raise UndecidableWithinBounds(
            "CLI dominations need identical fundamental presentations; "
            "use the library API for the general case")
    cd.pi = pia
    fmap = chain_map_from_cellular(
        ca, cd, {t: [(r.coeff, r.word, r.cell) for r in row]
                 for t, row in data["f"].items()}, name="f",
        verify=args.verify_mode)
    gmap = chain_map_from_cellular(
        cd, ca, {t: [(r.coeff, r.word, r.cell) for r in row]
                 for t, row in data["g"].items()}, name="g",
        verify=args.verify_mode)
    from .chains import ZPiMatrix
    from .words import FormalSum
    h = {}
    for n in ca.degrees:
        rows = ca.basis(n + 1)
        cols = ca.basis(n)
        mat = ZPiMatrix(rows, cols)
        row_index = {tag: i for i, (tag, _o) in enumerate(rows)}
        for j, (tag, col_obj) in enumerate(cols):
            for term in data["H"].get(tag, ()):
                word = pia.word(term.word, at=col_obj)
                mat.add_to(row_index[term.cell], j,
                           FormalSum.of_word(word).scale(term.coeff))
        h[n] = mat
    rep = finiteness_obstruction(Domination(ca, cd, fmap, gmap, h),
                                 cap=args.hom_cap)
    record = rep.to_record()
    record.pop("witness", None)
    lines = [f"finiteness obstruction: decided = {rep.decided}",
             f"  idempotent degrees: {[n for n, _ in rep.parts]}"]
    _emit(args, "\n".join(lines), record)
    return 0


def cmd_gen(args):
    name = args.name
    if name == "sphere":
        x = sphere(int(args.args[0]))
    elif name == "rp2":
        x = rp2()
    elif name == "torus":
        x = torus()
    elif name == "klein":
        x = klein_bottle()
    elif name == "z2-point":
        x = z2_point(args.args[0])
    elif name == "z2-sphere":
        action = args.args[1] if len(args.args) > 1 else "antipodal"
        x = z2_sphere(int(args.args[0]), action)
    elif name == "expand":
        x0 = _load_complex(args.args[0])
        x, _pair = elementary_expansion(x0, int(args.args[1]))
    else:
        raise ParseError(f"unknown generator {name!r}; have sphere, rp2, "
                         f"torus, klein, z2-point, z2-sphere, expand")
    print(fileio.write_complex(x), end="")
    return 0


def cmd_orbit_category(args):
    with open(args.group, "r", encoding="utf-8") as fh:
        group = fileio.parse_group(fh.read(), path=args.group)
    subgroups = [frozenset(s.split(",")) for s in args.subgroups]
    cat = orbit_category(group, subgroups)
    print(fileio.write_category(cat), end="")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fibrehom",
        description="homology, cohomology and simple-homotopy invariants "
                    "of fibred CW-complexes")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, complex_arg=True):
        if complex_arg:
            p.add_argument("complex", help="complex file (fibcomplex)")
        p.add_argument("--object-policy", choices=["cells-only", "all"],
                       default="cells-only")
        p.add_argument("--hom-cap", type=int, default=512)
        p.add_argument("--format", choices=["table", "records"],
                       default="table")
        p.add_argument("--verify-mode", choices=["exact", "coefficients"],
                       default="exact")

    p = sub.add_parser("validate", help="validate a category or complex file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pi", help="dump the fundamental category")
    common(p)
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("chains", help="dump the cellular chain complex")
    common(p)
    p.add_argument("--d2-mode", choices=["exact", "skip"], default="skip")
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("homology", help="homology with a left coefficient system")
    common(p)
    p.add_argument("--coeff", required=True)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("cohomology", help="cohomology with a right system")
    common(p)
    p.add_argument("--coeff", required=True)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("total-homology", help="homology as a module (finite Pi)")
    common(p)
    p.set_defaults(func=cmd_total_homology)

    p = sub.add_parser("euler", help="Euler characteristics")
    common(p)
    p.add_argument("--coeff", required=True)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("whitehead-check", help="chain-level Whitehead criteria")
    common(p, complex_arg=False)
    p.add_argument("--map", required=True, help="fibmap file")
    p.add_argument("--source", help="override source complex path")
    p.add_argument("--target", help="override target complex path")
    p.add_argument("--modules", nargs="*", default=[],
                   help="coefficient specs for partial verdicts")
    p.set_defaults(func=cmd_whitehead_check)

    p = sub.add_parser("torsion", help="Whitehead torsion of an equivalence")
    common(p, complex_arg=False)
    p.add_argument("--map", required=True)
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--trivialize", action="store_true",
                   help="base change to the trivial category first")
    p.add_argument("--budget", type=int, default=200)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("finiteness", help="finiteness obstruction of a domination")
    common(p, complex_arg=False)
    p.add_argument("--dom", required=True, help="fibdom file")
    p.set_defaults(func=cmd_finiteness)

    p = sub.add_parser("gen", help="emit a built-in example complex")
    p.add_argument("name")
    p.add_argument("args", nargs="*")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("orbit-category",
                       help="orbit category of a finite group")
    p.add_argument("group", help="fibgroup file")
    p.add_argument("subgroups", nargs="+",
                   help="comma-separated element lists")
    p.set_defaults(func=cmd_orbit_category)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UndecidableWithinBounds, NoNormalForm, CapExceeded,
            InfiniteFundamentalCategory) as exc:
        print(f"undecidable within bounds: {exc}", file=sys.stderr)
        return 2
    except FibrehomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
