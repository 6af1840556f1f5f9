"""Command-line front end.

Exit codes: 0 pass, 1 input error, 2 verified counterexample, 3 inconclusive
or truncated.  Every report embeds the resolved configuration.
"""

import argparse
import sys
from pathlib import Path

from . import thurston as th
from .action import check_invariance, check_spinning
from .errors import InputError, NoPathError, ParameterError, TruncationError
from .io import dumps, load_distance_system, rational, read_json
from .metric import build_complex, measure_constants, spinning_threshold, verify_axioms
from .runs import build_run
from .windmill import build_windmill, free_product_certificate, locality_check

PASS, INPUT_ERROR, COUNTEREXAMPLE, INCONCLUSIVE = 0, 1, 2, 3


def _base(args):
    return Path(args.input).parent if args.input else Path(".")


def _need_input(args):
    if not args.input:
        raise InputError("--in is required for this command")
    return read_json(args.input)


def _run(args):
    desc = dict(_need_input(args))
    for key in ("depth", "word_bound", "radius"):
        val = getattr(args, key, None)
        if val is not None:
            desc[key] = val
    if args.K is not None:
        if "instance" in desc:
            desc["K"] = args.K
        elif isinstance(desc.get("complex"), dict):
            desc["complex"] = dict(desc["complex"], K=args.K)
        else:
            raise InputError("--K needs the complex to be given inline")
    return build_run(desc, _base(args))


def cmd_axioms(args):
    rep = verify_axioms(load_distance_system(_need_input(args)))
    return rep.to_dict(), PASS if rep.ok else COUNTEREXAMPLE


def cmd_complex(args):
    ds = load_distance_system(_need_input(args))
    g = build_complex(ds, rational(args.K or "1/2"))
    lab = g.labels
    return {
        "K": g.K,
        "vertices": lab,
        "edges": [[lab[i], lab[j]] for i, j in g.edges()],
        "diameter": g.diameter(),
        "connected": g.diameter() is not None,
    }, PASS


def cmd_constants(args):
    ds = load_distance_system(_need_input(args))
    g = build_complex(ds, rational(args.K or "1/2"))
    return measure_constants(ds, g).to_dict(), PASS


def _L(args, run):
    if args.L is None or args.L == "auto":
        return spinning_threshold(run.constants)
    return rational(args.L)


def cmd_spin_check(args):
    run = _run(args)
    L = _L(args, run)
    rep = check_spinning(run.family, run.action, run.distance, L, run.word_bound,
                         vertices=run.spin_vertices, tree=run.tree_neighbors,
                          witnesses=run.spin_witnesses)
    out = {"instance": run.name, "constants": run.constants.to_dict(), "spinning": rep.to_dict()}
    if rep.L_measured is None:
        return out, INCONCLUSIVE
    return out, PASS if rep.pass_ else COUNTEREXAMPLE


def cmd_windmill(args):
    run = _run(args)
    wd = build_windmill(run.action, run.family, run.graph, run.v0, run.depth)
    loc = locality_check(wd, run.distance, run.graph, run.constants)
    out = {"instance": run.name, "windmill": wd.to_dict(), "locality": loc, "settings": run.settings}
    if not loc["ok"] or not all(lev.connected for lev in wd.levels):
        return out, COUNTEREXAMPLE
    return out, INCONCLUSIVE if wd.truncated_at is not None and not args.allow_truncated else PASS


def cmd_certify(args):
    run = _run(args)
    L = _L(args, run)
    spin = check_spinning(run.family, run.action, run.distance, L, run.word_bound,
                          vertices=run.spin_vertices, tree=run.tree_neighbors,
                          witnesses=run.spin_witnesses)
    out = {"instance": run.name, "constants": run.constants.to_dict(), "spinning": spin.to_dict(),
           "settings": run.settings}
    if run.system is not None and run.name != "explicit":
        out["invariance"] = check_invariance(run.action.restricted(run.system.labels), run.system, 2)
    if not spin.pass_:
        out["certificate"] = None
        out["refused"] = "spinning condition not met"
        return out, COUNTEREXAMPLE
    wd = build_windmill(run.action, run.family, run.graph, run.v0, run.depth)
    cert = free_product_certificate(
        run.action, run.family, run.graph, run.v0, run.depth, run.word_bound,
        constants=run.constants, ds=run.distance if run.local is None else None,
        local=run.local, oracle=run.oracle, max_words=run.max_words, wd=wd, L=L,
        signature_vertices=run.signature_vertices, orbit_invariant=run.orbit_invariant,
        quotient_size=run.quotient_size)
    out["windmill"] = wd.to_dict()
    out["locality"] = locality_check(wd, run.distance, run.graph, run.constants)
    out["certificate"] = cert.to_dict()
    ok = cert.ok and out["locality"]["ok"] and out.get("invariance", {"ok": True})["ok"]
    return out, PASS if ok else COUNTEREXAMPLE


# -- thurston ---------------------------------------------------------------------

def _words(data):
    words = data.get("words")
    if words is None:
        raise InputError("expected a 'words' list")
    return words


def cmd_th_classify(args):
    data = _need_input(args)
    n = int(data.get("n", 1))
    rows = []
    for w in _words(data):
        m = th.derivative(w, n)
        rows.append({"word": w, "matrix": m.rows(), "trace": m.trace, "class": th.classify_nt(m)})
    return {"n": n, "words": rows}, PASS


def cmd_th_stretch(args):
    data = _need_input(args)
    n = int(data.get("n", 1))
    rows = []
    for w in _words(data):
        m = th.derivative(w, n)
        rows.append({"word": w, "trace": m.trace, "stretch_factor": th.stretch_factor(m)})
    return {"n": n, "words": rows}, PASS


def cmd_th_independence(args):
    data = _need_input(args)
    rep = th.normal_independence(data["f1"], data["f2"], int(data.get("n", 1)))
    return rep, PASS if rep["result"] == "independent" else INCONCLUSIVE


def _m_range(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise InputError(f"--m-range must look like 2:1000, got {text!r}") from None
    return lo, hi


def cmd_th_congruence(args):
    data = _need_input(args)
    g = int(data.get("genus", 2))
    if "form" in data:
        rep = th.HomologyRep(data["form"], data.get("classes", {}))
    else:
        rep = th.HomologyRep.standard(g, data.get("classes"))
    mr = _m_range(args.m_range) if args.m_range else tuple(data.get("m_range", (2, 1000)))
    cert = th.congruence_certificate(int(data.get("p1", 5)), int(data.get("p2", 7)), rep,
                                     data.get("c_class", "a1"), m_range=mr,
                                     c2_class=data.get("c2_class"))
    return cert, PASS if cert["ok"] else COUNTEREXAMPLE


def cmd_th_dihedral(args):
    data = read_json(args.input) if args.input else {}
    g_lo, g_hi = data.get("g", [3, 12])
    n_lo, n_hi = data.get("n", [1, 40])
    rows = []
    ok = True
    for g in range(g_lo, g_hi + 1):
        for n in range(n_lo, n_hi + 1):
            sym, hn = th.dihedral_power_commutator(g, n)
            perm = th.dihedral_permutation_commutator(g, n)
            expected = (2 % g, 0) if n % 2 else (0, 0)
            good = sym == perm == expected and (n % 2 == 1 or hn == (0, 0, n))
            ok = ok and good
            rows.append({"g": g, "n": n, "symbolic": list(sym), "permutation": list(perm), "ok": good})
    return {"parity_law": ok, "rows": rows}, PASS if ok else COUNTEREXAMPLE


def cmd_th_partition(args):
    data = _need_input(args)
    ok, witness = th.partition_compatible(data["P1"], data["P2"])
    return {"compatible": ok, "witness": witness}, PASS if ok else COUNTEREXAMPLE


COMMANDS = {
    "axioms": cmd_axioms,
    "complex": cmd_complex,
    "constants": cmd_constants,
    "spin-check": cmd_spin_check,
    "windmill": cmd_windmill,
    "certify": cmd_certify,
}
THURSTON = {
    "classify": cmd_th_classify,
    "stretch": cmd_th_stretch,
    "independence": cmd_th_independence,
    "congruence": cmd_th_congruence,
    "dihedral": cmd_th_dihedral,
    "partition": cmd_th_partition,
}


def _common(p):
    p.add_argument("--in", dest="input", help="input JSON file")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--depth", type=int)
    p.add_argument("--word-bound", dest="word_bound", type=int)
    p.add_argument("--L", help="spinning constant, a rational or 'auto'")
    p.add_argument("--K", help="edge threshold for the complex (default 1/2)")
    p.add_argument("--m-range", dest="m_range", help="congruence levels as lo:hi")
    p.add_argument("--radius", type=int, help="truncation radius for built-in instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-truncated", action="store_true",
                   help="treat a truncated windmill as a pass")


def make_parser():
    parser = argparse.ArgumentParser(prog="windmills", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _common(sub.add_parser(name))
    tp = sub.add_parser("thurston")
    tsub = tp.add_subparsers(dest="thurston_command", required=True)
    for name in THURSTON:
        _common(tsub.add_parser(name))
    return parser


def _config(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if v is not None}
    return cfg


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "thurston":
        fn = THURSTON[args.thurston_command]
    else:
        fn = COMMANDS[args.command]
    try:
        for key in ("depth", "word_bound", "radius"):
            val = getattr(args, key)
            if val is not None and val < 0:
                raise InputError(f"--{key.replace('_', '-')} must be non-negative")
        result, code = fn(args)
    except TruncationError as exc:
        result, code = {"error": str(exc)}, INCONCLUSIVE
    except (InputError, ParameterError, NoPathError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    status = {PASS: "pass", COUNTEREXAMPLE: "counterexample", INCONCLUSIVE: "inconclusive"}[code]
    text = dumps({"config": _config(args), "status": status, "result": result})
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
