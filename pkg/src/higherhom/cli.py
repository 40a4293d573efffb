"""Command line front end: ``higherhom COMMAND PROBLEM [options]``.

Exit status is 0 when the verdict holds, 1 when it fails and 2 for bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .approximation import (
    ConstructionError,
    NotInAddError,
    d_cokernel,
    d_kernel,
    m_resolution,
    verify_d_exact,
)
from .decomposition import DecompositionError
from .functors import PreconditionError, quotient_equivalence_report
from .modules import hom_dim
from .problem import ProblemError, ProblemFile, fixture_names, load_problem
from .quiver import validate_algebra
from .tilting import (
    AtlasError,
    certify_atlas,
    check_cotorsion_pair,
    describe,
    ext_table,
    is_d_cluster_tilting,
    is_d_rigid,
    search_d_ct,
)

COMMANDS = ("validate", "ext-table", "check-ct", "search-ct", "dkernel", "dcokernel",
            "m-resolve", "functor-report", "cotorsion-check")


class InputError(ValueError):
    """The problem file lacks something the command needs."""


def _report(command: str) -> dict:
    return {"command": command, "verdict": True, "verdicts": {}, "witnesses": [], "tables": {}, "timings": {}}


def _grid(rows, cols, grid) -> dict:
    return {"rows": list(rows), "cols": list(cols), "grid": grid}


def _need_sub(prob: ProblemFile):
    if not prob.subcategory:
        raise InputError("this command needs a nonempty 'subcategory' line")
    return prob.sub()


def _need_atlas(prob: ProblemFile):
    if not prob.atlas:
        raise InputError("this command needs an 'atlas' line")
    return prob.atlas_sub()


def _morphism(prob: ProblemFile, name: str | None):
    if name is None:
        if not prob.morphisms:
            raise InputError("the problem file defines no morphism")
        name = next(iter(prob.morphisms))
    if name not in prob.morphisms:
        raise InputError(f"undefined morphism {name!r}")
    return name, prob.morphisms[name]


def _failures(rep) -> list[dict]:
    return [f.as_dict() for f in rep.failures]


def cmd_validate(prob: ProblemFile, args, rep: dict):
    alg = prob.algebra
    diag = validate_algebra(alg)
    rep["verdicts"]["algebra"] = diag.ok
    rep["witnesses"] += [{"check": "algebra", "message": m} for m in diag]
    rep["verdicts"]["modules"] = True  # relations are enforced while parsing
    bad = [n for n, f in prob.morphisms.items() if not f.is_valid()]
    rep["verdicts"]["morphisms"] = not bad
    rep["witnesses"] += [{"check": "morphisms", "message": f"{n} is not a module map"} for n in bad]
    if prob.subcategory:
        diag = prob.sub().validate(args.seed)
        rep["verdicts"]["subcategory"] = diag.ok
        rep["witnesses"] += [{"check": "subcategory", "message": m} for m in diag]
    if prob.atlas:
        diag = certify_atlas(prob.atlas_sub(), args.seed)
        rep["verdicts"]["atlas"] = diag.ok
        rep["witnesses"] += [{"check": "atlas", "message": m} for m in diag]
    rep["tables"]["algebra"] = {"dim": alg.dim, "basis": [alg.label(i) for i in range(alg.dim)]}
    rep["tables"]["modules"] = {n: list(m.dims) for n, m in prob.modules.items()}


def cmd_ext_table(prob: ProblemFile, args, rep: dict):
    if prob.subcategory:
        sub = prob.sub()
    elif prob.atlas:
        sub = prob.atlas_sub()
    else:
        raise InputError("ext-table needs a 'subcategory' or 'atlas' line")
    k_max = args.max_ext or max(prob.d - 1, 1)
    table = ext_table(sub, k_max)
    for k in range(1, k_max + 1):
        grid = [[table[i][j][k - 1] for j in range(len(sub))] for i in range(len(sub))]
        rep["tables"][f"ext^{k}"] = _grid(sub.names, sub.names, grid)
        for i, a in enumerate(sub.names):
            for j, b in enumerate(sub.names):
                if grid[i][j]:
                    rep["witnesses"].append({"pair": [a, b], "ext_index": k, "dim": grid[i][j]})


def cmd_check_ct(prob: ProblemFile, args, rep: dict):
    sub, atlas = _need_sub(prob), _need_atlas(prob)
    ct = is_d_cluster_tilting(sub, atlas, prob.d, args.seed)
    rep["verdicts"]["d_cluster_tilting"] = ct.verdict
    rep["verdicts"]["d_rigid"] = is_d_rigid(sub, prob.d).verdict
    rep["witnesses"] += _failures(ct)
    rep["tables"]["d"] = prob.d
    rep["tables"]["notes"] = ct.notes


def cmd_search_ct(prob: ProblemFile, args, rep: dict):
    atlas = _need_atlas(prob)
    found = search_d_ct(atlas, prob.d, args.seed)
    rep["verdicts"]["found"] = bool(found)
    rep["tables"]["d"] = prob.d
    rep["tables"]["subcategories"] = [list(s.names) for s in found]


def _sequence(prob: ProblemFile, args, rep: dict, build, guaranteed: str):
    sub = _need_sub(prob)
    name, f = _morphism(prob, args.morphism)
    try:
        seq = build(f, sub, prob.d)
    except NotInAddError as exc:
        raise InputError(f"morphism {name!r}: {exc}") from None
    except ConstructionError as exc:
        rep["verdicts"]["constructed"] = False
        rep["witnesses"].append({"morphism": name, "stage": exc.stage, "message": str(exc)})
        return
    check = verify_d_exact(seq, sub)
    rep["verdicts"]["constructed"] = True
    rep["verdicts"]["complex"] = check.is_complex
    # a d-cokernel guarantees the contravariant test, a d-kernel the covariant one
    if guaranteed == "left":
        rep["verdicts"]["left_exact"] = check.left
    else:
        rep["verdicts"]["right_exact"] = check.right
    rep["tables"]["exactness"] = check.verdict
    rep["tables"]["alternating_sum_zero"] = not any(seq.alternating_dim_sum())
    rep["witnesses"].append({
        "morphism": name,
        "sequence": [describe(x, sub, args.seed) for x in seq.objects],
        "dims": [list(x) for x in seq.dim_vectors()],
        "exactness": check.verdict,
        "left_failure": list(check.left_failure) if check.left_failure else None,
        "right_failure": list(check.right_failure) if check.right_failure else None,
    })


def cmd_dkernel(prob, args, rep):
    _sequence(prob, args, rep, d_kernel, "right")


def cmd_dcokernel(prob, args, rep):
    _sequence(prob, args, rep, d_cokernel, "left")


def cmd_m_resolve(prob: ProblemFile, args, rep: dict):
    sub = _need_sub(prob)
    if not sub.contains_projectives():
        raise InputError("m-resolve needs every indecomposable projective in the subcategory")
    if args.module:
        if args.module not in prob.modules:
            raise InputError(f"undefined module {args.module!r}")
        names = [args.module]
    else:
        names = prob.atlas or list(prob.modules)
    ok = True
    for name in names:
        x = prob.modules[name]
        try:
            res = m_resolution(x, sub, prob.d)
        except ConstructionError as exc:
            ok = False
            rep["witnesses"].append({"module": name, "closed": False, "message": str(exc)})
            continue
        diag = res.check_exact()
        ok = ok and diag.ok
        terms = [describe(m, sub, args.seed) for m in reversed(res.modules)]
        rep["witnesses"].append({"module": name, "closed": True, "exact": diag.ok,
                                 "length": len(res.modules), "resolution": terms + [name]})
    rep["verdicts"]["resolutions"] = ok


def cmd_functor_report(prob: ProblemFile, args, rep: dict):
    sub, atlas = _need_sub(prob), _need_atlas(prob)
    try:
        r = quotient_equivalence_report(sub, atlas, prob.d, args.seed)
    except PreconditionError as exc:
        rep["verdicts"]["precondition"] = False
        rep["witnesses"].append({"message": str(exc)})
        return
    rep["verdicts"]["precondition"] = True
    rep["verdicts"]["e_dimension"] = r.e_dim == r.algebra_dim
    rep["verdicts"]["structure_constants"] = r.matched is not None
    rep["verdicts"]["fully_faithful"] = r.gamma_hom == r.module_hom
    rep["verdicts"]["restriction"] = all(r.restriction_ok)
    rep["witnesses"] += [{"message": m} for m in r.failures]
    rep["tables"]["gamma_dim"] = r.gamma_dim
    rep["tables"]["e"] = [sub.names[i] for i in r.e]
    rep["tables"]["e_gamma_e_dim"] = r.e_dim
    rep["tables"]["algebra_dim"] = r.algebra_dim
    rep["tables"]["identification"] = r.matched
    rep["tables"]["hom_functors"] = _grid(sub.names, sub.names, r.gamma_hom)
    rep["tables"]["hom_modules"] = _grid(sub.names, sub.names, r.module_hom)


def cmd_cotorsion_check(prob: ProblemFile, args, rep: dict):
    sub, atlas = _need_sub(prob), _need_atlas(prob)
    r = check_cotorsion_pair(sub, atlas, args.seed)
    rep["verdicts"]["cotorsion_pair"] = r.verdict
    rep["witnesses"] += _failures(r)
    rep["witnesses"] += r.witnesses
    rep["tables"]["cluster_tilting_d2"] = is_d_cluster_tilting(sub, atlas, 2, args.seed).verdict
    rep["tables"]["hom"] = _grid(sub.names, sub.names,
                                 [[hom_dim(x, y) for y in sub.members] for x in sub.members])


HANDLERS = {
    "validate": cmd_validate,
    "ext-table": cmd_ext_table,
    "check-ct": cmd_check_ct,
    "search-ct": cmd_search_ct,
    "dkernel": cmd_dkernel,
    "dcokernel": cmd_dcokernel,
    "m-resolve": cmd_m_resolve,
    "functor-report": cmd_functor_report,
    "cotorsion-check": cmd_cotorsion_check,
}


def run_command(cmd: str, prob: ProblemFile, args=None) -> dict:
    if cmd not in HANDLERS:
        raise InputError(f"unknown command {cmd!r}")
    if args is None:
        args = argparse.Namespace(seed=prob.seed, max_ext=None, morphism=None, module=None, timings=False)
    rep = _report(cmd)
    start = time.perf_counter()
    HANDLERS[cmd](prob, args, rep)
    rep["verdict"] = all(rep["verdicts"].values())
    if getattr(args, "timings", False):
        rep["timings"] = {"seconds": round(time.perf_counter() - start, 4)}
    return rep


def _fmt_grid(g: dict) -> list[str]:
    cols = [str(c) for c in g["cols"]]
    width = max([len(str(r)) for r in g["rows"]] + [1])
    cw = [max(len(c), max((len(str(row[j])) for row in g["grid"]), default=1)) for j, c in enumerate(cols)]
    lines = [" " * width + "  " + "  ".join(c.rjust(w) for c, w in zip(cols, cw))]
    for r, row in zip(g["rows"], g["grid"]):
        lines.append(str(r).ljust(width) + "  " + "  ".join(str(v).rjust(w) for v, w in zip(row, cw)))
    return lines


def _fmt_witness(w: dict) -> str:
    if "sequence" in w:
        return f"{w['morphism']}: " + " -> ".join(w["sequence"])
    if "resolution" in w:
        return f"{w['module']}: 0 -> " + " -> ".join(w["resolution"]) + " -> 0"
    if "terms" in w:
        return f"{w['kind']} sequence for {w['module']}: 0 -> " + " -> ".join(w["terms"]) + " -> 0"
    if "condition" in w:
        s = f"{w['condition']}: {', '.join(w['witness'])}"
        if w.get("ext_index"):
            s += f" (Ext^{w['ext_index']} dim {w['dim']})"
        return s
    if "pair" in w:
        return f"Ext^{w['ext_index']}({w['pair'][0]}, {w['pair'][1]}) = {w['dim']}"
    return "; ".join(f"{k}: {v}" for k, v in w.items())


def format_human(rep: dict) -> str:
    out = [f"command: {rep['command']}", f"verdict: {'PASS' if rep['verdict'] else 'FAIL'}"]
    if rep["verdicts"]:
        out.append("checks:")
        out += [f"  {k}: {'yes' if v else 'no'}" for k, v in rep["verdicts"].items()]
    for key, val in rep["tables"].items():
        if isinstance(val, dict) and "grid" in val:
            out.append(f"{key}:")
            out += ["  " + line for line in _fmt_grid(val)]
        elif isinstance(val, dict):
            out.append(f"{key}:")
            out += [f"  {k}: {v}" for k, v in val.items()]
        elif isinstance(val, list) and val and isinstance(val[0], list):
            out.append(f"{key}:")
            out += ["  {" + ", ".join(map(str, v)) + "}" for v in val]
        else:
            out.append(f"{key}: {val}")
    if rep["witnesses"]:
        out.append("witnesses:")
        out += ["  " + _fmt_witness(w) for w in rep["witnesses"]]
    if rep["timings"]:
        out.append("timings: " + ", ".join(f"{k}={v}" for k, v in rep["timings"].items()))
    return "\n".join(out) + "\n"


def emit_report(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2) + "\n"
    if fmt == "human":
        return format_human(rep)
    raise ValueError(f"unknown format {fmt!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="higherhom", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("problem", help=f"problem file, or a bundled fixture: {', '.join(fixture_names())}")
    p.add_argument("--format", choices=("json", "human"), default="human")
    p.add_argument("--seed", type=int, default=None, help="overrides the seed in the problem file")
    p.add_argument("--max-ext", type=int, default=None, help="highest Ext degree for ext-table")
    p.add_argument("--morphism", default=None, help="morphism for dkernel/dcokernel (default: first)")
    p.add_argument("--module", default=None, help="module for m-resolve (default: whole atlas)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        prob = load_problem(args.problem)
        if args.seed is None:
            args.seed = prob.seed
        if args.max_ext is not None and args.max_ext < 1:
            raise InputError("--max-ext must be >= 1")
        rep = run_command(args.command, prob, args)
    except ProblemError as exc:
        for e in exc.errors:
            print(f"{args.problem}: {e}", file=sys.stderr)
        return 2
    except (InputError, AtlasError, FileNotFoundError) as exc:
        print(f"{args.problem}: {exc}", file=sys.stderr)
        return 2
    except DecompositionError as exc:
        print(f"{args.problem}: {args.command}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(emit_report(rep, args.format))
    return 0 if rep["verdict"] else 1


if __name__ == "__main__":
    sys.exit(main())
