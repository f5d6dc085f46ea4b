"""``cptk`` command line.

Exit codes: 0 success/PASS, 1 verification FAIL (witness printed), 2 usage or
precondition error.  JSON output is an envelope
``{"command", "seed", "status", "result"}``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import coarse
from .config import DEFAULT_SEED, Budget, RunConfig
from .dot import export_dot
from .embeddings import CapacityError, embed_f2, lemma42_generators, act_word
from .free_group import ReducedWord, WordError, standard_paradox
from .harem import HallViolation, harem_matching, verify_harem
from .lamplighter import LamplighterElement, check_action, lamplighter_act
from .paradox import (
    GroupModel,
    ParadoxicalDecomposition,
    TransferError,
    left_translations,
    psi_first_coordinate,
    psi_identity,
    transfer_paradox,
    verify_paradoxical,
)
from .suites import SUITES, run_suite
from .whyte import eliminate_periodic, forest_certificate, verify_forest


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, list):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _window(args) -> coarse.CoarseWindow:
    cfg: dict = coarse.parse_space(args.space)
    if getattr(args, "k", None) is not None:
        cfg["k"] = args.k
    return coarse.make_window(cfg, args.radius)


def _parse_label(window, text: str):
    kind = window.ambient.get("kind")
    if kind == "tree":
        return "" if text in ("e", "") else text
    if kind == "grid":
        x, y = text.split(":")
        return (int(x), int(y))
    return int(text)


def _points(window, text: str) -> frozenset:
    if ".." in text:
        lo, hi = text.split("..")
        return window.ids(range(int(lo), int(hi) + 1))
    return window.ids(_parse_label(window, t.strip()) for t in text.split(","))


# --------------------------------------------------------------------------
# commands; each returns (status, result, dot_object_or_None, text)


def cmd_space(args, cfg):
    w = _window(args)
    res = coarse.window_to_json(w)
    text = f"{w.ambient['kind']} radius {args.radius}: {w.size} points, interior {len(w.interior)}"
    return "OK", res, w, text


def cmd_expansion(args, cfg):
    w = _window(args)
    F = _points(w, args.points)
    ratio = coarse.expansion_ratio(w, F)
    nb = coarse.entourage_power_neighborhood(w, 1, F)
    res = {"size": len(F), "neighbourhood": len(nb), "ratio": str(ratio)}
    return "OK", res, None, f"|E[F]|/|F| = {len(nb)}/{len(F)} = {ratio}"


def cmd_folner(args, cfg):
    w = _window(args)
    r = coarse.folner_search(w, Fraction(args.theta), cfg.budget)
    res = {
        "theta": str(r.theta),
        "verdict": r.verdict,
        "witness": [coarse._label_to_json(x) for x in w.names(r.witness)] if r.found else None,
        "ratio": str(r.ratio) if r.found else None,
        "method": r.method,
        "explored": r.explored,
    }
    text = f"{r.verdict}" + (f": |F|={len(r.witness)}, ratio {r.ratio} ({r.method})" if r.found else "")
    return "OK", res, None, text


def cmd_harem(args, cfg):
    w = _window(args)
    R = w.relation.minus_diagonal()
    try:
        f = harem_matching(w, R, args.d)
    except HallViolation as exc:
        res = {
            "violation": exc.kind,
            "witness": [coarse._label_to_json(x) for x in w.names(exc.witness)],
            "neighbourhood": len(exc.neighborhood),
            "d": args.d,
        }
        return "FAIL", res, None, str(exc)
    rep = verify_harem(f)
    res = {**f.to_json(), "checks": rep.to_json()}
    return rep.status, res, None, rep.summary()


def cmd_whyte(args, cfg):
    w = _window(args)
    if args.relabel_seed is not None:
        import random

        perm = list(range(w.size))
        random.Random(args.relabel_seed).shuffle(perm)
        w = coarse.permute_window(w, perm)
    f = harem_matching(w, w.relation.minus_diagonal(), args.d)
    elim = eliminate_periodic(f)
    rep = verify_forest(elim.f_star, w, args.d, elim.certified_region)
    if not elim.certified_region:
        rep.fail("empty certified region")
    cert = forest_certificate(w, elim, args.d, rep)
    cert = {**cert, "rays": elim.rays.to_json(w.labels), "warnings": elim.warnings}
    text = f"{rep.summary()} certified {len(elim.certified_region)}/{w.size}"
    return rep.status, cert, (w, elim.f_star, elim.certified_region), text


def cmd_lemma42(args, cfg):
    from .suites import suite_lemma42

    w = ReducedWord.parse(args.word)
    pair = lemma42_generators(w)
    res = {"pair": pair.to_json(), "phi_w_0": act_word(pair, w, 0)}
    status = "PASS" if res["phi_w_0"] == 2 * len(w) else "FAIL"
    text = f"w={w}: φ(w)(0) = {res['phi_w_0']}"
    if args.check_all_len:
        rep = suite_lemma42(max_len=args.check_all_len, max_v=min(args.check_all_len, 4))
        res["check"] = rep.to_json()
        status = "PASS" if status == "PASS" and rep.passed else "FAIL"
        text += f"; {rep.summary()} over {rep.details['words']} words"
    return status, res, None, text


def cmd_embed(args, cfg):
    w = _window(args)
    emb = embed_f2(w, args.L, cfg.budget)
    rep = emb.report
    return rep.status, emb.to_json(), emb.gens["a"], rep.summary()


def cmd_lamplighter(args, cfg):
    if args.element is not None:
        g = LamplighterElement.from_json(json.loads(args.element))
        z = args.z
        y = lamplighter_act(g, z)
        res = {"element": g.to_json(), "z": z, "image": y}
        return "OK", res, None, f"{z} -> {y}"
    chk = check_action(args.n, args.trials, cfg.seed)
    res = {"n": args.n, "trials": args.trials, "failures": chk.failures[:20], "max_displacement_ratio": round(chk.max_displacement_ratio, 4)}
    status = "PASS" if chk.ok else "FAIL"
    return status, res, None, f"lamplighter: {status} ({args.trials} trials, n={args.n})"


def _transfer(model: GroupModel):
    sp = standard_paradox()
    if model.kind == "free2":
        return transfer_paradox(model, left_translations(model), psi_identity(), sp).decomposition
    return transfer_paradox(model, left_translations(model), psi_first_coordinate(model.n), sp).decomposition


def cmd_paradox(args, cfg):
    model = GroupModel.parse(args.model)
    if args.action == "build":
        if model.kind != "free2":
            raise UsageError("paradox build produces the decomposition of F2; use --model f2")
        pdec = standard_paradox()
        return "OK", {"model": model.name, **pdec.to_json()}, None, "standard decomposition of F2 (4 pieces)"
    if args.action == "transfer":
        pdec = _transfer(model)
        text = f"transferred to {model.name}: {len(pdec.p_family) + len(pdec.q_family)} pieces"
        return "OK", {"model": model.name, **pdec.to_json()}, None, text
    # verify
    if args.input:
        obj = json.loads(Path(args.input).read_text())
        if "result" in obj:
            obj = obj["result"]
        model = GroupModel.parse(obj.get("model", args.model))
        pdec = ParadoxicalDecomposition.from_json(obj, None if model.kind == "free2" else model.n)
    else:
        pdec = standard_paradox() if model.kind == "free2" else _transfer(model)
    rep = verify_paradoxical(pdec, model, args.maxlen, args.form)
    return rep.status, rep.to_json(), None, rep.summary()


def cmd_asdim(args, cfg):
    w = _window(args)
    probe = coarse.asdim_zero_probe(w)
    path = coarse.longest_injective_path(w, budget=cfg.budget)
    res = {**probe.to_json(), "longest_path": len(path), "path_optimal": path.optimal}
    text = f"{probe.verdict}: max component {probe.max_component}, longest path {len(path)}"
    return "OK", res, None, text


def cmd_suite(args, cfg):
    rep = run_suite(args.name, cfg.seed, cfg.budget)
    return rep.status, rep.to_json(), None, rep.summary()


COMMANDS = {
    "space": cmd_space,
    "expansion": cmd_expansion,
    "folner": cmd_folner,
    "harem": cmd_harem,
    "whyte": cmd_whyte,
    "lemma42": cmd_lemma42,
    "embed": cmd_embed,
    "lamplighter": cmd_lamplighter,
    "paradox": cmd_paradox,
    "asdim": cmd_asdim,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")

    def space_args(p, default_space="line", default_radius=10):
        p.add_argument("--space", default=default_space)
        p.add_argument("--radius", type=int, default=default_radius)
        p.add_argument("--k", type=int, default=None, help="number of intervals (interval space)")

    parser = argparse.ArgumentParser(prog="cptk", description="Desk-scale coarse geometry and paradoxical decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space", parents=[common], help="build a gallery window")
    space_args(p)
    p = sub.add_parser("expansion", parents=[common], help="|E[F]|/|F| for interior F")
    space_args(p)
    p.add_argument("--points", required=True, help="comma list of labels, or lo..hi on integer spaces")
    p = sub.add_parser("folner", parents=[common], help="search for a Følner witness")
    space_args(p)
    p.add_argument("--theta", required=True, help="rational > 1, e.g. 3/2")
    p = sub.add_parser("harem", parents=[common], help="(d-1)-to-1 matching inside E minus the diagonal")
    space_args(p, "tree4", 6)
    p.add_argument("--d", type=int, default=4)
    p = sub.add_parser("whyte", parents=[common], help="harem matching, cycle elimination, forest check")
    space_args(p, "tree4", 6)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--relabel-seed", type=int, default=None, help="shuffle point indices first")
    p = sub.add_parser("lemma42", parents=[common], help="the two permutations attached to a word")
    p.add_argument("--word", required=True, help="letters a, b, A, B (A = a^-1)")
    p.add_argument("--check-all-len", type=int, default=0, help="also check every word up to this length")
    p = sub.add_parser("embed", parents=[common], help="free group inside the wobbling group of a window")
    space_args(p, "line", 200)
    p.add_argument("--L", type=int, default=2)
    p = sub.add_parser("lamplighter", parents=[common], help="lamplighter action")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--element", default=None, help='JSON {"n":..,"lamps":[[pos,perm]],"shift":..}')
    p.add_argument("--z", type=int, default=0)
    p = sub.add_parser("paradox", parents=[common], help="paradoxical decompositions")
    p.add_argument("action", choices=("build", "transfer", "verify"))
    p.add_argument("--model", default="f2", help="f2 or f2xc<n>")
    p.add_argument("--maxlen", type=int, default=6)
    p.add_argument("--input", default=None, help="decomposition JSON to verify")
    p.add_argument("--form", choices=("classical", "joint"), default=None)
    p = sub.add_parser("asdim", parents=[common], help="[E]-component probe and longest path")
    space_args(p)
    p = sub.add_parser("suite", parents=[common], help="run a named acceptance suite")
    p.add_argument("name", choices=sorted(SUITES))
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        subcommand=args.command,
        flags={k: v for k, v in vars(args).items() if k not in ("command", "seed", "out", "format")},
        seed=args.seed,
        budget=Budget.from_env(),
        output=args.out,
        format=args.format,
    )
    try:
        status, result, dot_obj, text = COMMANDS[args.command](args, cfg)
    except (coarse.PreconditionError, coarse.WindowError, WordError, CapacityError, TransferError, UsageError, KeyError, ValueError) as exc:
        sys.stderr.write(f"cptk {args.command}: error: {exc}\n")
        return 2
    if cfg.format == "json":
        env = {"command": args.command, "seed": cfg.seed, "status": status, "result": _jsonable(result)}
        _emit(json.dumps(env, indent=2, ensure_ascii=False) + "\n", cfg.output)
    elif cfg.format == "dot":
        if dot_obj is None:
            sys.stderr.write(f"cptk {args.command}: no DOT rendering for this command\n")
            return 2
        _emit(export_dot(dot_obj), cfg.output)
    else:
        _emit(f"{text}\nseed {cfg.seed}\n", cfg.output)
    if status == "FAIL":
        if cfg.format != "text":
            sys.stderr.write(text + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
