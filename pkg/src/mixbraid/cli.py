"""Command line entry point: `mixbraid <verb> [flags]`.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from fractions import Fraction

from . import ktheory
from .braids import BraidWord, lift_word, word_matrix
from .fi import FiPath, FiPoint, lr_classify, validate_point, word_path
from .harness import BudgetExceeded, pipeline, verify_intertwining, verify_relations
from .ktheory import BoxPolicyError, phase_window
from .quiver import ambient_data
from .toric import (orbifold_phase, parse_coset, parse_gamma, phase,
                    sub_problem)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {
    "seed": "20240611",
    "max_padding": str(ktheory.DEFAULT_MAX_PAD),
    "workers": "1",
    "budget_seconds": "",
    "gap": "1.0",
    "eps": "1e-9",
    "samples": "24",
}
CONFIG_NAME = "mixbraid.cfg"


def load_config(path: str | None) -> dict:
    """Flat `key = value` file; lines starting with # are comments."""
    cfg = dict(DEFAULTS)
    if path is None:
        path = os.environ.get("MIXBRAID_CONFIG") or (CONFIG_NAME if os.path.exists(CONFIG_NAME) else None)
    if path is None:
        return cfg
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with open(path) as fh:
        parser.read_string("[mixbraid]\n" + fh.read())
    for key, val in parser["mixbraid"].items():
        if key not in DEFAULTS:
            raise ValueError(f"unknown config key {key!r} in {path}")
        cfg[key] = val
    return cfg


def default_seed() -> int:
    return int(load_config(None)["seed"])


def _emit(args, data, text: str | None = None) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2, default=str)
    print(text if text is not None else json.dumps(data, indent=2, default=str))


def _gamma(args):
    if args.k is None:
        raise ValueError("--k is required")
    return parse_gamma(args.gamma, args.k)


def _matrix_text(rows) -> str:
    return "\n".join(" ".join(str(x) for x in r) for r in rows)


def cmd_model(args, cfg) -> int:
    if args.k is None:
        raise ValueError("--k is required")
    _emit(args, ambient_data(args.k).to_json())
    return EXIT_OK


def cmd_phase(args, cfg) -> int:
    G = _gamma(args)
    coset = parse_coset(args.coset, args.k)
    ph = orbifold_phase(G, coset, args.wall) if args.wall else phase(G, coset)
    _emit(args, ph.to_json())
    return EXIT_OK


def cmd_weights(args, cfg) -> int:
    sp = sub_problem(_gamma(args))
    _emit(args, {"gamma": sp.G.label(), "coordinates": sp.labels(), "W": sp.W}, _matrix_text(sp.W))
    return EXIT_OK


def cmd_window(args, cfg) -> int:
    G = _gamma(args)
    ph = phase(G, parse_coset(args.coset, args.k))
    offsets = [int(x) for x in args.offsets.split(",")] if args.offsets else None
    chars = phase_window(ph, offsets)
    _emit(args, {"phase": ph.name(), "offsets": offsets or [0] * len(ph.strata),
                 "characters": [list(c) for c in chars]},
          "\n".join(" ".join(map(str, c)) for c in chars) or "(empty)")
    return EXIT_OK


def cmd_matrix(args, cfg) -> int:
    G = _gamma(args)
    w = BraidWord.parse(args.word, args.k)
    arrow = lift_word(G, parse_coset(args.coset, args.k), w)
    M = word_matrix(arrow)
    data = {"arrow": arrow.to_json(), "matrix": M.to_json()}
    _emit(args, data, f"{arrow.describe()}\nbasis {list(M.source_basis)} -> {list(M.target_basis)}\n"
                      + _matrix_text(M.rows()))
    return EXIT_OK


def _budget(cfg):
    return float(cfg["budget_seconds"]) if cfg["budget_seconds"] else None


def cmd_verify(args, cfg) -> int:
    if args.k is None:
        raise ValueError("--k is required")
    G = parse_gamma(args.gamma, args.k) if args.gamma else None
    cosets = [parse_coset(args.coset, args.k)] if args.coset else None
    # canonical window lifts unless a seed asks for re-randomized ones
    rep = verify_relations(args.k, G, cosets, args.seed, int(cfg["workers"]), _budget(cfg))
    _emit(args, rep.to_json(), rep.summary())
    return EXIT_OK if rep.status == "pass" else EXIT_FAIL


def cmd_intertwine(args, cfg) -> int:
    if args.k is None:
        raise ValueError("--k is required")
    fine = parse_gamma(args.gamma, args.k) if args.gamma else None
    coarse = parse_gamma(args.coarse, args.k) if args.coarse else None
    rep = verify_intertwining(args.k, fine, coarse, int(cfg["workers"]), _budget(cfg))
    _emit(args, rep.to_json(), rep.summary())
    return EXIT_OK if rep.status == "pass" else EXIT_FAIL


def _to_exact(path: FiPath) -> FiPath:
    return FiPath.from_roots(path.G, [s.roots for s in path.samples], True, path.negative_region)


def _load_fi(file: str, exact: bool):
    with open(file) as fh:
        data = json.load(fh)
    if "samples" in data:
        path = FiPath.from_json(data)
        return _to_exact(path) if exact and not path.exact else path
    k = int(data["k"])
    G = parse_gamma(data.get("gamma"), k)
    ex = exact or bool(data.get("exact", False))
    if ex:
        roots = [[Fraction(str(a)), Fraction(str(b))] for a, b in data["roots"]]
    else:
        roots = [complex(float(a), float(b)) for a, b in data["roots"]]
    return FiPoint.make(G, roots, ex)


def cmd_fi_check(args, cfg) -> int:
    if not args.file:
        raise ValueError("fi-check needs a point or path file")
    obj = _load_fi(args.file, args.exact)
    eps = float(cfg["eps"])
    samples = obj.samples if isinstance(obj, FiPath) else [obj]
    report = []
    for n, s in enumerate(samples):
        bad = validate_point(s, eps)
        report.append({"sample": n, "violations": bad,
                       "large_radius_coset": list(lr_classify(s, float(cfg["gap"])) or []) or None})
    ok = all(not r["violations"] for r in report)
    lines = [f"sample {r['sample']}: " + ("ok" if not r["violations"] else "; ".join(r["violations"]))
             for r in report]
    _emit(args, {"status": "pass" if ok else "fail", "samples": report}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fi_braid(args, cfg) -> int:
    if args.file:
        path = _load_fi(args.file, args.exact)
        if not isinstance(path, FiPath):
            raise ValueError("fi-braid needs a path file")
    else:
        # synthesize the path of a braid word
        G = _gamma(args)
        w = BraidWord.parse(args.word, args.k)
        path = word_path(G, parse_coset(args.coset, args.k), w, int(cfg["samples"]))
        if args.exact:
            path = _to_exact(path)
    res = pipeline(path, None, float(cfg["gap"]), float(cfg["eps"]))
    if args.path_out:
        with open(args.path_out, "w") as fh:
            json.dump(path.to_json(), fh, default=str)
    text = (f"word {res['arrow']['word']}  {res['arrow']['source']} -> {res['arrow']['target']}\n"
            + _matrix_text(res["matrix"]["matrix"]) + f"\ntwist {res['twist_vector']}")
    _emit(args, res, text)
    return EXIT_OK


def cmd_plot(args, cfg) -> int:
    from .plot import path_svg, triangulation_svg
    if not args.svg:
        raise ValueError("plot needs --svg FILE")
    if args.file:
        path = _load_fi(args.file, False)
        svg = path_svg(path)
    else:
        G = _gamma(args)
        ph = orbifold_phase(G, parse_coset(args.coset, args.k), args.wall) if args.wall \
            else phase(G, parse_coset(args.coset, args.k))
        svg = triangulation_svg(ph)
    with open(args.svg, "w") as fh:
        fh.write(svg)
    print(f"wrote {args.svg}")
    return EXIT_OK


VERBS = {
    "model": cmd_model, "phase": cmd_phase, "weights": cmd_weights, "window": cmd_window,
    "matrix": cmd_matrix, "verify": cmd_verify, "intertwine": cmd_intertwine,
    "fi-check": cmd_fi_check, "fi-braid": cmd_fi_braid, "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mixbraid", description=__doc__.splitlines()[0])
    ap.add_argument("verb", choices=sorted(VERBS))
    ap.add_argument("file", nargs="?", help="point or path JSON for fi-check, fi-braid, plot")
    ap.add_argument("--k", type=int)
    ap.add_argument("--gamma", help='partition such as "01|234", "fin" or "crs"')
    ap.add_argument("--coarse", help="coarser partition for intertwine")
    ap.add_argument("--coset", help='ordering such as "1,0,2"')
    ap.add_argument("--wall", type=int, help="use the orbifold phase beyond this wall")
    ap.add_argument("--offsets", help="window offsets, one per stratum")
    ap.add_argument("--word", help='braid word such as "s1 s2 s1^-1"')
    ap.add_argument("--seed", type=int, help="re-randomize window lifts with this seed")
    ap.add_argument("--max-box", type=int, help="maximum box padding")
    ap.add_argument("--exact", action="store_true", help="Gaussian-rational arithmetic for FI data")
    ap.add_argument("--out", help="also write JSON here")
    ap.add_argument("--svg", help="SVG output file for plot")
    ap.add_argument("--path-out", help="fi-braid: save the synthesized path")
    ap.add_argument("--config", help=f"key-value config file (default ./{CONFIG_NAME})")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        ktheory.set_max_pad(args.max_box if args.max_box is not None else int(cfg["max_padding"]))
        return VERBS[args.verb](args, cfg)
    except (BoxPolicyError, BudgetExceeded) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
