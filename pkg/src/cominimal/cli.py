"""Command-line front end.

Subcommands: classify, build, verify, render, oracle.  Options may also
come from a flat ``key = value`` config file (``--config``); flags given on
the command line win.  Exit codes: 0 pass, 1 fail or refused hypothesis,
2 inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from . import lattice as lt
from .constructions import build_G, build_layers, greedy_prune
from .errors import (
    CapExceededError,
    CominimalError,
    DivergenceError,
    HypothesisError,
    InconclusiveError,
    SequenceError,
)
from .lacunary import build_T, build_V, build_W, classify_growth, make_sequence
from .lattice import Box
from .lazyset import difference, enumerate_window, from_finite
from .report import dumps, write_layer_dump, write_report
from .verify import (
    ORACLE_CAP,
    FiniteGroup,
    check_cominimal,
    check_prop_M,
    check_sum_bound,
    oracle_agreement,
    oracle_minimal_complements,
)

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64

# partner set, base set, growth flag that must hold
THEOREMS = {
    "thm1": ("E", "W", "thm1"),
    "thm2": ("F", "W", "thm2"),
    "thm3": ("G", "W", "thm3"),
    "thm4": ("P", "V", "thm4"),
    "thm5": ("Q", "V", "thm5"),
    "thm6": ("G", "V", "thm6"),
    "thm7": ("G", "T", "thm7"),
}

DEFAULTS = {
    "kind": "geometric",
    "base": 4,
    "values": None,
    "dim": 1,
    "n_max": None,
    "horizon": 32,
    "variant": "thm1",
    "window": None,
    "box": None,
    "out": None,
    "prop_m": False,
    "sum_bound": 0,
    "seed": 0,
    "sets": None,
    "by_layer": False,
    "moduli": "1,2,3,4,5,6,7,8",
    "random_modulus": 12,
    "random_count": 50,
    "embed_max": 8,
    "cap": ORACLE_CAP,
    "complements_of": None,
}

BOOL_KEYS = {"prop_m", "by_layer"}
INT_KEYS = {"base", "dim", "n_max", "horizon", "sum_bound", "seed", "random_modulus", "random_count", "embed_max", "cap"}


class UsageError(CominimalError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- config ------------------------------------------------------------------------


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key, value):
    if value is None:
        return None
    if key in BOOL_KEYS:
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("1", "true", "yes", "on")
    if key in INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise UsageError(f"{key} must be an integer, got {value!r}") from None
    return value


def resolve(args) -> dict:
    """Merge defaults < config file < explicit flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    return {k: _coerce(k, v) for k, v in cfg.items()}


def _ints(text: str) -> list:
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def sequence_from(cfg):
    if cfg["values"]:
        text = str(cfg["values"]).strip()
        if ";" in text or "(" in text:
            vals = [lt.parse_point(v) for v in text.replace(");(", ";").replace("),(", ";").split(";")]
        else:
            vals = _ints(text)
        return make_sequence("custom", vals)
    kind = cfg["kind"]
    if kind == "pow2_plus_k":
        return make_sequence(kind, None, cfg["dim"])
    return make_sequence(kind, cfg["base"], cfg["dim"])


def parse_window(text, dim: int) -> Box:
    """``lo,hi`` gives the cube [lo, hi]^dim; ``(a,b):(c,d)`` gives explicit corners."""
    text = str(text).strip()
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            box = Box(lt.parse_point(lo), lt.parse_point(hi))
        else:
            lo, hi = _ints(text)
            box = Box.cube(lo, hi, dim)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad window {text!r}: {exc}") from None
    if box.dim != dim:
        raise UsageError(f"window dimension {box.dim} does not match dim {dim}")
    return box


def _n_max(cfg, seq) -> int:
    return cfg["n_max"] if cfg["n_max"] is not None else (6 if seq.dim == 1 else 4)


def _emit(cfg, body, runtime, name):
    text = dumps(body)
    if cfg["out"]:
        out = Path(cfg["out"])
        path = out / name if out.suffix == "" else out
        write_report(path, body, runtime)
    sys.stdout.write(text)


def _growth_gate(seq, theorem, horizon):
    report = classify_growth(seq, horizon)
    if not report.eligible()[theorem]:
        raise HypothesisError(f"{theorem} hypothesis fails for {seq!r}", report)
    return report


# -- partner sets ----------------------------------------------------------------


def base_set(seq, name):
    return {"W": build_W, "V": build_V, "T": build_T}[name](seq)


def partner(cfg, seq, box=None):
    """(variant name, LazySet, per-layer point lists, notes) for the configured theorem."""
    variant = cfg["variant"]
    if variant not in THEOREMS:
        raise UsageError(f"unknown variant {variant!r}; choose from {', '.join(THEOREMS)}")
    kind, _, _ = THEOREMS[variant]
    n_max = _n_max(cfg, seq)
    notes = []
    if kind == "G":
        g = build_G(seq, n_max=n_max, require="ge2" if variant == "thm7" else "ge6")
        notes.append("m_k is the minimal admissible choice: " + ",".join(str(m) for m in g.m.prefix(n_max)))
        S = {"thm3": g.minus_thm3, "thm6": g.minus_thm6, "thm7": g.result}[variant]
        layers = {n: g.layer_points(n, box) for n in range(n_max + 1)}
        return "G", S, layers, notes
    c = build_layers(kind, seq, n_max, box=box)
    if c.truncated:
        notes.append("layers in d >= 2 are intersected with the bounding box")
    return kind, c.result, dict(c.layers), notes


# -- subcommands -------------------------------------------------------------------


def cmd_classify(cfg) -> int:
    start = time.perf_counter()
    seq = sequence_from(cfg)
    n = cfg["n_max"] if cfg["n_max"] is not None else cfg["horizon"]
    report = classify_growth(seq, n)
    body = {"sequence": seq.describe(), "growth": report.to_dict()}
    _emit(cfg, body, time.perf_counter() - start, "classify.json")
    return EXIT_PASS


def cmd_build(cfg) -> int:
    start = time.perf_counter()
    seq = sequence_from(cfg)
    variant = cfg["variant"]
    if variant not in THEOREMS:
        raise UsageError(f"unknown variant {variant!r}")
    _growth_gate(seq, "thm7_minimal" if variant == "thm7" else THEOREMS[variant][2], cfg["horizon"])
    box = parse_window(cfg["box"], seq.dim) if cfg["box"] else None
    if seq.dim >= 2 and box is None:
        raise UsageError("d >= 2 needs --box")
    name, _, layers, notes = partner(cfg, seq, box)
    files = {}
    out = Path(cfg["out"]) if cfg["out"] else None
    for n, pts in sorted(layers.items()):
        fname = f"{name}_{n}.txt"
        files[str(n)] = {"file": fname, "count": len(pts)}
        if out is not None:
            write_layer_dump(out / fname, pts)
    manifest = {
        "sequence": seq.describe(),
        "variant": variant,
        "set": name,
        "n_max": _n_max(cfg, seq),
        "box": None if box is None else {"lo": lt.format_point(box.lo), "hi": lt.format_point(box.hi)},
        "layers": files,
        "notes": notes,
    }
    if out is not None:
        write_report(out / "manifest.json", manifest, time.perf_counter() - start)
    else:
        for n, pts in sorted(layers.items()):
            sys.stdout.write(f"# {name}_{n}\n" + "".join(lt.format_point(p) + "\n" for p in pts))
        return EXIT_PASS
    sys.stdout.write(dumps(manifest))
    return EXIT_PASS


def _pruned_pair(S, B, w):
    pr = greedy_prune(S, B, w)
    if not pr.removed:
        return S, pr
    return difference(S, from_finite(pr.removed, dim=S.dim), name=S.name + "*"), pr


def cmd_verify(cfg) -> int:
    start = time.perf_counter()
    seq = sequence_from(cfg)
    variant = cfg["variant"]
    if variant not in THEOREMS:
        raise UsageError(f"unknown variant {variant!r}")
    _growth_gate(seq, THEOREMS[variant][2], cfg["horizon"])
    if not cfg["window"]:
        raise UsageError("verify needs --window")
    w = parse_window(cfg["window"], seq.dim)
    box = parse_window(cfg["box"], seq.dim) if cfg["box"] else (w if seq.dim >= 2 else None)
    name, S, _, notes = partner(cfg, seq, box)
    base_name = THEOREMS[variant][1]
    B = base_set(seq, base_name)
    body = {"sequence": seq.describe(), "variant": variant, "notes": notes}
    status = "pass"
    if name == "G":
        # the partner is a pruned subset of G, found greedily on the window
        S, pr = _pruned_pair(S, B, w)
        body["prune"] = {
            "order": "lex distance from the origin, ties broken lex",
            "retained": len(pr.retained),
            "removed": [lt.format_point(p) for p in pr.removed],
        }
    report = check_cominimal(S, B, w, pair_id=f"{variant}:{name}+{base_name}")
    body["pair"] = report.to_dict()
    status = _worst(status, report.status)
    if cfg["prop_m"]:
        body["prop_m"], st = _prop_m_suite(seq, w)
        status = _worst(status, st)
    if cfg["sum_bound"]:
        body["sum_bound"] = _sum_bound_suite(seq.dim, cfg["sum_bound"], cfg["seed"])
        status = _worst(status, "pass" if body["sum_bound"]["violations"] == 0 else "fail")
    body["status"] = status
    _emit(cfg, body, time.perf_counter() - start, "verify.json")
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[status]


_RANK = {"pass": 0, "inconclusive": 1, "fail": 2}


def _worst(a, b):
    return a if _RANK[a] >= _RANK[b] else b


def prop_m_indices(seq, part, w: Box) -> list:
    """Indices n whose interval I_n meets the window."""
    r = w.lex_radius()
    first = 1 if part in (2, 4) else 0
    out = []
    n = first
    while seq.term(n - 1) <= r:
        out.append(n)
        n += 1
    return out


def _prop_m_suite(seq, w):
    results = {}
    status = "pass"
    for part in (1, 2, 3, 4):
        entry = {}
        for n in prop_m_indices(seq, part, w):
            try:
                entry[str(n)] = "pass" if check_prop_M(seq, part, n, w) else "fail"
            except HypothesisError:
                entry[str(n)] = "hypothesis not met"
            except InconclusiveError:
                entry[str(n)] = "inconclusive"
            if entry[str(n)] in _RANK:
                status = _worst(status, entry[str(n)])
        results[str(part)] = entry
    return results, status


def _sum_bound_suite(dim, count, seed):
    rng = random.Random(seed)
    violations = 0
    for _ in range(count):
        P, Q, A, v, w = random_sum_bound_instance(rng, dim)
        if not check_sum_bound(P, Q, A, v, w):
            violations += 1
    return {"instances": count, "seed": seed, "violations": violations}


def random_sum_bound_instance(rng, dim, span=6):
    def pt():
        return tuple(rng.randint(-span, span) for _ in range(dim))

    P, Q = sorted([pt(), pt()])
    A = [pt() for _ in range(rng.randint(1, 4))]
    v = pt()
    w = Box.cube(-3 * span, 3 * span, dim)
    return P, Q, A, v, w


def cmd_render(cfg) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    start = time.perf_counter()
    seq = sequence_from(cfg)
    if seq.dim != 2:
        raise UsageError("render supports d = 2 only")
    if not cfg["window"]:
        raise UsageError("render needs --window")
    w = parse_window(cfg["window"], 2)
    if len(w) > 10**6:
        raise UsageError(f"window has {len(w)} points; the limit is 10^6")
    if not cfg["out"]:
        raise UsageError("render needs --out")
    names = [s.strip() for s in (cfg["sets"] or "W").split(",") if s.strip()]
    matplotlib.rcParams["svg.hashsalt"] = "cominimal"
    fig, ax = plt.subplots(figsize=(6, 6))
    markers = ["o", "s", "^", "D", "v", "P", "X"]
    plotted = {}
    for i, name in enumerate(names):
        if name in ("T", "V", "W"):
            groups = {name: enumerate_window(base_set(seq, name), w)[0]}
        elif name == "partner":
            if cfg["variant"] not in THEOREMS:
                raise UsageError(f"unknown variant {cfg['variant']!r}")
            _growth_gate(seq, THEOREMS[cfg["variant"]][2], cfg["horizon"])
            pname, S, layers, _ = partner(cfg, seq, w)
            if cfg["by_layer"]:
                groups = {f"{pname}_{n}": pts for n, pts in sorted(layers.items())}
            else:
                groups = {pname: enumerate_window(S, w)[0]}
        else:
            raise UsageError(f"unknown set {name!r}; use T, V, W or partner")
        for label, pts in groups.items():
            plotted[label] = len(pts)
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            ax.scatter(xs, ys, s=12, marker=markers[i % len(markers)], label=f"{label} ({len(pts)})")
    ax.set_xlim(w.lo[0] - 1, w.hi[0] + 1)
    ax.set_ylim(w.lo[1] - 1, w.hi[1] + 1)
    ax.set_aspect("equal")
    desc = seq.describe()
    ax.set_title(f"{desc['kind']} {desc.get('base', '')} d=2, variant {cfg['variant']}".replace("  ", " "))
    if plotted:
        ax.legend(loc="upper left", fontsize="small")
    out = Path(cfg["out"])
    path = out if out.suffix == ".svg" else out / "render.svg"
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    body = {"image": path.name, "window": {"lo": lt.format_point(w.lo), "hi": lt.format_point(w.hi)}, "counts": plotted}
    write_report(path.with_suffix(".json"), body, time.perf_counter() - start)
    sys.stdout.write(dumps(body))
    return EXIT_PASS


def cmd_oracle(cfg) -> int:
    start = time.perf_counter()
    cap = cfg["cap"]
    if cap > ORACLE_CAP:
        raise CapExceededError(f"cap {cap} exceeds the maximum {ORACLE_CAP}")
    moduli = _ints(cfg["moduli"])
    for m in moduli + [cfg["random_modulus"] or 0]:
        if m > cap:
            raise CapExceededError(f"modulus {m} exceeds cap {cap}")
    if cfg["complements_of"]:
        if len(moduli) != 1:
            raise UsageError("--complements-of needs exactly one modulus")
        g = FiniteGroup(moduli)
        A = [(a % moduli[0],) for a in _ints(cfg["complements_of"])]
        comps = oracle_minimal_complements(g, A, cap)
        body = {
            "group": f"Z_{moduli[0]}",
            "A": [a[0] for a in A],
            "minimal_complements": [[b[0] for b in B] for B in comps],
        }
        _emit(cfg, body, time.perf_counter() - start, "oracle.json")
        return EXIT_PASS
    rep = oracle_agreement(
        moduli,
        random_modulus=cfg["random_modulus"] or None,
        random_count=cfg["random_count"],
        seed=cfg["seed"],
        embed_max=cfg["embed_max"],
    )
    _emit(cfg, rep.to_dict(), time.perf_counter() - start, "oracle.json")
    return EXIT_PASS if rep.ok else EXIT_FAIL


# -- argument parsing --------------------------------------------------------------


def _add_sequence(p):
    p.add_argument("--kind", choices=["geometric", "power", "custom", "pow2_plus_k"])
    p.add_argument("--base", type=int)
    p.add_argument("--values", help="comma-separated integers, or ';'-separated points")
    p.add_argument("--dim", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--horizon", type=int, help="growth-check horizon")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cominimal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--out", help="output file or directory")
        _add_sequence(p)

    p = sub.add_parser("classify", help="check the growth hypotheses of a sequence")
    common(p)

    p = sub.add_parser("build", help="build a partner set and dump its layers")
    common(p)
    p.add_argument("--variant", choices=sorted(THEOREMS))
    p.add_argument("--box", help="bounding box for d >= 2, e.g. -50,50")

    p = sub.add_parser("verify", help="verify a co-minimal pair on a window")
    common(p)
    p.add_argument("--variant", choices=sorted(THEOREMS))
    p.add_argument("--window", help="lo,hi or (a,b):(c,d)")
    p.add_argument("--box")
    p.add_argument("--prop-m", dest="prop_m", action="store_true", help="also check Prop:M parts 1-4")
    p.add_argument("--sum-bound", dest="sum_bound", type=int, help="random sum-bound instances")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("render", help="draw d = 2 sets to an SVG")
    common(p)
    p.add_argument("--variant", choices=sorted(THEOREMS))
    p.add_argument("--window")
    p.add_argument("--sets", help="comma list of T, V, W, partner")
    p.add_argument("--by-layer", dest="by_layer", action="store_true")

    p = sub.add_parser("oracle", help="compare checkers with brute force on cyclic groups")
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--moduli", help="comma-separated moduli checked exhaustively")
    p.add_argument("--random-modulus", dest="random_modulus", type=int)
    p.add_argument("--random-count", dest="random_count", type=int)
    p.add_argument("--embed-max", dest="embed_max", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--complements-of", dest="complements_of", help="list minimal complements of this subset")
    return parser


COMMANDS = {
    "classify": cmd_classify,
    "build": cmd_build,
    "verify": cmd_verify,
    "render": cmd_render,
    "oracle": cmd_oracle,
}


_VALUE_FLAGS = ("--window", "--box", "--values")


def _glue_negative_values(argv):
    """Turn ``--window -64,64`` into ``--window=-64,64`` so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, CapExceededError, SequenceError, DivergenceError, OSError) as exc:
        sys.stderr.write(f"cominimal: error: {exc}\n")
        return EXIT_USAGE
    except HypothesisError as exc:
        sys.stderr.write(f"cominimal: refused: {exc}\n")
        if exc.report is not None:
            sys.stderr.write(dumps(exc.report.to_dict()))
        return EXIT_FAIL
    except InconclusiveError as exc:
        sys.stderr.write(f"cominimal: inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
