"""Command-line front end.

    embedbounds bounds       --family sphere --dim 2 --epsilon 0.3333
    embedbounds cover        --family sphere --dim 1 --delta 0.5
    embedbounds width        --family ball --dim 20 --trials 100000
    embedbounds embed-search --family sphere --dim 2 --ambient 50
    embedbounds rip          --n 64 --s 8 --m-grid 8,16,32,64
    embedbounds validate

Common flags: --seed, --format {csv,json}, --out PATH, --config PATH.  A
config file holds ``key=value`` lines whose keys are the long flag names
(dashes or underscores); explicit flags win over the file.  A descriptor
written by :func:`write_descriptor` is a valid config file.

Exit codes: 0 success, 1 a check or sandwich failed, 2 usage or
precondition error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import checks
from .bounds import (
    BoundConstants,
    DistortionBudget,
    ManifoldDescriptor,
    covering_lower_bound,
    embedding_lb_from_width,
    closed_form_lower_bound,
    implied_closed_form_constants,
    low_reach_volume_ratio,
    main_lower_bound,
    regime_threshold,
    rip_lower_bound,
    wakin_upper_bound,
)
from .errors import NotApplicable
from .estimators import (
    PointCloud,
    gaussian_width_mc,
    greedy_net,
    minimal_embedding_dim_search,
    packing_count,
)
from .models import ModelFamily, descriptor, embed_isometric, sample
from .sparse import build_subset_family, family_to_vectors, median_eps_hat, rip_experiment, rip_minimal_m

COMMANDS = ("bounds", "cover", "width", "embed-search", "rip", "validate")

# defaults applied after flags and config have been merged
DEFAULTS = {
    "seed": 0,
    "format": "csv",
    "epsilon": 1 / 3,
    "rho": 1 / 3,
    "sudakov_c": 0.25,
    "ball_width_c": 1.0,
    "radius": 1.0,
    "count": 2000,
    "trials": None,  # per command, see TRIALS
    "ambient": 50,
    "success_fraction": 0.5,
    "m_grid": "8,16,32,64",
}
TRIALS = {"width": 10_000, "embed-search": 10, "rip": 50}
EPSILON = {"rip": 0.5}


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    output_format: str = "csv"
    output_path: Path | None = None
    params: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p):
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", type=Path)
    p.add_argument("--config", type=Path)


def _add_constants(p):
    p.add_argument("--sudakov-c", type=float)
    p.add_argument("--ball-width-c", type=float)
    p.add_argument("--c1", type=float, help="closed-form constant for the high-reach regime")
    p.add_argument("--c2", type=float, help="closed-form constant for the low-reach regime")
    p.add_argument("--jl-c", type=float)
    p.add_argument("--rip-c", type=float)


def _add_family(p):
    p.add_argument("--family", choices=("sphere", "ball", "torus"))
    p.add_argument("--dim", type=int, help="intrinsic dimension (number of circles for torus)")
    p.add_argument("--radius", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embedbounds", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="lower/upper bounds for a manifold descriptor")
    _add_common(p)
    _add_constants(p)
    _add_family(p)
    p.add_argument("--intrinsic-dim", type=int)
    p.add_argument("--volume", type=float)
    p.add_argument("--log-volume", type=float)
    p.add_argument("--reach", type=float)
    p.add_argument("--diameter", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--rho", type=float)

    p = sub.add_parser("cover", help="sampled nets against the covering lower bound")
    _add_common(p)
    _add_family(p)
    p.add_argument("--count", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--save-cloud", type=Path)

    p = sub.add_parser("width", help="Monte Carlo Gaussian width")
    _add_common(p)
    _add_constants(p)
    _add_family(p)
    p.add_argument("--csv", type=Path, help="point cloud CSV instead of a family sample")
    p.add_argument("--count", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--save-cloud", type=Path)

    p = sub.add_parser("embed-search", help="empirical minimal projection dimension vs bounds")
    _add_common(p)
    _add_constants(p)
    _add_family(p)
    p.add_argument("--csv", type=Path, help="point cloud CSV instead of a family sample")
    p.add_argument("--ambient", type=int, help="ambient dimension to embed the sample into")
    p.add_argument("--count", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--success-fraction", type=float)
    p.add_argument("--save-cloud", type=Path)

    p = sub.add_parser("rip", help="sparse-vector family and RIP distortion trials")
    _add_common(p)
    _add_constants(p)
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--m-grid", type=str, help="comma-separated projection dimensions")
    p.add_argument("--trials", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--success-fraction", type=float)
    p.add_argument("--target-n", type=int)
    p.add_argument("--save-family", type=Path)

    p = sub.add_parser("validate", help="run the numerical invariant suite")
    _add_common(p)
    # negative control for the test-suite: forces the Sudakov check to fail
    p.add_argument("--corrupt-sudakov-c", type=float, help=argparse.SUPPRESS)

    parser._subparser_map = sub.choices  # used by the config merge
    return parser


def read_config(path: Path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _merge_config(subparser, args) -> None:
    if getattr(args, "config", None) is None:
        return
    try:
        values = read_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    actions = {a.dest: a for a in subparser._actions}
    for key, raw in values.items():
        if key not in actions or key in ("config", "help"):
            continue  # descriptor files carry keys other commands ignore
        if getattr(args, key) is not None:
            continue
        action = actions[key]
        try:
            value = action.type(raw) if action.type else raw
        except ValueError as exc:
            raise UsageError(f"config key {key}: {exc}") from exc
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"config key {key}: {value!r} not in {sorted(action.choices)}")
        setattr(args, key, value)


def parse(argv=None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(parser._subparser_map[args.command], args)
    except UsageError as exc:
        parser.error(str(exc))
    params = {k: v for k, v in vars(args).items() if k not in ("command", "seed", "format", "out", "config")}
    if params.get("epsilon", 0) is None and args.command in EPSILON:
        params["epsilon"] = EPSILON[args.command]
    for key, value in DEFAULTS.items():
        if key in params and params[key] is None:
            params[key] = value
    if "trials" in params and params["trials"] is None:
        params["trials"] = TRIALS[args.command]
    return RunConfig(
        command=args.command,
        seed=args.seed if args.seed is not None else DEFAULTS["seed"],
        output_format=args.format or DEFAULTS["format"],
        output_path=args.out,
        params=params,
    )


# ---------------------------------------------------------------------------
# helpers


def _constants(p) -> BoundConstants:
    return BoundConstants(
        sudakov_c=p["sudakov_c"],
        ball_width_c=p["ball_width_c"],
        override_C1=p.get("c1"),
        override_C2=p.get("c2"),
        jl_c=p.get("jl_c"),
        rip_c=p.get("rip_c"),
    )


def _family(p) -> ModelFamily:
    if p.get("family") is None or p.get("dim") is None:
        raise UsageError("--family and --dim are required")
    return ModelFamily(p["family"], p["dim"], p["radius"])


def _descriptor(p) -> tuple[str, ManifoldDescriptor]:
    if p.get("family") is not None:
        fam = _family(p)
        return fam.name, descriptor(fam)
    missing = [k for k in ("intrinsic_dim", "reach", "diameter") if p.get(k) is None]
    if p.get("volume") is None and p.get("log_volume") is None:
        missing.append("volume")
    if missing:
        raise UsageError("descriptor needs --family/--dim or --" + ", --".join(m.replace("_", "-") for m in missing))
    if p.get("log_volume") is not None:
        M = ManifoldDescriptor.from_log_volume(p["intrinsic_dim"], p["log_volume"], p["reach"], p["diameter"])
    else:
        M = ManifoldDescriptor(p["intrinsic_dim"], p["volume"], p["reach"], p["diameter"])
    return "custom", M


def _cloud(p, seed) -> PointCloud:
    if p.get("csv") is not None:
        return PointCloud.from_csv(p["csv"])
    return sample(_family(p), p["count"], seed)


def write_descriptor(M: ManifoldDescriptor, path) -> None:
    """key=value text usable as ``--config`` for the ``bounds`` command."""
    lines = [
        f"intrinsic_dim={M.intrinsic_dim}",
        f"log_volume={M.log_volume!r}",
        f"reach={M.reach!r}",
        f"diameter={M.diameter!r}",
    ]
    if M.ambient_dim is not None:
        lines.append(f"ambient_dim={M.ambient_dim}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_descriptor(path) -> ManifoldDescriptor:
    v = read_config(path)
    amb = int(v["ambient_dim"]) if "ambient_dim" in v else None
    if "log_volume" in v:
        return ManifoldDescriptor.from_log_volume(int(v["intrinsic_dim"]), float(v["log_volume"]),
                                                  float(v["reach"]), float(v["diameter"]), amb)
    return ManifoldDescriptor(int(v["intrinsic_dim"]), float(v["volume"]), float(v["reach"]),
                              float(v["diameter"]), amb)


# ---------------------------------------------------------------------------
# commands; each returns (rows, exit_code)


def cmd_bounds(cfg: RunConfig):
    p = cfg.params
    k = _constants(p)
    name, M = _descriptor(p)
    eps, rho = p["epsilon"], p["rho"]
    lb = main_lower_bound(M, eps, k)
    row = {
        "manifold": name,
        "intrinsic_dim": M.intrinsic_dim,
        "log_volume": M.log_volume,
        "reach": M.reach,
        "diameter": M.diameter,
        "epsilon": eps,
        "rho": rho,
        "regime": lb.regime.value,
        "regime_threshold": regime_threshold(M),
        "lower_bound": lb.m_lb,
        "lower_bound_method": lb.method,
        "lower_bound_vacuous": lb.vacuous,
        "delta_used": lb.delta_used,
    }
    c1, c2 = implied_closed_form_constants(k)
    c1 = k.override_C1 if k.override_C1 is not None else c1
    c2 = k.override_C2 if k.override_C2 is not None else c2
    closed = closed_form_lower_bound(M, eps, c1, c2)
    row.update(closed_form_c1=c1, closed_form_c2=c2, closed_form_lower_bound=closed.value)
    try:
        ub = wakin_upper_bound(M, min(eps, 1 / 3), rho)
        row.update(upper_bound=ub.m_ub, upper_bound_epsilon=min(eps, 1 / 3), assumption_ok=ub.assumption_ok)
    except NotApplicable as exc:
        row.update(upper_bound=None, upper_bound_epsilon=None, assumption_ok=None, note=str(exc))
    # V / tau^d is 0 for infinite reach
    log_ratio = M.log_volume - M.intrinsic_dim * math.log(M.reach) if M.finite_reach else -math.inf
    need = low_reach_volume_ratio(M.intrinsic_dim)
    row.update(
        v_over_tau_d=math.exp(min(log_ratio, 709.0)) if log_ratio < 709.0 else math.inf,
        low_reach_min_ratio=need,
        low_reach_ratio_ok=bool(log_ratio >= math.log(need)),
    )
    if row["upper_bound"] is not None:
        row["sandwich_ok"] = bool(lb.m_lb <= row["upper_bound"])
    row.update(k.as_row())
    return [row], 0


def cmd_cover(cfg: RunConfig):
    p = cfg.params
    if p.get("delta") is None:
        raise UsageError("--delta is required")
    fam = _family(p)
    cloud = sample(fam, p["count"], cfg.seed)
    if p.get("save_cloud"):
        cloud.to_csv(p["save_cloud"])
    cb = covering_lower_bound(cloud.truth, p["delta"])
    net = greedy_net(cloud, p["delta"])
    packing = packing_count(cloud, 2 * p["delta"])
    verdict = cb.simple_bound <= cb.tight_bound <= net.size and packing <= net.size
    row = {
        "family": fam.name,
        "count": p["count"],
        "seed": cfg.seed,
        "delta": p["delta"],
        "geodesic_radius": cb.geodesic_radius,
        "tight_bound": cb.tight_bound,
        "simple_bound": cb.simple_bound,
        "net_size": net.size,
        "packing_count_2delta": packing,
        "verdict": "pass" if verdict else "fail",
    }
    return [row], 0 if verdict else 1


def cmd_width(cfg: RunConfig):
    p = cfg.params
    cloud = _cloud(p, cfg.seed)
    if p.get("save_cloud"):
        cloud.to_csv(p["save_cloud"])
    est = gaussian_width_mc(cloud, p["trials"], cfg.seed)
    row = {
        "cloud": cloud.label,
        "count": len(cloud),
        "ambient_dim": cloud.ambient_dim,
        "trials": est.trials,
        "seed": est.seed,
        "width": est.mean,
        "std_error": est.std_error,
    }
    if cloud.truth is not None:
        k = _constants(p)
        budget = DistortionBudget.symmetric(p["epsilon"])
        row.update(
            epsilon=p["epsilon"],
            width_lower_bound=embedding_lb_from_width(budget, cloud.truth.diameter, max(est.mean, 0.0), k),
        )
        row.update(k.as_row())
    return [row], 0


def cmd_embed_search(cfg: RunConfig):
    p = cfg.params
    cloud = _cloud(p, cfg.seed)
    if p.get("csv") is None:
        cloud = embed_isometric(cloud, max(p["ambient"], cloud.ambient_dim), cfg.seed)
    if p.get("save_cloud"):
        cloud.to_csv(p["save_cloud"])
    eps = p["epsilon"]
    m_emp = minimal_embedding_dim_search(cloud, eps, p["trials"], p["success_fraction"], cfg.seed)
    row = {
        "cloud": cloud.label,
        "count": len(cloud),
        "ambient_dim": cloud.ambient_dim,
        "epsilon": eps,
        "trials": p["trials"],
        "success_fraction": p["success_fraction"],
        "seed": cfg.seed,
        "lower_bound": None,
        "empirical_m": m_emp,
        "upper_bound": None,
        "assumption_ok": None,
        "sandwich_ok": None,
    }
    code = 0
    if cloud.truth is not None:
        k = _constants(p)
        lb = main_lower_bound(cloud.truth, eps, k)
        row["lower_bound"] = lb.m_lb
        ok = lb.m_lb <= m_emp
        if cloud.truth.finite_reach and eps <= 1 / 3:
            ub = wakin_upper_bound(cloud.truth, eps, p["rho"])
            row.update(upper_bound=ub.m_ub, assumption_ok=ub.assumption_ok)
            ok = ok and m_emp <= ub.m_ub
        row["sandwich_ok"] = ok
        row.update(k.as_row())
        code = 0 if ok else 1
    return [row], code


def _grid(text: str) -> list[int]:
    try:
        grid = [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--m-grid: {exc}") from exc
    if not grid or min(grid) < 1:
        raise UsageError("--m-grid needs positive integers")
    return grid


def cmd_rip(cfg: RunConfig):
    p = cfg.params
    if p.get("n") is None or p.get("s") is None:
        raise UsageError("--n and --s are required")
    n, s, eps = p["n"], p["s"], p["epsilon"]
    k = _constants(p)
    bound = rip_lower_bound(n, s, eps, k)  # validates n, s
    grid = _grid(p["m_grid"])
    family = build_subset_family(n, s, p.get("target_n"), seed=cfg.seed)
    if p.get("save_family"):
        family.save(p["save_family"])
    vectors = family_to_vectors(family)
    rows = [{"kind": "family", "n": n, "s": s, "family_size": len(family)}]
    medians = []
    for m in grid:
        trials = rip_experiment(vectors, m, p["trials"], cfg.seed)
        med = median_eps_hat(trials)
        medians.append(med)
        rows.append({"kind": "trials", "n": n, "s": s, "m": m, "trials": p["trials"], "median_eps_hat": med,
                     "success_fraction": float(np.mean([t.eps_hat <= eps for t in trials]))})
    monotone = all(b < a for a, b in zip(medians, medians[1:]))
    rows.append({"kind": "trend", "n": n, "s": s, "medians_strictly_decreasing": monotone})
    m_min = rip_minimal_m(vectors, eps, p["trials"], p["success_fraction"], cfg.seed)
    ok = bound.value <= m_min
    rows.append({"kind": "lower_bound", "n": n, "s": s, "epsilon": eps, "rip_lower_bound": bound.value,
                 "vacuous": bound.vacuous, "empirical_min_m": m_min, "sandwich_ok": ok, **k.as_row()})
    return rows, 0 if ok else 1


def cmd_validate(cfg: RunConfig):
    p = cfg.params
    k = BoundConstants()
    if p.get("corrupt_sudakov_c") is not None:
        k = BoundConstants(sudakov_c=p["corrupt_sudakov_c"])
    rows = checks.run_all(k, seed=cfg.seed)
    return rows, 0 if all(r["passed"] for r in rows) else 1


HANDLERS = {
    "bounds": cmd_bounds,
    "cover": cmd_cover,
    "width": cmd_width,
    "embed-search": cmd_embed_search,
    "rip": cmd_rip,
    "validate": cmd_validate,
}


# ---------------------------------------------------------------------------
# output


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, np.generic):
        return value.item()
    return value


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        clean = [{k: _json_value(v) for k, v in r.items()} for r in rows]
        return json.dumps(clean, indent=2) + "\n"
    keys: list[str] = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([_cell(r.get(k)) for k in keys])
    return buf.getvalue()


def run(cfg: RunConfig) -> int:
    rows, code = HANDLERS[cfg.command](cfg)
    text = render(rows, cfg.output_format)
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        Path(cfg.output_path).write_text(text)
    return code


def main(argv=None) -> int:
    cfg = parse(argv)
    try:
        return run(cfg)
    except (UsageError, ValueError) as exc:
        print(f"embedbounds {cfg.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
