"""Command-line reports.

Exit status: 0 when every check in the report passes, 1 when a check
fails, 2 for an invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .crosssec import beta_root_coords, beta_roots, cross_nilpotence_depth, stratum_shape
from .isocrystal import enumerate_bgmu
from .rootdata import PresetError, build_root_datum, is_dominant
from .strata import count_precondition, cover_pairs, hasse_dot, identity_report, length_formula, stratum_table_tsv

COMMANDS = ("bgmu", "shapes", "hasse", "identity", "oracle", "cross")
DEFAULT_FORMAT = {"bgmu": "tsv", "shapes": "json", "hasse": "dot", "identity": "json", "oracle": "tsv", "cross": "tsv"}
ALLOWED_FORMATS = {
    "bgmu": ("tsv", "json"),
    "shapes": ("json",),
    "hasse": ("dot", "json"),
    "identity": ("json",),
    "oracle": ("tsv", "json"),
    "cross": ("tsv", "json"),
}


class ConfigError(ValueError):
    pass


@dataclass
class CliConfig:
    command: str
    group: str
    mu: tuple[int, ...] | None = None
    q: int | None = None
    M: int | None = None
    format: str | None = None
    output: str | None = None
    workers: int | None = None


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def parse_mu(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"--mu must be comma-separated integers, got {text!r}") from None


def validate(cfg: CliConfig):
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    try:
        datum = build_root_datum(cfg.group)
    except PresetError as exc:
        raise ConfigError(str(exc)) from None
    fmt = cfg.format or DEFAULT_FORMAT[cfg.command]
    if fmt not in ALLOWED_FORMATS[cfg.command]:
        raise ConfigError(f"format {fmt!r} is not available for {cfg.command}")
    cfg.format = fmt
    if cfg.command != "cross":
        if cfg.mu is None:
            raise ConfigError("--mu is required")
        if len(cfg.mu) != datum.rank:
            raise ConfigError(f"--mu has {len(cfg.mu)} entries but {cfg.group} has rank {datum.rank}")
        if not is_dominant(datum, cfg.mu):
            raise ConfigError(f"mu={cfg.mu} is not dominant")
    if cfg.command == "oracle":
        if not cfg.group.startswith("GL"):
            raise ConfigError("the oracle only handles GL_n presets")
        if cfg.q is None or not _is_prime(cfg.q):
            raise ConfigError("--q must be a prime")
        if cfg.M is None or cfg.M < 1:
            raise ConfigError("--M must be at least 1")
        if not count_precondition(datum, cfg.mu, cfg.M):
            raise ConfigError(f"--M {cfg.M} is below the stratum ceilings for mu={cfg.mu}")
    return datum


def _bgmu(datum, cfg):
    if cfg.format == "tsv":
        return stratum_table_tsv(datum, cfg.mu), True
    rows = [stratum_shape(datum, cfg.mu, b).to_dict() for b in enumerate_bgmu(datum, cfg.mu)]
    return json.dumps(rows, indent=2) + "\n", True


def _shapes(datum, cfg):
    rows = [stratum_shape(datum, cfg.mu, b).to_dict() for b in enumerate_bgmu(datum, cfg.mu)]
    return json.dumps(rows, indent=2) + "\n", True


def _hasse(datum, cfg):
    classes = enumerate_bgmu(datum, cfg.mu)
    edges = cover_pairs(datum, classes)
    ok = all(length_formula(datum, cfg.mu, classes[j], classes[i]) == 1 for i, j in edges)
    if cfg.format == "dot":
        return hasse_dot(datum, cfg.mu), ok
    doc = {
        "nodes": [b.to_dict() for b in classes],
        "edges": [[i, j] for i, j in edges],
        "ranked": ok,
    }
    return json.dumps(doc, indent=2) + "\n", ok


def _identity(datum, cfg):
    rep = identity_report(datum, cfg.mu)
    return json.dumps(rep, indent=2) + "\n", rep["full"]["ok"] and rep["irr"]["ok"]


def _oracle(datum, cfg):
    from .fqoracle import tally_strata

    rep = tally_strata(datum.rank, cfg.mu, cfg.q, cfg.M, workers=cfg.workers)
    return (rep.to_tsv() if cfg.format == "tsv" else rep.to_json()), rep.ok


def _cross(datum, cfg):
    depth = cross_nilpotence_depth(datum)
    betas = beta_root_coords(datum)
    if cfg.format == "json":
        doc = {
            "group": datum.name,
            "beta_roots": [list(b) for b in betas],
            "beta_characters": [v.to_strings() for v in beta_roots(datum)],
            "nilpotence_depth": depth,
            "positive_roots": len(datum.positive_roots),
        }
        return json.dumps(doc, indent=2) + "\n", True
    lines = ["i\tbeta (simple-root coordinates)"]
    lines += [f"{i}\t{','.join(map(str, b))}" for i, b in enumerate(betas, start=1)]
    lines.append(f"nilpotence_depth\t{depth}")
    return "\n".join(lines) + "\n", True


HANDLERS = {"bgmu": _bgmu, "shapes": _shapes, "hasse": _hasse, "identity": _identity, "oracle": _oracle, "cross": _cross}


def run(cfg: CliConfig) -> int:
    try:
        datum = validate(cfg)
    except ConfigError as exc:
        print(json.dumps({"status": 2, "error": str(exc)}), file=sys.stderr)
        return 2
    text, ok = HANDLERS[cfg.command](datum, cfg)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not ok:
        print(json.dumps({"status": 1, "error": f"{cfg.command} verification failed", "group": cfg.group}), file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newton-strata", description="Newton strata of Steinberg cross-sections.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--group", required=True, help="preset name, e.g. GL3, SL4, B2_ad, 2A3, 3D4")
        if name != "cross":
            p.add_argument("--mu", required=True, help="comma-separated integers, e.g. 1,0,0")
        if name == "oracle":
            p.add_argument("--q", type=int, required=True, help="residue field size (a prime)")
            p.add_argument("--M", type=int, required=True, help="truncation level")
            p.add_argument("--workers", type=int, default=None)
        p.add_argument("--format", choices=ALLOWED_FORMATS[name], default=None)
        p.add_argument("--output", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        mu = parse_mu(args.mu) if getattr(args, "mu", None) is not None else None
    except ConfigError as exc:
        print(json.dumps({"status": 2, "error": str(exc)}), file=sys.stderr)
        return 2
    cfg = CliConfig(
        command=args.command,
        group=args.group,
        mu=mu,
        q=getattr(args, "q", None),
        M=getattr(args, "M", None),
        format=args.format,
        output=args.output,
        workers=getattr(args, "workers", None),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
