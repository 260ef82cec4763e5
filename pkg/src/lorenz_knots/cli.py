"""Command-line entry point: ``lorenz-knots <command> [options]``.

Every run writes its artifacts to ``<out>/<command>-<hash>/`` where ``hash``
is derived from the run configuration, and every artifact embeds that
configuration and the package version.  Exit status: 0 success,
2 domain error, 3 no convergence or failed assembly, 4 no generic projection
direction, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import hashlib
import json
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .assembly import AssemblyConfig, assemble_invariant_curve
from .errors import LorenzKnotError
from .knots import diagram_svg, identify
from .manifolds import KINDS, equilibria, manifold_branch
from .ode import Params
from .template import (
    MAX_WORD_LENGTH,
    first_word_of_type,
    orbit_report,
    template_orbit,
    word_to_matrix,
)
from .tpoint import MissConfig, find_tpoint, sweep, sweep_csv

COMMANDS = ("equilibria", "manifold", "tpoint", "sweep", "knot", "template")
# settings that change how a run executes but not what it produces
EXECUTION_KEYS = ("out", "jobs", "deterministic", "config")


@dataclass
class RunConfig:
    command: str = "knot"
    rho: float = 30.0
    sigma: float = 10.0
    beta: float = 8.0 / 3.0
    rho_min: float = 20.0
    rho_max: float = 40.0
    sigma_min: float = 8.0
    sigma_max: float = 12.0
    resolution: int = 21
    tol: float = 1e-10
    tol_tp: float = 1e-8
    eps_rel: float = 1e-6
    delta_conn: float = 1e-4
    delta_simple_rel: float = 1e-3
    horizon: float = 50.0
    inflation: float = 3.0
    partner: str = "auto"
    source: str = "origin"
    sign: int = 1
    seed: int = 0
    directions: int = 1
    word: str = "LR"
    scan_target: str = ""
    max_length: int = 8
    out: str = "runs"
    jobs: int = 1
    deterministic: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("tol", "tol_tp", "eps_rel", "delta_conn", "delta_simple_rel", "horizon",
                     "inflation"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.resolution < 2 or self.directions < 1 or self.jobs < 1:
            raise ValueError("resolution >= 2, directions >= 1 and jobs >= 1 are required")
        if self.partner not in ("auto", "p_plus", "p_minus"):
            raise ValueError(f"partner must be auto, p_plus or p_minus, not {self.partner!r}")
        if self.source not in KINDS:
            raise ValueError(f"source must be one of {KINDS}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    # flat key=value representation

    def to_text(self, include_execution: bool = True) -> str:
        lines = []
        for f in fields(self):
            if not include_execution and f.name in EXECUTION_KEYS:
                continue
            v = getattr(self, f.name)
            lines.append(f"{f.name}={v!r}" if isinstance(v, float) else f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_text(cls, text: str) -> dict:
        """Key/value pairs from a config file, converted to field types."""
        types = {f.name: f.type for f in fields(cls)}
        out = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            out[key] = _convert(types[key], value)
        return out

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(**cls.parse_text(text))

    def content(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)
                if f.name not in EXECUTION_KEYS}

    def digest(self) -> str:
        return hashlib.sha256(self.to_text(False).encode()).hexdigest()[:12]

    def params(self) -> Params:
        return Params(self.rho, self.sigma, self.beta)

    def miss_config(self) -> MissConfig:
        return MissConfig(tol=self.tol, eps_rel=self.eps_rel, horizon=self.horizon,
                          partner=self.partner)

    def assembly_config(self) -> AssemblyConfig:
        return AssemblyConfig(tol=self.tol, eps_rel=self.eps_rel, delta_conn=self.delta_conn,
                              horizon=self.horizon, inflation=self.inflation,
                              tol_tp=self.tol_tp, delta_simple_rel=self.delta_simple_rel)


def _convert(kind, value: str):
    kind = kind if isinstance(kind, str) else kind.__name__
    if kind == "float":
        return float(value)
    if kind == "int":
        return int(value)
    if kind == "bool":
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {value!r}")
    return value


# ---------------------------------------------------------------------------
# artifacts


class RunDir:
    """Per-run artifact directory; files are written as they are produced."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.path = os.path.join(cfg.out, f"{cfg.command}-{cfg.digest()}")
        os.makedirs(self.path, exist_ok=True)
        self.written = []

    def header(self) -> dict:
        return {"tool": "lorenz_knots", "version": __version__, "config": self.cfg.content()}

    def _write(self, name: str, text: str) -> str:
        path = os.path.join(self.path, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        self.written.append(path)
        return path

    def json(self, name: str, payload: dict) -> str:
        doc = dict(self.header())
        doc.update(payload)
        return self._write(name, json.dumps(doc, indent=1, sort_keys=True, default=_jsonable)
                           + "\n")

    def text(self, name: str, body: str, comment: str = "#") -> str:
        head = f"{comment} lorenz_knots {__version__}\n"
        head += "".join(f"{comment} {line}\n" for line in self.cfg.to_text(False).splitlines())
        return self._write(name, head + body)

    def raw(self, name: str, body: str) -> str:
        return self._write(name, body)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    return str(obj)


def _complex_list(values):
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


# ---------------------------------------------------------------------------
# commands


def cmd_equilibria(cfg: RunConfig, run: RunDir) -> str:
    eqs = equilibria(cfg.params())
    payload = {kind: {"location": eq.location.tolist(),
                      "eigenvalues": _complex_list(eq.eigenvalues)}
               for kind, eq in eqs.items()}
    run.json("equilibria.json", {"equilibria": payload})
    return "ok"


def cmd_manifold(cfg: RunConfig, run: RunDir) -> str:
    p = cfg.params()
    eqs = equilibria(p)
    br = manifold_branch(p, eqs[cfg.source], cfg.sign,
                         eps=cfg.eps_rel * (1 + float(np.linalg.norm(eqs[cfg.source].location))),
                         horizon=cfg.horizon, tol=cfg.tol, delta_conn=cfg.delta_conn,
                         all_equilibria=eqs)
    doc = json.loads(br.to_json())
    run.json("manifold.json", {"manifold": doc})
    return br.termination


def cmd_tpoint(cfg: RunConfig, run: RunDir) -> str:
    tp = find_tpoint(cfg.params(), tol_tp=cfg.tol_tp, cfg=cfg.miss_config())
    run.json("tpoint.json", {"tpoint": tp.to_dict(), "trace": tp.trace})
    return f"rho={tp.params.rho:.6f} sigma={tp.params.sigma:.6f}"


def cmd_sweep(cfg: RunConfig, run: RunDir) -> str:
    rows = sweep((cfg.rho_min, cfg.rho_max), (cfg.sigma_min, cfg.sigma_max), cfg.resolution,
                 cfg.beta, cfg.miss_config(), jobs=cfg.jobs)
    run.text("sweep.csv", sweep_csv(rows))
    ok = sum(1 for r in rows if r[5] == "ok")
    return f"{ok}/{len(rows)} cells defined"


def cmd_knot(cfg: RunConfig, run: RunDir) -> str:
    tp = find_tpoint(cfg.params(), tol_tp=cfg.tol_tp, cfg=cfg.miss_config())
    run.json("tpoint.json", {"tpoint": tp.to_dict(), "trace": tp.trace})
    curve = assemble_invariant_curve(tp, cfg.assembly_config())
    run.json("curve.json", {"curve": json.loads(curve.to_json())})
    rng = np.random.default_rng(cfg.seed)
    reports = [identify(curve, seed=cfg.seed, rng=rng) for _ in range(cfg.directions)]
    first = reports[0]
    run.text("diagram.pd", first.diagram.pd_text())
    stamp = None if cfg.deterministic else f"generated {_dt.datetime.now().isoformat()}"
    svg = diagram_svg(curve, first.direction, comment=stamp)
    cfg_comment = "config: " + "; ".join(cfg.to_text(False).split("\n")).strip("; ")
    svg = svg.replace("<rect", f"<!-- lorenz_knots {__version__} {cfg_comment} -->\n<rect", 1)
    run.raw("diagram.svg", svg)
    verdicts = sorted({r.verdict for r in reports})
    verdict = verdicts[0] if len(verdicts) == 1 else "inconsistent:" + ",".join(verdicts)
    run.json("report.json", {"verdict": verdict, "projections": [r.to_dict() for r in reports]})
    run.text("verdict.txt", verdict + "\n")
    return verdict


def cmd_template(cfg: RunConfig, run: RunDir) -> str:
    if cfg.scan_target:
        found = first_word_of_type(cfg.scan_target, cfg.max_length, jobs=cfg.jobs)
        payload = {"target": cfg.scan_target, "max_length": cfg.max_length,
                   "word": found[0] if found else None, "pd": found[1] if found else None}
        run.json("scan.json", payload)
        return found[0] if found else "not-found"
    if len(cfg.word) > MAX_WORD_LENGTH:
        raise ValueError(f"word longer than {MAX_WORD_LENGTH}")
    rep = orbit_report(cfg.word, seed=cfg.seed)
    m = word_to_matrix(cfg.word)
    run.json("template.json", {"word": cfg.word.upper(), "verdict": rep.verdict,
                               "alexander": str(rep.alexander), "matrix": m.tolist(),
                               "trace": m.trace, "pd": rep.diagram.pd_text()})
    run.json("orbit.json", {"curve": json.loads(template_orbit(cfg.word).to_json())})
    return rep.verdict


HANDLERS = {
    "equilibria": cmd_equilibria,
    "manifold": cmd_manifold,
    "tpoint": cmd_tpoint,
    "sweep": cmd_sweep,
    "knot": cmd_knot,
    "template": cmd_template,
}


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lorenz-knots", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = RunConfig()
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value file; flags override it")
        for f in fields(RunConfig):
            if f.name in ("command", "config"):
                continue
            flag = "--" + f.name.replace("_", "-")
            kind = f.type if isinstance(f.type, str) else f.type.__name__
            if kind == "bool":
                p.add_argument(flag, action="store_true", default=None)
            else:
                p.add_argument(flag, type=lambda v, k=kind: _convert(k, v), default=None,
                               help=f"default {getattr(defaults, f.name)!r}")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(RunConfig.parse_text(fh.read()))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    values["command"] = args.command
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (OSError, ValueError) as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 5 if isinstance(exc, OSError) else 2
    try:
        run = RunDir(cfg)
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 5
    try:
        result = HANDLERS[cfg.command](cfg, run)
    except LorenzKnotError as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        _note_failure(run, exc.stage, str(exc))
        return exc.exit_code
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 5
    except ValueError as exc:
        print(f"error [input]: {exc}", file=sys.stderr)
        _note_failure(run, "input", str(exc))
        return 2
    print(result)
    print(run.path)
    return 0


def _note_failure(run: RunDir, stage: str, message: str) -> None:
    try:
        run.json("failure.json", {"stage": stage, "message": message})
    except OSError:
        pass


if __name__ == "__main__":
    sys.exit(main())
