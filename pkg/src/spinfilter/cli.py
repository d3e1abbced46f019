"""Command-line front end: ``spinfilter {field,square,ring,design,sweep}``.

Every run is described by a flat :class:`RunConfig`.  Values come from the
dataclass defaults, then an optional ``--config`` JSON file, then explicit
flags.  Numbers are written with 12 significant digits so identical configs
give byte-identical output.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import ring, square
from .errors import SpinFilterError
from .gauge import SOKind, curvature, make_field
from .su2 import pauli_components

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
SUBCOMMANDS = ("field", "square", "ring", "design", "sweep")
SZ_BASIS = (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    subcommand: str = "square"
    device: str = "square"
    theta_l: float = 0.0
    theta_r: float = 0.0
    phi_b: float = 0.0
    geometry: str = "sym"
    so: str = "rashba"
    t: float = 1.0
    theta: float = 1.0
    b_z: float = 0.0
    emin: Optional[float] = None
    emax: Optional[float] = None
    n_grid: int = 400
    basis: str = "tilted"
    out: Optional[str] = None
    format: str = "csv"
    design_square: bool = False
    design_ring: bool = False
    n: Optional[int] = None
    m: int = 0
    m_eff: float = 0.041
    alpha_hbar: float = 3e-11
    cmin: float = 0.0
    cmax: Optional[float] = None
    jobs: int = 1

    def validate(self) -> "RunConfig":
        """Return ``self`` after checking every field, raising :class:`ConfigError` otherwise."""

        def need(cond, name, msg):
            if not cond:
                raise ConfigError(f"{name}: {msg} (got {getattr(self, name)!r})")

        need(self.subcommand in SUBCOMMANDS, "subcommand", f"must be one of {SUBCOMMANDS}")
        need(self.device in ("square", "ring"), "device", "must be 'square' or 'ring'")
        need(self.geometry in ("sym", "asym"), "geometry", "must be 'sym' or 'asym'")
        need(self.so in [k.value for k in SOKind], "so", "must be rashba, dresselhaus or none")
        need(self.basis in ("tilted", "sz"), "basis", "must be 'tilted' or 'sz'")
        need(self.format in ("csv", "json"), "format", "must be 'csv' or 'json'")
        need(self.t > 0, "t", "must be positive")
        need(self.theta_l >= 0, "theta_l", "must be non-negative")
        need(self.theta_r >= 0, "theta_r", "must be non-negative")
        need(self.theta >= 0, "theta", "must be non-negative")
        need(isinstance(self.n_grid, int) and self.n_grid >= 2, "n_grid", "must be an integer >= 2")
        need(isinstance(self.jobs, int) and self.jobs >= 1, "jobs", "must be a positive integer")
        need(self.m >= 0, "m", "must be a non-negative integer")
        need(self.n is None or self.n >= 0, "n", "must be a non-negative integer")
        need(self.m_eff > 0, "m_eff", "must be positive")
        need(self.alpha_hbar > 0, "alpha_hbar", "must be positive")
        if self.subcommand in ("square", "ring"):
            lo, hi = self.energy_range()
            need(lo < hi, "emin", f"must be below emax={hi!r}")
            if self.subcommand == "square":
                need(-2 * self.t < lo, "emin", "square grid must lie inside (-2t, 2t)")
                need(hi < 2 * self.t, "emax", "square grid must lie inside (-2t, 2t)")
            else:
                need(lo > 0, "emin", "ring energies must be positive")
        if self.subcommand == "sweep":
            need(self.cmin >= 0, "cmin", "must be non-negative")
            need(self.cmin < self.coupling_max(), "cmax", "must exceed cmin")
        return self

    def energy_range(self) -> tuple[float, float]:
        if self.subcommand == "ring":
            default = (0.01, 100.0)
        else:
            default = (-1.99 * self.t, 1.99 * self.t)
        lo = default[0] if self.emin is None else self.emin
        hi = default[1] if self.emax is None else self.emax
        return float(lo), float(hi)

    def energies(self) -> np.ndarray:
        return np.linspace(*self.energy_range(), self.n_grid)

    def coupling_max(self) -> float:
        if self.cmax is not None:
            return float(self.cmax)
        return float(np.pi) if self.device == "square" else 10.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"{key}: unknown configuration field")
        return replace(cls(), **data)

    @classmethod
    def from_json(cls, text: str, source: str = "<config>") -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{source}: top level must be a JSON object")
        return cls.from_mapping(data)


def _fmt(x: float) -> str:
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def _num(x: float) -> float:
    """Round to the CSV precision so JSON output is equally deterministic."""
    return float(_fmt(x))


def _table(header: list[str], rows: list[list[float]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, map(_num, r))) for r in rows], indent=2) + "\n"
    lines = [",".join(header)] + [",".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _spinor_columns(prefix: str) -> list[str]:
    return [f"{prefix}{i}_{part}" for i in (1, 2) for part in ("re", "im")]


def _spinor_values(v: np.ndarray) -> list[float]:
    return [c for z in v for c in (z.real, z.imag)]


def _map(cfg: RunConfig, func, items):
    if cfg.jobs == 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        # map keeps grid order regardless of completion order
        return list(pool.map(func, items))


def run_field(cfg: RunConfig) -> str:
    f = curvature(make_field(cfg.so, cfg.theta, cfg.b_z))
    coeffs = pauli_components(f)
    if cfg.format == "json":
        report = {
            "matrix": [[[_num(z.real), _num(z.imag)] for z in row] for row in f],
            "pauli": dict(zip(("I", "x", "y", "z"), (_num(c.real) for c in coeffs))),
        }
        return json.dumps(report, indent=2) + "\n"
    rows = [[i, j, f[i, j].real, f[i, j].imag] for i in range(2) for j in range(2)]
    text = _table(["row", "col", "re", "im"], rows, "csv")
    pauli = " + ".join(f"{_fmt(c.real)}*{name}" for c, name in zip(coeffs, ("I", "sx", "sy", "sz")))
    return text + f"# F_xy = {pauli}\n"


def run_square(cfg: RunConfig) -> str:
    d = square.SquareDevice(
        t=cfg.t, theta_l=cfg.theta_l, phi_b=cfg.phi_b, so_kind=cfg.so, geometry=cfg.geometry
    )
    basis = SZ_BASIS if cfg.basis == "sz" else None
    recs = _map(cfg, lambda e: square.transmission(d, e, basis), cfg.energies())
    header = ["E", "T_uu", "T_ud", "T_du", "T_dd", "fallback"]
    header += _spinor_columns("in_up") + _spinor_columns("out_up")
    rows = [
        [r.energy, *r.coefficients, float(r.basis_fallback)]
        + _spinor_values(r.basis[:, 0])
        + _spinor_values(r.out_basis[:, 0])
        for r in recs
    ]
    return _table(header, rows, cfg.format)


def run_ring(cfg: RunConfig) -> str:
    d = ring.RingDevice(theta_r=cfg.theta_r, phi_b=cfg.phi_b)
    tilted = np.column_stack(ring.tilted_basis_ring(d))

    def point(e):
        s = ring.ring_s_matrix(d, e)
        t = s[2:4, 0:2]
        if cfg.basis == "sz":
            t = tilted @ t @ tilted.conj().T
        c = np.abs(t) ** 2
        return [e, np.sqrt(e), c[0, 0], c[0, 1], c[1, 0], c[1, 1], ring.unitarity_residual(s)]

    rows = _map(cfg, point, cfg.energies())
    header = ["E", "k_phi", "T_uu", "T_ud", "T_du", "T_dd", "unitarity"]
    return _table(header, rows, cfg.format)


def run_design(cfg: RunConfig) -> str:
    both = not (cfg.design_square or cfg.design_ring)
    report: dict = {}
    if cfg.design_square or both:
        phi_b, theta_l = square.design_filter_square()
        report["square"] = {"phi_b": phi_b, "theta_l": theta_l, "phi_r": square.phi_r_square(theta_l)}
    if cfg.design_ring or both:
        entries = []
        for n in [cfg.n] if cfg.n is not None else [0, 1, 2]:
            phi_b, theta_r = ring.design_filter_ring(cfg.m, n)
            radius, b_z = ring.material_parameters(n, cfg.m_eff, cfg.alpha_hbar, cfg.m)
            entries.append(
                {
                    "m": cfg.m,
                    "n": n,
                    "phi_b": phi_b,
                    "theta_r": theta_r,
                    "phi_r": ring.phi_r_ring(theta_r),
                    "R_nm": radius * 1e9,
                    "B_z_T": b_z,
                }
            )
        report["ring"] = entries
        report["material"] = {"m_eff": cfg.m_eff, "alpha_hbar_eVm": cfg.alpha_hbar}
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run_sweep(cfg: RunConfig) -> str:
    couplings = np.linspace(cfg.cmin, cfg.coupling_max(), cfg.n_grid)
    if cfg.device == "square":
        phi_r, small = square.phi_r_square, lambda x: x**2 / (4 * np.pi)
    else:
        phi_r, small = ring.phi_r_ring, lambda x: x**2 / 4
    rows = [[c, phi_r(c), -phi_r(c), small(c)] for c in couplings]
    return _table(["coupling", "phi_r_up", "phi_r_down", "small_coupling"], rows, cfg.format)


RUNNERS = {
    "field": run_field,
    "square": run_square,
    "ring": run_ring,
    "design": run_design,
    "sweep": run_sweep,
}


def run(cfg: RunConfig) -> str:
    """Validate ``cfg`` and return the text the subcommand produces."""
    return RUNNERS[cfg.validate().subcommand](cfg)


def build_parser() -> argparse.ArgumentParser:
    # device flags default to SUPPRESS so that only explicit flags override --config
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="flat JSON file with RunConfig fields")
    common.add_argument("--save-config", help="write the effective configuration as JSON")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--device", choices=("square", "ring"))
    common.add_argument("--theta-l", dest="theta_l", type=float, help="square link angle theta*l")
    common.add_argument("--theta-r", dest="theta_r", type=float, help="ring coupling theta*R")
    common.add_argument("--phi-b", dest="phi_b", type=float, help="flux in units of h/e")
    common.add_argument("--geometry", choices=("sym", "asym"))
    common.add_argument("--so", choices=[k.value for k in SOKind])
    common.add_argument("--t", type=float, help="square hopping energy")
    common.add_argument("--emin", type=float)
    common.add_argument("--emax", type=float)
    common.add_argument("--n-grid", "--grid", dest="n_grid", type=int, help="number of grid points")
    common.add_argument("--basis", choices=("tilted", "sz"))
    common.add_argument("--jobs", type=int, help="worker threads for energy sweeps")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="spinfilter", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    opts = {"parents": [common], "argument_default": argparse.SUPPRESS}

    p = sub.add_parser("field", **opts, help="curvature of the SU(2) gauge field")
    p.add_argument("--theta", type=float, help="spin-orbit strength 2 m* alpha / hbar")
    p.add_argument("--b-z", dest="b_z", type=float, help="Abelian field strength")

    sub.add_parser("square", **opts, help="transmission of the tight-binding square")
    sub.add_parser("ring", **opts, help="transmission of the quantum ring")

    p = sub.add_parser("design", **opts, help="filter parameters and material estimates")
    p.add_argument("--square", dest="design_square", action="store_true")
    p.add_argument("--ring", dest="design_ring", action="store_true")
    p.add_argument("--n", type=int, help="Aharonov-Casher branch")
    p.add_argument("--m", type=int, help="Aharonov-Bohm branch")
    p.add_argument("--m-eff", dest="m_eff", type=float, help="effective mass ratio m*/m_e")
    p.add_argument("--alpha-hbar", dest="alpha_hbar", type=float, help="Rashba constant in eV m")

    p = sub.add_parser("sweep", **opts, help="Aharonov-Casher phase against coupling")
    p.add_argument("--cmin", type=float, help="smallest coupling")
    p.add_argument("--cmax", type=float, help="largest coupling")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = vars(args).copy()
    base = RunConfig()
    path = values.pop("config", None)
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
        base = RunConfig.from_json(text, source=path)
    for key in ("save_config", "verbose"):
        values.pop(key, None)
    return replace(base, **values)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING)
    try:
        cfg = config_from_args(args)
        text = run(cfg)
    except ConfigError as exc:
        print(f"spinfilter: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SpinFilterError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"spinfilter: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"spinfilter: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        save = getattr(args, "save_config", None)
        if save is not None:
            Path(save).write_text(cfg.to_json())
        if cfg.out is None:
            sys.stdout.write(text)
        else:
            Path(cfg.out).write_text(text)
    except OSError as exc:
        print(f"spinfilter: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
