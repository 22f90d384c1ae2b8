"""Command line interface: ``sutured-braids <command> [flags]``.

Commands are ``chords``, ``morse``, ``complex``, ``triangle`` and
``distinguish``.  Settings come from built-in defaults, then an optional flat
TOML file (``--config``), then flags; each flag mirrors one config key with
``-`` in place of ``_``.  Reports are JSON documents that start with a
``schema`` key; failures print an error document to stderr and exit with the
status listed in ``ERROR_CODES``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .complexes import (
    ComplexError,
    build_cylindrical,
    build_triangle,
    build_wrapped,
    homology_unit_pivot,
    quotient_exterior,
    serialize_complex,
    verify_d_squared,
    verify_exactness,
)
from .group_algebra import LaurentBimonomial
from .invariant import distinguish, verify_witness
from .linalg import UnsupportedMatrixError
from .morse_engine import MorseError, MorseProblem, morse_differential
from .surface_chords import SurfaceSpec, chord_document, enumerate_chords

REPORT_SCHEMA = "sutured-braids/report/v1"
ERROR_SCHEMA = "sutured-braids/error/v1"

# code -> (exit status, meaning)
ERROR_CODES = {
    "usage": (2, "malformed command line"),
    "config": (3, "unreadable config file, unknown key, bad value or bad combination"),
    "morse": (4, "numerical failure in the Morse pipeline"),
    "complex": (5, "chain complex construction or homology failure"),
    "io": (6, "an output file could not be written"),
    "internal": (70, "unexpected internal error"),
}

COMMANDS = ("chords", "morse", "complex", "triangle", "distinguish")


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass
class RunConfig:
    surface: str = "torus"
    genus: int = 1
    displacement: tuple[float, float] = (0.3, 0.0)
    cutoff: float = 1.5
    k: int = 1
    kprime: int = 0
    mode: str = "symbolic"
    U: float = 5.0
    eps0: float = 0.1
    eps1: float = 0.5
    metric: str = "adapted"
    n_fan: int = 720
    seed_grid: tuple[int, int] = (200, 64)
    tol_grad: float = 1e-10
    samples: int = 0
    mod2: bool = False
    out: str | None = None
    svg: str | None = None
    _surface: SurfaceSpec = field(init=False, repr=False, compare=False)
    _problem: MorseProblem = field(init=False, repr=False, compare=False)

    def validate(self) -> "RunConfig":
        """Check every module precondition up front; raise CliError("config")."""
        try:
            if self.surface == "torus" and self.genus not in (1,):
                raise ValueError("the torus has genus 1")
            genus = 1 if self.surface == "torus" else self.genus
            self._surface = SurfaceSpec(self.surface, genus, tuple(self.displacement))
            if self.cutoff < 0 or (self.cutoff == 0 and self.surface != "torus"):
                raise ValueError(f"cutoff must be positive, got {self.cutoff}")
            if self.mode not in ("symbolic", "morse"):
                raise ValueError(f"mode must be 'symbolic' or 'morse', got {self.mode!r}")
            if self.n_fan < 8:
                raise ValueError("n_fan must be at least 8")
            if len(self.seed_grid) != 2 or min(self.seed_grid) < 4:
                raise ValueError("seed_grid needs two sizes >= 4")
            if not self.tol_grad > 0:
                raise ValueError("tol_grad must be positive")
            if self.samples < 0:
                raise ValueError("samples must be nonnegative")
            self._problem = MorseProblem(k=self.k, U=self.U, eps0=self.eps0, eps1=self.eps1,
                                         metric=self.metric)
        except (TypeError, ValueError) as exc:
            raise CliError("config", str(exc)) from exc
        return self

    def echo(self) -> dict:
        """Config as echoed in reports (output paths excluded)."""
        d = {f.name: getattr(self, f.name) for f in fields(self)
             if not f.name.startswith("_") and f.name not in ("out", "svg")}
        d["displacement"] = list(d["displacement"])
        d["seed_grid"] = list(d["seed_grid"])
        return d

    def morse_kwargs(self) -> dict:
        return {"problem": self._problem, "seed_grid": tuple(self.seed_grid),
                "n_fan": self.n_fan, "tol_grad": self.tol_grad}


_FIELD_TYPES = {
    "surface": str, "genus": int, "displacement": "pair_float", "cutoff": float, "k": int,
    "kprime": int, "mode": str, "U": float, "eps0": float, "eps1": float, "metric": str,
    "n_fan": int, "seed_grid": "pair_int", "tol_grad": float, "samples": int, "mod2": bool,
    "out": str, "svg": str,
}


def _coerce(key: str, value):
    kind = _FIELD_TYPES[key]
    try:
        if kind in ("pair_float", "pair_int"):
            cast = float if kind == "pair_float" else int
            if isinstance(value, str):
                value = value.replace("x", ",").split(",")
            vals = [cast(v) for v in value]
            if len(vals) != 2:
                raise ValueError
            if cast is int and any(float(v) != int(v) for v in value):
                raise ValueError
            return tuple(vals)
        if kind is bool:
            if isinstance(value, bool):
                return value
            raise ValueError
        if kind is int:
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError
            return int(value)
        if kind is float:
            if isinstance(value, bool):
                raise ValueError
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise CliError("config", f"bad value for {key}: {value!r}") from None


def load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise CliError("config", f"cannot read config {path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise CliError("config", f"config {path} is not valid TOML: {exc}") from exc
    unknown = sorted(set(data) - set(_FIELD_TYPES))
    if unknown:
        raise CliError("config", f"unknown config key {unknown[0]!r}")
    return {k: _coerce(k, v) for k, v in data.items()}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = p.add_argument_group("global")
    g.add_argument("--config", help="flat TOML file with any of the keys below")
    g.add_argument("--out", help="write the report here instead of stdout")
    g.add_argument("--svg", help="write an SVG heatmap (morse only)")
    g.add_argument("--mode", choices=("symbolic", "morse"))
    g.add_argument("--tol-grad", dest="tol_grad", type=float)
    g.add_argument("--seed-grid", dest="seed_grid", help="NAxNT, e.g. 200x64")
    s = p.add_argument_group("model")
    s.add_argument("--surface", choices=("torus", "hyperbolic"))
    s.add_argument("--genus", type=int)
    s.add_argument("--displacement", help="dx,dy for the torus")
    s.add_argument("--cutoff", type=float)
    s.add_argument("--k", type=int)
    s.add_argument("--kprime", type=int)
    s.add_argument("--U", dest="U", type=float)
    s.add_argument("--eps0", type=float)
    s.add_argument("--eps1", type=float)
    s.add_argument("--metric", choices=("adapted", "euclidean"))
    s.add_argument("--n-fan", dest="n_fan", type=int)
    s.add_argument("--samples", type=int, help="trajectory samples in the morse report")
    s.add_argument("--mod2", action="store_true", default=argparse.SUPPRESS, help="also emit complexes mod 2")
    return p


def build_parser() -> argparse.ArgumentParser:
    parent = _flags()
    parser = _Parser(prog="sutured-braids", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "chords": "list Reeb chords up to the cutoff",
        "morse": "critical points and rigid gradient lines of the 1-jet model",
        "complex": "cylindrical, wrapped and exterior complexes with d^2 checks",
        "triangle": "exactness of the long exact sequence",
        "distinguish": "decide whether s^k and s^kprime are told apart",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[parent], help=helps[name])
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(ns, "config", None):
        values.update(load_config_file(ns.config))
    for key in _FIELD_TYPES:
        if hasattr(ns, key):
            values[key] = _coerce(key, getattr(ns, key))
    return RunConfig(**values).validate()


# ---------------------------------------------------------------------------
# commands


def _report(command: str, cfg: RunConfig, body: dict) -> dict:
    return {"schema": REPORT_SCHEMA, "command": command, "config": cfg.echo(), **body}


def _chords(cfg: RunConfig):
    return enumerate_chords(cfg._surface, cfg.cutoff)


def cmd_chords(cfg: RunConfig) -> dict:
    chords = _chords(cfg)
    doc = chord_document(cfg._surface, cfg.cutoff, chords)
    return _report("chords", cfg, {"count": len(chords), "chords": doc["chords"]})


def _mono(m: LaurentBimonomial) -> str:
    return m.encode()


def cmd_morse(cfg: RunConfig) -> dict:
    report = morse_differential(cfg._problem, seed_grid=tuple(cfg.seed_grid),
                                n_fan=cfg.n_fan, tol_grad=cfg.tol_grad)
    coeffs = {tier: [{"monomial": _mono(m), "count": n} for m, n in sorted(c.items())]
              for tier, c in report.coefficients().items()}
    body = report.to_dict(cfg.samples)
    body["coefficients"] = coeffs
    if cfg.svg:
        from .svg import heatmap_svg

        _write(cfg.svg, heatmap_svg(report))
        body["svg_written"] = True
    return _report("morse", cfg, body)


def cmd_complex(cfg: RunConfig) -> dict:
    chords = _chords(cfg)
    kw = cfg.morse_kwargs() if cfg.mode == "morse" else {}
    total = build_wrapped(chords, cfg.k, source=cfg.mode, **kw)
    sub = build_cylindrical(chords)
    quo = quotient_exterior(total, sub)
    cs = {"cylindrical": sub, "wrapped": total, "exterior": quo}
    body = {
        "complexes": {n: serialize_complex(c) for n, c in cs.items()},
        "d_squared": {n: verify_d_squared(c).to_dict() for n, c in cs.items()},
        "homology_ranks": {n: {str(d): r for d, r in sorted(homology_unit_pivot(c).ranks().items())}
                           for n, c in cs.items()},
    }
    if cfg.mod2:
        body["complexes_mod2"] = {n: serialize_complex(c.mod2()) for n, c in cs.items()}
    return _report("complex", cfg, body)


def cmd_triangle(cfg: RunConfig) -> dict:
    chords = _chords(cfg)
    kw = cfg.morse_kwargs() if cfg.mode == "morse" else {}
    t = build_triangle(chords, cfg.k, source=cfg.mode, **kw)
    rep = verify_exactness(t)
    conn = []
    for gamma in t.total.basis.gammas():
        (m,) = t.connecting_matrix(gamma)
        conn.append({"gamma": gamma.encode(), "c-": str(m[0]), "c+": str(m[1])})
    return _report("triangle", cfg, {"exactness": rep.to_dict(), "connecting": conn})


def cmd_distinguish(cfg: RunConfig) -> dict:
    chords = _chords(cfg)
    v = distinguish(cfg.k, cfg.kprime, chords)
    body = v.to_dict()
    body["witness_verified"] = verify_witness(v.witness, v.kappa) if v.witness else None
    return _report("distinguish", cfg, body)


HANDLERS = {
    "chords": cmd_chords,
    "morse": cmd_morse,
    "complex": cmd_complex,
    "triangle": cmd_triangle,
    "distinguish": cmd_distinguish,
}


def _write(path: str, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError("io", f"cannot write {path}: {exc.strerror}") from exc


def render(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def error_document(code: str, message: str) -> dict:
    status, meaning = ERROR_CODES[code]
    return {"schema": ERROR_SCHEMA, "error": {"code": code, "exit_status": status,
                                              "meaning": meaning, "message": message}}


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Run the CLI and return (exit status, stdout text, stderr text)."""
    try:
        ns = build_parser().parse_args(argv)
        cfg = resolve_config(ns)
        text = render(HANDLERS[ns.command](cfg))
        if cfg.out:
            _write(cfg.out, text)
            return 0, "", ""
        return 0, text, ""
    except CliError as exc:
        code, msg = exc.code, exc.message
    except MorseError as exc:
        code, msg = "morse", str(exc)
    except (ComplexError, UnsupportedMatrixError) as exc:
        code, msg = "complex", str(exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0), "", ""
    except Exception as exc:  # pragma: no cover - last resort
        code, msg = "internal", f"{type(exc).__name__}: {exc}"
    return ERROR_CODES[code][0], "", render(error_document(code, msg))


def main(argv: list[str] | None = None) -> int:
    status, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
