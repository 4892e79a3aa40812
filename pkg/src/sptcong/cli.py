"""Command-line interface: build series, apply Hecke operators, run suites."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .errors import InsufficientPrecision, SeriesError
from .forms import PARAMETRIZED, FormName, form, statistic
from .generators import DEFAULT_ORACLE_CEILING, Statistic, enumerate_oracle
from .hecke import HeckeTriple, apply_T_power
from .numtheory import CharacterSpec
from .series import INF, UNIT, QSeries
from .verify import SUITES, reports_to_json, run_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


@dataclass
class RunConfig:
    """Settings read from a ``key = value`` file; command-line flags win."""

    suite: str = "paper-all"
    ell: int | None = None
    m: int | None = None
    char: int = 1
    prec: int | None = None
    range: int | None = None
    jobs: int = 1
    out: str | None = None
    format: str = "json"
    oracle_ceiling: int = DEFAULT_ORACLE_CEILING
    form_precision: dict[str, int] = field(default_factory=dict)

    _INTS = ("ell", "m", "char", "prec", "range", "jobs", "oracle_ceiling")

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            if f.name == "form_precision":
                continue
            v = getattr(self, f.name)
            if v is not None:
                lines.append(f"{f.name} = {v}")
        for name in sorted(self.form_precision):
            lines.append(f"prec.{name} = {self.form_precision[name]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        cfg = cls()
        known = {f.name for f in fields(cls)} - {"form_precision"}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key = value")
            key, value = (x.strip() for x in line.split("=", 1))
            if key.startswith("prec."):
                cfg.form_precision[key[5:]] = int(value)
            elif key in known:
                setattr(cfg, key, int(value) if key in cls._INTS else value)
            else:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.from_text(Path(path).read_text())


# -- output -----------------------------------------------------------------------

def _exponent_str(index: int) -> str:
    e = Fraction(index, UNIT)
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def series_to_csv(s: QSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["exponent", "coefficient"])
    for k, c in s:
        w.writerow([_exponent_str(k), str(c)])
    prec = "exact" if s.precision == INF else _exponent_str(s.precision)
    w.writerow(["precision", prec])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_series(s: QSeries, cfg: RunConfig):
    _emit(series_to_csv(s) if cfg.format == "csv" else s.to_json(), cfg.out)


# -- subcommands ----------------------------------------------------------------------

def _form_precision(cfg: RunConfig, name: str, default: int = 100) -> int:
    if cfg.prec is not None:
        return cfg.prec
    return cfg.form_precision.get(name, default)


def _params(cfg: RunConfig, name: FormName):
    if name not in PARAMETRIZED:
        return None
    if cfg.ell is None:
        raise ValueError(f"form {name.value} needs --ell")
    return (cfg.ell, cfg.m or 1)


def cmd_series(args, cfg: RunConfig) -> int:
    names = {s.value for s in Statistic}
    if args.name in names:
        N = _form_precision(cfg, args.name)
        _emit_series(statistic(args.name, N).truncate_q(N), cfg)
        return EXIT_OK
    return cmd_form(args, cfg)


def cmd_form(args, cfg: RunConfig) -> int:
    name = FormName(args.name)
    N = _form_precision(cfg, name.value)
    _emit_series(form(name, _params(cfg, name), N=N), cfg)
    return EXIT_OK


def cmd_hecke(args, cfg: RunConfig) -> int:
    name = FormName(args.form)
    N = _form_precision(cfg, name.value)
    m = cfg.m if cfg.m is not None else 1
    if cfg.ell is None:
        raise ValueError("hecke needs --ell")
    L = cfg.ell ** (2 * m)
    source = form(name, _params(cfg, name), N=L * N)
    triple = HeckeTriple(source, cfg.ell, CharacterSpec(cfg.char))
    _emit_series(apply_T_power(triple, m, n_out=N), cfg)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    reports = run_suite(cfg.suite, cfg.ell, cfg.m, cfg.range, cfg.jobs)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["claim_id", "status", "checked", "first_failure"])
        for r in reports:
            w.writerow([r.claim_id, r.status, r.checked,
                        json.dumps(r.first_failure, sort_keys=True) if r.first_failure else ""])
        text = buf.getvalue()
    else:
        text = reports_to_json(reports, metadata=not args.no_metadata)
    _emit(text, cfg.out)
    failed = [r.claim_id for r in reports if not r.ok]
    summary = (f"{len(reports) - len(failed)}/{len(reports)} claims verified "
               f"in {time.perf_counter() - t0:.1f}s")
    print(summary + (f"; failed: {', '.join(failed)}" if failed else ""), file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_oracle(args, cfg: RunConfig) -> int:
    value = enumerate_oracle(args.statistic, args.n, ceiling=cfg.oracle_ceiling)
    _emit(json.dumps({"statistic": args.statistic, "n": args.n, "value": value}), cfg.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, help="q-precision of the output")
    common.add_argument("--ell", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--char", type=int, help="character discriminant D for (D/.)")
    common.add_argument("--range", type=int, help="largest argument checked in congruence families")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--jobs", type=int)
    common.add_argument("--config", help="key = value settings file")

    p = argparse.ArgumentParser(prog="sptcong", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    stat_and_forms = sorted({s.value for s in Statistic} | {f.value for f in FormName})
    s = sub.add_parser("series", parents=[common], help="a statistic or form as a series")
    s.add_argument("name", choices=stat_and_forms)
    s.set_defaults(func=cmd_series)

    f = sub.add_parser("form", parents=[common], help="a named form")
    f.add_argument("name", choices=sorted(x.value for x in FormName))
    f.set_defaults(func=cmd_form)

    h = sub.add_parser("hecke", parents=[common], help="apply T(ell^2m) to a form")
    h.add_argument("--form", required=True, choices=sorted(x.value for x in FormName))
    h.set_defaults(func=cmd_hecke)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=SUITES)
    v.add_argument("--no-metadata", action="store_true", help="omit wall times from the report")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", parents=[common], help="count a statistic by enumeration")
    o.add_argument("statistic", choices=sorted(x.value for x in Statistic))
    o.add_argument("n", type=int)
    o.add_argument("--ceiling", type=int)
    o.set_defaults(func=cmd_oracle)
    return p


def resolve_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    for key in ("prec", "ell", "m", "char", "range", "out", "format", "jobs"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    if getattr(args, "suite", None):
        cfg.suite = args.suite
    if getattr(args, "ceiling", None) is not None:
        cfg.oracle_ceiling = args.ceiling
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except InsufficientPrecision as exc:
        extra = f" (required source precision {exc.required})" if exc.required is not None else ""
        print(f"error: {exc}{extra}", file=sys.stderr)
        return EXIT_ERROR
    except (SeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
