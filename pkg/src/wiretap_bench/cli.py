"""wiretap-bench command line.

    wiretap-bench <capacity|regime|fig2|blocklength|equivocation|simulate|fading> [flags]

Every output carries a manifest (command, canonical parameters, seed,
version) from which the table can be regenerated. Exit codes: 0 success,
2 usage or invalid value, 3 infeasible request, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any

import tomli

from . import __version__
from .channel import WiretapChannel, assess_rate, capacities, db_to_linear
from .equivocation import eve_equivocation_report
from .error_exponents import bob_bounds, eve_error_lower
from .errors import DomainError, InfeasibleError, NumericError, WiretapError
from .fading import (FadingConfig, Integration, fading_main_capacity,
                     fading_secrecy_capacity, monte_carlo)
from .finite_blocklength import DispersionVariant, min_blocklength, min_rate_for_eve_error
from .montecarlo import SimConfig, run_trials

EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NUMERIC = 2, 3, 4

# flags that never affect the numbers and so stay out of the manifest
_NON_SEMANTIC = {"command", "format", "out", "config", "threads", "power_db"}


def fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _json_value(x: Any) -> Any:
    if isinstance(x, float):
        if not math.isfinite(x):
            return fmt(x)
        return float(fmt(x))
    return x


# ---------------------------------------------------------------- commands

def _channel(a) -> WiretapChannel:
    return WiretapChannel(a.sigma1_sq, a.sigma2_sq, a.power)


def cmd_capacity(a) -> list[dict]:
    c = capacities(_channel(a))
    return [{"c1": c.c1, "c2": c.c2, "cs": c.cs, "snr_bob": c.snr_bob, "snr_eve": c.snr_eve}]


def cmd_regime(a) -> list[dict]:
    ch = _channel(a)
    c = capacities(ch)
    ra = assess_rate(ch, a.rate, a.adjusted_power)
    lo, hi = ra.power_interval or (math.nan, math.nan)
    return [{"rate": a.rate, "regime": ra.regime.value, "adjusted_power": ra.adjusted_power,
             "power_lo": lo, "power_hi": hi, "c1": c.c1, "c2": c.c2}]


def parse_range(text: str) -> list[float]:
    """`START:STOP:STEP` (inclusive STOP), or a comma list of values."""
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise DomainError(f"bad range {text!r}; expected START:STOP:STEP with STEP > 0")
        start, stop, step = parts
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(max(count, 0))]
    return [float(p) for p in text.split(",") if p.strip()]


def cmd_fig2(a) -> list[dict]:
    snrs = parse_range(a.snr_db_range)
    if not snrs:
        raise DomainError("empty --snr-db-range")
    rows = []
    for n in sorted(a.n_list):
        for snr_db in sorted(snrs):
            ch = WiretapChannel(a.sigma1_sq, a.sigma2_sq, db_to_linear(snr_db))
            rows.append({"snr_db": snr_db, "n": n,
                         "pe_bob_upper": bob_bounds(ch, n, a.rate).pe_upper,
                         "pe_eve_lower": eve_error_lower(ch, n, a.rate)})
    return rows


def cmd_blocklength(a) -> list[dict]:
    ch = _channel(a)
    variant = DispersionVariant(a.dispersion)
    n = min_blocklength(ch, a.rate, a.beta1, a.beta2, variant)
    c = capacities(ch)
    return [{"n_star": n, "rate": a.rate, "beta1": a.beta1, "beta2": a.beta2,
             "c1": c.c1, "c2": c.c2,
             "eve_min_rate": min_rate_for_eve_error(ch, n, a.beta2, variant),
             "bob_pe_upper": bob_bounds(ch, n, a.rate).pe_upper}]


def cmd_equivocation(a) -> list[dict]:
    ch = _channel(a)
    rep = eve_equivocation_report(ch, a.n, a.rate, a.pe_eve)
    bob = bob_bounds(ch, a.n, a.rate)
    pe = a.pe_eve if a.pe_eve is not None else rep.converse_pe_lower
    return [{"n": a.n, "rate": a.rate, "pe_eve": pe,
             "fano_upper": rep.fano_upper,
             "trivial_lower_rate": rep.trivial_lower_rate,
             "phi_star_lower": rep.phi_star_lower,
             "converse_pe_lower": rep.converse_pe_lower,
             "phi_star_at_converse": rep.phi_star_at_converse,
             "bob_pe_upper": bob.pe_upper, "bob_equiv_upper": bob.equiv_upper}]


def cmd_simulate(a) -> list[dict]:
    cfg = SimConfig(n=a.n, rate=a.rate, channel=_channel(a), trials=a.trials, seed=a.seed,
                    delta=a.delta, fresh_codebook_per_trial=not a.fixed_codebook)
    return [run_trials(cfg, threads=a.threads).as_dict()]


def cmd_fading(a) -> list[dict]:
    cfg = FadingConfig(mean_q=a.mean_q, mean_r=a.mean_r, power=a.power,
                       integration=Integration(nodes=a.nodes, mc_samples=a.mc_samples,
                                               seed=a.seed),
                       tol_lambda=a.tol_lambda)
    rows = []
    for kind, solver in (("secrecy", fading_secrecy_capacity), ("main", fading_main_capacity)):
        res = solver(cfg)
        mc = monte_carlo(cfg, res.lam, kind, threads=a.threads)
        rows.append({"kind": kind, "capacity": res.capacity, "lambda": res.lam,
                     "avg_power_used": res.avg_power_used,
                     "transmit_probability": res.transmit_probability,
                     "mc_capacity": mc.capacity, "mc_capacity_ci": mc.capacity_ci,
                     "mc_avg_power": mc.avg_power, "mc_avg_power_ci": mc.avg_power_ci,
                     "mc_transmit_probability": mc.transmit_probability,
                     "mc_transmit_probability_ci": mc.transmit_probability_ci})
    return rows


COMMANDS = {
    "capacity": cmd_capacity,
    "regime": cmd_regime,
    "fig2": cmd_fig2,
    "blocklength": cmd_blocklength,
    "equivocation": cmd_equivocation,
    "simulate": cmd_simulate,
    "fading": cmd_fading,
}

# flags each command cannot run without (checked after config merge)
REQUIRED = {
    "capacity": ["sigma1_sq", "sigma2_sq", "power"],
    "regime": ["sigma1_sq", "sigma2_sq", "power", "rate"],
    "fig2": ["sigma1_sq", "sigma2_sq", "rate"],
    "blocklength": ["sigma1_sq", "sigma2_sq", "power", "rate", "beta1", "beta2"],
    "equivocation": ["sigma1_sq", "sigma2_sq", "power", "n", "rate"],
    "simulate": ["sigma1_sq", "sigma2_sq", "power", "n", "rate", "trials", "seed"],
    "fading": ["power", "seed"],
}


# ------------------------------------------------------------------ parser

def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("block lengths must be positive integers")
    return vals


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="write to FILE instead of stdout")
    p.add_argument("--config", help="TOML file of flag values; explicit flags win")


def _power(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--power", type=float, help="transmit power, linear")
    g.add_argument("--power-db", type=float, help="transmit power in dB (20 dB = 100)")


def _noise(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma1-sq", type=float, help="Bob noise variance")
    p.add_argument("--sigma2-sq", type=float, help="Eve noise variance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wiretap-bench", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="C1, C2 and secrecy capacity")
    _noise(p); _power(p); _common(p)

    p = sub.add_parser("regime", help="classify a rate and pick the reduced power")
    _noise(p); _power(p); _common(p)
    p.add_argument("--rate", type=float)
    p.add_argument("--adjusted-power", type=float)

    p = sub.add_parser("fig2", help="Gallager / strong-converse error bounds vs power")
    _noise(p); _common(p)
    p.add_argument("--rate", type=float, help="bits per channel use (no default)")
    p.add_argument("--n-list", type=_int_list, default=[50, 100, 200])
    p.add_argument("--snr-db-range", default="0:30:1",
                   help="transmit power sweep in dB, START:STOP:STEP or a comma list")

    p = sub.add_parser("blocklength", help="minimum block length for (beta1, beta2) targets")
    _noise(p); _power(p); _common(p)
    p.add_argument("--rate", type=float)
    p.add_argument("--beta1", type=float)
    p.add_argument("--beta2", type=float)
    p.add_argument("--dispersion", choices=[v.value for v in DispersionVariant],
                   default=DispersionVariant.PAPER.value)

    p = sub.add_parser("equivocation", help="equivocation bounds at Bob and Eve")
    _noise(p); _power(p); _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--rate", type=float)
    p.add_argument("--pe-eve", type=float,
                   help="Eve's error probability (default: strong-converse lower bound)")

    p = sub.add_parser("simulate", help="random-codebook Monte Carlo")
    _noise(p); _power(p); _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--rate", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--fixed-codebook", action="store_true")
    p.add_argument("--threads", type=int)

    p = sub.add_parser("fading", help="fading secrecy and main-channel capacities")
    _power(p); _common(p)
    p.add_argument("--mean-q", type=float, default=1.0)
    p.add_argument("--mean-r", type=float, default=1.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--nodes", type=int, default=128)
    p.add_argument("--mc-samples", type=int, default=1_000_000)
    p.add_argument("--tol-lambda", type=float, default=1e-3)
    p.add_argument("--threads", type=int)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def parse_args(argv: list[str] | None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    sp = _subparser(parser, args.command)
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                conf = tomli.load(fh)
        except (OSError, tomli.TOMLDecodeError) as exc:
            sp.error(f"cannot read config {args.config}: {exc}")
        conf = {k.replace("-", "_"): v for k, v in conf.get(args.command, conf).items()}
        known = {a.dest for a in sp._actions}
        unknown = set(conf) - known
        if unknown:
            sp.error(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "n_list" in conf and isinstance(conf["n_list"], list):
            conf["n_list"] = [int(v) for v in conf["n_list"]]
        if "power" in conf and "power_db" in conf:
            sp.error("config sets both power and power_db")
        sp.set_defaults(**conf)
        args = parser.parse_args(argv)
        # an explicit flag for one power form overrides the other from the file
        if "--power" in (argv or []) and "power_db" in conf:
            args.power_db = None
        if "--power-db" in (argv or []) and "power" in conf:
            args.power = None

    if getattr(args, "power_db", None) is not None:
        args.power = db_to_linear(args.power_db)
    missing = [k for k in REQUIRED[args.command] if getattr(args, k, None) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") + ("|--power-db" if k == "power" else "")
                          for k in missing)
        sp.error(f"missing required flags: {flags}")
    return args


# ------------------------------------------------------------------ output

def manifest(args: argparse.Namespace) -> dict:
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in _NON_SEMANTIC and v is not None}
    argv = [args.command]
    for k, v in params.items():
        flag = "--" + k.replace("_", "-")
        if isinstance(v, bool):
            if v:
                argv.append(flag)
        elif isinstance(v, list):
            argv += [flag, ",".join(str(x) for x in v)]
        elif isinstance(v, float):
            argv += [flag, repr(v)]
        else:
            argv += [flag, str(v)]
    return {"command": args.command, "params": params, "seed": params.get("seed"),
            "version": __version__, "format": args.format, "argv": argv}


def render(rows: list[dict], man: dict, form: str) -> str:
    if form == "json":
        doc = {"manifest": man,
               "rows": [{k: _json_value(v) for k, v in row.items()} for row in rows]}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(man, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0].keys()))
    for row in rows:
        w.writerow([fmt(v) for v in row.values()])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = parse_args(argv)
    try:
        rows = COMMANDS[args.command](args)
    except InfeasibleError as exc:
        print(f"wiretap-bench: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericError as exc:
        print(f"wiretap-bench: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (WiretapError, ValueError) as exc:
        print(f"wiretap-bench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(rows, manifest(args), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
