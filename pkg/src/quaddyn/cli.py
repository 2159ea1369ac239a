"""Command-line front end: ``quaddyn <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass
from fractions import Fraction
import io
import json
import os
import re
import sys
from typing import Any, Optional, Sequence

import numpy as np

from .arch import arch_bounds_thm, arch_energy_mc, escape_radius
from .arith import LogLinear, check_prime, format_rational, parse_rational, weil_height, weil_height2
from .audit import b_certificate, delta_certificate
from .constants import constants_table
from .nonarch import filled_julia_disjoint_at_p, local_energy_padic
from .pairing import AdelicPairingReport, adelic_pairing, canonical_height
from .preper import MAX_BOUND, common_preper

DEFAULT_SEED = 42
DEFAULT_MC_SAMPLES = 100_000
DEFAULT_PRECISION = 1e-6


@dataclass
class CliConfig:
    command: str
    fmt: str = "json"
    seed: int = DEFAULT_SEED
    mc_samples: int = DEFAULT_MC_SAMPLES
    precision: float = DEFAULT_PRECISION
    workers: int = 1


class ComputationError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return n


def _seed(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}") from None
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return n


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def _place(text: str) -> Optional[int]:
    if text == "inf":
        return None
    try:
        return check_prime(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"place must be 'inf' or a prime: {exc}") from None


def _env_seed() -> int:
    raw = os.environ.get("QUADDYN_SEED")
    return _seed(raw) if raw is not None else DEFAULT_SEED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=_seed, default=None, help="RNG seed (default $QUADDYN_SEED or 42)")
    common.add_argument("--mc-samples", type=_positive_int, default=DEFAULT_MC_SAMPLES)
    common.add_argument("--precision", type=_positive_float, default=DEFAULT_PRECISION)
    common.add_argument("--workers", type=_positive_int, default=1)

    parser = argparse.ArgumentParser(prog="quaddyn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add("pairing", "adelic energy pairing of z^2 + c1 and z^2 + c2")
    p.add_argument("--c1", type=_rational, required=True)
    p.add_argument("--c2", type=_rational, required=True)

    p = add("local-energy", "local energy at one place")
    p.add_argument("--c1", type=_rational, required=True)
    p.add_argument("--c2", type=_rational, required=True)
    p.add_argument("--place", type=_place, required=True)

    p = add("height", "Weil height of a rational")
    p.add_argument("--c", type=_rational, required=True)

    p = add("height2", "Weil height of the pair (c1, c2)")
    p.add_argument("--c1", type=_rational, required=True)
    p.add_argument("--c2", type=_rational, required=True)

    p = add("canonical-height", "canonical height of x for z^2 + c")
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--x", type=_rational, required=True)

    p = add("common-preper", "common preperiodic points up to a bound")
    p.add_argument("--c1", type=_rational, required=True)
    p.add_argument("--c2", type=_rational, required=True)
    p.add_argument("--bound", type=_positive_int, required=True)
    p.add_argument("--polynomial", action="store_true", help="include the accumulator polynomial")

    p = add("disjoint-at", "are the p-adic filled Julia sets disjoint?")
    p.add_argument("--c1", type=_rational, required=True)
    p.add_argument("--c2", type=_rational, required=True)
    p.add_argument("--p", type=_positive_int, required=True)

    p = add("julia-render", "escape-time picture of the filled Julia set (binary PPM)")
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--width", type=_positive_int, required=True)
    p.add_argument("--height", type=_positive_int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-iter", type=_positive_int, default=256)

    p = add("audit", "interval certificates and the constants table")
    p.add_argument("target", choices=("delta", "b", "constants"))

    p = add("bounds-check", "sandwich checks over a CSV corpus with header c1,c2")
    p.add_argument("--corpus", required=True)
    return parser


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, LogLinear):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _flatten(obj: Any, prefix: str = "") -> dict[str, Any]:
    def key(k) -> str:
        return f"{prefix}.{k}" if prefix else str(k)

    if isinstance(obj, dict):
        out: dict[str, Any] = {}
        for k, v in obj.items():
            out.update(_flatten(v, key(k)))
        return out
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        out = {}
        for i, v in enumerate(obj):
            out.update(_flatten(v, key(i)))
        return out
    return {prefix: json.dumps(obj) if isinstance(obj, list) else obj}


def render(payload: Any, fmt: str, table: Optional[tuple[Sequence[str], list[list[str]]]] = None) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(payload), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if table is not None:
            w.writerow(table[0])
            w.writerows(table[1])
        else:
            flat = _flatten(_jsonable(payload))
            w.writerow(flat.keys())
            w.writerow(flat.values())
        return buf.getvalue()
    flat = _flatten(_jsonable(payload))
    return "".join(f"{k}: {v}\n" for k, v in flat.items())


# ---------------------------------------------------------------------------
# julia rendering
# ---------------------------------------------------------------------------

def julia_view_radius(c: Fraction) -> float:
    return 2**1.5 * max(2.0, abs(float(c))) ** 0.5


def render_julia_ppm(c: Fraction, width: int, height: int, max_iter: int = 256) -> bytes:
    """Binary PPM of escape times on the square [-rho, rho]^2."""
    rho = julia_view_radius(c)
    cf = complex(float(c))
    xs = np.linspace(-rho, rho, width)
    ys = np.linspace(rho, -rho, height)
    z = xs[None, :] + 1j * ys[:, None]
    counts = np.full(z.shape, -1, dtype=np.int64)
    R = escape_radius(cf)
    for n in range(max_iter):
        alive = counts < 0
        out = alive & (np.abs(z) > R)
        counts[out] = n
        z = np.where(alive & ~out, z * z + cf, z)
    rgb = np.zeros(z.shape + (3,), dtype=np.uint8)
    esc = counts >= 0
    t = np.zeros(z.shape)
    t[esc] = np.sqrt(counts[esc] / max_iter)
    rgb[..., 0] = np.where(esc, (255 * t).astype(np.uint8), 0)
    rgb[..., 1] = np.where(esc, (255 * t * t).astype(np.uint8), 0)
    rgb[..., 2] = np.where(esc, (255 * np.sqrt(t)).astype(np.uint8), 0)
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + rgb.tobytes()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _read_corpus(path: str) -> list[tuple[Fraction, Fraction]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:2]] != ["c1", "c2"]:
            raise ComputationError("corpus must have header c1,c2")
        return [(parse_rational(row["c1"].strip()), parse_rational(row["c2"].strip())) for row in reader]


def execute(args: argparse.Namespace, cfg: CliConfig) -> str:
    cmd = args.command
    if cmd == "pairing":
        rep = adelic_pairing(args.c1, args.c2, cfg.mc_samples, cfg.seed, cfg.workers)
        return render(rep.to_json(), cfg.fmt, (AdelicPairingReport.CSV_HEADER, [rep.csv_row()]))
    if cmd == "local-energy":
        if args.place is None:
            mc = arch_energy_mc(args.c1, args.c2, cfg.mc_samples, cfg.seed, cfg.workers)
            b = arch_bounds_thm(args.c1, args.c2)
            payload = {"place": "inf", **mc.to_json(), "bound_lower": b.lower, "bound_upper": b.upper,
                       "bound_strong_lower": b.strong_lower}
        else:
            payload = local_energy_padic(args.c1, args.c2, args.place).to_json()
        return render(payload, cfg.fmt)
    if cmd == "height":
        return render({"c": args.c, "height": weil_height(args.c)}, cfg.fmt)
    if cmd == "height2":
        return render({"c1": args.c1, "c2": args.c2, "height": weil_height2(args.c1, args.c2)}, cfg.fmt)
    if cmd == "canonical-height":
        return render(canonical_height(args.c, args.x, cfg.precision).to_json(), cfg.fmt)
    if cmd == "common-preper":
        if args.bound > MAX_BOUND:
            raise ComputationError(f"bound must be <= {MAX_BOUND}")
        return render(common_preper(args.c1, args.c2, args.bound).to_json(args.polynomial), cfg.fmt)
    if cmd == "disjoint-at":
        check_prime(args.p)
        res = filled_julia_disjoint_at_p(args.c1, args.c2, args.p)
        return render({"c1": args.c1, "c2": args.c2, "p": args.p, "result": res.value}, cfg.fmt)
    if cmd == "julia-render":
        data = render_julia_ppm(args.c, args.width, args.height, args.max_iter)
        with open(args.out, "wb") as fh:
            fh.write(data)
        return render({"out": args.out, "width": args.width, "height": args.height,
                       "view_radius": julia_view_radius(args.c), "bytes": len(data)}, cfg.fmt)
    if cmd == "audit":
        if args.target == "constants":
            return render(constants_table(), cfg.fmt)
        cert = delta_certificate() if args.target == "delta" else b_certificate()
        return render(cert.to_json(), cfg.fmt)
    if cmd == "bounds-check":
        reports = [adelic_pairing(a, b, cfg.mc_samples, cfg.seed, cfg.workers) for a, b in _read_corpus(args.corpus)]
        header = AdelicPairingReport.CSV_HEADER + ("lower_ok", "upper_ok", "weak_ok")
        rows = []
        for r in reports:
            ch = r.checks()
            rows.append(r.csv_row() + [str(ch["lower_thm"]), str(ch["upper_thm"]), str(ch["weak_lower"])])
        payload = {"pairs": len(reports),
                   "all_pass": all(all(r.checks().values()) for r in reports),
                   "results": [{"c1": format_rational(r.c1), "c2": format_rational(r.c2), **r.checks()}
                               for r in reports]}
        return render(payload, cfg.fmt, (header, rows))
    raise ComputationError(f"unknown command {cmd}")


_NEG_FRACTION = re.compile(r"^-\d+/\d+$")


def _attach_negative_fractions(argv: Sequence[str]) -> list[str]:
    """argparse reads "-21/16" as an option; glue it to the preceding flag."""
    out: list[str] = []
    for tok in argv:
        if _NEG_FRACTION.match(tok) and out and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    args = parser.parse_args(_attach_negative_fractions(argv))
    try:
        seed = args.seed if args.seed is not None else _env_seed()
    except argparse.ArgumentTypeError as exc:
        parser.error(f"QUADDYN_SEED: {exc}")
    cfg = CliConfig(args.command, args.fmt, seed, args.mc_samples, args.precision, args.workers)
    try:
        out = execute(args, cfg)
    except (ValueError, ArithmeticError, ComputationError, OSError, RuntimeError) as exc:
        sys.stdout.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
