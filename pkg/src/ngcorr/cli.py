"""Command-line interface: figure data sweeps, single-state measurement,
and the self-test oracle suites.  All data output is CSV.

State-spec file grammar (measure subcommand): one ``key = value`` pair per
line, ``#`` comments allowed.  Keys: ``family`` (required), ``cutoff``
(optional integer), and the family parameters (``gamma``, ``eta``, ``f``,
``r``, ``nbar``, ``coeffs`` as a comma-separated list, ``levels``
likewise, ``sign``, ``modes``).  ``eta`` applies a symmetric loss channel
after construction.  One state per file.
"""

from __future__ import annotations

import argparse
import math
import sys

from .channels import apply_loss
from .errors import BadSpec
from .figures import COLUMNS, FIGURE_IDS, default_threads, run_figure
from .measures import MI_KINDS, NG_KINDS, delta_ng, mutual_information, ng_correlation
from .states import FAMILIES, StateSpec, make_state

_RANGE_KEYS = ("gamma", "alpha", "eta", "f", "r", "x")


def _fmt(value):
    if value == "":
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return "%.17g" % value
    return str(value)


def write_csv(rows, stream):
    stream.write(",".join(COLUMNS) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(row[c]) for c in COLUMNS) + "\n")


def _parse_range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"range {text!r} must be start:stop:count"
        )
    return float(parts[0]), float(parts[1]), int(parts[2])


def parse_state_file(path):
    """StateSpec plus optional loss transmittance from a key-value file."""
    keys = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise BadSpec(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            keys[key.strip().lower()] = value.strip()
    if "family" not in keys:
        raise BadSpec(f"{path}: missing required key 'family'")
    family = keys.pop("family")
    if family not in FAMILIES:
        raise BadSpec(f"{path}: unknown family {family!r}; expected {FAMILIES}")
    cutoff = None
    if "cutoff" in keys:
        cutoff = int(keys.pop("cutoff"))
    loss_eta = None
    if "eta" in keys:
        loss_eta = float(keys.pop("eta"))
    params = {}
    for key, value in keys.items():
        if key in ("coeffs", "levels"):
            items = [v for v in value.split(",") if v.strip()]
            params[key] = (
                [int(v) for v in items] if key == "levels"
                else [complex(v.strip()).real if complex(v.strip()).imag == 0
                      else complex(v.strip()) for v in items]
            )
        elif key in ("sign", "modes"):
            params[key] = int(value)
        else:
            params[key] = float(value)
    return StateSpec(family, params, cutoff=cutoff), loss_eta


def _parse_measure_id(text):
    """kind[:alpha] with optional delta:/ng: prefix -> (group, kind, alpha)."""
    parts = text.split(":")
    group = "mi"
    if parts[0] in ("delta", "ng"):
        group = parts[0]
        parts = parts[1:]
    if not parts or not parts[0]:
        raise BadSpec(f"empty measure id in {text!r}")
    kind = parts[0]
    alpha = float(parts[1]) if len(parts) > 1 else None
    if group == "ng":
        if kind not in NG_KINDS:
            raise BadSpec(f"unknown ng kind {kind!r}; expected {NG_KINDS}")
    elif kind not in MI_KINDS:
        raise BadSpec(f"unknown measure kind {kind!r}; expected {MI_KINDS}")
    return group, kind, alpha


def measure_rows(spec, loss_eta, measure_ids):
    state = make_state(spec)
    if loss_eta is not None:
        state = apply_loss(state, loss_eta)
    rows = []
    for mid in measure_ids:
        group, kind, alpha = _parse_measure_id(mid)
        row = {c: "" for c in COLUMNS}
        row.update(figure="measure_state", measure=mid)
        if loss_eta is not None:
            row["eta"] = loss_eta
        for key in ("gamma", "f", "r"):
            if key in spec.params:
                row[key] = float(abs(spec.params[key])
                                 if isinstance(spec.params[key], complex)
                                 else spec.params[key])
        try:
            if group == "mi":
                res = mutual_information(kind, state, alpha)
            elif group == "delta":
                res = delta_ng(kind, state, alpha)
            else:
                res = ng_correlation(kind, state)
            row.update(value=res.value, cutoff=res.cutoff[0],
                       tail_mass=res.tail_mass, status=res.status)
        except Exception:
            row.update(value=math.nan, status="flagged")
        rows.append(row)
    return rows


def _cmd_run_figure(args):
    options = {
        "grid": args.grid,
        "samples": args.samples,
        "seed": args.seed,
        "cutoff": args.cutoff,
    }
    for key in _RANGE_KEYS:
        val = getattr(args, key)
        if val is not None:
            options[key] = val
    rows = run_figure(args.id, options, threads=args.threads)
    _emit(rows, args.out)
    return 0


def _cmd_measure_state(args):
    spec, loss_eta = parse_state_file(args.spec)
    rows = measure_rows(spec, loss_eta, args.measures)
    _emit(rows, args.out)
    return 0


def _cmd_selftest(args):
    import pytest

    pytest_args = ["-q", "--color=no"]
    if args.level == "quick":
        pytest_args += ["-m", "not slow"]
    pytest_args += [args.tests]
    code = pytest.main(pytest_args)
    print("selftest:", "PASS" if code == 0 else f"FAIL (exit {code})")
    return int(code)


def _emit(rows, out):
    if out:
        with open(out, "w") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ngcorr",
        description="Correlation and non-Gaussian-correlation measures "
        "for two-mode bosonic states; figure-data sweeps emit CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("run_figure", help="emit the data behind one figure")
    p_fig.add_argument("id", choices=FIGURE_IDS)
    p_fig.add_argument("--out", help="output CSV path (default: stdout)")
    p_fig.add_argument("--cutoff", type=int, help="Fock cutoff override")
    p_fig.add_argument("--grid", type=int, help="grid density override")
    p_fig.add_argument("--samples", type=int, help="sample count override")
    p_fig.add_argument("--seed", type=int, default=0, help="sampling seed")
    p_fig.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: NGCORR_THREADS or all cores)")
    for key in _RANGE_KEYS:
        p_fig.add_argument(f"--{key}", type=_parse_range, metavar="START:STOP:COUNT")
    p_fig.set_defaults(func=_cmd_run_figure)

    p_meas = sub.add_parser("measure_state", help="evaluate measures on a state")
    p_meas.add_argument("spec", help="key-value state-spec file")
    p_meas.add_argument("measures", nargs="+",
                        help="measure ids like vn, renyi:2, delta:hs, ng:tr")
    p_meas.add_argument("--out", help="output CSV path (default: stdout)")
    p_meas.set_defaults(func=_cmd_measure_state)

    p_self = sub.add_parser("selftest", help="run the package test suites")
    p_self.add_argument("level", choices=("quick", "full"))
    p_self.add_argument("--tests", default="tests",
                        help="test directory (default: ./tests)")
    p_self.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
