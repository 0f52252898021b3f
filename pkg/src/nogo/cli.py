"""
Command-line front end.

    nogo fig1     [--theta-steps N]
    nogo regions  [--grid N] [--criterion pe|ds|both] [--theta-steps N]
    nogo cloner   [--theta-steps N]
    nogo bounds   [--theta-steps N]
    nogo choi     FILE
    nogo verify

Every data command writes CSV with one header row; ``-o/--output`` redirects
it from standard output to a file and ``--precision`` fixes the number of
decimals. ``NOGO_THREADS`` caps the worker threads used by ``regions``.

Exit status: 0 ok, 1 usage error, 2 I/O or input error, 3 failed verification.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from . import channels, cloner, disent, distinguish, ortho, qcore, verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VERIFY = 3

COMMANDS = ("fig1", "regions", "cloner", "bounds", "choi", "verify")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    grid_n: int = 200
    theta_steps: int = 512
    output_path: str = "-"
    precision: int = 12
    criterion: str = "both"
    channel_file: str = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.grid_n < 2:
            raise ValueError("grid_n must be >= 2")
        if self.theta_steps < 2:
            raise ValueError("theta_steps must be >= 2")
        if not 6 <= self.precision <= 17:
            raise ValueError("precision must be in [6, 17]")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _bounded_int(lo, hi=None):
    def convert(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if value < lo or (hi is not None and value > hi):
            span = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
            raise argparse.ArgumentTypeError(f"must be {span}, got {value}")
        return value
    return convert


def build_parser():
    parser = _Parser(prog="nogo", description="Disentanglement no-go numerics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", default="-", help="output file (default: stdout)")
    common.add_argument("--precision", type=_bounded_int(6, 17), default=12,
                        help="decimal digits in CSV output")

    theta = _Parser(add_help=False)
    theta.add_argument("--theta-steps", type=_bounded_int(2), default=512,
                       help="number of cloner angles (or overlaps for 'bounds')")

    sub.add_parser("fig1", parents=[common, theta], help="error probabilities of the cloner outputs")
    regions = sub.add_parser("regions", parents=[common, theta], help="forbidden-domain scan")
    regions.add_argument("--grid", type=_bounded_int(2), default=200, help="grid points per axis")
    regions.add_argument("--criterion", choices=("pe", "ds", "both"), default="both")
    sub.add_parser("cloner", parents=[common, theta], help="cloner coefficients and fidelity")
    sub.add_parser("bounds", parents=[common, theta], help="discrimination/orthogonalization table")
    choi = sub.add_parser("choi", parents=[common], help="CP/TP verdict for a Kraus description file")
    choi.add_argument("channel_file")
    sub.add_parser("verify", help="run the built-in property checks")
    return parser


def parse_args(argv):
    """Parse and validate a command line; raises :class:`UsageError`."""
    ns = build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        grid_n=getattr(ns, "grid", 200),
        theta_steps=getattr(ns, "theta_steps", 512),
        output_path=getattr(ns, "output", "-"),
        precision=getattr(ns, "precision", 12),
        criterion=getattr(ns, "criterion", "both"),
        channel_file=getattr(ns, "channel_file", None),
    )


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------

def format_value(x, precision):
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    text = f"{float(x):.{precision}f}"
    if text.startswith("-") and text.strip("-0.") == "":
        text = text[1:]
    return text


def write_csv(stream, header, rows, precision):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(x, precision) for x in row])


def cloner_thetas(steps):
    return np.linspace(0.0, cloner.THETA_MAX, steps, endpoint=False)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def fig1_rows(theta_steps):
    rows = []
    for theta in cloner_thetas(theta_steps):
        pe, pe_d = disent.pe_cloner(theta)
        _, _, u_out, v_out = cloner.cloner_states(theta)
        pu, pv = qcore.projector(u_out), qcore.projector(v_out)
        pe_num = distinguish.prob_error(pu, pv)
        pe_d_num = distinguish.prob_error(disent.disentangle(pu, (2, 2)),
                                          disent.disentangle(pv, (2, 2)))
        rows.append((theta, pe, pe_d, pe_num, pe_d_num))
    return ["theta", "pe", "pe_d", "pe_numeric", "pe_d_numeric"], rows


def regions_rows(grid_n, theta_steps):
    table = disent.region_table(grid_n)
    cols = [table[k] for k in disent.FIELDS]
    rows = [row + (False,) for row in zip(*cols)]
    for p in disent.cloner_curve(cloner_thetas(theta_steps)):
        cell = disent.region_cell(p.vartheta, p.varphi)
        rows.append(tuple(getattr(cell, k) for k in disent.FIELDS) + (True,))
    return list(disent.FIELDS) + ["cloner_curve"], rows


def cloner_rows(theta_steps):
    rows = []
    for theta in cloner_thetas(theta_steps):
        p = cloner.cloner_params(theta)
        rows.append((theta, p.a, p.b, p.c, cloner.cloner_fidelity(theta)))
    return ["theta", "a", "b", "c", "fidelity"], rows


def bounds_rows(steps):
    header = ["overlap", "helstrom_pe", "idp_success", "idp_closed_form",
              "orthogonalization_bound", "two_copy_success",
              "squaring_overlap", "squaring_success"]
    rows = []
    for s in np.linspace(0.0, 1.0, steps, endpoint=False):
        theta = 0.5 * np.arcsin(s)
        u = np.array([np.cos(theta), np.sin(theta)], dtype=complex)
        v = np.array([np.sin(theta), np.cos(theta)], dtype=complex)
        pe = distinguish.prob_error(qcore.projector(u), qcore.projector(v))
        idp = ortho.idp_povm(u, v).success_prob
        two = ortho.orthogonalize_two_copy(u, v)[0]
        sq = ortho.iterate_squaring(u, v, 1)[0]
        rows.append((s, pe, idp, 1.0 - s, ortho.orthogonalization_bound(u, v), two,
                     sq.overlap, sq.cumulative_success))
    return header, rows


def parse_complex(token):
    """Parse ``re+imi`` (also plain reals and ``j`` suffixes)."""
    t = token.strip()
    if t.endswith("i"):
        t = t[:-1] + "j"
    if t.endswith(("+j", "-j")) or t == "j":
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise InputError(f"cannot parse complex entry {token!r}")


def read_channel_file(path):
    """Kraus matrices, one row per line, blank lines between matrices, ``#`` comments."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    matrices, rows = [], []
    for raw in text.splitlines() + [""]:
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append([parse_complex(tok) for tok in line.split()])
        elif rows:
            if len({len(r) for r in rows}) != 1:
                raise InputError("ragged matrix rows in channel file")
            matrices.append(np.array(rows, dtype=complex))
            rows = []
    if not matrices:
        raise InputError("channel file contains no matrices")
    try:
        return channels.KrausChannel(matrices)
    except ValueError as exc:
        raise InputError(str(exc))


def choi_rows(path):
    ch = read_channel_file(path)
    verdict = channels.check_channel(ch)
    rows = [("dim_in", ch.dim_in), ("dim_out", ch.dim_out), ("n_kraus", len(ch.kraus_ops)),
            ("is_cp", verdict.is_cp), ("is_tp", verdict.is_tp),
            ("is_trace_nonincreasing", verdict.is_trace_nonincreasing)]
    rows += [(f"choi_eigenvalue_{i}", lam) for i, lam in enumerate(verdict.choi_eigenvalues)]
    return ["property", "value"], rows


def _emit(cfg, header, rows):
    if cfg.output_path in (None, "-"):
        write_csv(sys.stdout, header, rows, cfg.precision)
        sys.stdout.flush()
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, rows, cfg.precision)


def execute(cfg):
    """Run one command; returns the process exit status."""
    try:
        if cfg.command == "verify":
            results = verify.run_all()
            for r in results:
                print(r.line())
            failed = sum(not r.passed for r in results)
            print(f"{len(results) - failed}/{len(results)} checks passed")
            return EXIT_OK if failed == 0 else EXIT_VERIFY
        if cfg.command == "fig1":
            _emit(cfg, *fig1_rows(cfg.theta_steps))
        elif cfg.command == "regions":
            header, rows = regions_rows(cfg.grid_n, cfg.theta_steps)
            _emit(cfg, header, rows)
            grid_rows = rows[: cfg.grid_n * cfg.grid_n]
            flags = {"pe": ["forbidden_pe"], "ds": ["forbidden_ds"],
                     "both": ["forbidden_pe", "forbidden_ds"]}[cfg.criterion]
            idx = [disent.FIELDS.index(f) for f in flags]
            n_forbidden = sum(any(r[i] for i in idx) for r in grid_rows)
            print(f"forbidden cells ({cfg.criterion}): {n_forbidden} of {len(grid_rows)}",
                  file=sys.stderr)
        elif cfg.command == "cloner":
            _emit(cfg, *cloner_rows(cfg.theta_steps))
        elif cfg.command == "bounds":
            _emit(cfg, *bounds_rows(cfg.theta_steps))
        elif cfg.command == "choi":
            _emit(cfg, *choi_rows(cfg.channel_file))
    except (OSError, InputError) as exc:
        print(f"nogo: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code or EXIT_OK
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
