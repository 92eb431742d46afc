"""Command-line entry point.

Exit status: 0 on success, 1 on bad input or usage, 2 when a verification
or tolerance check fails.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import circuit as circ
from .entanglement import entanglement_row
from .qpe import DEFAULT_T_BITS, estimate_spacing_sum, estimate_theta_sum
from .state import fidelity, fidelity_closed_form, hadamard_state, qubits_for, riemann_state
from .unitary import build_unitary, eigenphases, spacing_analytic, spacing_series, theta_exact
from .zeros import (
    ZeroTable,
    embedded_zeros,
    find_zeros_in_range,
    first_zeros,
    format_zeros,
    load_zeros_file,
)

log = logging.getLogger("riemannqc")

ENV_ZEROS = "ZETA_ZEROS_FILE"
EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="ascii") as fh:
            yield fh


def write_csv(rows, schema, path=None) -> None:
    """Header plus rows, 17 significant digits, LF line endings."""
    schema = list(schema)
    with _output(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(schema)
        for row in rows:
            row = list(row)
            if len(row) != len(schema):
                raise ValueError(f"row has {len(row)} fields, schema has {len(schema)}")
            w.writerow([fmt(v) for v in row])


# -- zero acquisition -------------------------------------------------------


def _zeros_file(args) -> str | None:
    return args.zeros_file or os.environ.get(ENV_ZEROS) or None


def get_zeros(args, count: int | None) -> ZeroTable:
    """``count`` zeros from ordinal ``--zero-offset``; None means all available."""
    offset = args.zero_offset
    path = _zeros_file(args)
    if path:
        need = None if count is None else offset - 1 + count
        table = load_zeros_file(path, max_count=need)
        return table.take(len(table) - offset + 1 if count is None else count, offset)
    if count is None:
        return embedded_zeros().take(len(embedded_zeros()) - offset + 1, offset)
    if offset - 1 + count > len(embedded_zeros()):
        log.info("computing %d zeros with the Riemann-Siegel finder", offset - 1 + count)
    return first_zeros(count, offset)


def _add_common(p: argparse.ArgumentParser, out_default: str | None = None) -> None:
    p.add_argument("--zeros-file", help=f"zero table, one value per line (default ${ENV_ZEROS})")
    p.add_argument("--zero-offset", type=int, default=1, help="ordinal of the first zero used")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--out", default=out_default, help="output path ('-' for stdout)")


def _resolve_k(args) -> int:
    if getattr(args, "qubits", None) is not None:
        return 1 << args.qubits
    if getattr(args, "count", None) is not None:
        return args.count
    raise UsageError("one of --count/-k or --qubits/-n is required")


# -- commands ---------------------------------------------------------------


def cmd_zeros(args) -> int:
    if args.t_lo is not None or args.t_hi is not None:
        if args.t_lo is None or args.t_hi is None:
            raise UsageError("--t-lo and --t-hi go together")
        table = find_zeros_in_range(args.t_lo, args.t_hi)
    else:
        table = get_zeros(args, args.count)
    with _output(args.out) as fh:
        fh.write(format_zeros(table))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    k = _resolve_k(args)
    zeros = get_zeros(args, k)
    phases = eigenphases(build_unitary(zeros))
    exact = np.atleast_1d(theta_exact(zeros.b))
    err = np.abs(phases - exact)
    rows = zip(zeros.index, zeros.b, exact, phases, err)
    write_csv(rows, ["index", "b", "theta_exact", "theta_eigen", "abs_error"], args.out)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    return EXIT_OK if err.max() <= tol else EXIT_CHECK


def cmd_spacing(args) -> int:
    zeros = get_zeros(args, args.count)
    exact = spacing_series(zeros)
    analytic = spacing_analytic(zeros, args.spacing_variant)
    rows = ((t, d, a, args.spacing_variant) for t, d, a in zip(exact.theta, exact.delta, analytic.delta))
    write_csv(rows, ["theta", "delta_exact", "delta_analytic", "variant"], args.out)
    return EXIT_OK


def cmd_state(args) -> int:
    k = _resolve_k(args)
    n = qubits_for(k)
    zeros = get_zeros(args, k)
    closed = riemann_state(zeros, "closed_form").amplitudes
    applied = riemann_state(zeros, "apply_unitary").amplitudes
    dev = float(np.max(np.abs(closed - applied)))
    rows = (
        (i, format(i, f"0{n}b"), a.real, a.imag, abs(a) ** 2) for i, a in enumerate(applied)
    )
    write_csv(rows, ["index", "bits", "re", "im", "prob"], args.out)
    print(f"closed_form_vs_unitary_deviation {dev:.3e}", file=sys.stderr)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    return EXIT_OK if dev <= tol else EXIT_CHECK


_MEASURE_COLUMNS = {
    "vn": ["E1_vn", "E2_vn"],
    "linear": ["E1_lin", "E2_lin"],
    "both": ["E1_vn", "E1_lin", "E2_vn", "E2_lin"],
}


def cmd_entanglement(args) -> int:
    if not 2 <= args.n_min <= args.n_max <= 16:
        raise ValueError("need 2 <= n-min <= n-max <= 16")
    cols = _MEASURE_COLUMNS[args.measure]
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        row = entanglement_row(riemann_state(get_zeros(args, 1 << n)))._asdict()
        rows.append([n] + [row[c] for c in cols])
    write_csv(rows, ["n_qubits"] + cols, args.out)
    return EXIT_OK


def cmd_fidelity(args) -> int:
    if not 1 <= args.n_min <= args.n_max <= 16:
        raise ValueError("need 1 <= n-min <= n-max <= 16")
    rows, worst = [], 0.0
    for n in range(args.n_min, args.n_max + 1):
        zeros = get_zeros(args, 1 << n)
        direct = fidelity(riemann_state(zeros), hadamard_state(n))
        closed = fidelity_closed_form(zeros)
        worst = max(worst, abs(direct - closed))
        rows.append((n, direct, closed))
    write_csv(rows, ["n_qubits", "fidelity", "closed_form"], args.out)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    return EXIT_OK if worst <= tol else EXIT_CHECK


def cmd_circuit(args) -> int:
    if args.qubits is None:
        raise UsageError("--qubits/-n is required")
    zeros = get_zeros(args, 1 << args.qubits)
    c = circ.synthesize(zeros)
    if args.expand:
        c = circ.expand_diagonal(c)
    if args.out:
        Path(args.out).write_text(circ.to_text(c), encoding="ascii")
    elif not args.verify:
        sys.stdout.write(circ.to_text(c))
    if args.verify:
        tol = args.tolerance if args.tolerance is not None else 1e-8
        check = circ.verify_against_unitary(c, zeros, tol)
        print(f"max_deviation {check.deviation:.3e} mode {check.mode}")
        return EXIT_OK if check.passed else EXIT_CHECK
    return EXIT_OK


def cmd_estimate(args) -> int:
    k = _resolve_k(args)
    zeros = get_zeros(args, k)
    bound = 2 * math.pi / (1 << args.t_bits)
    tol = args.tolerance if args.tolerance is not None else bound
    rows, ok = [], True
    targets = ["theta_sum", "spacing_sum"] if args.target == "both" else [args.target]
    for name in targets:
        fn = estimate_theta_sum if name == "theta_sum" else estimate_spacing_sum
        est = fn(zeros, args.t_bits)
        ok &= est.error <= tol
        rows.append((name, args.t_bits, est.estimate, est.truth, est.error, est.result.distribution[est.result.top_outcome]))
    write_csv(rows, ["quantity", "t_bits", "estimate", "truth", "error", "top_probability"], args.out)
    return EXIT_OK if ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riemannqc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("zeros", help="print a zero table")
    _add_common(p)
    p.add_argument("--count", "-k", type=int)
    p.add_argument("--t-lo", type=float)
    p.add_argument("--t-hi", type=float)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("spectrum", help="eigenphases of U_R against the per-zero formula")
    _add_common(p)
    p.add_argument("--count", "-k", type=int)
    p.add_argument("--qubits", "-n", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("spacing", help="phase spacings versus phase (spacing plot data)")
    _add_common(p)
    p.add_argument("--count", "-k", type=int)
    p.add_argument("--spacing-variant", choices=["density", "literal"], default="density")
    p.set_defaults(func=cmd_spacing)

    p = sub.add_parser("state", help="Riemannian state amplitudes")
    _add_common(p)
    p.add_argument("--count", "-k", type=int)
    p.add_argument("--qubits", "-n", type=int)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("entanglement", help="average bipartite entanglement (entanglement plot data)")
    _add_common(p)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--measure", choices=["vn", "linear", "both"], default="both")
    p.set_defaults(func=cmd_entanglement)

    p = sub.add_parser("fidelity", help="overlap with the uniform product state (fidelity plot data)")
    _add_common(p)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=16)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("circuit", help="synthesize (and optionally verify) the circuit")
    _add_common(p)
    p.add_argument("--qubits", "-n", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--expand", action="store_true", help="lower the diagonal layer to controlled phases")
    p.set_defaults(func=cmd_circuit)

    p = sub.add_parser("estimate", help="phase-estimation simulation of the phase sums")
    _add_common(p)
    p.add_argument("--count", "-k", type=int)
    p.add_argument("--qubits", "-n", type=int)
    p.add_argument("--t-bits", type=int, default=DEFAULT_T_BITS)
    p.add_argument("--target", choices=["theta_sum", "spacing_sum", "both"], default="both")
    p.set_defaults(func=cmd_estimate)
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"riemannqc: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(dispatch())
