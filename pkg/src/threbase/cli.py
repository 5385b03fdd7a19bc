"""Command-line front end.

Subcommands: transpile, verify, net, simulate, bench.  All output is
deterministic given the flags (plus --seed where randomness is involved),
so repeated invocations are byte-identical.  Exit codes: 0 success or
check passed, 1 check failed or accuracy budget not met, 2 usage or
validation error, 3 entry/qubit cap exceeded.

TH_REBASE_MAX_QUBITS overrides the dense-simulation qubit cap.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io as tio
from . import sk, verify
from .circuit import MAX_QUBITS
from .errors import BudgetNotMet, CapExceeded, CompileError, ValidationError
from .gates import BUILTIN_GATE_SETS
from .linalg import haar_unitary
from .passes import (
    REALIFY_ALPHABET,
    TARGET_ALPHABET,
    TranspileReport,
    realify_circuit,
    rebase_circuit,
)


def _cap() -> int:
    raw = os.environ.get("TH_REBASE_MAX_QUBITS")
    if raw is None:
        return MAX_QUBITS
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(
            f"TH_REBASE_MAX_QUBITS must be an integer, got {raw!r}"
        ) from None
    if cap < 1:
        raise ValidationError(f"TH_REBASE_MAX_QUBITS must be >= 1, got {cap}")
    return cap


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise ValidationError(f"cannot write {path}: {e.strerror}") from None


def _load_net(path: str, expect_qubits: int | None = None) -> sk.Net:
    net = tio.parse_net(_read(path))
    if expect_qubits is not None and net.gateset.n_qubits != expect_qubits:
        raise ValidationError(
            f"net {path} is over a {net.gateset.n_qubits}-qubit gate set, "
            f"need {expect_qubits}"
        )
    return net


def _kitaev_net(args) -> sk.Net:
    if args.net:
        return _load_net(args.net, expect_qubits=2)
    return sk.build_net(BUILTIN_GATE_SETS["kitaev"](), 8)


def _report_lines(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


# --- transpile ------------------------------------------------------------

def cmd_transpile(args) -> int:
    c = tio.parse_circuit(_read(args.input))
    kinds = {g.kind for g in c.gates}

    if args.to == "kitaev":
        out, report = rebase_circuit(c, _kitaev_net(args), args.eps)
    elif kinds <= set(TARGET_ALPHABET):
        out = c
        report = TranspileReport(len(c), len(c), c.n_qubits, c.n_qubits, 0.0)
    else:
        rebase_err = 0.0
        input_gates = len(c)
        if not kinds <= set(REALIFY_ALPHABET):
            c, rebase_report = rebase_circuit(c, _kitaev_net(args), args.eps)
            rebase_err = rebase_report.error_bound
        out, report = realify_circuit(c)
        report = TranspileReport(
            input_gates,
            report.output_gates,
            report.input_qubits,
            report.output_qubits,
            rebase_err,
        )

    text = tio.emit_circuit(out)
    lines = _report_lines(
        [
            ("input_gates", report.input_gates),
            ("output_gates", report.output_gates),
            ("input_qubits", report.input_qubits),
            ("output_qubits", report.output_qubits),
            ("error_bound", format(report.error_bound, ".17g")),
        ]
    )
    if args.output is None:
        sys.stdout.write(text)
        sys.stderr.write(lines)
    else:
        _write(args.output, text)
        sys.stdout.write(lines)
    return 0


# --- verify ---------------------------------------------------------------

def cmd_verify(args) -> int:
    a = tio.parse_circuit(_read(args.a))
    b = tio.parse_circuit(_read(args.b))
    cap = _cap()
    if args.mode == "exact":
        rep = verify.check_exact(a, b, args.tol, max_qubits=cap)
    elif args.mode == "realified":
        rep = verify.check_realified(a, b, args.tol, max_qubits=cap)
    else:
        rep = verify.check_measurement_stats(a, b, args.tol, max_qubits=cap)
    worst = "-" if rep.worst_input is None else str(rep.worst_input)
    sys.stdout.write(
        _report_lines(
            [
                ("mode", rep.kind),
                ("max_deviation", format(rep.max_deviation, ".17g")),
                ("worst_input", worst),
                ("tolerance", format(rep.tolerance, ".17g")),
                ("passed", "yes" if rep.passed else "no"),
            ]
        )
    )
    return 0 if rep.passed else 1


# --- net ------------------------------------------------------------------

def cmd_net(args) -> int:
    if args.action == "build":
        factory = BUILTIN_GATE_SETS.get(args.set)
        if factory is None:
            raise ValidationError(
                f"unknown gate set {args.set!r}; choose from "
                f"{sorted(BUILTIN_GATE_SETS)}"
            )
        net = sk.build_net(factory(), args.max_len, args.dedupe)
        _write(args.output, tio.emit_net(net))
        if args.output is not None:
            sys.stdout.write(
                _report_lines(
                    [("gateset", net.gateset.name), ("entries", len(net))]
                )
            )
        return 0

    net = _load_net(args.path)
    by_len: dict[int, int] = {}
    for e in net.entries:
        by_len[e.length] = by_len.get(e.length, 0) + 1
    hist = " ".join(f"{l}:{by_len[l]}" for l in sorted(by_len))
    sys.stdout.write(
        _report_lines(
            [
                ("gateset", net.gateset.name),
                ("qubits", net.gateset.n_qubits),
                ("max_len", net.max_length),
                ("dedupe_tol", format(net.dedupe_tol, ".17g")),
                ("entries", len(net)),
                ("by_length", hist),
            ]
        )
    )
    return 0


# --- simulate -------------------------------------------------------------

def cmd_simulate(args) -> int:
    c = tio.parse_circuit(_read(args.input))
    bits = args.input_state
    if bits and set(bits) <= {"0", "1"} and len(bits) == c.n_qubits:
        index = int(bits, 2)
    else:
        raise ValidationError(
            f"--input must be a {c.n_qubits}-bit string of 0s and 1s, got {bits!r}"
        )
    state = verify.run(c, index, max_qubits=_cap())
    n = c.n_qubits
    out = []
    for i, amp in enumerate(state.amplitudes):
        out.append(
            f"|{i:0{n}b}> {format(amp.real, '.17g')} {format(amp.imag, '.17g')}\n"
        )
    sys.stdout.write("".join(out))
    return 0


# --- bench ----------------------------------------------------------------

def cmd_bench(args) -> int:
    if not args.sk_scaling:
        raise ValidationError("bench requires --sk-scaling")
    if args.net:
        net = _load_net(args.net, expect_qubits=1)
    else:
        net = sk.build_net(BUILTIN_GATE_SETS["ht"](), args.max_len)
    rng = np.random.default_rng(args.seed)
    cfg = sk.SKConfig(net=net, eps=1e-12, depth=args.max_depth)
    rows = ["target,depth,achieved,seq_len\n"]
    for t in range(args.targets):
        u = haar_unitary(2, rng)
        for depth, (seq, achieved) in enumerate(sk.sk_trace(u, cfg)):
            rows.append(f"{t},{depth},{format(achieved, '.17g')},{len(seq)}\n")
    sys.stdout.write("".join(rows))
    return 0


# --- entry point ----------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="threbase",
        description="Rebase quantum circuits onto {Toffoli, Hadamard}.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transpile", help="rewrite a circuit over a target set")
    t.add_argument("input", help="circuit JSON file")
    t.add_argument("--to", choices=("th", "kitaev"), required=True)
    t.add_argument("--eps", type=float, default=1e-2, help="approximation budget")
    t.add_argument("--net", help="two-qubit net cache for approximations")
    t.add_argument("-o", "--output", help="output circuit file (default stdout)")
    t.set_defaults(func=cmd_transpile)

    v = sub.add_parser("verify", help="check two circuits for equivalence")
    v.add_argument("a")
    v.add_argument("b")
    v.add_argument("--mode", choices=("exact", "realified", "stats"), default="exact")
    v.add_argument("--tol", type=float, default=verify.DEFAULT_TOL)
    v.set_defaults(func=cmd_verify)

    n = sub.add_parser("net", help="build or inspect a net cache")
    nsub = n.add_subparsers(dest="action", required=True)
    nb = nsub.add_parser("build")
    nb.add_argument("--set", required=True, help="gate set name (kitaev or ht)")
    nb.add_argument("--max-len", type=int, required=True)
    nb.add_argument("--dedupe", type=float, default=sk.DEFAULT_DEDUPE_TOL)
    nb.add_argument("-o", "--output", help="cache file (default stdout)")
    ni = nsub.add_parser("inspect")
    ni.add_argument("path")
    n.set_defaults(func=cmd_net)

    s = sub.add_parser("simulate", help="print the output state on a basis input")
    s.add_argument("input", help="circuit JSON file")
    s.add_argument("--input", dest="input_state", required=True, metavar="BITS")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", help="emit machine-readable scaling tables")
    b.add_argument("--sk-scaling", action="store_true")
    b.add_argument("--targets", type=int, default=20)
    b.add_argument("--max-depth", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--net", help="single-qubit net cache")
    b.add_argument("--max-len", type=int, default=12, help="net length when building")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetNotMet as e:
        sys.stderr.write(f"error: {e}\n")
        if e.achieved is not None:
            sys.stderr.write(f"best_achieved: {format(e.achieved, '.17g')}\n")
        return 1
    except ValidationError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except CapExceeded as e:
        sys.stderr.write(f"error: {e}\n")
        return 3
    except CompileError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
