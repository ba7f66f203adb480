"""Command line demos: QFT offload, Bell pair, Rabi flopping, annealing MAXCUT.

Every demo initialises the runtime, runs, finalises, and exits 0; any
runtime error becomes a one-line diagnostic on stderr and a non-zero exit.
With --seed fixed the full output is byte-identical across runs.
"""

import argparse
import math
import os
import sys

import numpy as np

from .analog import AnalogMode, enable_analog_mode
from .config import ENV_SEED
from .core import (
    alloc_qureg,
    cq_finalise,
    cq_init,
    free_qureg,
    register_pqkern,
    register_qkern,
)
from .errors import CQError, InternalError
from .executors import am_qrun, result_buffer, sm_qrun, sp_qrun, wait_qrun
from .kernels import anneal_capture, bell_pair, rabi_point, zero_init_full_qft

EDGE_UM = 8.0

# vertex coordinates are chosen so every graph edge spans EDGE_UM while
# non-edges sit strictly further out (square diagonal, nothing in k4)
GRAPHS = {
    "single-edge": (
        [(0, 1)],
        [[0.0, 0.0, 0.0], [EDGE_UM, 0.0, 0.0]],
    ),
    "triangle": (
        [(0, 1), (1, 2), (0, 2)],
        [[0.0, 0.0, 0.0], [EDGE_UM, 0.0, 0.0],
         [EDGE_UM / 2, EDGE_UM * math.sqrt(3) / 2, 0.0]],
    ),
    "square": (
        [(0, 1), (1, 2), (2, 3), (3, 0)],
        [[0.0, 0.0, 0.0], [EDGE_UM, 0.0, 0.0],
         [EDGE_UM, EDGE_UM, 0.0], [0.0, EDGE_UM, 0.0]],
    ),
    "k4": (
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        [[0.0, 0.0, 0.0], [EDGE_UM, 0.0, 0.0],
         [EDGE_UM / 2, EDGE_UM * math.sqrt(3) / 2, 0.0],
         [EDGE_UM / 2, EDGE_UM * math.sqrt(3) / 6, EDGE_UM * math.sqrt(2 / 3)]],
    ),
}

ANNEAL = {
    "omega": 0.012,      # rad/ns, peak of the blackman drive envelope
    "delta0": -0.010,    # rad/ns, start red-detuned so |0..0> is the ground state
    "delta1": 0.010,     # rad/ns, final detuning inside the blockade window
    "duration": 3000.0,  # ns
}


def cut_size(edges, bits) -> int:
    return sum(1 for i, j in edges if bits[i] != bits[j])


def _pick_seed(args) -> int:
    """A concrete seed even when none was given, so reruns can match."""
    if args.seed is not None:
        return args.seed
    raw = os.environ.get(ENV_SEED)
    if raw is not None:
        return int(raw)
    return int(np.random.SeedSequence().entropy % 2**32)


def _qft_pass(args, seed: int, asynchronous: bool) -> np.ndarray:
    cq_init(args.verbosity, seed=seed, config=args.config)
    try:
        register_qkern(zero_init_full_qft)
        qr = alloc_qureg(args.qubits)
        buf = result_buffer(args.qubits, args.shots)
        if asynchronous:
            wait_qrun(am_qrun(zero_init_full_qft, qr, args.qubits, buf,
                              args.qubits, args.shots))
        else:
            sm_qrun(zero_init_full_qft, qr, args.qubits, buf,
                    args.qubits, args.shots)
        free_qureg(qr)
    finally:
        cq_finalise(args.verbosity)
    return buf.reshape(args.shots, args.qubits)


def demo_qft(args) -> int:
    seed = _pick_seed(args)
    shown = _qft_pass(args, seed, asynchronous=args.use_async)
    print("Running QFT circuit on quantum device.")
    print("Reporting measurement outcomes:")
    for k, row in enumerate(shown):
        print(f"Shot [{k}]: " + " ".join(str(int(b)) for b in row))
    # the opposite executor family must reproduce the run bit for bit
    check = _qft_pass(args, seed, asynchronous=not args.use_async)
    if not np.array_equal(shown, check):
        raise InternalError("sync and async passes disagree under one seed")
    return 0


def demo_bell(args) -> int:
    seed = _pick_seed(args)
    cq_init(args.verbosity, seed=seed, config=args.config)
    try:
        register_qkern(bell_pair)
        qr = alloc_qureg(2)
        buf = result_buffer(2, args.shots)
        if args.use_async:
            wait_qrun(am_qrun(bell_pair, qr, 2, buf, 2, args.shots))
        else:
            sm_qrun(bell_pair, qr, 2, buf, 2, args.shots)
        free_qureg(qr)
    finally:
        cq_finalise(args.verbosity)
    rows = buf.reshape(args.shots, 2)
    n00 = int(np.sum((rows[:, 0] == 0) & (rows[:, 1] == 0)))
    n11 = int(np.sum((rows[:, 0] == 1) & (rows[:, 1] == 1)))
    print(f"Bell pair, {args.shots} shot(s):")
    print(f"  00: {n00}  11: {n11}  mismatched: {args.shots - n00 - n11}")
    print(f"  matched fraction: {(n00 + n11) / args.shots:.4f}")
    return 0


def demo_rabi(args) -> int:
    seed = _pick_seed(args)
    omega = args.omega
    times = np.linspace(0.0, 2 * math.pi / omega, args.points)
    probs = []
    cq_init(args.verbosity, seed=seed, config=args.config)
    try:
        enable_analog_mode(AnalogMode.ISING)
        register_pqkern(rabi_point)
        qr = alloc_qureg(1)
        buf = result_buffer(0)
        out: list = []
        for t in times:
            sp_qrun(rabi_point, {"omega": omega, "t": float(t), "out": out},
                    qr, 1, buf, 0)
        probs = out
        free_qureg(qr)
    finally:
        cq_finalise(args.verbosity)
    print(f"Rabi sweep: omega = {omega:g} rad/ns, {args.points} point(s)")
    print(f"{'t/ns':>12}  {'P(1)':>10}  {'sin^2(wt/2)':>12}")
    worst = 0.0
    for t, p in zip(times, probs):
        ref = math.sin(omega * t / 2) ** 2
        worst = max(worst, abs(p - ref))
        print(f"{t:12.4f}  {p:10.6f}  {ref:12.6f}")
    print(f"max |P(1) - sin^2(wt/2)| = {worst:.3e}")
    return 0


def demo_maxcut(args) -> int:
    seed = _pick_seed(args)
    edges, positions = GRAPHS[args.graph]
    n = len(positions)
    out: list = []
    cq_init(args.verbosity, seed=seed, config=args.config)
    try:
        enable_analog_mode(AnalogMode.ISING)
        register_pqkern(anneal_capture)
        qr = alloc_qureg(n)
        params = dict(ANNEAL, positions=positions, shots=args.shots, out=out)
        sp_qrun(anneal_capture, params, qr, n, result_buffer(0), 0)
        free_qureg(qr)
    finally:
        cq_finalise(args.verbosity)
    rows = out[0].reshape(args.shots, n)
    sizes = np.array([cut_size(edges, row) for row in rows])
    best = int(sizes.argmax())
    assignment = " ".join(str(int(b)) for b in rows[best])
    print(f"MAXCUT on {args.graph}: {n} vertices, {len(edges)} edges, "
          f"{args.shots} shot(s)")
    print(f"Best cut found: [{assignment}] cutting {int(sizes[best])} edge(s)")
    print(f"Shots achieving it: {int(np.sum(sizes == sizes[best]))}")
    return 0


def _add_common(sp) -> None:
    sp.add_argument("--seed", type=int, default=None,
                    help="PRNG seed (default: entropy, or CQ_SEED if set)")
    sp.add_argument("--verbosity", type=int, default=0,
                    help="diagnostic level (CQ_VERBOSITY overrides)")
    sp.add_argument("--config", default=None,
                    help="device config file (key value lines)")
    sp.add_argument("--async", dest="use_async", action="store_true",
                    help="offload through the asynchronous executor family")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cq-demo",
                                 description="CQ runtime demo circuits")
    sub = ap.add_subparsers(dest="demo", required=True)

    p = sub.add_parser("qft", help="QFT on |0..0>, measured over many shots")
    p.add_argument("--qubits", type=int, default=10)
    p.add_argument("--shots", type=int, default=10)
    _add_common(p)
    p.set_defaults(fn=demo_qft)

    p = sub.add_parser("bell", help="Bell pair correlation statistics")
    p.add_argument("--shots", type=int, default=1000)
    _add_common(p)
    p.set_defaults(fn=demo_bell)

    p = sub.add_parser("rabi", help="single-qubit Rabi flop vs closed form")
    p.add_argument("--omega", type=float, default=0.1,
                   help="drive amplitude in rad/ns")
    p.add_argument("--points", type=int, default=50)
    _add_common(p)
    p.set_defaults(fn=demo_rabi)

    p = sub.add_parser("maxcut", help="annealing MAXCUT on a built-in graph")
    p.add_argument("--graph", choices=sorted(GRAPHS), default="square")
    p.add_argument("--shots", type=int, default=200)
    _add_common(p)
    p.set_defaults(fn=demo_maxcut)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CQError as exc:
        print(f"cq-demo: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
