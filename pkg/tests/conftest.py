import contextlib
import sys
from pathlib import Path

import pytest

import cq

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(autouse=True)
def _teardown_runtime():
    """Safety net: no test may leak an initialised runtime into the next."""
    yield
    if cq.is_initialised():
        cq.cq_finalise()


@contextlib.contextmanager
def runtime(seed=0, **kwargs):
    cq.cq_init(seed=seed, **kwargs)
    try:
        yield
    finally:
        if cq.is_initialised():
            cq.cq_finalise()


def run_on_device(fn, nqubits=1, seed=0, nmeasure=0, nshots=1, analog=None,
                  **init_kwargs):
    """Run fn(nqubits, qreg) as a kernel body; returns (value, results buffer).

    Spins up a fresh runtime, offloads once through the synchronous
    parameterised executor, tears down. fn's return value travels back in the
    parameter pack. Pass analog=<mode> to enable an analogue mode up front.
    """

    @cq.pqkern
    def probe(nq, qreg, creg, params):
        params["box"].append(params["fn"](nq, qreg))
        return 0

    box: list = []
    with runtime(seed=seed, **init_kwargs):
        if analog is not None:
            cq.enable_analog_mode(analog)
        cq.register_pqkern(probe)
        qr = cq.alloc_qureg(nqubits)
        buf = cq.result_buffer(nmeasure, nshots)
        cq.smp_qrun(probe, {"fn": fn, "box": box}, qr, nqubits, buf,
                    nmeasure, nshots)
        cq.free_qureg(qr)
    return box[-1] if box else None, buf
