"""Control queue, device loop and configuration plumbing.

A few tests here are deliberately white-box: they enqueue raw ControlOps or
inspect the device's gate log to pin down queue ordering and shot exclusivity,
which the public API only exposes indirectly.
"""

import threading
import time

import numpy as np
import pytest

import cq
from conftest import runtime
from cq.config import DeviceConfig, resolve_seed, resolve_verbosity
from cq.core import current_env
from cq.device import ControlOp, NoopRequest, OpCode, Reply
from cq.errors import (
    ConfigError,
    DeviceDownError,
    KernelError,
    UnknownKeyError,
)


def test_queue_preserves_order_exactly_once():
    with runtime():
        dev = current_env().devices[0]
        sink = []
        for i in range(1000):
            dev.enqueue(ControlOp(OpCode.NOOP, NoopRequest(sink, value=i)))
        reply = Reply()
        dev.enqueue(ControlOp(OpCode.NOOP, NoopRequest(sink, value=-1, reply=reply)))
        reply.wait()
        assert sink == list(range(1000)) + [-1]


def test_enqueue_after_shutdown_rejected():
    cq.cq_init(seed=0)
    dev = current_env().devices[0]
    cq.cq_finalise()
    with pytest.raises(DeviceDownError):
        dev.enqueue(ControlOp(OpCode.NOOP, NoopRequest([])))


def test_shutdown_as_first_op():
    # Nothing enqueued before teardown; the loop must still come down cleanly.
    cq.cq_init(seed=0)
    cq.cq_finalise()
    assert not cq.is_initialised()


def test_kernel_error_isolates():
    @cq.qkern
    def broken(nqubits, qreg, creg):
        raise RuntimeError("deliberate")

    @cq.qkern
    def fine(nqubits, qreg, creg):
        cq.set_qureg(qreg, 1, nqubits)
        cq.measure_qureg(qreg, nqubits)
        return 0

    with runtime():
        cq.register_qkern(broken)
        cq.register_qkern(fine)
        qr = cq.alloc_qureg(1)
        h = cq.a_qrun(broken, qr, 1, cq.result_buffer(0), 0)
        with pytest.raises(KernelError) as info:
            cq.wait_qrun(h)
        assert info.value.shot == 0
        assert isinstance(info.value.__cause__, RuntimeError)
        # the device loop survives and runs the next kernel
        buf = cq.result_buffer(1)
        cq.s_qrun(fine, qr, 1, buf, 1)
        assert buf[0] == 1
        cq.free_qureg(qr)


def test_unregistered_key_fails_run_but_not_loop():
    from cq.device import RunRequest
    from cq.executors import ExecHandle, ExecStatus

    with runtime():
        env = current_env()
        dev = env.devices[0]
        qr = cq.alloc_qureg(1)
        h = ExecHandle()
        h._bind(cq.result_buffer(0), 0, 1)
        dev.enqueue(ControlOp(OpCode.RUN_KERNEL, RunRequest(
            handle=h, key=713, parameterised=False, qr=qr,
            nqubits=1, nmeasure=0, nshots=1)))
        with pytest.raises(UnknownKeyError):
            cq.wait_qrun(h)
        assert h.status is ExecStatus.FAILED
        # loop still serves later traffic
        sink = []
        reply = Reply()
        dev.enqueue(ControlOp(OpCode.NOOP, NoopRequest(sink, value=7, reply=reply)))
        reply.wait()
        assert sink == [7]
        cq.free_qureg(qr)


def test_shots_are_exclusive_on_one_backend():
    @cq.qkern
    def tagged(nqubits, qreg, creg):
        cq.set_qureg(qreg, 0, nqubits)
        cq.hadamard(qreg[0])
        cq.hadamard(qreg[0])
        cq.measure_qureg(qreg, nqubits)
        return 0

    with runtime():
        env = current_env()
        dev = env.devices[0]
        dev.gate_log = []
        cq.register_qkern(tagged)
        qa = cq.alloc_qureg(1)
        qb = cq.alloc_qureg(1)
        ha = cq.am_qrun(tagged, qa, 1, cq.result_buffer(1, 40), 1, 40)
        hb = cq.am_qrun(tagged, qb, 1, cq.result_buffer(1, 40), 1, 40)
        cq.wait_qrun(ha)
        cq.wait_qrun(hb)
        log = dev.gate_log
        dev.gate_log = None
        # one queue, one worker: every (run, shot) segment is contiguous, and
        # all of run A's gates precede all of run B's
        tags = [tag for tag, _kind, _qubits in log]
        seen, last = set(), object()
        for tag in tags:
            if tag != last:
                assert tag not in seen  # a segment never resumes once left
                seen.add(tag)
                last = tag
        runs = [tag[0] for tag in tags]
        assert len(set(runs)) == 2
        assert sum(1 for x, y in zip(runs, runs[1:]) if x != y) == 1
        assert len(seen) == 80  # 2 runs x 40 shots
        cq.free_qureg(qa)
        cq.free_qureg(qb)


def test_backends_run_concurrently():
    barrier = threading.Barrier(2, timeout=5)

    @cq.qkern
    def meet(nqubits, qreg, creg):
        barrier.wait()
        return 0

    with runtime(num_backends=2):
        cq.register_qkern(meet)
        qa = cq.alloc_qureg(1, backend=0)
        qb = cq.alloc_qureg(1, backend=1)
        ha = cq.ab_qrun(meet, qa, 1, cq.result_buffer(0), 0, 0)
        hb = cq.ab_qrun(meet, qb, 1, cq.result_buffer(0), 0, 1)
        # would deadlock (and time out the barrier) on a shared worker
        cq.wait_qrun(ha)
        cq.wait_qrun(hb)
        cq.free_qureg(qa)
        cq.free_qureg(qb)


def test_backend_rngs_are_independent():
    def once(backend):
        cq.register_qkern(cq.zero_init_full_qft)
        qr = cq.alloc_qureg(3, backend=backend)
        buf = cq.result_buffer(3, 64)
        cq.smb_qrun(cq.zero_init_full_qft, qr, 3, buf, 3, 64, backend)
        cq.free_qureg(qr)
        return buf.copy()

    with runtime(seed=11, num_backends=2):
        a = once(0)
        b = once(1)
    assert not np.array_equal(a, b)
    with runtime(seed=11, num_backends=2):
        a2 = once(0)
    assert np.array_equal(a, a2)


# -- device config file -------------------------------------------------------------


def test_device_config_defaults():
    cfg = DeviceConfig()
    assert cfg.max_channels == 8
    assert cfg.c6 == 5420.0
    assert cfg.c3 == 3.7
    assert cfg.default_nsamples == 64


def test_device_config_from_file(tmp_path):
    f = tmp_path / "device.cfg"
    f.write_text(
        "# comment line\n"
        "\n"
        "max_channels 4\n"
        "C6 1000.0\n"
        "trotter_step_ns 0.05\n"
    )
    cfg = DeviceConfig.from_file(str(f))
    assert cfg.max_channels == 4
    assert cfg.c6 == 1000.0
    assert cfg.trotter_step_ns == 0.05
    assert cfg.c3 == 3.7  # untouched default


@pytest.mark.parametrize("body", [
    "bogus_key 3\n",
    "max_channels\n",
    "max_channels four\n",
    "max_channels 0\n",
    "trotter_step_ns -1\n",
    "default_nsamples 1\n",
])
def test_device_config_rejects(tmp_path, body):
    f = tmp_path / "device.cfg"
    f.write_text(body)
    with pytest.raises(ConfigError):
        DeviceConfig.from_file(str(f))


def test_device_config_missing_file():
    with pytest.raises(ConfigError):
        DeviceConfig.from_file("/nonexistent/device.cfg")


def test_runtime_accepts_config_file(tmp_path):
    f = tmp_path / "device.cfg"
    f.write_text("max_channels 2\n")
    with runtime(config=str(f)):
        assert current_env().cfg.device.max_channels == 2


# -- resolvers ----------------------------------------------------------------------


def test_resolve_verbosity(monkeypatch):
    monkeypatch.delenv("CQ_VERBOSITY", raising=False)
    assert resolve_verbosity(2) == 2
    monkeypatch.setenv("CQ_VERBOSITY", "3")
    assert resolve_verbosity(0) == 3
    monkeypatch.setenv("CQ_VERBOSITY", "x")
    with pytest.raises(ConfigError):
        resolve_verbosity(0)
    monkeypatch.delenv("CQ_VERBOSITY")
    with pytest.raises(ConfigError):
        resolve_verbosity(-1)


def test_resolve_seed(monkeypatch):
    monkeypatch.delenv("CQ_SEED", raising=False)
    assert resolve_seed(42) == 42
    assert resolve_seed(None) is None
    monkeypatch.setenv("CQ_SEED", "17")
    assert resolve_seed(None) == 17
    assert resolve_seed(42) == 42
    monkeypatch.setenv("CQ_SEED", "-2")
    with pytest.raises(ConfigError):
        resolve_seed(None)
    monkeypatch.setenv("CQ_SEED", "many")
    with pytest.raises(ConfigError):
        resolve_seed(None)
    with pytest.raises(ConfigError):
        resolve_seed(3.5)
