"""CQ runtime: offload gate and pulse kernels to a simulated quantum device.

The host side covers initialisation, register allocation, kernel
registration and the sixteen executor entry points. Everything that touches
qubits (gates, measurement, the analogue channel API) only works inside a
kernel running on the device.
"""

from . import errors
from .analog import (
    AnalogMode,
    Channel,
    ChannelType,
    Pulse,
    barrier,
    capture,
    delay,
    disable_analog_qreg,
    enable_analog_mode,
    enable_analog_qreg,
    free_pulse,
    get_channel,
    init_pulse,
    play,
    resample_pulse,
    retarget_channel,
    set_qubit_pos,
    waveform_fill,
)
from .config import DeviceConfig, RuntimeConfig
from .core import (
    ParamQuantumKernel,
    QuantumKernel,
    alloc_qubit,
    alloc_qureg,
    cq_finalise,
    cq_init,
    free_qubit,
    free_qureg,
    is_initialised,
    pqkern,
    qkern,
    register_pqkern,
    register_qkern,
)
from .errors import CQ_SUCCESS, CQError, KernelError, StagingOverflowError, code_of
from .executors import (
    ExecHandle,
    ExecRequest,
    ExecStatus,
    a_qrun,
    ab_qrun,
    am_qrun,
    amb_qrun,
    amp_qrun,
    ampb_qrun,
    ap_qrun,
    apb_qrun,
    execute,
    halt_qrun,
    result_buffer,
    s_qrun,
    sb_qrun,
    sm_qrun,
    smb_qrun,
    smp_qrun,
    smpb_qrun,
    sp_qrun,
    spb_qrun,
    sync_qrun,
    wait_qrun,
)
from .gates import (
    ccx,
    ch,
    cphase,
    cp,
    crx,
    cry,
    crz,
    cswap,
    cu,
    cx,
    cy,
    cz,
    h,
    hadamard,
    p,
    phase,
    rx,
    ry,
    rz,
    s,
    sdg,
    swap,
    sx,
    t,
    tdg,
    u,
    x,
    y,
    z,
)
from .gates import id as id_gate
from .handles import CSTATE_INVALID, QubitHandle, is_valid_cstate
from .kernels import (
    KERNELS,
    anneal_capture,
    bell_pair,
    full_qft_circuit,
    ground_state,
    phased_qft,
    rabi_point,
    zero_init_full_qft,
)
from .measurement import (
    amplitudes,
    dmeasure,
    dmeasure_qubit,
    dmeasure_qureg,
    measure,
    measure_qubit,
    measure_qureg,
    probabilities,
    set_qubit,
    set_qureg,
    set_qureg_cstate,
)

__version__ = "0.1.0"

__all__ = [
    "AnalogMode", "Channel", "ChannelType", "Pulse", "barrier", "capture",
    "delay", "disable_analog_qreg", "enable_analog_mode", "enable_analog_qreg",
    "free_pulse", "get_channel", "init_pulse", "play", "resample_pulse",
    "retarget_channel", "set_qubit_pos", "waveform_fill",
    "DeviceConfig", "RuntimeConfig",
    "ParamQuantumKernel", "QuantumKernel", "alloc_qubit", "alloc_qureg",
    "cq_finalise", "cq_init", "free_qubit", "free_qureg", "is_initialised",
    "pqkern", "qkern", "register_pqkern", "register_qkern",
    "CQ_SUCCESS", "CQError", "KernelError", "StagingOverflowError", "code_of",
    "errors",
    "ExecHandle", "ExecRequest", "ExecStatus",
    "a_qrun", "ab_qrun", "am_qrun", "amb_qrun", "amp_qrun", "ampb_qrun",
    "ap_qrun", "apb_qrun", "s_qrun", "sb_qrun", "sm_qrun", "smb_qrun",
    "smp_qrun", "smpb_qrun", "sp_qrun", "spb_qrun",
    "execute", "halt_qrun", "result_buffer", "sync_qrun", "wait_qrun",
    "ccx", "ch", "cphase", "cp", "crx", "cry", "crz", "cswap", "cu", "cx",
    "cy", "cz", "h", "hadamard", "id_gate", "p", "phase", "rx", "ry", "rz",
    "s", "sdg", "swap", "sx", "t", "tdg", "u", "x", "y", "z",
    "CSTATE_INVALID", "QubitHandle", "is_valid_cstate",
    "KERNELS", "anneal_capture", "bell_pair", "full_qft_circuit",
    "ground_state", "phased_qft", "rabi_point", "zero_init_full_qft",
    "amplitudes", "dmeasure", "dmeasure_qubit", "dmeasure_qureg", "measure",
    "measure_qubit", "measure_qureg", "probabilities", "set_qubit",
    "set_qureg", "set_qureg_cstate",
]
