/* cq.h - C binding for the CQ runtime.
 *
 * A thin shim over the Python runtime, exposing the six host control
 * functions with plain-C signatures so compiled hosts (C, and Fortran via
 * iso_c_binding) can offload predefined quantum kernels.
 *
 * Conventions:
 *   - Every function returns int: CQ_SUCCESS (0) or a negative status from
 *     the table below. register_qkern additionally returns the registration
 *     key (>= 0) on success. No call aborts the process on bad input.
 *   - Handles are opaque pointers owned by the shim. A register handle is
 *     valid from alloc_qureg until free_qureg; a kernel reference obtained
 *     from cq_qkern_byname stays valid until cq_finalise.
 *   - Result buffers are caller-allocated int32_t arrays of length
 *     nmeasure * nshots, written shot-major; unwritten slots hold -1.
 *   - Reproducibility: set the CQ_SEED environment variable before cq_init.
 *     CQ_VERBOSITY overrides the verbosity argument.
 *   - All calls must come from one host thread (not enforced).
 *
 * Kernels cannot be defined in C; cq_qkern_byname fetches entries of the
 * runtime's predefined kernel catalogue ("zero_init_full_qft", "bell_pair",
 * "ground_state", ...) for use with register_qkern and sm_qrun.
 */

#ifndef CQ_H
#define CQ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef void *cq_qureg;  /* quantum register handle */
typedef void *cq_qkern;  /* kernel reference */

/* Status codes. 0 is success; failures mirror the runtime's error taxonomy. */
enum cq_status {
    CQ_SUCCESS                  = 0,

    /* lifecycle */
    CQ_E_NOT_INITIALISED        = -1,
    CQ_E_ALREADY_INITIALISED    = -2,
    CQ_E_DEVICE_START_FAILURE   = -3,
    CQ_E_DEVICE_DOWN            = -4,
    CQ_E_DEVICE_CONTEXT         = -5,

    /* resources */
    CQ_E_TOO_MANY_QUBITS        = -10,
    CQ_E_INVALID_HANDLE         = -11,

    /* registration and dispatch */
    CQ_E_REGISTRY_FULL          = -20,
    CQ_E_UNKNOWN_KEY            = -21,
    CQ_E_WRONG_KERNEL_KIND      = -22,

    /* execution */
    CQ_E_BUFFER_TOO_SMALL       = -30,
    CQ_E_UNKNOWN_BACKEND        = -31,
    CQ_E_KERNEL                 = -32,
    CQ_E_STAGING_OVERFLOW       = -33,

    /* state manipulation */
    CQ_E_INVALID_CSTATE         = -40,
    CQ_E_HOST_CONTEXT           = -41,
    CQ_E_STATE_OUT_OF_RANGE     = -42,
    CQ_E_SIZE_MISMATCH          = -43,
    CQ_E_DUPLICATE_QUBIT        = -44,
    CQ_E_TARGET_OUT_OF_RANGE    = -45,
    CQ_E_DUPLICATE_TARGET       = -46,
    CQ_E_TOO_LARGE              = -47,

    /* analogue extension */
    CQ_E_UNKNOWN_MODE           = -60,
    CQ_E_MODE_NOT_ENABLED       = -61,
    CQ_E_MISSING_TARGET         = -62,
    CQ_E_CHANNEL_LIMIT          = -63,
    CQ_E_GLOBAL_CHANNEL         = -64,
    CQ_E_TARGET_OUT_OF_REGISTER = -65,
    CQ_E_COINCIDENT_QUBITS      = -66,
    CQ_E_NON_POSITIVE_DURATION  = -67,
    CQ_E_INVALID_PULSE          = -68,
    CQ_E_BAD_PARAMS             = -69,
    CQ_E_KNOT_COUNT_TOO_SMALL   = -70,
    CQ_E_SHOTS_ZERO             = -71,
    CQ_E_NEGATIVE_DELAY         = -72,
    CQ_E_MIXED_REGISTERS        = -73,
    CQ_E_EMPTY_CHANNEL_LIST     = -74,

    /* configuration */
    CQ_E_CONFIG                 = -90,

    CQ_E_INTERNAL               = -99
};

/* Bring the runtime up. Starts the embedded interpreter on first use. */
int cq_init(int verbosity);

/* Tear the runtime down, halting in-flight work. The interpreter stays up,
 * so init/finalise cycles are allowed within one process. */
int cq_finalise(int verbosity);

/* Allocate an nqubits register; the handle lands in *qrp. */
int alloc_qureg(cq_qureg *qrp, int nqubits);

/* Release a register allocated by alloc_qureg. */
int free_qureg(cq_qureg qrp);

/* Register a kernel reference; returns its key (>= 0) or a negative status. */
int register_qkern(cq_qkern kernel);

/* Run a registered kernel for nshots shots, synchronously. Outcomes go to
 * crp[0 .. nmeasure*nshots-1], shot-major, -1 for unwritten slots. */
int sm_qrun(cq_qkern kernel, cq_qureg qrp, int nqubits, int32_t *crp,
            int nmeasure, int nshots);

/* Fetch a predefined kernel from the runtime catalogue by name. */
int cq_qkern_byname(cq_qkern *out, const char *name);

#ifdef __cplusplus
}
#endif

#endif /* CQ_H */
