/* status_host.c - walk the binding through invalid calls.
 *
 * Every misuse below must come back as a negative status code; none may
 * crash the process. Prints one line per probe and exits 0 only if every
 * status matched the expected one.
 */

#include <stdio.h>

#include "cq.h"

static int failures = 0;

static void expect(const char *what, int got, int want)
{
    const char *mark = got == want ? "ok  " : "FAIL";
    printf("%s %-44s status %4d (expected %4d)\n", mark, what, got, want);
    if (got != want)
        failures++;
}

int main(void)
{
    cq_qureg qr = NULL;
    cq_qkern qft = NULL, rabi = NULL;
    int32_t buf[64];

    expect("alloc_qureg before cq_init",
           alloc_qureg(&qr, 2), CQ_E_NOT_INITIALISED);
    expect("cq_qkern_byname before cq_init",
           cq_qkern_byname(&qft, "zero_init_full_qft"), CQ_E_NOT_INITIALISED);

    expect("cq_init", cq_init(0), CQ_SUCCESS);
    expect("cq_init when already up", cq_init(0), CQ_E_ALREADY_INITIALISED);

    expect("alloc_qureg of 0 qubits",
           alloc_qureg(&qr, 0), CQ_E_TOO_MANY_QUBITS);
    expect("alloc_qureg into NULL",
           alloc_qureg(NULL, 2), CQ_E_INVALID_HANDLE);
    expect("alloc_qureg of 2 qubits", alloc_qureg(&qr, 2), CQ_SUCCESS);

    expect("cq_qkern_byname of unknown kernel",
           cq_qkern_byname(&qft, "no_such_kernel"), CQ_E_UNKNOWN_KEY);
    expect("cq_qkern_byname of zero_init_full_qft",
           cq_qkern_byname(&qft, "zero_init_full_qft"), CQ_SUCCESS);
    expect("register_qkern of a garbage pointer",
           register_qkern(&failures), CQ_E_INVALID_HANDLE);

    expect("sm_qrun before register_qkern",
           sm_qrun(qft, qr, 2, buf, 2, 1), CQ_E_UNKNOWN_KEY);
    expect("register_qkern returns a key",
           register_qkern(qft) >= 0 ? 1 : 0, 1);

    expect("cq_qkern_byname of rabi_point",
           cq_qkern_byname(&rabi, "rabi_point"), CQ_SUCCESS);
    expect("register_qkern of a parameterised kernel",
           register_qkern(rabi), CQ_E_WRONG_KERNEL_KIND);

    expect("sm_qrun into a NULL buffer",
           sm_qrun(qft, qr, 2, NULL, 2, 1), CQ_E_BUFFER_TOO_SMALL);
    expect("sm_qrun with the wrong register width",
           sm_qrun(qft, qr, 3, buf, 3, 1), CQ_E_SIZE_MISMATCH);
    expect("sm_qrun on a valid setup",
           sm_qrun(qft, qr, 2, buf, 2, 4), CQ_SUCCESS);

    expect("free_qureg", free_qureg(qr), CQ_SUCCESS);
    expect("free_qureg a second time", free_qureg(qr), CQ_E_INVALID_HANDLE);
    expect("sm_qrun on a freed register",
           sm_qrun(qft, qr, 2, buf, 2, 1), CQ_E_INVALID_HANDLE);

    expect("cq_finalise", cq_finalise(0), CQ_SUCCESS);
    expect("cq_finalise when already down",
           cq_finalise(0), CQ_E_NOT_INITIALISED);

    printf("%d probe(s) failed\n", failures);
    return failures ? 1 : 0;
}
