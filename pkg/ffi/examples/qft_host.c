/* qft_host.c - foreign-host QFT demo.
 *
 * Mirrors `cq-demo qft`: bring the runtime up, offload the catalogue's
 * zero_init_full_qft kernel for NSHOTS shots, print one line per shot.
 * Seed with CQ_SEED in the environment to reproduce a given run.
 *
 * Usage: qft_host [nqubits] [nshots]
 */

#include <stdio.h>
#include <stdlib.h>

#include "cq.h"

static void die(const char *what, int status)
{
    fprintf(stderr, "qft_host: %s failed with status %d\n", what, status);
    exit(1);
}

int main(int argc, char **argv)
{
    int nqubits = argc > 1 ? atoi(argv[1]) : 10;
    int nshots = argc > 2 ? atoi(argv[2]) : 10;
    int rc;

    rc = cq_init(0);
    if (rc != CQ_SUCCESS)
        die("cq_init", rc);

    cq_qkern qft;
    rc = cq_qkern_byname(&qft, "zero_init_full_qft");
    if (rc != CQ_SUCCESS)
        die("cq_qkern_byname", rc);
    rc = register_qkern(qft);
    if (rc < 0)
        die("register_qkern", rc);

    cq_qureg qr;
    rc = alloc_qureg(&qr, nqubits);
    if (rc != CQ_SUCCESS)
        die("alloc_qureg", rc);

    int32_t *crp = malloc(sizeof(int32_t) * (size_t)nqubits * (size_t)nshots);
    if (!crp)
        die("malloc", CQ_E_INTERNAL);
    rc = sm_qrun(qft, qr, nqubits, crp, nqubits, nshots);
    if (rc != CQ_SUCCESS)
        die("sm_qrun", rc);

    printf("Running QFT circuit on quantum device.\n");
    printf("Reporting measurement outcomes:\n");
    for (int k = 0; k < nshots; k++) {
        printf("Shot [%d]:", k);
        for (int b = 0; b < nqubits; b++)
            printf(" %d", crp[k * nqubits + b]);
        printf("\n");
    }

    free(crp);
    rc = free_qureg(qr);
    if (rc != CQ_SUCCESS)
        die("free_qureg", rc);
    rc = cq_finalise(0);
    if (rc != CQ_SUCCESS)
        die("cq_finalise", rc);
    return 0;
}
