/* cq_ffi.c - C binding over the Python CQ runtime.
 *
 * The shim embeds an interpreter, forwards each call to the runtime's host
 * API, and maps exceptions to the negative status codes in cq.h through the
 * runtime's own code_of(). Handles given to the caller are interpreter
 * object addresses; the shim keeps them alive and tracks which are valid so
 * stale or foreign pointers fail with a status instead of dereferencing.
 */

#define PY_SSIZE_T_CLEAN
#include <Python.h>

#include <stdlib.h>
#include <string.h>

#include "cq.h"

static int g_booted = 0;        /* interpreter up, modules cached */
static int g_runtime_up = 0;    /* between successful cq_init and cq_finalise */

static PyObject *g_cq;          /* the cq package */
static PyObject *g_code_of;     /* cq.errors.code_of */
static PyObject *g_catalogue;   /* cq.kernels.KERNELS */

/* -- issued-pointer tracking ----------------------------------------------- */

struct ptr_set {
    void **items;
    size_t len, cap;
};

static struct ptr_set g_registers;
static struct ptr_set g_kernels;

static int ptr_set_add(struct ptr_set *s, void *p)
{
    if (s->len == s->cap) {
        size_t cap = s->cap ? s->cap * 2 : 8;
        void **items = realloc(s->items, cap * sizeof *items);
        if (!items)
            return -1;
        s->items = items;
        s->cap = cap;
    }
    s->items[s->len++] = p;
    return 0;
}

static int ptr_set_contains(const struct ptr_set *s, const void *p)
{
    for (size_t i = 0; i < s->len; i++)
        if (s->items[i] == p)
            return 1;
    return 0;
}

static void ptr_set_remove(struct ptr_set *s, const void *p)
{
    for (size_t i = 0; i < s->len; i++) {
        if (s->items[i] == p) {
            s->items[i] = s->items[--s->len];
            return;
        }
    }
}

/* -- interpreter plumbing --------------------------------------------------- */

/* Map the pending exception to a status code and clear it. */
static int status_from_exception(void)
{
    PyObject *type, *value, *tb;
    int code = CQ_E_INTERNAL;

    PyErr_Fetch(&type, &value, &tb);
    if (!type)
        return CQ_E_INTERNAL;
    PyErr_NormalizeException(&type, &value, &tb);
    if (g_code_of && value) {
        PyObject *res = PyObject_CallFunctionObjArgs(g_code_of, value, NULL);
        if (res) {
            long c = PyLong_AsLong(res);
            if (c < 0 && !PyErr_Occurred())
                code = (int)c;
            Py_DECREF(res);
        }
        PyErr_Clear();
    }
    Py_XDECREF(type);
    Py_XDECREF(value);
    Py_XDECREF(tb);
    return code;
}

/* Boot the interpreter and cache the runtime entry points (once). */
static int ensure_interpreter(void)
{
    if (g_booted)
        return CQ_SUCCESS;

    Py_InitializeEx(0);

    PyObject *errors = NULL, *kernels = NULL;
    g_cq = PyImport_ImportModule("cq");
    if (!g_cq)
        goto fail;
    errors = PyImport_ImportModule("cq.errors");
    if (!errors)
        goto fail;
    g_code_of = PyObject_GetAttrString(errors, "code_of");
    if (!g_code_of)
        goto fail;
    kernels = PyImport_ImportModule("cq.kernels");
    if (!kernels)
        goto fail;
    g_catalogue = PyObject_GetAttrString(kernels, "KERNELS");
    if (!g_catalogue)
        goto fail;
    Py_DECREF(errors);
    Py_DECREF(kernels);

    g_booted = 1;
    /* release the GIL so the runtime's device thread can run between calls */
    PyEval_SaveThread();
    return CQ_SUCCESS;

fail:
    PyErr_Print();
    Py_XDECREF(errors);
    Py_XDECREF(kernels);
    Py_CLEAR(g_cq);
    Py_CLEAR(g_code_of);
    Py_CLEAR(g_catalogue);
    return CQ_E_INTERNAL;
}

/* Call cq.<name>(args...) and reduce the result to a status code. If out is
 * non-NULL the result object is handed over there instead of dropped. */
static int call_runtime(PyObject **out, const char *name, const char *fmt, ...)
{
    PyGILState_STATE gil = PyGILState_Ensure();
    int status = CQ_SUCCESS;
    va_list ap;

    va_start(ap, fmt);
    PyObject *args = fmt ? Py_VaBuildValue(fmt, ap) : PyTuple_New(0);
    va_end(ap);

    PyObject *fn = NULL, *res = NULL;
    if (!args) {
        status = status_from_exception();
        goto done;
    }
    if (!PyTuple_Check(args)) {
        PyObject *tuple = PyTuple_Pack(1, args);
        Py_DECREF(args);
        args = tuple;
        if (!args) {
            status = status_from_exception();
            goto done;
        }
    }
    fn = PyObject_GetAttrString(g_cq, name);
    if (!fn) {
        status = status_from_exception();
        goto done;
    }
    res = PyObject_CallObject(fn, args);
    if (!res) {
        status = status_from_exception();
        goto done;
    }
    if (out) {
        *out = res;
        res = NULL;
    }

done:
    Py_XDECREF(args);
    Py_XDECREF(fn);
    Py_XDECREF(res);
    PyGILState_Release(gil);
    return status;
}

/* -- exported surface -------------------------------------------------------- */

int cq_init(int verbosity)
{
    int rc = ensure_interpreter();
    if (rc != CQ_SUCCESS)
        return rc;
    rc = call_runtime(NULL, "cq_init", "(i)", verbosity);
    if (rc == CQ_SUCCESS)
        g_runtime_up = 1;
    return rc;
}

int cq_finalise(int verbosity)
{
    if (!g_booted || !g_runtime_up)
        return CQ_E_NOT_INITIALISED;
    int rc = call_runtime(NULL, "cq_finalise", "(i)", verbosity);
    if (rc != CQ_SUCCESS)
        return rc;
    g_runtime_up = 0;

    PyGILState_STATE gil = PyGILState_Ensure();
    for (size_t i = 0; i < g_registers.len; i++)
        Py_DECREF((PyObject *)g_registers.items[i]);
    g_registers.len = 0;
    for (size_t i = 0; i < g_kernels.len; i++)
        Py_DECREF((PyObject *)g_kernels.items[i]);
    g_kernels.len = 0;
    PyGILState_Release(gil);
    return CQ_SUCCESS;
}

int alloc_qureg(cq_qureg *qrp, int nqubits)
{
    if (!g_booted || !g_runtime_up)
        return CQ_E_NOT_INITIALISED;
    if (!qrp)
        return CQ_E_INVALID_HANDLE;
    PyObject *handle = NULL;
    int rc = call_runtime(&handle, "alloc_qureg", "(i)", nqubits);
    if (rc != CQ_SUCCESS)
        return rc;
    PyGILState_STATE gil = PyGILState_Ensure();
    rc = ptr_set_add(&g_registers, handle);
    if (rc != 0) {
        Py_DECREF(handle);
        PyGILState_Release(gil);
        return CQ_E_INTERNAL;
    }
    PyGILState_Release(gil);
    *qrp = handle;
    return CQ_SUCCESS;
}

int free_qureg(cq_qureg qrp)
{
    if (!g_booted || !g_runtime_up)
        return CQ_E_NOT_INITIALISED;
    if (!qrp || !ptr_set_contains(&g_registers, qrp))
        return CQ_E_INVALID_HANDLE;
    int rc = call_runtime(NULL, "free_qureg", "(O)", (PyObject *)qrp);
    if (rc != CQ_SUCCESS)
        return rc;
    PyGILState_STATE gil = PyGILState_Ensure();
    ptr_set_remove(&g_registers, qrp);
    Py_DECREF((PyObject *)qrp);
    PyGILState_Release(gil);
    return CQ_SUCCESS;
}

int register_qkern(cq_qkern kernel)
{
    if (!g_booted || !g_runtime_up)
        return CQ_E_NOT_INITIALISED;
    if (!kernel || !ptr_set_contains(&g_kernels, kernel))
        return CQ_E_INVALID_HANDLE;
    PyObject *key = NULL;
    int rc = call_runtime(&key, "register_qkern", "(O)", (PyObject *)kernel);
    if (rc != CQ_SUCCESS)
        return rc;
    PyGILState_STATE gil = PyGILState_Ensure();
    long k = PyLong_AsLong(key);
    if (PyErr_Occurred()) {
        PyErr_Clear();
        k = CQ_E_INTERNAL;
    }
    Py_DECREF(key);
    PyGILState_Release(gil);
    return (int)k;
}

int sm_qrun(cq_qkern kernel, cq_qureg qrp, int nqubits, int32_t *crp,
            int nmeasure, int nshots)
{
    if (!g_booted || !g_runtime_up)
        return CQ_E_NOT_INITIALISED;
    if (!kernel || !ptr_set_contains(&g_kernels, kernel))
        return CQ_E_INVALID_HANDLE;
    if (!qrp || !ptr_set_contains(&g_registers, qrp))
        return CQ_E_INVALID_HANDLE;
    if (nmeasure > 0 && nshots > 0 && !crp)
        return CQ_E_BUFFER_TOO_SMALL;

    PyGILState_STATE gil = PyGILState_Ensure();
    int status = CQ_SUCCESS;
    PyObject *buf = NULL, *fn = NULL, *res = NULL, *values = NULL;

    buf = PyObject_CallMethod(g_cq, "result_buffer", "ii", nmeasure, nshots);
    if (!buf) {
        status = status_from_exception();
        goto done;
    }
    fn = PyObject_GetAttrString(g_cq, "sm_qrun");
    if (!fn) {
        status = status_from_exception();
        goto done;
    }
    res = PyObject_CallFunction(fn, "OOiOii", (PyObject *)kernel,
                                (PyObject *)qrp, nqubits, buf, nmeasure,
                                nshots);
    if (!res) {
        status = status_from_exception();
        goto done;
    }
    values = PyObject_CallMethod(buf, "tolist", NULL);
    if (!values || !PyList_Check(values)) {
        status = CQ_E_INTERNAL;
        goto done;
    }
    for (Py_ssize_t i = 0; i < PyList_GET_SIZE(values); i++) {
        long v = PyLong_AsLong(PyList_GET_ITEM(values, i));
        if (PyErr_Occurred()) {
            PyErr_Clear();
            status = CQ_E_INTERNAL;
            goto done;
        }
        crp[i] = (int32_t)v;
    }

done:
    Py_XDECREF(buf);
    Py_XDECREF(fn);
    Py_XDECREF(res);
    Py_XDECREF(values);
    PyGILState_Release(gil);
    return status;
}

int cq_qkern_byname(cq_qkern *out, const char *name)
{
    if (!g_booted || !g_runtime_up)
        return CQ_E_NOT_INITIALISED;
    if (!out || !name)
        return CQ_E_INVALID_HANDLE;
    PyGILState_STATE gil = PyGILState_Ensure();
    int status = CQ_SUCCESS;
    PyObject *kernel = PyMapping_GetItemString(g_catalogue, name);
    if (!kernel) {
        PyErr_Clear();
        status = CQ_E_UNKNOWN_KEY;
    } else if (ptr_set_contains(&g_kernels, kernel)) {
        Py_DECREF(kernel); /* already holding one reference */
        *out = kernel;
    } else if (ptr_set_add(&g_kernels, kernel) != 0) {
        Py_DECREF(kernel);
        status = CQ_E_INTERNAL;
    } else {
        *out = kernel;
    }
    PyGILState_Release(gil);
    return status;
}
