#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "alif.h"

#define N 1024

static int fail(const char *what, AlifStatus s) {
    const char *msg = alif_last_error_message();
    fprintf(stderr, "%s: status %d (%s)\n", what, (int)s, msg ? msg : "no message");
    return 1;
}

int main(void) {
    double x[N];
    for (int i = 0; i < N; i++) {
        double t = (double)i / N;
        x[i] = sin(2.0 * M_PI * 40.0 * t) + 0.8 * cos(2.0 * M_PI * 5.0 * t);
    }

    AlifAlifOptions opts = alif_alif_options_default();
    opts.boundary = ALIF_BOUNDARY_REFLECT;
    AlifDecomposition *d = NULL;
    AlifStatus s = alif_alif_decompose(x, N, 1.0 / N, &opts, &d);
    if (s != ALIF_STATUS_OK) return fail("decompose", s);

    size_t len = alif_decomposition_len(d);
    size_t count = alif_decomposition_imf_count(d);
    double *sum = calloc(len, sizeof(double));
    double *buf = malloc(len * sizeof(double));
    for (size_t k = 0; k <= count; k++) {
        s = k < count ? alif_decomposition_copy_imf(d, k, buf, len)
                      : alif_decomposition_copy_remainder(d, buf, len);
        if (s != ALIF_STATUS_OK) return fail("copy", s);
        for (size_t i = 0; i < len; i++) sum[i] += buf[i];
    }
    double err = 0.0;
    for (size_t i = 0; i < len; i++) err = fmax(err, fabs(sum[i] - x[i]));

    s = alif_decomposition_copy_imf(d, 0, buf, 3);
    if (s != ALIF_STATUS_BUFFER_TOO_SMALL || alif_last_error_message() == NULL) {
        fprintf(stderr, "short buffer accepted\n");
        return 1;
    }

    AlifImfDiagnostics diag;
    s = alif_decomposition_imf_diagnostics(d, 0, &diag);
    if (s != ALIF_STATUS_OK) return fail("diagnostics", s);
    AlifStopReason stop;
    s = alif_decomposition_stop_reason(d, &stop);
    if (s != ALIF_STATUS_OK) return fail("stop reason", s);

    printf("version %s imfs %zu err %.3e iterations %zu stop %d\n",
           alif_version(), count, err, diag.iterations, (int)stop);
    alif_decomposition_free(d);
    free(sum);
    free(buf);
    return err < 1e-12 && count >= 1 ? 0 : 1;
}
