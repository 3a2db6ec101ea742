#include <math.h>
#include <stdio.h>
#include <string.h>

#include "trisbf.h"

int main(void) {
    TrisbfEvaluator *ev = trisbf_evaluator_new();
    if (!ev) return 10;

    TrisbfSpec s = {{0, 0, 0}, {1.0, 1.0, 1.0}, TRISBF_DAMPING_GAUSS, 1.0, 2};
    TrisbfResult r;
    if (trisbf_eval(ev, &s, TRISBF_METHOD_AUTO, 0.0, &r) != TRISBF_STATUS_OK) return 11;
    printf("%.17g\n", r.value);

    s.p = 0.0;
    if (trisbf_eval(ev, &s, TRISBF_METHOD_AUTO, 0.0, &r) != TRISBF_STATUS_INVALID_INPUT) return 12;
    char msg[256];
    trisbf_last_error_message(msg, sizeof msg);
    if (!strstr(msg, "p != 0")) return 13;

    double axes[9] = {0.5, 1.5, 2, 0.5, 1.5, 2, 1.0, 1.0, 1};
    int32_t ell[3] = {1, 1, 0};
    double v[4];
    if (trisbf_grid(ev, axes, ell, TRISBF_DAMPING_EXP, 1.0, 2, 1, v, 2) != TRISBF_STATUS_BUFFER_TOO_SMALL) return 14;
    if (trisbf_grid(ev, axes, ell, TRISBF_DAMPING_EXP, 1.0, 2, 1, v, 4) != TRISBF_STATUS_OK) return 15;
    for (int i = 0; i < 4; i++) printf("%.17g\n", v[i]);

    trisbf_evaluator_free(ev);
    return 0;
}
