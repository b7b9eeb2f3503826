#include <stdio.h>
#include "carnot_steer.h"

int main(void) {
    /* q = 2e1 - e2 + 3e3 + e12 - 2e13 - 2e23, coefficients by blade bitmask */
    const double target[8] = {0.0, 2.0, -1.0, 1.0, 3.0, -2.0, -2.0, 0.0};
    double inv[3];
    if (cs_invariants(CS_MODEL_M36, target, 8, inv, 3) != CS_STATUS_OK) {
        fprintf(stderr, "invariants: %s\n", cs_last_error_message());
        return 1;
    }
    printf("x.x = %g, z.z = %g, (x^z)* = %g\n", inv[0], inv[1], inv[2]);

    CsSteerOptions opts = cs_steer_options_default();
    opts.samples = 5;
    CsReport *report = NULL;
    CsStatus status = cs_steer(CS_MODEL_M36, target, 8, &opts, &report);
    if (status != CS_STATUS_OK) {
        fprintf(stderr, "steer failed (%d): %s\n", (int)status, cs_last_error_message());
        return 1;
    }
    printf("t = %.6f, endpoint error = %.3e\n", cs_report_t_final(report),
           cs_report_endpoint_error(report));

    size_t width = cs_report_row_width(report);
    size_t rows = cs_report_sample_count(report);
    double buf[5 * 7];
    cs_report_samples(report, buf, rows * width);
    for (size_t i = 0; i < rows; i++) {
        printf("t=%.3f x=(%.3f, %.3f, %.3f)\n", buf[i * width], buf[i * width + 1],
               buf[i * width + 2], buf[i * width + 3]);
    }
    cs_report_free(report);
    return 0;
}
