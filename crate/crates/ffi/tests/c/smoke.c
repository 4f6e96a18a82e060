#include <math.h>
#include <stdio.h>
#include <string.h>

#include "fitland.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    const char *seqs[] = {"00", "01", "10", "11"};
    const double fit[] = {0.0, 1.0, 1.0, 0.5};
    FlLandscape *l = NULL;
    CHECK(fl_landscape_from_arrays(seqs, fit, 4, "binary", NULL, &l) == FL_STATUS_OK);
    CHECK(fl_landscape_node_count(l) == 4);
    CHECK(fl_landscape_edge_count(l) == 4);

    FlAnalysisOptions opts = fl_analysis_options_default();
    opts.sigma = 0.0;
    FlFeatures values;
    char *json = NULL;
    CHECK(fl_analyze(l, &opts, &values, &json) == FL_STATUS_OK);
    CHECK(fabs(values.phi_lo - 0.5) < 1e-12);
    CHECK(fabs(values.alpha_go - 0.75) < 1e-12);
    CHECK(isnan(values.bfc_greedy));
    CHECK(strstr(json, "\"bfc_greedy\":null") != NULL);
    fl_string_free(json);

    FlDeSummary de;
    CHECK(fl_run_de(l, FL_WALK_METHOD_GREEDY, 50, 1, &de, NULL) == FL_STATUS_OK);
    CHECK(de.runs == 50);
    fl_landscape_free(l);

    FlLandscape *bad = NULL;
    CHECK(fl_landscape_from_arrays(seqs, fit, 0, NULL, NULL, &bad) == FL_STATUS_DATA_ERROR);
    CHECK(bad == NULL);
    CHECK(fl_last_error() != NULL);
    CHECK(fl_generate("{\"model\": {\"model\": \"nk\", \"k\": 9}, \"alphabet_sizes\": [2, 2], \"seed\": 0}", &bad)
          == FL_STATUS_INVALID_ARGUMENT);
    printf("ok %s\n", fl_version());
    return 0;
}
