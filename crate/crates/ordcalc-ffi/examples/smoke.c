#include <stdio.h>
#include <string.h>
#include "ordcalc.h"

int main(void) {
    const char *json =
        "{\"kind\":\"semigroup\",\"elements\":[\"0\",\"1\"],\"zero\":\"0\","
        "\"add\":[[\"0\",\"1\"],[\"1\",\"1\"]],"
        "\"prec\":[[\"0\",\"0\"],[\"0\",\"1\"],[\"1\",\"1\"]]}";
    OrdcalcSemigroup *s = NULL;
    OrdcalcStatus st = ordcalc_semigroup_parse((const uint8_t *)json, strlen(json), &s);
    if (st != ORDCALC_STATUS_OK) { fprintf(stderr, "parse failed\n"); return 1; }
    if (ordcalc_semigroup_size(s) != 2) { fprintf(stderr, "size wrong\n"); return 1; }
    char *report = NULL;
    st = ordcalc_validate(s, &report);
    if (st != ORDCALC_STATUS_OK) { fprintf(stderr, "validate failed\n"); return 1; }
    if (!strstr(report, "\"passed\": true")) { fprintf(stderr, "report wrong\n"); return 1; }
    ordcalc_string_free(report);
    st = ordcalc_compare_au(s, &report);
    if (st != ORDCALC_STATUS_OK) { fprintf(stderr, "au on boolean chain should pass\n"); return 1; }
    ordcalc_string_free(report);
    ordcalc_semigroup_free(s);
    st = ordcalc_semigroup_parse((const uint8_t *)"{", 1, &s);
    if (st != ORDCALC_STATUS_BAD_JSON) { fprintf(stderr, "bad json not detected\n"); return 1; }
    if (ordcalc_last_error() == NULL) { fprintf(stderr, "no error message\n"); return 1; }
    printf("ffi smoke ok\n");
    return 0;
}
