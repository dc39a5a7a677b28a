#include <stdio.h>

#include "schurcc.h"

int main(void) {
    SchurccField *field = NULL;
    SchurccContext *ctx = NULL;
    SchurccDecision d;

    if (schurcc_field_parse("57:7", &field) != SCHURCC_STATUS_OK) {
        fprintf(stderr, "%s\n", schurcc_last_error_message());
        return 1;
    }
    if (schurcc_context_new(field, 3, SCHURCC_B_MODE_DEFINITION, &ctx) != SCHURCC_STATUS_OK) {
        fprintf(stderr, "%s\n", schurcc_last_error_message());
        return 1;
    }
    if (schurcc_decide(ctx, &d) != SCHURCC_STATUS_OK) {
        fprintf(stderr, "%s\n", schurcc_last_error_message());
        return 1;
    }
    printf("57:7 p=3 %s\n", d.verdict == SCHURCC_VERDICT_INFINITE ? "INFINITE" : "FINITE");
    schurcc_context_free(ctx);
    schurcc_field_free(field);
    return 0;
}
