#include <stdio.h>
#include <string.h>
#include "qsieve.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    QsInequality ineq;
    CHECK(qs_main_inequality(12, 4, &ineq) == QS_STATUS_OK);
    CHECK(ineq.lhs == 84 && ineq.rhs == 64 && !ineq.holds);
    CHECK(qs_main_inequality(4, 12, &ineq) == QS_STATUS_PRECONDITION);
    CHECK(qs_last_error() != NULL);

    QsScan *scan = NULL;
    CHECK(qs_scan_new(4, &scan) == QS_STATUS_OK);
    size_t n = 0;
    CHECK(qs_scan_len(scan, &n) == QS_STATUS_OK && n == 2);
    QsScanRow row;
    CHECK(qs_scan_row(scan, 1, &row) == QS_STATUS_OK);
    CHECK(row.s == 12 && row.t == 4 && row.has_family && row.n == 1);
    qs_scan_free(scan);

    QsChain *chain = NULL;
    CHECK(qs_chain_run(NULL, 0, &chain) == QS_STATUS_OK);
    char *verdict = NULL;
    CHECK(qs_chain_verdict(chain, &verdict) == QS_STATUS_OK);
    CHECK(strcmp(verdict, "VERDICT: not point-transitive; not line-transitive (3 axiom steps)") == 0);
    qs_string_free(verdict);
    qs_chain_free(chain);

    QsModel *doily = NULL;
    CHECK(qs_model_doily(&doily) == QS_STATUS_OK);
    size_t total = 0, passed = 0;
    CHECK(qs_model_verify_all(doily, &total, &passed) == QS_STATUS_OK);
    CHECK(total == 720 && passed == 720);
    qs_model_free(doily);

    printf("c smoke ok\n");
    return 0;
}
