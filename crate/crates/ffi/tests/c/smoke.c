#include <stdio.h>
#include "pbist.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    int64_t init[] = {1, 3, 5, 7, 9};
    PbistConfig cfg = pbist_config_default();
    PbistTree *t = NULL;
    CHECK(pbist_tree_from_sorted(&cfg, init, 5, &t) == PBIST_STATUS_OK);

    int64_t probe[] = {2, 3, 6, 7, 9};
    bool found[5];
    CHECK(pbist_contains_batched(t, probe, 5, found) == PBIST_STATUS_OK);
    CHECK(!found[0] && found[1] && !found[2] && found[3] && found[4]);

    int64_t raw[] = {8, 2, 4, 2, 5, 7};
    size_t len = 0, changed = 0;
    CHECK(pbist_normalize(raw, 6, &len) == PBIST_STATUS_OK && len == 5);
    CHECK(pbist_insert_batched(t, raw, len, &changed) == PBIST_STATUS_OK && changed == 3);

    int64_t out[16];
    CHECK(pbist_tree_to_sorted(t, out, 16, &len) == PBIST_STATUS_OK && len == 8);
    CHECK(out[0] == 1 && out[1] == 2 && out[7] == 9);

    int64_t bad[] = {5, 1};
    PbistStatus st = pbist_remove_batched(t, bad, 2, NULL);
    CHECK(st == PBIST_STATUS_UNSORTED_BATCH);
    printf("%s\n", pbist_status_message(st));

    pbist_tree_free(t);
    return 0;
}
