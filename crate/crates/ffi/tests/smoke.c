#include <stdio.h>
#include <string.h>
#include "autoseries.h"

#define CHECK(c) do { if (!(c)) { fprintf(stderr, "line %d: %s\n", __LINE__, as_last_error() ? as_last_error() : "?"); return 1; } } while (0)

int main(void) {
    AsField *f = NULL;
    AsSeries *x = NULL, *tr = NULL;
    AsDfao *z = NULL;
    uint32_t c = 0;
    static const uint32_t want[8] = {0, 1, 1, 0, 1, 0, 0, 0};

    CHECK(as_field_new(2, 1, &f) == AS_STATUS_OK);
    CHECK(as_series_christol(f, "y^2 + y + t", 0, &x) == AS_STATUS_OK);
    for (int n = 0; n < 8; n++) {
        CHECK(as_series_coeff(x, n, 1, &c) == AS_STATUS_OK && c == want[n]);
    }
    CHECK(as_series_truncate(x, 3, 1, &tr) == AS_STATUS_OK);
    CHECK(as_series_coeff(tr, 4, 1, &c) == AS_STATUS_OK && c == 0);
    CHECK(as_series_zero_set(x, &z) == AS_STATUS_OK);
    CHECK(as_dfao_eval(z, 3, 1, &c) == AS_STATUS_OK && c != 0);
    CHECK(as_dfao_eval(z, 4, 1, &c) == AS_STATUS_OK && c == 0);
    CHECK(as_series_christol(f, "y^2 + + t", 0, &tr) == AS_STATUS_USER);
    CHECK(as_last_error() != NULL && strlen(as_last_error()) > 0);
    as_dfao_free(z);
    as_series_free(tr);
    as_series_free(x);
    as_field_free(f);
    puts("ok");
    return 0;
}
