/* Build: cc -Iinclude examples/smoke.c -L../../target/debug -lseifert_tv_ffi */
#include <stdio.h>
#include "seifert_tv.h"

int main(void) {
    SfSymbol *m = NULL;
    SfStatus st = sf_symbol_parse(
        "{\"epsilon\":\"o\",\"genus\":1,\"fibers\":[[3,1],[5,1]],\"boundary\":true}", &m);
    if (st != SF_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", sf_status_name(st), sf_last_error_message());
        return 1;
    }

    SfTv tv;
    double bound = 0.0;
    if (sf_tv(m, 15, &tv) != SF_STATUS_OK || sf_lower_bound(m, 1, false, &bound) != SF_STATUS_OK) {
        fprintf(stderr, "%s\n", sf_last_error_message());
        sf_symbol_free(m);
        return 1;
    }
    printf("TV_15(M) = %.6f, bound %.2f\n", tv.value, bound);

    SfInvariant rt;
    st = sf_rt(m, 15, &rt);
    printf("rt on a bounded symbol: %s\n", sf_status_name(st));

    sf_symbol_free(m);
    return tv.value >= bound && st == SF_STATUS_DOMAIN ? 0 : 1;
}
