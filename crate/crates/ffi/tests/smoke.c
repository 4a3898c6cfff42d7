#include <stdio.h>
#include <string.h>
#include "veltman.h"

int main(void) {
    VtFormula *f = NULL;
    if (vt_formula_parse("<>p |> p", &f) != VT_STATUS_OK) return 10;
    if (vt_decide(f, VT_CLASS_IL, 3, 1, NULL) != VT_STATUS_OK) return 11;
    char *text = vt_formula_print(f);
    if (text == NULL || strcmp(text, "<>p |> p") != 0) return 12;
    vt_string_free(text);
    vt_formula_free(f);

    VtFormula *bad = NULL;
    if (vt_formula_parse("p |>", &bad) != VT_STATUS_PARSE_ERROR) return 13;
    if (strlen(vt_last_error()) == 0) return 14;

    VtFormula *w = NULL;
    VtModel *m = NULL;
    if (vt_formula_parse("p |> q -> p |> q /\\ []~p", &w) != VT_STATUS_OK) return 15;
    if (vt_decide(w, VT_CLASS_IL_M0, 5, 1, &m) != VT_STATUS_NO || m == NULL) return 16;
    if (vt_model_forces(m, "0", w) != VT_STATUS_NO) return 17;
    vt_model_free(m);
    vt_formula_free(w);
    puts("ok");
    return 0;
}
