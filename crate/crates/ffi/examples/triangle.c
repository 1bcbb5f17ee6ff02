#include <stdio.h>
#include "regcat.h"

static const char *SRC =
    "set X = { x0, x1, x2 }\n"
    "set Y = { y0, y1 }\n"
    "set Z = { z0, z1 }\n"
    "map f : X -> Y { x0 -> y0, x1 -> y1, x2 -> y1 }\n"
    "map g : Y -> Z { y0 -> z0, y1 -> z1 }\n"
    "map h : Z -> X { z0 -> x0, z1 -> x1 }\n"
    "diagram T { f, g, h }\n";

int main(void) {
    RegcatWorkspace *ws = NULL;
    if (regcat_workspace_parse(SRC, &ws) != REGCAT_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", regcat_last_error());
        return 1;
    }
    bool semi = false;
    size_t n = 0;
    uint64_t count = 0;
    regcat_diagram_check(ws, "T", REGCAT_DIAGRAM_MODE_SEMICOMMUTATIVE, 4, &semi);
    regcat_obstruction_number(ws, "T", "X", 4, &n);
    regcat_map_inner_inverse_count(ws, "f", &count);
    printf("semicommutative=%d n_obstr=%zu inner(f)=%llu\n", semi, n, (unsigned long long)count);
    regcat_workspace_free(ws);
    return 0;
}
