#include <stdio.h>
#include <string.h>

#include "supergraph.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            const char *e = sg_last_error();                         \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,   \
                    e ? e : "no error");                             \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(int argc, char **argv) {
    if (argc != 2) {
        return 2;
    }
    SgTree *tree = NULL;
    CHECK(sg_tree_open(argv[1], 4, &tree) == SG_STATUS_OK);

    uint64_t count = 0;
    CHECK(sg_connectivity_count(tree, 3, 4, &count) == SG_STATUS_OK);
    CHECK(count == 2);

    char *json = NULL;
    CHECK(sg_closure_json(tree, 2, &json) == SG_STATUS_OK);
    CHECK(strstr(json, "\"nodes\":[5,6,7,8]") != NULL);
    sg_string_free(json);

    CHECK(sg_connectivity_count(tree, 1, 3, &count) == SG_STATUS_INVALID_PAIR);
    CHECK(sg_last_error() != NULL);
    CHECK(sg_closure_json(tree, 99, &json) == SG_STATUS_NOT_FOUND);
    CHECK(sg_tree_open(NULL, 4, &tree) == SG_STATUS_NULL_ARGUMENT);

    sg_tree_free(tree);
    printf("ok %s\n", sg_version());
    return 0;
}
