#include <stdio.h>
#include <string.h>

#include "rangesets.h"

int main(void) {
    double xs[] = {0.0, 1.0, 1.0, 0.0, 0.5};
    double ys[] = {0.0, 0.0, 1.0, 1.0, 0.5};
    double values[] = {1.0, 2.0, 3.0, 4.0, 5.0};
    RsPointSet *ps = NULL;
    RsTriangulation *t = NULL;
    RsRangeset *r = NULL;
    char *json = NULL;
    double eps = 0.0;

    if (rs_pointset_new(xs, ys, 5, &ps) != RS_STATUS_OK) return 1;
    if (rs_triangulate(ps, &t) != RS_STATUS_OK) return 2;
    if (rs_triangulation_triangle_count(t) != 4) return 3;
    if (rs_suggest_epsilon(ps, &eps) != RS_STATUS_OK || !(eps > 0.0)) return 4;
    if (rs_rangeset_compute(ps, values, 1, 2.0, &r) != RS_STATUS_OK) return 5;
    if (rs_rangeset_polygon_count(r) != 1) return 6;
    if (rs_rangeset_to_json(r, &json) != RS_STATUS_OK || strstr(json, "\"bins\"") == NULL) return 7;
    rs_string_free(json);
    if (rs_triangulate(NULL, &t) != RS_STATUS_NULL_POINTER) return 8;
    if (rs_last_error_message() == NULL) return 9;

    rs_rangeset_free(r);
    rs_triangulation_free(t);
    rs_pointset_free(ps);
    printf("ok %s\n", rs_version());
    return 0;
}
