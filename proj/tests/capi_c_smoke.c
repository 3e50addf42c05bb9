/* Compiled as C: checks that plotqa.h is valid C and the basic flow works. */
#include <stdio.h>
#include <string.h>

#include "plotqa/plotqa.h"

#define CHECK(expr)                                                             \
  do {                                                                          \
    plotqa_status s_ = (expr);                                                  \
    if (s_ != PLOTQA_OK) {                                                      \
      fprintf(stderr, "%s failed: %s: %s\n", #expr, plotqa_status_name(s_),     \
              plotqa_last_error());                                             \
      return 1;                                                                 \
    }                                                                           \
  } while (0)

int main(void) {
  plotqa_plot* plot = NULL;
  plotqa_detections* det = NULL;
  plotqa_answer* ans = NULL;
  char* csv = NULL;
  char* shown = NULL;
  double map = 0;

  printf("plotqa %s\n", plotqa_version());
  CHECK(plotqa_plot_generate(42, NULL, &plot));
  CHECK(plotqa_detections_simulate(plot, "zero", 1, &det));
  CHECK(plotqa_detections_map(det, plot, 0.9, &map));
  if (map != 1.0) {
    fprintf(stderr, "zero-noise mAP is %g\n", map);
    return 1;
  }
  CHECK(plotqa_detections_table_csv(det, &csv));
  if (strlen(csv) == 0) return 1;
  CHECK(plotqa_answer_question(det, "Does the graph contain grids?", NULL, &ans));
  CHECK(plotqa_answer_display(ans, &shown));
  printf("kind=%s answer=%s\n", plotqa_answer_kind(ans), shown);

  if (plotqa_plot_generate(1, "/nonexistent/corpus.txt", NULL) != PLOTQA_E_INVALID_ARGUMENT)
    return 1;

  plotqa_string_free(shown);
  plotqa_string_free(csv);
  plotqa_answer_free(ans);
  plotqa_detections_free(det);
  plotqa_plot_free(plot);
  return 0;
}
