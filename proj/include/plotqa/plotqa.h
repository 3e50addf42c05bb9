/*
 * plotqa C API.
 *
 * Every function returns a plotqa_status. On failure, plotqa_last_error()
 * gives a message for the calling thread that stays valid until that thread's
 * next API call. Strings returned through char** out-parameters are owned by
 * the caller and must be released with plotqa_string_free(). Handles are
 * released with their matching *_free function; passing NULL is a no-op.
 */
#ifndef PLOTQA_H
#define PLOTQA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PLOTQA_API __declspec(dllexport)
#else
#define PLOTQA_API __attribute__((visibility("default")))
#endif

typedef enum plotqa_status {
  PLOTQA_OK = 0,
  PLOTQA_E_INVALID_ARGUMENT = 1, /* bad key, value, or NULL pointer */
  PLOTQA_E_SCHEMA = 2,           /* malformed corpus, JSON, CSV, ... */
  PLOTQA_E_IO = 3,
  PLOTQA_E_LAYOUT = 4,           /* a plot could not be laid out */
  PLOTQA_E_UNPARSEABLE = 5,      /* question matches no template */
  PLOTQA_E_EXTRACTION = 6,       /* detections do not form a table */
  PLOTQA_E_INTERNAL = 7
} plotqa_status;

typedef struct plotqa_config plotqa_config;
typedef struct plotqa_plot plotqa_plot;
typedef struct plotqa_detections plotqa_detections;
typedef struct plotqa_answer plotqa_answer;

PLOTQA_API const char* plotqa_version(void);
PLOTQA_API const char* plotqa_last_error(void);
PLOTQA_API const char* plotqa_status_name(plotqa_status s);
PLOTQA_API void plotqa_string_free(char* s);

/* ---- configuration for the dataset-level commands ----
 *
 * Keys (all values are strings):
 *   out               output directory
 *   dataset           dataset directory written by plotqa_generate
 *   n_plots           number of plots to generate (default 100)
 *   seed              unsigned 64-bit master seed (default 0)
 *   corpus            indicator corpus file (default: built-in)
 *   template_weights  JSON file of per-template weights
 *   split             "train,valid,test" ratios for generate (default
 *                     0.7,0.15,0.15), or the split to score for run and
 *                     evaluate: train, valid, test (default) or all
 *   noise             preset name or noise JSON file (default paper-like)
 *   system            hybrid (default), pipeline or classification
 *   predictions       predictions.jsonl for plotqa_evaluate
 *   threads           worker threads, 0 for all cores (default 0)
 */
PLOTQA_API plotqa_status plotqa_config_new(plotqa_config** out);
PLOTQA_API void plotqa_config_free(plotqa_config* cfg);
PLOTQA_API plotqa_status plotqa_config_set(plotqa_config* cfg, const char* key,
                                           const char* value);

/* Writes a dataset to `out`. summary_json (may be NULL) receives
 * {"n_plots", "n_questions", "manifest_fnv1a64"}. */
PLOTQA_API plotqa_status plotqa_generate(const plotqa_config* cfg, char** summary_json);

/* Answers the questions of `dataset` under simulated perception with the
 * chosen system. Writes predictions.jsonl, report.json and report.txt to
 * `out` when it is set. report_json (may be NULL) receives the report. */
PLOTQA_API plotqa_status plotqa_run(const plotqa_config* cfg, char** report_json);

/* Scores `predictions` against the questions of `dataset`. */
PLOTQA_API plotqa_status plotqa_evaluate(const plotqa_config* cfg, char** report_json);

/* Renders a report JSON document as a text table. */
PLOTQA_API plotqa_status plotqa_report_text(const char* report_json, char** text);

/* Builds a table from an annotation or detection JSON file. `noise` may be
 * NULL or "" for none. warnings_json (may be NULL) receives a JSON array. */
PLOTQA_API plotqa_status plotqa_extract_file(const char* path, const char* noise,
                                             char** table_csv, char** warnings_json);

/* ---- single plots ---- */

/* Samples, lays out and renders one plot. corpus_path may be NULL. */
PLOTQA_API plotqa_status plotqa_plot_generate(uint64_t seed, const char* corpus_path,
                                              plotqa_plot** out);
PLOTQA_API void plotqa_plot_free(plotqa_plot* p);
PLOTQA_API plotqa_status plotqa_plot_svg(const plotqa_plot* p, char** svg);
PLOTQA_API plotqa_status plotqa_plot_annotation_json(const plotqa_plot* p, char** json);
PLOTQA_API plotqa_status plotqa_plot_table_csv(const plotqa_plot* p, char** csv);
/* One JSON object per line, with gold answers. */
PLOTQA_API plotqa_status plotqa_plot_questions_jsonl(const plotqa_plot* p, uint64_t seed,
                                                     char** jsonl);

/* ---- detections ---- */

/* Simulated detector output for a plot. noise is a preset or a file path;
 * the noise seed is replaced by `seed`. */
PLOTQA_API plotqa_status plotqa_detections_simulate(const plotqa_plot* p, const char* noise,
                                                    uint64_t seed, plotqa_detections** out);
/* Accepts detection JSON or annotation JSON. */
PLOTQA_API plotqa_status plotqa_detections_from_json(const char* json, plotqa_detections** out);
PLOTQA_API void plotqa_detections_free(plotqa_detections* d);
PLOTQA_API plotqa_status plotqa_detections_to_json(const plotqa_detections* d, char** json);
PLOTQA_API plotqa_status plotqa_detections_table_csv(const plotqa_detections* d, char** csv);
/* Mean AP over element classes at the IoU threshold, against the plot's
 * ground truth. */
PLOTQA_API plotqa_status plotqa_detections_map(const plotqa_detections* d, const plotqa_plot* gold,
                                               double iou_threshold, double* map);

/* ---- answers ----
 *
 * system is "hybrid", "pipeline" or "classification" (NULL means hybrid).
 * An answer that the system cannot give is returned as an answer of kind
 * "unavailable", not as an error. */
PLOTQA_API plotqa_status plotqa_answer_question(const plotqa_detections* d, const char* question,
                                                const char* system, plotqa_answer** out);
PLOTQA_API plotqa_status plotqa_answer_from_json(const char* json, plotqa_answer** out);
PLOTQA_API void plotqa_answer_free(plotqa_answer* a);
/* "boolean", "text", "number" or "unavailable"; static storage. */
PLOTQA_API const char* plotqa_answer_kind(const plotqa_answer* a);
PLOTQA_API plotqa_status plotqa_answer_display(const plotqa_answer* a, char** text);
PLOTQA_API plotqa_status plotqa_answer_number(const plotqa_answer* a, double* value);
PLOTQA_API plotqa_status plotqa_answer_to_json(const plotqa_answer* a, char** json);
/* *correct is 1 when `predicted` matches `gold` under the evaluation rule. */
PLOTQA_API plotqa_status plotqa_score_answer(const plotqa_answer* predicted,
                                             const plotqa_answer* gold, int* correct);

/* ---- misc ---- */

/* Applies the OCR corruption of a noise model to one string. */
PLOTQA_API plotqa_status plotqa_corrupt_text(const char* text, const char* noise, uint64_t seed,
                                             char** out);

#ifdef __cplusplus
}
#endif

#endif /* PLOTQA_H */
