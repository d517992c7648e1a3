#ifndef BASTAG_H
#define BASTAG_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BastagStatus {
  BASTAG_STATUS_OK = 0,
  BASTAG_STATUS_NULL_POINTER = 1,
  BASTAG_STATUS_INVALID_UTF8 = 2,
  BASTAG_STATUS_VALIDATION = 3,
  BASTAG_STATUS_IO = 4,
  BASTAG_STATUS_PARSE = 5,
  BASTAG_STATUS_INTERNAL = 6,
} BastagStatus;

// Opaque model handle.
typedef struct BastagModel BastagModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Loads a model bundle from a JSON file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer.
enum BastagStatus bastag_model_load(const char *path, struct BastagModel **out);

// Trains a model from a lexicon file, a phrase corpus and an equipment
// corpus using the default configuration plus environment overrides.
//
// # Safety
// All strings must be NUL-terminated and `out` a writable pointer.
enum BastagStatus bastag_model_train(const char *lexicon,
                                     const char *phrases,
                                     const char *equipment,
                                     struct BastagModel **out);

// Writes the model bundle to `path`.
//
// # Safety
// `model` must come from this library and `path` be NUL-terminated.
enum BastagStatus bastag_model_save(const struct BastagModel *model, const char *path);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must come from this library and not be used afterwards.
void bastag_model_free(struct BastagModel *model);

// Best parse of `input` as a JSON object with `input`, `chunks` and
// `total_weight`.
//
// # Safety
// `model` must come from this library, `input` be NUL-terminated and
// `out_json` a writable pointer.
enum BastagStatus bastag_parse(const struct BastagModel *model, const char *input, char **out_json);

// Up to `k` parses of `input`, best first, as a JSON array.
//
// # Safety
// As for `bastag_parse`.
enum BastagStatus bastag_parse_k_best(const struct BastagModel *model,
                                      const char *input,
                                      uintptr_t k,
                                      char **out_json);

// Creates a new model with `surface` expanding to the space-separated
// `tags`. The original model is unchanged.
//
// # Safety
// `model` must come from this library, the strings be NUL-terminated and
// `out` a writable pointer.
enum BastagStatus bastag_add_expansion(const struct BastagModel *model,
                                       const char *surface,
                                       const char *tags,
                                       struct BastagModel **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void bastag_string_free(char *s);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into the library from the same thread.
const char *bastag_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BASTAG_H */
