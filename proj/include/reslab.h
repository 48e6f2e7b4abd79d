/*
 * reslab C API: scenario evaluation and verification suites behind opaque
 * handles.  All returned strings are heap-allocated; release them with
 * reslab_free().  Functions return RESLAB_OK (0) on success; on error the
 * session holds a message retrievable via reslab_last_error().
 */
#ifndef RESLAB_H
#define RESLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct reslab_session reslab_session;

typedef enum {
  RESLAB_OK = 0,
  RESLAB_E_FAILURES = 1,     /* evaluation ran, some checks failed */
  RESLAB_E_PARSE = 2,        /* scenario/suite could not be resolved */
  RESLAB_E_INVALID = 3,      /* invalid argument */
  RESLAB_E_INTERNAL = 4
} reslab_status;

reslab_session* reslab_session_new(void);
void reslab_session_free(reslab_session* s);

/* 0 = use RES_LAB_THREADS or hardware concurrency. */
void reslab_session_set_threads(reslab_session* s, int threads);
/* nonzero: emit per-term residue tables in reports. */
void reslab_session_set_terms(reslab_session* s, int enabled);

const char* reslab_last_error(const reslab_session* s);

/* Run a scenario (file path or JSON text); *report_json receives the
 * report.  Returns RESLAB_E_FAILURES when tasks failed their tolerances or
 * raised task-level errors. */
int reslab_eval_file(reslab_session* s, const char* path, char** report_json);
int reslab_eval_json(reslab_session* s, const char* scenario_json,
                     char** report_json);

/* Convert a report produced by reslab_eval_* into CSV rows. */
int reslab_report_csv(reslab_session* s, const char* report_json, char** csv);

/* Run a named verification suite; *failures receives the number of failed
 * criteria, *summary_json the per-criterion results. */
int reslab_verify(reslab_session* s, const char* suite, double tol_scale,
                  int* failures, char** summary_json);

/* JSON array of registered suite names. */
int reslab_list_suites(reslab_session* s, char** names_json);

void reslab_free(char* buf);

unsigned reslab_abi_version(void);

#ifdef __cplusplus
}
#endif

#endif /* RESLAB_H */
