/* C interface to the certifier. Strings returned through char** out
 * parameters are owned by the caller and released with qdcert_string_free. */
#ifndef QDCERT_QDCERT_H
#define QDCERT_QDCERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QDCERT_API __declspec(dllexport)
#elif defined(__GNUC__)
#define QDCERT_API __attribute__((visibility("default")))
#else
#define QDCERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qdcert_status {
  QDCERT_OK = 0,
  QDCERT_ERR_ARG = 1,
  QDCERT_ERR_CONFIG = 2,
  QDCERT_ERR_CAP = 3,
  QDCERT_ERR_INVARIANT = 4,
  QDCERT_ERR_IO = 5,
  QDCERT_ERR_INTERNAL = 6
} qdcert_status;

typedef struct qdcert_config qdcert_config;
typedef struct qdcert_report qdcert_report;

QDCERT_API const char* qdcert_version(void);
/* Message for the last failing call on this thread; "" if none. */
QDCERT_API const char* qdcert_last_error(void);
QDCERT_API void qdcert_string_free(char* s);

QDCERT_API qdcert_status qdcert_config_load(const char* path, qdcert_config** out);
QDCERT_API qdcert_status qdcert_config_parse(const char* json_text, qdcert_config** out);
QDCERT_API void qdcert_config_free(qdcert_config* cfg);
/* Replaces the n policy with an explicit list. */
QDCERT_API qdcert_status qdcert_config_set_n_list(qdcert_config* cfg, const int64_t* ns, size_t count);
QDCERT_API qdcert_status qdcert_config_set_seed(qdcert_config* cfg, uint64_t seed);
/* Output paths from the config file, or "" when unset. Borrowed. */
QDCERT_API const char* qdcert_config_out_json(const qdcert_config* cfg);
QDCERT_API const char* qdcert_config_out_csv(const qdcert_config* cfg);

QDCERT_API qdcert_status qdcert_certify(const qdcert_config* cfg, qdcert_report** out);
QDCERT_API void qdcert_report_free(qdcert_report* report);
QDCERT_API qdcert_status qdcert_report_json(const qdcert_report* report, char** out);
QDCERT_API qdcert_status qdcert_report_csv(const qdcert_report* report, char** out);
QDCERT_API qdcert_status qdcert_report_write_json(const qdcert_report* report, const char* path);
QDCERT_API qdcert_status qdcert_report_write_csv(const qdcert_report* report, const char* path);
QDCERT_API size_t qdcert_report_record_count(const qdcert_report* report);
QDCERT_API size_t qdcert_report_violations(const qdcert_report* report);

QDCERT_API qdcert_status qdcert_folner_summary(int d, int64_t n, char** out_json);
QDCERT_API qdcert_status qdcert_norms(const qdcert_config* cfg, int64_t n, char** out_json);
/* Runs the built-in checks; *failures gets the number that failed. */
QDCERT_API qdcert_status qdcert_selftest(char** out_json, int* failures);

#ifdef __cplusplus
}
#endif

#endif
