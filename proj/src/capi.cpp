#include "optomech/optomech.h"

#include <exception>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/error.hpp"
#include "optomech/sweep.hpp"

struct om_config {
  optomech::Config config;
};

struct om_result {
  optomech::SweepResult table;
  std::vector<std::string> columns;
  std::optional<optomech::RealMatrix> covariance;
};

namespace {

thread_local std::string last_error;

om_status fail(om_status status, std::string what) {
  last_error = std::move(what);
  return status;
}

template <class F>
om_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const optomech::Error& e) {
    switch (e.kind()) {
      case optomech::ErrorKind::InvalidArgument: return fail(OM_ERR_INVALID_ARGUMENT, e.what());
      case optomech::ErrorKind::Parse: return fail(OM_ERR_PARSE, e.what());
      case optomech::ErrorKind::Io: return fail(OM_ERR_IO, e.what());
      case optomech::ErrorKind::Unstable: return fail(OM_ERR_UNSTABLE, e.what());
      case optomech::ErrorKind::Unphysical: return fail(OM_ERR_UNPHYSICAL, e.what());
    }
    return fail(OM_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OM_ERR_INTERNAL, "unknown error");
  }
}

om_result* wrap(optomech::SweepResult table) {
  auto* r = new om_result{std::move(table), {}, std::nullopt};
  r->columns = r->table.columns();
  return r;
}

om_status run(const om_config* config, unsigned threads, bool stability_only, om_result** out) {
  if (!config || !out) return fail(OM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(optomech::run_sweep(config->config, threads, stability_only));
    return OM_OK;
  });
}

}  // namespace

extern "C" {

const char* om_version(void) { return OPTOMECH_VERSION; }

const char* om_last_error(void) { return last_error.c_str(); }

const char* om_status_string(om_status status) {
  switch (status) {
    case OM_OK: return "ok";
    case OM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OM_ERR_PARSE: return "parse error";
    case OM_ERR_IO: return "i/o error";
    case OM_ERR_UNSTABLE: return "unstable system";
    case OM_ERR_UNPHYSICAL: return "unphysical input";
    case OM_ERR_INTERNAL: return "internal error";
    case OM_EMPTY: return "empty cell";
  }
  return "unknown status";
}

om_status om_config_load(const char* path, om_config** out) {
  if (!path || !out) return fail(OM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new om_config{optomech::load_config(path)};
    return OM_OK;
  });
}

om_status om_config_parse(const char* text, om_config** out) {
  if (!text || !out) return fail(OM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new om_config{optomech::parse_config(text)};
    return OM_OK;
  });
}

void om_config_free(om_config* config) { delete config; }

int om_config_has_sweep(const om_config* config) {
  return config && config->config.sweep ? 1 : 0;
}

om_status om_sweep_run(const om_config* config, unsigned threads, om_result** out) {
  return run(config, threads, false, out);
}

om_status om_stability_run(const om_config* config, unsigned threads, om_result** out) {
  return run(config, threads, true, out);
}

om_status om_point_run(const om_config* config, double detuning, om_result** out) {
  if (!config || !out) return fail(OM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const optomech::AxisValue at[] = {{optomech::SweepAxis::Detuning, detuning}};
    auto point = optomech::evaluate_point(config->config, at);
    auto table = optomech::make_result(config->config, {optomech::SweepAxis::Detuning});
    table.rows.push_back(std::move(point.row));
    om_result* r = wrap(std::move(table));
    if (point.covariance) r->covariance = std::move(point.covariance->entries);
    *out = r;
    return OM_OK;
  });
}

void om_result_free(om_result* result) { delete result; }

size_t om_result_rows(const om_result* result) { return result ? result->table.rows.size() : 0; }

size_t om_result_columns(const om_result* result) { return result ? result->columns.size() : 0; }

const char* om_result_column_name(const om_result* result, size_t column) {
  if (!result || column >= result->columns.size()) return nullptr;
  return result->columns[column].c_str();
}

om_status om_result_value(const om_result* result, size_t row, size_t column, double* value) {
  if (!result || !value) return fail(OM_ERR_INVALID_ARGUMENT, "null argument");
  if (row >= result->table.rows.size() || column >= result->columns.size())
    return fail(OM_ERR_INVALID_ARGUMENT, "cell index out of range");
  const auto cells = result->table.cells(row);
  if (!cells[column]) return OM_EMPTY;
  *value = *cells[column];
  return OM_OK;
}

om_status om_result_write_csv(const om_result* result, const char* path) {
  if (!result || !path) return fail(OM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    optomech::emit_csv(result->table, path);
    return OM_OK;
  });
}

size_t om_result_covariance_dim(const om_result* result) {
  return result && result->covariance ? static_cast<size_t>(result->covariance->rows()) : 0;
}

om_status om_result_covariance(const om_result* result, double* out, size_t capacity) {
  if (!result || !out) return fail(OM_ERR_INVALID_ARGUMENT, "null argument");
  if (!result->covariance) return fail(OM_ERR_UNSTABLE, "no covariance: point is unstable");
  const auto& v = *result->covariance;
  const size_t n = static_cast<size_t>(v.rows());
  if (capacity < n * n) return fail(OM_ERR_INVALID_ARGUMENT, "buffer too small");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i * n + j] = v(i, j);
  return OM_OK;
}

}  // extern "C"
