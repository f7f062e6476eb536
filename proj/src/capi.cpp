#include "knotstat/knotstat.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "knotstat/commands.hpp"
#include "knotstat/derived.hpp"
#include "knotstat/error.hpp"
#include "knotstat/experiments.hpp"
#include "knotstat/knot_data.hpp"
#include "knotstat/report.hpp"

struct ks_dataset {
  knotstat::Dataset ds;
};

struct ks_model {
  knotstat::TrainedModel model;
};

namespace {

thread_local std::string last_error;

ks_status fail(ks_status code, const std::string& message) {
  last_error = message;
  return code;
}

ks_status status_for(knotstat::ErrorKind kind) {
  switch (kind) {
    case knotstat::ErrorKind::Usage: return KS_ERR_USAGE;
    case knotstat::ErrorKind::Data: return KS_ERR_DATA;
    case knotstat::ErrorKind::Numeric: return KS_ERR_NUMERIC;
    case knotstat::ErrorKind::Io: return KS_ERR_IO;
  }
  return KS_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes.
template <typename F>
ks_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return KS_OK;
  } catch (const knotstat::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const nlohmann::json::parse_error& e) {
    return fail(KS_ERR_USAGE, std::string("invalid JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(KS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KS_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw knotstat::UsageError(std::string(what) + " must not be NULL");
}

nlohmann::json parse_request(const char* request_json) {
  if (!request_json || !*request_json) return nlohmann::json::object();
  return nlohmann::json::parse(request_json);
}

knotstat::OutputFormat output_format(const char* format) {
  return format ? knotstat::parse_output_format(format) : knotstat::OutputFormat::Json;
}

knotstat::LaurentPoly1 make_poly(int min_exp, const int64_t* coeffs, size_t n) {
  if (n == 0) throw knotstat::UsageError("polynomial needs at least one coefficient");
  require(coeffs, "coeffs");
  return knotstat::LaurentPoly1(min_exp, std::vector<std::int64_t>(coeffs, coeffs + n));
}

}  // namespace

extern "C" {

const char* ks_version(void) { return "0.1.0"; }

int ks_schema_version(void) { return knotstat::kSchemaVersion; }

const char* ks_last_error(void) { return last_error.c_str(); }

void ks_string_free(char* s) { std::free(s); }

ks_status ks_dataset_load(const char* path, const char* format, ks_dataset** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    std::optional<knotstat::DataFormat> fmt;
    if (format) fmt = knotstat::parse_data_format(format);
    *out = new ks_dataset{knotstat::parse_dataset(path, fmt)};
  });
}

ks_status ks_dataset_parse(const char* text, size_t length, const char* format, ks_dataset** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    const auto fmt = format ? knotstat::parse_data_format(format) : knotstat::DataFormat::Csv;
    *out = new ks_dataset{knotstat::parse_dataset_text(std::string_view(text, length), fmt)};
  });
}

void ks_dataset_free(ks_dataset* ds) { delete ds; }

ks_status ks_dataset_size(const ks_dataset* ds, size_t* out) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    *out = ds->ds.size();
  });
}

ks_status ks_dataset_filter(const ks_dataset* ds, const char* knot_class, ks_dataset** out) {
  return guard([&] {
    require(ds, "dataset");
    require(knot_class, "knot_class");
    require(out, "out");
    *out = new ks_dataset{knotstat::filter_class(ds->ds, knotstat::parse_knot_class(knot_class))};
  });
}

ks_status ks_dataset_serialize(const ks_dataset* ds, const char* format, char** out) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    const auto fmt = format ? knotstat::parse_data_format(format) : knotstat::DataFormat::Csv;
    *out = dup_string(knotstat::serialize_dataset(ds->ds, fmt));
  });
}

ks_status ks_poly_eval(int min_exp, const int64_t* coeffs, size_t n, double re, double im,
                       double* out_re, double* out_im) {
  return guard([&] {
    require(out_re, "out_re");
    require(out_im, "out_im");
    const auto v = knotstat::eval_poly(make_poly(min_exp, coeffs, n), {re, im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

ks_status ks_poly_determinant(int min_exp, const int64_t* coeffs, size_t n, int64_t* out) {
  return guard([&] {
    require(out, "out");
    *out = knotstat::determinant(make_poly(min_exp, coeffs, n));
  });
}

ks_status ks_poly_mahler(int min_exp, const int64_t* coeffs, size_t n, size_t n_points, double* out) {
  return guard([&] {
    require(out, "out");
    *out = knotstat::mahler_measure(make_poly(min_exp, coeffs, n), n_points);
  });
}

ks_status ks_poly_root_of_unity_modulus(int min_exp, const int64_t* coeffs, size_t n, int k, int root_n,
                                        double* out) {
  return guard([&] {
    require(out, "out");
    *out = knotstat::root_of_unity_modulus(make_poly(min_exp, coeffs, n), k, root_n);
  });
}

ks_status ks_parse_phase(const char* text, double* out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = knotstat::parse_phase(text);
  });
}

ks_status ks_run(const char* command, const ks_dataset* ds, const char* request_json, const char* format,
                 char** out) {
  return guard([&] {
    require(command, "command");
    require(ds, "dataset");
    require(out, "out");
    const auto fmt = output_format(format);
    const auto env = knotstat::run_command(knotstat::parse_command(command), ds->ds,
                                           parse_request(request_json));
    *out = dup_string(knotstat::render(env, fmt));
  });
}

ks_status ks_model_train(const ks_dataset* ds, const char* request_json, const char* format,
                         ks_model** out, char** report) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    const auto fmt = output_format(format);
    const auto env = knotstat::run_command(knotstat::Command::TrainAnn, ds->ds, parse_request(request_json));
    auto model = std::make_unique<ks_model>(ks_model{knotstat::trained_model_from_json(env)});
    if (report) *report = dup_string(knotstat::render(env, fmt));
    *out = model.release();
  });
}

ks_status ks_model_from_json(const char* text, ks_model** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw knotstat::DataError(std::string("model is not valid JSON: ") + e.what());
    }
    *out = new ks_model{knotstat::trained_model_from_json(j)};
  });
}

ks_status ks_model_to_json(const ks_model* model, char** out) {
  return guard([&] {
    require(model, "model");
    require(out, "out");
    *out = dup_string(knotstat::to_json(model->model).dump(2) + "\n");
  });
}

void ks_model_free(ks_model* model) { delete model; }

ks_status ks_model_input_width(const ks_model* model, size_t* out) {
  return guard([&] {
    require(model, "model");
    require(out, "out");
    *out = static_cast<size_t>(model->model.network.spec.input_width());
  });
}

ks_status ks_model_predict(const ks_model* model, const double* features, size_t n_rows, double* out) {
  return guard([&] {
    require(model, "model");
    require(out, "out");
    if (n_rows == 0) return;
    require(features, "features");
    const auto width = model->model.network.spec.input_width();
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
        features, static_cast<Eigen::Index>(n_rows), width);
    const Eigen::VectorXd p = knotstat::predict(model->model.network, X);
    std::copy(p.data(), p.data() + p.size(), out);
  });
}

ks_status ks_model_evaluate(const ks_model* model, const ks_dataset* ds, const char* request_json,
                            const char* format, char** out) {
  return guard([&] {
    require(model, "model");
    require(ds, "dataset");
    require(out, "out");
    const auto fmt = output_format(format);
    const auto env = knotstat::evaluate_model(model->model, ds->ds, parse_request(request_json));
    *out = dup_string(knotstat::render(env, fmt));
  });
}

}  // extern "C"
