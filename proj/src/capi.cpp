#include "sbern.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "sbern/bandwidth.hpp"
#include "sbern/common.hpp"
#include "sbern/estimators.hpp"
#include "sbern/io.hpp"
#include "sbern/mixture.hpp"
#include "sbern/montecarlo.hpp"
#include "sbern/quadrature.hpp"
#include "sbern/rng.hpp"
#include "sbern/verification.hpp"

struct sbern_dataset {
  sbern::dataset impl;
};
struct sbern_mixture {
  sbern::mixture_spec impl;
};
struct sbern_cdf_model {
  sbern::cdf_model impl;
};
struct sbern_density_model {
  sbern::density_model impl;
};

namespace {

thread_local std::string t_error;

sbern_status status_of(sbern::errc code) {
  switch (code) {
    case sbern::errc::invalid_argument: return SBERN_EINVAL;
    case sbern::errc::io_error: return SBERN_EIO;
    case sbern::errc::degenerate: return SBERN_EDEGENERATE;
    case sbern::errc::verification_failed: return SBERN_EVERIFY;
    case sbern::errc::internal: return SBERN_EINTERNAL;
  }
  return SBERN_EINTERNAL;
}

template <class F>
sbern_status wrap(F&& f) noexcept {
  try {
    f();
    return SBERN_OK;
  } catch (const sbern::error& e) {
    t_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_error = e.what();
    return SBERN_EINTERNAL;
  } catch (...) {
    t_error = "unknown failure";
    return SBERN_EINTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) return nullptr;
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

void require(bool cond, const char* what) {
  if (!cond) sbern::raise(sbern::errc::invalid_argument, what);
}

std::span<const double> point(const double* x, int d) {
  require(x != nullptr && d >= 1, "null evaluation point");
  return {x, static_cast<std::size_t>(d)};
}

template <class Model>
std::string grid_csv(const Model& model, int d, int resolution, int workers) {
  require(resolution >= 1, "grid resolution must be >= 1");
  const std::vector<double> nodes = sbern::simplex_grid_nodes(d, resolution);
  const long count = static_cast<long>(nodes.size()) / d;
  std::vector<double> values(static_cast<std::size_t>(count));
  sbern::parallel_for(count, workers, [&](long i) {
    values[i] = model(std::span<const double>(nodes.data() + i * d, static_cast<std::size_t>(d)));
  });
  return sbern::grid_eval_csv(nodes, d, values);
}

}  // namespace

extern "C" {

const char* sbern_last_error(void) { return t_error.c_str(); }

void sbern_free_string(char* s) { std::free(s); }

/* ---- datasets ---- */

sbern_status sbern_dataset_from_csv(const char* text, sbern_dataset** out) {
  return wrap([&] {
    require(text && out, "null argument");
    *out = new sbern_dataset{sbern::parse_dataset_csv(text)};
  });
}

sbern_status sbern_dataset_from_file(const char* path, sbern_dataset** out) {
  return wrap([&] {
    require(path && out, "null argument");
    *out = new sbern_dataset{sbern::read_dataset_csv(path)};
  });
}

sbern_status sbern_dataset_create(const double* flat, long n, int d, sbern_dataset** out) {
  return wrap([&] {
    require(flat && out && n >= 1 && d >= 1, "null or empty dataset");
    std::vector<double> rows(flat, flat + static_cast<std::size_t>(n) * d);
    *out = new sbern_dataset{sbern::dataset(std::move(rows), d)};
  });
}

int sbern_dataset_dim(const sbern_dataset* data) { return data ? data->impl.dim() : 0; }
long sbern_dataset_size(const sbern_dataset* data) { return data ? data->impl.size() : 0; }
void sbern_dataset_free(sbern_dataset* data) { delete data; }

/* ---- mixtures ---- */

sbern_status sbern_mixture_from_json(const char* text, sbern_mixture** out) {
  return wrap([&] {
    require(text && out, "null argument");
    *out = new sbern_mixture{sbern::mixture_spec::from_json(text)};
  });
}

sbern_status sbern_mixture_to_json(const sbern_mixture* mix, char** out) {
  return wrap([&] {
    require(mix && out, "null argument");
    *out = dup_string(mix->impl.to_json());
  });
}

sbern_status sbern_mixture_uniform(int d, sbern_mixture** out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    *out = new sbern_mixture{sbern::mixture_spec::uniform(d)};
  });
}

int sbern_mixture_dim(const sbern_mixture* mix) { return mix ? mix->impl.dim() : 0; }

sbern_status sbern_mixture_pdf(const sbern_mixture* mix, const double* x, int d, double* out) {
  return wrap([&] {
    require(mix && out, "null argument");
    *out = sbern::mixture_pdf(mix->impl, point(x, d));
  });
}

sbern_status sbern_mixture_cdf(const sbern_mixture* mix, const double* x, int d, double* out) {
  return wrap([&] {
    require(mix && out, "null argument");
    *out = sbern::mixture_cdf(mix->impl, point(x, d));
  });
}

sbern_status sbern_mixture_sample(const sbern_mixture* mix, long n, uint64_t seed,
                                  sbern_dataset** out) {
  return wrap([&] {
    require(mix && out && n >= 1, "null argument or n < 1");
    sbern::rng gen = sbern::rng::for_stream(seed, 0);
    *out = new sbern_dataset{sbern::sample_mixture(mix->impl, n, gen)};
  });
}

void sbern_mixture_free(sbern_mixture* mix) { delete mix; }

/* ---- fitting ---- */

sbern_status sbern_fit_cdf(const sbern_dataset* data, int m, sbern_cdf_model** out) {
  return wrap([&] {
    require(data && out, "null argument");
    *out = new sbern_cdf_model{sbern::fit_cdf(data->impl, m)};
  });
}

sbern_status sbern_fit_density(const sbern_dataset* data, int m, sbern_density_model** out) {
  return wrap([&] {
    require(data && out, "null argument");
    *out = new sbern_density_model{sbern::fit_density(data->impl, m)};
  });
}

int sbern_cdf_model_dim(const sbern_cdf_model* model) { return model ? model->impl.dim() : 0; }
int sbern_cdf_model_order(const sbern_cdf_model* model) { return model ? model->impl.order() : 0; }
long sbern_cdf_model_size(const sbern_cdf_model* model) {
  return model ? model->impl.sample_size() : 0;
}
int sbern_density_model_dim(const sbern_density_model* model) {
  return model ? model->impl.dim() : 0;
}
int sbern_density_model_order(const sbern_density_model* model) {
  return model ? model->impl.order() : 0;
}
long sbern_density_model_size(const sbern_density_model* model) {
  return model ? model->impl.sample_size() : 0;
}
void sbern_cdf_model_free(sbern_cdf_model* model) { delete model; }
void sbern_density_model_free(sbern_density_model* model) { delete model; }

/* ---- evaluation ---- */

sbern_status sbern_cdf_eval(const sbern_cdf_model* model, const double* x, int d, double* out) {
  return wrap([&] {
    require(model && out, "null argument");
    *out = model->impl(point(x, d));
  });
}

sbern_status sbern_density_eval(const sbern_density_model* model, const double* x, int d,
                                double* out) {
  return wrap([&] {
    require(model && out, "null argument");
    *out = model->impl(point(x, d));
  });
}

sbern_status sbern_cdf_eval_grid_csv(const sbern_cdf_model* model, int resolution, int workers,
                                     char** out_csv) {
  return wrap([&] {
    require(model && out_csv, "null argument");
    *out_csv = dup_string(grid_csv(model->impl, model->impl.dim(), resolution, workers));
  });
}

sbern_status sbern_density_eval_grid_csv(const sbern_density_model* model, int resolution,
                                         int workers, char** out_csv) {
  return wrap([&] {
    require(model && out_csv, "null argument");
    *out_csv = dup_string(grid_csv(model->impl, model->impl.dim(), resolution, workers));
  });
}

/* ---- serialization ---- */

sbern_status sbern_cdf_model_to_json(const sbern_cdf_model* model, char** out) {
  return wrap([&] {
    require(model && out, "null argument");
    *out = dup_string(sbern::cdf_model_to_json(model->impl));
  });
}

sbern_status sbern_cdf_model_from_json(const char* text, sbern_cdf_model** out) {
  return wrap([&] {
    require(text && out, "null argument");
    *out = new sbern_cdf_model{sbern::cdf_model_from_json(text)};
  });
}

sbern_status sbern_density_model_to_json(const sbern_density_model* model, char** out) {
  return wrap([&] {
    require(model && out, "null argument");
    *out = dup_string(sbern::density_model_to_json(model->impl));
  });
}

sbern_status sbern_density_model_from_json(const char* text, sbern_density_model** out) {
  return wrap([&] {
    require(text && out, "null argument");
    *out = new sbern_density_model{sbern::density_model_from_json(text)};
  });
}

sbern_status sbern_model_file_kind(const char* text, int* out_kind) {
  return wrap([&] {
    require(text && out_kind, "null argument");
    *out_kind = sbern::detect_model_kind(text) == sbern::model_file_kind::cdf ? 0 : 1;
  });
}

/* ---- bandwidth selection ---- */

sbern_status sbern_select_bandwidth(const sbern_dataset* data, const char* method,
                                    const long* grid, int grid_len, int workers,
                                    char** out_json) {
  return wrap([&] {
    require(data && method && out_json, "null argument");
    std::vector<long> g;
    if (grid && grid_len > 0) g.assign(grid, grid + grid_len);
    const sbern::selection_result res =
        sbern::select_bandwidth(data->impl, method, std::move(g), workers);
    *out_json = dup_string(res.to_json());
  });
}

sbern_status sbern_bandwidth_grid(long n, int d, long m_min, long m_max, int count, long* out,
                                  int capacity, int* out_len) {
  return wrap([&] {
    require(out && out_len && capacity >= 0, "null argument");
    std::vector<long> grid;
    if (m_min > 0 && m_max > 0) {
      grid = sbern::geometric_grid(m_min, m_max, count);
    } else {
      grid = sbern::default_bandwidth_grid(n, d, count);
    }
    *out_len = static_cast<int>(grid.size());
    for (int i = 0; i < *out_len && i < capacity; ++i) out[i] = grid[static_cast<std::size_t>(i)];
  });
}

/* ---- verification ---- */

sbern_status sbern_verify_run(uint64_t seed, int workers, char** out_json, int* all_pass) {
  return wrap([&] {
    require(out_json != nullptr || all_pass != nullptr, "null argument");
    const auto checks = sbern::run_verification_sweep(seed, workers);
    if (out_json) *out_json = dup_string(sbern::verification_report_json(checks));
    if (all_pass) *all_pass = sbern::verification_all_pass(checks) ? 1 : 0;
  });
}

/* ---- studies ---- */

sbern_status sbern_study_run(const char* config_json, int workers, char** out_json,
                             char** out_csv) {
  return wrap([&] {
    require(config_json != nullptr, "null argument");
    const sbern::study_config cfg = sbern::study_config::from_json(config_json);
    const sbern::study_report rep = sbern::run_study(cfg, workers);
    if (out_json) *out_json = dup_string(rep.to_json());
    if (out_csv) *out_csv = dup_string(rep.to_csv());
  });
}

const char* sbern_version(void) { return "1.0.0"; }

}  // extern "C"
