#include <cmath>
#include <cstring>
#include <exception>
#include <string>

#include "analytic_istn.hpp"
#include "analytic_sat.hpp"
#include "analytic_ter.hpp"
#include "istn/istn.h"
#include "montecarlo.hpp"
#include "runner.hpp"

struct istn_scenario {
  istn::ScenarioSpec spec;
};

struct istn_model {
  istn::SatTierModel sat;
  istn::TerTierModel ter;
};

namespace {

thread_local std::string last_error;

istn_status fail(istn_status s, std::string message) {
  last_error = std::move(message);
  return s;
}

istn_status ok() {
  last_error.clear();
  return ISTN_OK;
}

template <class F>
istn_status guarded(F&& f) {
  try {
    return f();
  } catch (const istn::ConfigError& e) {
    return fail(ISTN_CONFIG, e.what());
  } catch (const istn::NumericalError& e) {
    return fail(ISTN_NUMERICAL, e.what());
  } catch (const istn::DomainError& e) {
    return fail(ISTN_INVALID_ARGUMENT, e.what());
  } catch (const istn::IoError& e) {
    return fail(ISTN_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ISTN_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ISTN_INTERNAL, e.what());
  } catch (...) {
    return fail(ISTN_INTERNAL, "unknown error");
  }
}

istn::McOptions to_mc(const istn_mc_options& o) {
  istn::McOptions mc;
  mc.trials = o.trials;
  mc.seed = o.seed;
  mc.round_serving_shape = o.round_serving_shape != 0;
  mc.exact_sr = o.exact_sr != 0;
  mc.sat_los = o.explicit_sat_paths ? istn::SatLosMode::ExplicitPath : istn::SatLosMode::Bernoulli;
  mc.ter_los = o.geometric_ter_los ? istn::TerLosMode::Geometric : istn::TerLosMode::Bernoulli;
  mc.threads = o.threads;
  return mc;
}

bool valid_tier(istn_tier t) { return t == ISTN_TIER_SAT || t == ISTN_TIER_TER || t == ISTN_TIER_ISTN; }

}  // namespace

extern "C" {

ISTN_API const char* istn_version(void) { return istn::kVersion.data(); }

ISTN_API const char* istn_last_error(void) { return last_error.c_str(); }

ISTN_API istn_status istn_scenario_from_file(const char* path, istn_scenario** out) {
  if (!path || !out) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new istn_scenario{istn::load_scenario_file(path)};
    return ok();
  });
}

ISTN_API istn_status istn_scenario_from_string(const char* text, istn_scenario** out) {
  if (!text || !out) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new istn_scenario{istn::parse_scenario(text)};
    return ok();
  });
}

ISTN_API istn_status istn_scenario_reference(istn_scenario** out) {
  if (!out) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new istn_scenario{istn::reference_scenario()};
    return ok();
  });
}

ISTN_API istn_status istn_scenario_set(istn_scenario* s, const char* key, const char* value) {
  if (!s || !key || !value) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    s->spec.set(key, std::string_view(value));
    return ok();
  });
}

ISTN_API istn_status istn_scenario_get(const istn_scenario* s, const char* key, double* value) {
  if (!s || !key || !value) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  const auto v = s->spec.get(key);
  if (!v) return fail(ISTN_CONFIG, std::string(key) + ": not set");
  *value = *v;
  return ok();
}

ISTN_API istn_status istn_scenario_serialize(const istn_scenario* s, char* buffer, size_t capacity, size_t* needed) {
  if (!s || (!buffer && capacity > 0)) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string text = s->spec.serialize();
    if (needed) *needed = text.size() + 1;
    if (capacity == 0) return ok();
    const size_t n = std::min(capacity - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
    return n == text.size() ? ok() : fail(ISTN_INVALID_ARGUMENT, "buffer too small");
  });
}

ISTN_API void istn_scenario_free(istn_scenario* s) { delete s; }

ISTN_API void istn_model_options_init(istn_model_options* o) {
  if (o) *o = istn_model_options{0};
}

ISTN_API istn_status istn_model_create(const istn_scenario* s, const istn_model_options* o, istn_model** out) {
  if (!s || !out) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto cfg = istn::validate(s->spec);
    const bool strict = o && o->strict_ter_sum;
    *out = new istn_model{istn::SatTierModel::from_config(cfg), istn::TerTierModel::from_config(cfg, strict)};
    return ok();
  });
}

ISTN_API void istn_model_free(istn_model* m) { delete m; }

ISTN_API istn_status istn_analytic_coverage(const istn_model* m, istn_tier tier, double tau_db, double* coverage,
                                            double* quad_err) {
  if (!m || !coverage || !valid_tier(tier)) return fail(ISTN_INVALID_ARGUMENT, "invalid argument");
  if (!std::isfinite(tau_db)) return fail(ISTN_INVALID_ARGUMENT, "threshold must be finite");
  return guarded([&] {
    const double tau = std::pow(10.0, tau_db / 10.0);
    istn::CoverageResult r;
    if (tier == ISTN_TIER_SAT) {
      r = istn::sat_coverage(m->sat, tau);
    } else if (tier == ISTN_TIER_TER) {
      r = istn::ter_coverage(m->ter, tau);
    } else {
      const auto s = istn::sat_coverage(m->sat, tau);
      const auto t = istn::ter_coverage(m->ter, tau);
      r.coverage = istn::istn_coverage(t.coverage, s.coverage).p_istn;
      r.quad_err = s.quad_err + t.quad_err;
    }
    *coverage = r.coverage;
    if (quad_err) *quad_err = r.quad_err;
    return ok();
  });
}

ISTN_API void istn_mc_options_init(istn_mc_options* o) {
  if (o) *o = istn_mc_options{200000, 1, 0, 0, 0, 0, 0};
}

ISTN_API istn_status istn_mc_coverage(const istn_model* m, istn_tier tier, double tau_db, const istn_mc_options* o,
                                      double* mean, double* half_width) {
  if (!m || !mean || !valid_tier(tier)) return fail(ISTN_INVALID_ARGUMENT, "invalid argument");
  if (!std::isfinite(tau_db)) return fail(ISTN_INVALID_ARGUMENT, "threshold must be finite");
  istn_mc_options defaults;
  istn_mc_options_init(&defaults);
  const auto mc = to_mc(o ? *o : defaults);
  if (mc.trials < 1) return fail(ISTN_INVALID_ARGUMENT, "trials must be at least 1");
  return guarded([&] {
    const double tau = std::pow(10.0, tau_db / 10.0);
    istn::McEstimate e;
    if (tier == ISTN_TIER_SAT)
      e = istn::mc_sat_coverage(m->sat, tau, mc);
    else if (tier == ISTN_TIER_TER)
      e = istn::mc_ter_coverage(m->ter, tau, mc);
    else
      e = istn::mc_istn_coverage(m->sat, m->ter, tau, mc);
    *mean = e.mean;
    if (half_width) *half_width = e.half_width_95;
    return ok();
  });
}

ISTN_API void istn_run_options_init(istn_run_options* o) {
  if (!o) return;
  *o = istn_run_options{};
  o->out_dir = "out";
  o->trials = 200000;
  o->seed = 1;
  o->tol_tier = 0.015;
  o->tol_istn = 0.02;
  istn_mc_options_init(&o->mc);
}

ISTN_API istn_status istn_run(const istn_run_options* o, istn_run_summary* summary) {
  if (!o) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    istn::RunOptions opt;
    if (o->scenario_path) opt.scenario_path = o->scenario_path;
    if (o->sweep_path) opt.sweep_path = o->sweep_path;
    if (o->preset) opt.preset = o->preset;
    if (o->out_dir) opt.out_dir = o->out_dir;
    if (o->methods && *o->methods) opt.methods = istn::parse_methods(o->methods);
    if (o->tiers && *o->tiers) opt.tiers = istn::parse_tiers(o->tiers);
    opt.trials = o->trials;
    opt.seed = o->seed;
    opt.verify = o->verify != 0;
    opt.tol_tier = o->tol_tier;
    opt.tol_istn = o->tol_istn;
    opt.strict_ter_sum = o->strict_ter_sum != 0;
    opt.emit_only = o->emit_only != 0;
    opt.mc = to_mc(o->mc);
    const auto report = istn::run(opt);
    if (summary) {
      summary->rows = report.rows.size();
      summary->verified_pairs = report.verify.size();
      summary->max_abs_diff = report.max_abs_diff;
    }
    if (report.exit_code == 0) return ok();
    return fail(static_cast<istn_status>(report.exit_code), report.message);
  });
}

ISTN_API istn_status istn_emit_preset(const char* name, const char* out_dir) {
  if (!name || !out_dir) return fail(ISTN_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    istn::emit_figure_preset(name, out_dir);
    return ok();
  });
}

}  // extern "C"
