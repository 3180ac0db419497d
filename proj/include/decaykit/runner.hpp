#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/evolution.hpp"
#include "decaykit/io.hpp"
#include "decaykit/relativistic.hpp"
#include "decaykit/selfenergy.hpp"
#include "decaykit/spectral.hpp"
#include "decaykit/vanhove.hpp"

namespace decaykit {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct OutputSpec {
  bool csv = true;
  bool json = true;
};

struct RunOutcome {
  std::vector<std::string> outputs;
  nlohmann::json result;
  nlohmann::json manifest;
  bool all_checks_passed = true;
};

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace cfg {

using nlohmann::json;

inline const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError("config." + path + ": missing required field '" + key + "'");
  return j.at(key);
}

inline double num(const json& j, const std::string& key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) throw ConfigError("config." + path + "." + key + ": expected a number");
  return v.get<double>();
}

inline double num_or(const json& j, const std::string& key, double dflt) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  if (!j.at(key).is_number()) throw ConfigError("config." + key + ": expected a number");
  return j.at(key).get<double>();
}

inline int integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number_integer()) throw ConfigError("config." + path + "." + key + ": expected an integer");
  return v.get<int>();
}

inline int integer_or(const json& j, const std::string& key, int dflt) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  if (!j.at(key).is_number_integer())
    throw ConfigError("config." + key + ": expected an integer");
  return j.at(key).get<int>();
}

inline std::string str(const json& j, const std::string& key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_string()) throw ConfigError("config." + path + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline SpectralModel parse_model(const json& config) {
  const json& m = need(config, "model", "");
  const std::string fam = str(m, "family", "model");
  try {
    if (fam == "flat") {
      FlatCutoff f{num(m, "gamma", "model"), num(m, "Lambda", "model")};
      SpectralModel model = f;
      validate(model);
      return model;
    }
    if (fam == "powerlaw") {
      PowerLawExp f{num(m, "g2", "model"), num(m, "eta", "model"), num(m, "Lambda", "model")};
      SpectralModel model = f;
      validate(model);
      return model;
    }
    if (fam == "phasespace") {
      TwoBodyPhaseSpace f{num(m, "mu", "model"), num(m, "m", "model"), num(m, "M", "model")};
      SpectralModel model = f;
      validate(model);
      return model;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config.model: ") + e.what());
  }
  throw ConfigError("config.model.family: must be one of flat|powerlaw|phasespace");
}

inline RelParams parse_rel(const json& config) {
  const json& r = need(config, "relativistic", "");
  RelParams q;
  q.mu = num(r, "mu", "relativistic");
  q.m = num(r, "m", "relativistic");
  q.M = num(r, "M", "relativistic");
  q.lambda = num(r, "lambda", "relativistic");
  q.p = num_or(r, "p", 0.0);
  try {
    validate(q);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config.relativistic: ") + e.what());
  }
  if (!(q.M > 2.0 * q.m))
    throw ConfigError("config.relativistic: closed channel (M <= 2m)");
  return q;
}

inline TimeGrid parse_grid(const json& config, const std::string& key = "grid") {
  const json& g = need(config, key, "");
  const double t_min = num(g, "t_min", key);
  const double t_max = num(g, "t_max", key);
  const int nodes = integer(g, "nodes", key);
  std::string spacing = g.contains("spacing") ? str(g, "spacing", key) : "log";
  try {
    if (spacing == "linear") return linear_grid(t_min, t_max, nodes);
    if (spacing == "log") return log_grid(t_min, t_max, nodes);
    if (spacing == "mixed") return mixed_grid(t_min, t_max, nodes);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config." + key + ": " + e.what());
  }
  throw ConfigError("config." + key + ".spacing: must be linear|log|mixed");
}

inline std::vector<double> parse_lambdas(const json& config) {
  if (config.contains("lambdas")) {
    const json& l = config.at("lambdas");
    if (!l.is_array() || l.empty())
      throw ConfigError("config.lambdas: expected a non-empty array");
    std::vector<double> out;
    for (const auto& v : l) {
      if (!v.is_number()) throw ConfigError("config.lambdas: expected numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  return {num(config, "lambda", "")};
}

}  // namespace cfg

// ---------------------------------------------------------------------------
// Worker pool (independent jobs only; output order is fixed by index)
// ---------------------------------------------------------------------------

inline int worker_cap() {
  if (const char* s = std::getenv("DECAYKIT_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int T = std::min<std::size_t>(static_cast<std::size_t>(worker_cap()), n);
  if (T <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mtx;
  std::vector<std::thread> pool;
  for (int t = 0; t < T; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mtx);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

namespace rundetail {

using nlohmann::json;

struct Sink {
  std::filesystem::path dir;
  OutputSpec fmt;
  RunOutcome* out;

  void file(const std::string& name, const std::string& content) const {
    write_atomic(dir / name, content);
    out->outputs.push_back(name);
  }
  void series(const std::string& base, const AmplitudeSeries& s) const {
    if (fmt.csv) file(base + ".csv", series_to_csv(s));
  }
};

inline void add_check(json& checks, RunOutcome& out, const std::string& name, bool pass) {
  checks.push_back({{"name", name}, {"pass", pass}});
  if (!pass) out.all_checks_passed = false;
}

// Quadrature of Gamma over its support with the threshold peel; dual route to
// the closed-form total weight.
inline double numeric_weight(const SpectralModel& model) {
  const double thr = threshold(model);
  const double top = support_top(model);
  const double L = energy_scale(model);
  const double eta = threshold_exponent(model);
  QuadOptions opt;
  opt.rel_tol = 1e-11;
  opt.context = "spectral weight";
  auto f = [&](double E) { return gamma_of(model, E); };
  if (std::isfinite(top)) return integrate_peeled(f, thr, top, eta, opt) / kTwoPi;
  double w = integrate_peeled(f, thr, thr + L, eta, opt);
  w += integrate(f, thr + L, thr + 30.0 * L, opt);
  w += integrate_half_line(f, thr + 30.0 * L, L, opt);
  return w / kTwoPi;
}

inline json model_echo(const SpectralModel& model) {
  json j;
  j["family"] = model_name(model);
  if (const auto* f = std::get_if<FlatCutoff>(&model)) {
    j["gamma"] = f->gamma;
    j["Lambda"] = f->Lambda;
  } else if (const auto* p = std::get_if<PowerLawExp>(&model)) {
    j["g2"] = p->g2;
    j["eta"] = p->eta;
    j["Lambda"] = p->Lambda;
  } else if (const auto* t = std::get_if<TwoBodyPhaseSpace>(&model)) {
    j["mu"] = t->mu;
    j["m"] = t->m;
    j["M"] = t->M;
  }
  return j;
}

inline void run_spectra(const json& config, const Sink& sink, RunOutcome& out) {
  SpectralModel model = cfg::parse_model(config);
  const double thr = threshold(model);
  const double top = support_top(model);
  const double L = energy_scale(model);
  double E_lo = thr, E_hi = std::isfinite(top) ? 1.2 * top : thr + 8.0 * L;
  int count = 401;
  if (config.contains("scan")) {
    const json& s = config.at("scan");
    E_lo = cfg::num(s, "E_min", "scan");
    E_hi = cfg::num(s, "E_max", "scan");
    count = cfg::integer(s, "count", "scan");
    if (!(E_hi > E_lo) || count < 2) throw ConfigError("config.scan: bad range");
  }

  std::string csv = "E,gamma\n";
  bool nonneg = true;
  for (int i = 0; i < count; ++i) {
    const double E = E_lo + (E_hi - E_lo) * i / (count - 1.0);
    const double g = gamma_of(model, E);
    if (g < 0.0) nonneg = false;
    csv += fmt17(E) + "," + fmt17(g) + "\n";
  }
  if (sink.fmt.csv) sink.file("spectra.csv", csv);

  json res;
  res["model"] = model_echo(model);
  res["threshold"] = thr;
  res["threshold_exponent"] = threshold_exponent(model);
  json checks = json::array();
  add_check(checks, out, "gamma_nonnegative", nonneg);
  try {
    const double w = total_weight(model);
    res["total_weight"] = w;
    const double wq = numeric_weight(model);
    add_check(checks, out, "weight_quadrature_agreement",
              std::abs(wq - w) <= 1e-8 * std::abs(w));
  } catch (const NonIntegrable&) {
    res["total_weight"] = nullptr;
    res["total_weight_error"] = "NonIntegrable";
  }
  res["checks"] = checks;
  out.result = res;
  if (sink.fmt.json) sink.file("spectra.json", res.dump(2) + "\n");
}

inline void run_selfenergy(const json& config, const Sink& sink, RunOutcome& out) {
  SpectralModel model = cfg::parse_model(config);
  const double thr = threshold(model);
  const double top = support_top(model);
  const double L = energy_scale(model);
  std::vector<double> pts;
  if (config.contains("E_points")) {
    for (const auto& v : config.at("E_points")) {
      if (!v.is_number()) throw ConfigError("config.E_points: expected numbers");
      pts.push_back(v.get<double>());
    }
  } else {
    const double lo = thr + 0.02 * L;
    const double hi = std::isfinite(top) ? 0.98 * top : thr + 6.0 * L;
    for (int i = 0; i < 101; ++i) pts.push_back(lo + (hi - lo) * i / 100.0);
  }

  std::string csv = "E,delta,gamma\n";
  std::vector<BoundaryValue> bv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bv[i] = sigma2_boundary(model, pts[i]);
    csv += fmt17(pts[i]) + "," + fmt17(bv[i].delta) + "," + fmt17(bv[i].gamma) + "\n";
  }
  if (sink.fmt.csv) sink.file("selfenergy.csv", csv);

  // Boundary reconstruction against the complex evaluator just off the cut.
  json checks = json::array();
  bool recon = true;
  int tested = 0;
  for (std::size_t i = 0; i < pts.size() && tested < 3; i += std::max<std::size_t>(1, pts.size() / 3)) {
    if (!(bv[i].gamma > 0.0)) continue;
    const double d = 1e-7 * std::max(1.0, std::abs(pts[i]));
    const complex_t lim = sigma2_complex(model, complex_t(pts[i], d), Sheet::first);
    const complex_t bnd = to_complex(bv[i]);
    if (std::abs(lim - bnd) > 1e-4 * (1.0 + std::abs(bnd))) recon = false;
    ++tested;
  }
  add_check(checks, out, "boundary_reconstruction", recon);

  json res;
  res["model"] = model_echo(model);
  res["points"] = pts.size();
  res["checks"] = checks;
  out.result = res;
  if (sink.fmt.json) sink.file("selfenergy.json", res.dump(2) + "\n");
}

inline json pole_record(const PoleResult& p) {
  json j;
  j["location_re"] = p.location.real();
  j["location_im"] = p.location.imag();
  j["residue_re"] = p.residue.real();
  j["residue_im"] = p.residue.imag();
  j["iterations"] = p.iterations;
  j["final_residual"] = p.final_residual;
  return j;
}

inline void run_poles(const json& config, const Sink& sink, RunOutcome& out) {
  json res;
  json checks = json::array();
  if (config.contains("relativistic")) {
    RelParams q = cfg::parse_rel(config);
    if (!(q.lambda > 0.0)) throw ConfigError("config.relativistic.lambda: must be > 0");
    PoleResult p = find_pole_rel(q);
    res["mode"] = "relativistic";
    res["pole"] = pole_record(p);
    add_check(checks, out, "residual_within_tolerance",
              p.final_residual <= 1e-12 * std::max(1.0, std::abs(p.location)));
    add_check(checks, out, "second_sheet_decay", p.location.imag() < 0.0);
  } else {
    SpectralModel model = cfg::parse_model(config);
    const double E_a = cfg::num(config, "E_a", "");
    std::vector<double> lambdas = cfg::parse_lambdas(config);
    res["mode"] = "nonrelativistic";
    res["model"] = model_echo(model);
    res["E_a"] = E_a;
    json arr = json::array();
    bool res_ok = true, sheet_ok = true;
    for (double lam : lambdas) {
      if (!(lam > 0.0)) throw ConfigError("config.lambda: must be > 0");
      PoleResult p = find_pole_nonrel(model, E_a, lam);
      json rec = pole_record(p);
      rec["lambda"] = lam;
      arr.push_back(rec);
      res_ok = res_ok && p.final_residual <= 1e-12 * std::max(1.0, std::abs(p.location));
      sheet_ok = sheet_ok && p.location.imag() < 0.0;
    }
    res["poles"] = arr;
    add_check(checks, out, "residual_within_tolerance", res_ok);
    add_check(checks, out, "second_sheet_decay", sheet_ok);
  }
  res["checks"] = checks;
  out.result = res;
  if (sink.fmt.json) sink.file("poles.json", res.dump(2) + "\n");
}

inline void run_evolve(const json& config, const Sink& sink, RunOutcome& out) {
  SpectralModel model = cfg::parse_model(config);
  const double E_a = cfg::num(config, "E_a", "");
  const double lambda = cfg::num(config, "lambda", "");
  if (!(lambda >= 0.0)) throw ConfigError("config.lambda: must be >= 0");
  TimeGrid grid = cfg::parse_grid(config);
  std::string method = config.contains("method") ? cfg::str(config, "method", "") : "all";
  const int modes = cfg::integer_or(config, "oracle_modes", 4096);
  if (method != "line" && method != "decomposed" && method != "oracle" && method != "all")
    throw ConfigError("config.method: must be line|decomposed|oracle|all");

  std::vector<std::pair<std::string, AmplitudeSeries>> series;
  std::vector<std::string> wanted;
  if (method == "all")
    wanted = {"line", "decomposed", "oracle"};
  else
    wanted = {method};
  series.resize(wanted.size());
  parallel_for(wanted.size(), [&](std::size_t i) {
    const std::string& w = wanted[i];
    if (w == "line")
      series[i] = {w, survival_line(model, E_a, lambda, grid)};
    else if (w == "decomposed")
      series[i] = {w, survival_decomposed(model, E_a, lambda, grid)};
    else
      series[i] = {w, survival_oracle(model, E_a, lambda, modes, grid)};
  });

  json res;
  res["model"] = model_echo(model);
  res["E_a"] = E_a;
  res["lambda"] = lambda;
  try {
    res["tau_Z"] = zeno_time(model, lambda);
  } catch (const Error&) {
    res["tau_Z"] = nullptr;
  } catch (const std::invalid_argument&) {
    res["tau_Z"] = nullptr;
  }
  try {
    res["tau_E"] = lifetime(model, E_a, lambda);
  } catch (const Error&) {
    res["tau_E"] = nullptr;
  } catch (const std::invalid_argument&) {
    res["tau_E"] = nullptr;
  }

  json checks = json::array();
  json per = json::object();
  bool p_ok = true, t0_ok = true;
  for (const auto& [name, s] : series) {
    sink.series("series_" + name, s);
    json m;
    m["A0_re"] = s.amplitude.front().real();
    m["A0_im"] = s.amplitude.front().imag();
    double pmax = 0.0;
    for (double p : s.probability) pmax = std::max(pmax, p);
    m["P_max"] = pmax;
    per[name] = m;
    if (pmax > 1.0 + 1e-6) p_ok = false;
    if (s.grid.nodes.front() == 0.0 &&
        std::abs(s.amplitude.front() - complex_t(1.0, 0.0)) > 1e-6)
      t0_ok = false;
  }
  res["methods"] = per;
  if (series.size() > 1) {
    double dmax = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i)
      for (std::size_t j = i + 1; j < series.size(); ++j)
        for (std::size_t k = 0; k < grid.nodes.size(); ++k)
          dmax = std::max(dmax,
                          std::abs(series[i].second.amplitude[k] - series[j].second.amplitude[k]));
    res["max_pairwise_amplitude_diff"] = dmax;
    add_check(checks, out, "methods_agree", dmax <= 1e-5);
  }
  add_check(checks, out, "probability_bounded", p_ok);
  if (grid.nodes.front() == 0.0) add_check(checks, out, "amplitude_normalized_at_t0", t0_ok);
  res["checks"] = checks;
  out.result = res;
  if (sink.fmt.json) sink.file("evolve.json", res.dump(2) + "\n");
}

inline std::string lambda_tag(double lam) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", lam);
  return buf;
}

inline void run_vanhove(const json& config, const Sink& sink, RunOutcome& out) {
  SpectralModel model = cfg::parse_model(config);
  const double E_a = cfg::num(config, "E_a", "");
  std::vector<double> lambdas = cfg::parse_lambdas(config);
  if (lambdas.size() < 3) throw ConfigError("config.lambdas: need at least 3 couplings");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i + 1]))
      throw ConfigError("config.lambdas: must decrease strictly");
  const double g = gamma_of(model, E_a);
  if (!(g > 0.0)) throw ConfigError("config.E_a: closed channel (Gamma(E_a) = 0)");

  TimeGrid window;
  if (config.contains("window")) {
    const json& w = config.at("window");
    window = linear_grid(cfg::num(w, "t_lo", "window"), cfg::num(w, "t_hi", "window"),
                         cfg::integer(w, "nodes", "window"));
  } else {
    window = default_deviation_grid(model, E_a);
  }

  VanHoveScan scan = convergence_scan(model, E_a, lambdas, window);

  // Per-lambda rescaled series on the window grid (independent jobs).
  std::vector<AmplitudeSeries> per_series(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    per_series[i] = rescaled_survival(model, E_a, lambdas[i], window);
  });
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    sink.series("series_lambda_" + lambda_tag(lambdas[i]), per_series[i]);

  json res;
  res["model"] = model_echo(model);
  res["E_a"] = E_a;
  res["lambdas"] = lambdas;
  res["deviation_max"] = scan.deviation_max;
  res["zeno_width"] = scan.zeno_width;
  res["oscillation_amplitude"] = scan.oscillation_amplitude;
  res["crossover_time"] = scan.crossover_time;
  res["fitted"] = {{"zeno_width_exponent", scan.fitted.zeno_width_exponent},
                   {"oscillation_exponent", scan.fitted.oscillation_exponent},
                   {"crossover_slope", scan.fitted.crossover_slope},
                   {"crossover_correlation", scan.fitted.crossover_correlation}};
  json checks = json::array();
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < scan.deviation_max.size(); ++i)
    if (!(scan.deviation_max[i] > scan.deviation_max[i + 1])) decreasing = false;
  add_check(checks, out, "deviation_strictly_decreasing", decreasing);
  res["checks"] = checks;
  out.result = res;
  if (sink.fmt.json) sink.file("vanhove.json", res.dump(2) + "\n");
}

inline void run_relativistic(const json& config, const Sink& sink, RunOutcome& out) {
  RelParams base = cfg::parse_rel(config);
  std::vector<double> momenta{base.p};
  if (config.at("relativistic").contains("momenta")) {
    momenta.clear();
    for (const auto& v : config.at("relativistic").at("momenta")) {
      if (!v.is_number() || v.get<double>() < 0.0)
        throw ConfigError("config.relativistic.momenta: expected nonnegative numbers");
      momenta.push_back(v.get<double>());
    }
    if (momenta.empty()) throw ConfigError("config.relativistic.momenta: empty");
  }

  json res;
  res["M"] = base.M;
  res["m"] = base.m;
  res["mu"] = base.mu;
  res["lambda"] = base.lambda;
  json checks = json::array();

  // Representation cross-check on a fixed complex grid off the cut.
  const double M2 = base.M * base.M;
  double rep_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double re = M2 * (-1.5 + 3.2 * k / 19.0);
    const double im = M2 * ((k % 2 == 0) ? (0.4 + 1.3 * k / 19.0) : -(0.4 + 1.3 * k / 19.0));
    const complex_t s(re, im);
    rep_err = std::max(rep_err, std::abs(sigma2_rel_closed(base, s, Sheet::first) -
                                         sigma2_rel_dispersion(base, s)));
  }
  res["max_closed_vs_dispersion"] = rep_err;
  add_check(checks, out, "representations_agree", rep_err <= 1e-10);

  const complex_t on_shell = sigma2_rel_boundary(base, M2);
  res["re_sigma_on_shell"] = on_shell.real();
  add_check(checks, out, "renormalization_real_part_zero", std::abs(on_shell.real()) <= 1e-12);

  if (base.lambda > 0.0) {
    PoleResult p = find_pole_rel(base);
    res["pole"] = pole_record(p);
    add_check(checks, out, "pole_residual",
              p.final_residual <= 1e-12 * std::max(1.0, std::abs(p.location)));
  }

  TimeGrid grid;
  const bool has_grid = config.contains("grid");
  json per = json::array();
  std::vector<AmplitudeSeries> series(momenta.size());
  std::vector<RelParams> qs(momenta.size());
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    qs[i] = base;
    qs[i].p = momenta[i];
  }
  parallel_for(momenta.size(), [&](std::size_t i) {
    TimeGrid gi = has_grid ? cfg::parse_grid(config) : default_correlation_grid(qs[i]);
    series[i] = correlation_amplitude(qs[i], gi);
  });
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    const RelParams& q = qs[i];
    json rec;
    rec["p"] = q.p;
    rec["E_p"] = q.E_p();
    rec["limit_decay_rate_rescaled"] = q.M / q.E_p() * gamma_rel(q, M2);
    if (q.lambda > 0.0) rec["lifetime_dilated"] = lifetime_dilated(q);
    per.push_back(rec);
    sink.series("correlation_p" + std::to_string(i), series[i]);
  }
  res["momenta"] = per;
  res["checks"] = checks;
  out.result = res;
  if (sink.fmt.json) sink.file("relativistic.json", res.dump(2) + "\n");
}

}  // namespace rundetail

// ---------------------------------------------------------------------------
// Entry point shared by the CLI and the test suite
// ---------------------------------------------------------------------------

inline RunOutcome run_command(const std::string& command, const nlohmann::json& config,
                              const std::filesystem::path& out_dir,
                              const OutputSpec& fmt = {}) {
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  std::filesystem::create_directories(out_dir);
  RunOutcome out;
  rundetail::Sink sink{out_dir, fmt, &out};

  if (command == "spectra")
    rundetail::run_spectra(config, sink, out);
  else if (command == "selfenergy")
    rundetail::run_selfenergy(config, sink, out);
  else if (command == "poles")
    rundetail::run_poles(config, sink, out);
  else if (command == "evolve")
    rundetail::run_evolve(config, sink, out);
  else if (command == "vanhove")
    rundetail::run_vanhove(config, sink, out);
  else if (command == "relativistic")
    rundetail::run_relativistic(config, sink, out);
  else
    throw ConfigError("unknown command '" + command + "'");

  nlohmann::json manifest;
  manifest["artifact"] = "decaykit";
  manifest["version"] = kArtifactVersion;
  manifest["command"] = command;
  manifest["config_hash"] = fnv1a_hex(config.dump());
  manifest["outputs"] = out.outputs;
  manifest["checks"] = out.result.contains("checks") ? out.result.at("checks")
                                                     : nlohmann::json::array();
  out.manifest = manifest;
  write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
  out.outputs.push_back("manifest.json");
  return out;
}

}  // namespace decaykit
