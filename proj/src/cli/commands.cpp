#include "liouspec/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <numeric>
#include <thread>

#include "liouspec/cli/output.hpp"
#include "liouspec/jordan_oracle.hpp"

namespace liouspec::cli {

using Json = nlohmann::ordered_json;

std::string status_token(const std::exception& e) {
  if (dynamic_cast<const NoPeak*>(&e)) return "no_peak";
  if (dynamic_cast<const DegenerateWindow*>(&e)) return "degenerate_window";
  if (dynamic_cast<const NonUniqueSteadyState*>(&e)) return "non_unique_steady_state";
  if (dynamic_cast<const SingularResolvent*>(&e)) return "singular_resolvent";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical_error";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid_argument";
  return "error";
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        fn(k);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

MatrixXc source_state(const SourceSpec& s, const Liouvillian& L, const SteadyState* ss) {
  const Index d = L.hilbert_dim();
  switch (s.kind) {
    case SourceKind::Steady:
      if (ss == nullptr) throw InvalidArgument("steady source requested without a steady state");
      return ss->rho;
    case SourceKind::InfiniteTemperature:
      return MatrixXc::Identity(d, d) / static_cast<double>(d);
    case SourceKind::Random:
      return random_full_rank_state(d, s.seed.value_or(0));
    default:
      throw InvalidArgument("unsupported source kind " + std::string(to_string(s.kind)));
  }
}

PointResult analyze_point(const ModelParams& params, const GridSpec& grid,
                          const std::vector<SourceSpec>& sources,
                          const DiagnosticsOptions& fit) {
  PointResult out;
  out.params = params;
  for (const auto& s : sources) {
    SourceOutcome o;
    o.source = s;
    out.sources.push_back(std::move(o));
  }

  auto fail_all = [&](const std::exception& e, bool only_steady) {
    for (auto& o : out.sources) {
      if (only_steady && o.source.kind != SourceKind::Steady) continue;
      o.status = status_token(e);
      o.error = e.what();
    }
  };

  std::optional<Liouvillian> L;
  std::vector<double> omegas;
  try {
    L = build_liouvillian_explicit(params);
    omegas = grid.build(params);
  } catch (const std::exception& e) {
    fail_all(e, false);
    return out;
  }

  std::optional<SteadyState> ss;
  const bool wants_steady = std::any_of(sources.begin(), sources.end(), [](const SourceSpec& s) {
    return s.kind == SourceKind::Steady;
  });
  if (wants_steady) {
    try {
      ss = steady_state(*L);
    } catch (const std::exception& e) {
      fail_all(e, true);
    }
  }

  for (auto& o : out.sources) {
    if (o.status != "ok") continue;
    try {
      const MatrixXc rho = source_state(o.source, *L, ss ? &*ss : nullptr);
      SpectrumTrace trace = emission_spectrum_source(*L, rho, omegas, o.source.kind);
      if (o.source.kind == SourceKind::Random) {
        trace.seed = o.source.seed;
        trace.rng = std::string(kRandomStateGenerator);
      }
      o.trace = std::move(trace);
      o.diagnostics = ep_diagnostics(*o.trace, fit);
    } catch (const std::exception& e) {
      o.status = status_token(e);
      o.error = e.what();
    }
  }
  return out;
}

namespace {

void report(const std::string& context, const SourceOutcome& o) {
  std::cerr << "warning: " << context << " source " << o.source.label() << ": " << o.status
            << ": " << o.error << '\n';
}

// ---------------------------------------------------------------- eigs

struct EigRow {
  Complex lambda;
  int sector;
};

}  // namespace

int cmd_eigs(const RunConfig& cfg) {
  ensure_directory(cfg.out);
  const double jv = cfg.params.j.value();
  const double scale = cfg.eigs.rescale_by_j ? jv : 1.0;

  std::vector<std::vector<EigRow>> rows(cfg.eigs.p.size());
  std::vector<std::vector<bool>> flags(cfg.eigs.p.size());
  std::vector<std::size_t> raw_counts(cfg.eigs.p.size());

  parallel_for(cfg.eigs.p.size(), cfg.threads, [&](std::size_t k) {
    ModelParams mp = cfg.params;
    mp.p = cfg.eigs.p[k];
    const auto spec = full_spectrum(build_liouvillian_explicit(mp), cfg.eigs.threshold, scale);

    // Sort by sector, then by (Re, Im), so files diff cleanly.
    std::vector<std::size_t> order(spec.eigenvalues.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = spec.eigenvalues[a];
      const auto& y = spec.eigenvalues[b];
      if (spec.sector[a] != spec.sector[b]) return spec.sector[a] < spec.sector[b];
      if (x.real() != y.real()) return x.real() < y.real();
      return x.imag() < y.imag();
    });
    for (std::size_t i : order) {
      rows[k].push_back({spec.eigenvalues[i], spec.sector[i]});
      flags[k].push_back(spec.near_degenerate[i]);
    }
    const auto raw = near_degenerate_flags(spec.eigenvalues, cfg.eigs.threshold);
    raw_counts[k] = static_cast<std::size_t>(std::count(raw.begin(), raw.end(), true));
  });

  Json summary;
  summary["params"] = to_json(cfg.params);
  summary["threshold"] = cfg.eigs.threshold;
  summary["flag_scale"] = scale;
  summary["files"] = Json::array();
  for (std::size_t k = 0; k < cfg.eigs.p.size(); ++k) {
    const std::string name = "eigs_" + point_tag(cfg.params.j, cfg.eigs.p[k]) + ".csv";
    CsvWriter csv(cfg.out / name, {"re_lambda", "im_lambda", "re_lambda_over_j",
                                   "im_lambda_over_j", "sector_M", "near_degenerate_flag"});
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      const auto& r = rows[k][i];
      csv.cell(r.lambda.real())
          .cell(r.lambda.imag())
          .cell(r.lambda.real() / jv)
          .cell(r.lambda.imag() / jv)
          .cell(static_cast<long long>(r.sector))
          .cell(static_cast<bool>(flags[k][i]));
      csv.end_row();
      if (flags[k][i]) ++flagged;
    }
    csv.close();
    summary["files"].push_back({{"p", cfg.eigs.p[k]},
                                {"file", name},
                                {"rows", rows[k].size()},
                                {"flagged", flagged},
                                {"flagged_raw_lambda", raw_counts[k]}});
  }
  char jtag[32];
  std::snprintf(jtag, sizeof jtag, "j%g", jv);
  write_json(cfg.out / ("eigs_" + std::string(jtag) + "_summary.json"), summary);
  return kOk;
}

// ------------------------------------------------------------ spectrum

namespace {

Json source_json(const SourceOutcome& o, const ModelParams& params, const GridSpec& grid) {
  Json doc;
  doc["source"] = o.source.label();
  doc["kind"] = std::string(to_string(o.source.kind));
  doc["seed"] = o.source.seed ? Json(*o.source.seed) : Json(nullptr);
  doc["rng"] = o.source.kind == SourceKind::Random ? Json(std::string(kRandomStateGenerator))
                                                   : Json(nullptr);
  doc["params"] = to_json(params);
  doc["grid"] = {{"min", grid.build(params).front()},
                 {"max", grid.build(params).back()},
                 {"n", grid.n}};
  doc["status"] = o.status;
  doc["error"] = o.status == "ok" ? Json(nullptr) : Json(o.error);
  if (o.trace) {
    doc["trace"] = {{"sector_used", o.trace->sector_used},
                    {"dropped_fraction", json_number(o.trace->dropped_fraction)},
                    {"max_imag_residue", json_number(o.trace->max_imag_residue)},
                    {"perturbed_points", o.trace->perturbed_points}};
  } else {
    doc["trace"] = nullptr;
  }
  if (o.diagnostics) {
    const auto& d = *o.diagnostics;
    doc["fitA"] = to_json(d.fitA);
    doc["fitB"] = to_json(d.fitB);
    doc["diagnostics"] = {{"r", json_number(d.r)},
                          {"delta_bic", json_number(d.delta_bic)},
                          {"delta_aic", json_number(d.delta_aic)},
                          {"window", {{"lo", d.window.lo}, {"hi", d.window.hi}}},
                          {"gamma_estimate", json_number(d.gamma_estimate)}};
  } else {
    doc["fitA"] = nullptr;
    doc["fitB"] = nullptr;
    doc["diagnostics"] = nullptr;
  }
  return doc;
}

void write_trace_csv(const std::filesystem::path& path, const SpectrumTrace& t,
                     const EPDiagnostics* d) {
  CsvWriter csv(path, {"omega", "S", "S_fitA", "S_fitB"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double w = t.omegas[k];
    csv.cell(w).cell(t.values[k]);
    csv.cell(d ? eval_model(LineModel::A, d->fitA.params, w) : nan);
    csv.cell(d ? eval_model(LineModel::B, d->fitB.params, w) : nan);
    csv.end_row();
  }
  csv.close();
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg) {
  ensure_directory(cfg.out);
  const PointResult point = analyze_point(cfg.params, cfg.grid, cfg.sources, cfg.fit);
  const std::string tag = point_tag(cfg.params.j, cfg.params.p);

  int code = kOk;
  for (const auto& o : point.sources) {
    const std::string stem = "spectrum_" + tag + "_" + o.source.label();
    if (o.trace) {
      write_trace_csv(cfg.out / (stem + ".csv"), *o.trace,
                      o.diagnostics ? &*o.diagnostics : nullptr);
    }
    write_json(cfg.out / (stem + ".json"), source_json(o, point.params, cfg.grid));
    if (o.status != "ok") {
      report(tag, o);
      code = kNumericalError;
    }
  }
  return code;
}

// --------------------------------------------------------------- sweep

const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> header = {
      "p",          "j",          "source",       "seed",          "status",
      "r",          "delta_bic",  "delta_aic",    "fitA_a",        "fitA_omega0",
      "fitA_gamma", "fitA_c",     "fitA_rss",     "fitA_converged", "fitB_a",
      "fitB_omega0", "fitB_gamma", "fitB_c",      "fitB_b",        "fitB_rss",
      "fitB_converged", "n_points", "window_lo",  "window_hi",     "gamma_estimate",
      "dropped_fraction"};
  return header;
}

int cmd_sweep(const RunConfig& cfg) {
  ensure_directory(cfg.out);
  struct Task {
    double p;
    SpinLength j;
  };
  std::vector<Task> tasks;
  for (double p : cfg.sweep.p) {
    for (const auto& j : cfg.sweep.j) tasks.push_back({p, j});
  }
  std::vector<PointResult> results(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t k) {
    ModelParams mp = cfg.params;
    mp.p = tasks[k].p;
    mp.j = tasks[k].j;
    results[k] = analyze_point(mp, cfg.grid, cfg.sources, cfg.fit);
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  CsvWriter csv(cfg.out / "sweep.csv", sweep_header());
  for (const auto& point : results) {
    for (const auto& o : point.sources) {
      if (o.status != "ok") report(point_tag(point.params.j, point.params.p), o);
      const EPDiagnostics* d = o.diagnostics ? &*o.diagnostics : nullptr;
      csv.cell(point.params.p).cell(point.params.j.value()).cell(o.source.label());
      csv.cell(o.source.seed ? std::to_string(*o.source.seed) : std::string());
      csv.cell(o.status);
      csv.cell(d ? d->r : nan).cell(d ? d->delta_bic : nan).cell(d ? d->delta_aic : nan);
      csv.cell(d ? d->fitA.params.a : nan)
          .cell(d ? d->fitA.params.omega0 : nan)
          .cell(d ? d->fitA.params.gamma : nan)
          .cell(d ? d->fitA.params.c : nan)
          .cell(d ? d->fitA.rss : nan)
          .cell(d ? d->fitA.converged : false);
      csv.cell(d ? d->fitB.params.a : nan)
          .cell(d ? d->fitB.params.omega0 : nan)
          .cell(d ? d->fitB.params.gamma : nan)
          .cell(d ? d->fitB.params.c : nan)
          .cell(d ? d->fitB.params.b : nan)
          .cell(d ? d->fitB.rss : nan)
          .cell(d ? d->fitB.converged : false);
      csv.cell(static_cast<long long>(d ? d->fitA.n_points : 0))
          .cell(d ? d->window.lo : nan)
          .cell(d ? d->window.hi : nan)
          .cell(d ? d->gamma_estimate : nan)
          .cell(o.trace ? o.trace->dropped_fraction : nan);
      csv.end_row();
    }
  }
  csv.close();

  // r(p) and ΔBIC(p) per (j, source), ready to plot.
  for (std::size_t ji = 0; ji < cfg.sweep.j.size(); ++ji) {
    for (std::size_t si = 0; si < cfg.sources.size(); ++si) {
      char jtag[32];
      std::snprintf(jtag, sizeof jtag, "j%g", cfg.sweep.j[ji].value());
      CsvWriter series(cfg.out / ("sweep_series_" + std::string(jtag) + "_" +
                                  cfg.sources[si].label() + ".csv"),
                       {"p", "r", "delta_bic", "delta_aic", "status"});
      for (std::size_t pi = 0; pi < cfg.sweep.p.size(); ++pi) {
        const auto& o = results[pi * cfg.sweep.j.size() + ji].sources[si];
        const EPDiagnostics* d = o.diagnostics ? &*o.diagnostics : nullptr;
        series.cell(cfg.sweep.p[pi])
            .cell(d ? d->r : nan)
            .cell(d ? d->delta_bic : nan)
            .cell(d ? d->delta_aic : nan)
            .cell(o.status);
        series.end_row();
      }
      series.close();
    }
  }
  return kOk;
}

// ----------------------------------------------------------- synthetic

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json diagnostics_json(const EPDiagnostics& d) {
  return {{"fitA", to_json(d.fitA)},
          {"fitB", to_json(d.fitB)},
          {"diagnostics",
           {{"r", json_number(d.r)},
            {"delta_bic", json_number(d.delta_bic)},
            {"delta_aic", json_number(d.delta_aic)},
            {"window", {{"lo", d.window.lo}, {"hi", d.window.hi}}},
            {"gamma_estimate", json_number(d.gamma_estimate)}}}};
}

Json system_json(const JordanBlockSystem& sys) {
  const auto ab = alpha_beta(sys);
  const auto amp = induced_amplitudes(sys);
  return {{"lambda0", complex_json(sys.lambda0)},
          {"A_r0", complex_json(sys.A_r0)},
          {"A_r1", complex_json(sys.A_r1)},
          {"l0_B", complex_json(sys.l0_B)},
          {"l1_B", complex_json(sys.l1_B)},
          {"alpha", complex_json(ab.alpha)},
          {"beta", complex_json(ab.beta)},
          {"a", amp.a},
          {"b", amp.b},
          {"r_analytic", analytic_ep_weight(sys)}};
}

}  // namespace

int cmd_synthetic(const RunConfig& cfg) {
  ensure_directory(cfg.out);
  const auto& sy = cfg.synthetic;
  const std::vector<double> grid = uniform_grid(sy.grid_min, sy.grid_max, sy.grid_n);
  const Complex lambda0(-sy.gamma, sy.omega0);
  const double kappa = sy.r0 * sy.gamma / (1.0 - sy.r0);

  int code = kOk;
  auto demo = [&](const std::string& stem, const JordanBlockSystem& sys) {
    const SpectrumTrace t = jordan_trace(sys, grid);
    Json doc = {{"system", system_json(sys)}, {"status", "ok"}};
    std::optional<EPDiagnostics> d;
    try {
      d = ep_diagnostics(t, cfg.fit);
      const Json dj = diagnostics_json(*d);
      for (const auto& [k, v] : dj.items()) doc[k] = v;
    } catch (const std::exception& e) {
      doc["status"] = status_token(e);
      doc["error"] = e.what();
      std::cerr << "warning: " << stem << ": " << e.what() << '\n';
      code = kNumericalError;
    }
    write_trace_csv(cfg.out / (stem + ".csv"), t, d ? &*d : nullptr);
    write_json(cfg.out / (stem + ".json"), doc);
  };

  // Exact block, probe e0, source e0 + κ e1: α = 1, β = κ.
  demo("synthetic_jordan", JordanBlockSystem{lambda0, 1.0, 0.0, 1.0, kappa});
  // Source without ℓ1 overlap: the defective mode is present but invisible.
  demo("synthetic_beta0", JordanBlockSystem{lambda0, 1.0, 1.0, 1.0, 0.0});

  const double nan = std::numeric_limits<double>::quiet_NaN();
  CsvWriter csv(cfg.out / "synthetic_eps_sweep.csv",
                {"epsilon", "r", "delta_bic", "delta_aic", "fitB_a", "fitB_b", "fitB_gamma",
                 "fitA_converged", "fitB_converged", "status"});
  VectorXc probe(2);
  probe << 1.0, 0.0;
  VectorXc source(2);
  source << 1.0, kappa;
  for (double eps : sy.epsilon) {
    const auto gen = embed_jordan_in_liouvillian(lambda0, eps);
    std::optional<EPDiagnostics> d;
    std::string status = "ok";
    try {
      d = ep_diagnostics(generator_lineshape(gen.matrix, probe, source, grid), cfg.fit);
    } catch (const std::exception& e) {
      status = status_token(e);
      std::cerr << "warning: synthetic epsilon " << eps << ": " << e.what() << '\n';
      code = kNumericalError;
    }
    csv.cell(eps)
        .cell(d ? d->r : nan)
        .cell(d ? d->delta_bic : nan)
        .cell(d ? d->delta_aic : nan)
        .cell(d ? d->fitB.params.a : nan)
        .cell(d ? d->fitB.params.b : nan)
        .cell(d ? d->fitB.params.gamma : nan)
        .cell(d ? d->fitA.converged : false)
        .cell(d ? d->fitB.converged : false)
        .cell(status);
    csv.end_row();
  }
  csv.close();
  return code;
}

}  // namespace liouspec::cli
