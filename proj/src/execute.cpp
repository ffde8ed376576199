#include "rtrap/execute.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <numbers>

#include "rtrap/analytic.hpp"
#include "rtrap/eigens.hpp"
#include "rtrap/error.hpp"
#include "rtrap/kernels.hpp"
#include "rtrap/output.hpp"
#include "rtrap/scattering.hpp"
#include "rtrap/svg.hpp"
#include "rtrap/sweep.hpp"

namespace rtrap {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

json value_json(const Value& v) {
  if (v.finite()) return v.value;
  return to_string(v.kind);
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"rms", f.rms}, {"points", f.points}};
}

class Writer {
 public:
  explicit Writer(const std::string& dir) : dir_(dir) {}

  void text(const std::string& name, const std::string& body) {
    const std::string path = (fs::path(dir_) / name).string();
    files_.push_back(path);
    write_text(path, body);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

  void rollback() {
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
    files_.clear();
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

json provenance(const RunConfig& c) {
  json cfg = json::object();
  for (const auto& [k, v] : c.echo) cfg[k] = v;
  return {{"version", kVersion},
          {"seed", c.model.seed},
          {"kernels", kernels::active().name},
          {"config", cfg}};
}

json model_json(const ModelInstance& m) {
  return {{"family", m.label},
          {"M", m.size()},
          {"mean_spacing", m.size() > 1 ? m.mean_spacing() : 0.0},
          {"total_weight", m.total_weight()},
          {"mirror_symmetric", m.mirrorSymmetric}};
}

std::vector<double> alpha_grid(const RunConfig& c) {
  const auto n = static_cast<std::size_t>(c.alphaSteps);
  return c.logSpacing ? log_grid(c.alphaStart, c.alphaEnd, n) : linear_grid(c.alphaStart, c.alphaEnd, n);
}

std::size_t widest(const std::vector<cplx>& z) {
  std::size_t b = 0;
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i].imag() < z[b].imag()) b = i;
  }
  return b;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

void sweep_plots(Writer& w, const ModelInstance& m, const SweepResult& r) {
  const auto& t = r.trajectories;
  const auto& a = t.alphaGrid;
  const std::size_t ns = t.states, ng = t.grid_size();

  Series cloud;
  cloud.points = true;
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t k = 0; k < ns; ++k) {
      cloud.x.push_back(t.at(g, k).real());
      cloud.y.push_back(-t.at(g, k).imag());
    }
  }
  w.text("plot_eigenvalues.svg",
         render_plot({"Eigenvalue trajectories", "Re lambda", "Gamma/2", true}, {cloud}));

  std::vector<Series> widths, npcs;
  for (std::size_t k = 0; k < ns; ++k) {
    Series s, q;
    const bool broad = k == r.broadState;
    s.color = q.color = broad ? "#d62728" : kPalette[k % 3];
    s.width = q.width = broad ? 2.0 : 0.6;
    for (std::size_t g = 0; g < ng; ++g) {
      s.x.push_back(a[g]);
      s.y.push_back(-t.at(g, k).imag());
      q.x.push_back(a[g]);
      q.y.push_back(r.npc_at(g, k));
    }
    widths.push_back(std::move(s));
    if (broad || ns <= 12 || k % (ns / 8) == 0) npcs.push_back(std::move(q));
  }
  w.text("plot_widths.svg", render_plot({"Widths (" + m.label + ")", "alpha", "Gamma/2", true}, widths));
  w.text("plot_npc.svg", render_plot({"Principal components", "alpha", "N^p", false}, npcs));
  Series b;
  b.x = a;
  b.y = r.B;
  b.width = 1.5;
  w.text("plot_b.svg", render_plot({"Mean bi-orthogonality norm", "alpha", "B", false}, {b}));
}

void run_model(const RunConfig& c, Writer& w) {
  const ModelInstance m = build_model(c.model);
  std::string csv = "state,energy,coupling,weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    csv += std::to_string(m.index_of(i)) + "," + format_double(m.energies[i]) + "," +
           format_double(m.couplings[i]) + "," + format_double(m.weight(i)) + "\n";
  }
  w.text("model.csv", csv);
  json traps = json::array();
  if (m.size() >= 2) {
    for (const auto& t : trapped_asymptotes(m)) traps.push_back({{"position", t.position}, {"g", t.coefficient}});
  }
  json j = {{"command", "model"}, {"model", model_json(m)}, {"trapped_asymptotes", traps},
            {"provenance", provenance(c)}};
  w.json_file("summary.json", j);
}

void run_sweep_cmd(const RunConfig& c, Writer& w) {
  const ModelInstance m = build_model(c.model);
  const auto grid = alpha_grid(c);
  const SweepResult r = run_sweep(m, grid, c.phiDegrees * kPi / 180.0);
  w.text("trajectories.csv", trajectories_csv(m, r));

  const auto& e = r.estimates;
  json coll = json::array();
  for (const auto& ev : r.trajectories.collisions) {
    coll.push_back({{"alpha", ev.alpha},
                    {"kind", to_string(ev.kind)},
                    {"states", {m.index_of(ev.first), m.index_of(ev.second)}}});
  }
  const auto& cr = e.critical;
  json j = {
      {"command", "sweep"},
      {"model", model_json(m)},
      {"phi_degrees", c.phiDegrees},
      {"alpha_grid", {{"start", grid.front()}, {"end", grid.back()}, {"points", grid.size()}}},
      {"estimates",
       {{"verdict", cr.verdict},
        {"alphaCritHat", cr.transition ? json(cr.alphaCritHat) : json(nullptr)},
        {"changePoint", cr.changePoint},
        {"spread", cr.transition ? json(cr.spread) : json(nullptr)},
        {"bPeak", cr.bPeak},
        {"slopeBelow", fit_json(e.slopeBelow)},
        {"slopeAbove", fit_json(e.slopeAbove)},
        {"alphaC1Hat", optional_json(e.collisions.alphaC1)},
        {"alphaC2Hat", optional_json(e.collisions.alphaC2)}}},
      {"broad_state", m.index_of(r.broadState)},
      {"broad_ambiguous", r.broadAmbiguous},
      {"gamma0_half_final", -r.trajectories.at(grid.size() - 1, r.broadState).imag()},
      {"collisions", coll},
      {"substeps", r.trajectories.substeps},
      {"provenance", provenance(c)}};
  w.json_file("summary.json", j);
  if (c.svg) sweep_plots(w, m, r);
}

void run_scatter(const RunConfig& c, Writer& w) {
  const ModelInstance m = build_model(c.model);
  const CouplingParam kp = CouplingParam::on_ray(c.alpha, c.phiDegrees * kPi / 180.0);
  const std::vector<cplx> lambdas = solve_at(m, kp);
  const std::size_t b = widest(lambdas);

  std::vector<double> grid;
  if (c.haveEnergyWindow) {
    const double sp = m.size() > 1 ? m.mean_spacing() : 1.0;
    const double margin = std::max({0.0, (m.energies.front() - c.energyMin) / sp,
                                     (c.energyMax - m.energies.back()) / sp}) + 1.0;
    for (double x : default_energy_grid(m, c.pointsPerSpacing, margin)) {
      if (x >= c.energyMin && x <= c.energyMax) grid.push_back(x);
    }
    if (grid.empty()) throw Error(ErrorCode::Validation, "energy window contains no grid points");
  } else {
    grid = default_energy_grid(m, c.pointsPerSpacing);
  }
  const CrossSectionProfile p = cross_section(m, kp, grid, c.window);
  std::string csv = "energy,raw,averaged\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_double(grid[i]) + "," + format_double(p.raw[i]) + "," + format_double(p.averaged[i]) + "\n";
  }
  w.text("cross_section.csv", csv);

  std::vector<EigenSolution> pairs;
  pairs.reserve(lambdas.size());
  for (const cplx l : lambdas) pairs.push_back(eigenvector(m, kp, l));
  const auto res = residues(m, kp, pairs);
  std::string rcsv = "state,re_lambda,im_lambda,re_gamma_sq,im_gamma_sq,width_ratio\n";
  for (std::size_t i = 0; i < res.size(); ++i) {
    rcsv += std::to_string(m.index_of(i)) + "," + format_double(lambdas[i].real()) + "," +
            format_double(lambdas[i].imag()) + "," + format_double(res[i].gammaSq.real()) + "," +
            format_double(res[i].gammaSq.imag()) + "," + format_double(res[i].widthRatio) + "\n";
  }
  w.text("residues.csv", rcsv);

  json j = {{"command", "scatter"},
            {"model", model_json(m)},
            {"alpha", kp.alpha},
            {"beta", kp.beta},
            {"window", c.window},
            {"grid_points", grid.size()},
            {"broad_state", m.index_of(b)},
            {"gamma0_half", -lambdas[b].imag()},
            {"support_fraction", m.size() > 0 ? support_fraction(p, m.energies.front(), m.energies.back()) : 0.0},
            {"provenance", provenance(c)}};
  w.json_file("summary.json", j);
  if (c.svg) {
    Series raw, avg;
    raw.x = avg.x = grid;
    raw.y = p.raw;
    avg.y = p.averaged;
    raw.color = "#aaaaaa";
    raw.width = 0.5;
    avg.color = "#d62728";
    avg.width = 1.5;
    w.text("plot_cross_section.svg",
           render_plot({"Cross section |1 - S|^2", "E", "|1 - S|^2", false}, {raw, avg}));
  }
}

void run_oracle(const RunConfig& c, Writer& w) {
  const ModelInstance m = build_model(c.model);
  const CouplingParam kp = CouplingParam::on_ray(c.alpha, c.phiDegrees * kPi / 180.0);
  const std::vector<cplx> tracked = solve_at(m, kp);
  std::vector<cplx> dense;
  for (const auto& p : dense_oracle(m, kp)) dense.push_back(p.lambda);
  const auto match = match_multisets(tracked, dense);
  std::string csv = "state,re_tracker,im_tracker,re_oracle,im_oracle,deviation\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < tracked.size(); ++i) {
    const cplx o = dense[match[i]];
    const double d = std::abs(tracked[i] - o);
    worst = std::max(worst, d);
    csv += std::to_string(m.index_of(i)) + "," + format_double(tracked[i].real()) + "," +
           format_double(tracked[i].imag()) + "," + format_double(o.real()) + "," + format_double(o.imag()) +
           "," + format_double(d) + "\n";
  }
  w.text("oracle.csv", csv);
  json j = {{"command", "oracle-check"}, {"model", model_json(m)}, {"alpha", kp.alpha}, {"beta", kp.beta},
            {"max_deviation", worst},   {"provenance", provenance(c)}};
  w.json_file("summary.json", j);
}

void run_analytic(const RunConfig& c, Writer& w) {
  const ModelInstance m = build_model(c.model);
  const auto grid = alpha_grid(c);
  const double tanPhi = std::tan(c.phiDegrees * kPi / 180.0);
  const auto& s = c.model;
  json rows = json::array();
  Series curve;
  for (double a : grid) {
    json row = {{"alpha", a}};
    switch (s.family) {
      case Family::IdealPicketFence:
      case Family::GoeUnfolded: {
        const Value v = tanPhi == 0.0 ? ideal_width(a) : complex_coupling_width(a, a * tanPhi);
        row["gamma"] = value_json(v);
        if (v.finite()) {
          curve.x.push_back(a);
          curve.y.push_back(v.value);
        }
        break;
      }
      case Family::DisturbedFence:
        row["mu"] = disturbed_mu_of_alpha(a, s.disturbance);
        break;
      case Family::PowerLaw:
      case Family::BoundedPowerLaw: {
        const Value crit = power_law_critical(s.couplingExponent, 2.0 * s.levelExponent);
        if (crit.finite() && a > crit.value && s.n >= 1) {
          const double g = compensated_broad_width(s.n, s.couplingExponent, a);
          row["broad_gamma"] = g;
          curve.x.push_back(a);
          curve.y.push_back(g);
        } else {
          row["broad_gamma"] = nullptr;
        }
        break;
      }
    }
    rows.push_back(row);
  }

  json j = {{"command", "analytic"}, {"model", model_json(m)}, {"phi_degrees", c.phiDegrees}};
  if (s.n >= 1) {
    const auto f = finite_n_estimates(s.n, 1.0);
    j["finite_n"] = {{"envelope_gamma_half_at_E1", value_json(f.envelopeGammaHalf)},
                     {"broad_width_at_crit", f.broadWidthAtCrit},
                     {"trace_sum_at_crit", f.traceSumAtCrit}};
  }
  if (s.family == Family::PowerLaw || s.family == Family::BoundedPowerLaw) {
    j["alpha_crit"] = value_json(power_law_critical(s.couplingExponent, 2.0 * s.levelExponent));
  } else {
    j["alpha_crit"] = 1.0 / kPi;
  }
  if (s.family == Family::DisturbedFence && s.disturbance != 0.0) {
    const auto fit = fit_disturbed_singularity(s.disturbance);
    j["singularity_fit"] = {{"exponent", fit.exponent}, {"prefactor", fit.prefactor}, {"rms", fit.residual}};
  }
  j["table"] = rows;
  j["provenance"] = provenance(c);
  w.json_file("summary.json", j);
  if (c.svg && !curve.x.empty()) {
    w.text("plot_analytic.svg", render_plot({"Closed-form width", "alpha", "Gamma", true}, {curve}));
  }
}

}  // namespace

RunOutcome execute(const RunConfig& config, std::ostream& err) {
  RunOutcome out;
  Writer w(config.outputDir);
  try {
    std::error_code ec;
    fs::create_directories(config.outputDir, ec);
    if (ec || !fs::is_directory(config.outputDir)) {
      throw Error(ErrorCode::Validation, "cannot create output directory '" + config.outputDir + "'");
    }
    switch (config.command) {
      case Command::Model: run_model(config, w); break;
      case Command::Sweep: run_sweep_cmd(config, w); break;
      case Command::Analytic: run_analytic(config, w); break;
      case Command::Scatter: run_scatter(config, w); break;
      case Command::OracleCheck: run_oracle(config, w); break;
    }
    out.files = w.files();
    return out;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    out.exitCode = is_validation(e) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    out.exitCode = 2;
  }
  w.rollback();
  return out;
}

RunOutcome execute_text(const std::string& configText, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_config(configText);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return {is_validation(e) ? 1 : 2, {}};
  }
  return execute(c, err);
}

}  // namespace rtrap
