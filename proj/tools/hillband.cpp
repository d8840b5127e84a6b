// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: model validation, discriminant scans, band
// edges, truncated-spectrum classification, tau sweeps, eigenfunction
// export and the finite-difference oracle check.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hillband/emit.hpp"
#include "hillband/model_config.hpp"
#include "hillband/oracle.hpp"
#include "hillband/truncated.hpp"

using namespace hillband;

namespace {

struct CommonOpts {
  std::string model_path;
  std::string output_path;  // empty: derive from subcommand name
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--model", opts.model_path, "model definition file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", opts.output_path, "artifact path (default <subcommand>.<format>)");
  cmd->add_option("--format", opts.format, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}));
}

nlohmann::json meta_block(const PeriodicCoefficients& coeffs,
                          const std::string& command) {
  return nlohmann::json{
      {"model_hash", model_hash(coeffs)},
      {"model", canonical_model_string(coeffs)},
      {"version", kVersion},
      {"command", command},
      {"tolerances",
       {{"edge_bisection_rel", 1e-10},
        {"root_bisection_rel", 1e-10},
        {"degenerate_gap_width_rel", 1e-8},
        {"ode_rel", 1e-14},
        {"ode_abs", 1e-16},
        {"oracle_bisection_rel", 1e-12}}},
  };
}

void write_artifact(const CommonOpts& opts, const std::string& subcommand,
                    const Table& table, nlohmann::json meta) {
  const std::string path =
      opts.output_path.empty() ? subcommand + "." + opts.format : opts.output_path;
  if (opts.format == "json") {
    write_file(path, to_json_records(table, std::move(meta)).dump(2) + "\n");
  } else {
    write_file(path, to_csv(table));
  }
  std::cout << "artifact written to " << path << "\n";
}

PeriodicCoefficients load_validated(const CommonOpts& opts) {
  PeriodicCoefficients coeffs = load_model_file(opts.model_path);
  const ValidationReport rep = validate(coeffs);
  if (!rep.ok) {
    std::string msg = "model validation failed:";
    for (const auto& issue : rep.issues)
      msg += "\n  " + issue.field + ": " + issue.message;
    throw ValidationError(msg);
  }
  return coeffs;
}

const char* gap_kind_name(GapKind kind) {
  return kind == GapKind::semi_periodic ? "semi_periodic" : "periodic";
}

// ---- subcommand bodies -------------------------------------------------

int run_validate(const CommonOpts& opts) {
  const PeriodicCoefficients coeffs = load_model_file(opts.model_path);
  const ValidationReport rep = validate(coeffs);
  Table table;
  table.header = {"field", "message"};
  for (const auto& issue : rep.issues) table.rows.push_back({issue.field, issue.message});
  nlohmann::json meta = meta_block(coeffs, "validate");
  meta["ok"] = rep.ok;
  meta["s_min"] = rep.s_min;
  meta["p_min"] = rep.p_min;
  write_artifact(opts, "validate", table, meta);
  if (rep.ok) {
    std::cout << "model ok: " << canonical_model_string(coeffs)
              << "\n  witnessed s_min = " << format_g17(rep.s_min)
              << ", p_min = " << format_g17(rep.p_min) << "\n";
    return 0;
  }
  std::cout << "model INVALID (" << rep.issues.size() << " issue(s)):\n";
  for (const auto& issue : rep.issues)
    std::cout << "  " << issue.field << ": " << issue.message << "\n";
  return 1;
}

int run_discriminant_scan(const CommonOpts& opts, double lmin, double lmax,
                          int points) {
  if (points < 2) throw ValidationError("--points must be >= 2");
  if (!(lmin < lmax)) throw ValidationError("--lmin must be below --lmax");
  const PeriodicCoefficients coeffs = load_validated(opts);
  std::vector<double> lambdas(points);
  for (int i = 0; i < points; ++i)
    lambdas[i] = lmin + (lmax - lmin) * static_cast<double>(i) / (points - 1);
  lambdas.back() = lmax;
  const std::vector<double> d = discriminant_scan(coeffs, lambdas);
  Table table;
  table.header = {"lambda", "D"};
  for (int i = 0; i < points; ++i)
    table.rows.push_back({format_g17(lambdas[i]), format_g17(d[i])});
  write_artifact(opts, "discriminant-scan", table, meta_block(coeffs, "discriminant-scan"));
  std::cout << "scanned D(lambda) at " << points << " points in [" << lmin << ", "
            << lmax << "]\n";
  return 0;
}

int run_band_edges(const CommonOpts& opts, int gaps) {
  const PeriodicCoefficients coeffs = load_validated(opts);
  const BandEdges edges = find_band_edges(coeffs, gaps);
  Table table;
  table.header = {"index", "kind", "lambda", "degenerate"};
  auto gap_flag = [&edges](GapKind kind, int index) {
    // an edge is degenerate when its gap is
    const int g = (kind == GapKind::semi_periodic)
                      ? (index % 2 == 0 ? index : index - 1)
                      : (index % 2 == 1 ? index : index - 1);
    return (g >= 0 && g < edges.n_gaps() && edges.gap_degenerate[g]) ? "1" : "0";
  };
  table.rows.push_back({"0", "nu", format_g17(edges.nu[0]), "0"});
  for (int g = 0; g < edges.n_gaps(); ++g) {
    if (g % 2 == 0) {
      table.rows.push_back({std::to_string(g), "mu", format_g17(edges.mu[g]),
                            gap_flag(GapKind::semi_periodic, g)});
      table.rows.push_back({std::to_string(g + 1), "mu", format_g17(edges.mu[g + 1]),
                            gap_flag(GapKind::semi_periodic, g + 1)});
    } else {
      table.rows.push_back({std::to_string(g), "nu", format_g17(edges.nu[g]),
                            gap_flag(GapKind::periodic, g)});
      table.rows.push_back({std::to_string(g + 1), "nu", format_g17(edges.nu[g + 1]),
                            gap_flag(GapKind::periodic, g + 1)});
    }
  }
  write_artifact(opts, "band-edges", table, meta_block(coeffs, "band-edges"));
  const SpectralPartition part = make_partition(edges);
  std::cout << "found " << edges.n_gaps() << " gap(s); bands:\n";
  for (const BandInterval& b : part.bands)
    std::cout << "  band " << b.index << ": (" << format_g17(b.lo) << ", "
              << format_g17(b.hi) << ")\n";
  for (const GapInterval& g : part.gaps)
    std::cout << "  gap " << g.index << " [" << gap_kind_name(g.kind) << "]: ["
              << format_g17(g.lo) << ", " << format_g17(g.hi) << "]"
              << (g.degenerate ? " degenerate" : "") << "\n";
  return 0;
}

int run_band_states(const CommonOpts& opts, int band, int cells) {
  const PeriodicCoefficients coeffs = load_validated(opts);
  const SpectralPartition part = make_partition(find_band_edges(coeffs, band + 1));
  const std::vector<BandState> states = band_states(coeffs, part, band, cells);
  Table table;
  table.header = {"j", "lambda"};
  for (const BandState& st : states)
    table.rows.push_back({std::to_string(st.j), format_g17(st.lambda)});
  write_artifact(opts, "band-states", table, meta_block(coeffs, "band-states"));
  std::cout << states.size() << " band state(s) in band " << band << " for N=" << cells
            << "\n";
  for (const BandState& st : states)
    std::cout << "  j=" << st.j << "  lambda=" << format_g17(st.lambda) << "\n";
  return 0;
}

int run_gap_states(const CommonOpts& opts, int gap, double tau) {
  const PeriodicCoefficients coeffs = load_validated(opts);
  const SpectralPartition part = make_partition(find_band_edges(coeffs, gap + 1));
  const GapState st = gap_state(coeffs, part.gaps.at(gap), tau);
  Table table;
  table.header = {"gap_index", "kind", "tau", "lambda", "rho", "subtype"};
  table.rows.push_back({std::to_string(st.gap_index), gap_kind_name(st.kind),
                        format_g17(tau), format_g17(st.lambda), format_g17(st.rho),
                        subtype_name(st.subtype)});
  write_artifact(opts, "gap-states", table, meta_block(coeffs, "gap-states"));
  std::cout << "gap " << gap << " state at tau=" << format_g17(tau) << ": lambda="
            << format_g17(st.lambda) << " rho=" << format_g17(st.rho) << " ("
            << subtype_name(st.subtype) << ")\n";
  return 0;
}

int run_spectrum(const CommonOpts& opts, double tau, int cells, int bands) {
  const PeriodicCoefficients coeffs = load_validated(opts);
  const SpectralPartition part = make_partition(find_band_edges(coeffs, bands));
  const TruncationConfig cfg{tau, cells};
  const TruncatedSpectrum spec = classify_spectrum(coeffs, part, cfg, bands);
  Table table;
  table.header = {"lambda", "type", "band_or_gap_index", "j_or_subtype", "rho_or_blank"};
  for (const auto& entry : spec.merged()) {
    if (entry.is_gap_state) {
      const GapState& gs = spec.gap_states[entry.list_index];
      table.rows.push_back({format_g17(gs.lambda), "gap", std::to_string(gs.gap_index),
                            subtype_name(gs.subtype), format_g17(gs.rho)});
    } else {
      const BandState& bs = spec.band_states[entry.list_index];
      table.rows.push_back({format_g17(bs.lambda), "band", std::to_string(bs.band_index),
                            std::to_string(bs.j), ""});
    }
  }
  write_artifact(opts, "spectrum", table, meta_block(coeffs, "spectrum"));
  std::cout << "truncated spectrum (tau=" << format_g17(tau) << ", N=" << cells
            << ", bands 0.." << bands - 1 << "): " << spec.band_states.size()
            << " band state(s), " << spec.gap_states.size() << " gap state(s)\n";
  return 0;
}

int run_tau_sweep(const CommonOpts& opts, int gap, int points, double tau0) {
  const PeriodicCoefficients coeffs = load_validated(opts);
  const SpectralPartition part = make_partition(find_band_edges(coeffs, gap + 1));
  const TauSweep sweep = tau_sweep(coeffs, part.gaps.at(gap), tau0, points);
  Table table;
  table.header = {"tau", "lambda", "subtype"};
  for (std::size_t i = 0; i < sweep.tau_grid.size(); ++i)
    table.rows.push_back({format_g17(sweep.tau_grid[i]), format_g17(sweep.lambdas[i]),
                          subtype_name(sweep.subtypes[i])});
  nlohmann::json meta = meta_block(coeffs, "tau-sweep");
  meta["extrema_count"] = sweep.extrema_count;
  auto touches_json = [](const std::vector<EdgeTouch>& touches) {
    nlohmann::json arr = nlohmann::json::array();
    for (const EdgeTouch& t : touches)
      arr.push_back({{"tau", t.tau}, {"lambda", t.lambda}});
    return arr;
  };
  meta["lower_edge_touches"] = touches_json(sweep.lower_touches);
  meta["upper_edge_touches"] = touches_json(sweep.upper_touches);
  write_artifact(opts, "tau-sweep", table, meta);
  std::cout << "gap " << gap << " sweep over [" << format_g17(tau0) << ", "
            << format_g17(tau0 + coeffs.period) << "]: " << sweep.extrema_count
            << " up-down pair(s), " << sweep.lower_touches.size()
            << " lower / " << sweep.upper_touches.size() << " upper edge touch(es)\n";
  for (const EdgeTouch& t : sweep.lower_touches)
    std::cout << "  lower edge touch at tau=" << format_g17(t.tau) << "\n";
  for (const EdgeTouch& t : sweep.upper_touches)
    std::cout << "  upper edge touch at tau=" << format_g17(t.tau) << "\n";
  return 0;
}

int run_eigenfunction(const CommonOpts& opts, double lambda, double tau, int cells,
                      int grid_per_cell) {
  const PeriodicCoefficients coeffs = load_validated(opts);
  const TruncationConfig cfg{tau, cells};
  const TruncatedEigenfunction ef = eigenfunction(coeffs, lambda, cfg, grid_per_cell);
  Table table;
  table.header = {"x", "y", "py"};
  for (std::size_t i = 0; i < ef.samples.grid.size(); ++i)
    table.rows.push_back({format_g17(ef.samples.grid[i]), format_g17(ef.samples.y[i]),
                          format_g17(ef.samples.py[i])});
  nlohmann::json meta = meta_block(coeffs, "eigenfunction");
  meta["endpoint_residual"] = ef.endpoint_residual;
  meta["first_cell_mass"] = ef.first_cell_mass;
  meta["last_cell_mass"] = ef.last_cell_mass;
  write_artifact(opts, "eigenfunction", table, meta);
  std::cout << "eigenfunction at lambda=" << format_g17(lambda) << " on [" << tau
            << ", " << tau + cells * coeffs.period << "]\n  endpoint residual "
            << format_g17(ef.endpoint_residual) << "; first/last cell mass "
            << format_g17(ef.first_cell_mass) << " / " << format_g17(ef.last_cell_mass)
            << "\n";
  return 0;
}

int run_oracle_check(const CommonOpts& opts, double tau, int cells, int bands,
                     int gridsize, bool richardson, double rel_tol) {
  const PeriodicCoefficients coeffs = load_validated(opts);
  if (gridsize < oracle::recommended_min_points(cells))
    throw ValidationError("--gridsize below the recommended minimum of 64 per cell");
  const SpectralPartition part = make_partition(find_band_edges(coeffs, bands));
  const TruncationConfig cfg{tau, cells};
  const TruncatedSpectrum spec = classify_spectrum(coeffs, part, cfg, bands);
  const auto lambdas = spec.all_lambdas_sorted();
  // cap halfway between the top predicted state and the next gap
  const double cap = 0.5 * (lambdas.back() + part.gaps[bands - 1].lo);
  const std::vector<double> oracle_vals =
      richardson ? oracle::eigenvalues_below_richardson(
                       coeffs, tau, cells, gridsize, oracle::BoundaryKind::dirichlet, cap)
                 : oracle::eigenvalues_below(
                       oracle::assemble(coeffs, tau, cells, gridsize,
                                        oracle::BoundaryKind::dirichlet),
                       cap);
  const oracle::ComparisonReport rep = oracle::compare(oracle_vals, spec, rel_tol);

  Table table;
  table.header = {"oracle", "predicted", "rel_err"};
  for (const auto& row : rep.rows)
    table.rows.push_back({format_g17(row.oracle_value), format_g17(row.predicted),
                          format_g17(row.rel_err)});
  nlohmann::json meta = meta_block(coeffs, "oracle-check");
  meta["status"] = rep.pass ? "PASS" : "FAIL";
  meta["worst_rel_err"] = rep.worst_rel_err;
  meta["count_oracle"] = rep.count_oracle;
  meta["count_predicted"] = rep.count_predicted;
  meta["rel_tol"] = rel_tol;
  meta["unmatched"] = rep.unmatched;
  write_artifact(opts, "oracle-check", table, meta);

  std::cout << (rep.pass ? "PASS" : "FAIL") << ": oracle " << rep.count_oracle
            << " vs predicted " << rep.count_predicted << " state(s), worst rel err "
            << format_g17(rep.worst_rel_err) << " (tol " << format_g17(rel_tol) << ")\n";
  if (!rep.unmatched.empty()) {
    std::cout << "unmatched eigenvalue(s):";
    for (double v : rep.unmatched) std::cout << " " << format_g17(v);
    std::cout << "\n";
  }
  return rep.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of Hill's equation truncated to whole periods with "
               "Dirichlet ends: band structure, band states, gap (surface) "
               "states and a finite-difference cross-check"};
  app.require_subcommand(1);

  CommonOpts opts;
  double lmin = -1, lmax = 10, tau = 0, tau0 = 0, lambda = 0;
  double rel_tol = 1e-4;
  int points = 256, gaps = 1, band = 0, cells = 4, gap = 0, bands = 1;
  int gridsize = 4096, grid_per_cell = 256;
  bool no_richardson = false;

  CLI::App* c_validate = app.add_subcommand("validate", "check the model definition");
  add_common(c_validate, opts);

  CLI::App* c_scan = app.add_subcommand("discriminant-scan", "tabulate D(lambda)");
  add_common(c_scan, opts);
  c_scan->add_option("--lmin", lmin)->required();
  c_scan->add_option("--lmax", lmax)->required();
  c_scan->add_option("--points", points)->required()->check(CLI::PositiveNumber);

  CLI::App* c_edges = app.add_subcommand("band-edges", "locate band edges nu_n, mu_n");
  add_common(c_edges, opts);
  c_edges->add_option("--gaps", gaps)->required()->check(CLI::PositiveNumber);

  CLI::App* c_bstates = app.add_subcommand("band-states", "the N-1 states of one band");
  add_common(c_bstates, opts);
  c_bstates->add_option("--band", band)->required()->check(CLI::NonNegativeNumber);
  c_bstates->add_option("--cells", cells)->required()->check(CLI::PositiveNumber);

  CLI::App* c_gstates = app.add_subcommand("gap-states", "the single state of one gap");
  add_common(c_gstates, opts);
  c_gstates->add_option("--gap", gap)->required()->check(CLI::NonNegativeNumber);
  c_gstates->add_option("--tau", tau)->required();

  CLI::App* c_spec = app.add_subcommand("spectrum", "classified truncated spectrum");
  add_common(c_spec, opts);
  c_spec->add_option("--tau", tau)->required();
  c_spec->add_option("--cells", cells)->required()->check(CLI::PositiveNumber);
  c_spec->add_option("--bands", bands)->required()->check(CLI::PositiveNumber);

  CLI::App* c_sweep = app.add_subcommand("tau-sweep", "gap state as a function of tau");
  add_common(c_sweep, opts);
  c_sweep->add_option("--gap", gap)->required()->check(CLI::NonNegativeNumber);
  c_sweep->add_option("--points", points)->required()->check(CLI::PositiveNumber);
  c_sweep->add_option("--tau0", tau0, "sweep start (default 0)");

  CLI::App* c_eig = app.add_subcommand("eigenfunction", "sample one eigenfunction");
  add_common(c_eig, opts);
  c_eig->add_option("--lambda", lambda)->required();
  c_eig->add_option("--tau", tau)->required();
  c_eig->add_option("--cells", cells)->required()->check(CLI::PositiveNumber);
  c_eig->add_option("--grid-per-cell", grid_per_cell)->check(CLI::PositiveNumber);

  CLI::App* c_oracle = app.add_subcommand("oracle-check",
                                          "compare against the finite-difference oracle");
  add_common(c_oracle, opts);
  c_oracle->add_option("--tau", tau)->required();
  c_oracle->add_option("--cells", cells)->required()->check(CLI::PositiveNumber);
  c_oracle->add_option("--bands", bands)->required()->check(CLI::PositiveNumber);
  c_oracle->add_option("--gridsize", gridsize)->required()->check(CLI::PositiveNumber);
  c_oracle->add_flag("--no-richardson", no_richardson,
                     "skip Richardson extrapolation over (M, 2M)");
  c_oracle->add_option("--rel-tol", rel_tol, "PASS threshold (default 1e-4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(c_validate)) return run_validate(opts);
    if (app.got_subcommand(c_scan)) return run_discriminant_scan(opts, lmin, lmax, points);
    if (app.got_subcommand(c_edges)) return run_band_edges(opts, gaps);
    if (app.got_subcommand(c_bstates)) return run_band_states(opts, band, cells);
    if (app.got_subcommand(c_gstates)) return run_gap_states(opts, gap, tau);
    if (app.got_subcommand(c_spec)) return run_spectrum(opts, tau, cells, bands);
    if (app.got_subcommand(c_sweep)) return run_tau_sweep(opts, gap, points, tau0);
    if (app.got_subcommand(c_eig))
      return run_eigenfunction(opts, lambda, tau, cells, grid_per_cell);
    if (app.got_subcommand(c_oracle)) {
      // the oracle artifact is a report; default it to JSON
      if (!c_oracle->count("--format")) opts.format = "json";
      return run_oracle_check(opts, tau, cells, bands, gridsize, !no_richardson, rel_tol);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: selector out of range: " << e.what() << "\n";
    return 1;
  } catch (const ComputationError& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
