#include "mbcp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "mbcp/csv.hpp"
#include "mbcp/errors.hpp"

namespace mbcp::cli {

Engine parse_engine(std::string_view name) {
  if (name == "auto") return Engine::automatic;
  if (name == "dp") return Engine::dp;
  if (name == "spectral") return Engine::spectral;
  if (name == "brute") return Engine::brute;
  throw UsageError("unknown engine '" + std::string(name) + "' (valid: auto, dp, spectral, brute)");
}

LatticeMeasure exact_law(const MBParams& params, Engine engine) {
  switch (engine) {
    case Engine::automatic:
      return params.n <= kAutoDpMaxN ? exact_dp(params) : exact_spectral(params);
    case Engine::dp:
      return exact_dp(params);
    case Engine::spectral:
      return exact_spectral(params);
    case Engine::brute:
      return brute_force(params);
  }
  return {};
}

TheoremId theorem_for(ApproximantId id) {
  switch (id) {
    case ApproximantId::cp_first:
      return TheoremId::T1;
    case ApproximantId::cp_compound_binomial:
      return TheoremId::C2;
    case ApproximantId::cp_second:
      return TheoremId::T2;
    case ApproximantId::scp_d2:
      return TheoremId::T3;
    case ApproximantId::scp_d2_corrected:
      return TheoremId::T4;
    case ApproximantId::scp_d3:
      return TheoremId::T5;
  }
  return TheoremId::T1;
}

std::string dist_header() { return "p,q_bar,p0,n,approximant,norm,distance,rate,ratio"; }

std::string to_csv_row(const DistRow& r) {
  std::ostringstream s;
  s << format_double(r.params.p) << ',' << format_double(r.params.q_bar) << ','
    << format_double(r.params.p0) << ',' << r.params.n << ',' << to_string(r.approximant) << ','
    << to_string(r.norm_kind) << ',' << format_double(r.distance) << ',' << format_double(r.rate)
    << ',' << format_double(r.ratio);
  return s.str();
}

DistRow cmd_dist(const MBParams& params, ApproximantId id, NormKind kind, Engine engine, double tol) {
  params.validate();
  const auto exact = exact_law(params, engine);
  const auto approx = build(id, params, tol);
  DistRow row;
  row.params = params;
  row.approximant = id;
  row.norm_kind = kind;
  row.distance = norm(exact - approx, kind);
  // cpb has only a total variation bound.
  if (id == ApproximantId::cp_compound_binomial && kind != NormKind::total_variation) {
    row.rate = std::numeric_limits<double>::quiet_NaN();
  } else {
    row.rate = rate_value(theorem_for(id), kind, params);
  }
  row.ratio = row.distance / row.rate;
  return row;
}

void SweepSpec::validate() const {
  if (p.empty() || q_bar.empty() || p0.empty() || n.empty()) {
    throw UsageError("sweep grid must have at least one value for each of p, q_bar, p0, n");
  }
  for (double pv : p)
    for (double qv : q_bar)
      for (double p0v : p0)
        for (auto nv : n) MBParams{pv, qv, p0v, nv}.validate();
}

std::vector<DistRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<MBParams> grid;
  auto ps = spec.p, qs = spec.q_bar, p0s = spec.p0;
  auto ns = spec.n;
  std::sort(ps.begin(), ps.end());
  std::sort(qs.begin(), qs.end());
  std::sort(p0s.begin(), p0s.end());
  std::sort(ns.begin(), ns.end());
  for (double pv : ps)
    for (double qv : qs)
      for (double p0v : p0s)
        for (auto nv : ns) grid.push_back(MBParams{pv, qv, p0v, nv});

  std::vector<DistRow> rows(grid.size());
  const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      rows[i] = cmd_dist(grid[i], spec.approximant, spec.norm_kind, spec.engine, spec.tol);
    }
  };
  std::vector<std::future<void>> tasks;
  for (std::size_t w = 1; w < std::min(workers, grid.size()); ++w) {
    tasks.push_back(std::async(std::launch::async, worker));
  }
  worker();
  for (auto& t : tasks) t.get();
  return rows;
}

void cmd_sweep(const SweepSpec& spec) {
  const auto rows = run_sweep(spec);
  std::ofstream out(spec.out_path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + spec.out_path + "' for writing");
  out << dist_header() << '\n';
  for (const auto& r : rows) out << to_csv_row(r) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing '" + spec.out_path + "'");
}

SharpReport cmd_sharp(const MBParams& params, Engine engine, double tol) {
  params.validate();
  SharpReport rep;
  rep.params = params;
  rep.constants = sharp_constants(params);
  const auto diff = exact_law(params, engine) - build(ApproximantId::cp_first, params, tol);
  const NormKind kinds[3] = {NormKind::total_variation, NormKind::local, NormKind::wasserstein};
  const double consts[3] = {rep.constants.a11, rep.constants.a12, rep.constants.a13};
  for (int i = 0; i < 3; ++i) {
    rep.rows[i].norm_kind = kinds[i];
    rep.rows[i].distance = norm(diff, kinds[i]);
    rep.rows[i].constant = consts[i];
    rep.rows[i].ratio = rep.rows[i].distance / consts[i];
  }
  rep.limit_ratio =
      rep.constants.a11 / (6.0 * params.q_bar / std::sqrt(2.0 * std::numbers::pi * std::numbers::e));
  return rep;
}

void print_sharp(std::ostream& out, const SharpReport& rep) {
  out << "# hypotheses " << (rep.constants.hypotheses_hold ? "hold" : "violated")
      << " (p <= 1/4, q_bar <= 1/30, n q_bar >= 1)\n";
  out << "p,q_bar,p0,n,norm,distance,constant,ratio\n";
  for (const auto& r : rep.rows) {
    out << format_double(rep.params.p) << ',' << format_double(rep.params.q_bar) << ','
        << format_double(rep.params.p0) << ',' << rep.params.n << ',' << to_string(r.norm_kind) << ','
        << format_double(r.distance) << ',' << format_double(r.constant) << ','
        << format_double(r.ratio) << '\n';
  }
  out << "# A11 / (6 q_bar / sqrt(2 pi e)) = " << format_double(rep.limit_ratio) << '\n';
}

InsuranceReport cmd_insurance(const Portfolio& pf, double tol) {
  const auto r = cp_distance_report(pf, tol);
  return {r.distance, r.bound_sum, r.distance / r.bound_sum};
}

void cmd_lemmas(std::ostream& out, const MBParams& params, double tol) {
  out << "check,k,t,p,lhs,rhs,holds\n";
  for (double p : {0.1, 0.3, 0.5}) {
    for (int k = 1; k <= 4; ++k) {
      for (double t : {1.0, 5.0, 25.0, 125.0}) {
        const auto c = smoothing_check(k, t, p, tol);
        out << "smoothing_tv," << k << ',' << format_double(t) << ',' << format_double(p) << ','
            << format_double(c.lhs) << ',' << format_double(c.rhs) << ','
            << (c.lhs <= c.rhs ? "yes" : "no") << '\n';
      }
    }
  }
  out << "\ncheck,norm,k,t,lhs,limit,residual,scaled_residual\n";
  for (auto kind : {NormKind::total_variation, NormKind::local, NormKind::wasserstein}) {
    for (int k = 0; k <= 3; ++k) {
      if (kind == NormKind::wasserstein && k == 0) continue;
      for (double t : {25.0, 100.0, 400.0, 1600.0}) {
        const auto c = sharpc_check(k, t, kind, tol);
        double order = (k + 1) / 2.0;
        if (kind == NormKind::local) order = k / 2.0 + 1.0;
        if (kind == NormKind::wasserstein) order = k / 2.0;
        out << "gaussian_limit," << to_string(kind) << ',' << k << ',' << format_double(t) << ','
            << format_double(c.lhs) << ',' << format_double(c.limit_term) << ','
            << format_double(c.residual) << ',' << format_double(c.residual * std::pow(t, order))
            << '\n';
      }
    }
  }
  if (params.satisfies_cond1()) {
    const auto l4 = lemma4_check(params);
    out << "\ncheck,quantity,value,bound\n";
    out << "eigen,norm_lambda2," << format_double(l4.lambda2_norm) << ',' << format_double(19.0 / 30.0) << '\n';
    out << "eigen,norm_lambda1_minus_I," << format_double(l4.lambda1_minus_identity) << ",0.1\n";
    out << "eigen,norm_w2," << format_double(l4.w2_norm) << ",7\n";
    const auto hinv = inverse_H(params, tol);
    out << "inverse_h,norm_h_inverse," << format_double(norm(hinv, NormKind::total_variation)) << ','
        << format_double(std::exp(2.0)) << '\n';
  }
}

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return 2;
  if (dynamic_cast<const DomainError*>(&e)) return 3;
  if (dynamic_cast<const ResourceError*>(&e)) return 4;
  if (dynamic_cast<const IoError*>(&e)) return 5;
  return 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markov binomial law: compound Poisson and signed compound Poisson approximations"};
  app.require_subcommand(1);

  double p = 0.3, q_bar = 0.01, p0 = 0.0, tol = kDefaultTol;
  std::int64_t n = 100;
  std::string approx_name = "cp1", norm_name = "tv", engine_name = "auto", out_path;
  auto add_chain = [&](CLI::App* sub) {
    sub->add_option("--p", p, "P(xi_i = 1 | xi_{i-1} = 1)");
    sub->add_option("--q-bar", q_bar, "P(xi_i = 1 | xi_{i-1} = 0)");
    sub->add_option("--p0", p0, "P(xi_0 = 1)");
    sub->add_option("--n", n, "number of summands");
    sub->add_option("--engine", engine_name, "exact engine: auto, dp, spectral, brute");
    sub->add_option("--tol", tol, "series tolerance");
  };

  auto* dist = app.add_subcommand("dist", "distance between the exact law and one approximant");
  add_chain(dist);
  dist->add_option("--approx", approx_name, "cp1, cpb, cp2, scp2, scp2c, scp3");
  dist->add_option("--norm", norm_name, "tv, local, wasserstein");
  std::string dump_path;
  dist->add_option("--out", dump_path, "also write the difference measure as k,mass CSV");

  auto* sweep = app.add_subcommand("sweep", "distance table over a parameter grid");
  std::vector<double> ps, qs, p0s;
  std::vector<std::int64_t> ns;
  sweep->add_option("--p", ps, "comma-separated p values")->delimiter(',')->required();
  sweep->add_option("--q-bar", qs, "comma-separated q_bar values")->delimiter(',')->required();
  sweep->add_option("--p0", p0s, "comma-separated p0 values")->delimiter(',')->required();
  sweep->add_option("--n", ns, "comma-separated n values")->delimiter(',')->required();
  sweep->add_option("--approx", approx_name, "cp1, cpb, cp2, scp2, scp2c, scp3");
  sweep->add_option("--norm", norm_name, "tv, local, wasserstein");
  sweep->add_option("--engine", engine_name, "exact engine: auto, dp, spectral, brute");
  sweep->add_option("--tol", tol, "series tolerance");
  sweep->add_option("--out", out_path, "output CSV path")->required();

  auto* sharp = app.add_subcommand("sharp", "distances against the asymptotically sharp constants");
  add_chain(sharp);

  auto* ins = app.add_subcommand("insurance", "individual risk model against its compound Poisson law");
  std::string portfolio_path, dump_prefix;
  ins->add_option("portfolio", portfolio_path, "CSV with header a,n,p,q_bar")->required();
  ins->add_option("--tol", tol, "series tolerance");
  ins->add_option("--out", dump_prefix, "write <prefix>_exact.csv and <prefix>_cp.csv");

  auto* lemmas = app.add_subcommand("lemmas", "smoothing, Gaussian-limit and eigen-norm ladders");
  add_chain(lemmas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    const MBParams params{p, q_bar, p0, n};
    if (dist->parsed()) {
      const auto id = parse_approximant(approx_name);
      const auto kind = parse_norm_kind(norm_name);
      const auto engine = parse_engine(engine_name);
      const auto row = cmd_dist(params, id, kind, engine, tol);
      out << dist_header() << '\n' << to_csv_row(row) << '\n';
      if (!dump_path.empty()) {
        std::ofstream f(dump_path);
        if (!f) throw IoError("cannot open '" + dump_path + "' for writing");
        write_measure_csv(f, exact_law(params, engine) - build(id, params, tol));
      }
    } else if (sweep->parsed()) {
      SweepSpec spec;
      spec.approximant = parse_approximant(approx_name);
      spec.norm_kind = parse_norm_kind(norm_name);
      spec.engine = parse_engine(engine_name);
      spec.p = ps;
      spec.q_bar = qs;
      spec.p0 = p0s;
      spec.n = ns;
      spec.tol = tol;
      spec.out_path = out_path;
      cmd_sweep(spec);
    } else if (sharp->parsed()) {
      print_sharp(out, cmd_sharp(params, parse_engine(engine_name), tol));
    } else if (ins->parsed()) {
      std::ifstream f(portfolio_path);
      if (!f) throw IoError("cannot open portfolio '" + portfolio_path + "'");
      const auto pf = read_portfolio_csv(f);
      const auto rep = cmd_insurance(pf, tol);
      out << "distance,bound_sum,ratio\n"
          << format_double(rep.distance) << ',' << format_double(rep.bound_sum) << ','
          << format_double(rep.ratio) << '\n';
      if (!dump_prefix.empty()) {
        std::ofstream fe(dump_prefix + "_exact.csv"), fc(dump_prefix + "_cp.csv");
        if (!fe || !fc) throw IoError("cannot write law dumps with prefix '" + dump_prefix + "'");
        write_measure_csv(fe, aggregate_exact(pf));
        write_measure_csv(fc, aggregate_cp(pf, tol));
      }
    } else if (lemmas->parsed()) {
      cmd_lemmas(out, params, tol);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}

}  // namespace mbcp::cli
