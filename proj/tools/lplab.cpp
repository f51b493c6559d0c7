// lplab: batch driver for the L^p spectral triple laboratory.
//
// Subcommands: norm | group | uhf | metric | check. Every run is seeded and
// reproducible; reports carry both ends of every norm interval.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lptriple/check.hpp"
#include "lptriple/grouptriple.hpp"
#include "lptriple/io.hpp"
#include "lptriple/pspace.hpp"
#include "lptriple/qmetric.hpp"
#include "lptriple/tensor.hpp"
#include "lptriple/uhftriple.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitCheckFailed = 4;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list(s)) out.push_back(int(v));
  return out;
}

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string p_list = "2";
  bool cap_override = false;

  std::vector<lpt::PExponent> exponents() const {
    const auto vals = parse_list(p_list);
    if (vals.empty()) {
      throw lpt::ValidationError("p list must be nonempty");
    }
    std::vector<lpt::PExponent> ps;
    for (double v : vals) ps.emplace_back(v);
    return ps;
  }
  fs::path out() const {
    fs::create_directories(out_dir);
    return out_dir;
  }
};

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw lpt::ValidationError("cannot write " + path.string());
  f << content;
}

void write_plot_series(const fs::path& path,
                       const std::vector<std::pair<double, double>>& xy) {
  std::ostringstream out;
  for (const auto& [x, y] : xy) {
    out << fmt(x) << ' ' << fmt(y) << '\n';
  }
  write_text(path, out.str());
}

lpt::GroupModel parse_group(const std::string& name) {
  if (name == "z") return lpt::GroupModel::integers();
  if (name.rfind("lattice", 0) == 0) {
    return lpt::GroupModel::lattice(std::stoi(name.substr(7)));
  }
  if (name.rfind("free", 0) == 0) {
    return lpt::GroupModel::free_group(std::stoi(name.substr(4)));
  }
  if (name.rfind("cyclic", 0) == 0) {
    return lpt::GroupModel::cyclic(std::stoi(name.substr(6)));
  }
  throw lpt::ValidationError("unknown group: " + name +
                             " (use z, latticeD, freeK, cyclicM)");
}

lpt::State parse_state(const std::string& spec, const lpt::UHFTower& tower) {
  if (spec == "trace") return lpt::State::trace(tower);
  if (spec.rfind("point:", 0) == 0) {
    return lpt::State::point(tower, std::stol(spec.substr(6)));
  }
  return lpt::io::read_state_file(spec, tower);
}

// ---------------------------------------------------------------- norm ----

int run_norm(const CommonOptions& common, const std::string& matrix_file) {
  const auto a = lpt::io::read_matrix_file(matrix_file);
  std::ostringstream csv;
  csv << "experiment,matrix,p,lower,upper,exact\n";
  json rows = json::array();
  for (const auto& p : common.exponents()) {
    lpt::NormBudget budget;
    budget.seed = common.seed;
    const auto est = lpt::op_norm(a, p, budget);
    csv << "norm," << matrix_file << ',' << fmt(p.value()) << ','
        << fmt(est.lower) << ',' << fmt(est.upper) << ','
        << (est.exact() ? "yes" : "no") << '\n';
    rows.push_back({{"p", p.value()},
                    {"lower", est.lower},
                    {"upper", est.upper},
                    {"exact", est.exact()}});
  }
  write_text(common.out() / "norm_report.csv", csv.str());
  write_text(common.out() / "norm_report.json",
             json{{"experiment", "norm"},
                  {"matrix", matrix_file},
                  {"seed", common.seed},
                  {"rows", rows}}
                 .dump(2) +
                 "\n");
  return kExitOk;
}

// --------------------------------------------------------------- group ----

int run_group(const CommonOptions& common, const std::string& group_name,
              double radius, const std::string& coeff_file) {
  const auto g = parse_group(group_name);
  const auto len = lpt::LengthFn::builtin(g);
  const std::size_t cap = common.cap_override ? 10000000 : 100000;
  const auto a = coeff_file.empty()
                     ? lpt::GroupAlgElem(g, {{g.generators().front(), 1.0}})
                     : lpt::io::read_coeffs_file(coeff_file, g);
  std::ostringstream csv;
  csv << "experiment,group,radius,p,comm_lower,comm_upper,analytic_bound,"
         "resolvent_residual\n";
  json rows = json::array();
  std::map<double, std::vector<std::pair<double, double>>> comm_series;
  std::vector<std::pair<double, double>> resid_series;
  const Eigen::Index dense_cap = common.cap_override ? 8192 : 2048;
  for (double r = 1.0; r <= radius; r += 1.0) {
    const auto trunc = lpt::ball(g, len, r, cap);
    if (trunc.space.size() > dense_cap) {
      throw lpt::ResourceError(
          "ball at radius " + fmt(r) + " has " +
          std::to_string(trunc.space.size()) +
          " elements, above the dense operator cap of " +
          std::to_string(dense_cap) +
          (common.cap_override ? "" : "; rerun with --cap-override"));
    }
    const auto [kf, resid] =
        lpt::resolvent_approx(trunc, len, lpt::ResolventMode::Squared);
    resid_series.emplace_back(r, resid);
    for (const auto& p : common.exponents()) {
      lpt::NormBudget budget;
      budget.seed = common.seed;
      const auto est =
          lpt::commutator_norm_est(g, a, trunc, len, p, budget);
      const double bound = lpt::commutator_bound(a, len, p);
      if (r == radius) {
        csv << "group," << group_name << ',' << fmt(r) << ','
            << fmt(p.value()) << ',' << fmt(est.lower) << ','
            << fmt(est.upper) << ',' << fmt(bound) << ',' << fmt(resid)
            << '\n';
        rows.push_back({{"radius", r},
                        {"p", p.value()},
                        {"comm_lower", est.lower},
                        {"comm_upper", est.upper},
                        {"analytic_bound", bound},
                        {"resolvent_residual", resid}});
      }
      comm_series[p.value()].emplace_back(r, est.lower);
    }
  }
  write_text(common.out() / "group_report.csv", csv.str());
  write_text(common.out() / "group_report.json",
             json{{"experiment", "group"},
                  {"group", group_name},
                  {"seed", common.seed},
                  {"rows", rows}}
                 .dump(2) +
                 "\n");
  for (const auto& [p, series] : comm_series) {
    write_plot_series(common.out() / ("group_comm_lower_vs_radius_p" +
                                      fmt(p) + ".dat"),
                      series);
  }
  write_plot_series(common.out() / "group_resolvent_residual_vs_radius.dat",
                    resid_series);
  return kExitOk;
}

// ----------------------------------------------------------------- uhf ----

lpt::AlphaSeq resolve_alpha(const std::string& alpha_spec,
                            const lpt::UHFTower& tower, lpt::PExponent p,
                            std::uint64_t seed) {
  if (alpha_spec == "auto") {
    lpt::SearchBudget budget;
    budget.seed = seed;
    return lpt::alpha_auto(lpt::cn_constants(tower, p, budget));
  }
  return lpt::AlphaSeq(parse_list(alpha_spec));
}

int run_uhf(const CommonOptions& common, const std::string& dims_spec,
            const std::string& alpha_spec) {
  const lpt::UHFSpecConfig spec{parse_int_list(dims_spec)};
  const Eigen::Index cap = common.cap_override ? 1 << 20 : 4096;
  const auto tower = lpt::build_tower(spec, cap);
  std::ostringstream csv;
  csv << "experiment,dims,p,kind,index,value\n";
  json rows = json::array();
  for (const auto& p : common.exponents()) {
    const auto alpha = resolve_alpha(alpha_spec, tower, p, common.seed);
    const auto d = lpt::dirac(tower, alpha);
    const auto eig = lpt::hermitian_eigenvalues(d);
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
      csv << "uhf,\"" << dims_spec << "\"," << fmt(p.value()) << ",eigenvalue,"
          << i << ',' << fmt(eig[i]) << '\n';
      rows.push_back(
          {{"p", p.value()}, {"kind", "eigenvalue"}, {"value", eig[i]}});
    }
    // strong convergence profile for a seeded random eta
    lpt::detail::Rng rng(lpt::detail::Rng::mix(common.seed, 0xF1));
    lpt::Vector eta(tower.total_dim());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      eta[i] = rng.complex_normal();
    }
    std::vector<std::pair<double, double>> series;
    for (int n = 0; n <= tower.levels(); ++n) {
      const lpt::Vector diff = tower.P[std::size_t(n)].entries * eta - eta;
      series.emplace_back(double(n),
                          lpt::vec_norm(lpt::PVector(tower.full_space(), diff),
                                        p));
    }
    write_plot_series(common.out() /
                          ("uhf_strong_convergence_p" + fmt(p.value()) +
                           ".dat"),
                      series);
  }
  write_text(common.out() / "uhf_report.csv", csv.str());
  write_text(common.out() / "uhf_report.json",
             json{{"experiment", "uhf"},
                  {"dims", dims_spec},
                  {"seed", common.seed},
                  {"rows", rows}}
                 .dump(2) +
                 "\n");
  return kExitOk;
}

// -------------------------------------------------------------- metric ----

int run_metric(const CommonOptions& common, const std::string& dims_spec,
               const std::string& alpha_spec, const std::string& omega_spec,
               const std::string& psi_spec) {
  const lpt::UHFSpecConfig spec{parse_int_list(dims_spec)};
  const auto tower = lpt::build_tower(spec);
  const auto omega = parse_state(omega_spec, tower);
  const auto psi = parse_state(psi_spec, tower);
  std::ostringstream csv;
  csv << "omega,psi,p,lower,upper,witness-file\n";
  json rows = json::array();
  for (const auto& p : common.exponents()) {
    const auto alpha = resolve_alpha(alpha_spec, tower, p, common.seed);
    lpt::SearchBudget budget;
    budget.seed = common.seed;
    const auto est = lpt::mk_lower(tower, alpha, omega, psi, p, budget);
    const auto cn = lpt::cn_constants(tower, p, budget);
    const double upper = lpt::mk_upper(alpha, cn);
    std::string witness_name = "-";
    if (est.witness.rows() == tower.total_dim()) {
      witness_name = "metric_witness_p" + fmt(p.value()) + ".txt";
      lpt::io::write_matrix_file(
          (common.out() / witness_name).string(),
          lpt::OperatorMatrix(tower.full_space(), tower.full_space(),
                              est.witness));
    }
    csv << omega_spec << ',' << psi_spec << ',' << fmt(p.value()) << ','
        << fmt(est.lower) << ',' << fmt(upper) << ',' << witness_name << '\n';
    rows.push_back({{"p", p.value()},
                    {"lower", est.lower},
                    {"upper", std::isinf(upper) ? json("inf") : json(upper)},
                    {"witness", witness_name}});
  }
  write_text(common.out() / "metric_report.csv", csv.str());
  write_text(common.out() / "metric_report.json",
             json{{"experiment", "metric"},
                  {"dims", dims_spec},
                  {"omega", omega_spec},
                  {"psi", psi_spec},
                  {"seed", common.seed},
                  {"rows", rows}}
                 .dump(2) +
                 "\n");
  return kExitOk;
}

// --------------------------------------------------------------- check ----

int run_check(const CommonOptions& common, bool quick) {
  lpt::CheckOptions options;
  options.quick = quick;
  options.seed = common.seed;
  const auto results = lpt::run_checks(options);
  std::ostringstream csv;
  csv << "suite,name,status\n";
  json failures = json::array();
  std::map<std::string, std::pair<int, int>> counts;
  for (const auto& r : results) {
    csv << r.suite << ',' << r.name << ','
        << (r.passed ? "pass" : "fail") << '\n';
    auto& [pass, total] = counts[r.suite];
    ++total;
    if (r.passed) {
      ++pass;
    } else {
      failures.push_back(
          {{"suite", r.suite}, {"name", r.name}, {"detail", r.detail}});
    }
  }
  write_text(common.out() / "check_report.csv", csv.str());
  json summary = json::array();
  for (const auto& [suite, pt] : counts) {
    summary.push_back(
        {{"suite", suite}, {"passed", pt.first}, {"total", pt.second}});
    std::cout << suite << ": " << pt.first << "/" << pt.second << " passed\n";
  }
  write_text(common.out() / "check_report.json",
             json{{"experiment", "check"},
                  {"quick", quick},
                  {"seed", common.seed},
                  {"summary", summary},
                  {"failures", failures}}
                 .dump(2) +
                 "\n");
  if (!failures.empty()) {
    std::cerr << json{{"error", "invariant violations"},
                      {"failures", failures}}
                     .dump()
              << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

// -------------------------------------------------------------- config ----

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lpt::ValidationError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

int dispatch_config(const std::string& path) {
  const auto kv = read_config(path);
  const auto get = [&](const std::string& key,
                       const std::string& fallback) -> std::string {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  CommonOptions common;
  common.seed = std::stoull(get("seed", "0"));
  common.out_dir = get("out", ".");
  common.p_list = get("p", "2");
  common.cap_override = get("cap-override", "false") == "true";
  const std::string kind = get("experiment", "");
  if (kind == "norm") return run_norm(common, get("matrix", ""));
  if (kind == "group") {
    return run_group(common, get("group", "z"),
                     std::stod(get("radius", "3")), get("coeffs", ""));
  }
  if (kind == "uhf") {
    return run_uhf(common, get("dims", "1,2,2"), get("alpha", "auto"));
  }
  if (kind == "metric") {
    return run_metric(common, get("dims", "1,2"), get("alpha", "0,1"),
                      get("omega", "point:0"), get("psi", "point:1"));
  }
  if (kind == "check") return run_check(common, get("quick", "false") == "true");
  throw lpt::ValidationError("config: unknown experiment kind: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lplab: finite truncations of L^p spectral triples"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  CommonOptions common;
  std::string config_file;
  app.add_option("--seed", common.seed, "deterministic run seed");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_option("--p", common.p_list, "comma-separated p exponents");
  app.add_flag("--cap-override", common.cap_override,
               "acknowledge and raise the resource caps");
  app.add_option("--config", config_file,
                 "config file (key = value, mirrors the subcommand flags)");

  auto* norm_cmd = app.add_subcommand("norm", "p->p norms of a matrix file");
  std::string matrix_file;
  norm_cmd->add_option("--matrix", matrix_file, "matrix file")->required();

  auto* group_cmd =
      app.add_subcommand("group", "group triple commutator experiments");
  std::string group_name = "z";
  double radius = 3.0;
  std::string coeff_file;
  group_cmd->add_option("--group", group_name, "z | latticeD | freeK | cyclicM");
  group_cmd->add_option("--radius", radius, "truncation radius");
  group_cmd->add_option("--coeffs", coeff_file,
                        "coefficient file (default: first generator)");

  auto* uhf_cmd = app.add_subcommand("uhf", "UHF tower experiments");
  std::string dims_spec = "1,2,2";
  std::string alpha_spec = "auto";
  uhf_cmd->add_option("--dims", dims_spec, "level dimensions d(0),...,d(M)");
  uhf_cmd->add_option("--alpha", alpha_spec,
                      "alpha values 0,a1,...,aM or 'auto'");

  auto* metric_cmd =
      app.add_subcommand("metric", "Connes-Rieffel metric between states");
  std::string m_dims = "1,2";
  std::string m_alpha = "0,1";
  std::string omega_spec = "point:0";
  std::string psi_spec = "point:1";
  metric_cmd->add_option("--dims", m_dims, "level dimensions");
  metric_cmd->add_option("--alpha", m_alpha, "alpha values or 'auto'");
  metric_cmd->add_option("--omega", omega_spec,
                         "state: point:I, trace, or a state file");
  metric_cmd->add_option("--psi", psi_spec,
                         "state: point:I, trace, or a state file");

  auto* check_cmd = app.add_subcommand("check", "run the invariant suite");
  bool quick = false;
  check_cmd->add_flag("--quick", quick, "smaller sample counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (!config_file.empty()) return dispatch_config(config_file);
    if (norm_cmd->parsed()) return run_norm(common, matrix_file);
    if (group_cmd->parsed()) {
      return run_group(common, group_name, radius, coeff_file);
    }
    if (uhf_cmd->parsed()) return run_uhf(common, dims_spec, alpha_spec);
    if (metric_cmd->parsed()) {
      return run_metric(common, m_dims, m_alpha, omega_spec, psi_spec);
    }
    if (check_cmd->parsed()) return run_check(common, quick);
    std::cerr << app.help();
    return kExitValidation;
  } catch (const lpt::ResourceError& e) {
    std::cerr << json{{"error", "resource"}, {"what", e.what()}}.dump()
              << '\n';
    return kExitResource;
  } catch (const lpt::DegeneracyError& e) {
    std::cerr << json{{"error", "degenerate"},
                      {"level", e.level()},
                      {"what", e.what()}}
                     .dump()
              << '\n';
    return kExitValidation;
  } catch (const lpt::ValidationError& e) {
    std::cerr << json{{"error", "validation"}, {"what", e.what()}}.dump()
              << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"what", e.what()}}.dump()
              << '\n';
    return kExitValidation;
  }
}
