#include "flagwave/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flagwave/atomic.hpp"
#include "flagwave/dyadic.hpp"
#include "flagwave/flagconv.hpp"
#include "flagwave/harness.hpp"
#include "flagwave/io.hpp"
#include "flagwave/parallel.hpp"
#include "flagwave/riesz.hpp"
#include "flagwave/simd.hpp"

namespace flagwave {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kCommands = {"selftest", "corpus",      "norms",  "pp",
                                            "decompose", "validate", "reconstruct", "journe",
                                            "schema"};

void Report::check_le(const std::string& name, double value, double limit) {
  checks.push_back({name, value, limit, "<=", value <= limit});
}

void Report::check_ge(const std::string& name, double value, double limit) {
  checks.push_back({name, value, limit, ">=", value >= limit});
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

json Report::to_json() const {
  json j;
  j["command"] = command;
  j["status"] = status;
  j["message"] = message;
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"limit", c.limit},
                           {"relation", c.relation},
                           {"passed", c.passed}});
  j["artifacts"] = artifacts;
  return j;
}

namespace {

double rel_l2(const GridFunction& a, const GridFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double energy(const GridFunction& f) {
  double e = 0.0;
  for (double v : f.values()) e += v * v;
  return e * f.lattice().cell_volume();
}

std::vector<CorpusMember> corpus_of(const RunConfig& c) { return gen_corpus(c.corpus, c.lattice); }

void write_csv(Report& r, const fs::path& dir, const std::string& name, const std::string& text) {
  write_text(dir / name, text);
  r.artifacts.push_back(name);
}

void write_doc(Report& r, const fs::path& dir, const std::string& name, const json& j) {
  write_json(dir / name, j);
  r.artifacts.push_back(name);
}

void cmd_selftest(const RunConfig& c, Report& r, const fs::path& out) {
  CorpusSpec probe = c.corpus;
  probe.flag_gaussian = 2;
  probe.band_limited = 1;
  probe.synthetic_atom = 0;
  probe.variants = 0;
  const auto members = gen_corpus(probe, c.lattice);
  const auto grid = c.scale_grid();
  const auto& lat = c.lattice;
  const double tol = c.selftest_tolerance;
  const double r_min = 2.0 * std::acos(-1.0) / lat.L;
  const double t_max = 1.05 * 28.0 / (r_min * r_min);
  json detail = json::array();
  for (const auto& m : members) {
    const auto& f = m.f;
    GridFunction inv(lat);
    for (int j = 1; j <= lat.dims(); ++j) {
      auto g = apply_riesz_first(apply_riesz_first(f, j), j);
      for (std::size_t i = 0; i < inv.size(); ++i) inv[i] += g[i];
    }
    GridFunction neg(lat);
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -f[i];
    const double involution = rel_l2(inv, neg);

    double iso = 0.0, heat = 0.0;
    for (int j = 1; j <= lat.dims(); ++j)
      for (int k = 1; k <= lat.m; ++k) {
        auto R = apply_riesz(f, j, k);
        iso += energy(R);
        heat = std::max(heat, rel_l2(riesz_via_heat(f, j, k, t_max), R));
      }
    const double isometry = std::abs(iso / energy(f) - 1.0);

    const auto lp = build_lp_pair(Calibration::kDiscretelyRenormalized);
    const double calderon =
        rel_l2(calderon_reconstruct(compute_coefficients(f, lp, grid), lp), f);
    const double cr_a = conjugate_system_residual(f, 0.25, 0.25);
    const double cr_b = conjugate_system_residual(f, 1.0, 1.0);

    r.check_le(m.name + ": riesz involution", involution, tol);
    r.check_le(m.name + ": riesz isometry", isometry, tol);
    r.check_le(m.name + ": riesz heat path", heat, 1e-6);
    r.check_le(m.name + ": calderon reconstruction", calderon, tol);
    r.check_le(m.name + ": conjugate system t=s=0.25", cr_a, tol);
    r.check_le(m.name + ": conjugate system t=s=1", cr_b, tol);
    detail.push_back({{"name", m.name},
                      {"riesz_involution", involution},
                      {"riesz_isometry", isometry},
                      {"riesz_heat_path", heat},
                      {"calderon", calderon},
                      {"conjugate_system", {cr_a, cr_b}}});
  }
  write_doc(r, out, "selftest.json", {{"members", detail}, {"isa", simd::isa_name(simd::active().isa)}});
}

void cmd_corpus(const RunConfig& c, Report& r, const fs::path& out) {
  const auto members = corpus_of(c);
  json list = json::array();
  fs::create_directories(out / "corpus");
  for (const auto& m : members) {
    auto mc = moment_check(m.f);
    write_grid_function(out / "corpus" / m.name, m.f, {{"family", family_name(m.family)}});
    r.artifacts.push_back("corpus/" + m.name + ".f64");
    auto v = m.f.values();
    list.push_back({{"name", m.name},
                    {"family", family_name(m.family)},
                    {"eta_zero_energy", mc.eta_zero_energy},
                    {"mean", mc.mean},
                    {"hash", hex64(fnv1a(v.data(), v.size_bytes()))}});
    r.check_le(m.name + ": eta = 0 energy", mc.eta_zero_energy, 1e-24);
  }
  write_doc(r, out, "corpus.json", {{"lattice", lattice_json(c.lattice)}, {"members", list}});
}

void cmd_norms(const RunConfig& c, Report& r, const fs::path& out) {
  const auto members = corpus_of(c);
  if (members.empty()) throw ConfigError("norms: empty corpus");
  auto table = norm_table(members, {c.scale_grid(), c.workers});
  write_csv(r, out, "norms.csv", table.to_csv());
  write_doc(r, out, "norms.json", table.to_json());
  int bad_max = 0, bad_pos = 0;
  for (const auto& row : table.rows) {
    bad_max += row.norms[3] > row.norms[2];
    bad_max += row.norms[5] > row.norms[4];
    for (double v : row.norms) bad_pos += !(v > 0.0 && std::isfinite(v));
  }
  r.check_le("C_emp", table.c_emp(), c.norms_c_emp_max);
  r.check_le("radial above non-tangential (rows)", bad_max, 0);
  r.check_le("nonpositive norms", bad_pos, 0);
}

void cmd_pp(const RunConfig& c, Report& r, const fs::path& out) {
  const auto members = corpus_of(c);
  const auto pair = c.kernel_pair();
  const auto grid = c.scale_grid();
  std::vector<PPResult> res(members.size());
  parallel_for(members.size(), c.workers,
               [&](std::size_t i) { res[i] = pp_check(members[i].f, pair, grid, c.pp_cell_shift); });
  std::ostringstream csv;
  csv << "name,sup_norm,inf_norm,ratio\n";
  double worst = 1.0;
  int bad = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double ratio = res[i].inf_norm > 0.0 ? res[i].sup_norm / res[i].inf_norm : INFINITY;
    csv << members[i].name << ',' << format_double(res[i].sup_norm) << ','
        << format_double(res[i].inf_norm) << ',' << format_double(ratio) << '\n';
    bad += res[i].sup_norm < res[i].inf_norm;
    worst = std::max(worst, ratio);
  }
  write_csv(r, out, "pp.csv", csv.str());
  write_doc(r, out, "pp.json", {{"kernel", pair.name()}, {"cell_shift", c.pp_cell_shift},
                                {"max_ratio", worst}});
  r.check_le("sup below inf (members)", bad, 0);
}

void cmd_decompose(const RunConfig& c, Report& r, const fs::path& out) {
  const auto members = corpus_of(c);
  const auto grid = c.scale_grid();
  // the hash covers what shapes the result, not where or how fast it runs
  json hashed = config_json(c);
  hashed.erase("workers");
  hashed.erase("output_dir");
  const std::string cfg = hashed.dump();
  std::vector<AtomicDecomposition> res(members.size());
  parallel_for(members.size(), c.workers,
               [&](std::size_t i) { res[i] = decompose(members[i].f, grid, c.atomic, cfg); });
  std::ostringstream csv;
  csv << "name,levels,lambda_sum,s_heat_l1,lambda_ratio,layer_cake,eps_trunc,"
         "reconstruction_error,atoms_passed\n";
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& d = res[i];
    const auto& name = members[i].name;
    write_decomposition(out / "decompositions" / name, d);
    r.artifacts.push_back("decompositions/" + name + "/manifest.json");
    int passed = 0;
    for (const auto& L : d.levels) passed += L.report.passed;
    const double ratio = d.s_heat_l1 > 0.0 ? d.lambda_sum() / d.s_heat_l1 : 0.0;
    csv << name << ',' << d.levels.size() << ',' << format_double(d.lambda_sum()) << ','
        << format_double(d.s_heat_l1) << ',' << format_double(ratio) << ','
        << format_double(d.layer_cake) << ',' << format_double(d.eps_trunc) << ','
        << format_double(d.reconstruction_error) << ',' << passed << '\n';
    r.check_le(name + ": reconstruction error", d.reconstruction_error,
               c.reconstruction_tolerance);
    r.check_ge(name + ": layer cake lower", d.layer_cake, d.s_heat_l1 - d.eps_trunc);
    r.check_le(name + ": layer cake upper", d.layer_cake, 2.0 * d.s_heat_l1);
  }
  write_csv(r, out, "decompose.csv", csv.str());
}

std::vector<std::pair<std::string, AtomicDecomposition>> read_all(const RunConfig& c,
                                                                  const fs::path& out) {
  std::vector<std::pair<std::string, AtomicDecomposition>> res;
  for (const auto& m : corpus_of(c)) {
    const auto dir = out / "decompositions" / m.name;
    if (!fs::exists(dir / "manifest.json"))
      throw ConfigError("missing " + dir.string() + "; run decompose first");
    res.emplace_back(m.name, read_decomposition(dir));
  }
  return res;
}

void cmd_validate(const RunConfig& c, Report& r, const fs::path& out) {
  const auto all = read_all(c, out);
  std::ostringstream csv;
  csv << "name,level,lambda,support_mass_inside,l2_norm_ratio,per_rectangle_budget,passed\n";
  double worst_support = 1.0, worst_l2 = 0.0;
  for (const auto& [name, d] : all)
    for (const auto& L : d.levels) {
      auto rep = assess_atom(L.atom, L.omega_tilde, c.atomic.dilation, L.budget, c.atomic);
      csv << name << ',' << L.level << ',' << format_double(L.lambda) << ','
          << format_double(rep.support_mass_inside) << ',' << format_double(rep.l2_norm_ratio)
          << ',' << format_double(rep.per_rectangle_budget) << ',' << (rep.passed ? 1 : 0)
          << '\n';
      worst_support = std::min(worst_support, rep.support_mass_inside);
      worst_l2 = std::max(worst_l2, rep.l2_norm_ratio);
    }
  write_csv(r, out, "validate.csv", csv.str());
  r.check_ge("smallest support mass inside the dilate", worst_support,
             c.atomic.support_threshold);
  r.check_le("largest l2 norm ratio", worst_l2, c.atomic.l2_tolerance);
}

void cmd_reconstruct(const RunConfig& c, Report& r, const fs::path& out) {
  const auto members = corpus_of(c);
  const auto all = read_all(c, out);
  std::ostringstream csv;
  csv << "name,reconstruction_error\n";
  fs::create_directories(out / "reconstruct");
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto rec = all[i].second.reconstruct(c.lattice);
    write_grid_function(out / "reconstruct" / members[i].name, rec);
    r.artifacts.push_back("reconstruct/" + members[i].name + ".f64");
    const double err = rel_l2(rec, members[i].f);
    csv << members[i].name << ',' << format_double(err) << '\n';
    r.check_le(members[i].name + ": reconstruction error", err, c.reconstruction_tolerance);
  }
  write_csv(r, out, "reconstruct.csv", csv.str());
}

void cmd_journe(const RunConfig& c, Report& r, const fs::path& out) {
  const auto lat = make_lattice(1, 1, c.journe_N, 1.0);
  std::vector<JourneRatios> res(static_cast<std::size_t>(c.journe_sets));
  std::vector<std::size_t> cells(res.size());
  parallel_for(res.size(), c.workers, [&](std::size_t i) {
    auto omega = random_open_set(lat, c.seed + 0x9e3779b97f4a7c15ull * (i + 1));
    cells[i] = omega.cell_count();
    res[i] = journe_sum_check(omega, c.journe_delta);
  });
  std::ostringstream csv;
  csv << "set,cells,m2_gamma1,m1_gamma2\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    csv << i << ',' << cells[i] << ',' << format_double(res[i].m2_gamma1) << ','
        << format_double(res[i].m1_gamma2) << '\n';
    worst = std::max({worst, res[i].m2_gamma1, res[i].m1_gamma2});
  }
  write_csv(r, out, "journe.csv", csv.str());
  r.check_le("largest Journe ratio", worst, c.journe_bound);
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void log_line(const fs::path& out, const std::string& msg) {
  std::error_code ec;
  fs::create_directories(out, ec);
  std::ofstream log(out / "run.log", std::ios::app);
  log << timestamp() << ' ' << msg << '\n';
}

}  // namespace

Report run_command(const std::string& command, const RunConfig& config) {
  Report r;
  r.command = command;
  const fs::path out = config.output_dir;
  fs::create_directories(out);
  if (command == "selftest") cmd_selftest(config, r, out);
  else if (command == "corpus") cmd_corpus(config, r, out);
  else if (command == "norms") cmd_norms(config, r, out);
  else if (command == "pp") cmd_pp(config, r, out);
  else if (command == "decompose") cmd_decompose(config, r, out);
  else if (command == "validate") cmd_validate(config, r, out);
  else if (command == "reconstruct") cmd_reconstruct(config, r, out);
  else if (command == "journe") cmd_journe(config, r, out);
  else if (command == "schema") write_doc(r, out, "schema.json", config_schema());
  else throw ConfigError("unknown command " + command);
  r.status = r.passed() ? "pass" : "fail";
  return r;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"flagwave: discrete flag harmonic analysis experiments"};
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  app.add_option("command", command, "command to run")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "run configuration (JSON)");
  app.add_option("--out", out_dir, "artifact directory");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--workers", workers, "worker threads");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report r;
  r.command = command;
  fs::path out = out_dir.empty() ? fs::path("flagwave-out") : fs::path(out_dir);
  auto finish = [&](int code) {
    std::error_code ec;
    fs::create_directories(out, ec);
    write_json(out / "report.json", r.to_json());
    log_line(out, command + " exit " + std::to_string(code));
    return code;
  };

  RunConfig cfg;
  try {
    if (config_path.empty()) {
      if (command != "schema") throw ConfigError("--config is required for " + command);
    } else {
      cfg = load_config(config_path);
    }
    if (seed) {
      cfg.seed = *seed;
      cfg.corpus.seed = *seed;
    }
    if (workers) cfg.workers = *workers;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    out = cfg.output_dir;
    validate_config(cfg);
  } catch (const std::exception& e) {
    r.status = "error";
    r.message = e.what();
    std::cerr << "flagwave: " << e.what() << '\n';
    return finish(2);
  }

  log_line(out, command + " start");
  try {
    r = run_command(command, cfg);
  } catch (const ConfigError& e) {
    r.status = "error";
    r.message = e.what();
    std::cerr << "flagwave: " << e.what() << '\n';
    return finish(2);
  } catch (const std::invalid_argument& e) {
    r.status = "error";
    r.message = e.what();
    std::cerr << "flagwave: " << e.what() << '\n';
    return finish(2);
  } catch (const std::exception& e) {
    r.status = "fail";
    r.message = e.what();
    std::cerr << "flagwave: " << e.what() << '\n';
    return finish(1);
  }
  if (command == "schema") std::cout << config_schema().dump(2) << '\n';
  for (const auto& c : r.checks)
    if (!c.passed)
      std::cerr << "FAILED " << c.name << ": " << format_double(c.value) << ' ' << c.relation
                << ' ' << format_double(c.limit) << '\n';
  return finish(r.passed() ? 0 : 1);
}

}  // namespace flagwave
