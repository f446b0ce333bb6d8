#include "flagwave/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace flagwave {

using nlohmann::json;

ScaleGrid RunConfig::scale_grid() const {
  ScaleGrid g(j_min, j_max, k_min, k_max, samples_per_block);
  g.bind(lattice);
  return g;
}

KernelPair RunConfig::kernel_pair() const {
  switch (kernel) {
    case KernelKind::kLittlewoodPaley:
      return build_lp_pair(calibration);
    case KernelKind::kPoisson:
      return build_poisson_pair();
    case KernelKind::kHeat:
      return build_heat_pair();
    case KernelKind::kHeatLP:
      return build_heatlp_pair(calibration);
    case KernelKind::kIndicator:
      return build_indicator_pair(lattice.n, lattice.m);
  }
  throw ConfigError("kernel.kind: unknown kind");
}

namespace {

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

// key -> description, for the schema
const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"version", "config format version"},
      {"lattice.n", "dimension of the first factor"},
      {"lattice.m", "dimension of the second factor"},
      {"lattice.N", "grid points per axis; even, a power of two for dyadic commands"},
      {"lattice.L", "torus period"},
      {"kernel.kind", "LittlewoodPaley, Poisson, Heat, HeatLP or Indicator"},
      {"kernel.calibration", "Analytic or DiscretelyRenormalized"},
      {"scales.j_min", "first dyadic block in t = 2^-j"},
      {"scales.j_max", "last dyadic block in t"},
      {"scales.k_min", "first dyadic block in s = 2^-k"},
      {"scales.k_max", "last dyadic block in s"},
      {"scales.samples_per_block", "quadrature samples per dyadic block"},
      {"corpus.flag_gaussian", "number of flag Gaussian members"},
      {"corpus.band_limited", "number of band-limited random members"},
      {"corpus.synthetic_atom", "number of synthetic atom members"},
      {"corpus.variants", "number of translated and dilated variants"},
      {"corpus.sigma_min", "smallest Gaussian width"},
      {"corpus.sigma_max", "largest Gaussian width"},
      {"corpus.decay_margin", "Gaussian widths that must fit in half a period"},
      {"corpus.band_max", "largest integer frequency per axis of band-limited members"},
      {"atomic.M", "Laplacian power in the atom budget"},
      {"atomic.dilation", "enlargement factor of the support check"},
      {"atomic.tilde_threshold", "strong maximal threshold defining the enlarged level set"},
      {"atomic.level_span", "number of levels below the top level"},
      {"atomic.level_min", "lowest level, null for top level minus span"},
      {"atomic.level_max", "highest level, null for ceil(log2 max S)"},
      {"atomic.calibration", "Analytic or DiscretelyRenormalized synthesis"},
      {"atomic.support_threshold", "required fraction of atom mass in the dilate"},
      {"atomic.l2_tolerance", "bound on ||a|| |Omega|^(1/2)"},
      {"atomic.budget_tolerance", "bound on the per-rectangle budget"},
      {"atomic.reconstruction_tolerance", "bound on the relative reconstruction error"},
      {"pp.cell_shift", "cells are 2^cell_shift times finer than the tent rectangles"},
      {"norms.c_emp_max", "bound on the ratio spread of the norm table"},
      {"journe.sets", "number of random open sets"},
      {"journe.N", "grid points per axis of the open-set lattice"},
      {"journe.delta", "exponent of the enlargement factors"},
      {"journe.bound", "bound on both sums over |Omega|"},
      {"selftest.tolerance", "relative residual bound of the spectral identities"},
      {"workers", "threads used across corpus members"},
      {"output_dir", "artifact directory, overridden by --out"},
      {"seed", "seed of the corpus and random open sets, overridden by --seed"},
  };
  return d;
}

void check_keys(const json& given, const json& defaults, const std::string& prefix) {
  if (!given.is_object()) throw ConfigError(prefix.empty() ? "config must be an object"
                                                           : prefix + ": expected an object");
  for (const auto& [k, v] : given.items()) {
    const std::string path = prefix.empty() ? k : prefix + "." + k;
    if (!defaults.contains(k)) throw ConfigError(path + ": unknown key");
    const auto& d = defaults.at(k);
    if (d.is_object()) {
      check_keys(v, d, path);
      continue;
    }
    bool ok = d.is_null()              ? (v.is_null() || v.is_number_integer())
              : d.is_number_integer()  ? v.is_number_integer()
              : d.is_number()          ? v.is_number()
              : d.is_string()          ? v.is_string()
                                       : v.type() == d.type();
    if (!ok) throw ConfigError(path + ": wrong type");
  }
}

// Like merge_patch, but a null in the file is kept as a value (it selects
// the automatic level bounds) instead of deleting the key.
void overlay(json& target, const json& given) {
  for (const auto& [k, v] : given.items()) {
    if (v.is_object() && target[k].is_object()) overlay(target[k], v);
    else target[k] = v;
  }
}

std::optional<int> read_optional(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<int>();
}

}  // namespace

json config_json(const RunConfig& c) {
  json j;
  j["version"] = c.version;
  j["lattice"] = {{"n", c.lattice.n}, {"m", c.lattice.m}, {"N", c.lattice.N}, {"L", c.lattice.L}};
  j["kernel"] = {{"kind", kernel_kind_name(c.kernel)},
                 {"calibration", calibration_name(c.calibration)}};
  j["scales"] = {{"j_min", c.j_min},
                 {"j_max", c.j_max},
                 {"k_min", c.k_min},
                 {"k_max", c.k_max},
                 {"samples_per_block", c.samples_per_block}};
  j["corpus"] = {{"flag_gaussian", c.corpus.flag_gaussian},
                 {"band_limited", c.corpus.band_limited},
                 {"synthetic_atom", c.corpus.synthetic_atom},
                 {"variants", c.corpus.variants},
                 {"sigma_min", c.corpus.sigma_min},
                 {"sigma_max", c.corpus.sigma_max},
                 {"decay_margin", c.corpus.decay_margin},
                 {"band_max", c.corpus.band_max}};
  const auto& a = c.atomic;
  j["atomic"] = {{"M", a.M},
                 {"dilation", a.dilation},
                 {"tilde_threshold", a.tilde_threshold},
                 {"level_span", a.level_span},
                 {"level_min", optional_int(a.level_min)},
                 {"level_max", optional_int(a.level_max)},
                 {"calibration", calibration_name(a.calibration)},
                 {"support_threshold", a.support_threshold},
                 {"l2_tolerance", a.l2_tolerance},
                 {"budget_tolerance", a.budget_tolerance},
                 {"reconstruction_tolerance", c.reconstruction_tolerance}};
  j["pp"] = {{"cell_shift", c.pp_cell_shift}};
  j["norms"] = {{"c_emp_max", c.norms_c_emp_max}};
  j["journe"] = {{"sets", c.journe_sets},
                 {"N", c.journe_N},
                 {"delta", c.journe_delta},
                 {"bound", c.journe_bound}};
  j["selftest"] = {{"tolerance", c.selftest_tolerance}};
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

RunConfig parse_config(const json& given) {
  const json defaults = config_json(RunConfig{});
  check_keys(given, defaults, "");
  json j = defaults;
  overlay(j, given);
  RunConfig c;
  try {
    c.version = j["version"].get<int>();
    if (c.version != kConfigVersion)
      throw ConfigError("version: expected " + std::to_string(kConfigVersion));
    c.lattice = {j["lattice"]["n"].get<int>(), j["lattice"]["m"].get<int>(),
                 j["lattice"]["N"].get<int>(), j["lattice"]["L"].get<double>()};
    try {
      c.kernel = parse_kernel_kind(j["kernel"]["kind"].get<std::string>());
    } catch (const std::invalid_argument&) {
      throw ConfigError("kernel.kind: unknown kind");
    }
    try {
      c.calibration = parse_calibration(j["kernel"]["calibration"].get<std::string>());
      c.atomic.calibration = parse_calibration(j["atomic"]["calibration"].get<std::string>());
    } catch (const std::invalid_argument&) {
      throw ConfigError("calibration: unknown mode");
    }
    const auto& s = j["scales"];
    c.j_min = s["j_min"].get<int>();
    c.j_max = s["j_max"].get<int>();
    c.k_min = s["k_min"].get<int>();
    c.k_max = s["k_max"].get<int>();
    c.samples_per_block = s["samples_per_block"].get<int>();
    const auto& cp = j["corpus"];
    c.corpus.flag_gaussian = cp["flag_gaussian"].get<int>();
    c.corpus.band_limited = cp["band_limited"].get<int>();
    c.corpus.synthetic_atom = cp["synthetic_atom"].get<int>();
    c.corpus.variants = cp["variants"].get<int>();
    c.corpus.sigma_min = cp["sigma_min"].get<double>();
    c.corpus.sigma_max = cp["sigma_max"].get<double>();
    c.corpus.decay_margin = cp["decay_margin"].get<double>();
    c.corpus.band_max = cp["band_max"].get<int>();
    const auto& a = j["atomic"];
    c.atomic.M = a["M"].get<int>();
    c.atomic.dilation = a["dilation"].get<double>();
    c.atomic.tilde_threshold = a["tilde_threshold"].get<double>();
    c.atomic.level_span = a["level_span"].get<int>();
    c.atomic.level_min = read_optional(a["level_min"]);
    c.atomic.level_max = read_optional(a["level_max"]);
    c.atomic.support_threshold = a["support_threshold"].get<double>();
    c.atomic.l2_tolerance = a["l2_tolerance"].get<double>();
    c.atomic.budget_tolerance = a["budget_tolerance"].get<double>();
    c.reconstruction_tolerance = a["reconstruction_tolerance"].get<double>();
    c.pp_cell_shift = j["pp"]["cell_shift"].get<int>();
    c.norms_c_emp_max = j["norms"]["c_emp_max"].get<double>();
    c.journe_sets = j["journe"]["sets"].get<int>();
    c.journe_N = j["journe"]["N"].get<int>();
    c.journe_delta = j["journe"]["delta"].get<double>();
    c.journe_bound = j["journe"]["bound"].get<double>();
    c.selftest_tolerance = j["selftest"]["tolerance"].get<double>();
    c.workers = j["workers"].get<int>();
    c.output_dir = j["output_dir"].get<std::string>();
    c.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.corpus.seed = c.seed;
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate_config(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  const auto& L = c.lattice;
  if (L.n < 1 || L.m < 1) fail("lattice.n, lattice.m: must be >= 1");
  if (L.N < 8 || L.N % 2 != 0) fail("lattice.N: must be even and >= 8");
  if ((L.N & (L.N - 1)) != 0) fail("lattice.N: must be a power of two");
  if (!(L.L > 0.0) || !std::isfinite(L.L)) fail("lattice.L: must be positive");
  if (c.j_min > c.j_max) fail("scales.j_min: exceeds j_max");
  if (c.k_min > c.k_max) fail("scales.k_min: exceeds k_max");
  if (c.samples_per_block < 1) fail("scales.samples_per_block: must be >= 1");
  if (c.calibration == Calibration::kDiscretelyRenormalized && !c.scale_grid().full_coverage())
    fail("scales: the grid does not cover the lattice spectrum, as renormalization needs");
  if (c.corpus.flag_gaussian < 0 || c.corpus.band_limited < 0 || c.corpus.synthetic_atom < 0 ||
      c.corpus.variants < 0)
    fail("corpus: member counts must be >= 0");
  if (!(c.corpus.sigma_min > 0.0) || c.corpus.sigma_max < c.corpus.sigma_min)
    fail("corpus.sigma_min, corpus.sigma_max: need 0 < min <= max");
  if (c.corpus.decay_margin * c.corpus.sigma_max * std::sqrt(2.0) * std::sqrt(2.0) > L.L / 2.0)
    fail("corpus.sigma_max: widest member violates the decay margin");
  if (c.corpus.band_max < 1 || 2 * c.corpus.band_max >= L.N)
    fail("corpus.band_max: must lie in [1, N/2)");
  if (c.atomic.M < 0) fail("atomic.M: must be >= 0");
  if (!(c.atomic.dilation >= 1.0)) fail("atomic.dilation: must be >= 1");
  if (!(c.atomic.tilde_threshold > 0.0 && c.atomic.tilde_threshold < 1.0))
    fail("atomic.tilde_threshold: must lie in (0, 1)");
  if (c.atomic.level_span < 0) fail("atomic.level_span: must be >= 0");
  if (c.atomic.level_min && c.atomic.level_max && *c.atomic.level_min > *c.atomic.level_max)
    fail("atomic.level_min: exceeds level_max");
  if (c.atomic.calibration == Calibration::kDiscretelyRenormalized &&
      !c.scale_grid().full_coverage())
    fail("atomic.calibration: renormalized synthesis needs full scale coverage");
  if (c.pp_cell_shift < 0) fail("pp.cell_shift: must be >= 0");
  if (c.journe_sets < 0) fail("journe.sets: must be >= 0");
  if (c.journe_N < 8 || (c.journe_N & (c.journe_N - 1)) != 0)
    fail("journe.N: must be a power of two >= 8");
  if (!(c.journe_delta > 0.0)) fail("journe.delta: must be positive");
  if (c.workers < 1) fail("workers: must be >= 1");
  if (c.output_dir.empty()) fail("output_dir: must not be empty");
}

json config_schema() {
  const json defaults = config_json(RunConfig{});
  const auto& desc = descriptions();
  std::function<json(const json&, const std::string&)> node = [&](const json& d,
                                                                  const std::string& path) {
    json s;
    if (d.is_object()) {
      s["type"] = "object";
      s["additionalProperties"] = false;
      s["properties"] = json::object();
      for (const auto& [k, v] : d.items())
        s["properties"][k] = node(v, path.empty() ? k : path + "." + k);
      return s;
    }
    if (d.is_null()) s["type"] = json::array({"integer", "null"});
    else if (d.is_number_integer()) s["type"] = "integer";
    else if (d.is_number()) s["type"] = "number";
    else if (d.is_string()) s["type"] = "string";
    s["default"] = d;
    auto it = desc.find(path);
    if (it != desc.end()) s["description"] = it->second;
    return s;
  };
  json schema = node(defaults, "");
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "flagwave run configuration";
  return schema;
}

}  // namespace flagwave
