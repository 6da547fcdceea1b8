#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "diracbs/clifford.hpp"
#include "diracbs/report.hpp"

namespace diracbs {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"certify", "disks", "scan", "eig", "bench", "norms"};
  return names;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

/// Reads typed values out of a JSON object, recording every problem.
class Reader {
public:
  explicit Reader(std::vector<ConfigIssue>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& message) { errors_.push_back({path, message}); }

  /// False (and an error) unless `node` is an object; flags unknown keys.
  bool object(const Json& node, const std::string& path, const std::vector<std::string>& allowed) {
    if (!node.is_object()) {
      error(path.empty() ? "/" : path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : node.items())
      if (!contains(allowed, key)) error(path + "/" + key, "unknown key (allowed: " + join(allowed) + ")");
    return true;
  }

  template <class Check>
  void number(const Json& obj, const std::string& path, const std::string& key, double& out, Check check,
              const std::string& range, bool required = false) {
    const auto it = obj.find(key);
    const std::string p = path + "/" + key;
    if (it == obj.end()) {
      if (required) error(p, "missing required field");
      return;
    }
    if (!it->is_number()) return error(p, "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v) || !check(v)) return error(p, "value " + text(v) + " out of range: " + range);
    out = v;
  }

  template <class Int, class Check>
  void integer(const Json& obj, const std::string& path, const std::string& key, Int& out, Check check,
               const std::string& range, bool required = false) {
    const auto it = obj.find(key);
    const std::string p = path + "/" + key;
    if (it == obj.end()) {
      if (required) error(p, "missing required field");
      return;
    }
    if (!it->is_number_integer()) return error(p, "expected an integer");
    if (it->is_number_unsigned() || it->get<long long>() >= 0) {
      const auto u = it->get<unsigned long long>();
      if (!check(static_cast<long double>(u))) return error(p, "value " + std::to_string(u) + " out of range: " + range);
      out = static_cast<Int>(u);
      return;
    }
    const auto v = it->get<long long>();
    if (!check(static_cast<long double>(v))) return error(p, "value " + std::to_string(v) + " out of range: " + range);
    out = static_cast<Int>(v);
  }

  void string(const Json& obj, const std::string& path, const std::string& key, std::string& out,
              const std::vector<std::string>& choices = {}, bool required = false) {
    const auto it = obj.find(key);
    const std::string p = path + "/" + key;
    if (it == obj.end()) {
      if (required) error(p, "missing required field");
      return;
    }
    if (!it->is_string()) return error(p, "expected a string");
    const auto v = it->get<std::string>();
    if (!choices.empty() && !contains(choices, v)) return error(p, "'" + v + "' is not one of: " + join(choices));
    out = v;
  }

  void boolean(const Json& obj, const std::string& path, const std::string& key, bool& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_boolean()) return error(path + "/" + key, "expected true or false");
    out = it->get<bool>();
  }

  static std::string text(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
  }

private:
  std::vector<ConfigIssue>& errors_;
};

const auto positive = [](auto v) { return v > 0; };
const auto nonnegative = [](auto v) { return v >= 0; };
const auto any = [](auto) { return true; };

const std::vector<std::string> kKinds = {"schrodinger", "klein_gordon", "klein-gordon", "dirac"};
const std::vector<std::string> kPresets = {"inverse-square", "complex-inverse-square", "bump", "dyadic-decay",
                                           "matrix-mix"};

void read_potential(Reader& r, const Json& node, PotentialConfig& p) {
  const std::string path = "/potential";
  if (!r.object(node, path, {"preset", "c", "radius", "sigma", "file"})) return;
  const bool has_file = node.contains("file");
  const bool has_preset = node.contains("preset");
  if (has_file == has_preset) {
    r.error(path, "give exactly one of 'preset' and 'file'");
  }
  if (has_file) {
    p.preset.clear();
    r.string(node, path, "file", p.file);
    if (p.file.empty()) r.error(path + "/file", "empty path");
    for (const char* k : {"c", "radius", "sigma"})
      if (node.contains(k)) r.error(path + "/" + k, "preset parameter given together with 'file'");
    return;
  }
  r.string(node, path, "preset", p.preset, kPresets);
  const auto it = node.find("c");
  if (it == node.end()) {
    r.error(path + "/c", "missing required field");
  } else if (it->is_number()) {
    p.c = {it->get<double>(), 0.0};
  } else if (it->is_array() && it->size() == 2 && (*it)[0].is_number() && (*it)[1].is_number()) {
    p.c = {(*it)[0].get<double>(), (*it)[1].get<double>()};
  } else {
    r.error(path + "/c", "expected a number or [re, im]");
  }
  r.number(node, path, "radius", p.radius, positive, "> 0");
  r.number(node, path, "sigma", p.sigma, positive, "> 0");
}

void read_weights(Reader& r, const Json& node, RunConfig& cfg) {
  const std::string path = "/weights";
  if (!r.object(node, path, {"epsilon", "sigma", "rho"})) return;
  r.number(node, path, "epsilon", cfg.epsilon, [](double v) { return v > 0.0 && v <= 0.5; }, "0 < epsilon <= 1/2");
  r.number(node, path, "sigma", cfg.sigma, [](double v) { return v > 1.0; }, "> 1");
  const auto it = node.find("rho");
  if (it == node.end()) return;
  const std::string rp = path + "/rho";
  if (!r.object(*it, rp, {"kind", "epsilon", "delta", "sigma"})) return;
  std::string kind = "rho2";
  r.string(*it, rp, "kind", kind, {"rho1", "rho2"}, true);
  if (kind == "rho1") {
    for (const char* k : {"epsilon", "delta"})
      if (it->contains(k)) r.error(rp + "/" + k, "not a parameter of rho1");
    double sigma = 2.0;
    r.number(*it, rp, "sigma", sigma, [](double v) { return v > 1.0; }, "> 1");
    cfg.rho = WeightSpec::rho1(sigma);
  } else {
    if (it->contains("sigma")) r.error(rp + "/sigma", "not a parameter of rho2");
    double eps = 0.5, delta = 0.5;
    r.number(*it, rp, "epsilon", eps, positive, "> 0");
    r.number(*it, rp, "delta", delta, positive, "> 0");
    cfg.rho = WeightSpec::rho2(eps, delta);
  }
}

void read_grid(Reader& r, const Json& node, RunConfig& cfg) {
  const std::string path = "/grid";
  if (!r.object(node, path, {"L", "M"})) return;
  r.number(node, path, "L", cfg.L, positive, "> 0");
  r.integer(node, path, "M", cfg.M, [](long double v) { return v >= 2 && v <= 4096 && std::fmod(v, 2.0L) == 0; },
            "even, 2..4096");
}

void read_scan(Reader& r, const Json& node, ScanConfig& s) {
  const std::string path = "/scan";
  if (!r.object(node, path, {"re_min", "re_max", "im_min", "im_max", "n_re", "n_im", "near_real_cutoff"})) return;
  r.number(node, path, "re_min", s.rect.re_min, any, "finite");
  r.number(node, path, "re_max", s.rect.re_max, any, "finite");
  r.number(node, path, "im_min", s.rect.im_min, any, "finite");
  r.number(node, path, "im_max", s.rect.im_max, any, "finite");
  const auto res = [](long double v) { return v >= 2 && v <= 1000; };
  r.integer(node, path, "n_re", s.n_re, res, "2..1000");
  r.integer(node, path, "n_im", s.n_im, res, "2..1000");
  r.number(node, path, "near_real_cutoff", s.near_real_cutoff, nonnegative, ">= 0");
}

void read_eig(Reader& r, const Json& node, EigConfig& e) {
  const std::string path = "/eig";
  if (!r.object(node, path, {"cutoff", "correspondence", "limit"})) return;
  r.number(node, path, "cutoff", e.cutoff, nonnegative, ">= 0");
  r.boolean(node, path, "correspondence", e.correspondence);
  r.integer(node, path, "limit", e.limit, [](long double v) { return v >= 1 && v <= kDenseLimit; },
            "1.." + std::to_string(kDenseLimit));
}

void read_bench(Reader& r, const Json& node, BenchSection& b) {
  const std::string path = "/bench";
  if (!r.object(node, path, {"estimates", "trials", "slack", "z_count", "r_min", "r_max", "sector", "eps_sweep"}))
    return;
  if (const auto it = node.find("estimates"); it != node.end()) {
    if (!it->is_array()) {
      r.error(path + "/estimates", "expected an array of estimate ids");
    } else {
      b.estimates.clear();
      for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& e = (*it)[i];
        const std::string p = path + "/estimates/" + std::to_string(i);
        if (!e.is_string()) {
          r.error(p, "expected a string");
        } else if (!contains(estimate_ids(), e.get<std::string>())) {
          r.error(p, "unknown estimate '" + e.get<std::string>() + "' (known: " + join(estimate_ids()) + ")");
        } else {
          b.estimates.push_back(e.get<std::string>());
        }
      }
    }
  }
  r.integer(node, path, "trials", b.trials, [](long double v) { return v >= 1 && v <= 100000; }, "1..100000");
  r.number(node, path, "slack", b.slack, nonnegative, ">= 0");
  r.integer(node, path, "z_count", b.sampler.count, [](long double v) { return v >= 1 && v <= 10000; }, "1..10000");
  r.number(node, path, "r_min", b.sampler.r_min, positive, "> 0");
  r.number(node, path, "r_max", b.sampler.r_max, positive, "> 0");
  r.number(node, path, "sector", b.sampler.sector, [](double v) { return v >= 0.0 && v < M_PI / 2; }, "0 <= sector < pi/2");
  if (b.sampler.r_min > b.sampler.r_max) r.error(path + "/r_min", "r_min exceeds r_max");
  if (const auto it = node.find("eps_sweep"); it != node.end()) {
    if (!it->is_array() || it->empty()) {
      r.error(path + "/eps_sweep", "expected a non-empty array of numbers");
    } else {
      b.eps_sweep.clear();
      for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& e = (*it)[i];
        if (!e.is_number() || !(e.get<double>() > 0.0 && e.get<double>() < 0.5))
          r.error(path + "/eps_sweep/" + std::to_string(i), "expected a number in (0, 1/2)");
        else
          b.eps_sweep.push_back(e.get<double>());
      }
    }
  }
}

void read_sampling(Reader& r, const Json& node, SamplingConfig& s) {
  const std::string path = "/sampling";
  if (!r.object(node, path, {"j_min", "j_max", "radial", "angular", "refine_rounds", "refine_top"})) return;
  const auto j = [](long double v) { return v >= -200 && v <= 200; };
  r.integer(node, path, "j_min", s.range.j_min, j, "-200..200");
  r.integer(node, path, "j_max", s.range.j_max, j, "-200..200");
  if (s.range.j_min > s.range.j_max) r.error(path + "/j_min", "j_min exceeds j_max");
  const auto count = [](long double v) { return v >= 1 && v <= 100000; };
  r.integer(node, path, "radial", s.options.radial, count, "1..100000");
  r.integer(node, path, "angular", s.options.angular, count, "1..100000");
  r.integer(node, path, "refine_rounds", s.options.refine_rounds, [](long double v) { return v >= 0 && v <= 100; },
            "0..100");
  r.integer(node, path, "refine_top", s.options.refine_top, count, "1..100000");
}

/// Checks spanning several sections, run after the fields are read.
void cross_checks(Reader& r, const RunConfig& cfg, bool kind_ok) {
  const std::string& c = cfg.command;
  const bool needs_potential = c != "bench";
  if (needs_potential && !cfg.potential) r.error("/potential", "missing required field for command '" + c + "'");
  if (!needs_potential && cfg.potential) r.error("/potential", "not used by command 'bench'");
  if (c == "certify") {
    if (cfg.theorem.empty()) r.error("/theorem", "missing required field for command 'certify'");
    if (cfg.theorem == "2.4" && cfg.m != 0.0) r.error("/m", "theorem 2.4 is the massless case; set m = 0");
    if ((cfg.theorem == "2.2-massive" || cfg.theorem.rfind("2.5", 0) == 0) && !(cfg.m > 0.0))
      r.error("/m", "theorem " + cfg.theorem + " needs m > 0");
  }
  if (c == "disks" && !(cfg.m > 0.0)) r.error("/m", "enclosure disks need m > 0");
  if ((c == "certify" || c == "disks") && kind_ok && cfg.kind != OperatorKind::dirac)
    r.error("/kind", "certificates concern the Dirac operator; set kind = dirac");
  if (c == "scan") {
    const auto& q = cfg.scan.rect;
    if (!(q.re_min < q.re_max)) r.error("/scan/re_min", "re_min must be below re_max");
    if (!(q.im_min < q.im_max)) r.error("/scan/im_min", "im_min must be below im_max");
  }
  if (c == "eig" && cfg.n >= 3 && cfg.n <= kMaxDimension && kind_ok) {
    const double dof = std::pow(static_cast<double>(cfg.M), cfg.n) *
                       (cfg.kind == OperatorKind::dirac ? spinor_size(cfg.n) : 1);
    if (dof > static_cast<double>(cfg.eig.limit))
      r.error("/grid/M", "dense dimension " + Reader::text(dof) + " exceeds eig.limit " +
                             std::to_string(cfg.eig.limit) + "; use the scan command for larger grids");
  }
  if (cfg.potential && cfg.potential->preset == "matrix-mix" && kind_ok && cfg.kind != OperatorKind::dirac)
    r.error("/potential/preset", "matrix-mix needs spinor components; use kind = dirac");
}

} // namespace

ParseResult parse_config(const Json& doc) {
  ParseResult result;
  Reader r(result.errors);
  RunConfig cfg;
  if (!r.object(doc, "", {"command", "kind", "n", "m", "potential", "theorem", "j", "weights", "grid", "scan", "eig",
                          "bench", "sampling", "tol", "seed", "output"}))
    return result;
  r.string(doc, "", "command", cfg.command, command_names(), true);
  std::string kind = "dirac";
  r.string(doc, "", "kind", kind, kKinds);
  bool kind_ok = contains(kKinds, kind);
  if (kind_ok) cfg.kind = operator_kind_from_string(kind);
  if (const auto it = doc.find("n"); it != doc.end() && it->is_number_integer() && it->get<long long>() < 3) {
    r.error("/n", "unsupported dimension n = " + std::to_string(it->get<long long>()) +
                      ": the resolvent estimates and constants need n >= 3");
  } else {
    r.integer(doc, "", "n", cfg.n, [](long double v) { return v >= 3 && v <= kMaxDimension; },
              "3.." + std::to_string(kMaxDimension), true);
  }
  r.number(doc, "", "m", cfg.m, nonnegative, ">= 0", true);
  if (const auto it = doc.find("potential"); it != doc.end()) {
    PotentialConfig p;
    read_potential(r, *it, p);
    cfg.potential = p;
  }
  r.string(doc, "", "theorem", cfg.theorem, theorem_ids());
  r.integer(doc, "", "j", cfg.j, [](long double v) { return v == 1 || v == 2; }, "1 or 2");
  if (const auto it = doc.find("weights"); it != doc.end()) read_weights(r, *it, cfg);
  if (const auto it = doc.find("grid"); it != doc.end()) read_grid(r, *it, cfg);
  if (const auto it = doc.find("scan"); it != doc.end()) read_scan(r, *it, cfg.scan);
  if (const auto it = doc.find("eig"); it != doc.end()) read_eig(r, *it, cfg.eig);
  if (const auto it = doc.find("bench"); it != doc.end()) read_bench(r, *it, cfg.bench);
  if (const auto it = doc.find("sampling"); it != doc.end()) read_sampling(r, *it, cfg.sampling);
  r.number(doc, "", "tol", cfg.tol, [](double v) { return v > 0.0 && v <= 0.1; }, "0 < tol <= 0.1");
  r.integer(doc, "", "seed", cfg.seed, nonnegative, ">= 0");
  r.string(doc, "", "output", cfg.output);
  if (doc.contains("output") && cfg.output.empty()) r.error("/output", "empty path");
  cross_checks(r, cfg, kind_ok);
  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

ParseResult parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    ParseResult result;
    result.errors.push_back({"/", std::string("malformed JSON: ") + e.what()});
    return result;
  }
  return parse_config(doc);
}

namespace {

std::string describe_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid config (" + std::to_string(issues.size()) + " error" + (issues.size() == 1 ? "" : "s") + ")";
  for (const auto& i : issues) out += "\n  " + i.path + ": " + i.message;
  return out;
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError(describe_issues(issues)), issues_(std::move(issues)) {}

RunConfig parse_config_or_throw(std::string_view text) {
  auto result = parse_config(text);
  if (!result.ok()) throw ConfigError(std::move(result.errors));
  return *result.config;
}

Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["kind"] = to_string(cfg.kind);
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  if (cfg.potential) {
    const auto& p = *cfg.potential;
    Json pj;
    if (!p.file.empty()) {
      pj["file"] = p.file;
    } else {
      pj["preset"] = p.preset;
      pj["c"] = p.c.imag() == 0.0 ? Json(p.c.real()) : Json::array({p.c.real(), p.c.imag()});
      pj["radius"] = p.radius;
      pj["sigma"] = p.sigma;
    }
    j["potential"] = pj;
  }
  if (!cfg.theorem.empty()) j["theorem"] = cfg.theorem;
  j["j"] = cfg.j;
  Json rho;
  if (cfg.rho.kind == WeightSpec::Kind::rho1) {
    rho = {{"kind", "rho1"}, {"sigma", cfg.rho.sigma}};
  } else {
    rho = {{"kind", "rho2"}, {"epsilon", cfg.rho.epsilon}, {"delta", cfg.rho.delta}};
  }
  j["weights"] = {{"epsilon", cfg.epsilon}, {"sigma", cfg.sigma}, {"rho", rho}};
  j["grid"] = {{"L", cfg.L}, {"M", cfg.M}};
  const auto& s = cfg.scan;
  j["scan"] = {{"re_min", s.rect.re_min}, {"re_max", s.rect.re_max}, {"im_min", s.rect.im_min},
               {"im_max", s.rect.im_max}, {"n_re", s.n_re},           {"n_im", s.n_im},
               {"near_real_cutoff", s.near_real_cutoff}};
  j["eig"] = {{"cutoff", cfg.eig.cutoff}, {"correspondence", cfg.eig.correspondence}, {"limit", cfg.eig.limit}};
  const auto& b = cfg.bench;
  j["bench"] = {{"estimates", b.estimates}, {"trials", b.trials},         {"slack", b.slack},
                {"z_count", b.sampler.count}, {"r_min", b.sampler.r_min}, {"r_max", b.sampler.r_max},
                {"sector", b.sampler.sector}, {"eps_sweep", b.eps_sweep}};
  const auto& q = cfg.sampling;
  j["sampling"] = {{"j_min", q.range.j_min},          {"j_max", q.range.j_max},
                   {"radial", q.options.radial},      {"angular", q.options.angular},
                   {"refine_rounds", q.options.refine_rounds}, {"refine_top", q.options.refine_top}};
  j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  j["output"] = cfg.output;
  return j;
}

GridSpec RunConfig::grid() const {
  GridSpec g;
  g.n = n;
  g.L = L;
  g.M = M;
  g.N = operator_components(kind, n);
  return g;
}

CertifyParams RunConfig::certify_params() const {
  CertifyParams p;
  p.m = m;
  p.epsilon = epsilon;
  p.sigma = sigma;
  p.rho = rho;
  p.range = sampling.range;
  p.sampling = sampling.options;
  return p;
}

BenchConfig RunConfig::bench_config() const {
  BenchConfig b;
  b.grid = grid();
  b.grid.N = 1;
  b.m = m;
  b.trials = bench.trials;
  b.seed = seed;
  b.slack = bench.slack;
  b.sampler = bench.sampler;
  b.eps_sweep = bench.eps_sweep;
  b.sigma = sigma;
  b.rho = rho;
  return b;
}

PotentialSpec RunConfig::build_potential() const {
  if (!potential) throw ValidationError("no potential configured");
  const int N = operator_components(kind, n);
  if (!potential->file.empty()) {
    auto data = read_potential_file(potential->file);
    if (data->lattice.n != n) throw ValidationError("potential file dimension differs from n");
    if (data->N != N)
      throw ValidationError("potential file has " + std::to_string(data->N) + "x" + std::to_string(data->N) +
                            " matrices, the operator needs " + std::to_string(N));
    return PotentialSpec::sampled(std::move(data), potential->file);
  }
  return PotentialSpec::preset(potential->preset, n, N, potential->c, potential->radius, potential->sigma);
}

} // namespace diracbs
