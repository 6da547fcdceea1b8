#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "diracbs/report.hpp"

namespace diracbs {

// ---------------------------------------------------------------------------
// Canonical JSON.

namespace {

std::string format_double(double v, bool exact) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  if (exact) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void dump(const Json& node, int depth, bool exact, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (node.type()) {
    case Json::value_t::object: {
      if (node.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : node.items()) {  // std::map order: sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        dump(value, depth + 1, exact || (depth == 0 && key == "config"), out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (node.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(node[i], depth + 1, exact, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(node.get<double>(), exact);
      return;
    default:
      out += node.dump();
  }
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json grid_json(const GridSpec& g) { return {{"n", g.n}, {"L", g.L}, {"M", g.M}, {"N", g.N}}; }

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

} // namespace

std::string canonical_json(const Json& doc) {
  std::string out;
  dump(doc, 0, false, out);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Result serialization.

Json to_json(const NormEntry& e) {
  return {{"name", e.name},
          {"value", e.value},
          {"tail_bound", opt(e.tail_bound)},
          {"upper_bound", opt(e.upper_bound)},
          {"divergent", e.divergent},
          {"samples", e.samples}};
}

Json to_json(const ConstantsReport& c) {
  return {{"n", c.n},
          {"m", c.m},
          {"C1", c.C1},
          {"C2", c.C2},
          {"C3", opt(c.C3)},
          {"kato_yajima", c.kato_yajima},
          {"rho_l2_linf", c.rho.l2_linf},
          {"rho_half_power_sup", c.rho.half_power_sup}};
}

Json to_json(const DiskPair& d) {
  return {{"j", d.j},           {"m", d.m},           {"N_j", d.N_j}, {"C2", d.C2},
          {"V_j", d.V_j},       {"x0_plus", d.x0_plus}, {"x0_minus", d.x0_minus}, {"r0", d.r0}};
}

Json to_json(const Certificate& c) {
  Json norms = Json::array();
  for (const auto& e : c.norms) norms.push_back(to_json(e));
  return {{"theorem", c.theorem},
          {"verdict", to_string(c.verdict)},
          {"norms", norms},
          {"constants", c.constants ? to_json(*c.constants) : Json(nullptr)},
          {"constant", opt(c.constant)},
          {"threshold", opt(c.threshold)},
          {"product", opt(c.product)},
          {"disks", c.disks ? to_json(*c.disks) : Json(nullptr)},
          {"input_hash", c.input_hash},
          {"notes", c.notes}};
}

Json to_json(const BenchReport& r) {
  return {{"estimate", r.estimate},
          {"parameter", r.parameter},
          {"trials", r.trials},
          {"discarded", r.discarded},
          {"z_samples", r.z_samples.size()},
          {"max_ratio", r.max_ratio},
          {"argmax_z", complex_json(r.argmax_z)},
          {"constant", opt(r.constant)},
          {"grid", grid_json(r.grid)},
          {"m", r.m},
          {"slack", r.slack},
          {"pass", r.pass ? Json(*r.pass) : Json(nullptr)}};
}

Json Report::to_json(const std::string& stem) const {
  Json files = Json::array();
  for (const auto& f : this->files) files.push_back(stem + f.suffix);
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", config},
          {"results", results},               {"warnings", warnings}, {"files", files}};
}

// ---------------------------------------------------------------------------
// Commands.

namespace {

void tail_warnings(const std::vector<NormEntry>& norms, const DyadicRange& range, std::vector<std::string>& warnings) {
  for (const auto& e : norms) {
    const std::string where = e.name + " over annuli " + std::to_string(range.j_min) + ".." + std::to_string(range.j_max);
    if (e.divergent) {
      warnings.push_back(where + " diverges");
    } else if (!e.tail_bound) {
      warnings.push_back(where + ": tail outside the sampled annuli is unknown");
    } else if (*e.tail_bound > 0.0) {
      warnings.push_back(where + ": tail bound " + csv_number(*e.tail_bound) + " included in the upper bound");
    }
  }
}

/// Disks for the off-axis checks of scan and eig (Dirac, m > 0), if admissible.
std::optional<DiskPair> comparison_disks(const RunConfig& cfg, const PotentialSpec& V, Json& results,
                                         std::vector<std::string>& warnings) {
  if (cfg.kind != OperatorKind::dirac || !(cfg.m > 0.0)) return std::nullopt;
  const Certificate cert = enclosure_disks(V, cfg.m, cfg.j, cfg.certify_params());
  results["disk_certificate"] = to_json(cert);
  if (!cert.disks) warnings.push_back("no admissible enclosure disks for j = " + std::to_string(cfg.j));
  return cert.disks;
}

Report run_certify(const RunConfig& cfg) {
  Report rep;
  const PotentialSpec V = cfg.build_potential();
  const Certificate cert = certify(cfg.theorem, V, cfg.certify_params());
  rep.results["certificate"] = to_json(cert);
  tail_warnings(cert.norms, cfg.sampling.range, rep.warnings);
  if (cert.verdict == Verdict::inconclusive) rep.exit_code = 3;
  return rep;
}

Report run_disks(const RunConfig& cfg) {
  Report rep;
  const PotentialSpec V = cfg.build_potential();
  const Certificate cert = enclosure_disks(V, cfg.m, cfg.j, cfg.certify_params());
  rep.results["certificate"] = to_json(cert);
  rep.results["disks"] = cert.disks ? to_json(*cert.disks) : Json(nullptr);
  tail_warnings(cert.norms, cfg.sampling.range, rep.warnings);
  if (!cert.disks) rep.exit_code = 3;
  return rep;
}

Report run_scan(const RunConfig& cfg, int threads) {
  Report rep;
  const PotentialSpec V = cfg.build_potential();
  PowerOptions opts;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  const BSScan scan = bs_scan(cfg.kind, cfg.m, V, cfg.grid(), cfg.scan.rect, cfg.scan.n_re, cfg.scan.n_im, opts,
                              threads, cfg.scan.near_real_cutoff);
  const auto s = scan.summary();
  Json box = nullptr;
  if (s.bounding_box)
    box = {{"re_min", s.bounding_box->re_min},
           {"re_max", s.bounding_box->re_max},
           {"im_min", s.bounding_box->im_min},
           {"im_max", s.bounding_box->im_max}};
  rep.results["summary"] = {{"evaluated", s.evaluated},
                            {"excluded", s.excluded},
                            {"at_least_one", s.at_least_one},
                            {"at_least_one_off_axis", s.at_least_one_off_axis},
                            {"max_value", s.max_value},
                            {"bounding_box", box}};
  rep.results["grid"] = grid_json(scan.grid);
  rep.results["potential_hash"] = scan.potential_hash;
  if (s.excluded > 0)
    rep.warnings.push_back(std::to_string(s.excluded) + " lattice points excluded as near-singular");
  if (const auto disks = comparison_disks(cfg, V, rep.results, rep.warnings)) {
    std::size_t outside = 0;
    for (std::size_t k = 0; k < scan.z.size(); ++k)
      if (!scan.excluded[k] && scan.values[k] >= 1.0 && std::abs(scan.z[k].imag()) > cfg.scan.near_real_cutoff &&
          !disks->contains(scan.z[k]))
        ++outside;
    rep.results["off_axis_outside_disks"] = outside;
  }
  std::ostringstream csv;
  write_scan_csv(scan, csv);
  rep.files.push_back({".scan.csv", csv.str()});
  return rep;
}

Report run_eig(const RunConfig& cfg) {
  Report rep;
  const PotentialSpec V = cfg.build_potential();
  const GridSpec grid = cfg.grid();
  EigenDiagnostics diag;
  const auto lambdas = eigenvalues(assemble_perturbed(cfg.kind, cfg.m, V, grid, cfg.eig.limit), &diag, cfg.eig.limit);
  rep.results["count"] = lambdas.size();
  rep.results["residual_check"] = {
      {"checked", diag.checked}, {"max_residual", diag.max_residual}, {"tolerance", diag.tolerance}};
  rep.results["grid"] = grid_json(grid);

  std::vector<cplx> off_axis;
  for (const cplx& l : lambdas)
    if (std::abs(l.imag()) > cfg.eig.cutoff) off_axis.push_back(l);
  const auto disks = comparison_disks(cfg, V, rep.results, rep.warnings);
  Json list = Json::array();
  std::size_t outside = 0;
  for (const cplx& l : off_axis) {
    Json e = {{"re", l.real()}, {"im", l.imag()}};
    if (disks) {
      const bool in = disks->contains(l);
      e["in_disks"] = in;
      if (!in) ++outside;
    }
    list.push_back(e);
  }
  rep.results["off_axis"] = list;
  if (disks) rep.results["off_axis_outside_disks"] = outside;
  if (off_axis.empty())
    rep.warnings.push_back("no eigenvalue with |Im| > " + csv_number(cfg.eig.cutoff) + "; off-axis checks are vacuous");

  if (cfg.eig.correspondence) {
    const BirmanSchwinger K(cfg.kind, cfg.m, V, grid);
    Json entries = Json::array();
    for (const auto& c : eigenvalue_correspondence(K, off_axis, kNearSingular, cfg.eig.limit))
      entries.push_back({{"re", c.lambda.real()},
                         {"im", c.lambda.imag()},
                         {"distance_to_free", c.distance_to_free},
                         {"minus_one_gap", c.minus_one_gap}});
    rep.results["correspondence"] = entries;
  }

  std::ostringstream csv;
  csv << "re,im\n";
  for (const cplx& l : lambdas) csv << csv_number(l.real()) << ',' << csv_number(l.imag()) << '\n';
  rep.files.push_back({".eigenvalues.csv", csv.str()});
  return rep;
}

Report run_bench_command(const RunConfig& cfg, int threads) {
  Report rep;
  BenchConfig b = cfg.bench_config();
  b.threads = threads;
  const std::vector<std::string> ids = cfg.bench.estimates.empty() ? estimate_ids() : cfg.bench.estimates;
  const auto reports = run_suite(ids, b);
  Json list = Json::array();
  bool all_pass = true;
  std::ostringstream csv;
  csv << "estimate,parameter,re_z,im_z,ratio\n";
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    if (r.pass && !*r.pass) {
      all_pass = false;
      rep.warnings.push_back(r.estimate + " exceeds its constant: max ratio " + csv_number(r.max_ratio));
    }
    if (!r.constant)
      rep.warnings.push_back(r.estimate + (r.parameter.empty() ? "" : " (" + r.parameter + ")") +
                             ": constant not explicit, ratio reported only");
    if (r.discarded > 0)
      rep.warnings.push_back(r.estimate + ": " + std::to_string(r.discarded) + " trials discarded as non-finite");
    for (std::size_t k = 0; k < r.z_samples.size(); ++k)
      csv << r.estimate << ',' << r.parameter << ',' << csv_number(r.z_samples[k].real()) << ','
          << csv_number(r.z_samples[k].imag()) << ',' << csv_number(r.ratio_by_z[k]) << '\n';
  }
  rep.results["estimates"] = list;
  rep.results["all_explicit_pass"] = all_pass;
  rep.files.push_back({".bench.csv", csv.str()});
  return rep;
}

Report run_norms(const RunConfig& cfg) {
  Report rep;
  const PotentialSpec V = cfg.build_potential();
  const auto& range = cfg.sampling.range;
  const auto& opts = cfg.sampling.options;
  std::vector<NormEntry> norms;
  norms.push_back(n1_norm(V, range, opts));
  norms.push_back(weighted_potential_sup(V, rho_condition_weight(cfg.rho), "|x| rho^-2 V sup", range, opts));
  norms.push_back(weighted_potential_sup(V, tau_squared(cfg.epsilon), "tau_eps^2 V sup", range, opts));
  norms.push_back(weighted_potential_sup(V, WeightSpec::w_sigma(cfg.sigma), "w_sigma V sup", range, opts));
  const RhoNorms rho = rho_norms(cfg.rho, cfg.n, range, opts);
  Json list = Json::array();
  for (const auto& e : norms) list.push_back(to_json(e));
  rep.results["norms"] = list;
  const auto& sup = norms[1];
  rep.results["N2_upper_bound"] =
      sup.upper_bound && std::isfinite(rho.l2_linf) ? Json(rho.l2_linf * rho.l2_linf * *sup.upper_bound) : Json(nullptr);
  rep.results["rho"] = {{"l2_linf", rho.l2_linf}, {"half_power_sup", rho.half_power_sup}};
  if (std::isfinite(rho.l2_linf) && (cfg.m == 0.0 || std::isfinite(rho.half_power_sup)))
    rep.results["constants"] = to_json(eval_constants(cfg.n, cfg.m, rho));
  else
    rep.warnings.push_back("rho norms not finite; constants omitted");
  tail_warnings(norms, range, rep.warnings);
  return rep;
}

} // namespace

Report run_command(const RunConfig& cfg, int threads) {
  Report rep;
  if (cfg.command == "certify") rep = run_certify(cfg);
  else if (cfg.command == "disks") rep = run_disks(cfg);
  else if (cfg.command == "scan") rep = run_scan(cfg, threads);
  else if (cfg.command == "eig") rep = run_eig(cfg);
  else if (cfg.command == "bench") rep = run_bench_command(cfg, threads);
  else if (cfg.command == "norms") rep = run_norms(cfg);
  else throw ValidationError("unknown command '" + cfg.command + "'");
  rep.command = cfg.command;
  rep.config = config_to_json(cfg);
  return rep;
}

void write_report(const Report& report, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::string stem = path.filename().string();
  if (path.extension() == ".json") stem = path.stem().string();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + dir.string() + "': " + ec.message());
  const auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed for '" + p.string() + "'");
  };
  for (const auto& f : report.files) write(dir / (stem + f.suffix), f.content);
  write(path, canonical_json(report.to_json(stem)));
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ComputationError*>(&e)) return 2;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 1;
  return 2;
}

} // namespace diracbs
