#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diracbs/birman_schwinger.hpp"
#include "diracbs/enclosure.hpp"
#include "diracbs/estimate_bench.hpp"

namespace diracbs {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr int kMaxDimension = 8;

const std::vector<std::string>& command_names();

struct PotentialConfig {
  std::string preset = "inverse-square";  // empty when `file` is set
  cplx c{0.0, 0.0};
  double radius = 1.0;
  double sigma = 2.0;
  std::string file;
  bool operator==(const PotentialConfig&) const = default;
};

struct ScanConfig {
  ScanRectangle rect;
  int n_re = 20;
  int n_im = 20;
  double near_real_cutoff = 0.1;
  bool operator==(const ScanConfig& o) const {
    return rect.re_min == o.rect.re_min && rect.re_max == o.rect.re_max && rect.im_min == o.rect.im_min &&
           rect.im_max == o.rect.im_max && n_re == o.n_re && n_im == o.n_im && near_real_cutoff == o.near_real_cutoff;
  }
};

struct EigConfig {
  double cutoff = 0.1;       // |Im lambda| above which eigenvalues are checked
  bool correspondence = true;  // dense K_lambda for every checked eigenvalue
  std::size_t limit = kDenseLimit;
  bool operator==(const EigConfig&) const = default;
};

struct BenchSection {
  std::vector<std::string> estimates;  // empty: all
  int trials = 100;
  double slack = 0.1;
  ZSampler sampler;
  std::vector<double> eps_sweep{0.05, 0.1, 0.2};
  bool operator==(const BenchSection& o) const {
    return estimates == o.estimates && trials == o.trials && slack == o.slack && sampler.count == o.sampler.count &&
           sampler.r_min == o.sampler.r_min && sampler.r_max == o.sampler.r_max &&
           sampler.sector == o.sampler.sector && eps_sweep == o.eps_sweep;
  }
};

struct SamplingConfig {
  DyadicRange range;
  SamplingOptions options;
  bool operator==(const SamplingConfig& o) const {
    return range.j_min == o.range.j_min && range.j_max == o.range.j_max && options.radial == o.options.radial &&
           options.angular == o.options.angular && options.refine_rounds == o.options.refine_rounds &&
           options.refine_top == o.options.refine_top;
  }
};

struct RunConfig {
  std::string command;
  OperatorKind kind = OperatorKind::dirac;
  int n = 3;
  double m = 0.0;
  std::optional<PotentialConfig> potential;
  std::string theorem;  // certify
  int j = 1;            // disks
  double epsilon = 0.5;
  double sigma = 2.0;
  WeightSpec rho = WeightSpec::rho2(0.5, 0.5);
  double L = 8.0;
  int M = 8;
  ScanConfig scan;
  EigConfig eig;
  BenchSection bench;
  SamplingConfig sampling;
  double tol = 1e-4;
  std::uint64_t seed = 1;
  std::string output = "report.json";

  bool operator==(const RunConfig&) const = default;

  /// Grid with the component count of the operator.
  GridSpec grid() const;
  CertifyParams certify_params() const;
  BenchConfig bench_config() const;
  /// Builds the potential (reads `file` when set).
  PotentialSpec build_potential() const;
};

struct ConfigIssue {
  std::string path;  // JSON pointer of the offending value
  std::string message;
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<ConfigIssue> errors;
  bool ok() const { return config.has_value(); }
};

/// Strict JSON config parsing. Collects every error instead of stopping at the
/// first one.
ParseResult parse_config(std::string_view text);
/// Same from a parsed document.
ParseResult parse_config(const Json& doc);

/// Thrown by parse_config_or_throw; what() lists every issue.
class ConfigError : public ValidationError {
public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
  std::vector<ConfigIssue> issues_;
};

RunConfig parse_config_or_throw(std::string_view text);

/// Full normalized config (defaults filled in); parse_config reproduces it.
Json config_to_json(const RunConfig& cfg);

/// Canonical text: sorted keys, two-space indent, non-finite numbers as
/// strings. Floats use 12 significant digits except below the top-level key
/// "config", where the shortest round-trip form keeps the echo exact.
std::string canonical_json(const Json& doc);

struct SiblingFile {
  std::string suffix;   // appended to the report stem, e.g. ".scan.csv"
  std::string content;
};

struct Report {
  std::string command;
  Json config;
  Json results;
  std::vector<std::string> warnings;
  std::vector<SiblingFile> files;
  int exit_code = 0;  // 0 ok, 3 inconclusive

  Json to_json(const std::string& stem) const;
};

Json to_json(const NormEntry& e);
Json to_json(const ConstantsReport& c);
Json to_json(const DiskPair& d);
Json to_json(const Certificate& c);
Json to_json(const BenchReport& r);

/// Runs one command. Throws ValidationError / DomainError for bad input and
/// ComputationError for numerical failures.
Report run_command(const RunConfig& cfg, int threads = 1);

/// Writes the JSON report to `path` and the sibling files next to it; sibling
/// names are referenced relative to the report directory.
void write_report(const Report& report, const std::filesystem::path& path);

/// Exit code of the CLI for an exception escaping run_command.
int exit_code_for(const std::exception& e);

} // namespace diracbs
