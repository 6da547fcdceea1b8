#include "diracbs/potential.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "diracbs/clifford.hpp"

namespace diracbs {

namespace {

constexpr char kPotentialMagic[8] = {'D', 'B', 'S', 'P', 'O', 'T', '0', '1'};
constexpr double kSupportDecay = 16.0;  // outer power used for compactly supported envelopes

double norm_of(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::sqrt(r2);
}

PotentialSpec::Shape shape_from_name(const std::string& name) {
  if (name == "inverse-square" || name == "complex-inverse-square") return PotentialSpec::Shape::inverse_square;
  if (name == "bump") return PotentialSpec::Shape::bump;
  if (name == "dyadic-decay") return PotentialSpec::Shape::dyadic_decay;
  if (name == "matrix-mix") return PotentialSpec::Shape::matrix_mix;
  throw ValidationError("unknown potential preset '" + name + "'");
}

} // namespace

std::string to_string(PotentialSpec::Shape shape) {
  switch (shape) {
    case PotentialSpec::Shape::inverse_square: return "inverse-square";
    case PotentialSpec::Shape::bump: return "bump";
    case PotentialSpec::Shape::dyadic_decay: return "dyadic-decay";
    case PotentialSpec::Shape::matrix_mix: return "matrix-mix";
    case PotentialSpec::Shape::grid_sampled: return "grid-sampled";
  }
  return "?";
}

double matrix_opnorm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

PotentialSpec PotentialSpec::preset(const std::string& name, int n, int N, cplx coupling, double radius,
                                    double sigma) {
  if (n < 1) throw ValidationError("potential dimension must be >= 1");
  if (N < 1) throw ValidationError("potential matrix size must be >= 1");
  PotentialSpec v;
  v.n_ = n;
  v.N_ = N;
  v.shape_ = shape_from_name(name);
  v.coupling_ = coupling;
  v.radius_ = radius;
  v.sigma_ = sigma;
  v.label_ = name;
  v.is_zero_ = coupling == cplx{0.0, 0.0};
  if (v.shape_ == Shape::bump && !(radius > 0.0)) throw ValidationError("bump radius R must be positive");
  if (v.shape_ == Shape::dyadic_decay && !(sigma > 0.0)) throw ValidationError("dyadic-decay sigma must be positive");
  if (v.shape_ == Shape::matrix_mix) {
    if (N != spinor_size(n))
      throw ValidationError("matrix-mix needs the spinor size " + std::to_string(spinor_size(n)) + " for n = " +
                            std::to_string(n));
    const auto rep = build_clifford(n);
    v.structure_ = rep.kinetic(1) + cplx(0.0, 1.0) * CMatrix::Identity(N, N);
  } else {
    v.structure_ = CMatrix::Identity(N, N);
  }
  v.structure_norm_ = matrix_opnorm(v.structure_);
  return v;
}

PotentialSpec PotentialSpec::sampled(std::shared_ptr<const SampledPotential> data, std::string label) {
  if (!data) throw ValidationError("sampled potential without data");
  data->lattice.validate();
  if (data->matrices.size() != data->lattice.points())
    throw ValidationError("sampled potential has " + std::to_string(data->matrices.size()) + " matrices, expected " +
                          std::to_string(data->lattice.points()));
  PotentialSpec v;
  v.n_ = data->lattice.n;
  v.N_ = data->N;
  v.shape_ = Shape::grid_sampled;
  v.coupling_ = 1.0;
  v.label_ = std::move(label);
  double peak = 0.0;
  for (const auto& m : data->matrices) peak = std::max(peak, matrix_opnorm(m));
  v.is_zero_ = peak == 0.0;
  v.structure_norm_ = peak;
  v.samples_ = std::move(data);
  return v;
}

PotentialSpec PotentialSpec::zero(int n, int N) { return preset("inverse-square", n, N, 0.0); }

PotentialSpec PotentialSpec::scaled(cplx s) const {
  PotentialSpec out = *this;
  if (shape_ == Shape::grid_sampled) {
    auto data = std::make_shared<SampledPotential>(*samples_);
    for (auto& m : data->matrices) m *= s;
    return sampled(std::move(data), label_);
  }
  out.coupling_ *= s;
  out.is_zero_ = out.coupling_ == cplx{0.0, 0.0};
  return out;
}

double PotentialSpec::profile(double r) const {
  switch (shape_) {
    case Shape::inverse_square:
    case Shape::matrix_mix: return 1.0 / ((1.0 + r) * (1.0 + r));
    case Shape::bump: {
      if (r >= radius_) return 0.0;
      const double t = r / radius_;
      return std::exp(1.0 - 1.0 / (1.0 - t * t));
    }
    case Shape::dyadic_decay: return std::pow(1.0 + std::abs(std::log(r)), -sigma_) / r;
    case Shape::grid_sampled: return 1.0;
  }
  return 0.0;
}

CMatrix PotentialSpec::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_)
    throw ValidationError("point has dimension " + std::to_string(x.size()) + ", potential expects " +
                          std::to_string(n_));
  if (shape_ == Shape::grid_sampled) {
    const auto& g = samples_->lattice;
    std::size_t flat = 0;
    for (int a = 0; a < n_; ++a) {
      const double c = x[static_cast<std::size_t>(a)];
      if (!(c >= -g.L && c < g.L))
        throw DomainError("point outside the sample box [-" + std::to_string(g.L) + ", " + std::to_string(g.L) + ")");
      int i = static_cast<int>(std::floor((c + g.L) / g.spacing()));
      i = std::clamp(i, 0, g.M - 1);
      flat = flat * static_cast<std::size_t>(g.M) + static_cast<std::size_t>(i);
    }
    return samples_->matrices[flat];
  }
  const double r = norm_of(x);
  if (shape_ == Shape::dyadic_decay && r == 0.0) throw DomainError("dyadic-decay potential is singular at x = 0");
  if (is_zero_) return CMatrix::Zero(N_, N_);
  return (coupling_ * profile(r)) * structure_;
}

double PotentialSpec::opnorm(std::span<const double> x) const {
  if (shape_ == Shape::grid_sampled) return matrix_opnorm(eval(x));
  const double r = norm_of(x);
  if (shape_ == Shape::dyadic_decay && r == 0.0) throw DomainError("dyadic-decay potential is singular at x = 0");
  return std::abs(coupling_) * profile(r) * structure_norm_;
}

RadialEnvelope PotentialSpec::envelope() const {
  const double scale = std::abs(coupling_) * structure_norm_;
  switch (shape_) {
    case Shape::inverse_square:
    case Shape::matrix_mix: return {{scale, 0.0, 0.0}, {scale, -2.0, 0.0}};
    case Shape::bump:
      return {{scale, 0.0, 0.0}, {scale * std::pow(std::max(1.0, radius_), kSupportDecay), -kSupportDecay, 0.0}};
    case Shape::dyadic_decay: return {{scale, -1.0, -sigma_}, {scale, -1.0, -sigma_}};
    case Shape::grid_sampled: {
      const double reach = std::sqrt(static_cast<double>(n_)) * samples_->lattice.L;
      return {{scale, 0.0, 0.0}, {scale * std::pow(std::max(1.0, reach), kSupportDecay), -kSupportDecay, 0.0}};
    }
  }
  return RadialEnvelope::constant(0.0);
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(shape_) << ";n=" << n_ << ";N=" << N_;
  if (shape_ == Shape::grid_sampled) {
    const auto& g = samples_->lattice;
    os << ";L=" << g.L << ";M=" << g.M << ";data=";
    for (const auto& m : samples_->matrices)
      for (Eigen::Index k = 0; k < m.size(); ++k) os << m.data()[k].real() << ',' << m.data()[k].imag() << ';';
    return os.str();
  }
  os << ";c=" << coupling_.real() << ',' << coupling_.imag();
  if (shape_ == Shape::bump) os << ";R=" << radius_;
  if (shape_ == Shape::dyadic_decay) os << ";sigma=" << sigma_;
  return os.str();
}

CMatrix eval_potential(const PotentialSpec& V, std::span<const double> x) { return V.eval(x); }

double pointwise_opnorm(const PotentialSpec& V, std::span<const double> x) { return V.opnorm(x); }

MatrixFactors polar_factors(const CMatrix& v) {
  const auto N = v.rows();
  MatrixFactors f;
  if (v.isZero(0.0)) {
    f.A = CMatrix::Zero(N, N);
    f.B = CMatrix::Zero(N, N);
    f.W = CMatrix::Zero(N, N);
    f.U = CMatrix::Identity(N, N);
    return f;
  }
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix& P = svd.matrixU();
  const CMatrix& Q = svd.matrixV();
  const Eigen::VectorXd s = svd.singularValues();
  const Eigen::VectorXd root = s.cwiseSqrt();
  f.W = Q * s.cast<cplx>().asDiagonal() * Q.adjoint();
  f.A = Q * root.cast<cplx>().asDiagonal() * Q.adjoint();
  f.B = Q * root.cast<cplx>().asDiagonal() * P.adjoint();
  f.U = P * Q.adjoint();
  return f;
}

Factorization polar_factorize(const PotentialSpec& V) { return Factorization(V); }

std::shared_ptr<SampledPotential> sample_potential(const PotentialSpec& V, const GridSpec& grid) {
  grid.validate();
  if (grid.n != V.dimension()) throw ValidationError("grid and potential dimensions differ");
  auto data = std::make_shared<SampledPotential>();
  data->lattice = grid;
  data->lattice.N = 1;
  data->N = V.matrix_size();
  data->matrices.resize(grid.points());
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  for (std::size_t p = 0; p < grid.points(); ++p) {
    grid.position(p, x);
    data->matrices[p] = V.eval(x);
  }
  return data;
}

void write_potential_text(const SampledPotential& data, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const auto& g = data.lattice;
  os.precision(17);
  os << "# diracbs sampled potential, text v1\n";
  os << "# n N M L\n" << g.n << ' ' << data.N << ' ' << g.M << ' ' << g.L << '\n';
  os << "# indices i_0..i_{n-1}, then N*N row-major entries as re im\n";
  for (std::size_t p = 0; p < g.points(); ++p) {
    const auto idx = g.unravel(p);
    for (int a = 0; a < g.n; ++a) os << idx[static_cast<std::size_t>(a)] << ' ';
    const auto& m = data.matrices[p];
    for (int r = 0; r < data.N; ++r)
      for (int c = 0; c < data.N; ++c) os << ' ' << m(r, c).real() << ' ' << m(r, c).imag();
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_potential_binary(const SampledPotential& data, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const auto& g = data.lattice;
  os.write(kPotentialMagic, sizeof kPotentialMagic);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(data.N));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.M));
  detail::put<double>(os, g.L);
  for (const auto& m : data.matrices)
    for (int r = 0; r < data.N; ++r)
      for (int c = 0; c < data.N; ++c) detail::put_complex(os, m(r, c));
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

namespace {

std::shared_ptr<SampledPotential> read_binary(std::istream& is) {
  auto data = std::make_shared<SampledPotential>();
  auto& g = data->lattice;
  g.n = static_cast<int>(detail::get<std::uint32_t>(is));
  data->N = static_cast<int>(detail::get<std::uint32_t>(is));
  g.M = static_cast<int>(detail::get<std::uint32_t>(is));
  g.L = detail::get<double>(is);
  g.N = 1;
  g.validate();
  if (data->N < 1) throw ValidationError("potential matrix size must be >= 1");
  data->matrices.assign(g.points(), CMatrix::Zero(data->N, data->N));
  for (auto& m : data->matrices)
    for (int r = 0; r < data->N; ++r)
      for (int c = 0; c < data->N; ++c) m(r, c) = detail::get_complex(is);
  return data;
}

std::shared_ptr<SampledPotential> read_text(std::istream& is) {
  auto data = std::make_shared<SampledPotential>();
  auto& g = data->lattice;
  std::string line;
  bool have_header = false;
  std::vector<char> seen;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      if (!(ls >> g.n >> data->N >> g.M >> g.L)) throw ValidationError("bad potential header on line " + std::to_string(line_no));
      g.N = 1;
      g.validate();
      data->matrices.assign(g.points(), CMatrix::Zero(data->N, data->N));
      seen.assign(g.points(), 0);
      have_header = true;
      continue;
    }
    std::size_t flat = 0;
    for (int a = 0; a < g.n; ++a) {
      int i = -1;
      if (!(ls >> i) || i < 0 || i >= g.M) throw ValidationError("bad lattice index on line " + std::to_string(line_no));
      flat = flat * static_cast<std::size_t>(g.M) + static_cast<std::size_t>(i);
    }
    if (seen[flat]) throw ValidationError("duplicate sample on line " + std::to_string(line_no));
    seen[flat] = 1;
    auto& m = data->matrices[flat];
    for (int r = 0; r < data->N; ++r) {
      for (int c = 0; c < data->N; ++c) {
        double re = 0.0;
        double im = 0.0;
        if (!(ls >> re >> im)) throw ValidationError("missing matrix entries on line " + std::to_string(line_no));
        m(r, c) = {re, im};
      }
    }
    ++rows;
  }
  if (!have_header) throw ValidationError("potential file has no header");
  if (rows != g.points())
    throw ValidationError("potential file has " + std::to_string(rows) + " samples, expected " + std::to_string(g.points()));
  return data;
}

} // namespace

std::shared_ptr<SampledPotential> read_potential_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open potential file '" + path.string() + "'");
  char magic[8] = {};
  is.read(magic, sizeof magic);
  if (is && std::memcmp(magic, kPotentialMagic, sizeof magic) == 0) return read_binary(is);
  is.clear();
  is.seekg(0);
  return read_text(is);
}

} // namespace diracbs
