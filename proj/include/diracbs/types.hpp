#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace diracbs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Argument outside the domain of a function (x = 0 for a singular weight,
/// a point outside the sample lattice of a grid potential, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Input that violates a documented precondition of an operation.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: near-singular resolvent, non-convergence, size guard.
class ComputationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Free operator selected for resolvents, assembly and Birman-Schwinger work.
enum class OperatorKind { schrodinger, klein_gordon, dirac };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

} // namespace diracbs
