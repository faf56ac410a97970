#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigenlocal {

using cplx = std::complex<double>;

/// Base class of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incompatible tensor shapes or axis specifications.
struct DimensionError : Error {
  using Error::Error;
};

/// Iterative eigensolver ran out of iterations; carries the last iterate.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, std::vector<cplx> iterate)
      : Error(what), last_iterate(std::move(iterate)) {}
  std::vector<cplx> last_iterate;
};

/// A dense object would exceed the configured entry cap.
struct SizeCapError : Error {
  using Error::Error;
};

/// A blocked map is rank deficient where injectivity was required.
struct RankDeficiencyError : Error {
  RankDeficiencyError(const std::string& what, std::int64_t rank)
      : Error(what), observed_rank(rank) {}
  std::int64_t observed_rank;
};

/// Degenerate dominant transfer eigenvalue: the tensor is not injective.
struct NonInjectivityError : Error {
  using Error::Error;
};

/// Requested construction lies outside the supported parameter range.
struct UnsupportedConstructionError : Error {
  using Error::Error;
};

/// Malformed input file or command-line argument.
struct InputError : Error {
  using Error::Error;
};

}  // namespace eigenlocal
