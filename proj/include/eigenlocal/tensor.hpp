#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "eigenlocal/errors.hpp"

namespace eigenlocal {

using MatrixC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorC = Eigen::VectorXcd;
using index_t = std::int64_t;

index_t shape_product(std::span<const index_t> shape);

/// Dense tensor of complex doubles, row-major storage.
///
/// Axis conventions used throughout the library:
///   - MPS site tensor: (left bond, physical, right bond)
///   - MPO site tensor: (left bond, physical out, physical in, right bond)
///   - fused multi-site physical indices are row-major in site order;
///     fused bra/ket (vectorized operator) legs are out-major.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<index_t> shape);
  DenseTensor(std::vector<index_t> shape, std::vector<cplx> data);

  const std::vector<index_t>& shape() const { return shape_; }
  index_t rank() const { return static_cast<index_t>(shape_.size()); }
  index_t size() const { return static_cast<index_t>(data_.size()); }
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  cplx& at(std::span<const index_t> idx) { return data_[flat_index(idx)]; }
  const cplx& at(std::span<const index_t> idx) const { return data_[flat_index(idx)]; }
  cplx& at(std::initializer_list<index_t> idx) {
    return at(std::span<const index_t>(idx.begin(), idx.size()));
  }
  const cplx& at(std::initializer_list<index_t> idx) const {
    return at(std::span<const index_t>(idx.begin(), idx.size()));
  }

  index_t flat_index(std::span<const index_t> idx) const;

  /// Matrix view with axes [0, split) fused as rows, [split, rank) as columns.
  Eigen::Map<const MatrixC> as_matrix(index_t split) const;
  Eigen::Map<MatrixC> as_matrix(index_t split);

  /// Row-major copy of a matrix into a tensor of the given shape.
  static DenseTensor from_matrix(const Eigen::Ref<const MatrixC>& m,
                                 std::vector<index_t> shape);

 private:
  std::vector<index_t> shape_;
  std::vector<cplx> data_;
};

/// Pairwise contraction. Result shape: unpaired axes of `a` followed by
/// unpaired axes of `b`, both in original order.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const std::pair<index_t, index_t>> pairs);
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<std::pair<index_t, index_t>> pairs);

DenseTensor permute(const DenseTensor& a, std::span<const index_t> perm);
DenseTensor permute(const DenseTensor& a, std::initializer_list<index_t> perm);

/// Row-major regrouping; product of shape must be preserved.
DenseTensor reshape(const DenseTensor& a, std::vector<index_t> newshape);

DenseTensor conjugate(const DenseTensor& a);

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator*(cplx s, const DenseTensor& a);

double frobenius_norm(const DenseTensor& a);

/// sum_i conj(a_i) * b_i over identically shaped tensors.
cplx overlap(const DenseTensor& a, const DenseTensor& b);

}  // namespace eigenlocal
