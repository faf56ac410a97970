#include "eigenlocal/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace eigenlocal {

namespace {

std::vector<index_t> row_major_strides(std::span<const index_t> shape) {
  std::vector<index_t> strides(shape.size(), 1);
  for (index_t i = static_cast<index_t>(shape.size()) - 2; i >= 0; --i) {
    strides[i] = strides[i + 1] * shape[i + 1];
  }
  return strides;
}

std::string shape_str(std::span<const index_t> shape) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    os << shape[i] << (i + 1 < shape.size() ? "," : "");
  }
  os << ")";
  return os.str();
}

}  // namespace

index_t shape_product(std::span<const index_t> shape) {
  index_t p = 1;
  for (index_t s : shape) p *= s;
  return p;
}

DenseTensor::DenseTensor(std::vector<index_t> shape)
    : shape_(std::move(shape)) {
  for (index_t s : shape_) {
    if (s <= 0) throw DimensionError("axis lengths must be positive, got shape " + shape_str(shape_));
  }
  data_.assign(static_cast<std::size_t>(shape_product(shape_)), cplx(0.0, 0.0));
}

DenseTensor::DenseTensor(std::vector<index_t> shape, std::vector<cplx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (index_t s : shape_) {
    if (s <= 0) throw DimensionError("axis lengths must be positive, got shape " + shape_str(shape_));
  }
  if (shape_product(shape_) != static_cast<index_t>(data_.size())) {
    throw DimensionError("data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str(shape_));
  }
}

index_t DenseTensor::flat_index(std::span<const index_t> idx) const {
  if (static_cast<index_t>(idx.size()) != rank()) {
    throw DimensionError("index rank mismatch");
  }
  index_t flat = 0;
  for (index_t k = 0; k < rank(); ++k) {
    if (idx[k] < 0 || idx[k] >= shape_[k]) throw DimensionError("index out of range");
    flat = flat * shape_[k] + idx[k];
  }
  return flat;
}

Eigen::Map<const MatrixC> DenseTensor::as_matrix(index_t split) const {
  if (split < 0 || split > rank()) throw DimensionError("bad matrix split");
  const index_t rows = shape_product(std::span<const index_t>(shape_.data(), split));
  const index_t cols = size() / std::max<index_t>(rows, 1);
  return Eigen::Map<const MatrixC>(data_.data(), rows, cols);
}

Eigen::Map<MatrixC> DenseTensor::as_matrix(index_t split) {
  if (split < 0 || split > rank()) throw DimensionError("bad matrix split");
  const index_t rows = shape_product(std::span<const index_t>(shape_.data(), split));
  const index_t cols = size() / std::max<index_t>(rows, 1);
  return Eigen::Map<MatrixC>(data_.data(), rows, cols);
}

DenseTensor DenseTensor::from_matrix(const Eigen::Ref<const MatrixC>& m,
                                     std::vector<index_t> shape) {
  std::vector<cplx> data(static_cast<std::size_t>(m.rows() * m.cols()));
  Eigen::Map<MatrixC>(data.data(), m.rows(), m.cols()) = m;
  return DenseTensor(std::move(shape), std::move(data));
}

DenseTensor permute(const DenseTensor& a, std::span<const index_t> perm) {
  const index_t r = a.rank();
  if (static_cast<index_t>(perm.size()) != r) {
    throw DimensionError("permutation rank mismatch");
  }
  std::vector<bool> seen(static_cast<std::size_t>(r), false);
  for (index_t p : perm) {
    if (p < 0 || p >= r || seen[static_cast<std::size_t>(p)]) {
      throw DimensionError("invalid permutation");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }

  std::vector<index_t> new_shape(static_cast<std::size_t>(r));
  for (index_t k = 0; k < r; ++k) new_shape[k] = a.shape()[perm[k]];

  DenseTensor out(new_shape);
  if (a.size() == 0) return out;

  const auto in_strides = row_major_strides(a.shape());
  // stride in the input for a unit step of output axis k
  std::vector<index_t> step(static_cast<std::size_t>(r));
  for (index_t k = 0; k < r; ++k) step[k] = in_strides[perm[k]];

  std::vector<index_t> idx(static_cast<std::size_t>(r), 0);
  index_t src = 0;
  const index_t n = a.size();
  for (index_t flat = 0; flat < n; ++flat) {
    out.data()[flat] = a.data()[src];
    for (index_t k = r - 1; k >= 0; --k) {
      if (++idx[k] < new_shape[k]) {
        src += step[k];
        break;
      }
      idx[k] = 0;
      src -= step[k] * (new_shape[k] - 1);
    }
  }
  return out;
}

DenseTensor permute(const DenseTensor& a, std::initializer_list<index_t> perm) {
  return permute(a, std::span<const index_t>(perm.begin(), perm.size()));
}

DenseTensor reshape(const DenseTensor& a, std::vector<index_t> newshape) {
  if (shape_product(newshape) != a.size()) {
    throw DimensionError("reshape size mismatch: " + std::to_string(a.size()) +
                         " entries vs shape " + shape_str(newshape));
  }
  return DenseTensor(std::move(newshape), a.data());
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const std::pair<index_t, index_t>> pairs) {
  std::vector<bool> used_a(static_cast<std::size_t>(a.rank()), false);
  std::vector<bool> used_b(static_cast<std::size_t>(b.rank()), false);
  for (const auto& [ax, bx] : pairs) {
    if (ax < 0 || ax >= a.rank() || bx < 0 || bx >= b.rank()) {
      throw DimensionError("contraction axis out of range");
    }
    if (used_a[static_cast<std::size_t>(ax)] || used_b[static_cast<std::size_t>(bx)]) {
      throw DimensionError("contraction pairs must be disjoint");
    }
    used_a[static_cast<std::size_t>(ax)] = used_b[static_cast<std::size_t>(bx)] = true;
    if (a.shape()[ax] != b.shape()[bx]) {
      throw DimensionError("contracted axis length mismatch: axis " + std::to_string(ax) +
                           " of lhs has length " + std::to_string(a.shape()[ax]) +
                           ", axis " + std::to_string(bx) + " of rhs has length " +
                           std::to_string(b.shape()[bx]));
    }
  }

  std::vector<index_t> free_a, free_b, cont_a, cont_b;
  for (index_t k = 0; k < a.rank(); ++k) {
    if (!used_a[static_cast<std::size_t>(k)]) free_a.push_back(k);
  }
  for (index_t k = 0; k < b.rank(); ++k) {
    if (!used_b[static_cast<std::size_t>(k)]) free_b.push_back(k);
  }
  for (const auto& [ax, bx] : pairs) {
    cont_a.push_back(ax);
    cont_b.push_back(bx);
  }

  std::vector<index_t> perm_a = free_a;
  perm_a.insert(perm_a.end(), cont_a.begin(), cont_a.end());
  std::vector<index_t> perm_b = cont_b;
  perm_b.insert(perm_b.end(), free_b.begin(), free_b.end());

  const DenseTensor at = permute(a, perm_a);
  const DenseTensor bt = permute(b, perm_b);

  std::vector<index_t> out_shape;
  for (index_t k : free_a) out_shape.push_back(a.shape()[k]);
  for (index_t k : free_b) out_shape.push_back(b.shape()[k]);

  MatrixC res = at.as_matrix(static_cast<index_t>(free_a.size())) *
                bt.as_matrix(static_cast<index_t>(cont_b.size()));
  return DenseTensor::from_matrix(res, std::move(out_shape));
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<std::pair<index_t, index_t>> pairs) {
  return contract(a, b, std::span<const std::pair<index_t, index_t>>(pairs.begin(), pairs.size()));
}

DenseTensor conjugate(const DenseTensor& a) {
  DenseTensor out = a;
  for (cplx& v : out.data()) v = std::conj(v);
  return out;
}

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("shape mismatch in tensor addition");
  DenseTensor out = a;
  for (index_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("shape mismatch in tensor subtraction");
  DenseTensor out = a;
  for (index_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

DenseTensor operator*(cplx s, const DenseTensor& a) {
  DenseTensor out = a;
  for (cplx& v : out.data()) v *= s;
  return out;
}

double frobenius_norm(const DenseTensor& a) {
  double acc = 0.0;
  for (const cplx& v : a.data()) acc += std::norm(v);
  return std::sqrt(acc);
}

cplx overlap(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("shape mismatch in overlap");
  cplx acc(0.0, 0.0);
  for (index_t i = 0; i < a.size(); ++i) acc += std::conj(a.data()[i]) * b.data()[i];
  return acc;
}

}  // namespace eigenlocal
