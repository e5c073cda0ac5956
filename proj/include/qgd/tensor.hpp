// Copyright 2026 The qgd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file tensor.hpp
 * @brief Dense complex matrices and gate construction for small qubit registers.
 *
 * Basis-state convention: qubit 0 is the most significant bit of a basis index,
 * so on n qubits qubit q lives at bit position (n - 1 - q).
 */
#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qgd {

using cplx = std::complex<double>;

/// Largest register the dense kernels accept by default.
inline constexpr int kDefaultMaxQubits = 6;
/// Default absolute tolerance for unitarity and equality checks.
inline constexpr double kDefaultTolerance = 1e-12;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
      : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim_ * dim_)
      throw std::invalid_argument("ComplexMatrix: entry count " +
                                  std::to_string(data_.size()) +
                                  " does not match dim^2 = " +
                                  std::to_string(dim_ * dim_));
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * dim_ + c];
  }

  std::span<cplx> entries() noexcept { return data_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  cplx* row(std::size_t r) noexcept { return data_.data() + r * dim_; }
  const cplx* row(std::size_t r) const noexcept { return data_.data() + r * dim_; }

  ComplexMatrix dagger() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  cplx trace() const noexcept {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator*=(cplx s) noexcept {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a, b, "operator+");
    ComplexMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a, b, "operator-");
    ComplexMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
    return out;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a, b, "matmul");
    const std::size_t n = a.dim_;
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx* o = out.row(i);
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        const cplx* brow = b.row(k);
        for (std::size_t j = 0; j < n; ++j) o[j] += aik * brow[j];
      }
    }
    return out;
  }

  /// Largest entrywise modulus of (a - b).
  friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
    return m;
  }

  double frobenius_norm_sq() const noexcept {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return s;
  }

  bool is_unitary(double tol = kDefaultTolerance) const {
    return max_abs_diff(dagger() * *this, identity(dim_)) < tol;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  static void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                             const char* what) {
    if (a.dim_ != b.dim_)
      throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                  std::to_string(a.dim_) + " vs " +
                                  std::to_string(b.dim_) + ")");
  }

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b; }
inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.dagger(); }
inline cplx trace(const ComplexMatrix& a) { return a.trace(); }

/// Number of qubits for a register matrix; throws if dim is not a power of two.
inline int qubit_count(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

/// Bit mask of qubit q inside an n-qubit basis index.
inline constexpr std::size_t qubit_mask(int n, int q) noexcept {
  return std::size_t{1} << (n - 1 - q);
}

// ---------------------------------------------------------------------------
// Rotations

enum class RotationAxis { X, Z };

inline std::string_view to_string(RotationAxis a) { return a == RotationAxis::X ? "x" : "z"; }

inline RotationAxis parse_axis(std::string_view s) {
  if (s == "x" || s == "X") return RotationAxis::X;
  if (s == "z" || s == "Z") return RotationAxis::Z;
  throw std::invalid_argument("unknown rotation axis '" + std::string(s) + "'");
}

/// 2x2 gate in row-major order.
using Gate2 = std::array<cplx, 4>;

/// Pauli generator A of the axis (A^2 = I).
inline Gate2 pauli(RotationAxis axis) noexcept {
  if (axis == RotationAxis::X) return {0.0, 1.0, 1.0, 0.0};
  return {1.0, 0.0, 0.0, -1.0};
}

/// exp(-i theta A / 2) = cos(theta/2) I - i sin(theta/2) A, without validation.
inline Gate2 rotation_entries(RotationAxis axis, double theta) noexcept {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  if (axis == RotationAxis::X) return {cplx(c, 0.0), cplx(0.0, -s), cplx(0.0, -s), cplx(c, 0.0)};
  return {cplx(c, -s), 0.0, 0.0, cplx(c, s)};
}

inline ComplexMatrix rotation_gate(RotationAxis axis, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation_gate: non-finite angle");
  const Gate2 g = rotation_entries(axis, theta);
  return ComplexMatrix(2, {g.begin(), g.end()});
}

inline ComplexMatrix to_matrix(const Gate2& g) { return ComplexMatrix(2, {g.begin(), g.end()}); }

// ---------------------------------------------------------------------------
// Local application of small gates to register matrices. These are the O(dim^2)
// kernels behind both circuit evaluation and the optimizer's cached products.

/// M <- E(g) M, with g a 2x2 gate on qubit q.
inline void apply_left(ComplexMatrix& m, int n, int q, const Gate2& g) {
  const std::size_t dim = m.dim();
  const std::size_t bit = qubit_mask(n, q);
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & bit) continue;
    cplx* r0 = m.row(i0);
    cplx* r1 = m.row(i0 | bit);
    for (std::size_t c = 0; c < dim; ++c) {
      const cplx a = r0[c], b = r1[c];
      r0[c] = g[0] * a + g[1] * b;
      r1[c] = g[2] * a + g[3] * b;
    }
  }
}

/// M <- M E(g), with g a 2x2 gate on qubit q.
inline void apply_right(ComplexMatrix& m, int n, int q, const Gate2& g) {
  const std::size_t dim = m.dim();
  const std::size_t bit = qubit_mask(n, q);
  for (std::size_t r = 0; r < dim; ++r) {
    cplx* row = m.row(r);
    for (std::size_t j0 = 0; j0 < dim; ++j0) {
      if (j0 & bit) continue;
      const cplx a = row[j0], b = row[j0 | bit];
      row[j0] = a * g[0] + b * g[2];
      row[j0 | bit] = a * g[1] + b * g[3];
    }
  }
}

/// M <- diag(d) M.
inline void scale_rows(ComplexMatrix& m, std::span<const cplx> d) {
  const std::size_t dim = m.dim();
  for (std::size_t r = 0; r < dim; ++r) {
    if (d[r] == cplx(1.0)) continue;
    cplx* row = m.row(r);
    for (std::size_t c = 0; c < dim; ++c) row[c] *= d[r];
  }
}

/// M <- M diag(d).
inline void scale_cols(ComplexMatrix& m, std::span<const cplx> d) {
  const std::size_t dim = m.dim();
  for (std::size_t r = 0; r < dim; ++r) {
    cplx* row = m.row(r);
    for (std::size_t c = 0; c < dim; ++c) row[c] *= d[c];
  }
}

namespace detail {

inline void check_targets(std::span<const int> targets, int n) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n)
      throw std::invalid_argument("target qubit " + std::to_string(targets[i]) +
                                  " out of range for " + std::to_string(n) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j])
        throw std::invalid_argument("duplicate target qubit " + std::to_string(targets[i]));
  }
}

/// Offsets of the 2^k local basis states inside the register index; target[0]
/// is the most significant local bit.
inline std::vector<std::size_t> local_offsets(std::span<const int> targets, int n) {
  const std::size_t k = targets.size();
  std::vector<std::size_t> off(std::size_t{1} << k, 0);
  for (std::size_t l = 0; l < off.size(); ++l)
    for (std::size_t t = 0; t < k; ++t)
      if (l & (std::size_t{1} << (k - 1 - t))) off[l] |= qubit_mask(n, targets[t]);
  return off;
}

inline std::size_t target_mask(std::span<const int> targets, int n) {
  std::size_t mask = 0;
  for (int t : targets) mask |= qubit_mask(n, t);
  return mask;
}

}  // namespace detail

/// M <- E(g) M for a k-qubit gate g on the given targets.
inline void apply_left(ComplexMatrix& m, int n, std::span<const int> targets,
                       const ComplexMatrix& g) {
  const auto off = detail::local_offsets(targets, n);
  const std::size_t mask = detail::target_mask(targets, n);
  const std::size_t local = off.size();
  std::vector<cplx> buf(local);
  for (std::size_t base = 0; base < m.dim(); ++base) {
    if (base & mask) continue;
    for (std::size_t c = 0; c < m.dim(); ++c) {
      for (std::size_t l = 0; l < local; ++l) buf[l] = m(base | off[l], c);
      for (std::size_t l = 0; l < local; ++l) {
        cplx acc = 0.0;
        for (std::size_t p = 0; p < local; ++p) acc += g(l, p) * buf[p];
        m(base | off[l], c) = acc;
      }
    }
  }
}

/// M <- M E(g) for a k-qubit gate g on the given targets.
inline void apply_right(ComplexMatrix& m, int n, std::span<const int> targets,
                        const ComplexMatrix& g) {
  const auto off = detail::local_offsets(targets, n);
  const std::size_t mask = detail::target_mask(targets, n);
  const std::size_t local = off.size();
  std::vector<cplx> buf(local);
  for (std::size_t r = 0; r < m.dim(); ++r) {
    cplx* row = m.row(r);
    for (std::size_t base = 0; base < m.dim(); ++base) {
      if (base & mask) continue;
      for (std::size_t l = 0; l < local; ++l) buf[l] = row[base | off[l]];
      for (std::size_t l = 0; l < local; ++l) {
        cplx acc = 0.0;
        for (std::size_t p = 0; p < local; ++p) acc += buf[p] * g(p, l);
        row[base | off[l]] = acc;
      }
    }
  }
}

/// The 2^n matrix acting as `gate` on `targets` and as identity elsewhere.
inline ComplexMatrix embed(const ComplexMatrix& gate, std::span<const int> targets, int n) {
  detail::check_targets(targets, n);
  if (gate.dim() != (std::size_t{1} << targets.size()))
    throw std::invalid_argument("embed: gate dimension " + std::to_string(gate.dim()) +
                                " does not match " + std::to_string(targets.size()) +
                                " targets");
  ComplexMatrix out = ComplexMatrix::identity(std::size_t{1} << n);
  apply_left(out, n, targets, gate);
  return out;
}

inline ComplexMatrix embed(const ComplexMatrix& gate, std::initializer_list<int> targets, int n) {
  return embed(gate, std::span<const int>(targets.begin(), targets.size()), n);
}

/// Sum over the other qubits of the 2x2 diagonal blocks of M at qubit q:
/// block[a][b] = sum_rest M[(rest,a),(rest,b)]. Then tr(E(R) M) = sum_ab R[a][b] block[b][a].
inline Gate2 qubit_block(const ComplexMatrix& m, int n, int q) noexcept {
  const std::size_t bit = qubit_mask(n, q);
  Gate2 b{};
  for (std::size_t i0 = 0; i0 < m.dim(); ++i0) {
    if (i0 & bit) continue;
    const std::size_t i1 = i0 | bit;
    b[0] += m(i0, i0);
    b[1] += m(i0, i1);
    b[2] += m(i1, i0);
    b[3] += m(i1, i1);
  }
  return b;
}

/// tr(E(g) M) given the qubit block of M.
inline cplx trace_with_block(const Gate2& g, const Gate2& block) noexcept {
  return g[0] * block[0] + g[1] * block[2] + g[2] * block[1] + g[3] * block[3];
}

// ---------------------------------------------------------------------------
// Named gates

/// Diagonal gate flipping the sign of the all-ones state on k qubits (k = 2 is CZ).
inline ComplexMatrix controlled_z(int k) {
  if (k < 1) throw std::invalid_argument("controlled_z: need at least one qubit");
  std::vector<cplx> d(std::size_t{1} << k, 1.0);
  d.back() = -1.0;
  return ComplexMatrix::diagonal(d);
}

/// Recognized names: cz, ccz, cccz, i (identity, `identity_dim` wide).
inline ComplexMatrix named_gate(std::string_view name, std::size_t identity_dim = 2) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "cz") return controlled_z(2);
  if (s == "ccz") return controlled_z(3);
  if (s == "cccz") return controlled_z(4);
  if (s == "i" || s == "id" || s == "identity") {
    qubit_count(identity_dim);
    return ComplexMatrix::identity(identity_dim);
  }
  throw std::invalid_argument("unknown gate name '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// JSON: {"dim": d, "entries": [[re, im], ...]} in row-major order.

inline void to_json(nlohmann::json& j, const ComplexMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& v : m.entries()) entries.push_back({v.real(), v.imag()});
  j = nlohmann::json{{"dim", m.dim()}, {"entries", std::move(entries)}};
}

inline void from_json(const nlohmann::json& j, ComplexMatrix& m) {
  const auto dim = j.at("dim").get<std::size_t>();
  const auto& e = j.at("entries");
  std::vector<cplx> v;
  v.reserve(e.size());
  for (const auto& x : e) {
    if (!x.is_array() || x.size() != 2)
      throw std::invalid_argument("matrix entry must be [re, im]");
    v.emplace_back(x[0].get<double>(), x[1].get<double>());
  }
  m = ComplexMatrix(dim, std::move(v));
}

}  // namespace qgd
