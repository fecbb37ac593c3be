// Copyright 2026 The rbmk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rbmk/tensor.hpp"

#include <cmath>
#include <string>

#include "rbmk/errors.hpp"

namespace rbmk {

void CompositeDims::validate() const {
  if (env < 1) {
    throw DimensionError("environment dimension must be >= 1, got " + std::to_string(env));
  }
  if (sys < 2 || (sys & (sys - 1)) != 0) {
    throw DimensionError("system dimension must be a power of two >= 2, got " + std::to_string(sys));
  }
}

ComplexVector vectorize(const ComplexMatrix& op) {
  if (op.rows() != op.cols()) {
    throw DimensionError("vectorize: operator is not square");
  }
  const Eigen::Index d = op.rows();
  ComplexVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      v(i * d + j) = op(i, j);
    }
  }
  return v;
}

ComplexMatrix devectorize(const ComplexVector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) {
    throw DimensionError("devectorize: length is not a perfect square");
  }
  ComplexMatrix op(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      op(i, j) = v(i * d + j);
    }
  }
  return op;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& op, const CompositeDims& dims, Subsystem traced) {
  const int total = dims.total();
  if (op.rows() != total || op.cols() != total) {
    throw DimensionError("partial_trace: operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + ", expected " + std::to_string(total) + "x" +
                         std::to_string(total));
  }
  if (traced == Subsystem::Env) {
    ComplexMatrix out = ComplexMatrix::Zero(dims.sys, dims.sys);
    for (int e = 0; e < dims.env; ++e) {
      for (int s = 0; s < dims.sys; ++s) {
        for (int t = 0; t < dims.sys; ++t) {
          out(s, t) += op(dims.index(e, s), dims.index(e, t));
        }
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dims.env, dims.env);
  for (int e = 0; e < dims.env; ++e) {
    for (int f = 0; f < dims.env; ++f) {
      for (int s = 0; s < dims.sys; ++s) {
        out(e, f) += op(dims.index(e, s), dims.index(f, s));
      }
    }
  }
  return out;
}

ComplexMatrix superop_from_kraus(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) {
    throw DimensionError("superop_from_kraus: empty Kraus list");
  }
  const Eigen::Index d = kraus.front().rows();
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw DimensionError("superop_from_kraus: Kraus operators must all be square of equal size");
    }
    out += kron(k, k.conjugate());
  }
  return out;
}

ComplexMatrix conjugation_superop(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    throw DimensionError("conjugation_superop: operator is not square");
  }
  return kron(u, u.conjugate());
}

ComplexMatrix env_trace_superop(const CompositeDims& dims) {
  const int total = dims.total();
  const int ds = dims.sys;
  ComplexMatrix t = ComplexMatrix::Zero(ds * ds, static_cast<Eigen::Index>(total) * total);
  for (int e = 0; e < dims.env; ++e) {
    for (int s = 0; s < ds; ++s) {
      for (int sp = 0; sp < ds; ++sp) {
        t(s * ds + sp, dims.index(e, s) * total + dims.index(e, sp)) = 1.0;
      }
    }
  }
  return t;
}

ComplexMatrix expm_truncated(const ComplexMatrix& m, double t, int order) {
  if (m.rows() != m.cols()) {
    throw DimensionError("expm_truncated: matrix is not square");
  }
  if (order < 1) {
    throw std::invalid_argument("expm_truncated: order must be >= 1");
  }
  const ComplexMatrix tm = t * m;
  ComplexMatrix result = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix term = result;
  for (int k = 1; k <= order; ++k) {
    term = (term * tm) / static_cast<double>(k);
    result += term;
  }
  return result;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return vectorize(a).dot(vectorize(b));  // Eigen's dot conjugates the left operand
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() <= tol;
}

ComplexMatrix embed_sys_operator(const ComplexMatrix& g, const CompositeDims& dims) {
  if (g.rows() != dims.sys || g.cols() != dims.sys) {
    throw DimensionError("embed_sys_operator: operator does not match the system dimension");
  }
  return kron(ComplexMatrix::Identity(dims.env, dims.env), g);
}

ComplexMatrix embed_env_operator(const ComplexMatrix& w, const CompositeDims& dims) {
  if (w.rows() != dims.env || w.cols() != dims.env) {
    throw DimensionError("embed_env_operator: operator does not match the environment dimension");
  }
  return kron(w, ComplexMatrix::Identity(dims.sys, dims.sys));
}

const std::vector<ComplexMatrix>& single_qubit_paulis() {
  static const std::vector<ComplexMatrix> paulis = [] {
    const Complex i(0.0, 1.0);
    ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, -i, i, 0;
    z << 1, 0, 0, -1;
    return std::vector<ComplexMatrix>{id, x, y, z};
  }();
  return paulis;
}

std::vector<ComplexMatrix> pauli_basis(int n_qubits) {
  std::vector<ComplexMatrix> basis{ComplexMatrix::Identity(1, 1)};
  for (int q = 0; q < n_qubits; ++q) {
    std::vector<ComplexMatrix> next;
    next.reserve(basis.size() * 4);
    for (const auto& p : basis) {
      for (const auto& s : single_qubit_paulis()) {
        next.push_back(kron(p, s));
      }
    }
    basis = std::move(next);
  }
  return basis;
}

std::vector<std::string> pauli_labels(int n_qubits) {
  std::vector<std::string> labels{""};
  for (int q = 0; q < n_qubits; ++q) {
    std::vector<std::string> next;
    for (const auto& l : labels) {
      for (const char c : {'I', 'X', 'Y', 'Z'}) {
        next.push_back(l + c);
      }
    }
    labels = std::move(next);
  }
  return labels;
}

int qubit_count(int dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    return -1;
  }
  int n = 0;
  while ((1 << n) < dim) {
    ++n;
  }
  return n;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) {
    return false;
  }
  return ((u * u.adjoint()) - ComplexMatrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

bool is_hermitian(const ComplexMatrix& h, double tol) {
  return h.rows() == h.cols() && (h - h.adjoint()).norm() <= tol;
}

ComplexMatrix basis_projector(int dim, int i) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  p(i, i) = 1.0;
  return p;
}

}  // namespace rbmk
