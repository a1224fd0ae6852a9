// Copyright 2026 The pptcost Authors
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

// Dense complex linear algebra for operators on H_A (x) H_B.
//
// Every operator is stored as a full (dA*dB) x (dA*dB) complex matrix in the
// computational product basis |a b>, row index a*dB + b.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "pptcost/errors.hpp"

namespace pptcost {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Numerical tolerances shared by the validity checks of this module.
struct Tolerances {
  double herm = 1e-8;
  double trace = 1e-8;
  double psd = 1e-8;
  double rank = 1e-9;
};

/// Local dimensions of a bipartite system.
struct Dims {
  int a = 1;
  int b = 1;

  int total() const { return a * b; }
  bool operator==(const Dims&) const = default;
};

inline std::string to_string(Dims d) {
  return "(" + std::to_string(d.a) + "," + std::to_string(d.b) + ")";
}

/// A square complex matrix tagged with its tensor factorization.
class BipartiteOperator {
 public:
  BipartiteOperator() : m_(CMatrix::Zero(1, 1)), dims_{1, 1} {}

  BipartiteOperator(CMatrix m, Dims dims) : m_(std::move(m)), dims_(dims) {
    if (dims_.a < 1 || dims_.b < 1) {
      throw ShapeMismatch("local dimensions must be positive, got " +
                          to_string(dims_));
    }
    if (m_.rows() != m_.cols() || m_.rows() != dims_.total()) {
      throw ShapeMismatch("matrix of shape " + std::to_string(m_.rows()) + "x" +
                          std::to_string(m_.cols()) +
                          " does not match dims " + to_string(dims_));
    }
  }

  static BipartiteOperator identity(Dims d) {
    return {CMatrix::Identity(d.total(), d.total()), d};
  }
  static BipartiteOperator zero(Dims d) {
    return {CMatrix::Zero(d.total(), d.total()), d};
  }

  const CMatrix& matrix() const { return m_; }
  Dims dims() const { return dims_; }
  int side() const { return static_cast<int>(m_.rows()); }

  cplx trace() const { return m_.trace(); }
  BipartiteOperator adjoint() const { return {m_.adjoint(), dims_}; }

  BipartiteOperator operator+(const BipartiteOperator& o) const {
    check_same(o);
    return {m_ + o.m_, dims_};
  }
  BipartiteOperator operator-(const BipartiteOperator& o) const {
    check_same(o);
    return {m_ - o.m_, dims_};
  }
  BipartiteOperator operator*(double s) const { return {m_ * s, dims_}; }
  friend BipartiteOperator operator*(double s, const BipartiteOperator& x) {
    return x * s;
  }

 private:
  void check_same(const BipartiteOperator& o) const {
    if (!(o.dims_ == dims_)) {
      throw ShapeMismatch("operator dims " + to_string(dims_) + " vs " +
                          to_string(o.dims_));
    }
  }

  CMatrix m_;
  Dims dims_;
};

/// Largest entry of |X - X^dagger|.
inline double hermiticity_residual(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

inline CMatrix hermitian_part(const CMatrix& x) {
  return 0.5 * (x + x.adjoint());
}

/// X^{T_B}: every dB x dB block is transposed in place.
inline CMatrix partial_transpose(const CMatrix& x, Dims d) {
  const int db = d.b;
  CMatrix out(x.rows(), x.cols());
  for (int a = 0; a < d.a; ++a) {
    for (int ap = 0; ap < d.a; ++ap) {
      for (int b = 0; b < db; ++b) {
        for (int bp = 0; bp < db; ++bp) {
          out(a * db + b, ap * db + bp) = x(a * db + bp, ap * db + b);
        }
      }
    }
  }
  return out;
}

inline BipartiteOperator partial_transpose(const BipartiteOperator& x) {
  return {partial_transpose(x.matrix(), x.dims()), x.dims()};
}

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // columns are eigenvectors
};

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
inline EigenDecomposition eig_herm(const CMatrix& h, double tol_herm = 1e-8) {
  const double scale = std::max(1.0, h.size() ? h.cwiseAbs().maxCoeff() : 0.0);
  const double res = hermiticity_residual(h);
  if (res > tol_herm * scale) {
    throw NotHermitian("matrix is not Hermitian (residual " +
                       std::to_string(res) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) {
    throw NotHermitian("eigen decomposition did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

inline EigenDecomposition eig_herm(const BipartiteOperator& h,
                                   double tol_herm = 1e-8) {
  return eig_herm(h.matrix(), tol_herm);
}

inline RVector eigenvalues_herm(const CMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(h),
                                                Eigen::EigenvaluesOnly)
      .eigenvalues();
}

inline double min_eigenvalue(const CMatrix& h) {
  return eigenvalues_herm(h).minCoeff();
}
inline double max_eigenvalue(const CMatrix& h) {
  return eigenvalues_herm(h).maxCoeff();
}

/// Sum of singular values. Hermitian inputs take the eigenvalue path.
inline double trace_norm(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (hermiticity_residual(x) <= 1e-12 * scale) {
    return eigenvalues_herm(x).cwiseAbs().sum();
  }
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues().sum();
}
inline double trace_norm(const BipartiteOperator& x) {
  return trace_norm(x.matrix());
}

/// Largest singular value.
inline double spectral_norm(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (hermiticity_residual(x) <= 1e-12 * scale) {
    return eigenvalues_herm(x).cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues()(0);
}
inline double spectral_norm(const BipartiteOperator& x) {
  return spectral_norm(x.matrix());
}

/// Number of eigenvalues strictly above tol_rank.
inline int numerical_rank(const CMatrix& h, double tol_rank = 1e-9,
                          double tol_herm = 1e-8) {
  const auto ed = eig_herm(h, tol_herm);
  return static_cast<int>((ed.values.array() > tol_rank).count());
}
inline int numerical_rank(const BipartiteOperator& h, double tol_rank = 1e-9,
                          double tol_herm = 1e-8) {
  return numerical_rank(h.matrix(), tol_rank, tol_herm);
}

/// Tensor product of A on (A,B) with B on (A',B'), stored on (AA')(BB').
inline BipartiteOperator kron(const BipartiteOperator& x,
                              const BipartiteOperator& y) {
  const Dims dx = x.dims();
  const Dims dy = y.dims();
  const Dims d{dx.a * dy.a, dx.b * dy.b};
  const int nb = d.b;
  auto index = [&](int a, int b, int ap, int bp) {
    return (a * dy.a + ap) * nb + (b * dy.b + bp);
  };
  CMatrix out = CMatrix::Zero(d.total(), d.total());
  const CMatrix& xm = x.matrix();
  const CMatrix& ym = y.matrix();
  for (int a = 0; a < dx.a; ++a)
    for (int b = 0; b < dx.b; ++b)
      for (int c = 0; c < dx.a; ++c)
        for (int e = 0; e < dx.b; ++e) {
          const cplx xv = xm(a * dx.b + b, c * dx.b + e);
          if (xv == cplx(0.0)) continue;
          for (int ap = 0; ap < dy.a; ++ap)
            for (int bp = 0; bp < dy.b; ++bp)
              for (int cp = 0; cp < dy.a; ++cp)
                for (int ep = 0; ep < dy.b; ++ep) {
                  out(index(a, b, ap, bp), index(c, e, cp, ep)) =
                      xv * ym(ap * dy.b + bp, cp * dy.b + ep);
                }
        }
  return {out, d};
}

/// Plain Kronecker product (no reordering), e.g. U_A (x) U_B.
inline CMatrix kron_plain(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

/// U X U^dagger.
inline BipartiteOperator conjugate(const CMatrix& u, const BipartiteOperator& x) {
  return {u * x.matrix() * u.adjoint(), x.dims()};
}

/// A trace-one PSD operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(BipartiteOperator op, const Tolerances& tol = {})
      : op_(std::move(op)) {
    const CMatrix& m = op_.matrix();
    const double res = hermiticity_residual(m);
    if (res > tol.herm) {
      throw NotHermitian("density matrix is not Hermitian (residual " +
                         std::to_string(res) + ")");
    }
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
      throw InvalidInput("density matrix trace " + std::to_string(tr) +
                         " differs from 1");
    }
    const double lmin = min_eigenvalue(m);
    if (lmin < -tol.psd) {
      throw InvalidInput("density matrix has negative eigenvalue " +
                         std::to_string(lmin));
    }
  }

  const BipartiteOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }
  Dims dims() const { return op_.dims(); }
  int side() const { return op_.side(); }

 private:
  BipartiteOperator op_;
};

/// An ordered list of PSD operators summing to the identity.
class Povm {
 public:
  explicit Povm(std::vector<BipartiteOperator> elements,
                const Tolerances& tol = {})
      : elements_(std::move(elements)) {
    if (elements_.size() < 2) {
      throw InvalidInput("a POVM needs at least two elements");
    }
    const Dims d = elements_.front().dims();
    CMatrix sum = CMatrix::Zero(d.total(), d.total());
    for (const auto& e : elements_) {
      if (!(e.dims() == d)) {
        throw ShapeMismatch("POVM elements have differing dims");
      }
      if (hermiticity_residual(e.matrix()) > tol.herm) {
        throw NotHermitian("POVM element is not Hermitian");
      }
      if (min_eigenvalue(e.matrix()) < -tol.psd) {
        throw InvalidInput("POVM element is not PSD");
      }
      sum += e.matrix();
    }
    const double dev =
        (sum - CMatrix::Identity(d.total(), d.total())).cwiseAbs().maxCoeff();
    if (dev > tol.trace) {
      throw InvalidInput("POVM elements sum to identity only within " +
                         std::to_string(dev));
    }
  }

  const std::vector<BipartiteOperator>& elements() const { return elements_; }
  const BipartiteOperator& operator[](std::size_t i) const {
    return elements_[i];
  }
  std::size_t size() const { return elements_.size(); }
  Dims dims() const { return elements_.front().dims(); }

 private:
  std::vector<BipartiteOperator> elements_;
};

/// Phi_k^+ = (1/k) sum_{ij} |ii><jj| on dims (k,k).
inline DensityMatrix max_entangled(int k) {
  if (k < 1) throw InvalidInput("max_entangled needs k >= 1");
  CVector v = CVector::Zero(k * k);
  for (int i = 0; i < k; ++i) v(i * k + i) = 1.0 / std::sqrt(double(k));
  return DensityMatrix(BipartiteOperator(v * v.adjoint(), Dims{k, k}));
}

/// Projectors onto the symmetric and antisymmetric subspaces of k (x) k.
inline std::pair<BipartiteOperator, BipartiteOperator> sym_antisym_projectors(
    int k) {
  if (k < 2) throw InvalidInput("sym_antisym_projectors needs k >= 2");
  const int n = k * k;
  CMatrix swap = CMatrix::Zero(n, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) swap(j * k + i, i * k + j) = 1.0;
  const CMatrix id = CMatrix::Identity(n, n);
  return {BipartiteOperator(0.5 * (id + swap), Dims{k, k}),
          BipartiteOperator(0.5 * (id - swap), Dims{k, k})};
}

/// Two states with priors p0 + p1 = 1.
struct DiscriminationInstance {
  DensityMatrix rho0;
  DensityMatrix rho1;
  double p0 = 0.5;
  double p1 = 0.5;

  DiscriminationInstance(DensityMatrix r0, DensityMatrix r1, double q0 = 0.5)
      : rho0(std::move(r0)), rho1(std::move(r1)), p0(q0), p1(1.0 - q0) {
    if (!(rho0.dims() == rho1.dims())) {
      throw ShapeMismatch("states have different dims " +
                          to_string(rho0.dims()) + " vs " +
                          to_string(rho1.dims()));
    }
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
      throw InvalidInput("prior p0 must lie in [0,1]");
    }
  }

  Dims dims() const { return rho0.dims(); }
  int side() const { return rho0.side(); }
  bool equal_priors() const { return std::abs(p0 - 0.5) < 1e-15; }

  /// p0 rho0 - p1 rho1.
  CMatrix weighted_difference() const {
    return p0 * rho0.matrix() - p1 * rho1.matrix();
  }
  DiscriminationInstance swapped() const {
    return DiscriminationInstance(rho1, rho0, p1);
  }
};

struct HelstromMeasurement {
  BipartiteOperator m_plus;
  BipartiteOperator m_minus;
};

/// Projector onto the strictly positive eigenspace of p0 rho0 - p1 rho1.
/// Eigenvalues at or below tol_rank go to m_minus.
inline HelstromMeasurement helstrom_projectors(
    const DiscriminationInstance& inst, double tol_rank = 1e-9) {
  const auto ed = eig_herm(inst.weighted_difference());
  const int n = inst.side();
  CMatrix plus = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (ed.values(i) > tol_rank) {
      plus += ed.vectors.col(i) * ed.vectors.col(i).adjoint();
    }
  }
  plus = hermitian_part(plus);
  CMatrix minus = CMatrix::Identity(n, n) - plus;
  return {BipartiteOperator(plus, inst.dims()),
          BipartiteOperator(minus, inst.dims())};
}

}  // namespace pptcost
