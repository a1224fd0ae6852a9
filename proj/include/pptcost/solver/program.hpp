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

// Modeling layer for semidefinite programs over Hermitian matrix variables.
//
// Every variable is flattened into real coordinates. A Hermitian variable of
// side n owns n*n consecutive coordinates: first the n diagonal entries, then
// for each pair i<j (row-major) the real and the imaginary part of X(i,j).
// Affine expressions map coordinates to sparse complex coefficient matrices.

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"

namespace pptcost::sdp {

struct Entry {
  int row = 0;
  int col = 0;
  cplx value;
};

namespace detail {

inline void normalize(std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  std::vector<Entry> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (!out.empty() && out.back().row == e.row && out.back().col == e.col) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Entry& e) { return e.value == cplx(0.0); }),
            out.end());
  entries = std::move(out);
}

}  // namespace detail

/// Real affine function of the coordinates.
class ScalarExpr {
 public:
  ScalarExpr(double constant = 0.0) : constant_(constant) {}  // NOLINT

  static ScalarExpr coordinate(int index, double coef = 1.0) {
    ScalarExpr s;
    s.terms_[index] = coef;
    return s;
  }

  double constant() const { return constant_; }
  const std::map<int, double>& terms() const { return terms_; }

  double evaluate(const RVector& y) const {
    double v = constant_;
    for (const auto& [i, c] : terms_) v += c * y(i);
    return v;
  }

  ScalarExpr& operator+=(const ScalarExpr& o) {
    constant_ += o.constant_;
    for (const auto& [i, c] : o.terms_) terms_[i] += c;
    prune();
    return *this;
  }
  ScalarExpr& operator-=(const ScalarExpr& o) { return *this += o * -1.0; }
  ScalarExpr& operator*=(double s) {
    constant_ *= s;
    for (auto& [i, c] : terms_) c *= s;
    prune();
    return *this;
  }
  friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
  friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }
  friend ScalarExpr operator*(ScalarExpr a, double s) { return a *= s; }
  friend ScalarExpr operator*(double s, ScalarExpr a) { return a *= s; }
  friend ScalarExpr operator-(ScalarExpr a) { return a *= -1.0; }

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
  }

  double constant_ = 0.0;
  std::map<int, double> terms_;
};

/// Hermitian-matrix-valued affine function of the coordinates.
class HermExpr {
 public:
  explicit HermExpr(int side = 1) : constant_(CMatrix::Zero(side, side)) {}
  HermExpr(const CMatrix& constant) : constant_(constant) {}  // NOLINT

  /// The Hermitian variable occupying coordinates [offset, offset + side^2).
  static HermExpr variable(int offset, int side) {
    HermExpr x(side);
    for (int i = 0; i < side; ++i) {
      x.terms_[offset + i] = {Entry{i, i, 1.0}};
    }
    int idx = offset + side;
    for (int i = 0; i < side; ++i) {
      for (int j = i + 1; j < side; ++j) {
        x.terms_[idx++] = {Entry{i, j, 1.0}, Entry{j, i, 1.0}};
        x.terms_[idx++] = {Entry{i, j, cplx(0, 1)}, Entry{j, i, cplx(0, -1)}};
      }
    }
    return x;
  }

  /// A real scalar expression viewed as a 1x1 Hermitian expression.
  static HermExpr from_scalar(const ScalarExpr& s) {
    return times(s, CMatrix::Constant(1, 1, 1.0));
  }

  /// s * C for a constant Hermitian C.
  static HermExpr times(const ScalarExpr& s, const CMatrix& c) {
    HermExpr x(c * s.constant());
    std::vector<Entry> pattern;
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j)
        if (c(i, j) != cplx(0.0)) pattern.push_back({i, j, c(i, j)});
    for (const auto& [idx, coef] : s.terms()) {
      auto& list = x.terms_[idx];
      for (const auto& e : pattern) list.push_back({e.row, e.col, coef * e.value});
    }
    return x;
  }

  int side() const { return static_cast<int>(constant_.rows()); }
  const CMatrix& constant() const { return constant_; }
  const std::map<int, std::vector<Entry>>& terms() const { return terms_; }

  CMatrix evaluate(const RVector& y) const {
    CMatrix v = constant_;
    for (const auto& [i, list] : terms_)
      for (const auto& e : list) v(e.row, e.col) += y(i) * e.value;
    return v;
  }

  /// True when no coefficient carries an imaginary part.
  bool is_real() const {
    if (constant_.imag().cwiseAbs().maxCoeff() != 0.0) return false;
    for (const auto& [i, list] : terms_)
      for (const auto& e : list)
        if (e.value.imag() != 0.0) return false;
    return true;
  }

  HermExpr& operator+=(const HermExpr& o) {
    check_side(o);
    constant_ += o.constant_;
    for (const auto& [i, list] : o.terms_) {
      auto& mine = terms_[i];
      mine.insert(mine.end(), list.begin(), list.end());
      detail::normalize(mine);
      if (mine.empty()) terms_.erase(i);
    }
    return *this;
  }
  HermExpr& operator-=(const HermExpr& o) { return *this += o * -1.0; }
  HermExpr& operator*=(double s) {
    constant_ *= s;
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [i, list] : terms_)
      for (auto& e : list) e.value *= s;
    return *this;
  }
  friend HermExpr operator+(HermExpr a, const HermExpr& b) { return a += b; }
  friend HermExpr operator-(HermExpr a, const HermExpr& b) { return a -= b; }
  friend HermExpr operator*(HermExpr a, double s) { return a *= s; }
  friend HermExpr operator*(double s, HermExpr a) { return a *= s; }
  friend HermExpr operator-(HermExpr a) { return a *= -1.0; }

  friend HermExpr partial_transpose(const HermExpr& x, Dims d) {
    if (d.total() != x.side()) {
      throw ShapeMismatch("partial transpose dims " + to_string(d) +
                          " do not match side " + std::to_string(x.side()));
    }
    HermExpr out(partial_transpose(x.constant_, d));
    const int db = d.b;
    for (const auto& [i, list] : x.terms_) {
      auto& dst = out.terms_[i];
      dst.reserve(list.size());
      for (const auto& e : list) {
        const int a = e.row / db, b = e.row % db;
        const int ap = e.col / db, bp = e.col % db;
        dst.push_back({a * db + bp, ap * db + b, e.value});
      }
      detail::normalize(dst);
    }
    return out;
  }

  /// V x V^dagger for a constant n-by-m matrix V and an m-by-m expression x.
  friend HermExpr congruence(const CMatrix& v, const HermExpr& x) {
    if (v.cols() != x.side()) {
      throw ShapeMismatch("congruence: V has " + std::to_string(v.cols()) +
                          " columns, expression side is " + std::to_string(x.side()));
    }
    const int n = static_cast<int>(v.rows());
    HermExpr out(CMatrix(v * x.constant_ * v.adjoint()));
    for (const auto& [i, list] : x.terms_) {
      CMatrix m = CMatrix::Zero(x.side(), x.side());
      for (const auto& e : list) m(e.row, e.col) += e.value;
      const CMatrix img = v * m * v.adjoint();
      auto& dst = out.terms_[i];
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          if (std::abs(img(r, c)) > 1e-15) dst.push_back({r, c, img(r, c)});
      if (dst.empty()) out.terms_.erase(i);
    }
    return out;
  }

 private:
  void check_side(const HermExpr& o) const {
    if (o.side() != side()) {
      throw ShapeMismatch("expression sides differ: " + std::to_string(side()) +
                          " vs " + std::to_string(o.side()));
    }
  }

  CMatrix constant_;
  std::map<int, std::vector<Entry>> terms_;
};

/// Re tr(C X).
inline ScalarExpr inner(const CMatrix& c, const HermExpr& x) {
  if (c.rows() != x.side() || c.cols() != x.side()) {
    throw ShapeMismatch("inner product of mismatched sides");
  }
  ScalarExpr s((c * x.constant()).trace().real());
  for (const auto& [i, list] : x.terms()) {
    double v = 0.0;
    for (const auto& e : list) v += (c(e.col, e.row) * e.value).real();
    if (v != 0.0) s += ScalarExpr::coordinate(i, v);
  }
  return s;
}

inline ScalarExpr trace(const HermExpr& x) {
  return inner(CMatrix::Identity(x.side(), x.side()), x);
}

struct HermitianVar {
  std::string name;
  int offset = 0;
  int side = 0;

  HermExpr expr() const { return HermExpr::variable(offset, side); }
  operator HermExpr() const { return expr(); }  // NOLINT
};

struct ScalarVar {
  std::string name;
  int offset = 0;

  ScalarExpr expr() const { return ScalarExpr::coordinate(offset); }
  operator ScalarExpr() const { return expr(); }  // NOLINT
};

enum class Relation { Psd, Zero };

struct Constraint {
  std::string label;
  Relation relation = Relation::Psd;
  HermExpr expr;
};

enum class Sense { Minimize, Maximize };

/// A semidefinite program: declared variables, a real-linear objective, and
/// a list of "expr is PSD" / "expr = 0" constraints.
class ConicProgram {
 public:
  HermitianVar add_hermitian(const std::string& name, int side) {
    if (side < 1) throw InvalidInput("variable side must be positive");
    check_name(name);
    HermitianVar v{name, num_coords_, side};
    num_coords_ += side * side;
    hermitian_.push_back(v);
    return v;
  }

  ScalarVar add_scalar(const std::string& name) {
    check_name(name);
    ScalarVar v{name, num_coords_};
    num_coords_ += 1;
    scalars_.push_back(v);
    return v;
  }

  void minimize(const ScalarExpr& f) { set_objective(f, Sense::Minimize); }
  void maximize(const ScalarExpr& f) { set_objective(f, Sense::Maximize); }

  void add_psd(const HermExpr& e, const std::string& label = {}) {
    add(e, Relation::Psd, label);
  }
  void add_nonneg(const ScalarExpr& e, const std::string& label = {}) {
    add(HermExpr::from_scalar(e), Relation::Psd, label);
  }
  void add_zero(const HermExpr& e, const std::string& label = {}) {
    add(e, Relation::Zero, label);
  }
  void add_zero(const ScalarExpr& e, const std::string& label = {}) {
    add(HermExpr::from_scalar(e), Relation::Zero, label);
  }

  int num_coordinates() const { return num_coords_; }
  const std::vector<HermitianVar>& hermitian_vars() const { return hermitian_; }
  const std::vector<ScalarVar>& scalar_vars() const { return scalars_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const ScalarExpr& objective() const { return objective_; }
  Sense sense() const { return sense_; }

 private:
  void check_name(const std::string& name) const {
    for (const auto& v : hermitian_)
      if (v.name == name) throw InvalidInput("duplicate variable " + name);
    for (const auto& v : scalars_)
      if (v.name == name) throw InvalidInput("duplicate variable " + name);
  }

  void check_refs(const std::map<int, double>& t) const {
    for (const auto& [i, c] : t)
      if (i < 0 || i >= num_coords_)
        throw InvalidInput("expression references an undeclared variable");
  }

  void set_objective(const ScalarExpr& f, Sense s) {
    check_refs(f.terms());
    objective_ = f;
    sense_ = s;
  }

  void add(const HermExpr& e, Relation r, const std::string& label) {
    for (const auto& [i, list] : e.terms())
      if (i < 0 || i >= num_coords_)
        throw InvalidInput("constraint references an undeclared variable");
    if (hermiticity_residual(e.constant()) > 1e-12) {
      throw NotHermitian("constraint constant is not Hermitian");
    }
    constraints_.push_back({label, r, e});
  }

  int num_coords_ = 0;
  std::vector<HermitianVar> hermitian_;
  std::vector<ScalarVar> scalars_;
  std::vector<Constraint> constraints_;
  ScalarExpr objective_;
  Sense sense_ = Sense::Minimize;
};

/// Reads the matrix value of a Hermitian variable out of a coordinate vector.
inline CMatrix extract(const HermitianVar& v, const RVector& y) {
  return v.expr().evaluate(y);
}

/// Writes a Hermitian matrix into the coordinates owned by v.
inline void scatter(const HermitianVar& v, const CMatrix& m, RVector& y) {
  const int n = v.side;
  int idx = v.offset;
  for (int i = 0; i < n; ++i) y(idx++) = m(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const cplx h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      y(idx++) = h.real();
      y(idx++) = h.imag();
    }
}

}  // namespace pptcost::sdp
