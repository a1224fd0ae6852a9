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

#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"
#include "pptcost/solver/ipm.hpp"
#include "pptcost/solver/program.hpp"
#include "pptcost/solver/standard_form.hpp"

namespace pptcost {

using sdp::ConicProgram;
using sdp::HermExpr;
using sdp::HermitianVar;
using sdp::ScalarExpr;
using sdp::ScalarVar;

struct SolverConfig {
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
  int max_iters = 200;
  /// Called with the standard form of every program before it is solved.
  std::function<void(const sdp::StandardForm&)> on_standard_form;

  void validate() const {
    if (!(tol_gap > 0.0) || !(tol_feas > 0.0) || max_iters < 1) {
      throw InvalidInput("solver tolerances and iteration cap must be positive");
    }
  }
};

enum class Status { Optimal, Infeasible, Unbounded, Inaccurate, Failed };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::Inaccurate: return "inaccurate";
    case Status::Failed: return "failed";
  }
  return "failed";
}

struct Solution {
  Status status = Status::Failed;
  double primal_objective = 0.0;  // objective at the returned point
  double dual_objective = 0.0;    // bound from the dual point
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  RVector coordinates;
  std::map<std::string, CMatrix> hermitian_values;
  std::map<std::string, double> scalar_values;
  /// One multiplier per program constraint, same side as the constraint.
  std::vector<CMatrix> constraint_duals;

  bool usable() const {
    return status == Status::Optimal || status == Status::Inaccurate;
  }
  CMatrix value(const HermExpr& e) const { return e.evaluate(coordinates); }
  double value(const ScalarExpr& e) const { return e.evaluate(coordinates); }
};

namespace detail {

inline CMatrix equality_multiplier(const sdp::ConstraintSlot& slot,
                                   const RVector& lambda,
                                   const std::vector<int>& row_map) {
  CMatrix y = CMatrix::Zero(slot.side, slot.side);
  for (int r = 0; r < slot.count; ++r) {
    const int kept = row_map[slot.row + r];
    const double l = kept >= 0 ? lambda(kept) : 0.0;
    const auto [i, code] = slot.eq_entries[r];
    if (code >= 0 && code == i) {
      y(i, i) += l;
    } else if (code >= 0) {
      y(code, i) += cplx(0.5 * l, 0.0);
      y(i, code) += cplx(0.5 * l, 0.0);
    } else {
      const int j = -code - 1;
      y(j, i) += cplx(0.0, -0.5 * l);
      y(i, j) += cplx(0.0, 0.5 * l);
    }
  }
  return y;
}

}  // namespace detail

/// Solves a ConicProgram with the built-in interior-point method.
inline Solution solve(const ConicProgram& p, const SolverConfig& cfg = {}) {
  cfg.validate();
  sdp::StandardForm sf = sdp::to_standard_form(p);
  if (cfg.on_standard_form) cfg.on_standard_form(sf);

  // Drop equality rows with no variables; a nonzero right-hand side there is
  // an immediate infeasibility.
  Solution sol;
  std::vector<int> row_map(sf.eq_rows.size(), -1);
  sdp::StandardForm reduced = sf;
  reduced.eq_rows.clear();
  reduced.eq_rhs.clear();
  for (std::size_t r = 0; r < sf.eq_rows.size(); ++r) {
    if (sf.eq_rows[r].empty()) {
      if (std::abs(sf.eq_rhs[r]) > cfg.tol_feas) {
        sol.status = Status::Infeasible;
        return sol;
      }
      continue;
    }
    row_map[r] = static_cast<int>(reduced.eq_rows.size());
    reduced.eq_rows.push_back(sf.eq_rows[r]);
    reduced.eq_rhs.push_back(sf.eq_rhs[r]);
  }

  sdp::ipm::Settings st;
  st.tol_gap = cfg.tol_gap;
  st.tol_feas = cfg.tol_feas;
  st.max_iters = cfg.max_iters;
  st.trace = std::getenv("PPTCOST_IPM_TRACE") != nullptr;
  const sdp::ipm::Result r = sdp::ipm::InteriorPoint(reduced).solve(st);

  using sdp::ipm::Outcome;
  switch (r.outcome) {
    case Outcome::Optimal:
      sol.status = Status::Optimal;
      break;
    case Outcome::Infeasible:
      sol.status = Status::Infeasible;
      break;
    case Outcome::Unbounded:
      sol.status = Status::Unbounded;
      break;
    default: {
      const bool close = r.pinf <= 100 * cfg.tol_feas &&
                         r.dinf <= 100 * cfg.tol_feas &&
                         r.rel_gap <= 100 * cfg.tol_gap;
      sol.status = close ? Status::Inaccurate : Status::Failed;
    }
  }

  const double sign = sf.maximize ? -1.0 : 1.0;
  sol.primal_objective = sf.c0 + sign * r.pobj;
  sol.dual_objective = sf.c0 + sign * r.dobj;
  sol.primal_residual = r.pinf;
  sol.dual_residual = r.dinf;
  sol.gap = r.rel_gap;
  sol.iterations = r.iterations;
  sol.coordinates = r.y.size() == p.num_coordinates()
                        ? r.y
                        : RVector::Zero(p.num_coordinates());
  for (const auto& v : p.hermitian_vars())
    sol.hermitian_values[v.name] = sdp::extract(v, sol.coordinates);
  for (const auto& v : p.scalar_vars())
    sol.scalar_values[v.name] = sol.coordinates(v.offset);

  for (const auto& slot : sf.slots) {
    CMatrix y;
    switch (slot.embedding) {
      case sdp::Embedding::Complex:
        y = r.X.empty() ? CMatrix::Zero(slot.side, slot.side)
                        : sdp::dual_from_embedding(r.X[slot.block]);
        break;
      case sdp::Embedding::Real:
        y = r.X.empty() ? CMatrix::Zero(slot.side, slot.side)
                        : CMatrix(r.X[slot.block].cast<cplx>());
        break;
      case sdp::Embedding::Diagonal:
        y = CMatrix::Constant(
            1, 1, r.X.empty() ? 0.0 : r.X[slot.block](slot.row, slot.row));
        break;
      case sdp::Embedding::Equality:
        y = detail::equality_multiplier(
            slot, r.lambda.size() ? r.lambda : RVector::Zero(reduced.eq_rows.size()),
            row_map);
        break;
    }
    sol.constraint_duals.push_back(std::move(y));
  }
  return sol;
}

/// Values for every variable of a program, by name.
struct Assignment {
  std::map<std::string, CMatrix> hermitian;
  std::map<std::string, double> scalar;
};

struct FeasibilityReport {
  bool feasible = false;
  double worst_violation = 0.0;
  std::string worst_constraint;
};

/// Evaluates every constraint of p at the given point without any solver.
inline FeasibilityReport check_feasibility(const ConicProgram& p,
                                           const Assignment& a, double tol) {
  RVector y = RVector::Zero(p.num_coordinates());
  for (const auto& v : p.hermitian_vars()) {
    const auto it = a.hermitian.find(v.name);
    if (it == a.hermitian.end()) {
      throw ShapeMismatch("assignment is missing variable " + v.name);
    }
    if (it->second.rows() != v.side || it->second.cols() != v.side) {
      throw ShapeMismatch("variable " + v.name + " has side " +
                          std::to_string(v.side));
    }
    sdp::scatter(v, it->second, y);
  }
  for (const auto& v : p.scalar_vars()) {
    const auto it = a.scalar.find(v.name);
    if (it == a.scalar.end()) {
      throw ShapeMismatch("assignment is missing variable " + v.name);
    }
    y(v.offset) = it->second;
  }
  FeasibilityReport rep;
  int index = 0;
  for (const auto& con : p.constraints()) {
    const CMatrix m = con.expr.evaluate(y);
    double viol = 0.0;
    if (con.relation == sdp::Relation::Psd) {
      viol = std::max(0.0, -min_eigenvalue(hermitian_part(m)));
    } else {
      viol = m.cwiseAbs().maxCoeff();
    }
    if (viol > rep.worst_violation || index == 0) {
      if (viol >= rep.worst_violation) {
        rep.worst_violation = viol;
        rep.worst_constraint =
            con.label.empty() ? "#" + std::to_string(index) : con.label;
      }
    }
    ++index;
  }
  rep.feasible = rep.worst_violation <= tol;
  return rep;
}

}  // namespace pptcost
