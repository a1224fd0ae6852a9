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

// JSON encoding of matrices, POVMs, certificates and reports.
//
// A matrix is {"dims": [dA, dB], "re": [[...]], "im": [[...]]}, row-major.
// "im" may be omitted for real matrices. A POVM is an array of matrices.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptcost/certify.hpp"
#include "pptcost/cost.hpp"
#include "pptcost/discrimination.hpp"
#include "pptcost/distances.hpp"
#include "pptcost/errors.hpp"
#include "pptcost/qmat.hpp"

namespace pptcost::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json to_json(const BipartiteOperator& x) {
  const CMatrix& m = x.matrix();
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"dims", {x.dims().a, x.dims().b}}, {"re", re}, {"im", im}};
}

inline BipartiteOperator operator_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("dims") || !j.contains("re")) {
      throw InvalidInput("matrix JSON needs \"dims\" and \"re\"");
    }
    const auto dims = j.at("dims").get<std::vector<int>>();
    if (dims.size() != 2) throw InvalidInput("\"dims\" must hold two integers");
    const Dims d{dims[0], dims[1]};
    const int n = d.total();
    const json& re = j.at("re");
    const bool has_im = j.contains("im");
    if (!re.is_array() || static_cast<int>(re.size()) != n ||
        (has_im && static_cast<int>(j.at("im").size()) != n)) {
      throw ShapeMismatch("matrix rows do not match dims " + to_string(d));
    }
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(re[r].size()) != n ||
          (has_im && static_cast<int>(j.at("im")[r].size()) != n)) {
        throw ShapeMismatch("matrix row " + std::to_string(r) + " has the wrong length");
      }
      for (int c = 0; c < n; ++c) {
        const double im = has_im ? j.at("im")[r][c].get<double>() : 0.0;
        m(r, c) = cplx(re[r][c].get<double>(), im);
      }
    }
    return BipartiteOperator(std::move(m), d);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed matrix JSON: ") + e.what());
  }
}

inline DensityMatrix density_from_json(const json& j) {
  return DensityMatrix(operator_from_json(j));
}

inline json to_json(const Povm& p) {
  json a = json::array();
  for (const auto& e : p.elements()) a.push_back(to_json(e));
  return a;
}

inline Povm povm_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("a POVM is a JSON array of matrices");
  std::vector<BipartiteOperator> el;
  for (const auto& m : j) el.push_back(operator_from_json(m));
  return Povm(std::move(el));
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

inline json to_json(const SolverConfig& c) {
  return {{"tol_gap", c.tol_gap}, {"tol_feas", c.tol_feas}, {"max_iters", c.max_iters}};
}

inline json to_json(const SolveMeta& m) {
  return {{"status", to_string(m.status)},
          {"primal_objective", m.primal_objective},
          {"dual_objective", m.dual_objective},
          {"gap", m.gap},
          {"primal_residual", m.primal_residual},
          {"dual_residual", m.dual_residual},
          {"iterations", m.iterations}};
}

inline json to_json(const SuccessReport& r) {
  json j{{"value", r.value}};
  if (r.variables) {
    j["variables"] = {{"W0", to_json(r.variables->W0)},
                      {"W1", to_json(r.variables->W1)},
                      {"Q0", to_json(r.variables->Q0)},
                      {"Q1", to_json(r.variables->Q1)}};
  }
  if (r.element) j["element"] = to_json(*r.element);
  if (r.meta) j["solve"] = to_json(*r.meta);
  return j;
}

inline json to_json(const DualCertificate& c) {
  return {{"k", c.k},          {"p1", c.p1},         {"value", c.value},
          {"A", to_json(c.A)}, {"B", to_json(c.B)}, {"C", to_json(c.C)},
          {"D", to_json(c.D)}, {"F", to_json(c.F)}, {"G", to_json(c.G)}};
}

inline DualCertificate certificate_from_json(const json& j) {
  try {
    DualCertificate c;
    c.k = j.at("k").get<int>();
    c.p1 = j.at("p1").get<double>();
    c.A = operator_from_json(j.at("A"));
    c.B = operator_from_json(j.at("B"));
    c.C = operator_from_json(j.at("C"));
    c.D = operator_from_json(j.at("D"));
    c.F = operator_from_json(j.at("F"));
    c.G = operator_from_json(j.at("G"));
    c.value = j.contains("value") ? j.at("value").get<double>() : c.objective();
    return c;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed certificate JSON: ") + e.what());
  }
}

inline json to_json(const DistanceReport& r) {
  json j{{"value", r.value},
         {"witness", to_json(r.witness)},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"witness_violation", r.witness_violation}};
  if (r.meta) j["solve"] = to_json(*r.meta);
  return j;
}

inline json to_json(const HierarchyReport& h) {
  json dev = json::array();
  for (const auto& [k, d] : h.deviations) dev.push_back({{"k", k}, {"delta", d}});
  json j{{"deviations", dev}, {"eta", h.eta}, {"marginal", h.marginal}};
  j["k_min"] = h.k_min ? json(*h.k_min) : json(nullptr);
  j["ebits"] = h.k_min ? json(h.ebits) : json(nullptr);
  return j;
}

inline json to_json(const BoundsReport& b) {
  json j{{"spectral_bound_ebits", b.spectral_bound_ebits},
         {"spectral_norm", b.spectral_norm},
         {"rank_eta", b.rank_eta},
         {"rank_bound_ebits", b.rank_bound_ebits},
         {"eta_l", b.eta_l},
         {"eta_l_ebits", b.eta_l_ebits},
         {"eta_u_status", b.eta_u_status},
         {"distance_r", b.distance_r},
         {"distance_lower_ebits", b.distance_lower_ebits},
         {"optimality", b.optimality == OptimalityMode::Face ? "face" : "band"},
         {"eps_eq", b.eps_eq}};
  j["eta_u"] = b.eta_u ? json(*b.eta_u) : json(nullptr);
  j["eta_u_ebits"] = b.eta_u_ebits ? json(*b.eta_u_ebits) : json(nullptr);
  return j;
}

inline json to_json(const CertifiedBound& b) {
  return {{"direction", to_string(b.direction)},
          {"value", b.value},
          {"worst_violation", b.worst_violation},
          {"valid", b.valid}};
}

/// Standard-form data: minimize c.y + c0 subject to, for every block,
/// constant + sum_i y_i F_i PSD, and eq_rows . y = eq_rhs. When "maximize"
/// is true, c holds the negated objective of the original program.
inline json to_json(const sdp::StandardForm& f) {
  auto entries = [](const std::vector<sdp::SymEntry>& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back({e.row, e.col, e.value});
    return a;
  };
  json blocks = json::array();
  for (const auto& b : f.blocks) {
    json terms = json::array();
    for (const auto& [i, list] : b.terms) {
      terms.push_back({{"var", i}, {"entries", entries(list)}});
    }
    blocks.push_back({{"size", b.size}, {"constant", entries(b.constant)}, {"terms", terms}});
  }
  json rows = json::array();
  for (const auto& r : f.eq_rows) {
    json row = json::array();
    for (const auto& [i, v] : r) row.push_back({i, v});
    rows.push_back(std::move(row));
  }
  return {{"num_vars", f.num_vars}, {"c", f.c},           {"c0", f.c0},
          {"maximize", f.maximize}, {"blocks", blocks}, {"eq_rows", rows},
          {"eq_rhs", f.eq_rhs}};
}

inline json to_json(const GapReport& g) {
  return {{"gap_proven", g.gap_proven},
          {"upper", to_json(g.upper)},
          {"lower", to_json(g.lower)},
          {"margin", g.margin}};
}

}  // namespace pptcost::io
