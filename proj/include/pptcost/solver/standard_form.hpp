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

// Real standard form of a ConicProgram:
//
//   minimize    c^T y
//   subject to  Z_b = sum_i y_i F_{i,b} + F_{0,b}  is PSD for every block b
//               A y = rhs
//
// Complex Hermitian PSD constraints H are embedded as the real symmetric
// matrix [[Re H, -Im H], [Im H, Re H]], which is PSD iff H is. Constraints
// whose data is real are kept at their natural size. All 1x1 PSD constraints
// share one diagonal block.

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "pptcost/solver/program.hpp"

namespace pptcost::sdp {

/// One entry of a real symmetric block. Lists hold both triangles.
struct SymEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
  bool operator==(const SymEntry&) const = default;
};

struct StdBlock {
  int size = 0;
  std::vector<SymEntry> constant;
  std::vector<std::pair<int, std::vector<SymEntry>>> terms;  // (coordinate, F_i)
  bool operator==(const StdBlock&) const = default;
};

enum class Embedding { Complex, Real, Diagonal, Equality };

/// Where a program constraint ended up.
struct ConstraintSlot {
  Embedding embedding = Embedding::Complex;
  int block = -1;  // PSD blocks
  int row = -1;    // diagonal row or first equality row
  int count = 0;   // number of equality rows
  int side = 0;
  std::vector<std::pair<int, int>> eq_entries;  // (i,j) per equality row, j>i means Re then Im
  bool operator==(const ConstraintSlot&) const = default;
};

struct StandardForm {
  int num_vars = 0;
  std::vector<double> c;
  double c0 = 0.0;
  bool maximize = false;  // c = -objective when true
  std::vector<StdBlock> blocks;
  std::vector<std::vector<std::pair<int, double>>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<ConstraintSlot> slots;
  bool operator==(const StandardForm&) const = default;
};

/// Real symmetric embedding of a Hermitian matrix.
inline RMatrix embed_hermitian(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  RMatrix r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = h.real();
  r.bottomRightCorner(n, n) = h.real();
  r.bottomLeftCorner(n, n) = h.imag();
  r.topRightCorner(n, n) = -h.imag();
  return r;
}

/// Inverse of embed_hermitian, reading the left column of blocks.
inline CMatrix extract_hermitian(const RMatrix& r) {
  const Eigen::Index n = r.rows() / 2;
  CMatrix h(n, n);
  h.real() = r.topLeftCorner(n, n);
  h.imag() = r.bottomLeftCorner(n, n);
  return h;
}

/// Complex multiplier Y with tr(H Y) = tr(embed(H) X) for every Hermitian H.
inline CMatrix dual_from_embedding(const RMatrix& x) {
  const Eigen::Index n = x.rows() / 2;
  CMatrix y(n, n);
  y.real() = x.topLeftCorner(n, n) + x.bottomRightCorner(n, n);
  y.imag() = x.bottomLeftCorner(n, n) - x.topRightCorner(n, n);
  return hermitian_part(y);
}

namespace detail {

inline void sort_merge(std::vector<SymEntry>& v) {
  std::sort(v.begin(), v.end(), [](const SymEntry& a, const SymEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<SymEntry> out;
  for (const auto& e : v) {
    if (!out.empty() && out.back().row == e.row && out.back().col == e.col) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const SymEntry& e) { return e.value == 0.0; });
  v = std::move(out);
}

inline void embed_entry(const Entry& e, int n, bool complex_block,
                        std::vector<SymEntry>& out) {
  const double re = e.value.real(), im = e.value.imag();
  if (!complex_block) {
    out.push_back({e.row, e.col, re});
    return;
  }
  out.push_back({e.row, e.col, re});
  out.push_back({e.row + n, e.col + n, re});
  out.push_back({e.row + n, e.col, im});
  out.push_back({e.row, e.col + n, -im});
}

inline StdBlock embed_block(const HermExpr& h, bool complex_block) {
  const int n = h.side();
  StdBlock b;
  b.size = complex_block ? 2 * n : n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (h.constant()(i, j) != cplx(0.0))
        embed_entry({i, j, h.constant()(i, j)}, n, complex_block, b.constant);
  sort_merge(b.constant);
  for (const auto& [idx, list] : h.terms()) {
    std::vector<SymEntry> f;
    for (const auto& e : list) embed_entry(e, n, complex_block, f);
    sort_merge(f);
    if (!f.empty()) b.terms.emplace_back(idx, std::move(f));
  }
  return b;
}

}  // namespace detail

inline StandardForm to_standard_form(const ConicProgram& p) {
  StandardForm sf;
  sf.num_vars = p.num_coordinates();
  sf.c.assign(sf.num_vars, 0.0);
  sf.maximize = p.sense() == Sense::Maximize;
  const double sign = sf.maximize ? -1.0 : 1.0;
  for (const auto& [i, v] : p.objective().terms()) sf.c[i] = sign * v;
  sf.c0 = p.objective().constant();

  StdBlock lp;
  std::map<int, std::vector<SymEntry>> lp_terms;
  for (const auto& con : p.constraints()) {
    ConstraintSlot slot;
    slot.side = con.expr.side();
    if (con.relation == Relation::Psd) {
      if (con.expr.side() == 1) {
        slot.embedding = Embedding::Diagonal;
        slot.row = lp.size++;
        const double c0 = con.expr.constant()(0, 0).real();
        if (c0 != 0.0) lp.constant.push_back({slot.row, slot.row, c0});
        for (const auto& [idx, list] : con.expr.terms()) {
          double v = 0.0;
          for (const auto& e : list) v += e.value.real();
          if (v != 0.0) lp_terms[idx].push_back({slot.row, slot.row, v});
        }
      } else {
        const bool cplx_block = !con.expr.is_real();
        slot.embedding = cplx_block ? Embedding::Complex : Embedding::Real;
        slot.block = static_cast<int>(sf.blocks.size());
        sf.blocks.push_back(detail::embed_block(con.expr, cplx_block));
      }
    } else {
      slot.embedding = Embedding::Equality;
      slot.row = static_cast<int>(sf.eq_rows.size());
      const int n = con.expr.side();
      // one real row per diagonal entry, two per strictly upper entry
      std::map<std::pair<int, int>, int> row_of;
      std::vector<std::map<int, double>> rows;
      std::vector<double> rhs;
      auto row_for = [&](int i, int j, int part) {
        const auto key = std::make_pair(i * n + j, part);
        auto it = row_of.find(key);
        if (it != row_of.end()) return it->second;
        const int r = static_cast<int>(rows.size());
        row_of[key] = r;
        rows.emplace_back();
        rhs.push_back(0.0);
        slot.eq_entries.emplace_back(i, part == 0 ? j : -j - 1);
        return r;
      };
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          row_for(i, j, 0);
          if (j > i) row_for(i, j, 1);
        }
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const cplx c0 = con.expr.constant()(i, j);
          rhs[row_for(i, j, 0)] = -c0.real();
          if (j > i) rhs[row_for(i, j, 1)] = -c0.imag();
        }
      for (const auto& [idx, list] : con.expr.terms())
        for (const auto& e : list) {
          if (e.row > e.col) continue;
          rows[row_for(e.row, e.col, 0)][idx] += e.value.real();
          if (e.col > e.row) rows[row_for(e.row, e.col, 1)][idx] += e.value.imag();
        }
      for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::pair<int, double>> row;
        for (const auto& [idx, v] : rows[r])
          if (v != 0.0) row.emplace_back(idx, v);
        sf.eq_rows.push_back(std::move(row));
        sf.eq_rhs.push_back(rhs[r]);
      }
      slot.count = static_cast<int>(rows.size());
    }
    sf.slots.push_back(std::move(slot));
  }
  if (lp.size > 0) {
    for (auto& [idx, f] : lp_terms) {
      detail::sort_merge(f);
      if (!f.empty()) lp.terms.emplace_back(idx, std::move(f));
    }
    const int lp_index = static_cast<int>(sf.blocks.size());
    for (auto& s : sf.slots)
      if (s.embedding == Embedding::Diagonal) s.block = lp_index;
    sf.blocks.push_back(std::move(lp));
  }
  return sf;
}

}  // namespace pptcost::sdp
