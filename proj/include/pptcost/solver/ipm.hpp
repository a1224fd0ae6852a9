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

// Infeasible primal-dual path-following method for the real standard form
//
//   (P)  minimize   c^T y     s.t.  Z = sum_i y_i F_i + G  PSD,  A y = b
//   (D)  maximize  -<G,X> + b^T lambda
//                             s.t.  <F_i,X> + (A^T lambda)_i = c_i,  X PSD
//
// using the HKM search direction with Mehrotra predictor-corrector steps.
// Blocks are dense; the constraint matrices F_i are sparse, which is what the
// Schur complement assembly exploits.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "pptcost/solver/standard_form.hpp"

namespace pptcost::sdp::ipm {

enum class Outcome {
  Optimal,
  Infeasible,  // (P) has no feasible point; X, lambda hold a Farkas ray
  Unbounded,   // (P) is unbounded below; y holds a ray
  MaxIterations,
  Stalled,
  NumericalFailure,
};

struct Settings {
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
  int max_iters = 200;
  double step_fraction = 0.95;
  bool trace = false;  // per-iteration log on stderr
};

struct Result {
  Outcome outcome = Outcome::NumericalFailure;
  RVector y;
  RVector lambda;
  std::vector<RMatrix> X;
  std::vector<RMatrix> Z;
  double pobj = 0.0;
  double dobj = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  double rel_gap = 0.0;
  int iterations = 0;
};

namespace detail {

struct Term {
  int var;
  std::vector<SymEntry> entries;
};

struct Block {
  int n = 0;
  RMatrix G;
  std::vector<Term> terms;
};

/// Largest alpha with X + alpha dX PSD, given the Cholesky factor of X.
inline double max_step(const Eigen::LLT<RMatrix>& llt, const RMatrix& dx) {
  RMatrix w = llt.matrixL().solve(dx);
  w = llt.matrixL().solve(w.transpose()).eval();
  w = 0.5 * (w + w.transpose());
  const double lmin =
      Eigen::SelfAdjointEigenSolver<RMatrix>(w, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

inline double dot(const RMatrix& a, const RMatrix& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace detail

class InteriorPoint {
 public:
  explicit InteriorPoint(const StandardForm& sf) : m_(sf.num_vars) {
    c_ = Eigen::Map<const RVector>(sf.c.data(), m_);
    for (const auto& sb : sf.blocks) {
      detail::Block b;
      b.n = sb.size;
      b.G = RMatrix::Zero(b.n, b.n);
      for (const auto& e : sb.constant) b.G(e.row, e.col) += e.value;
      for (const auto& [var, f] : sb.terms) b.terms.push_back({var, f});
      blocks_.push_back(std::move(b));
    }
    p_ = static_cast<int>(sf.eq_rows.size());
    A_ = RMatrix::Zero(p_, m_);
    b_ = RVector::Zero(p_);
    for (int r = 0; r < p_; ++r) {
      for (const auto& [j, v] : sf.eq_rows[r]) A_(r, j) += v;
      b_(r) = sf.eq_rhs[r];
    }
    ntot_ = 0;
    for (const auto& b : blocks_) ntot_ += b.n;
  }

  Result solve(const Settings& s) const {
    Result res;
    const int nb = static_cast<int>(blocks_.size());

    // starting point scaled as in CSDP
    std::vector<double> fnorm(m_, 0.0);
    double gnorm2 = 0.0;
    for (const auto& b : blocks_) {
      gnorm2 += b.G.squaredNorm();
      for (const auto& t : b.terms)
        for (const auto& e : t.entries) fnorm[t.var] += e.value * e.value;
    }
    double alpha = 1.0, beta = 1.0, fmax = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double fn = std::sqrt(fnorm[i]);
      fmax = std::max(fmax, fn);
      alpha = std::max(alpha, (1.0 + std::abs(c_(i))) / (1.0 + fn));
    }
    const double nt = std::max(1, ntot_);
    alpha *= nt;
    beta = (1.0 + std::max(fmax, std::sqrt(gnorm2))) / std::sqrt(nt);
    if (ntot_ == 0) alpha = beta = 1.0;

    std::vector<RMatrix> X(nb), Z(nb);
    for (int b = 0; b < nb; ++b) {
      X[b] = 10.0 * alpha * RMatrix::Identity(blocks_[b].n, blocks_[b].n);
      Z[b] = 10.0 * beta * RMatrix::Identity(blocks_[b].n, blocks_[b].n);
    }
    RVector y = RVector::Zero(m_);
    RVector lambda = RVector::Zero(p_);

    const double cnorm = c_.norm();
    const double bnorm = b_.norm();
    const double gnorm = std::sqrt(gnorm2);

    int slow = 0;
    Result best;
    double best_merit = std::numeric_limits<double>::infinity();
    double prev_mu = std::numeric_limits<double>::infinity();
    res.outcome = Outcome::MaxIterations;

    for (int it = 0;; ++it) {
      res.iterations = it;
      // residuals
      std::vector<RMatrix> Fy = apply(y);
      std::vector<RMatrix> Rp(nb), Zinv(nb);
      std::vector<Eigen::LLT<RMatrix>> zchol(nb), xchol(nb);
      bool broken = false;
      double rp2 = 0.0, gap_xz = 0.0;
      for (int b = 0; b < nb; ++b) {
        Rp[b] = Fy[b] + blocks_[b].G - Z[b];
        rp2 += Rp[b].squaredNorm();
        zchol[b].compute(Z[b]);
        xchol[b].compute(X[b]);
        if (zchol[b].info() != Eigen::Success ||
            xchol[b].info() != Eigen::Success) {
          broken = true;
          break;
        }
        Zinv[b] = zchol[b].solve(RMatrix::Identity(blocks_[b].n, blocks_[b].n));
        gap_xz += detail::dot(X[b], Z[b]);
      }
      if (broken) {
        res.outcome = Outcome::NumericalFailure;
        break;
      }
      const RVector fx = adjoint(X);
      const RVector rd = c_ - fx - A_.transpose() * lambda;
      const RVector re = b_ - A_ * y;
      const double mu = ntot_ > 0 ? gap_xz / ntot_ : 0.0;

      double gx = 0.0;
      for (int b = 0; b < nb; ++b) gx += detail::dot(blocks_[b].G, X[b]);
      const double pobj = c_.dot(y);
      const double dobj = -gx + b_.dot(lambda);
      const double pinf = std::max(std::sqrt(rp2) / (1.0 + gnorm),
                                   re.norm() / (1.0 + bnorm));
      const double dinf = rd.norm() / (1.0 + cnorm);
      const double rel_gap =
          std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

      res.y = y;
      res.lambda = lambda;
      res.X = X;
      res.Z = Z;
      res.pobj = pobj;
      res.dobj = dobj;
      res.pinf = pinf;
      res.dinf = dinf;
      res.rel_gap = rel_gap;
      const double merit = std::max(
          {pinf / s.tol_feas, dinf / s.tol_feas, rel_gap / s.tol_gap});
      if (merit < best_merit) {
        best_merit = merit;
        best = res;
      }

      if (s.trace) {
        std::fprintf(stderr,
                     "%3d pobj %+.10e dobj %+.10e pinf %.2e dinf %.2e gap %.2e mu %.2e\n",
                     it, pobj, dobj, pinf, dinf, rel_gap, mu);
      }
      if (pinf <= s.tol_feas && dinf <= s.tol_feas && rel_gap <= s.tol_gap) {
        res.outcome = Outcome::Optimal;
        break;
      }

      // Farkas ray for (P): X PSD, F*(X) + A^T lambda = 0, -<G,X> + b^T l > 0
      double xnorm = 0.0;
      for (int b = 0; b < nb; ++b) xnorm += X[b].squaredNorm();
      xnorm = std::sqrt(xnorm) + lambda.norm();
      if (dobj > 0.0 && dobj > s.tol_feas * xnorm &&
          (fx + A_.transpose() * lambda).norm() <= s.tol_feas * dobj &&
          dobj > 1e3 * (1.0 + cnorm)) {
        res.outcome = Outcome::Infeasible;
        break;
      }
      // descent ray for (P): F(y) PSD, A y = 0, c^T y < 0
      double znorm = 0.0, ray_res = 0.0;
      for (int b = 0; b < nb; ++b) {
        znorm += Z[b].squaredNorm();
        ray_res += (Rp[b] - blocks_[b].G).squaredNorm();
      }
      znorm = std::sqrt(znorm) + y.norm();
      ray_res = std::sqrt(ray_res) + (A_ * y).norm();
      if (-pobj > s.tol_feas * znorm && ray_res <= s.tol_feas * -pobj &&
          -pobj > 1e3 * (1.0 + gnorm + bnorm)) {
        res.outcome = Outcome::Unbounded;
        break;
      }
      if (it >= s.max_iters) {
        res.outcome = Outcome::MaxIterations;
        break;
      }

      // Schur complement and its factorization
      RMatrix M = schur(X, Zinv);
      Eigen::LLT<RMatrix> mchol;
      if (!factor(M, mchol)) {
        res.outcome = Outcome::NumericalFailure;
        break;
      }
      Eigen::LDLT<RMatrix> schol;
      if (p_ > 0) {
        RMatrix K = mchol.matrixL().solve(A_.transpose());
        RMatrix S = K.transpose() * K;
        schol.compute(S);
      }

      struct Direction {
        RVector dy, dl;
        std::vector<RMatrix> dX, dZ;
      };
      auto direction = [&](const std::vector<RMatrix>& H) {
        Direction d;
        const RVector g = adjoint_nonsym(H) - rd;
        // M dy - A^T dl = g, A dy = re, with two rounds of refinement
        auto kkt = [&](const RVector& r1, const RVector& r2, RVector& dy,
                       RVector& dl) {
          dy = mchol.solve(r1);
          if (p_ > 0) {
            dl = schol.solve(r2 - A_ * dy);
            dy += mchol.solve(A_.transpose() * dl);
          } else {
            dl = RVector::Zero(0);
          }
        };
        kkt(g, re, d.dy, d.dl);
        for (int pass = 0; pass < 2; ++pass) {
          RVector r1 = g - M * d.dy;
          if (p_ > 0) r1 += A_.transpose() * d.dl;
          const RVector r2 = p_ > 0 ? RVector(re - A_ * d.dy) : RVector();
          RVector cy, cl;
          kkt(r1, r2, cy, cl);
          d.dy += cy;
          if (p_ > 0) d.dl += cl;
        }
        std::vector<RMatrix> Fd = apply(d.dy);
        d.dX.resize(nb);
        d.dZ.resize(nb);
        for (int b = 0; b < nb; ++b) {
          d.dZ[b] = Fd[b] + Rp[b];
          RMatrix t = H[b] - X[b] * Fd[b] * Zinv[b];
          d.dX[b] = 0.5 * (t + t.transpose());
        }
        return d;
      };
      auto steps = [&](const Direction& d, double& ap, double& ad) {
        ap = ad = std::numeric_limits<double>::infinity();
        for (int b = 0; b < nb; ++b) {
          ap = std::min(ap, detail::max_step(xchol[b], d.dX[b]));
          ad = std::min(ad, detail::max_step(zchol[b], d.dZ[b]));
        }
      };

      // predictor
      std::vector<RMatrix> H(nb);
      for (int b = 0; b < nb; ++b) H[b] = -X[b] - X[b] * Rp[b] * Zinv[b];
      const Direction pred = direction(H);
      double ap = 0.0, ad = 0.0;
      steps(pred, ap, ad);
      ap = std::min(1.0, ap);
      ad = std::min(1.0, ad);
      double mu_aff = 0.0;
      for (int b = 0; b < nb; ++b)
        mu_aff += detail::dot(X[b] + ap * pred.dX[b], Z[b] + ad * pred.dZ[b]);
      mu_aff = ntot_ > 0 ? mu_aff / ntot_ : 0.0;
      double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff) / mu, 3) : 0.0;
      sigma = std::clamp(sigma, 0.0, 1.0);

      // corrector
      for (int b = 0; b < nb; ++b) {
        H[b] = sigma * mu * Zinv[b] - X[b] -
               (X[b] * Rp[b] + pred.dX[b] * pred.dZ[b]) * Zinv[b];
      }
      const Direction corr = direction(H);
      steps(corr, ap, ad);
      ap = std::min(1.0, s.step_fraction * ap);
      ad = std::min(1.0, s.step_fraction * ad);

      for (int b = 0; b < nb; ++b) {
        X[b] += ap * corr.dX[b];
        Z[b] += ad * corr.dZ[b];
        X[b] = 0.5 * (X[b] + X[b].transpose()).eval();
        Z[b] = 0.5 * (Z[b] + Z[b].transpose()).eval();
      }
      if (p_ > 0) lambda += ap * corr.dl;
      y += ad * corr.dy;

      if (std::max(ap, ad) < 1e-9 || mu >= 0.999 * prev_mu) {
        if (++slow >= 8) {
          res.outcome = Outcome::Stalled;
          res.iterations = it + 1;
          break;
        }
      } else {
        slow = 0;
      }
      prev_mu = mu;
    }
    if ((res.outcome == Outcome::MaxIterations || res.outcome == Outcome::Stalled ||
         res.outcome == Outcome::NumericalFailure) &&
        std::isfinite(best_merit)) {
      const Outcome why = res.outcome;
      const int iters = res.iterations;
      res = best;
      res.outcome = why;
      res.iterations = iters;
    }
    return res;
  }

 private:
  /// sum_i y_i F_i per block.
  std::vector<RMatrix> apply(const RVector& y) const {
    std::vector<RMatrix> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) {
      RMatrix m = RMatrix::Zero(b.n, b.n);
      for (const auto& t : b.terms) {
        const double v = y(t.var);
        if (v == 0.0) continue;
        for (const auto& e : t.entries) m(e.row, e.col) += v * e.value;
      }
      out.push_back(std::move(m));
    }
    return out;
  }

  /// (<F_i, X>)_i for symmetric X.
  RVector adjoint(const std::vector<RMatrix>& X) const {
    return adjoint_nonsym(X);
  }

  /// (tr(F_i H))_i; H need not be symmetric.
  RVector adjoint_nonsym(const std::vector<RMatrix>& H) const {
    RVector g = RVector::Zero(m_);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (const auto& t : blocks_[b].terms) {
        double s = 0.0;
        for (const auto& e : t.entries) s += e.value * H[b](e.col, e.row);
        g(t.var) += s;
      }
    return g;
  }

  /// M_ij = sum_b tr(F_i X F_j Z^{-1}).
  RMatrix schur(const std::vector<RMatrix>& X,
                const std::vector<RMatrix>& Zinv) const {
    RMatrix M = RMatrix::Zero(m_, m_);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      const RMatrix& x = X[bi];
      const RMatrix& zi = Zinv[bi];
      const std::size_t nt = blk.terms.size();
      std::vector<RMatrix> dense(nt);
      std::vector<char> heavy(nt, 0);
      for (std::size_t a = 0; a < nt; ++a) {
        if (static_cast<int>(blk.terms[a].entries.size()) > blk.n) {
          heavy[a] = 1;
          RMatrix xf = RMatrix::Zero(blk.n, blk.n);
          for (const auto& e : blk.terms[a].entries)
            xf.col(e.col) += e.value * x.col(e.row);
          dense[a] = xf * zi;  // X F_a Z^{-1}
        }
      }
      for (std::size_t a = 0; a < nt; ++a) {
        const auto& fa = blk.terms[a].entries;
        const int va = blk.terms[a].var;
        for (std::size_t c = a; c < nt; ++c) {
          const auto& fc = blk.terms[c].entries;
          double s = 0.0;
          if (heavy[c]) {
            const RMatrix& t = dense[c];
            for (const auto& e : fa) s += e.value * t(e.col, e.row);
          } else if (heavy[a]) {
            const RMatrix& t = dense[a];
            for (const auto& f : fc) s += f.value * t(f.row, f.col);
          } else {
            for (const auto& e : fa)
              for (const auto& f : fc)
                s += e.value * f.value * x(e.col, f.row) * zi(f.col, e.row);
          }
          const int vc = blk.terms[c].var;
          M(va, vc) += s;
          if (va != vc) M(vc, va) += s;
        }
      }
    }
    return M;
  }

  static bool factor(RMatrix& M, Eigen::LLT<RMatrix>& llt) {
    M = 0.5 * (M + M.transpose()).eval();
    llt.compute(M);
    if (llt.info() == Eigen::Success) return true;
    const double scale = std::max(1e-300, M.diagonal().cwiseAbs().maxCoeff());
    for (double reg : {1e-14, 1e-12, 1e-10, 1e-8}) {
      RMatrix Mr = M;
      Mr.diagonal().array() += reg * scale;
      llt.compute(Mr);
      if (llt.info() == Eigen::Success) return true;
    }
    return false;
  }

  int m_ = 0;
  int p_ = 0;
  int ntot_ = 0;
  RVector c_;
  RMatrix A_;
  RVector b_;
  std::vector<detail::Block> blocks_;
};

}  // namespace pptcost::sdp::ipm
