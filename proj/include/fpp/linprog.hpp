#pragma once

// Small dense LP solver: min c.x subject to A x <= b, x free.
// Two-phase primal simplex with Bland's rule. Problem sizes here are tiny
// (d <= 4 variables, a few dozen constraints), so a tableau is plenty.

#include <cstddef>
#include <limits>
#include <vector>

#include "fpp/vec.hpp"

namespace fpp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    Vec x;
};

namespace detail {

class SimplexTableau {
  public:
    // min c.z  s.t.  M z = rhs, z >= 0, rhs >= 0 required.
    SimplexTableau(std::vector<std::vector<double>> M, std::vector<double> rhs,
                   std::vector<double> c)
        : m_(M.size()), n_(c.size()), tab_(M), rhs_(rhs), cost_(c), basis_(m_) {}

    // Adds one artificial variable per row and minimizes their sum.
    // Returns false if the phase-1 optimum is > tol (infeasible).
    bool phase1() {
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < m_; ++j) tab_[i].push_back(i == j ? 1.0 : 0.0);
            basis_[i] = n_ + i;
        }
        std::vector<double> art_cost(n_ + m_, 0.0);
        for (std::size_t j = n_; j < n_ + m_; ++j) art_cost[j] = 1.0;
        if (!iterate(art_cost)) return false;  // phase 1 cannot be unbounded
        double v = objective(art_cost);
        if (v > 1e-7) return false;
        // Pivot artificials out of the basis where possible.
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t j = 0;
            for (; j < n_; ++j)
                if (std::fabs(tab_[i][j]) > 1e-9) break;
            if (j < n_) pivot(i, j);
            // A fully zero row is redundant; leave the artificial at zero.
        }
        for (std::size_t i = 0; i < m_; ++i) tab_[i].resize(n_);
        return true;
    }

    bool phase2() { return iterate(cost_); }

    double objective(const std::vector<double>& c) const {
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < c.size()) v += c[basis_[i]] * rhs_[i];
        return v;
    }

    std::vector<double> solution() const {
        std::vector<double> z(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) z[basis_[i]] = rhs_[i];
        return z;
    }

  private:
    // Returns false on unboundedness.
    bool iterate(const std::vector<double>& c) {
        const std::size_t ncols = tab_.empty() ? 0 : tab_[0].size();
        for (;;) {
            // Reduced costs via the basis multipliers would be cleaner, but with
            // these sizes we recompute directly.
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                double rc = c.size() > j ? c[j] : 0.0;
                for (std::size_t i = 0; i < m_; ++i) {
                    double cb = basis_[i] < c.size() ? c[basis_[i]] : 0.0;
                    rc -= cb * tab_[i][j];
                }
                if (rc < -1e-9) { enter = j; break; }  // Bland: first improving column
            }
            if (enter == ncols) return true;
            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][enter] > 1e-11) {
                    double ratio = rhs_[i] / tab_[i][enter];
                    if (ratio < best - 1e-12 ||
                        (ratio < best + 1e-12 && (leave == m_ || basis_[i] < basis_[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        double p = tab_[r][c];
        for (double& v : tab_[r]) v /= p;
        rhs_[r] /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = tab_[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < tab_[i].size(); ++j) tab_[i][j] -= f * tab_[r][j];
            rhs_[i] -= f * rhs_[r];
        }
        basis_[r] = c;
    }

    std::size_t m_, n_;
    std::vector<std::vector<double>> tab_;
    std::vector<double> rhs_;
    std::vector<double> cost_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

// min c.x  s.t.  A[i].x <= b[i], x free.
inline LpResult lp_minimize(const std::vector<Vec>& A, const std::vector<double>& b,
                            const Vec& c) {
    const std::size_t m = A.size(), n = c.size();
    // z = (x+, x-, s), x = x+ - x-.
    std::vector<std::vector<double>> M(m, std::vector<double>(2 * n + m, 0.0));
    std::vector<double> rhs(m);
    std::vector<double> cost(2 * n + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double sgn = b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            M[i][j] = sgn * A[i][j];
            M[i][n + j] = -sgn * A[i][j];
        }
        M[i][2 * n + i] = sgn;
        rhs[i] = sgn * b[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        cost[j] = c[j];
        cost[n + j] = -c[j];
    }
    detail::SimplexTableau t(M, rhs, cost);
    LpResult res;
    if (!t.phase1()) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    if (!t.phase2()) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    auto z = t.solution();
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) res.x[j] = z[j] - z[n + j];
    res.objective = t.objective(cost);
    return res;
}

inline bool lp_feasible(const std::vector<Vec>& A, const std::vector<double>& b,
                        std::size_t dim, Vec* witness = nullptr) {
    LpResult r = lp_minimize(A, b, Vec(dim, 0.0));
    if (r.status == LpStatus::Infeasible) return false;
    if (witness) *witness = r.x;
    return true;
}

}  // namespace fpp
