#ifndef REGEN_SIMPLEX_HPP
#define REGEN_SIMPLEX_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "regen/rational.hpp"

namespace regen::lp {

enum class Status { OPTIMAL, INFEASIBLE, UNBOUNDED };

// Standard form: minimize cost.x subject to rows.x = rhs, x >= 0.
struct Problem {
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    std::vector<Rat> cost;
};

// Exact two-phase tableau simplex. The artificial columns occupy the
// fixed index range [0, m) so the block always holds the current basis
// inverse; structural columns follow and may be appended between
// solves, which is what the column-generation loop in the entropy
// prover relies on. Pricing is most-negative with lowest-index ties.
// The ratio test orders candidate rows lexicographically by
// (rhs, basis inverse), which settles the long degenerate ties the
// homogeneous constraints here produce and rules out cycling; Bland's
// rule remains as a backstop behind a high degeneracy threshold.
class Simplex {
public:
    explicit Simplex(Problem p) : m_(static_cast<int>(p.rows.size())) {
        if (p.rhs.size() != p.rows.size())
            throw std::invalid_argument("simplex: rhs size does not match row count");
        n_ = static_cast<int>(p.cost.size());
        for (const auto& row : p.rows)
            if (static_cast<int>(row.size()) != n_)
                throw std::invalid_argument("simplex: row width does not match cost size");
        if (m_ == 0) throw std::invalid_argument("simplex: no rows");

        cost_ = std::move(p.cost);
        row_sign_.assign(static_cast<size_t>(m_), 1);
        tab_.assign(static_cast<size_t>(m_), {});
        rhs_.resize(static_cast<size_t>(m_));
        basis_.resize(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            int s = sgn(p.rhs[static_cast<size_t>(i)]) < 0 ? -1 : 1;
            row_sign_[static_cast<size_t>(i)] = s;
            auto& row = tab_[static_cast<size_t>(i)];
            row.assign(static_cast<size_t>(m_ + n_), Rat(0));
            row[static_cast<size_t>(i)] = 1;
            for (int j = 0; j < n_; ++j) {
                const Rat& v = p.rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
                row[static_cast<size_t>(m_ + j)] = s < 0 ? Rat(-v) : v;
            }
            rhs_[static_cast<size_t>(i)] = s < 0 ? Rat(-p.rhs[static_cast<size_t>(i)])
                                                 : p.rhs[static_cast<size_t>(i)];
            basis_[static_cast<size_t>(i)] = i;
        }

        z2_.assign(static_cast<size_t>(m_ + n_), Rat(0));
        for (int j = 0; j < n_; ++j) z2_[static_cast<size_t>(m_ + j)] = cost_[static_cast<size_t>(j)];
        z2val_ = 0;
    }

    Status solve() {
        if (solved_) throw std::logic_error("simplex: solve called twice");
        solved_ = true;

        z1_.assign(static_cast<size_t>(m_ + n_), Rat(0));
        z1val_ = 0;
        for (int i = 0; i < m_; ++i) {
            z1val_ += rhs_[static_cast<size_t>(i)];
            for (int j = 0; j < m_ + n_; ++j)
                z1_[static_cast<size_t>(j)] -= tab_[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) z1_[static_cast<size_t>(i)] += 1;

        phase_ = 1;
        while (sgn(z1val_) > 0) {
            int enter = price(z1_);
            if (enter < 0) break;
            int leave = ratio_test(enter);
            if (leave < 0) throw std::logic_error("simplex: unbounded phase-1 objective");
            pivot(leave, enter);
        }
        if (sgn(z1val_) > 0) {
            status_ = Status::INFEASIBLE;
            return *status_;
        }
        phase_ = 2;
        return run_phase2();
    }

    // Appends a structural column (given in original row order) and its
    // cost; legal once phase 1 has succeeded. The tableau image is read
    // off the artificial block.
    int add_column(const std::vector<Rat>& col, const Rat& cost) {
        if (!solved_ || phase_ != 2)
            throw std::logic_error("simplex: add_column before a feasible solve");
        if (static_cast<int>(col.size()) != m_)
            throw std::invalid_argument("simplex: column height does not match row count");

        std::vector<Rat> norm(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i)
            norm[static_cast<size_t>(i)] =
                row_sign_[static_cast<size_t>(i)] < 0 ? Rat(-col[static_cast<size_t>(i)])
                                                      : col[static_cast<size_t>(i)];
        std::vector<Rat> image(static_cast<size_t>(m_), Rat(0));
        Rat reduced = cost;
        for (int i = 0; i < m_; ++i) {
            if (sgn(norm[static_cast<size_t>(i)]) == 0) continue;
            for (int r = 0; r < m_; ++r)
                image[static_cast<size_t>(r)] +=
                    tab_[static_cast<size_t>(r)][static_cast<size_t>(i)] * norm[static_cast<size_t>(i)];
            reduced += z2_[static_cast<size_t>(i)] * norm[static_cast<size_t>(i)];
        }
        for (int r = 0; r < m_; ++r)
            tab_[static_cast<size_t>(r)].push_back(std::move(image[static_cast<size_t>(r)]));
        z2_.push_back(std::move(reduced));
        z1_.push_back(Rat(0));
        cost_.push_back(cost);
        ++n_;
        status_.reset();
        return n_ - 1;
    }

    Status resolve() {
        if (!solved_ || phase_ != 2)
            throw std::logic_error("simplex: resolve before a feasible solve");
        if (status_ == Status::OPTIMAL || status_ == Status::UNBOUNDED) return *status_;
        return run_phase2();
    }

    Status status() const {
        if (!status_) throw std::logic_error("simplex: no status yet");
        return *status_;
    }

    const Rat& objective() const {
        require(Status::OPTIMAL, "objective");
        return z2val_;
    }

    std::vector<Rat> primal() const {
        require(Status::OPTIMAL, "primal");
        std::vector<Rat> x(static_cast<size_t>(n_), Rat(0));
        for (int r = 0; r < m_; ++r)
            if (basis_[static_cast<size_t>(r)] >= m_)
                x[static_cast<size_t>(basis_[static_cast<size_t>(r)] - m_)] = rhs_[static_cast<size_t>(r)];
        return x;
    }

    // Equality multipliers in original row order: cost.x* = duals.rhs.
    std::vector<Rat> duals() const {
        require(Status::OPTIMAL, "duals");
        std::vector<Rat> pi(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i)
            pi[static_cast<size_t>(i)] =
                row_sign_[static_cast<size_t>(i)] < 0 ? z2_[static_cast<size_t>(i)]
                                                      : Rat(-z2_[static_cast<size_t>(i)]);
        return pi;
    }

    // y with y.A <= 0 componentwise and y.rhs > 0, proving Ax = rhs,
    // x >= 0 unsatisfiable.
    std::vector<Rat> infeasibility_witness() const {
        require(Status::INFEASIBLE, "infeasibility_witness");
        std::vector<Rat> y(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            Rat v = Rat(1) - z1_[static_cast<size_t>(i)];
            y[static_cast<size_t>(i)] = row_sign_[static_cast<size_t>(i)] < 0 ? Rat(-v) : v;
        }
        return y;
    }

    // r >= 0 with A.r = 0 and cost.r < 0.
    std::vector<Rat> ray() const {
        require(Status::UNBOUNDED, "ray");
        std::vector<Rat> r(static_cast<size_t>(n_), Rat(0));
        r[static_cast<size_t>(ray_col_ - m_)] = 1;
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<size_t>(i)] >= m_)
                r[static_cast<size_t>(basis_[static_cast<size_t>(i)] - m_)] =
                    -tab_[static_cast<size_t>(i)][static_cast<size_t>(ray_col_)];
        return r;
    }

    int column_count() const { return n_; }
    int row_count() const { return m_; }
    long pivot_count() const { return pivots_; }

private:
    int m_ = 0;
    int n_ = 0;
    std::vector<int> row_sign_;
    std::vector<std::vector<Rat>> tab_;
    std::vector<Rat> rhs_;
    std::vector<Rat> cost_;
    std::vector<int> basis_;
    std::vector<Rat> z1_, z2_;
    Rat z1val_{0}, z2val_{0};
    int phase_ = 0;
    bool solved_ = false;
    bool bland_ = false;
    int degenerate_run_ = 0;
    int ray_col_ = -1;
    long pivots_ = 0;
    std::optional<Status> status_;

    void require(Status s, const char* what) const {
        if (!status_ || *status_ != s)
            throw std::logic_error(std::string("simplex: ") + what + " unavailable in this status");
    }

    Status run_phase2() {
        for (;;) {
            int enter = price(z2_);
            if (enter < 0) {
                status_ = Status::OPTIMAL;
                return *status_;
            }
            int leave = -1;
            for (int r = 0; r < m_; ++r) {
                if (basis_[static_cast<size_t>(r)] >= m_) continue;
                int s = sgn(tab_[static_cast<size_t>(r)][static_cast<size_t>(enter)]);
                if (s > 0) {
                    leave = r;
                    break;
                }
                if (s != 0 && leave < 0) leave = r;
            }
            if (leave < 0) leave = ratio_test(enter);
            if (leave < 0) {
                ray_col_ = enter;
                status_ = Status::UNBOUNDED;
                return *status_;
            }
            pivot(leave, enter);
        }
    }

    // Entering column among structural columns only; returns -1 at
    // optimality for the given reduced-cost row.
    int price(const std::vector<Rat>& z) const {
        int best = -1;
        if (bland_) {
            for (int j = m_; j < m_ + n_; ++j)
                if (sgn(z[static_cast<size_t>(j)]) < 0) return j;
            return -1;
        }
        for (int j = m_; j < m_ + n_; ++j) {
            if (sgn(z[static_cast<size_t>(j)]) >= 0) continue;
            if (best < 0 || z[static_cast<size_t>(j)] < z[static_cast<size_t>(best)]) best = j;
        }
        return best;
    }

    int ratio_test(int enter) const {
        if (bland_) {
            int leave = -1;
            Rat best;
            for (int r = 0; r < m_; ++r) {
                const Rat& t = tab_[static_cast<size_t>(r)][static_cast<size_t>(enter)];
                if (sgn(t) <= 0) continue;
                Rat theta = rhs_[static_cast<size_t>(r)] / t;
                if (leave < 0 || theta < best ||
                    (theta == best &&
                     basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
                    leave = r;
                    best = theta;
                }
            }
            return leave;
        }
        int leave = -1;
        for (int r = 0; r < m_; ++r) {
            if (sgn(tab_[static_cast<size_t>(r)][static_cast<size_t>(enter)]) <= 0) continue;
            if (leave < 0 || lex_less(r, leave, enter)) leave = r;
        }
        return leave;
    }

    // True when row r precedes row s in the lexicographic ratio order
    // for the entering column: compares (rhs, basis-inverse row)
    // scaled by the pivot entries, cross-multiplied to stay exact.
    bool lex_less(int r, int s, int enter) const {
        const auto& rr = tab_[static_cast<size_t>(r)];
        const auto& rs = tab_[static_cast<size_t>(s)];
        const Rat& tr = rr[static_cast<size_t>(enter)];
        const Rat& ts = rs[static_cast<size_t>(enter)];
        int c = cmp(rhs_[static_cast<size_t>(r)] * ts, rhs_[static_cast<size_t>(s)] * tr);
        if (c != 0) return c < 0;
        for (int k = 0; k < m_; ++k) {
            c = cmp(rr[static_cast<size_t>(k)] * ts, rs[static_cast<size_t>(k)] * tr);
            if (c != 0) return c < 0;
        }
        return false;
    }

    void pivot(int leave, int enter) {
        auto& prow = tab_[static_cast<size_t>(leave)];
        const Rat p = prow[static_cast<size_t>(enter)];
        if (sgn(p) == 0) throw std::logic_error("simplex: zero pivot");
        const int width = m_ + n_;
        if (p != 1) {
            for (int j = 0; j < width; ++j)
                if (sgn(prow[static_cast<size_t>(j)]) != 0) prow[static_cast<size_t>(j)] /= p;
            rhs_[static_cast<size_t>(leave)] /= p;
        }
        bool degenerate = sgn(rhs_[static_cast<size_t>(leave)]) == 0;
        for (int r = 0; r < m_; ++r) {
            if (r == leave) continue;
            eliminate(tab_[static_cast<size_t>(r)], rhs_[static_cast<size_t>(r)], prow,
                      rhs_[static_cast<size_t>(leave)], enter, width);
        }
        eliminate(z2_, z2val_, prow, rhs_[static_cast<size_t>(leave)], enter, width, true);
        if (phase_ == 1)
            eliminate(z1_, z1val_, prow, rhs_[static_cast<size_t>(leave)], enter, width, true);
        basis_[static_cast<size_t>(leave)] = enter;
        ++pivots_;
        if (degenerate) {
            if (++degenerate_run_ > 1024 + 8 * m_) bland_ = true;
        } else {
            degenerate_run_ = 0;
            bland_ = false;
        }
    }

    static void eliminate(std::vector<Rat>& row, Rat& row_rhs, const std::vector<Rat>& prow,
                          const Rat& prhs, int enter, int width, bool objective_row = false) {
        const Rat f = row[static_cast<size_t>(enter)];
        if (sgn(f) == 0) return;
        for (int j = 0; j < width; ++j)
            if (sgn(prow[static_cast<size_t>(j)]) != 0)
                row[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
        if (objective_row)
            row_rhs += f * prhs;
        else
            row_rhs -= f * prhs;
    }
};

}  // namespace regen::lp

#endif
