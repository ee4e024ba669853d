#include "ots/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace ots::lp {

double Row::activity(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k) s += value[k] * x[static_cast<std::size_t>(index[k])];
    return s;
}

int LinearProgram::add_column(double cost, double lower, double upper, std::string name) {
    if (!std::isfinite(cost)) throw std::invalid_argument("LinearProgram: objective coefficient must be finite");
    if (lower > upper) throw std::invalid_argument("LinearProgram: column lower bound exceeds upper bound");
    const int j = num_cols();
    cost_.push_back(cost);
    lower_.push_back(lower);
    upper_.push_back(upper);
    names_.push_back(name.empty() ? "c" + std::to_string(j) : std::move(name));
    return j;
}

int LinearProgram::add_row(Row row) {
    if (row.index.size() != row.value.size()) throw std::invalid_argument("LinearProgram: malformed row");
    for (int c : row.index)
        if (c < 0 || c >= num_cols()) throw std::out_of_range("LinearProgram: row references unknown column");
    rows_.push_back(std::move(row));
    return num_rows() - 1;
}

void LinearProgram::set_bounds(int j, double lower, double upper) {
    lower_.at(static_cast<std::size_t>(j)) = lower;
    upper_.at(static_cast<std::size_t>(j)) = upper;
}

void LinearProgram::set_cost(int j, double cost) { cost_.at(static_cast<std::size_t>(j)) = cost; }

double LinearProgram::objective(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < cost_.size(); ++j) s += cost_[j] * x[j];
    return s;
}

namespace {

void write_term(std::ostream& os, double coef, const std::string& name, bool first) {
    if (coef < 0) os << (first ? "-" : " - ");
    else if (!first) os << " + ";
    os << std::abs(coef) << ' ' << name;
}

}  // namespace

std::string LinearProgram::to_lp_format(std::span<const int> integer_cols) const {
    std::ostringstream os;
    os.precision(17);
    os << "Minimize\n obj:";
    bool first = true;
    for (int j = 0; j < num_cols(); ++j) {
        if (cost(j) == 0.0) continue;
        os << ' ';
        write_term(os, cost(j), name(j), first);
        first = false;
    }
    if (first) os << " 0 " << (num_cols() > 0 ? name(0) : "x");
    os << "\nSubject To\n";
    for (int i = 0; i < num_rows(); ++i) {
        const Row& r = row(i);
        os << " r" << i << ": ";
        if (r.index.empty()) os << "0 " << (num_cols() > 0 ? name(0) : "x");
        for (std::size_t k = 0; k < r.index.size(); ++k) write_term(os, r.value[k], name(r.index[k]), k == 0);
        os << (r.sense == Sense::LessEqual ? " <= " : r.sense == Sense::Equal ? " = " : " >= ") << r.rhs << '\n';
    }
    os << "Bounds\n";
    for (int j = 0; j < num_cols(); ++j) {
        const double lo = lower(j), up = upper(j);
        if (std::isinf(lo) && std::isinf(up)) {
            os << ' ' << name(j) << " free\n";
        } else if (lo == up) {
            os << ' ' << name(j) << " = " << lo << '\n';
        } else {
            os << ' ';
            if (std::isinf(lo)) os << "-inf"; else os << lo;
            os << " <= " << name(j) << " <= ";
            if (std::isinf(up)) os << "+inf"; else os << up;
            os << '\n';
        }
    }
    if (!integer_cols.empty()) {
        os << "Generals\n";
        for (int j : integer_cols) os << ' ' << name(j) << '\n';
    }
    os << "End\n";
    return os.str();
}

LinearProgram add_rows(LinearProgram lp, std::span<const Row> rows) {
    for (const Row& r : rows) lp.add_row(r);
    return lp;
}

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "?";
}

Basis extend_basis(Basis basis, std::size_t total_rows) {
    basis.rows.resize(total_rows, VarState::Basic);
    return basis;
}

// ---------------------------------------------------------------------------

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Outcome { Optimal, Infeasible, Unbounded };

// Variables 0..n-1 are structural columns, n..n+m-1 are row logicals with
// column -e_i, so every constraint reads A x - r = 0.
class Simplex {
public:
    Simplex(const LinearProgram& lp, const Options& opts) : opts_(opts) {
        m_ = lp.num_rows();
        n_ = lp.num_cols();
        const int total = n_ + m_;
        cols_.resize(static_cast<std::size_t>(n_));
        cost_.assign(static_cast<std::size_t>(total), 0.0);
        lo_.resize(static_cast<std::size_t>(total));
        up_.resize(static_cast<std::size_t>(total));
        for (int j = 0; j < n_; ++j) {
            cost_[j] = lp.cost(j);
            lo_[j] = lp.lower(j);
            up_[j] = lp.upper(j);
        }
        for (int i = 0; i < m_; ++i) {
            const Row& r = lp.row(i);
            for (std::size_t k = 0; k < r.index.size(); ++k)
                if (r.value[k] != 0.0) cols_[static_cast<std::size_t>(r.index[k])].emplace_back(i, r.value[k]);
            const std::size_t v = static_cast<std::size_t>(n_ + i);
            lo_[v] = r.sense == Sense::LessEqual ? -kInf : r.rhs;
            up_[v] = r.sense == Sense::GreaterEqual ? kInf : r.rhs;
        }
        max_iter_ = opts.max_iterations > 0 ? opts.max_iterations : 100L * (m_ + n_) + 10000;
    }

    Solution run(const Basis* warm) {
        bool loaded = warm && load_basis(*warm);
        if (!loaded) slack_basis();

        if (primal_infeasibility() > 0.0) {
            if (loaded && dual_feasible()) {
                if (dual_simplex() == Outcome::Infeasible) return finish(Status::Infeasible);
            } else {
                if (primal(true) == Outcome::Infeasible) return finish(Status::Infeasible);
            }
        }
        for (int attempt = 0; attempt < 5; ++attempt) {
            if (primal(false) == Outcome::Unbounded) return finish(Status::Unbounded);
            refactor();
            if (primal_infeasibility() == 0.0) break;
            if (primal(true) == Outcome::Infeasible) return finish(Status::Infeasible);
        }
        return finish(Status::Optimal);
    }

private:
    // --- basis bookkeeping -------------------------------------------------

    bool is_fixed(int j) const { return lo_[j] == up_[j]; }

    VarState default_state(int j) const {
        if (std::isfinite(lo_[j])) return VarState::AtLower;
        if (std::isfinite(up_[j])) return VarState::AtUpper;
        return VarState::AtZero;
    }

    void place_nonbasic(int j) {
        switch (state_[j]) {
            case VarState::AtLower: x_[j] = lo_[j]; break;
            case VarState::AtUpper: x_[j] = up_[j]; break;
            default: x_[j] = 0.0; break;
        }
    }

    void slack_basis() {
        const int total = n_ + m_;
        state_.assign(static_cast<std::size_t>(total), VarState::Basic);
        x_.assign(static_cast<std::size_t>(total), 0.0);
        head_.resize(static_cast<std::size_t>(m_));
        for (int j = 0; j < n_; ++j) {
            state_[j] = default_state(j);
            place_nonbasic(j);
        }
        for (int i = 0; i < m_; ++i) head_[i] = n_ + i;
        refactor();
    }

    bool load_basis(const Basis& b) {
        if (static_cast<int>(b.cols.size()) != n_ || static_cast<int>(b.rows.size()) != m_) return false;
        const int total = n_ + m_;
        state_.resize(static_cast<std::size_t>(total));
        x_.assign(static_cast<std::size_t>(total), 0.0);
        head_.clear();
        for (int j = 0; j < total; ++j) {
            VarState s = j < n_ ? b.cols[j] : b.rows[j - n_];
            if (s == VarState::Basic) {
                head_.push_back(j);
            } else {
                if ((s == VarState::AtLower && !std::isfinite(lo_[j])) ||
                    (s == VarState::AtUpper && !std::isfinite(up_[j])) ||
                    (s == VarState::AtZero && (std::isfinite(lo_[j]) || std::isfinite(up_[j]))))
                    s = default_state(j);
                place_nonbasic_state(j, s);
            }
            state_[j] = s;
        }
        if (static_cast<int>(head_.size()) != m_) return false;
        return refactor();
    }

    void place_nonbasic_state(int j, VarState s) {
        state_[j] = s;
        place_nonbasic(j);
    }

    // Rebuilds the explicit inverse and recomputes basic values. Returns false
    // when the basis matrix is numerically singular.
    bool refactor() {
        since_refactor_ = 0;
        if (m_ == 0) return true;
        MatrixXd b = MatrixXd::Zero(m_, m_);
        for (int i = 0; i < m_; ++i) {
            const int j = head_[i];
            if (j < n_) {
                for (auto [r, v] : cols_[j]) b(r, i) = v;
            } else {
                b(j - n_, i) = -1.0;
            }
        }
        Eigen::PartialPivLU<MatrixXd> lu(b);
        if (!(lu.rcond() > 1e-13)) return false;
        binv_ = lu.inverse();
        compute_basic_values();
        return true;
    }

    void compute_basic_values() {
        VectorXd rhs = VectorXd::Zero(m_);  // -N x_N
        for (int j = 0; j < n_ + m_; ++j) {
            if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
            if (j < n_) {
                for (auto [r, v] : cols_[j]) rhs(r) -= v * x_[j];
            } else {
                rhs(j - n_) += x_[j];
            }
        }
        VectorXd xb = binv_ * rhs;
        for (int i = 0; i < m_; ++i) x_[head_[i]] = xb(i);
    }

    VectorXd ftran(int j) const {
        VectorXd a = VectorXd::Zero(m_);
        if (j < n_) {
            for (auto [r, v] : cols_[j]) a.noalias() += v * binv_.col(r);
        } else {
            a = -binv_.col(j - n_);
        }
        return a;
    }

    double dot_column(const VectorXd& y, int j) const {
        if (j >= n_) return -y(j - n_);
        double s = 0.0;
        for (auto [r, v] : cols_[j]) s += y(r) * v;
        return s;
    }

    void pivot(int r, int q, const VectorXd& alpha) {
        const double p = alpha(r);
        binv_.row(r) /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == r || alpha(i) == 0.0) continue;
            binv_.row(i) -= alpha(i) * binv_.row(r);
        }
        head_[r] = q;
        state_[q] = VarState::Basic;
        if (++since_refactor_ >= opts_.refactor_interval) refactor();
    }

    double infeasibility_of(int j) const {
        if (x_[j] < lo_[j] - opts_.feas_tol) return lo_[j] - x_[j];
        if (x_[j] > up_[j] + opts_.feas_tol) return x_[j] - up_[j];
        return 0.0;
    }

    double primal_infeasibility() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += infeasibility_of(head_[i]);
        return s;
    }

    VectorXd duals(bool phase1) const {
        VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) {
            const int j = head_[i];
            if (phase1) {
                cb(i) = x_[j] < lo_[j] - opts_.feas_tol ? -1.0 : x_[j] > up_[j] + opts_.feas_tol ? 1.0 : 0.0;
            } else {
                cb(i) = cost_[j];
            }
        }
        return binv_.transpose() * cb;
    }

    double reduced_cost(const VectorXd& y, int j, bool phase1) const {
        return (phase1 ? 0.0 : cost_[j]) - dot_column(y, j);
    }

    bool dual_feasible() const {
        const VectorXd y = duals(false);
        for (int j = 0; j < n_ + m_; ++j) {
            if (state_[j] == VarState::Basic || is_fixed(j)) continue;
            const double d = reduced_cost(y, j, false);
            if ((state_[j] == VarState::AtLower || state_[j] == VarState::AtZero) && d < -opts_.opt_tol) return false;
            if ((state_[j] == VarState::AtUpper || state_[j] == VarState::AtZero) && d > opts_.opt_tol) return false;
        }
        return true;
    }

    void count_iteration(bool degenerate) {
        if (++iterations_ > max_iter_) throw SimplexError("simplex iteration limit exceeded", iterations_);
        if (degenerate) {
            if (++degenerate_run_ > 2L * (m_ + n_)) bland_ = true;
        } else {
            degenerate_run_ = 0;
        }
    }

    // --- primal simplex ----------------------------------------------------

    Outcome primal(bool phase1) {
        bland_ = false;
        degenerate_run_ = 0;
        const double tol = opts_.feas_tol;
        for (;;) {
            if (phase1 && primal_infeasibility() == 0.0) return Outcome::Optimal;
            const VectorXd y = duals(phase1);

            int q = -1;
            double best = 0.0;
            int dir = 0;
            for (int j = 0; j < n_ + m_; ++j) {
                if (state_[j] == VarState::Basic || is_fixed(j)) continue;
                const double d = reduced_cost(y, j, phase1);
                int jdir = 0;
                if ((state_[j] == VarState::AtLower || state_[j] == VarState::AtZero) && d < -opts_.opt_tol) jdir = 1;
                else if ((state_[j] == VarState::AtUpper || state_[j] == VarState::AtZero) && d > opts_.opt_tol) jdir = -1;
                if (jdir == 0) continue;
                if (bland_) {
                    q = j;
                    dir = jdir;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    q = j;
                    dir = jdir;
                }
            }
            if (q < 0) return phase1 ? Outcome::Infeasible : Outcome::Optimal;

            const VectorXd alpha = ftran(q);

            // Two-pass (Harris) ratio test. delta(i) is the rate of change of
            // basic variable i per unit step of the entering variable.
            auto limit = [&](int i, double slack) -> double {
                const int k = head_[i];
                const double delta = -dir * alpha(i);
                if (std::abs(alpha(i)) <= opts_.pivot_tol) return kInf;
                const double xv = x_[k];
                if (delta < 0) {
                    if (phase1 && xv < lo_[k] - tol) return kInf;
                    const double bound = (phase1 && xv > up_[k] + tol) ? up_[k] : lo_[k];
                    if (!std::isfinite(bound)) return kInf;
                    return (xv - bound + slack) / -delta;
                }
                if (phase1 && xv > up_[k] + tol) return kInf;
                const double bound = (phase1 && xv < lo_[k] - tol) ? lo_[k] : up_[k];
                if (!std::isfinite(bound)) return kInf;
                return (bound - xv + slack) / delta;
            };
            double relaxed = kInf;
            for (int i = 0; i < m_; ++i) relaxed = std::min(relaxed, limit(i, tol));
            int r = -1;
            double step = kInf;
            double best_alpha = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double t = limit(i, 0.0);
                if (t <= relaxed && std::isfinite(t)) {
                    const double a = std::abs(alpha(i));
                    if (bland_ ? (r < 0 || head_[i] < head_[r]) : a > best_alpha) {
                        best_alpha = a;
                        r = i;
                        step = std::max(t, 0.0);
                    }
                }
            }
            const double range = up_[q] - lo_[q];
            if (std::isfinite(range) && range <= step) {
                // Bound flip: entering variable reaches its opposite bound first.
                for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * range * alpha(i);
                place_nonbasic_state(q, dir > 0 ? VarState::AtUpper : VarState::AtLower);
                count_iteration(false);
                continue;
            }
            if (r < 0) {
                if (phase1) throw SimplexError("phase 1 ray without blocking variable", iterations_);
                return Outcome::Unbounded;
            }

            const int leaving = head_[r];
            const double delta_r = -dir * alpha(r);
            double target;
            if (delta_r < 0) target = (phase1 && x_[leaving] > up_[leaving] + tol) ? up_[leaving] : lo_[leaving];
            else target = (phase1 && x_[leaving] < lo_[leaving] - tol) ? lo_[leaving] : up_[leaving];

            x_[q] += dir * step;
            for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * step * alpha(i);
            x_[leaving] = target;
            state_[leaving] = (target == lo_[leaving]) ? VarState::AtLower : VarState::AtUpper;
            if (is_fixed(leaving)) state_[leaving] = VarState::AtLower;
            pivot(r, q, alpha);
            count_iteration(step <= 1e-12);
        }
    }

    // --- dual simplex ------------------------------------------------------

    Outcome dual_simplex() {
        bland_ = false;
        degenerate_run_ = 0;
        for (;;) {
            int r = -1;
            double worst = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double inf = infeasibility_of(head_[i]);
                if (inf <= 0.0) continue;
                if (bland_ ? (r < 0 || head_[i] < head_[r]) : inf > worst) {
                    worst = inf;
                    r = i;
                }
            }
            if (r < 0) return Outcome::Optimal;

            const int leaving = head_[r];
            const bool to_lower = x_[leaving] < lo_[leaving];
            const double bound = to_lower ? lo_[leaving] : up_[leaving];

            const VectorXd rho = binv_.row(r).transpose();
            const VectorXd y = duals(false);

            struct Cand {
                int j;
                double ratio;
                double alpha;
            };
            std::vector<Cand> cands;
            for (int j = 0; j < n_ + m_; ++j) {
                if (state_[j] == VarState::Basic || is_fixed(j)) continue;
                const double a = dot_column(rho, j);
                if (std::abs(a) <= opts_.pivot_tol) continue;
                const bool can_up = state_[j] == VarState::AtLower || state_[j] == VarState::AtZero;
                const bool can_down = state_[j] == VarState::AtUpper || state_[j] == VarState::AtZero;
                // x_leaving moves by -a per unit increase of x_j.
                const bool ok = to_lower ? ((can_up && a < 0) || (can_down && a > 0))
                                         : ((can_up && a > 0) || (can_down && a < 0));
                if (!ok) continue;
                const double d = reduced_cost(y, j, false);
                cands.push_back({j, std::abs(d) / std::abs(a), a});
            }
            if (cands.empty()) return Outcome::Infeasible;

            double relaxed = kInf;
            for (const auto& c : cands) {
                const double d = reduced_cost(y, c.j, false);
                relaxed = std::min(relaxed, (std::abs(d) + opts_.opt_tol) / std::abs(c.alpha));
            }
            int q = -1;
            double best_alpha = 0.0, ratio = 0.0;
            for (const auto& c : cands) {
                if (c.ratio > relaxed) continue;
                if (bland_ ? (q < 0 || c.j < q) : std::abs(c.alpha) > best_alpha) {
                    best_alpha = std::abs(c.alpha);
                    q = c.j;
                    ratio = c.ratio;
                }
            }

            const VectorXd alpha = ftran(q);
            const double step = (x_[leaving] - bound) / alpha(r);
            x_[q] += step;
            for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha(i) * step;
            x_[leaving] = bound;
            state_[leaving] = to_lower ? VarState::AtLower : VarState::AtUpper;
            pivot(r, q, alpha);
            count_iteration(ratio <= 1e-12);
        }
    }

    Solution finish(Status status) {
        Solution s;
        s.status = status;
        s.iterations = iterations_;
        s.x.assign(x_.begin(), x_.begin() + n_);
        s.row_activity.assign(x_.begin() + n_, x_.end());
        const VectorXd y = duals(false);
        s.duals.assign(y.data(), y.data() + m_);
        s.reduced_costs.resize(static_cast<std::size_t>(n_));
        for (int j = 0; j < n_; ++j) s.reduced_costs[j] = state_[j] == VarState::Basic ? 0.0 : reduced_cost(y, j, false);
        double obj = 0.0;
        for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
        s.objective = obj;
        s.basis.cols.assign(state_.begin(), state_.begin() + n_);
        s.basis.rows.assign(state_.begin() + n_, state_.end());
        return s;
    }

    Options opts_;
    int m_ = 0;
    int n_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> cost_, lo_, up_, x_;
    std::vector<VarState> state_;
    std::vector<int> head_;
    MatrixXd binv_;
    int since_refactor_ = 0;
    long iterations_ = 0;
    long max_iter_ = 0;
    long degenerate_run_ = 0;
    bool bland_ = false;
};

}  // namespace

Solution solve(const LinearProgram& lp, const Basis* warm, const Options& opts) {
    Simplex simplex(lp, opts);
    return simplex.run(warm);
}

}  // namespace ots::lp
