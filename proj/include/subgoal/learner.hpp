#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "subgoal/grid.hpp"
#include "subgoal/rng.hpp"

namespace subgoal {

/// Per-(state, action) value estimate plus the running sums of every value
/// the estimate has taken, so a sample standard deviation is available in O(1).
struct ActionStats {
    double q = 0.0;
    std::int64_t n = 0;          // updates applied
    double s1 = 0.0;             // sum of recorded q samples
    double s2 = 0.0;             // sum of squared q samples
    std::int64_t t_samples = 0;  // recorded samples

    friend bool operator==(const ActionStats&, const ActionStats&) = default;
};

/// Count plus running sums of a sample history.
struct SampleStats {
    std::int64_t n = 0;
    double s1 = 0.0;
    double s2 = 0.0;
    std::int64_t t_samples = 0;
};

inline SampleStats sample_stats(const ActionStats& st) { return {st.n, st.s1, st.s2, st.t_samples}; }

/// Sample standard deviation from running sums:
/// sqrt((t*s2 - s1^2) / (t*(t-1))). Requires t >= 2; clamps tiny negative
/// variances from cancellation to zero.
double stddev_from_sums(std::int64_t t, double s1, double s2);

class QTable {
  public:
    QTable() = default;
    QTable(int rows, int cols, int num_actions);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int num_actions() const { return num_actions_; }

    ActionStats& operator()(GridPos s, int a) { return data_[index(s, a)]; }
    const ActionStats& operator()(GridPos s, int a) const { return data_[index(s, a)]; }
    ActionStats& at(GridPos s, int a);
    const ActionStats& at(GridPos s, int a) const;

    double q(GridPos s, int a) const { return (*this)(s, a).q; }

    /// Q-values of the first `count` actions at `s`.
    std::vector<double> q_values(GridPos s, int count) const;

    /// CSV with header row,col,action,q,n,s1,s2,t_samples. Doubles are
    /// written in shortest round-trip form.
    void write_csv(std::ostream& out) const;
    static QTable read_csv(std::istream& in, int rows, int cols, int num_actions);

    friend bool operator==(const QTable&, const QTable&) = default;

  private:
    std::size_t index(GridPos s, int a) const {
        return (static_cast<std::size_t>(s.row) * cols_ + s.col) * num_actions_ + a;
    }

    int rows_ = 0;
    int cols_ = 0;
    int num_actions_ = 0;
    std::vector<ActionStats> data_;
};

/// SARSA step: q(s,a) += lambda * (r + gamma*q(s',a') - q(s,a)); the new
/// q(s,a) is appended to the running sums.
void sarsa_update(QTable& table, GridPos s, int a, double reward, GridPos s_next, int a_next, double lambda,
                  double gamma);

/// Learning-rate and exploration schedules.
enum class DecayForm {
    Geometric,  // lambda0 * (1 - lambda_decay)^k
    Inverse,    // lambda0 / (1 + lambda_decay * k)
};

struct Schedules {
    double lambda0 = 0.99;
    double lambda_decay = 0.001;
    double eps0 = 0.3;
    double eps_decay = 0.3;
    double gamma = 0.9;
    DecayForm lambda_form = DecayForm::Inverse;

    void validate() const;
};

struct ScheduleValues {
    double lambda;
    double epsilon;
};

/// lambda_k per lambda_form, eps_k = eps0 * exp(-eps_decay * k).
ScheduleValues schedule_at(const Schedules& schedules, std::int64_t k);
double lambda_at(const Schedules& schedules, std::int64_t k);
double epsilon_at(const Schedules& schedules, std::int64_t k);

/// Epsilon-greedy distribution over `q`. The greedy mass is split evenly
/// across tied maxima.
std::vector<double> epsilon_greedy(std::span<const double> q, double epsilon);

/// Samples an index from `probs`. Throws std::invalid_argument unless the
/// vector is non-negative and sums to 1 within 1e-9.
int select_action(std::span<const double> probs, Rng& rng);

}  // namespace subgoal
