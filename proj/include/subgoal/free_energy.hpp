#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "subgoal/gridworld.hpp"
#include "subgoal/learner.hpp"
#include "subgoal/space_model.hpp"

namespace subgoal {

enum class BehaviorSource {
    Main,   // the agent's epsilon-greedy policy over main-space Q, for both spaces
    Space,  // epsilon-greedy over each space's own Q-values
};

/// Free-energy trade-off parameters.
///   alpha      inverse temperature of the KL term towards the behaviour policy
///   beta       weight of the main-space utility agreement term (> 1)
///   nu         confidence level of the value intervals is 1 - nu
///   prob_floor probabilities are clamped to this before taking logs
///   behavior   which Q-values the behaviour policy pi_b is greedy in
struct FEParams {
    double alpha = 4.0;
    double beta = 7.0;
    double nu = 0.1;
    double prob_floor = 1e-10;
    BehaviorSource behavior = BehaviorSource::Main;

    void validate() const;
};

class InsufficientSamples : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Value belief for one action: uniform on [center - radius, center + radius].
struct BeliefInterval {
    double center = 0.0;
    double radius = 0.0;
    bool sufficient = false;
};

/// Empirical-Bernstein half width
///   std * sqrt(2 ln(3/nu) / n) + 3 ln(3/nu) / n
/// with std the sample standard deviation of the recorded history.
/// Throws InsufficientSamples when n < 2 or fewer than two samples are recorded.
double confidence_radius(const SampleStats& stats, double nu);
double confidence_radius(double stddev, std::int64_t n, double nu);

/// Interval for one action from its count and sums; `sufficient` is false
/// (and the radius zero) when the statistics cannot support an interval.
BeliefInterval belief_interval(double center, const SampleStats& stats, double nu);

/// P(action i has the largest value) under independent uniform beliefs.
/// Integrated exactly: piecewise Gauss-Legendre between interval endpoints,
/// where the product of CDFs is polynomial. Zero-width intervals are point
/// masses; tied point masses share their probability. Any insufficient
/// interval makes the result uniform.
std::vector<double> thompson_policy(std::span<const BeliefInterval> intervals);

/// U = ln(clamp(pi_ts, floor, 1)); U_hat = U_m - (U_m - U_main) / beta.
std::vector<double> shaped_utility(std::span<const double> pi_ts_m, std::span<const double> pi_ts_main,
                                   double beta, double prob_floor);

struct OptimalPolicy {
    std::vector<double> pi;
    double z = 0.0;
};

/// pi*(a) = pi_b(a) exp(alpha U_hat(a)) / z.
OptimalPolicy optimal_policy(std::span<const double> pi_b, std::span<const double> u_hat, double alpha);

/// Free energy of a target policy `pi` in space m:
///   E_pi[ (1/alpha) ln(pi/pi_b) + (1/beta) ln(pi_ts_m/pi_ts_main) - ln pi_ts_m ]
/// = E_pi[ (1/alpha) ln(pi/pi_b) - U_hat ],
/// which optimal_policy minimises exactly, with minimum -(1/alpha) ln z.
/// Target-space logs are clamped at prob_floor; terms with pi(a) = 0 contribute nothing, and
/// mass where pi_b(a) = 0 makes the result +infinity.
double free_energy(std::span<const double> pi, std::span<const double> pi_b, std::span<const double> pi_ts_main,
                   std::span<const double> pi_ts_m, double alpha, double beta, double prob_floor = 1e-10);

struct SpaceReport {
    std::vector<BeliefInterval> intervals;
    std::vector<double> pi_b;
    std::vector<double> pi_ts;
    std::vector<double> u_hat;
    std::vector<double> pi_star;
    double free_energy = 0.0;
    bool sufficient = false;
};

struct SpacePolicyReport {
    std::array<SpaceReport, 2> spaces;
    SpaceId selected = SpaceId::Main;

    const SpaceReport& operator[](SpaceId id) const { return spaces[static_cast<std::size_t>(id)]; }
    SpaceReport& operator[](SpaceId id) { return spaces[static_cast<std::size_t>(id)]; }
};

/// Ties closer than this resolve to the main space.
constexpr double kSpaceTieTolerance = 1e-12;

/// Evaluates both spaces at `s` and picks the one with the lower free energy
/// of its optimal policy. Behaviour policies are epsilon-greedy with the
/// given epsilon, over the Q-values chosen by params.behavior.
SpacePolicyReport select_space(GridPos s, const Layout& layout, const QTable& table, const SpaceModel& spaces,
                               const FEParams& params, double epsilon);

}  // namespace subgoal
