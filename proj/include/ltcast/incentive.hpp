#ifndef LTCAST_INCENTIVE_HPP
#define LTCAST_INCENTIVE_HPP

#include <cstddef>
#include <vector>

namespace ltcast::incentive {

/// One assistant user's declared unit cost (credits per service time unit).
struct AuBid {
    int id = 0;
    double unit_cost = 1.0;
};

struct GameParams {
    double gamma = 10.0; // leader's utility scale, must be > 1
    std::vector<AuBid> bids;
    double reservation_utility = 0.0; // mu_0 in the requester's payment
};

/// Followers' strategy profile: service times in the original bid order and
/// the participating index set (positions into `bids`).
struct StrategyProfile {
    std::vector<double> service_time;
    std::vector<std::size_t> participants;
};

struct GameOutcome {
    double reward = 0.0; // R*
    StrategyProfile profile;
    double server_utility = 0.0;
    std::vector<double> au_utilities;
    double ru_payment = 0.0;
    std::vector<double> coefficients; // t_i = T_i * R, original bid order
};

/// (t_i / sum_j t_j) * R - t_i * eps_i. Throws std::domain_error on an
/// all-zero profile, where the reward share is undefined.
double au_utility(const std::vector<double>& service_time, std::size_t i, double reward,
                  const std::vector<AuBid>& bids);

/// gamma * ln(1 + sum_i ln(1 + t_i)) - R. Natural logarithms throughout.
double server_utility(const std::vector<double>& service_time, double reward, double gamma);

/// The participating set K: bids sorted ascending by cost (stable on input
/// order), seeded with the two cheapest, grown while
/// eps_i * (|K| - 1) < sum_{j in K} eps_j. Independent of the reward.
std::vector<std::size_t> participant_set(const std::vector<AuBid>& bids);

/// Followers' Nash equilibrium for an announced reward R > 0, via the
/// closed form t_i = ((|K|-1) R / S) * (1 - (|K|-1) eps_i / S) with
/// S = sum_{j in K} eps_j. Requires at least two bids.
StrategyProfile compute_equilibrium(const std::vector<AuBid>& bids, double reward);

/// Per-bid slope T_i with t_i = T_i * R; zero outside K.
std::vector<double> coefficients(const std::vector<AuBid>& bids,
                                 const std::vector<std::size_t>& participants);

/// Leader's optimum: bisection on d(mu)/dR, which is strictly decreasing, on
/// a bracket grown by doubling. A derivative that is already non-positive at
/// R = 0 yields the degenerate all-zero outcome.
GameOutcome optimal_reward(const GameParams& params, double tol = 1e-9);

/// gamma * ln(1 + sum ln(1 + T_i R*)) - mu_0
double ru_payment(const GameOutcome& outcome, double gamma, double mu0);

} // namespace ltcast::incentive

#endif
