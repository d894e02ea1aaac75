#include "ltcast/incentive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ltcast::incentive {

double au_utility(const std::vector<double>& service_time, std::size_t i, double reward,
                  const std::vector<AuBid>& bids) {
    if (i >= service_time.size() || service_time.size() != bids.size())
        throw std::invalid_argument("au_utility: index out of range");
    if (service_time[i] == 0.0)
        return 0.0;
    double total = std::accumulate(service_time.begin(), service_time.end(), 0.0);
    if (total <= 0.0)
        throw std::domain_error("au_utility: reward share undefined for all-zero profile");
    return service_time[i] / total * reward - service_time[i] * bids[i].unit_cost;
}

double server_utility(const std::vector<double>& service_time, double reward, double gamma) {
    double inner = 0.0;
    for (double t : service_time)
        inner += std::log1p(t);
    return gamma * std::log1p(inner) - reward;
}

std::vector<std::size_t> participant_set(const std::vector<AuBid>& bids) {
    if (bids.size() < 2)
        throw std::invalid_argument("participant_set: need at least two bids");

    std::vector<std::size_t> order(bids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return bids[a].unit_cost < bids[b].unit_cost;
    });

    // K starts with the two cheapest and grows while the candidate's cost
    // keeps the closed-form service time positive.
    std::vector<std::size_t> members = {order[0], order[1]};
    double cost_sum = bids[order[0]].unit_cost + bids[order[1]].unit_cost;
    for (std::size_t i = 2; i < order.size(); ++i) {
        double eps = bids[order[i]].unit_cost;
        if (eps * static_cast<double>(members.size() - 1) < cost_sum) {
            members.push_back(order[i]);
            cost_sum += eps;
        } else {
            break;
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

std::vector<double> coefficients(const std::vector<AuBid>& bids,
                                 const std::vector<std::size_t>& participants) {
    if (participants.size() < 2)
        throw std::invalid_argument("coefficients: degenerate game, |K| < 2");
    double cost_sum = 0.0;
    for (std::size_t i : participants)
        cost_sum += bids[i].unit_cost;
    const double k1 = static_cast<double>(participants.size() - 1);

    std::vector<double> t(bids.size(), 0.0);
    for (std::size_t i : participants)
        t[i] = k1 / cost_sum * (1.0 - k1 * bids[i].unit_cost / cost_sum);
    return t;
}

StrategyProfile compute_equilibrium(const std::vector<AuBid>& bids, double reward) {
    if (bids.size() < 2)
        throw std::invalid_argument("compute_equilibrium: degenerate game, need >= 2 bids");
    if (reward <= 0.0)
        throw std::invalid_argument("compute_equilibrium: reward must be positive");

    StrategyProfile profile;
    profile.participants = participant_set(bids);
    std::vector<double> slope = coefficients(bids, profile.participants);
    profile.service_time.resize(bids.size());
    for (std::size_t i = 0; i < bids.size(); ++i)
        profile.service_time[i] = slope[i] * reward;
    return profile;
}

namespace {

// d(mu)/dR at R, for the reduced objective mu(R) = gamma*ln(1 + sum ln(1+T_i R)) - R.
double reward_derivative(const std::vector<double>& slope, double gamma, double reward) {
    double x = 1.0;
    double num = 0.0;
    for (double t : slope) {
        if (t <= 0.0)
            continue;
        x += std::log1p(t * reward);
        num += t / (1.0 + t * reward);
    }
    return gamma * num / x - 1.0;
}

} // namespace

GameOutcome optimal_reward(const GameParams& params, double tol) {
    if (params.gamma <= 1.0)
        throw std::invalid_argument("optimal_reward: gamma must exceed 1");
    if (params.bids.size() < 2)
        throw std::invalid_argument("optimal_reward: degenerate game, need >= 2 bids");
    if (tol <= 0.0)
        throw std::invalid_argument("optimal_reward: tolerance must be positive");

    GameOutcome out;
    out.profile.participants = participant_set(params.bids);
    out.coefficients = coefficients(params.bids, out.profile.participants);

    if (reward_derivative(out.coefficients, params.gamma, 0.0) <= 0.0) {
        // No reward level makes participation profitable for the leader.
        out.reward = 0.0;
        out.profile.service_time.assign(params.bids.size(), 0.0);
        out.profile.participants.clear();
        out.au_utilities.assign(params.bids.size(), 0.0);
        out.server_utility = 0.0;
        out.ru_payment = ru_payment(out, params.gamma, params.reservation_utility);
        return out;
    }

    double lo = 0.0, hi = 1.0;
    while (reward_derivative(out.coefficients, params.gamma, hi) > 0.0)
        hi *= 2.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (reward_derivative(out.coefficients, params.gamma, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.reward = 0.5 * (lo + hi);

    out.profile.service_time.resize(params.bids.size());
    for (std::size_t i = 0; i < params.bids.size(); ++i)
        out.profile.service_time[i] = out.coefficients[i] * out.reward;
    out.server_utility = server_utility(out.profile.service_time, out.reward, params.gamma);
    out.au_utilities.resize(params.bids.size());
    for (std::size_t i = 0; i < params.bids.size(); ++i)
        out.au_utilities[i] =
            au_utility(out.profile.service_time, i, out.reward, params.bids);
    out.ru_payment = ru_payment(out, params.gamma, params.reservation_utility);
    return out;
}

double ru_payment(const GameOutcome& outcome, double gamma, double mu0) {
    double inner = 0.0;
    for (double t : outcome.profile.service_time)
        inner += std::log1p(t);
    return gamma * std::log1p(inner) - mu0;
}

} // namespace ltcast::incentive
