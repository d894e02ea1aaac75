#include "ltcast/soliton.hpp"

#include <cmath>
#include <stdexcept>

namespace ltcast {

bool SolitonParams::valid() const {
    return n >= 1 && c > 0.0 && delta > 0.0 && delta < 1.0;
}

double SolitonParams::spike_scale() const {
    return c * std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(n) / delta);
}

std::uint32_t SolitonParams::spike_index() const {
    return static_cast<std::uint32_t>(std::ceil(static_cast<double>(n) / spike_scale()));
}

DegreeDistribution::DegreeDistribution(std::vector<double> pmf) : pmf_(std::move(pmf)) {
    cdf_.reserve(pmf_.size());
    double acc = 0.0;
    for (double p : pmf_) {
        if (p < 0.0)
            throw std::invalid_argument("degree distribution: negative mass");
        acc += p;
        cdf_.push_back(acc);
    }
    if (pmf_.empty() || std::abs(acc - 1.0) > 1e-9)
        throw std::invalid_argument("degree distribution: mass does not sum to 1");
    cdf_.back() = 1.0;
}

std::uint32_t DegreeDistribution::sample_degree(double u) const {
    // First degree whose cumulative mass exceeds u; clamped to max_degree.
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (u < cdf_[mid])
            hi = mid;
        else
            lo = mid + 1;
    }
    return static_cast<std::uint32_t>(lo + 1);
}

DegreeDistribution ideal_soliton(std::uint32_t n) {
    if (n == 0)
        throw std::invalid_argument("ideal_soliton: n must be >= 1");
    std::vector<double> pmf(n);
    pmf[0] = 1.0 / static_cast<double>(n);
    for (std::uint32_t j = 2; j <= n; ++j)
        pmf[j - 1] = 1.0 / (static_cast<double>(j) * static_cast<double>(j - 1));
    return DegreeDistribution(std::move(pmf));
}

DegreeDistribution robust_soliton(const SolitonParams& params) {
    if (!params.valid())
        throw std::invalid_argument("robust_soliton: invalid parameters");
    const std::uint32_t n = params.n;
    const double r = params.spike_scale();
    if (r >= static_cast<double>(n))
        throw std::invalid_argument("robust_soliton: spike scale >= n, degenerate spike position");
    const std::uint32_t spike = params.spike_index();

    std::vector<double> mass(n);
    double beta = 0.0;
    for (std::uint32_t j = 1; j <= n; ++j) {
        double ideal = (j == 1) ? 1.0 / static_cast<double>(n)
                                : 1.0 / (static_cast<double>(j) * static_cast<double>(j - 1));
        double extra = 0.0;
        if (j < spike)
            extra = r / (static_cast<double>(j) * static_cast<double>(n));
        else if (j == spike)
            extra = r * std::log(r / params.delta) / static_cast<double>(n);
        mass[j - 1] = ideal + extra;
        beta += mass[j - 1];
    }
    for (double& m : mass)
        m /= beta;
    return DegreeDistribution(std::move(mass));
}

} // namespace ltcast
