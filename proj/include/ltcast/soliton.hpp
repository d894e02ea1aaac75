#ifndef LTCAST_SOLITON_HPP
#define LTCAST_SOLITON_HPP

#include <cstdint>
#include <vector>

namespace ltcast {

/// Parameters of the robust soliton distribution for a block of n source
/// symbols. The spike position is ceil(n / spike_scale()) and the whole
/// distribution degenerates when spike_scale() >= n.
struct SolitonParams {
    std::uint32_t n = 0;
    double c = 0.1;
    double delta = 0.5;

    bool valid() const;
    /// c * sqrt(n) * ln(n / delta)
    double spike_scale() const;
    /// ceil(n / spike_scale()); may exceed n for small blocks, in which
    /// case no spike term lands inside [1, n].
    std::uint32_t spike_index() const;
};

/// Probability mass over symbol degrees 1..n plus its cumulative form.
/// pmf[d-1] is the probability of degree d.
class DegreeDistribution {
public:
    DegreeDistribution() = default;
    explicit DegreeDistribution(std::vector<double> pmf);

    std::uint32_t max_degree() const { return static_cast<std::uint32_t>(pmf_.size()); }
    const std::vector<double>& pmf() const { return pmf_; }
    const std::vector<double>& cdf() const { return cdf_; }

    /// Inverse-CDF lookup: maps u in [0,1) to a degree in [1, n].
    std::uint32_t sample_degree(double u) const;

private:
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

DegreeDistribution ideal_soliton(std::uint32_t n);
DegreeDistribution robust_soliton(const SolitonParams& params);

} // namespace ltcast

#endif
