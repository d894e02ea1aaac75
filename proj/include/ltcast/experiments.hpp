#ifndef LTCAST_EXPERIMENTS_HPP
#define LTCAST_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ltcast/coop.hpp"
#include "ltcast/incentive.hpp"

namespace ltcast::exp {

/// Outcome of one experiment run: human-readable notes plus a pass/fail for
/// the assertions the experiment carries (trend checks, exactness).
struct ExperimentResult {
    bool ok = true;
    std::vector<std::string> notes;

    void check(bool pass, const std::string& what);
    void info(const std::string& what);
};

struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double stddev(const std::vector<double>& v);

/// Per-block decoding overhead over a lossless symbol stream.
std::vector<double> measure_block_overheads(std::uint32_t n, std::uint16_t symbol_size,
                                            std::uint32_t trials, std::uint64_t seed,
                                            double c = 0.1, double delta = 0.5);

/// Wall-clock peeling throughput in decoded bytes per second.
double measure_decode_throughput(std::uint32_t n, std::uint16_t symbol_size,
                                 std::uint32_t trials, std::uint64_t seed);

// --- experiment specs -------------------------------------------------------

struct GridSpec {
    std::vector<std::uint32_t> block_sizes = {32, 64, 128, 256, 512, 1024};
    std::vector<std::uint16_t> symbol_sizes = {64, 128, 256, 512, 1024, 1448};
    std::uint32_t trials = 100;
    std::uint64_t seed = 1;
    double c = 0.1;
    double delta = 0.5;
};

ExperimentResult run_overhead_matrix(const GridSpec& spec, std::ostream& csv);
ExperimentResult run_decode_throughput(const GridSpec& spec, std::ostream& csv);

/// Common knobs for the cooperative-session experiments.
struct SessionGridSpec {
    std::uint64_t file_size = 1 << 20;
    double rate = 500'000.0;   // bytes/s on every link
    double latency_ms = 5.0;
    std::uint16_t n = 64;
    std::uint16_t symbol_size = 1024;
    double c = 0.1;
    double delta = 0.5;
    std::uint32_t max_aus = 5;
    std::vector<double> loss_grid = {0.0, 0.05, 0.1, 0.15, 0.2};
    std::uint64_t seed = 1;
    std::size_t block_window = 4;
};

coop::SessionConfig make_session(const SessionGridSpec& spec, std::uint32_t aus, double loss,
                                 coop::Mode mode);

ExperimentResult run_goodput_vs_aus(const SessionGridSpec& spec, std::ostream& csv);
ExperimentResult run_churn(const SessionGridSpec& spec, std::ostream& csv);
ExperimentResult run_loss_sweep(const SessionGridSpec& spec, std::ostream& csv);
ExperimentResult run_arq_compare(const SessionGridSpec& spec, std::ostream& csv);
ExperimentResult run_roundtrip(const SessionGridSpec& spec, std::ostream& csv);

struct IncentiveSpec {
    std::uint32_t users = 20;
    double gamma = 10.0;
    std::vector<double> eps_max_grid = {1, 2, 3, 4, 5};
    std::vector<std::uint32_t> au_grid = {5, 10, 15, 20};
    std::uint32_t trials = 100;
    std::uint64_t seed = 1;
    double mu0 = 0.0;
};

ExperimentResult run_incentive_tables(const IncentiveSpec& spec, std::ostream& csv);

/// Monte-Carlo means behind the incentive tables; also used by the
/// acceptance suite.
struct IncentiveCell {
    double mean_mu = 0.0;
    double mean_payment = 0.0;
};

/// Both table sweeps with common random numbers: every cell of an instance
/// reuses the same unit-cost draws (scaled for the diversity sweep, prefixed
/// for the population sweep), so cross-cell trends are not noise artifacts.
struct IncentiveSweeps {
    std::vector<IncentiveCell> by_eps_max; // eps_max_grid at `users` bidders
    std::vector<IncentiveCell> by_users;   // au_grid at the largest eps_max
};

IncentiveSweeps incentive_sweeps(const IncentiveSpec& spec);

/// Session config from the documented JSON schema (see README).
coop::SessionConfig session_config_from_json(const std::string& text);

/// Defaults under which the lossless LT-vs-ARQ comparison is meaningful:
/// big blocks, low latency, an 8 MB payload.
SessionGridSpec default_arq_compare_spec();

/// Defaults for the goodput linearity experiment: short links and a wide
/// block window so in-flight overshoot stays out of the fit.
SessionGridSpec default_goodput_spec();

/// One experiment described entirely by a JSON config:
/// {"name": "loss-sweep", "out": "sweep.csv", ...spec fields...}.
/// Writes the CSV next to returning the result.
struct ConfigRun {
    std::string name;
    std::string csv_path;
    ExperimentResult result;
};

ConfigRun run_experiment_config(const std::string& json_text);

/// One CSV row describing a finished session, carrying the parameters that
/// produced it.
void write_session_csv_header(std::ostream& csv);
void write_session_csv_row(std::ostream& csv, const std::string& label,
                           const coop::SessionConfig& cfg,
                           const coop::SessionReport& report);

} // namespace ltcast::exp

#endif
