#include "ltcast/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ltcast::exp {

void ExperimentResult::check(bool pass, const std::string& what) {
    ok = ok && pass;
    notes.push_back(std::string(pass ? "[ok]   " : "[FAIL] ") + what);
}

void ExperimentResult::info(const std::string& what) {
    notes.push_back("[info] " + what);
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2)
        return 0.0;
    double m = mean(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LinFit fit;
    const std::size_t n = x.size();
    double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

namespace {

Bytes random_bytes(std::size_t len, std::uint64_t seed) {
    Bytes data(len);
    SeedStream stream(seed);
    std::size_t i = 0;
    while (i + 8 <= len) {
        std::uint64_t v = stream.next_u64();
        for (int s = 0; s < 8; ++s)
            data[i++] = static_cast<std::uint8_t>(v >> (8 * s));
    }
    for (std::uint64_t v = stream.next_u64(); i < len; v >>= 8)
        data[i++] = static_cast<std::uint8_t>(v);
    return data;
}

SourceBlock random_block(std::uint32_t n, std::uint16_t symbol_size, std::uint64_t seed) {
    SourceBlock block;
    block.block_id = 0;
    block.symbol_size = symbol_size;
    block.symbols.reserve(n);
    SeedStream stream(seed);
    for (std::uint32_t s = 0; s < n; ++s)
        block.symbols.push_back(random_bytes(symbol_size, stream.next_u64()));
    return block;
}

} // namespace

std::vector<double> measure_block_overheads(std::uint32_t n, std::uint16_t symbol_size,
                                            std::uint32_t trials, std::uint64_t seed,
                                            double c, double delta) {
    DegreeDistribution dist = robust_soliton({n, c, delta});
    std::vector<double> overheads;
    overheads.reserve(trials);
    SeedStream trial_seeds(seed);
    for (std::uint32_t t = 0; t < trials; ++t) {
        SourceBlock block = random_block(n, symbol_size, trial_seeds.next_u64());
        Decoder dec(0, n, symbol_size, dist);
        std::uint64_t sym_seed = trial_seeds.next_u64();
        while (!dec.complete())
            dec.push(encode_symbol(block, sym_seed++, dist));
        overheads.push_back(dec.overhead());
    }
    return overheads;
}

double measure_decode_throughput(std::uint32_t n, std::uint16_t symbol_size,
                                 std::uint32_t trials, std::uint64_t seed) {
    DegreeDistribution dist = robust_soliton({n, 0.1, 0.5});
    SeedStream trial_seeds(seed);
    std::uint64_t decoded_bytes = 0;
    double elapsed = 0.0;
    for (std::uint32_t t = 0; t < trials; ++t) {
        SourceBlock block = random_block(n, symbol_size, trial_seeds.next_u64());
        // pre-encode so only the decoder is on the clock
        std::vector<EncodedSymbol> symbols;
        symbols.reserve(n * 2);
        std::uint64_t sym_seed = trial_seeds.next_u64();
        for (std::uint32_t i = 0; i < n * 3; ++i)
            symbols.push_back(encode_symbol(block, sym_seed++, dist));

        Decoder dec(0, n, symbol_size, dist);
        auto begin = std::chrono::steady_clock::now();
        for (const EncodedSymbol& s : symbols) {
            if (dec.push(s).complete)
                break;
        }
        auto end = std::chrono::steady_clock::now();
        if (!dec.complete())
            continue; // pathological draw; skip the trial
        elapsed += std::chrono::duration<double>(end - begin).count();
        decoded_bytes += static_cast<std::uint64_t>(n) * symbol_size;
    }
    return elapsed > 0.0 ? static_cast<double>(decoded_bytes) / elapsed : 0.0;
}

ExperimentResult run_overhead_matrix(const GridSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    csv << "n,symbol_size,trials,mean_overhead,stddev_overhead\n";
    std::vector<double> wide_column; // overheads along the widest symbol size
    for (std::uint32_t n : spec.block_sizes) {
        for (std::uint16_t N : spec.symbol_sizes) {
            std::vector<double> ov = measure_block_overheads(
                n, N, spec.trials, spec.seed ^ (static_cast<std::uint64_t>(n) << 16 | N),
                spec.c, spec.delta);
            double m = mean(ov);
            csv << n << ',' << N << ',' << spec.trials << ',' << m << ',' << stddev(ov)
                << '\n';
            result.check(*std::min_element(ov.begin(), ov.end()) >= 0.0,
                         "overhead >= 0 at n=" + std::to_string(n) +
                             " N=" + std::to_string(N));
            if (N == spec.symbol_sizes.back())
                wide_column.push_back(m);
        }
    }
    if (wide_column.size() >= 2)
        result.check(wide_column.front() > wide_column.back(),
                     "overhead shrinks from smallest to largest block size");
    return result;
}

ExperimentResult run_decode_throughput(const GridSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    csv << "n,symbol_size,trials,decode_bytes_per_s\n";
    double small_block_wide = 0.0, large_block_narrow = 0.0;
    for (std::uint32_t n : spec.block_sizes) {
        for (std::uint16_t N : spec.symbol_sizes) {
            double tput = measure_decode_throughput(
                n, N, spec.trials, spec.seed ^ (static_cast<std::uint64_t>(n) << 16 | N));
            csv << n << ',' << N << ',' << spec.trials << ',' << tput << '\n';
            result.check(tput > 0.0, "throughput > 0 at n=" + std::to_string(n) +
                                         " N=" + std::to_string(N));
            if (n == spec.block_sizes.front() && N == spec.symbol_sizes.back())
                small_block_wide = tput;
            if (n == spec.block_sizes.back() && N == spec.symbol_sizes.front())
                large_block_narrow = tput;
        }
    }
    result.check(small_block_wide > large_block_narrow,
                 "small blocks with wide symbols decode faster than the opposite corner");
    std::ostringstream os;
    os << "peak cell " << small_block_wide / 1e6 << " MB/s (machine-dependent, reported only)";
    result.info(os.str());
    return result;
}

coop::SessionConfig make_session(const SessionGridSpec& spec, std::uint32_t aus, double loss,
                                 coop::Mode mode) {
    coop::SessionConfig cfg;
    cfg.synthetic_size = spec.file_size;
    cfg.data_seed = spec.seed * 7919 + 17;
    cfg.coding = {spec.n, spec.symbol_size, spec.c, spec.delta};
    cfg.mode = mode;
    cfg.session_seed = spec.seed;
    cfg.block_window = spec.block_window;

    std::uint64_t link_seed = spec.seed * 104729 + 3;
    auto link = [&](double rate_scale) {
        LinkParams p;
        p.loss_rate = loss;
        p.rate_limit = spec.rate * rate_scale;
        p.latency_ms = spec.latency_ms;
        p.seed = link_seed++;
        return p;
    };
    cfg.direct = link(1.0);
    for (std::uint32_t a = 0; a < aus; ++a)
        cfg.aus.push_back({link(1.0), link(1.0)});
    return cfg;
}

void write_session_csv_header(std::ostream& csv) {
    csv << "label,mode,aus,loss,n,symbol_size,rate_Bps,session_seed,file_bytes,"
           "completion_s,goodput_Bps,overhead,exact,terminate_signals\n";
}

void write_session_csv_row(std::ostream& csv, const std::string& label,
                           const coop::SessionConfig& cfg,
                           const coop::SessionReport& report) {
    csv << label << ',' << (cfg.mode == coop::Mode::Arq ? "arq" : "lt") << ','
        << cfg.aus.size() << ',' << cfg.direct.loss_rate << ',' << cfg.coding.n << ','
        << cfg.coding.symbol_size << ',' << cfg.direct.rate_limit << ',' << cfg.session_seed
        << ',' << report.file_bytes << ',' << report.completion_time << ','
        << report.goodput << ',' << report.total_overhead << ',' << (report.exact ? 1 : 0)
        << ',' << report.terminate_signals << '\n';
}

ExperimentResult run_goodput_vs_aus(const SessionGridSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    write_session_csv_header(csv);

    coop::SessionConfig solo = make_session(spec, 0, 0.0, coop::Mode::Lt);
    coop::SessionReport solo_report = coop::run_session(solo);
    write_session_csv_row(csv, "goodput-vs-aus", solo, solo_report);
    result.check(solo_report.exact, "0-AU session decodes exactly");

    std::vector<double> xs, ys;
    for (std::uint32_t aus = 1; aus <= spec.max_aus; ++aus) {
        // same seed for every cell: identical symbol streams across AU counts,
        // so the overhead draw cancels out of the comparison
        coop::SessionConfig cfg = make_session(spec, aus, 0.0, coop::Mode::Lt);
        coop::SessionReport report = coop::run_session(cfg);
        write_session_csv_row(csv, "goodput-vs-aus", cfg, report);
        result.check(report.exact,
                     "session with " + std::to_string(aus) + " AUs decodes exactly");
        xs.push_back(static_cast<double>(aus));
        ys.push_back(report.goodput);
    }

    LinFit fit = linear_fit(xs, ys);
    std::ostringstream os;
    os << "linear fit: goodput = " << fit.intercept << " + " << fit.slope
       << " * AUs, R^2 = " << fit.r2;
    result.info(os.str());
    result.check(fit.r2 >= 0.99, "goodput grows linearly with AU count (R^2 >= 0.99)");
    result.check(std::abs(fit.intercept - solo_report.goodput) <=
                     0.10 * solo_report.goodput,
                 "fit intercept within 10% of the single-path goodput");
    bool proportional = true;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        double expected = (xs[i] + 1.0) * solo_report.goodput; // AUs + the direct path
        proportional = proportional && std::abs(ys[i] - expected) <= 0.05 * expected;
    }
    result.check(proportional, "every point within 5% of paths x single-path goodput");
    return result;
}

ExperimentResult run_churn(const SessionGridSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    write_session_csv_header(csv);

    // baseline: three relays, no churn
    coop::SessionConfig base = make_session(spec, 3, 0.0, coop::Mode::Lt);
    coop::SessionReport base_report = coop::run_session(base);
    write_session_csv_row(csv, "churn-none", base, base_report);
    result.check(base_report.exact, "no-churn baseline decodes exactly");

    // one AU leaves mid-session
    coop::SessionConfig leave = base;
    leave.churn.push_back({0.3 * base_report.completion_time,
                           coop::ChurnEvent::Kind::Remove, 1, {}});
    coop::SessionReport leave_report = coop::run_session(leave);
    write_session_csv_row(csv, "churn-remove", leave, leave_report);
    result.check(leave_report.exact, "removal mid-session keeps the decode exact");
    result.check(leave_report.completion_time > base_report.completion_time,
                 "losing a relay strictly lengthens the session");

    // one leaves, another joins later (the paper's add/remove shape)
    coop::SessionConfig swap = leave;
    coop::PathParams fresh = base.aus[0];
    fresh.uplink.seed += 991;
    fresh.downlink.seed += 992;
    swap.churn.push_back(
        {0.6 * base_report.completion_time, coop::ChurnEvent::Kind::Add, 0, fresh});
    coop::SessionReport swap_report = coop::run_session(swap);
    write_session_csv_row(csv, "churn-remove-add", swap, swap_report);
    result.check(swap_report.exact, "remove+add schedule keeps the decode exact");
    result.check(swap_report.completion_time <= leave_report.completion_time,
                 "a replacement relay recovers some of the lost time");
    return result;
}

ExperimentResult run_loss_sweep(const SessionGridSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    write_session_csv_header(csv);

    double lossless_goodput = 0.0;
    double lt_at_max_loss = 0.0;
    for (double loss : spec.loss_grid) {
        SessionGridSpec cell = spec;
        cell.seed = spec.seed + static_cast<std::uint64_t>(loss * 1000.0);
        coop::SessionConfig cfg = make_session(cell, 3, loss, coop::Mode::Lt);
        coop::SessionReport report = coop::run_session(cfg);
        write_session_csv_row(csv, "loss-sweep-lt", cfg, report);
        result.check(report.exact, "LT session at loss " + std::to_string(loss) +
                                       " decodes exactly");
        if (loss == spec.loss_grid.front())
            lossless_goodput = report.goodput;
        lt_at_max_loss = report.goodput;
        result.check(report.goodput >= 0.8 * (1.0 - loss) * lossless_goodput,
                     "LT goodput degrades gracefully at loss " + std::to_string(loss));
    }

    double max_loss = spec.loss_grid.back();
    SessionGridSpec cell = spec;
    cell.seed = spec.seed + 4242;
    coop::SessionConfig arq = make_session(cell, 3, max_loss, coop::Mode::Arq);
    coop::SessionReport arq_report = coop::run_arq_baseline(arq);
    write_session_csv_row(csv, "loss-sweep-arq", arq, arq_report);
    result.check(lt_at_max_loss > arq_report.goodput,
                 "LT goodput beats the ARQ baseline at the highest loss rate");
    return result;
}

ExperimentResult run_arq_compare(const SessionGridSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    write_session_csv_header(csv);

    for (double loss : {0.0, spec.loss_grid.back()}) {
        SessionGridSpec cell = spec;
        cell.seed = spec.seed + static_cast<std::uint64_t>(loss * 100.0) + 1;

        coop::SessionConfig lt = make_session(cell, 3, loss, coop::Mode::Lt);
        coop::SessionReport lt_report = coop::run_session(lt);
        write_session_csv_row(csv, "arq-compare-lt", lt, lt_report);

        coop::SessionConfig arq = make_session(cell, 3, loss, coop::Mode::Arq);
        coop::SessionReport arq_report = coop::run_arq_baseline(arq);
        write_session_csv_row(csv, "arq-compare-arq", arq, arq_report);

        std::ostringstream os;
        os << "loss " << loss << ": LT " << lt_report.goodput / 1e3 << " KB/s vs ARQ "
           << arq_report.goodput / 1e3 << " KB/s";
        result.info(os.str());

        if (loss == 0.0) {
            double gap = std::abs(lt_report.goodput - arq_report.goodput) /
                         std::max(lt_report.goodput, arq_report.goodput);
            result.check(gap <= 0.15,
                         "lossless LT and ARQ goodput within 15% (code overhead vs acks)");
        } else {
            result.check(lt_report.goodput > arq_report.goodput,
                         "LT goodput beats ARQ under loss");
        }
    }
    return result;
}

ExperimentResult run_roundtrip(const SessionGridSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    write_session_csv_header(csv);
    for (double loss : {0.0, spec.loss_grid.back()}) {
        SessionGridSpec cell = spec;
        cell.seed = spec.seed + static_cast<std::uint64_t>(loss * 10.0) + 7;
        coop::SessionConfig cfg = make_session(cell, 2, loss, coop::Mode::Lt);
        coop::SessionReport report = coop::run_session(cfg);
        write_session_csv_row(csv, "roundtrip", cfg, report);
        result.check(report.exact, "file survives the session byte-for-byte at loss " +
                                       std::to_string(loss));
    }
    return result;
}

IncentiveSweeps incentive_sweeps(const IncentiveSpec& spec) {
    std::uint32_t max_users = spec.users;
    for (std::uint32_t u : spec.au_grid)
        max_users = std::max(max_users, u);

    std::vector<std::vector<double>> eps_mu(spec.eps_max_grid.size());
    std::vector<std::vector<double>> eps_pay(spec.eps_max_grid.size());
    std::vector<std::vector<double>> au_mu(spec.au_grid.size());
    std::vector<std::vector<double>> au_pay(spec.au_grid.size());

    SeedStream stream(spec.seed);
    for (std::uint32_t t = 0; t < spec.trials; ++t) {
        std::vector<double> draws(max_users);
        for (double& u : draws)
            u = stream.next_unit();

        auto solve = [&](std::uint32_t users, double eps_max) {
            incentive::GameParams params;
            params.gamma = spec.gamma;
            params.reservation_utility = spec.mu0;
            for (std::uint32_t u = 0; u < users; ++u)
                params.bids.push_back(
                    {static_cast<int>(u), 1.0 + draws[u] * (eps_max - 1.0)});
            return incentive::optimal_reward(params);
        };

        for (std::size_t i = 0; i < spec.eps_max_grid.size(); ++i) {
            incentive::GameOutcome outcome = solve(spec.users, spec.eps_max_grid[i]);
            eps_mu[i].push_back(outcome.server_utility);
            eps_pay[i].push_back(outcome.ru_payment);
        }
        double widest = spec.eps_max_grid.back();
        for (std::size_t i = 0; i < spec.au_grid.size(); ++i) {
            incentive::GameOutcome outcome = solve(spec.au_grid[i], widest);
            au_mu[i].push_back(outcome.server_utility);
            au_pay[i].push_back(outcome.ru_payment);
        }
    }

    IncentiveSweeps sweeps;
    for (std::size_t i = 0; i < spec.eps_max_grid.size(); ++i)
        sweeps.by_eps_max.push_back({mean(eps_mu[i]), mean(eps_pay[i])});
    for (std::size_t i = 0; i < spec.au_grid.size(); ++i)
        sweeps.by_users.push_back({mean(au_mu[i]), mean(au_pay[i])});
    return sweeps;
}

ExperimentResult run_incentive_tables(const IncentiveSpec& spec, std::ostream& csv) {
    ExperimentResult result;
    csv << "table,users,eps_max,trials,mean_mu,mean_payment\n";

    IncentiveSweeps sweeps = incentive_sweeps(spec);

    // impact of cost diversity at fixed population
    std::vector<double> mu_by_eps;
    for (std::size_t i = 0; i < spec.eps_max_grid.size(); ++i) {
        const IncentiveCell& cell = sweeps.by_eps_max[i];
        csv << "eps-sweep," << spec.users << ',' << spec.eps_max_grid[i] << ','
            << spec.trials << ',' << cell.mean_mu << ',' << cell.mean_payment << '\n';
        mu_by_eps.push_back(cell.mean_mu);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < mu_by_eps.size(); ++i)
        decreasing = decreasing && mu_by_eps[i] < mu_by_eps[i - 1];
    result.check(decreasing, "mean server utility falls as unit costs diversify");
    if (mu_by_eps.size() >= 2)
        result.check(mu_by_eps.front() >= 1.25 * mu_by_eps.back(),
                     "utility drop across the cost sweep is at least 25%");

    // impact of population at the most diverse costs
    std::vector<double> mu_by_users;
    for (std::size_t i = 0; i < spec.au_grid.size(); ++i) {
        const IncentiveCell& cell = sweeps.by_users[i];
        csv << "au-sweep," << spec.au_grid[i] << ',' << spec.eps_max_grid.back() << ','
            << spec.trials << ',' << cell.mean_mu << ',' << cell.mean_payment << '\n';
        mu_by_users.push_back(cell.mean_mu);
    }
    bool increasing = true, diminishing = true;
    for (std::size_t i = 1; i < mu_by_users.size(); ++i) {
        increasing = increasing && mu_by_users[i] > mu_by_users[i - 1];
        if (i >= 2)
            diminishing = diminishing && (mu_by_users[i] - mu_by_users[i - 1]) <
                                             (mu_by_users[i - 1] - mu_by_users[i - 2]);
    }
    result.check(increasing, "mean server utility grows with the user pool");
    result.check(diminishing, "utility gains shrink as the pool grows (diminishing returns)");
    return result;
}

// --- JSON session config -----------------------------------------------------

namespace {

LinkParams link_from_json(const nlohmann::json& j) {
    LinkParams p;
    p.loss_rate = j.value("loss", 0.0);
    p.rate_limit = j.value("rate", 1'000'000.0);
    p.latency_ms = j.value("latency_ms", 0.0);
    p.seed = j.value("seed", std::uint64_t{1});
    return p;
}

} // namespace

SessionGridSpec default_arq_compare_spec() {
    SessionGridSpec spec;
    spec.n = 1024;
    spec.symbol_size = 1024;
    spec.c = 0.05;
    spec.latency_ms = 1.0;
    spec.file_size = 8 << 20;
    return spec;
}

SessionGridSpec default_goodput_spec() {
    SessionGridSpec spec;
    spec.file_size = 2 << 20;
    spec.latency_ms = 2.0;
    spec.block_window = 16;
    return spec;
}

namespace {

GridSpec grid_spec_from_json(const nlohmann::json& j) {
    GridSpec spec;
    spec.block_sizes = j.value("block_sizes", spec.block_sizes);
    spec.symbol_sizes = j.value("symbol_sizes", spec.symbol_sizes);
    spec.trials = j.value("trials", spec.trials);
    spec.seed = j.value("seed", spec.seed);
    spec.c = j.value("c", spec.c);
    spec.delta = j.value("delta", spec.delta);
    return spec;
}

SessionGridSpec session_spec_from_json(const nlohmann::json& j, SessionGridSpec spec) {
    spec.file_size = j.value("file_size", spec.file_size);
    spec.rate = j.value("rate", spec.rate);
    spec.latency_ms = j.value("latency_ms", spec.latency_ms);
    spec.n = j.value("n", spec.n);
    spec.symbol_size = j.value("symbol_size", spec.symbol_size);
    spec.c = j.value("c", spec.c);
    spec.delta = j.value("delta", spec.delta);
    spec.max_aus = j.value("max_aus", spec.max_aus);
    spec.loss_grid = j.value("loss_grid", spec.loss_grid);
    spec.seed = j.value("seed", spec.seed);
    spec.block_window = j.value("block_window", spec.block_window);
    return spec;
}

IncentiveSpec incentive_spec_from_json(const nlohmann::json& j) {
    IncentiveSpec spec;
    spec.users = j.value("users", spec.users);
    spec.gamma = j.value("gamma", spec.gamma);
    spec.eps_max_grid = j.value("eps_max_grid", spec.eps_max_grid);
    spec.au_grid = j.value("au_grid", spec.au_grid);
    spec.trials = j.value("trials", spec.trials);
    spec.seed = j.value("seed", spec.seed);
    spec.mu0 = j.value("mu0", spec.mu0);
    return spec;
}

} // namespace

ConfigRun run_experiment_config(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    ConfigRun run;
    run.name = j.value("name", std::string());
    run.csv_path = j.value("out", run.name + ".csv");

    std::ofstream csv(run.csv_path);
    if (!csv)
        throw std::runtime_error("cannot open " + run.csv_path + " for writing");

    if (run.name == "overhead-matrix") {
        run.result = run_overhead_matrix(grid_spec_from_json(j), csv);
    } else if (run.name == "decode-throughput") {
        GridSpec spec = grid_spec_from_json(j);
        if (!j.contains("trials"))
            spec.trials = 10;
        run.result = run_decode_throughput(spec, csv);
    } else if (run.name == "goodput-vs-aus") {
        run.result = run_goodput_vs_aus(session_spec_from_json(j, default_goodput_spec()), csv);
    } else if (run.name == "churn") {
        run.result = run_churn(session_spec_from_json(j, {}), csv);
    } else if (run.name == "loss-sweep") {
        run.result = run_loss_sweep(session_spec_from_json(j, {}), csv);
    } else if (run.name == "arq-compare") {
        run.result =
            run_arq_compare(session_spec_from_json(j, default_arq_compare_spec()), csv);
    } else if (run.name == "roundtrip") {
        run.result = run_roundtrip(session_spec_from_json(j, {}), csv);
    } else if (run.name == "incentive-tables") {
        run.result = run_incentive_tables(incentive_spec_from_json(j), csv);
    } else {
        throw std::runtime_error("unknown experiment name: '" + run.name + "'");
    }
    return run;
}

coop::SessionConfig session_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    coop::SessionConfig cfg;
    cfg.synthetic_size = j.value("file_size", std::uint64_t{1 << 20});
    cfg.data_seed = j.value("data_seed", std::uint64_t{1});
    cfg.file_id = j.value("file_id", std::string("file"));
    if (j.contains("coding")) {
        const auto& c = j["coding"];
        cfg.coding.n = c.value("n", 64);
        cfg.coding.symbol_size = c.value("symbol_size", 1024);
        cfg.coding.c = c.value("c", 0.1);
        cfg.coding.delta = c.value("delta", 0.5);
    }
    if (j.contains("direct"))
        cfg.direct = link_from_json(j["direct"]);
    if (j.contains("aus"))
        for (const auto& au : j["aus"])
            cfg.aus.push_back({link_from_json(au["uplink"]), link_from_json(au["downlink"])});
    if (j.contains("churn")) {
        for (const auto& ev : j["churn"]) {
            coop::ChurnEvent e;
            e.time = ev.value("time", 0.0);
            std::string kind = ev.value("kind", std::string("remove"));
            if (kind == "add") {
                e.kind = coop::ChurnEvent::Kind::Add;
                e.params = {link_from_json(ev["uplink"]), link_from_json(ev["downlink"])};
            } else {
                e.kind = coop::ChurnEvent::Kind::Remove;
                e.au_index = ev.value("au", 0);
            }
            cfg.churn.push_back(e);
        }
    }
    std::string mode = j.value("mode", std::string("lt"));
    cfg.mode = mode == "arq" ? coop::Mode::Arq : coop::Mode::Lt;
    cfg.block_window = j.value("block_window", std::size_t{4});
    cfg.monitor_window = j.value("monitor_window", 1.0);
    cfg.max_time = j.value("max_time", 3600.0);
    cfg.session_seed = j.value("session_seed", std::uint64_t{1});
    return cfg;
}

} // namespace ltcast::exp
