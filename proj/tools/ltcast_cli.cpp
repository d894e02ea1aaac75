// Command-line front end: one subcommand per experiment, CSV out, exit code
// nonzero when an assertion-bearing experiment fails.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ltcast/experiments.hpp"

namespace {

using ltcast::exp::ExperimentResult;

int finish(const std::string& name, const ExperimentResult& result,
           const std::string& out_path) {
    for (const std::string& note : result.notes)
        std::cout << note << '\n';
    std::cout << (result.ok ? "PASS " : "FAIL ") << name << " (csv: " << out_path << ")\n";
    return result.ok ? 0 : 1;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw CLI::ValidationError("--out", "cannot open " + path + " for writing");
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw CLI::ValidationError("--config", "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void add_grid_options(CLI::App* cmd, ltcast::exp::GridSpec& spec) {
    cmd->add_option("--block-sizes", spec.block_sizes, "block sizes n to sweep");
    cmd->add_option("--symbol-sizes", spec.symbol_sizes, "symbol sizes N to sweep");
    cmd->add_option("--trials", spec.trials, "blocks per grid cell");
    cmd->add_option("--seed", spec.seed, "experiment RNG seed");
    cmd->add_option("--c", spec.c, "robust soliton c");
    cmd->add_option("--delta", spec.delta, "robust soliton delta");
}

void add_session_options(CLI::App* cmd, ltcast::exp::SessionGridSpec& spec) {
    cmd->add_option("--file-size", spec.file_size, "payload size in bytes");
    cmd->add_option("--rate", spec.rate, "per-link rate in bytes/s");
    cmd->add_option("--latency", spec.latency_ms, "per-link latency in ms");
    cmd->add_option("--n", spec.n, "block size (source symbols per block)");
    cmd->add_option("--symbol-size", spec.symbol_size, "symbol size in bytes");
    cmd->add_option("--c", spec.c, "robust soliton c");
    cmd->add_option("--delta", spec.delta, "robust soliton delta");
    cmd->add_option("--max-aus", spec.max_aus, "largest AU count");
    cmd->add_option("--loss-grid", spec.loss_grid, "loss rates to sweep");
    cmd->add_option("--seed", spec.seed, "experiment RNG seed");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rateless cooperative transfer toolkit"};
    app.require_subcommand(1);

    int exit_code = 0;

    // --- codec experiments
    ltcast::exp::GridSpec overhead_spec;
    std::string overhead_out = "overhead-matrix.csv";
    auto* overhead = app.add_subcommand("overhead-matrix",
                                        "mean decoding overhead per (n, N) grid cell");
    add_grid_options(overhead, overhead_spec);
    overhead->add_option("--out", overhead_out, "CSV output path");
    overhead->callback([&] {
        auto csv = open_csv(overhead_out);
        exit_code |= finish("overhead-matrix",
                            ltcast::exp::run_overhead_matrix(overhead_spec, csv),
                            overhead_out);
    });

    ltcast::exp::GridSpec tput_spec;
    tput_spec.trials = 10;
    std::string tput_out = "decode-throughput.csv";
    auto* tput = app.add_subcommand("decode-throughput",
                                    "wall-clock peeling throughput per (n, N) cell");
    add_grid_options(tput, tput_spec);
    tput->add_option("--out", tput_out, "CSV output path");
    tput->callback([&] {
        auto csv = open_csv(tput_out);
        exit_code |= finish("decode-throughput",
                            ltcast::exp::run_decode_throughput(tput_spec, csv), tput_out);
    });

    // --- session experiments
    ltcast::exp::SessionGridSpec goodput_spec = ltcast::exp::default_goodput_spec();
    std::string goodput_out = "goodput-vs-aus.csv";
    auto* goodput = app.add_subcommand("goodput-vs-aus",
                                       "goodput as relays join, with linearity fit");
    add_session_options(goodput, goodput_spec);
    goodput->add_option("--out", goodput_out, "CSV output path");
    goodput->callback([&] {
        auto csv = open_csv(goodput_out);
        exit_code |= finish("goodput-vs-aus",
                            ltcast::exp::run_goodput_vs_aus(goodput_spec, csv), goodput_out);
    });

    ltcast::exp::SessionGridSpec churn_spec;
    std::string churn_out = "churn.csv";
    auto* churn = app.add_subcommand("churn", "AU leave/join schedules vs a quiet baseline");
    add_session_options(churn, churn_spec);
    churn->add_option("--out", churn_out, "CSV output path");
    churn->callback([&] {
        auto csv = open_csv(churn_out);
        exit_code |= finish("churn", ltcast::exp::run_churn(churn_spec, csv), churn_out);
    });

    ltcast::exp::SessionGridSpec loss_spec;
    std::string loss_out = "loss-sweep.csv";
    auto* loss = app.add_subcommand("loss-sweep",
                                    "LT goodput across loss rates, ARQ at the worst point");
    add_session_options(loss, loss_spec);
    loss->add_option("--out", loss_out, "CSV output path");
    loss->callback([&] {
        auto csv = open_csv(loss_out);
        exit_code |= finish("loss-sweep", ltcast::exp::run_loss_sweep(loss_spec, csv),
                            loss_out);
    });

    ltcast::exp::SessionGridSpec arq_spec = ltcast::exp::default_arq_compare_spec();
    std::string arq_out = "arq-compare.csv";
    auto* arq = app.add_subcommand("arq-compare", "LT vs ARQ baseline, lossless and lossy");
    add_session_options(arq, arq_spec);
    arq->add_option("--out", arq_out, "CSV output path");
    arq->callback([&] {
        auto csv = open_csv(arq_out);
        exit_code |= finish("arq-compare", ltcast::exp::run_arq_compare(arq_spec, csv),
                            arq_out);
    });

    ltcast::exp::SessionGridSpec rt_spec;
    std::string rt_out = "roundtrip.csv";
    auto* rt = app.add_subcommand("roundtrip",
                                  "end-to-end exactness through lossless and lossy sessions");
    add_session_options(rt, rt_spec);
    rt->add_option("--out", rt_out, "CSV output path");
    rt->callback([&] {
        auto csv = open_csv(rt_out);
        exit_code |= finish("roundtrip", ltcast::exp::run_roundtrip(rt_spec, csv), rt_out);
    });

    // --- incentive experiment
    ltcast::exp::IncentiveSpec inc_spec;
    std::string inc_out = "incentive-tables.csv";
    auto* inc = app.add_subcommand("incentive-tables",
                                   "Monte-Carlo server utility and payment tables");
    inc->add_option("--users", inc_spec.users, "registered users per instance");
    inc->add_option("--gamma", inc_spec.gamma, "leader utility scale");
    inc->add_option("--eps-max-grid", inc_spec.eps_max_grid, "cost diversity sweep");
    inc->add_option("--au-grid", inc_spec.au_grid, "population sweep");
    inc->add_option("--trials", inc_spec.trials, "instances per cell");
    inc->add_option("--seed", inc_spec.seed, "experiment RNG seed");
    inc->add_option("--mu0", inc_spec.mu0, "requester reservation utility");
    inc->add_option("--out", inc_out, "CSV output path");
    inc->callback([&] {
        auto csv = open_csv(inc_out);
        exit_code |= finish("incentive-tables",
                            ltcast::exp::run_incentive_tables(inc_spec, csv), inc_out);
    });

    // --- any experiment from a JSON spec
    std::string run_config;
    auto* run = app.add_subcommand("run", "run an experiment described by a JSON spec");
    run->add_option("--config", run_config, "JSON with name, out, and spec fields")
        ->required();
    run->callback([&] {
        ltcast::exp::ConfigRun outcome = ltcast::exp::run_experiment_config(slurp(run_config));
        exit_code |= finish(outcome.name, outcome.result, outcome.csv_path);
    });

    // --- single session from a JSON config
    std::string session_config;
    std::string session_out = "session.csv";
    auto* session = app.add_subcommand("session", "run one cooperative session from JSON");
    session->add_option("--config", session_config, "JSON session config (see README)")
        ->required();
    session->add_option("--out", session_out, "CSV output path");
    session->callback([&] {
        auto cfg = ltcast::exp::session_config_from_json(slurp(session_config));
        ltcast::coop::SessionReport report = cfg.mode == ltcast::coop::Mode::Arq
                                                 ? ltcast::coop::run_arq_baseline(cfg)
                                                 : ltcast::coop::run_session(cfg);
        auto csv = open_csv(session_out);
        ltcast::exp::write_session_csv_header(csv);
        ltcast::exp::write_session_csv_row(csv, "session", cfg, report);
        std::cout << "completion " << report.completion_time << " s, goodput "
                  << report.goodput / 1e3 << " KB/s, overhead " << report.total_overhead
                  << ", exact " << (report.exact ? "yes" : "no") << '\n';
        if (!report.exact)
            exit_code |= 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
