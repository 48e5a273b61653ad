// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paim/harness.hpp"

namespace {

std::vector<double> parse_snr_range(const std::string& spec) {
    // lo:hi:step, inclusive endpoints (within half a step).
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0.0 || hi < lo)
        throw CLI::ValidationError("--snr", "expected lo:hi:step with step > 0");
    std::vector<double> axis;
    for (double v = lo; v <= hi + step * 0.5; v += step) axis.push_back(v);
    return axis;
}

struct CommonArgs {
    std::string config_path;
    std::string snr_spec = "0:30:5";
    long trials = 10000;
    long min_errors = 0;
    std::string detector = "bosd";
    std::string precoding = "none";
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_path;
    std::string format = "csv";
    int workers = 1;
    long redraw = 100;
    long ss_redraw = 1;
    long batch = 1024;
    bool rho_axis = false;
    bool timings = false;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "JSON scenario file");
    sub->add_option("--snr", args.snr_spec, "sweep axis as lo:hi:step (dBm)");
    sub->add_option("--trials", args.trials, "Monte Carlo trials per point");
    sub->add_option("--min-errors", args.min_errors,
                    "stop a point once this many bit errors accumulated");
    sub->add_option("--detector", args.detector, "ml or bosd")
        ->check(CLI::IsMember({"ml", "bosd"}));
    sub->add_option("--precoding", args.precoding, "none or manifold")
        ->check(CLI::IsMember({"none", "manifold"}));
    sub->add_option("--seed", args.seed, "base RNG seed (defaults to the config's rng_seed)")
        ->trigger_on_parse()
        ->each([&args](const std::string&) { args.seed_given = true; });
    sub->add_option("--out", args.out_path, "output path (stdout if omitted)");
    sub->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", args.workers, "parallel workers");
    sub->add_option("--redraw", args.redraw,
                    "trials per large-scale redraw (0 freezes one draw)");
    sub->add_option("--ss-redraw", args.ss_redraw,
                    "trials per small-scale fading redraw (coherence block)");
    sub->add_option("--batch", args.batch, "early-stop check granularity");
    sub->add_flag("--rho-axis", args.rho_axis,
                  "interpret the axis as rho/N0 in dB instead of P_t dBm");
    sub->add_flag("--timings", args.timings,
                  "emit measured wall time (off keeps output reproducible)");
}

paim::ExperimentPlan make_plan(const CommonArgs& args) {
    paim::ExperimentPlan plan;
    if (!args.config_path.empty()) plan.cfg = paim::load_config(args.config_path);
    plan.snr_axis = parse_snr_range(args.snr_spec);
    plan.axis_is_rho_db = args.rho_axis;
    plan.trials_per_point = args.trials;
    plan.min_errors = args.min_errors;
    plan.detector = args.detector == "ml" ? paim::DetectorKind::Ml
                                          : paim::DetectorKind::BoSd;
    plan.precoding = args.precoding == "manifold" ? paim::PrecodingKind::Manifold
                                                  : paim::PrecodingKind::None;
    plan.seed = args.seed_given ? args.seed : plan.cfg.rng_seed;
    plan.workers = args.workers;
    plan.large_scale_redraw = args.redraw;
    plan.small_scale_redraw = args.ss_redraw;
    plan.batch = args.batch;
    plan.emit_timings = args.timings;
    return plan;
}

paim::OutputFormat out_format(const CommonArgs& args) {
    return args.format == "json" ? paim::OutputFormat::Json
                                 : paim::OutputFormat::Csv;
}

template <typename WriteFn>
void emit(const CommonArgs& args, WriteFn&& write) {
    if (args.out_path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(args.out_path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + args.out_path);
    write(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-level simulator for pinching-antenna index modulation"};
    app.require_subcommand(1);

    CommonArgs ber_args, cpx_args, ab_args, na_args, bound_args;
    std::vector<int> m_list{4, 16, 64};
    std::vector<int> na_list{1, 2, 4};
    std::string variant = "closed_form";
    bool with_bound = false;

    auto* ber = app.add_subcommand("ber", "Monte Carlo BER sweep");
    add_common(ber, ber_args);
    ber->add_flag("--with-bound", with_bound,
                  "attach the closed-form union bound per point");

    auto* cpx = app.add_subcommand("complexity",
                                   "detector search-effort comparison vs M");
    add_common(cpx, cpx_args);
    cpx->add_option("--m-list", m_list, "modulation orders to sweep");

    auto* ab = app.add_subcommand("precoder-ab",
                                  "common-random-number precoding A/B");
    add_common(ab, ab_args);

    auto* na = app.add_subcommand("na-sweep", "BER vs activated PA count");
    add_common(na, na_args);
    na->add_option("--na-list", na_list, "N_a values to sweep");

    auto* bnd = app.add_subcommand("bound", "analytical BER upper bound");
    add_common(bnd, bound_args);
    bnd->add_option("--variant", variant, "closed_form or quadrature")
        ->check(CLI::IsMember({"closed_form", "quadrature"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (ber->parsed()) {
            auto plan = make_plan(ber_args);
            plan.with_bound = with_bound;
            const auto rows = paim::run_ber_sweep(plan);
            emit(ber_args, [&](std::ostream& os) {
                write_ber_rows(os, rows, out_format(ber_args), plan.emit_timings);
            });
        } else if (cpx->parsed()) {
            auto plan = make_plan(cpx_args);
            const auto rows = paim::run_complexity_sweep(plan, m_list);
            emit(cpx_args, [&](std::ostream& os) {
                write_complexity_rows(os, rows, out_format(cpx_args));
            });
        } else if (ab->parsed()) {
            auto plan = make_plan(ab_args);
            const auto result = paim::run_precoder_ab(plan);
            emit(ab_args, [&](std::ostream& os) {
                write_ab_result(os, result, out_format(ab_args), plan.emit_timings);
            });
            if (result.stalled_trials > 0)
                std::cerr << "note: precoder line search stalled in "
                          << result.stalled_trials << " trials\n";
        } else if (na->parsed()) {
            auto plan = make_plan(na_args);
            const auto rows = paim::run_na_sweep(plan, na_list);
            emit(na_args, [&](std::ostream& os) {
                write_na_rows(os, rows, out_format(na_args), plan.emit_timings);
            });
        } else if (bnd->parsed()) {
            auto plan = make_plan(bound_args);
            const auto v = variant == "quadrature" ? paim::PepVariant::Quadrature
                                                   : paim::PepVariant::ClosedForm;
            const auto rows = paim::run_bound(plan, v);
            emit(bound_args, [&](std::ostream& os) {
                write_bound_rows(os, rows, out_format(bound_args));
            });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
