#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gibbsbd/chain_io.hpp"
#include "gibbsbd/datagen.hpp"
#include "gibbsbd/experiment.hpp"
#include "gibbsbd/scaling.hpp"
#include "gibbsbd/summary.hpp"
#include "gibbsbd/svg_plot.hpp"

namespace {

using namespace gibbsbd;
using nlohmann::json;

LossSpec parse_ckz(const std::string& text) {
    double c, k, z;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &c, &k, &z) != 3) {
        throw ConfigError("--fixed-ckz expects three comma-separated values c,k,z");
    }
    LossSpec spec{c, k, z};
    spec.validate();
    return spec;
}

int cmd_generate(const std::string& scenario, std::uint64_t seed, const std::string& out) {
    const ScenarioSpec spec = preset_scenario(scenario);
    const Dataset data = generate_dataset(spec, seed);
    write_dataset_csv(data, out);
    std::printf("wrote %zu pixels (%s, m=%d, seed=%llu) to %s\n", data.size(), scenario.c_str(),
                data.grid_size, static_cast<unsigned long long>(seed), out.c_str());
    return 0;
}

int cmd_scale(const std::string& data_path, std::uint64_t seed, const std::string& out) {
    const Dataset data = import_dataset(data_path);
    if (data.is_binary()) {
        throw ConfigError("scale: binary data has no threshold grid; use --fixed-ckz downstream");
    }
    const ScalingReport report = estimate_ckz(data, seed);
    std::printf("%8s %8s %8s %8s %8s %8s\n", "z", "c", "k", "F_in", "F_out", "gap");
    for (const GridPointRecord& g : report.grid) {
        if (g.feasible) {
            std::printf("%8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n", g.z, g.c, g.k, g.f_in, g.f_out,
                        g.gap);
        } else {
            std::printf("%8.4f %s\n", g.z, g.note.c_str());
        }
    }
    std::printf("chosen: c=%.4f k=%.4f z=%.4f\n", report.c, report.k, report.z);
    if (!out.empty()) {
        json j{{"c", report.c}, {"k", report.k}, {"z", report.z}};
        json grid = json::array();
        for (const GridPointRecord& g : report.grid) {
            grid.push_back(json{{"z", g.z},
                                {"c", g.c},
                                {"k", g.k},
                                {"f_in", g.f_in},
                                {"f_out", g.f_out},
                                {"gap", g.gap},
                                {"feasible", g.feasible},
                                {"note", g.note}});
        }
        j["grid"] = std::move(grid);
        if (report.point_estimate) {
            j["point_estimate"] = json::parse(curve_to_json(*report.point_estimate));
        }
        std::ofstream f(out);
        f << j.dump(2) << "\n";
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

int cmd_fit(const std::string& data_path, const LossSpec& spec, std::uint64_t seed,
            const std::string& out) {
    const Dataset data = import_dataset(data_path);
    const BoundaryCurve fit = fit_point_estimate(data, spec, AnnealConfig{}, seed);
    std::printf("empirical risk: %.6f\n", empirical_risk(data, fit, spec));
    if (!out.empty()) {
        std::ofstream f(out);
        f << curve_to_json(fit) << "\n";
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

int cmd_summarize(const std::string& chain_csv, const std::string& chain_json,
                  const std::string& scenario, const std::string& out) {
    const Chain chain = read_chain(chain_csv, chain_json);
    const CurveGrid grid = posterior_mean_curve(chain);
    const CredibleBand band = uniform_credible_band(grid);
    json summary{{"tau", band.tau},  {"level", band.level}, {"theta", grid.theta},
                 {"mean", grid.mean}, {"sd", grid.sd},       {"lower", band.lower},
                 {"upper", band.upper}};
    summary["acceptance"] = {
        {"beta_rate", AcceptanceStats::rate(chain.stats.beta_accepts, chain.stats.beta_attempts)},
        {"birth_rate",
         AcceptanceStats::rate(chain.stats.birth_accepts, chain.stats.birth_attempts)},
        {"death_rate",
         AcceptanceStats::rate(chain.stats.death_accepts, chain.stats.death_attempts)},
        {"relocate_rate",
         AcceptanceStats::rate(chain.stats.relocate_accepts, chain.stats.relocate_attempts)}};
    if (!scenario.empty()) {
        const ScenarioSpec spec = preset_scenario(scenario);
        const std::unique_ptr<RadialCurve> truth = truth_curve(spec, Frame{});
        summary["error"] = boundary_error(mean_curve(grid), *truth);
        std::printf("boundary error vs %s truth: %.5f\n", scenario.c_str(),
                    summary["error"].get<double>());
    }
    std::printf("tau: %.4f (level %.2f, %zu draws)\n", band.tau, band.level, chain.draws.size());
    if (!out.empty()) {
        std::ofstream f(out);
        f << summary.dump(2) << "\n";
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

int cmd_experiment(const ExperimentConfig& config) {
    const ExperimentReport report = run_experiment(config);
    for (const ReplicationResult& r : report.replications) {
        if (!r.ok) {
            std::printf("rep %d: FAILED (%s)\n", r.index, r.message.c_str());
        } else if (r.has_error_metric) {
            std::printf("rep %d: error=%.5f tau=%.3f c=%.3f k=%.3f z=%.3f (%.1fs)\n", r.index,
                        r.error, r.tau, r.loss_used.c, r.loss_used.k, r.loss_used.z, r.seconds);
        } else {
            std::printf("rep %d: tau=%.3f (%.1fs)\n", r.index, r.tau, r.seconds);
        }
    }
    std::printf("mean error: %.5f (sd %.5f), %d failed, artifacts in %s\n", report.mean_error,
                report.sd_error, report.n_failed, report.run_dir.c_str());
    return report.n_failed == 0 ? 0 : 2;
}

int cmd_plot(const std::string& summary_path, const std::string& data_path,
             const std::string& scenario, const std::string& out) {
    std::ifstream in(summary_path);
    if (!in) throw std::runtime_error("plot: cannot open " + summary_path);
    json summary;
    in >> summary;

    CurveGrid grid;
    grid.theta = summary.at("theta").get<std::vector<double>>();
    grid.mean = summary.at("mean").get<std::vector<double>>();
    grid.sd = summary.at("sd").get<std::vector<double>>();
    CredibleBand band;
    band.tau = summary.value("tau", 0.0);
    band.lower = summary.at("lower").get<std::vector<double>>();
    band.upper = summary.at("upper").get<std::vector<double>>();

    const Dataset data = import_dataset(data_path);
    std::unique_ptr<RadialCurve> truth;
    if (!scenario.empty()) {
        truth = truth_curve(preset_scenario(scenario), Frame{});
    }
    emit_plot(grid, band, truth.get(), data, Frame{}, out);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs-posterior image boundary detection"};
    app.require_subcommand(1);

    std::string config_path, scenario, data_path, out, chain_csv, chain_json, summary_path;
    std::string fixed_ckz;
    std::uint64_t seed = 1;
    int reps = -1;
    int workers = -1;

    auto* generate = app.add_subcommand("generate", "synthesize a scenario dataset");
    generate->add_option("--scenario", scenario, "scenario name (B1-B4, C1-C4)")->required();
    generate->add_option("--seed", seed, "rng seed");
    generate->add_option("--out", out, "output CSV path")->required();

    auto* scale = app.add_subcommand("scale", "estimate the loss scale (c,k,z) from data");
    scale->add_option("--data", data_path, "dataset CSV")->required();
    scale->add_option("--seed", seed, "rng seed");
    scale->add_option("--out", out, "scaling report JSON path");

    auto* fit = app.add_subcommand("fit", "rough boundary point estimate at a fixed (c,k,z)");
    fit->add_option("--data", data_path, "dataset CSV")->required();
    fit->add_option("--fixed-ckz", fixed_ckz, "loss parameters c,k,z")->required();
    fit->add_option("--seed", seed, "rng seed");
    fit->add_option("--out", out, "curve JSON path");

    auto* summarize = app.add_subcommand("summarize", "posterior mean, band, and error");
    summarize->add_option("--chain", chain_csv, "chain CSV path")->required();
    summarize->add_option("--chain-header", chain_json, "chain header JSON (default: chain path with .json)");
    summarize->add_option("--scenario", scenario, "scenario for the truth comparison");
    summarize->add_option("--out", out, "summary JSON path");

    auto* experiment = app.add_subcommand("experiment", "replicated end-to-end study");
    experiment->add_option("--config", config_path, "experiment config JSON");
    experiment->add_option("--scenario", scenario, "scenario name (B1-B4, C1-C4)");
    experiment->add_option("--data", data_path, "external dataset CSV");
    experiment->add_option("--seed", seed, "master seed");
    experiment->add_option("--reps", reps, "replication count");
    experiment->add_option("--out", out, "output directory");
    experiment->add_option("--workers", workers, "concurrent replications");
    experiment->add_option("--fixed-ckz", fixed_ckz, "fixed loss parameters c,k,z");

    auto* plot = app.add_subcommand("plot", "render a summary as SVG");
    plot->add_option("--summary", summary_path, "summary JSON")->required();
    plot->add_option("--data", data_path, "dataset CSV")->required();
    plot->add_option("--scenario", scenario, "scenario for the truth layer");
    plot->add_option("--out", out, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(scenario, seed, out);
        if (scale->parsed()) return cmd_scale(data_path, seed, out);
        if (fit->parsed()) return cmd_fit(data_path, parse_ckz(fixed_ckz), seed, out);
        if (summarize->parsed()) {
            if (chain_json.empty()) {
                chain_json = chain_csv.substr(0, chain_csv.find_last_of('.')) + ".json";
            }
            return cmd_summarize(chain_csv, chain_json, scenario, out);
        }
        if (experiment->parsed()) {
            ExperimentConfig config;
            if (!config_path.empty()) config = config_from_file(config_path);
            if (!scenario.empty()) config.scenario = scenario;
            if (!data_path.empty()) config.dataset_path = data_path;
            if (experiment->count("--seed")) config.seed = seed;
            if (reps > 0) config.replications = reps;
            if (workers > 0) config.workers = workers;
            if (!out.empty()) config.out_dir = out;
            if (!fixed_ckz.empty()) {
                config.loss_mode = LossMode::fixed;
                config.fixed_loss = parse_ckz(fixed_ckz);
            }
            return cmd_experiment(config);
        }
        if (plot->parsed()) return cmd_plot(summary_path, data_path, scenario, out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
