#include "gibbsbd/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "gibbsbd/chain_io.hpp"
#include "gibbsbd/svg_plot.hpp"

namespace gibbsbd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kTagScaling = 0x7363616cULL;  // loss scaling stream
constexpr std::uint64_t kTagChain = 0x636861696eULL;  // chain stream

json sampler_to_json(const SamplerConfig& s) {
    return json{{"n_samples", s.n_samples},
                {"burn_in", s.burn_in},
                {"beta_proposal_sd", s.beta_proposal_sd},
                {"move_probabilities", {s.moves.birth, s.moves.death, s.moves.relocate}}};
}

void sampler_from_json(const json& j, SamplerConfig& s) {
    s.n_samples = j.value("n_samples", s.n_samples);
    s.burn_in = j.value("burn_in", s.burn_in);
    s.beta_proposal_sd = j.value("beta_proposal_sd", s.beta_proposal_sd);
    if (j.contains("move_probabilities")) {
        const auto m = j.at("move_probabilities").get<std::vector<double>>();
        if (m.size() != 3) throw ConfigError("config: move_probabilities needs 3 entries");
        s.moves = {m[0], m[1], m[2]};
    }
}

json acceptance_to_json(const AcceptanceStats& st) {
    return json{
        {"beta_rate", AcceptanceStats::rate(st.beta_accepts, st.beta_attempts)},
        {"birth_rate", AcceptanceStats::rate(st.birth_accepts, st.birth_attempts)},
        {"death_rate", AcceptanceStats::rate(st.death_accepts, st.death_attempts)},
        {"relocate_rate", AcceptanceStats::rate(st.relocate_accepts, st.relocate_attempts)}};
}

json scaling_to_json(const ScalingReport& rep) {
    json grid = json::array();
    for (const GridPointRecord& g : rep.grid) {
        grid.push_back(json{{"z", g.z},
                            {"c", g.c},
                            {"k", g.k},
                            {"f_in", g.f_in},
                            {"f_out", g.f_out},
                            {"gap", g.gap},
                            {"feasible", g.feasible},
                            {"note", g.note}});
    }
    json j{{"c", rep.c},
           {"k", rep.k},
           {"z", rep.z},
           {"chosen_index", rep.chosen_index},
           {"grid", std::move(grid)}};
    if (rep.point_estimate) {
        j["point_estimate"] = json::parse(curve_to_json(*rep.point_estimate));
    }
    return j;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (scenario.empty() == dataset_path.empty()) {
        throw ConfigError("config: exactly one of scenario or dataset path must be set");
    }
    if (!scenario.empty()) {
        try {
            preset_scenario(scenario);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    } else if (!fs::exists(dataset_path)) {
        throw ConfigError("config: dataset path does not exist: " + dataset_path);
    }
    if (replications < 1) throw ConfigError("config: replications must be >= 1");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (scaling_grid < 2) throw ConfigError("config: scaling grid must be >= 2");
    try {
        sampler.validate();
        prior.validate();
        if (loss_mode == LossMode::fixed) fixed_loss.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["scenario"] = config.scenario;
    j["dataset"] = config.dataset_path;
    j["sampler"] = sampler_to_json(config.sampler);
    j["prior"] = json{{"mu_d", config.prior.mu_d},
                      {"mu_beta", config.prior.mu_beta},
                      {"d_min", config.prior.d_min},
                      {"d_max", config.prior.d_max}};
    if (config.loss_mode == LossMode::fixed) {
        j["loss"] = json{{"mode", "fixed"},
                         {"c", config.fixed_loss.c},
                         {"k", config.fixed_loss.k},
                         {"z", config.fixed_loss.z}};
    } else {
        j["loss"] = json{{"mode", "auto"}};
    }
    j["replications"] = config.replications;
    j["seed"] = config.seed;
    j["workers"] = config.workers;
    j["out"] = config.out_dir;
    j["scaling_grid"] = config.scaling_grid;
    j["anneal"] = json{{"budget", config.anneal.budget},
                       {"restarts", config.anneal.restarts},
                       {"cooling", config.anneal.cooling},
                       {"initial_temperature", config.anneal.initial_temperature},
                       {"step_sd", config.anneal.step_sd},
                       {"start_radius", config.anneal.start_radius},
                       {"knot_count", config.anneal.knot_count}};
    j["write_plots"] = config.write_plots;
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig config;
    config.scenario = j.value("scenario", std::string());
    config.dataset_path = j.value("dataset", std::string());
    if (j.contains("sampler")) sampler_from_json(j.at("sampler"), config.sampler);
    if (j.contains("prior")) {
        const json& p = j.at("prior");
        config.prior.mu_d = p.value("mu_d", config.prior.mu_d);
        config.prior.mu_beta = p.value("mu_beta", config.prior.mu_beta);
        config.prior.d_min = p.value("d_min", config.prior.d_min);
        config.prior.d_max = p.value("d_max", config.prior.d_max);
    }
    if (j.contains("loss")) {
        const json& l = j.at("loss");
        const std::string mode = l.value("mode", "auto");
        if (mode == "fixed") {
            config.loss_mode = LossMode::fixed;
            config.fixed_loss = {l.at("c").get<double>(), l.at("k").get<double>(),
                                 l.at("z").get<double>()};
        } else if (mode == "auto") {
            config.loss_mode = LossMode::automatic;
        } else {
            throw ConfigError("config: loss mode must be 'auto' or 'fixed'");
        }
    }
    config.replications = j.value("replications", config.replications);
    config.seed = j.value("seed", config.seed);
    config.workers = j.value("workers", config.workers);
    config.out_dir = j.value("out", config.out_dir);
    config.scaling_grid = j.value("scaling_grid", config.scaling_grid);
    if (j.contains("anneal")) {
        const json& a = j.at("anneal");
        config.anneal.budget = a.value("budget", config.anneal.budget);
        config.anneal.restarts = a.value("restarts", config.anneal.restarts);
        config.anneal.cooling = a.value("cooling", config.anneal.cooling);
        config.anneal.initial_temperature =
            a.value("initial_temperature", config.anneal.initial_temperature);
        config.anneal.step_sd = a.value("step_sd", config.anneal.step_sd);
        config.anneal.start_radius = a.value("start_radius", config.anneal.start_radius);
        config.anneal.knot_count = a.value("knot_count", config.anneal.knot_count);
    }
    config.write_plots = j.value("write_plots", config.write_plots);
    return config;
}

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string canonical = config_to_json(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Dataset import_dataset(const std::string& csv_path) {
    Dataset data = read_dataset_csv(csv_path);
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        if (!in_omega(data.records[i].x)) {
            throw std::runtime_error("import_dataset: pixel outside the frame at row " +
                                     std::to_string(i + 2));  // 1-based, after header
        }
    }
    if (data.records.empty()) {
        throw std::runtime_error("import_dataset: no records in " + csv_path);
    }
    return data;
}

namespace {

struct ReplicationFiles {
    fs::path dir;
};

ReplicationResult run_replication(const ExperimentConfig& config, int index,
                                  const fs::path& rep_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    ReplicationResult result;
    result.index = index;
    const std::uint64_t rep_seed = config.seed + static_cast<std::uint64_t>(index);
    const Frame frame;

    // Data.
    Dataset data;
    std::optional<ScenarioSpec> scenario;
    if (!config.scenario.empty()) {
        scenario = preset_scenario(config.scenario);
        data = generate_dataset(*scenario, rep_seed, frame);
        write_dataset_csv(data, (rep_dir / "dataset.csv").string());
    } else {
        data = import_dataset(config.dataset_path);
    }

    // Loss scale.
    LossSpec spec = config.fixed_loss;
    if (config.loss_mode == LossMode::automatic) {
        if (scenario && scenario->is_binary()) {
            // Binary presets carry known Bernoulli rates; take the largest
            // scale meeting the concentration condition, at threshold 0.
            const double p_in = std::get<BernoulliLaw>(scenario->inside).p_plus;
            const double p_out = std::get<BernoulliLaw>(scenario->outside).p_plus;
            const auto [c, k] = solve_ck(1.0 - p_in, 1.0 - p_out);
            spec = LossSpec{c, k, 0.0};
        } else if (data.is_binary()) {
            throw ConfigError(
                "config: binary external data needs a fixed (c,k,z); pass --fixed-ckz");
        } else {
            ScalingReport scaling =
                estimate_ckz(data, derive_seed(rep_seed, kTagScaling), config.scaling_grid,
                             config.anneal, frame);
            spec = LossSpec{scaling.c, scaling.k, scaling.z};
            std::ofstream sc(rep_dir / "scaling.json");
            sc << scaling_to_json(scaling).dump(2) << "\n";
            result.scaling = std::move(scaling);
        }
    }
    result.loss_used = spec;

    // Chain.
    SamplerConfig sampler = config.sampler;
    sampler.seed = derive_seed(rep_seed, kTagChain);
    const Chain chain = run_chain(data, spec, config.prior, sampler, frame);
    result.stats = chain.stats;
    write_chain(chain, (rep_dir / "chain.csv").string(), (rep_dir / "chain.json").string());

    // Summary.
    const CurveGrid grid = posterior_mean_curve(chain);
    const CredibleBand band = uniform_credible_band(grid);
    result.tau = band.tau;
    std::unique_ptr<RadialCurve> truth;
    if (scenario) {
        truth = truth_curve(*scenario, frame);
        result.error = boundary_error(mean_curve(grid), *truth);
        result.has_error_metric = true;
        std::size_t covered = 0;
        for (std::size_t j = 0; j < grid.theta.size(); ++j) {
            const double r = truth->radius(grid.theta[j]);
            covered += band.lower[j] - 1e-12 <= r && r <= band.upper[j] + 1e-12;
        }
        result.band_coverage = static_cast<double>(covered) / grid.theta.size();
    }

    json summary{{"tau", band.tau},
                 {"level", band.level},
                 {"theta", grid.theta},
                 {"mean", grid.mean},
                 {"sd", grid.sd},
                 {"lower", band.lower},
                 {"upper", band.upper},
                 {"acceptance", acceptance_to_json(chain.stats)},
                 {"loss", {{"c", spec.c}, {"k", spec.k}, {"z", spec.z}}}};
    if (result.has_error_metric) summary["error"] = result.error;
    std::ofstream sj(rep_dir / "summary.json");
    sj << summary.dump(2) << "\n";

    if (config.write_plots) {
        emit_plot(grid, band, truth.get(), data, frame, (rep_dir / "plot.svg").string());
    }

    result.ok = true;
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();

    const fs::path run_dir =
        fs::path(config.out_dir) / ("run-" + config_hash(config) + "-s" + std::to_string(config.seed));
    fs::create_directories(run_dir);
    {
        std::ofstream cfg(run_dir / "config.json");
        cfg << config_to_json(config) << "\n";
    }
    for (int r = 0; r < config.replications; ++r) {
        char name[32];
        std::snprintf(name, sizeof(name), "rep-%03d", r);
        fs::create_directories(run_dir / name);
    }

    ExperimentReport report;
    report.run_dir = run_dir.string();
    report.replications.resize(static_cast<std::size_t>(config.replications));

    std::atomic<int> next{0};
    const int n_workers = std::min(config.workers, config.replications);
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= config.replications) return;
            char name[32];
            std::snprintf(name, sizeof(name), "rep-%03d", r);
            ReplicationResult result;
            try {
                result = run_replication(config, r, run_dir / name);
            } catch (const std::exception& e) {
                result.index = r;
                result.ok = false;
                result.message = e.what();
            }
            report.replications[static_cast<std::size_t>(r)] = std::move(result);
        }
    };
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    // Aggregate.
    double sum = 0.0, sum_sq = 0.0;
    int n_err = 0;
    double sum_c = 0.0, sum_k = 0.0, sum_z = 0.0;
    int n_scaling = 0;
    for (const ReplicationResult& r : report.replications) {
        if (!r.ok) {
            ++report.n_failed;
            continue;
        }
        if (r.has_error_metric) {
            sum += r.error;
            sum_sq += r.error * r.error;
            ++n_err;
        }
        if (r.scaling) {
            sum_c += r.scaling->c;
            sum_k += r.scaling->k;
            sum_z += r.scaling->z;
            ++n_scaling;
        }
    }
    if (n_err > 0) {
        report.mean_error = sum / n_err;
        const double var = std::max(0.0, sum_sq / n_err - report.mean_error * report.mean_error);
        report.sd_error = std::sqrt(var);
    }
    if (n_scaling > 0) {
        report.mean_c = sum_c / n_scaling;
        report.mean_k = sum_k / n_scaling;
        report.mean_z = sum_z / n_scaling;
    }

    // report.json holds only deterministic fields; wall-clock times go to
    // timings.json so identical configs rewrite the report bit-identically.
    json reps = json::array();
    for (const ReplicationResult& r : report.replications) {
        json jr{{"index", r.index}, {"ok", r.ok}};
        if (!r.ok) {
            jr["message"] = r.message;
        } else {
            if (r.has_error_metric) {
                jr["error"] = r.error;
                jr["band_coverage"] = r.band_coverage;
            }
            jr["tau"] = r.tau;
            jr["loss"] = {{"c", r.loss_used.c}, {"k", r.loss_used.k}, {"z", r.loss_used.z}};
            jr["acceptance"] = acceptance_to_json(r.stats);
            if (r.scaling) {
                jr["scaling"] = {{"c", r.scaling->c}, {"k", r.scaling->k}, {"z", r.scaling->z}};
            }
        }
        reps.push_back(std::move(jr));
    }
    json jreport{{"replications", std::move(reps)},
                 {"n_failed", report.n_failed},
                 {"mean_error", report.mean_error},
                 {"sd_error", report.sd_error}};
    if (n_scaling > 0) {
        jreport["mean_scaling"] = {{"c", report.mean_c}, {"k", report.mean_k}, {"z", report.mean_z}};
    }
    {
        std::ofstream out(run_dir / "report.json");
        out << jreport.dump(2) << "\n";
    }
    {
        json timings = json::array();
        for (const ReplicationResult& r : report.replications) {
            timings.push_back(json{{"index", r.index}, {"seconds", r.seconds}});
        }
        std::ofstream out(run_dir / "timings.json");
        out << json{{"replications", std::move(timings)}}.dump(2) << "\n";
    }
    return report;
}

}  // namespace gibbsbd
