#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gibbsbd/chain_io.hpp"
#include "gibbsbd/experiment.hpp"
#include "gibbsbd/svg_plot.hpp"
#include "test_util.hpp"

using namespace gibbsbd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("gibbsbd_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig tiny_config(const fs::path& out) {
    ExperimentConfig config;
    config.scenario = "B1";
    config.replications = 2;
    config.seed = 5;
    config.sampler.n_samples = 120;
    config.sampler.burn_in = 40;
    config.out_dir = out.string();
    return config;
}

}  // namespace

TEST_CASE("config JSON round trip and defaults") {
    ExperimentConfig config;
    config.scenario = "C1";
    const ExperimentConfig back = config_from_json(config_to_json(config));
    CHECK(back.scenario == "C1");
    CHECK(back.sampler.n_samples == 4000);
    CHECK(back.sampler.burn_in == 1000);
    CHECK(back.sampler.beta_proposal_sd == 0.10);
    CHECK(back.prior.mu_d == 12.0);
    CHECK(back.prior.mu_beta == 10.0);
    CHECK(back.loss_mode == LossMode::automatic);
    CHECK(back.replications == 10);

    const std::string text = R"({"scenario":"B2","loss":{"mode":"fixed","c":1.0,"k":0.5,"z":0.0},
                                 "replications":3,"seed":11})";
    const ExperimentConfig parsed = config_from_json(text);
    CHECK(parsed.scenario == "B2");
    CHECK(parsed.loss_mode == LossMode::fixed);
    CHECK(parsed.fixed_loss.k == 0.5);
    CHECK(parsed.replications == 3);

    CHECK_THROWS_AS(config_from_json("{nope"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"loss":{"mode":"banana"}})"), ConfigError);
}

TEST_CASE("config validation rejects broken setups") {
    ExperimentConfig config;
    CHECK_THROWS_AS(config.validate(), ConfigError);  // neither scenario nor data
    config.scenario = "X9";
    CHECK_THROWS(config.validate());  // unknown scenario
    config.scenario = "B1";
    config.dataset_path = "also_set.csv";
    CHECK_THROWS_AS(config.validate(), ConfigError);  // both set
    config.dataset_path.clear();
    config.replications = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.replications = 1;
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("config hash is stable and input-sensitive") {
    ExperimentConfig a;
    a.scenario = "C1";
    ExperimentConfig b = a;
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("import validates pixels and flags binary data") {
    const fs::path dir = temp_dir("import");
    const fs::path good = dir / "good.csv";
    {
        std::ofstream out(good);
        out << "x1,x2,y\n0.1,0.2,-1\n-0.3,0.4,1\n";
    }
    const Dataset data = import_dataset(good.string());
    REQUIRE(data.size() == 2);
    CHECK(data.is_binary());

    const fs::path continuous = dir / "cont.csv";
    {
        std::ofstream out(continuous);
        out << "x1,x2,y\n0.1,0.2,0.5\n-0.3,0.4,1.5\n";
    }
    CHECK_FALSE(import_dataset(continuous.string()).is_binary());

    const fs::path bad_domain = dir / "bad_domain.csv";
    {
        std::ofstream out(bad_domain);
        out << "x1,x2,y\n0.1,0.2,1\n0.7,0.0,1\n";
    }
    CHECK_THROWS_WITH_AS(import_dataset(bad_domain.string()), doctest::Contains("row 3"),
                         std::runtime_error);

    const fs::path malformed = dir / "malformed.csv";
    {
        std::ofstream out(malformed);
        out << "x1,x2,y\n0.1,oops,1\n";
    }
    CHECK_THROWS_WITH_AS(import_dataset(malformed.string()), doctest::Contains("row 2"),
                         std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("chain files round trip") {
    Rng rng(111);
    Chain chain;
    chain.seed = 77;
    chain.config.n_samples = 5;
    chain.config.burn_in = 2;
    chain.stats.beta_attempts = 100;
    chain.stats.beta_accepts = 40;
    for (int i = 0; i < 5; ++i) chain.draws.push_back(testutil::random_boundary_curve(rng));

    const fs::path dir = temp_dir("chainio");
    const std::string csv = (dir / "chain.csv").string();
    const std::string json = (dir / "chain.json").string();
    write_chain(chain, csv, json);
    const Chain back = read_chain(csv, json);
    REQUIRE(back.draws.size() == chain.draws.size());
    CHECK(back.seed == 77);
    CHECK(back.config.n_samples == 5);
    CHECK(back.stats.beta_accepts == 40);
    for (std::size_t i = 0; i < chain.draws.size(); ++i) {
        REQUIRE(back.draws[i].inner_knot_count() == chain.draws[i].inner_knot_count());
        for (int j = 0; j < chain.draws[i].basis_count(); ++j) {
            CHECK(back.draws[i].coefficients()[j] == chain.draws[i].coefficients()[j]);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("svg plot is structured and deterministic") {
    const ScenarioSpec b1 = preset_scenario("B1");
    ScenarioSpec small = b1;
    small.grid_size = 30;
    const Dataset data = generate_dataset(small, 9);

    Chain chain;
    for (double r : {0.2, 0.25, 0.3}) {
        chain.draws.push_back(solve_closure(KnotVector::uniform(12),
                                            std::vector<double>(13, r)));
    }
    const CurveGrid grid = posterior_mean_curve(chain);
    const CredibleBand band = uniform_credible_band(grid, 0.95);
    const auto truth = truth_curve(small, Frame{});

    const fs::path dir = temp_dir("svg");
    const fs::path a = dir / "a.svg";
    const fs::path b = dir / "b.svg";
    emit_plot(grid, band, truth.get(), data, Frame{}, a.string());
    emit_plot(grid, band, truth.get(), data, Frame{}, b.string());

    const std::string text = slurp(a);
    CHECK(text.find("<g id=\"pixels\">") != std::string::npos);
    CHECK(text.find("<g id=\"band\">") != std::string::npos);
    CHECK(text.find("<g id=\"truth\">") != std::string::npos);
    CHECK(text.find("<g id=\"mean\">") != std::string::npos);
    CHECK(text.rfind("</svg>") != std::string::npos);
    CHECK(text == slurp(b));

    // Without a truth curve the group stays but is empty.
    const fs::path c = dir / "c.svg";
    emit_plot(grid, band, nullptr, data, Frame{}, c.string());
    const std::string no_truth = slurp(c);
    CHECK(no_truth.find("<g id=\"truth\">\n</g>") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("experiment runs are deterministic and aggregate correctly") {
    const fs::path out_a = temp_dir("exp_a");
    const ExperimentConfig config_a = tiny_config(out_a);
    // Re-running the identical config must overwrite every artifact with
    // byte-identical contents.
    const ExperimentConfig config_b = config_a;

    const ExperimentReport report_a = run_experiment(config_a);

    // Mean equals the average of the per-replication errors.
    REQUIRE(report_a.replications.size() == 2);
    double mean = 0.0;
    for (const auto& r : report_a.replications) {
        REQUIRE(r.ok);
        mean += r.error;
    }
    mean /= 2.0;
    CHECK(std::abs(report_a.mean_error - mean) <= 1e-12);

    // Snapshot, rerun, and compare bytes.
    const fs::path run_a = fs::path(report_a.run_dir);
    const std::string report_before = slurp(run_a / "report.json");
    std::vector<std::pair<fs::path, std::string>> before;
    for (const char* rep : {"rep-000", "rep-001"}) {
        for (const char* file : {"chain.csv", "summary.json", "dataset.csv", "plot.svg"}) {
            before.emplace_back(run_a / rep / file, slurp(run_a / rep / file));
        }
    }
    const ExperimentReport report_b = run_experiment(config_b);
    CHECK(report_b.run_dir == report_a.run_dir);
    CHECK(slurp(run_a / "report.json") == report_before);
    for (const auto& [path, content] : before) {
        CHECK(slurp(path) == content);
    }
    fs::remove_all(out_a);
}

TEST_CASE("worker count does not change the results") {
    const fs::path out = temp_dir("exp_workers");
    ExperimentConfig serial = tiny_config(out);
    serial.replications = 3;
    const ExperimentReport a = run_experiment(serial);

    ExperimentConfig parallel = serial;
    parallel.workers = 3;
    const ExperimentReport b = run_experiment(parallel);
    // The worker count participates in the config hash, so compare reports
    // field-wise rather than byte-wise.
    REQUIRE(a.replications.size() == b.replications.size());
    for (std::size_t i = 0; i < a.replications.size(); ++i) {
        CHECK(a.replications[i].error == b.replications[i].error);
        CHECK(a.replications[i].tau == b.replications[i].tau);
    }
    CHECK(a.mean_error == b.mean_error);
    fs::remove_all(out);
}

TEST_CASE("replication failures are recorded, not fatal") {
    // Binary external data cannot be auto-scaled; each replication fails with
    // a message but the report is still produced.
    const fs::path dir = temp_dir("exp_fail");
    const fs::path csv = dir / "binary.csv";
    {
        std::ofstream out(csv);
        out << "x1,x2,y\n0.1,0.2,-1\n-0.3,0.4,1\n0.2,-0.1,1\n";
    }
    ExperimentConfig config;
    config.dataset_path = csv.string();
    config.replications = 2;
    config.out_dir = (dir / "runs").string();
    config.sampler.n_samples = 10;
    config.sampler.burn_in = 5;
    const ExperimentReport report = run_experiment(config);
    CHECK(report.n_failed == 2);
    for (const auto& r : report.replications) {
        CHECK_FALSE(r.ok);
        CHECK(r.message.find("fixed") != std::string::npos);
    }
    CHECK(fs::exists(fs::path(report.run_dir) / "report.json"));

    // The same data runs fine with a fixed loss.
    config.loss_mode = LossMode::fixed;
    config.fixed_loss = LossSpec::binary(1.0);
    const ExperimentReport fixed_report = run_experiment(config);
    CHECK(fixed_report.n_failed == 0);
    for (const auto& r : fixed_report.replications) {
        CHECK(r.ok);
        CHECK_FALSE(r.has_error_metric);  // no truth for external data
    }
    fs::remove_all(dir);
}

TEST_CASE("bad scenario fails before any artifact is written") {
    const fs::path out = temp_dir("exp_bad");
    ExperimentConfig config = tiny_config(out);
    config.scenario = "Z3";
    CHECK_THROWS(run_experiment(config));
    CHECK(fs::is_empty(out));
    fs::remove_all(out);
}
