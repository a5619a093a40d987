#include "gibbsbd/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gibbsbd {

bool Dataset::is_binary() const {
    if (records.empty()) return false;
    for (const PixelRecord& rec : records) {
        if (rec.y != 1.0 && rec.y != -1.0) return false;
    }
    return true;
}

double sample_intensity(const IntensityLaw& law, Rng& rng) {
    return std::visit(
        [&rng](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, BernoulliLaw>) {
                return rng.bernoulli(l.p_plus) ? 1.0 : -1.0;
            } else if constexpr (std::is_same_v<T, NormalLaw>) {
                return rng.normal(l.mean, l.sd);
            } else if constexpr (std::is_same_v<T, NormalMixtureLaw>) {
                const NormalLaw& c = rng.bernoulli(l.weight) ? l.a : l.b;
                return rng.normal(c.mean, c.sd);
            } else {
                static_assert(std::is_same_v<T, NoncentralTLaw>);
                const double z = rng.normal() + l.delta;
                const double v = rng.chi_squared(l.df);
                return z / std::sqrt(v / l.df);
            }
        },
        law);
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double intensity_cdf(const IntensityLaw& law, double z) {
    return std::visit(
        [z](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, BernoulliLaw>) {
                if (z < -1.0) return 0.0;
                if (z < 1.0) return 1.0 - l.p_plus;
                return 1.0;
            } else if constexpr (std::is_same_v<T, NormalLaw>) {
                return normal_cdf((z - l.mean) / l.sd);
            } else if constexpr (std::is_same_v<T, NormalMixtureLaw>) {
                return l.weight * normal_cdf((z - l.a.mean) / l.a.sd) +
                       (1.0 - l.weight) * normal_cdf((z - l.b.mean) / l.b.sd);
            } else {
                throw std::logic_error("intensity_cdf: no closed form for the noncentral t law");
                return 0.0;
            }
        },
        law);
}

bool law_is_binary(const IntensityLaw& law) {
    return std::holds_alternative<BernoulliLaw>(law);
}

ScenarioSpec preset_scenario(const std::string& name) {
    const EllipseShape ellipse{{0.1, 0.1}, kPi / 3.0, 0.35, 0.25};
    const TriangleShape triangle{0.5, kPi / 2.0};

    ScenarioSpec s;
    s.name = name;
    if (name == "B1") {
        s.shape = ellipse;
        s.grid_size = 100;
        s.inside = BernoulliLaw{0.5};
        s.outside = BernoulliLaw{0.2};
    } else if (name == "B2") {
        s.shape = triangle;
        s.grid_size = 100;
        s.inside = BernoulliLaw{0.5};
        s.outside = BernoulliLaw{0.2};
    } else if (name == "B3") {
        s.shape = ellipse;
        s.grid_size = 500;
        s.inside = BernoulliLaw{0.25};
        s.outside = BernoulliLaw{0.2};
    } else if (name == "B4") {
        s.shape = triangle;
        s.grid_size = 500;
        s.inside = BernoulliLaw{0.25};
        s.outside = BernoulliLaw{0.2};
    } else if (name == "C1") {
        s.shape = ellipse;
        s.grid_size = 100;
        s.inside = NormalLaw{4.0, 1.5};
        s.outside = NormalLaw{1.0, 1.0};
    } else if (name == "C2") {
        s.shape = triangle;
        s.grid_size = 100;
        s.inside = NormalLaw{4.0, 1.5};
        s.outside = NormalLaw{1.0, 1.0};
    } else if (name == "C3") {
        s.shape = ellipse;
        s.grid_size = 100;
        s.inside = NormalMixtureLaw{0.2, {2.0, std::sqrt(10.0)}, {0.0, 1.0}};
        s.outside = NormalLaw{0.0, std::sqrt(5.0)};
    } else if (name == "C4") {
        s.shape = ellipse;
        s.grid_size = 100;
        s.inside = NoncentralTLaw{3, 1.0};
        s.outside = NoncentralTLaw{3, 0.0};
    } else {
        throw std::invalid_argument("preset_scenario: unknown scenario '" + name + "'");
    }
    return s;
}

std::unique_ptr<RadialCurve> truth_curve(const ScenarioSpec& scenario, const Frame& frame) {
    if (const auto* e = std::get_if<EllipseShape>(&scenario.shape)) {
        return std::make_unique<EllipseBoundary>(*e, frame);
    }
    return std::make_unique<TriangleBoundary>(std::get<TriangleShape>(scenario.shape));
}

std::vector<Vec2> sample_pixels(int m, std::uint64_t seed) {
    if (m < 2) throw std::invalid_argument("sample_pixels: grid size must be >= 2");
    Rng rng(derive_seed(seed, 0x70697865ULL));  // pixel stream
    const double cell = 1.0 / m;
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double cx = -kOmegaHalfWidth + (i + 0.5) * cell;
            const double cy = -kOmegaHalfWidth + (j + 0.5) * cell;
            const double jx = rng.uniform(-0.5 * cell, 0.5 * cell);
            const double jy = rng.uniform(-0.5 * cell, 0.5 * cell);
            pts.push_back({cx + jx, cy + jy});
        }
    }
    return pts;
}

Dataset sample_intensities(const std::vector<Vec2>& pixels, const ScenarioSpec& scenario,
                           const Frame& frame, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x696e7465ULL));  // intensity stream
    const std::unique_ptr<RadialCurve> truth = truth_curve(scenario, frame);
    Dataset data;
    data.records.reserve(pixels.size());
    data.scenario = scenario.name;
    data.seed = seed;
    data.grid_size = scenario.grid_size;
    for (const Vec2& x : pixels) {
        const bool inside = contains(*truth, x, frame);
        const double y = sample_intensity(inside ? scenario.inside : scenario.outside, rng);
        data.records.push_back({x, y});
    }
    return data;
}

Dataset generate_dataset(const ScenarioSpec& scenario, std::uint64_t seed, const Frame& frame) {
    return sample_intensities(sample_pixels(scenario.grid_size, seed), scenario, frame, seed);
}

void write_dataset_csv(const Dataset& data, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("write_dataset_csv: cannot open " + csv_path);
    out << "x1,x2,y\n";
    char buf[96];
    for (const PixelRecord& rec : data.records) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rec.x.x, rec.x.y, rec.y);
        out << buf;
    }
    out.close();

    nlohmann::json sidecar;
    sidecar["scenario"] = data.scenario;
    sidecar["seed"] = data.seed;
    sidecar["m"] = data.grid_size;
    std::ofstream side(csv_path + ".json");
    if (!side) throw std::runtime_error("write_dataset_csv: cannot open " + csv_path + ".json");
    side << sidecar.dump(2) << "\n";
}

Dataset read_dataset_csv(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("read_dataset_csv: cannot open " + csv_path);
    Dataset data;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("read_dataset_csv: empty file " + csv_path);
    }
    if (line != "x1,x2,y") {
        throw std::runtime_error("read_dataset_csv: expected header 'x1,x2,y' in " + csv_path);
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        PixelRecord rec;
        char extra;
        std::istringstream ss(line);
        char c1 = 0, c2 = 0;
        if (!(ss >> rec.x.x >> c1 >> rec.x.y >> c2 >> rec.y) || c1 != ',' || c2 != ',') {
            throw std::runtime_error("read_dataset_csv: malformed row " + std::to_string(row));
        }
        if (ss >> extra) {
            throw std::runtime_error("read_dataset_csv: trailing data in row " + std::to_string(row));
        }
        data.records.push_back(rec);
    }

    std::ifstream side(csv_path + ".json");
    if (side) {
        nlohmann::json sidecar;
        side >> sidecar;
        data.scenario = sidecar.value("scenario", std::string());
        data.seed = sidecar.value("seed", std::uint64_t{0});
        data.grid_size = sidecar.value("m", 0);
    }
    return data;
}

}  // namespace gibbsbd
