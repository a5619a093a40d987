#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gibbsbd/geometry.hpp"
#include "gibbsbd/rng.hpp"

namespace gibbsbd {

struct PixelRecord {
    Vec2 x;
    double y = 0.0;
};

struct Dataset {
    std::vector<PixelRecord> records;
    std::string scenario;    // empty for external data
    std::uint64_t seed = 0;
    int grid_size = 0;       // m, 0 when unknown

    std::size_t size() const { return records.size(); }
    bool is_binary() const;  // every y in {-1, +1}
};

// Pixel intensity laws used by the simulation scenarios. Parameters follow
// the (mean, variance) convention, stored here as (mean, sd).
struct BernoulliLaw {
    double p_plus = 0.5;  // P(y = +1); emits y in {-1, +1}
};
struct NormalLaw {
    double mean = 0.0;
    double sd = 1.0;
};
struct NormalMixtureLaw {
    double weight = 0.5;  // weight on component a
    NormalLaw a, b;
};
struct NoncentralTLaw {
    int df = 3;
    double delta = 0.0;
};
using IntensityLaw = std::variant<BernoulliLaw, NormalLaw, NormalMixtureLaw, NoncentralTLaw>;

double sample_intensity(const IntensityLaw& law, Rng& rng);
// Distribution function at z. Throws for NoncentralTLaw (not needed anywhere).
double intensity_cdf(const IntensityLaw& law, double z);
bool law_is_binary(const IntensityLaw& law);

using ShapeVariant = std::variant<EllipseShape, TriangleShape>;

struct ScenarioSpec {
    std::string name;
    ShapeVariant shape;
    int grid_size = 100;  // m
    IntensityLaw inside;
    IntensityLaw outside;

    bool is_binary() const { return law_is_binary(inside); }
};

// The named simulation presets B1-B4 and C1-C4. Unknown names throw.
ScenarioSpec preset_scenario(const std::string& name);

// The true boundary of the scenario as a radial curve about the frame.
std::unique_ptr<RadialCurve> truth_curve(const ScenarioSpec& scenario, const Frame& frame);

// m x m grid of cell centers in Omega, each jittered by a per-coordinate
// Uniform(-1/(2m), 1/(2m)) so the ensemble is uniform over Omega.
std::vector<Vec2> sample_pixels(int m, std::uint64_t seed);

// Draws one intensity per pixel from the inside/outside law according to the
// true region.
Dataset sample_intensities(const std::vector<Vec2>& pixels, const ScenarioSpec& scenario,
                           const Frame& frame, std::uint64_t seed);

Dataset generate_dataset(const ScenarioSpec& scenario, std::uint64_t seed,
                         const Frame& frame = {});

// CSV round trip: header "x1,x2,y" plus a JSON sidecar {scenario, seed, m}
// at sidecar_path (derived as csv_path + ".json" by the convenience forms).
void write_dataset_csv(const Dataset& data, const std::string& csv_path);
Dataset read_dataset_csv(const std::string& csv_path);

}  // namespace gibbsbd
