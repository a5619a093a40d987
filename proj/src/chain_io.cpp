#include "gibbsbd/chain_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gibbsbd/summary.hpp"

namespace gibbsbd {

namespace {

std::string join_values(std::span<const double> values) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        if (i) out += ' ';
        out += buf;
    }
    return out;
}

std::vector<double> split_values(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    double v;
    while (ss >> v) out.push_back(v);
    return out;
}

// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

nlohmann::json config_json(const SamplerConfig& config) {
    nlohmann::json j;
    j["n_samples"] = config.n_samples;
    j["burn_in"] = config.burn_in;
    j["beta_proposal_sd"] = config.beta_proposal_sd;
    j["move_probabilities"] = {config.moves.birth, config.moves.death, config.moves.relocate};
    j["seed"] = config.seed;
    return j;
}

SamplerConfig config_from_json(const nlohmann::json& j) {
    SamplerConfig config;
    config.n_samples = j.value("n_samples", config.n_samples);
    config.burn_in = j.value("burn_in", config.burn_in);
    config.beta_proposal_sd = j.value("beta_proposal_sd", config.beta_proposal_sd);
    if (j.contains("move_probabilities")) {
        const auto m = j.at("move_probabilities").get<std::vector<double>>();
        if (m.size() == 3) config.moves = {m[0], m[1], m[2]};
    }
    config.seed = j.value("seed", config.seed);
    return config;
}

}  // namespace

void write_chain(const Chain& chain, const std::string& csv_path, const std::string& json_path) {
    nlohmann::json header;
    header["config"] = config_json(chain.config);
    header["seed"] = chain.seed;
    header["draws"] = chain.draws.size();
    header["acceptance"] = {
        {"beta", {{"attempts", chain.stats.beta_attempts}, {"accepts", chain.stats.beta_accepts}}},
        {"birth",
         {{"attempts", chain.stats.birth_attempts}, {"accepts", chain.stats.birth_accepts}}},
        {"death",
         {{"attempts", chain.stats.death_attempts}, {"accepts", chain.stats.death_accepts}}},
        {"relocate",
         {{"attempts", chain.stats.relocate_attempts},
          {"accepts", chain.stats.relocate_accepts}}}};
    header["d_bound_hits"] = chain.stats.d_bound_hits;
    std::ofstream jout(json_path);
    if (!jout) throw std::runtime_error("write_chain: cannot open " + json_path);
    jout << header.dump(2) << "\n";

    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("write_chain: cannot open " + csv_path);
    out << "draw,D,inner_knots,coefficients";
    for (int g = 0; g < kSummaryGridSize; ++g) out << ",r" << g;
    out << "\n";
    char buf[32];
    for (std::size_t i = 0; i < chain.draws.size(); ++i) {
        const BoundaryCurve& curve = chain.draws[i];
        out << i << ',' << curve.inner_knot_count() << ',';
        out << '"' << join_values(curve.inner_knots()) << "\",";
        out << '"' << join_values(curve.coefficients()) << '"';
        for (int g = 0; g < kSummaryGridSize; ++g) {
            const double theta = kTwoPi * g / kSummaryGridSize;
            std::snprintf(buf, sizeof(buf), ",%.9g", curve.radius(theta));
            out << buf;
        }
        out << "\n";
    }
}

Chain read_chain(const std::string& csv_path, const std::string& json_path) {
    Chain chain;
    {
        std::ifstream jin(json_path);
        if (!jin) throw std::runtime_error("read_chain: cannot open " + json_path);
        nlohmann::json header;
        jin >> header;
        chain.config = config_from_json(header.at("config"));
        chain.seed = header.value("seed", std::uint64_t{0});
        if (header.contains("acceptance")) {
            const auto& acc = header.at("acceptance");
            chain.stats.beta_attempts = acc.at("beta").value("attempts", 0);
            chain.stats.beta_accepts = acc.at("beta").value("accepts", 0);
            chain.stats.birth_attempts = acc.at("birth").value("attempts", 0);
            chain.stats.birth_accepts = acc.at("birth").value("accepts", 0);
            chain.stats.death_attempts = acc.at("death").value("attempts", 0);
            chain.stats.death_accepts = acc.at("death").value("accepts", 0);
            chain.stats.relocate_attempts = acc.at("relocate").value("attempts", 0);
            chain.stats.relocate_accepts = acc.at("relocate").value("accepts", 0);
        }
        chain.stats.d_bound_hits = header.value("d_bound_hits", 0);
    }

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("read_chain: cannot open " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_chain: empty file " + csv_path);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() < 4) {
            throw std::runtime_error("read_chain: malformed row " + std::to_string(row));
        }
        KnotVector kv;
        kv.inner = split_values(fields[2]);
        std::vector<double> coefficients = split_values(fields[3]);
        chain.draws.emplace_back(kv, std::move(coefficients));
    }
    return chain;
}

}  // namespace gibbsbd
