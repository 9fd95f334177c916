#include "gla/harness/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "gla/core/io.hpp"

namespace gla::harness {

namespace {

// One row per config key: name, type tag, member pointer.
#define GLA_CONFIG_FIELDS(STR, SIZE, DBL, INT, U64)                                   \
    STR(snapshots_path)                                                              \
    STR(obs_path)                                                                    \
    STR(models_dir)                                                                  \
    STR(output_dir)                                                                  \
    SIZE(burgers_n)                                                                  \
    DBL(burgers_viscosity)                                                           \
    DBL(burgers_dt)                                                                  \
    SIZE(burgers_steps)                                                              \
    SIZE(burgers_stride)                                                             \
    STR(burgers_ic)                                                                  \
    DBL(burgers_base)                                                                \
    DBL(burgers_amplitude)                                                           \
    DBL(burgers_center)                                                              \
    DBL(burgers_width)                                                               \
    SIZE(rom_qprime)                                                                 \
    SIZE(rom_latent_dim)                                                             \
    SIZE(rom_hidden)                                                                 \
    DBL(rom_learning_rate)                                                           \
    SIZE(rom_epochs)                                                                 \
    SIZE(rom_batch)                                                                  \
    SIZE(obsrom_qprime)                                                              \
    SIZE(obsrom_latent_dim)                                                          \
    SIZE(fc_l_input)                                                                 \
    SIZE(fc_l_output)                                                                \
    SIZE(fc_hidden)                                                                  \
    DBL(fc_learning_rate)                                                            \
    SIZE(fc_epochs)                                                                  \
    SIZE(fc_batch)                                                                   \
    SIZE(obs_m)                                                                      \
    DBL(obs_p)                                                                       \
    STR(obs_marginal)                                                                \
    DBL(obs_noise_std)                                                               \
    INT(gla_degree)                                                                  \
    DBL(gla_lhs_range)                                                               \
    SIZE(gla_lhs_count)                                                              \
    SIZE(gla_max_iterations)                                                         \
    DBL(gla_outer_tol)                                                               \
    DBL(gla_optimizer_tol)                                                           \
    STR(gla_refit)                                                                   \
    DBL(gla_background_variance)                                                     \
    DBL(gla_observation_variance)                                                    \
    STR(gla_schedule)                                                                \
    SIZE(warmup_len)                                                                 \
    SIZE(horizon)                                                                    \
    U64(seed_rom)                                                                    \
    U64(seed_fc)                                                                     \
    U64(seed_obs)                                                                    \
    U64(seed_gla)

struct KeyHandler {
    std::string name;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

const std::vector<KeyHandler>& registry() {
    static const std::vector<KeyHandler> handlers = [] {
        std::vector<KeyHandler> h;
#define GLA_STR(f)                                                                   \
    h.push_back({#f, [](const ExperimentConfig& c) { return c.f; },                  \
                 [](ExperimentConfig& c, const std::string& v) { c.f = v; }});
#define GLA_SIZE(f)                                                                  \
    h.push_back({#f, [](const ExperimentConfig& c) { return std::to_string(c.f); },  \
                 [](ExperimentConfig& c, const std::string& v) { c.f = std::stoul(v); }});
#define GLA_DBL(f)                                                                   \
    h.push_back({#f, [](const ExperimentConfig& c) { return core::format_double(c.f); }, \
                 [](ExperimentConfig& c, const std::string& v) { c.f = std::stod(v); }});
#define GLA_INT(f)                                                                   \
    h.push_back({#f, [](const ExperimentConfig& c) { return std::to_string(c.f); },  \
                 [](ExperimentConfig& c, const std::string& v) { c.f = std::stoi(v); }});
#define GLA_U64(f)                                                                   \
    h.push_back({#f, [](const ExperimentConfig& c) { return std::to_string(c.f); },  \
                 [](ExperimentConfig& c, const std::string& v) { c.f = std::stoull(v); }});
        GLA_CONFIG_FIELDS(GLA_STR, GLA_SIZE, GLA_DBL, GLA_INT, GLA_U64)
#undef GLA_STR
#undef GLA_SIZE
#undef GLA_DBL
#undef GLA_INT
#undef GLA_U64
        return h;
    }();
    return handlers;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    ExperimentConfig config;
    for (const auto& [key, value] : core::read_manifest(path)) config.apply(key, value);
    return config;
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [key, value] : entries()) out << key << " = " << value << '\n';
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    for (const auto& handler : registry()) {
        if (handler.name == key) {
            handler.set(*this, value);
            return;
        }
    }
    throw std::invalid_argument("unknown config key: " + key);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& handler : registry()) out.emplace_back(handler.name, handler.get(*this));
    return out;
}

const std::vector<std::string>& ExperimentConfig::key_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& handler : registry()) n.push_back(handler.name);
        return n;
    }();
    return names;
}

BurgersSpec ExperimentConfig::burgers_spec() const {
    BurgersSpec spec;
    spec.n = burgers_n;
    spec.viscosity = burgers_viscosity;
    spec.dt = burgers_dt;
    spec.steps = burgers_steps;
    spec.stride = burgers_stride;
    if (burgers_ic == "zero")
        spec.ic = BurgersSpec::InitialCondition::Zero;
    else if (burgers_ic == "gaussian")
        spec.ic = BurgersSpec::InitialCondition::GaussianBump;
    else
        throw std::invalid_argument("unknown burgers_ic: " + burgers_ic);
    spec.ic_base = burgers_base;
    spec.ic_amplitude = burgers_amplitude;
    spec.ic_center = burgers_center;
    spec.ic_width = burgers_width;
    return spec;
}

std::set<std::size_t> parse_schedule(const std::string& text) {
    std::set<std::size_t> steps;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto first = token.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = token.find_last_not_of(" \t");
        token = token.substr(first, last - first + 1);
        if (token.empty()) continue;
        const auto dash = token.find('-');
        if (dash == std::string::npos) {
            steps.insert(std::stoul(token));
        } else {
            const std::size_t lo = std::stoul(token.substr(0, dash));
            const std::size_t hi = std::stoul(token.substr(dash + 1));
            if (hi < lo) throw std::invalid_argument("schedule range reversed: " + token);
            for (std::size_t s = lo; s <= hi; ++s) steps.insert(s);
        }
    }
    return steps;
}

std::set<std::size_t> ExperimentConfig::schedule_steps() const {
    return parse_schedule(gla_schedule);
}

}  // namespace gla::harness
