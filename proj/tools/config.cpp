#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace apar::cli {

namespace {

std::string trimmed(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trimmed(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_real(const std::string& value, std::size_t line) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + value +
                          "'");
    }
}

std::int64_t parse_int(const std::string& value, std::size_t line) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + value +
                          "'");
    return v;
}

bool parse_bool(const std::string& value, std::size_t line) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("line " + std::to_string(line) + ": expected true/false, got '" + value +
                      "'");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig config;

    using Handler = std::function<void(RunConfig&, const std::string&, std::size_t)>;
    static const std::map<std::string, Handler> handlers = {
        {"dataset", [](RunConfig& c, const std::string& v, std::size_t) { c.dataset = v; }},
        {"lexicon", [](RunConfig& c, const std::string& v, std::size_t) { c.lexicon = v; }},
        {"weights", [](RunConfig& c, const std::string& v, std::size_t) { c.weights = v; }},
        {"out_dir", [](RunConfig& c, const std::string& v, std::size_t) { c.out_dir = v; }},
        {"domain", [](RunConfig& c, const std::string& v, std::size_t) { c.domain = v; }},
        {"model", [](RunConfig& c, const std::string& v, std::size_t) { c.model = v; }},
        {"rating_min",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.rating_min = static_cast<int>(parse_int(v, l));
         }},
        {"rating_max",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.rating_max = static_cast<int>(parse_int(v, l));
         }},
        {"d",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.hp.d = static_cast<int>(parse_int(v, l));
         }},
        {"alpha1",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.hp.alpha1 = parse_real(v, l); }},
        {"alpha2",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.hp.alpha2 = parse_real(v, l); }},
        {"lambda",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.hp.lambda = parse_real(v, l); }},
        {"beta",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.hp.beta = parse_real(v, l); }},
        {"tol",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.hp.tol = parse_real(v, l); }},
        {"max_iters",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.hp.max_iters = static_cast<int>(parse_int(v, l));
         }},
        {"optimizer",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             if (v == "multiplicative")
                 c.options.optimizer = Optimizer::Multiplicative;
             else if (v == "projected-gradient" || v == "pgd")
                 c.options.optimizer = Optimizer::ProjectedGradient;
             else
                 throw ConfigError("line " + std::to_string(l) +
                                   ": optimizer must be multiplicative or projected-gradient");
         }},
        {"neighbor_mode",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             if (v == "average")
                 c.options.neighbor_mode = NeighborMode::Average;
             else if (v == "sum")
                 c.options.neighbor_mode = NeighborMode::Sum;
             else
                 throw ConfigError("line " + std::to_string(l) +
                                   ": neighbor_mode must be average or sum");
         }},
        {"gamma_mode",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             if (v == "knowledge")
                 c.options.gamma_mode = GammaMode::Knowledge;
             else if (v == "constant")
                 c.options.gamma_mode = GammaMode::Constant;
             else
                 throw ConfigError("line " + std::to_string(l) +
                                   ": gamma_mode must be knowledge or constant");
         }},
        {"gamma_const",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.options.gamma_const = parse_real(v, l);
         }},
        {"clip_predictions",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.clip_predictions = parse_bool(v, l);
         }},
        {"timings",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.timings = parse_bool(v, l); }},
        {"quiet",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.quiet = parse_bool(v, l); }},
        {"seeds",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.seeds.clear();
             for (const auto& item : split_list(v))
                 c.seeds.push_back(static_cast<std::uint64_t>(parse_int(item, l)));
         }},
        {"fractions",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.fractions.clear();
             for (const auto& item : split_list(v)) c.fractions.push_back(parse_real(item, l));
         }},
        {"lambdas",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.lambdas.clear();
             for (const auto& item : split_list(v)) c.lambdas.push_back(parse_real(item, l));
         }},
        {"degrees",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.degrees.clear();
             for (const auto& item : split_list(v)) c.degrees.push_back(parse_real(item, l));
         }},
        {"train_fraction",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.train_fraction = parse_real(v, l);
         }},
        {"methods",
         [](RunConfig& c, const std::string& v, std::size_t) { c.methods = split_list(v); }},
        {"kfold",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.kfold = static_cast<int>(parse_int(v, l));
         }},
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string body = trimmed(line);
        if (body.empty()) continue;

        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trimmed(body.substr(0, eq));
        std::string value = trimmed(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");

        auto handler = handlers.find(key);
        if (handler == handlers.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        handler->second(config, value, lineno);
    }

    // structural checks that do not depend on the command being run
    config.hp.validate();
    if (config.rating_min >= config.rating_max) throw ConfigError("rating_min must be < rating_max");
    if (config.seeds.empty()) throw ConfigError("seeds must be nonempty");
    if (config.fractions.empty() || config.lambdas.empty() || config.degrees.empty())
        throw ConfigError("experiment grids must be nonempty");
    for (double f : config.fractions)
        if (!(f > 0.0 && f < 1.0)) throw ConfigError("fractions must lie in (0,1)");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw ConfigError("train_fraction must lie in (0,1)");
    for (double l : config.lambdas)
        if (!(l >= 0.0)) throw ConfigError("lambdas must be >= 0");
    for (double g : config.degrees)
        if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("degrees must lie in [0,1]");
    if (!(config.options.gamma_const >= 0.0 && config.options.gamma_const <= 1.0))
        throw ConfigError("gamma_const must lie in [0,1]");
    if (config.methods.empty()) throw ConfigError("methods must be nonempty");

    config.hp.seed = config.seeds.front();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
    if (overrides.seed) {
        config.seeds = {*overrides.seed};
        config.hp.seed = *overrides.seed;
    }
    if (overrides.out_dir) config.out_dir = *overrides.out_dir;
    if (overrides.quiet) config.quiet = true;
}

}  // namespace apar::cli
