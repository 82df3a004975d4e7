#include "mies/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mies/normal_math.hpp"

namespace mies::harness {

namespace {

[[noreturn]] void fail(const std::string& message) { throw ConfigError("config: " + message); }

std::string trim(const std::string& text) {
    auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& text) {
    std::istringstream stream(text);
    std::vector<std::string> out;
    std::string token;
    while (stream >> token) out.push_back(token);
    return out;
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) fail(key + " has trailing characters: '" + value + "'");
        return parsed;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(key + " is not a number: '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    if (value.empty() || value[0] == '-') fail(key + " must be a non-negative integer");
    try {
        std::size_t used = 0;
        const unsigned long long parsed = std::stoull(value, &used);
        if (used != value.size()) fail(key + " has trailing characters: '" + value + "'");
        return parsed;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(key + " is not an integer: '" + value + "'");
    }
}

std::int64_t parse_i64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long parsed = std::stoll(value, &used);
        if (used != value.size()) fail(key + " has trailing characters: '" + value + "'");
        return parsed;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(key + " is not an integer: '" + value + "'");
    }
}

// section -> allowed keys; the pair identifies each stored value.
const std::map<std::string, std::set<std::string>> kSchema = {
    {"problem", {"kind", "dco", "din"}},
    {"strategy", {"variant", "alpha", "s", "p_mut", "sigma_lb"}},
    {"init", {"sigma0", "m0_mode", "m0", "m_int0_mode", "m_int0", "d0"}},
    {"run", {"seeds", "budget", "epsilon", "trace_stride"}},
};

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> values;
    std::string section;
    std::istringstream stream(text);
    std::string raw_line;
    std::size_t line_no = 0;
    while (std::getline(stream, raw_line)) {
        ++line_no;
        const std::string line = trim(raw_line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail("line " + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (kSchema.find(section) == kSchema.end()) {
                fail("unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) fail("key '" + key + "' appears before any section");
        const auto& allowed = kSchema.at(section);
        if (allowed.find(key) == allowed.end()) {
            fail("unknown key " + section + "." + key);
        }
        const std::string path = section + "." + key;
        if (!values.emplace(path, value).second) fail("duplicate key " + path);
    }

    auto has = [&](const char* path) { return values.count(path) > 0; };
    auto get = [&](const char* path) { return values.at(path); };

    ExperimentConfig config;

    if (!has("problem.kind")) fail("problem.kind is required");
    const std::string kind = get("problem.kind");
    if (kind == "sphere_int") {
        config.problem.kind = ProblemKind::sphere_int;
    } else if (kind == "lexico_sphere_int") {
        config.problem.kind = ProblemKind::lexico_sphere_int;
    } else {
        fail("problem.kind must be sphere_int or lexico_sphere_int, got '" + kind + "'");
    }
    if (!has("problem.dco")) fail("problem.dco is required");
    config.problem.dco = static_cast<int>(parse_u64(get("problem.dco"), "problem.dco"));
    if (has("problem.din")) {
        config.problem.din = static_cast<int>(parse_u64(get("problem.din"), "problem.din"));
    }

    if (!has("strategy.variant")) fail("strategy.variant is required");
    const std::string variant = get("strategy.variant");
    if (variant == "lb" || variant == "LB") {
        config.variant = Variant::lb;
    } else if (variant == "lub" || variant == "LUB") {
        config.variant = Variant::lub;
    } else {
        fail("strategy.variant must be lb or lub, got '" + variant + "'");
    }
    if (has("strategy.alpha")) config.alpha = parse_double(get("strategy.alpha"), "strategy.alpha");
    if (has("strategy.s")) config.s = parse_double(get("strategy.s"), "strategy.s");

    if (has("strategy.p_mut") && has("strategy.sigma_lb")) {
        fail("strategy.p_mut and strategy.sigma_lb are mutually exclusive");
    }
    if (has("strategy.p_mut")) {
        const double p_mut = parse_double(get("strategy.p_mut"), "strategy.p_mut");
        if (!(p_mut > 0.0 && p_mut < 1.0)) fail("strategy.p_mut must lie in (0, 1)");
        config.p_mut = p_mut;
        config.sigma_lb = sigma_lb_from_pmut(p_mut);
    } else if (has("strategy.sigma_lb")) {
        config.sigma_lb = parse_double(get("strategy.sigma_lb"), "strategy.sigma_lb");
    } else {
        const double p_mut = 1.0 / static_cast<double>(config.problem.dco + config.problem.din);
        config.p_mut = p_mut;
        config.sigma_lb = sigma_lb_from_pmut(p_mut);
    }

    if (has("init.sigma0")) config.sigma0 = parse_double(get("init.sigma0"), "init.sigma0");
    if (has("init.m0_mode")) {
        const std::string mode = get("init.m0_mode");
        if (mode == "uniform_1_3") {
            config.m0_mode = M0Mode::uniform_1_3;
        } else if (mode == "explicit") {
            config.m0_mode = M0Mode::explicit_vector;
        } else {
            fail("init.m0_mode must be uniform_1_3 or explicit, got '" + mode + "'");
        }
    }
    if (has("init.m0")) {
        if (config.m0_mode != M0Mode::explicit_vector) {
            fail("init.m0 requires m0_mode = explicit");
        }
        for (const auto& token : split_ws(get("init.m0"))) {
            config.m0.push_back(parse_double(token, "init.m0"));
        }
    }
    if (has("init.m_int0_mode")) {
        const std::string mode = get("init.m_int0_mode");
        if (mode == "zeros") {
            config.m_int0_mode = MInt0Mode::zeros;
        } else if (mode == "uniform_1_3_int") {
            config.m_int0_mode = MInt0Mode::uniform_1_3_int;
        } else if (mode == "explicit") {
            config.m_int0_mode = MInt0Mode::explicit_vector;
        } else {
            fail("init.m_int0_mode must be zeros, uniform_1_3_int or explicit, got '" +
                 mode + "'");
        }
    }
    if (has("init.m_int0")) {
        if (config.m_int0_mode != MInt0Mode::explicit_vector) {
            fail("init.m_int0 requires m_int0_mode = explicit");
        }
        for (const auto& token : split_ws(get("init.m_int0"))) {
            config.m_int0.push_back(parse_i64(token, "init.m_int0"));
        }
    }
    if (has("init.d0")) {
        const std::string value = get("init.d0");
        if (value != "ones") {
            for (const auto& token : split_ws(value)) {
                config.d0.push_back(parse_double(token, "init.d0"));
            }
        }
    }

    if (!has("run.seeds")) fail("run.seeds is required");
    for (const auto& token : split_ws(get("run.seeds"))) {
        config.seeds.push_back(parse_u64(token, "run.seeds"));
    }
    if (!has("run.budget")) fail("run.budget is required");
    config.budget = parse_u64(get("run.budget"), "run.budget");
    if (has("run.epsilon")) {
        config.epsilon = parse_double(get("run.epsilon"), "run.epsilon");
    }
    if (has("run.trace_stride")) {
        config.trace_stride = parse_u64(get("run.trace_stride"), "run.trace_stride");
    }

    validate_config(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& config) {
    validate_problem_spec(config.problem);
    try {
        validate_params(strategy_params(config));
    } catch (const std::invalid_argument& e) {
        fail(std::string("strategy: ") + e.what());
    }
    if (config.p_mut && !(*config.p_mut > 0.0 && *config.p_mut < 1.0)) {
        fail("strategy.p_mut must lie in (0, 1)");
    }
    if (config.problem.din >= 1 && !(config.sigma_lb > 0.0)) {
        fail("strategy.sigma_lb must be positive when the problem has integer "
             "coordinates");
    }
    if (!(config.sigma0 > 0.0) || !std::isfinite(config.sigma0)) {
        fail("init.sigma0 must be positive and finite");
    }
    const auto dco = static_cast<std::size_t>(config.problem.dco);
    const auto din = static_cast<std::size_t>(config.problem.din);
    if (config.m0_mode == M0Mode::explicit_vector && config.m0.size() != dco) {
        fail("init.m0 needs exactly problem.dco values");
    }
    if (config.m0_mode != M0Mode::explicit_vector && !config.m0.empty()) {
        fail("init.m0 requires m0_mode = explicit");
    }
    if (config.m_int0_mode == MInt0Mode::explicit_vector && config.m_int0.size() != din) {
        fail("init.m_int0 needs exactly problem.din values");
    }
    if (config.m_int0_mode != MInt0Mode::explicit_vector && !config.m_int0.empty()) {
        fail("init.m_int0 requires m_int0_mode = explicit");
    }
    if (!config.d0.empty()) {
        if (config.d0.size() != din) fail("init.d0 needs exactly problem.din values");
        for (double d : config.d0) {
            if (!(d > 0.0) || !std::isfinite(d)) fail("init.d0 values must be positive");
        }
    }
    if (config.seeds.empty()) fail("run.seeds must not be empty");
    if (config.budget < 1) fail("run.budget must be >= 1");
    if (config.epsilon && (!(*config.epsilon > 0.0) || !std::isfinite(*config.epsilon))) {
        fail("run.epsilon must be positive and finite");
    }
    if (config.trace_stride < 1) fail("run.trace_stride must be >= 1");
}

StrategyParams strategy_params(const ExperimentConfig& config) {
    StrategyParams params;
    params.alpha = config.alpha;
    params.s = config.s;
    params.sigma_lb = config.sigma_lb;
    params.variant = config.variant;
    return params;
}

} // namespace mies::harness
