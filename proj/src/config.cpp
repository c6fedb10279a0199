#include "chernoff_lab/config.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chernoff_lab/errors.hpp"

namespace chernoff_lab {

using nlohmann::json;

const char* kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::rates: return "rates";
        case ExperimentKind::compare: return "compare";
        case ExperimentKind::slow: return "slow";
        case ExperimentKind::tangency: return "tangency";
        case ExperimentKind::moments: return "moments";
        case ExperimentKind::subspace: return "subspace";
        case ExperimentKind::linearity: return "linearity";
    }
    return "?";
}

ExperimentKind parse_kind(const std::string& name) {
    for (ExperimentKind k : {ExperimentKind::rates, ExperimentKind::compare,
                             ExperimentKind::slow, ExperimentKind::tangency,
                             ExperimentKind::moments, ExperimentKind::subspace,
                             ExperimentKind::linearity})
        if (name == kind_name(k)) return k;
    throw ConfigError("unknown experiment kind \"" + name +
                      "\" (expected rates, compare, slow, tangency, moments, "
                      "subspace or linearity)");
}

std::vector<std::int64_t> dyadic_ns(int lo_exp, int hi_exp) {
    std::vector<std::int64_t> ns;
    for (int e = lo_exp; e <= hi_exp; ++e) ns.push_back(std::int64_t{1} << e);
    return ns;
}

namespace {

// Which config fields each kind reads (beyond "kind" and "output").
struct FieldSet {
    std::set<std::string> required;
    std::set<std::string> optional;
};

FieldSet fields_for(ExperimentKind kind) {
    const std::set<std::string> domain_keys{"x_min", "x_max", "points"};
    FieldSet fs;
    fs.optional = domain_keys;
    switch (kind) {
        case ExperimentKind::rates:
            fs.required = {"family", "function"};
            fs.optional.insert({"a", "t", "ns"});
            break;
        case ExperimentKind::compare:
            fs.required = {"families", "function"};
            fs.optional.insert({"a", "t", "ns"});
            break;
        case ExperimentKind::slow:
            fs.required = {"rate"};
            fs.optional.insert({"t", "ns"});
            break;
        case ExperimentKind::tangency:
            fs.required = {"family", "function", "t"};
            fs.optional.insert({"a"});
            break;
        case ExperimentKind::moments:
            fs.required = {"family"};
            fs.optional.insert({"a", "t", "kmax"});
            break;
        case ExperimentKind::subspace:
            fs.required = {"family", "function", "rate"};
            fs.optional.insert({"a", "t", "ns"});
            break;
        case ExperimentKind::linearity:
            fs.required = {"family", "function", "function2"};
            fs.optional.insert({"a", "t", "ns", "draws", "seed"});
            break;
    }
    return fs;
}

template <class T>
T get_field(const json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("field \"" + key + "\": " + e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("kind")) throw ConfigError("missing required field \"kind\"");

    ExperimentConfig cfg;
    cfg.kind = parse_kind(get_field<std::string>(j, "kind"));
    const FieldSet fs = fields_for(cfg.kind);

    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key == "kind" || key == "output") continue;
        if (!fs.required.contains(key) && !fs.optional.contains(key))
            throw ConfigError("field \"" + key + "\" is not used by kind \"" +
                              std::string(kind_name(cfg.kind)) + "\"");
    }
    for (const std::string& key : fs.required)
        if (!j.contains(key))
            throw ConfigError("kind \"" + std::string(kind_name(cfg.kind)) +
                              "\" requires field \"" + key + "\"");

    if (j.contains("family")) cfg.family = get_field<std::string>(j, "family");
    if (j.contains("families")) cfg.families = get_field<std::vector<std::string>>(j, "families");
    if (j.contains("function")) cfg.function = get_field<std::string>(j, "function");
    if (j.contains("function2")) cfg.function2 = get_field<std::string>(j, "function2");
    if (j.contains("a")) cfg.a = get_field<double>(j, "a");
    if (j.contains("t")) cfg.t_values = get_field<std::vector<double>>(j, "t");
    if (j.contains("ns")) cfg.ns = get_field<std::vector<std::int64_t>>(j, "ns");
    if (j.contains("rate")) cfg.rate = get_field<std::string>(j, "rate");
    if (j.contains("kmax")) cfg.kmax = get_field<int>(j, "kmax");
    if (j.contains("draws")) cfg.draws = get_field<int>(j, "draws");
    if (j.contains("seed")) cfg.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("output")) cfg.output = get_field<std::string>(j, "output");

    const bool has_domain = j.contains("x_min") || j.contains("x_max") || j.contains("points");
    if (has_domain) {
        if (!(j.contains("x_min") && j.contains("x_max") && j.contains("points")))
            throw ConfigError("fields \"x_min\", \"x_max\", \"points\" must be given together");
        cfg.domain = SamplingDomain{get_field<double>(j, "x_min"),
                                    get_field<double>(j, "x_max"),
                                    get_field<int>(j, "points")};
    }

    if (cfg.ns.empty()) cfg.ns = dyadic_ns();

    // Cross-field validation.
    if (cfg.t_values.empty()) throw ConfigError("field \"t\" must be non-empty");
    for (double t : cfg.t_values)
        if (!(t > 0.0)) throw ConfigError("field \"t\": values must be > 0");
    if (!std::is_sorted(cfg.ns.begin(), cfg.ns.end()) ||
        std::adjacent_find(cfg.ns.begin(), cfg.ns.end()) != cfg.ns.end())
        throw ConfigError("field \"ns\" must be strictly ascending");
    for (std::int64_t n : cfg.ns)
        if (n < 1) throw ConfigError("field \"ns\": values must be >= 1");
    if (cfg.kind == ExperimentKind::tangency) {
        for (std::size_t i = 1; i < cfg.t_values.size(); ++i)
            if (!(cfg.t_values[i] < cfg.t_values[i - 1]))
                throw ConfigError("field \"t\": tangency needs strictly decreasing values");
    }
    if (cfg.kind == ExperimentKind::compare && cfg.families.size() < 2)
        throw ConfigError("field \"families\" needs at least two entries");
    if (cfg.kind == ExperimentKind::moments && cfg.kmax < 2)
        throw ConfigError("field \"kmax\" must be >= 2");
    if (cfg.kind == ExperimentKind::linearity && cfg.draws < 1)
        throw ConfigError("field \"draws\" must be >= 1");
    if (cfg.domain) {
        if (!(cfg.domain->x_min < cfg.domain->x_max))
            throw ConfigError("field \"x_min\" must be < \"x_max\"");
        if (cfg.domain->points < 2) throw ConfigError("field \"points\" must be >= 2");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    const FieldSet fs = fields_for(cfg.kind);
    auto used = [&](const std::string& key) {
        return fs.required.contains(key) || fs.optional.contains(key);
    };
    json j;
    j["kind"] = kind_name(cfg.kind);
    j["output"] = cfg.output;
    if (used("family")) j["family"] = cfg.family;
    if (used("families")) j["families"] = cfg.families;
    if (used("function")) j["function"] = cfg.function;
    if (used("function2")) j["function2"] = cfg.function2;
    if (used("a")) j["a"] = cfg.a;
    if (used("t")) j["t"] = cfg.t_values;
    if (used("ns")) j["ns"] = cfg.ns;
    if (used("rate")) j["rate"] = cfg.rate;
    if (used("kmax")) j["kmax"] = cfg.kmax;
    if (used("draws")) j["draws"] = cfg.draws;
    if (used("seed")) j["seed"] = cfg.seed;
    if (cfg.domain) {
        j["x_min"] = cfg.domain->x_min;
        j["x_max"] = cfg.domain->x_max;
        j["points"] = cfg.domain->points;
    }
    return j.dump(2) + "\n";
}

ExperimentConfig template_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.ns = dyadic_ns();
    switch (kind) {
        case ExperimentKind::rates:
            cfg.family = "heat_G";
            cfg.function = "sine:1";
            cfg.output = "rates_heat_G";
            break;
        case ExperimentKind::compare:
            cfg.families = {"heat_G", "heat_S"};
            cfg.function = "sine:1";
            cfg.output = "compare_heat";
            break;
        case ExperimentKind::slow:
            cfg.rate = "invlog";
            cfg.output = "slow_invlog";
            break;
        case ExperimentKind::tangency:
            cfg.family = "heat_G";
            cfg.function = "sine:1";
            cfg.t_values = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
            cfg.output = "tangency_heat_G";
            break;
        case ExperimentKind::moments:
            cfg.family = "heat_S";
            cfg.kmax = 8;
            cfg.output = "moments_heat_S";
            break;
        case ExperimentKind::subspace:
            cfg.family = "quadratic_shift:1";
            cfg.function = "holder_sine:0.5";
            cfg.rate = "pow:0.5";
            // Hölder probes want a grid point exactly on the cusp x = -t.
            cfg.domain = SamplingDomain{-1.0, -1.0 + std::numbers::pi, 2001};
            cfg.output = "subspace_holder";
            break;
        case ExperimentKind::linearity:
            cfg.family = "heat_G";
            cfg.function = "sine:1";
            cfg.function2 = "gaussian:1";
            cfg.ns = dyadic_ns(4, 6);
            cfg.output = "linearity_heat_G";
            break;
    }
    return cfg;
}

}  // namespace chernoff_lab
