#include "hhsv/config.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unistd.h>

namespace hhsv {

using nlohmann::json;

namespace {

void reject_unknown(const json& section, const char* name, const std::set<std::string>& known) {
    if (!section.is_object()) throw ConfigError(std::string("section '") + name + "' must be an object");
    for (const auto& [key, value] : section.items()) {
        if (!known.count(key)) {
            throw ConfigError(std::string("unknown field '") + key + "' in section '" + name + "'");
        }
    }
}

void read_number(const json& section, const char* key, double& out) {
    if (!section.contains(key)) return;
    const auto& v = section.at(key);
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    out = v.get<double>();
}

json law_to_json(const JumpLaw& law) {
    return std::visit(
        [](const auto& l) -> json {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialJumps>) {
                return {{"type", "exponential"}, {"rate", l.rate}};
            } else if constexpr (std::is_same_v<T, GammaJumps>) {
                return {{"type", "gamma"}, {"shape", l.shape}, {"rate", l.rate}};
            } else {
                return {{"type", "constant"}, {"value", l.value}};
            }
        },
        law);
}

JumpLaw law_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ConfigError("jump_law needs a string 'type'");
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "exponential") {
        reject_unknown(j, "jump_law", {"type", "rate"});
        ExponentialJumps e{10.0};
        read_number(j, "rate", e.rate);
        return e;
    }
    if (type == "gamma") {
        reject_unknown(j, "jump_law", {"type", "shape", "rate"});
        GammaJumps g{2.0, 20.0};
        read_number(j, "shape", g.shape);
        read_number(j, "rate", g.rate);
        return g;
    }
    if (type == "constant") {
        reject_unknown(j, "jump_law", {"type", "value"});
        ConstantJumps c{0.1};
        read_number(j, "value", c.value);
        return c;
    }
    throw ConfigError("unknown jump_law type '" + type + "'");
}

std::string hex64(std::uint64_t x) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << x;
    return os.str();
}

}  // namespace

json bundle_to_json(const ModelBundle& bundle) {
    const auto& m = bundle.model;
    json mu = json::array();
    for (const auto& b : m.mu.breakpoints()) mu.push_back({{"t_from", b.t_from}, {"value", b.value}});
    return {
        {"model",
         {{"s0", m.s0}, {"v0", m.v0}, {"kappa", m.kappa}, {"vbar", m.vbar}, {"sigma", m.sigma},
          {"eta", m.eta}, {"rho", m.rho}, {"r", m.r}, {"horizon", m.horizon}, {"mu", mu}}},
        {"hawkes",
         {{"lambda0", bundle.hawkes.lambda0}, {"alpha", bundle.hawkes.alpha}, {"beta", bundle.hawkes.beta}}},
        {"jump_law", law_to_json(bundle.law)},
    };
}

ModelBundle bundle_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j, "<root>", {"model", "hawkes", "jump_law"});
    ModelBundle b = default_bundle();
    if (j.contains("model")) {
        const auto& m = j.at("model");
        reject_unknown(m, "model",
                       {"s0", "v0", "kappa", "vbar", "sigma", "eta", "rho", "r", "horizon", "mu"});
        read_number(m, "s0", b.model.s0);
        read_number(m, "v0", b.model.v0);
        read_number(m, "kappa", b.model.kappa);
        read_number(m, "vbar", b.model.vbar);
        read_number(m, "sigma", b.model.sigma);
        read_number(m, "eta", b.model.eta);
        read_number(m, "rho", b.model.rho);
        read_number(m, "r", b.model.r);
        read_number(m, "horizon", b.model.horizon);
        if (m.contains("mu")) {
            const auto& mu = m.at("mu");
            try {
                if (mu.is_number()) {
                    b.model.mu = DriftSchedule(mu.get<double>());
                } else if (mu.is_array()) {
                    std::vector<DriftSchedule::Breakpoint> points;
                    for (const auto& p : mu) {
                        reject_unknown(p, "mu", {"t_from", "value"});
                        if (!p.contains("t_from") || !p.contains("value")) {
                            throw ConfigError("mu breakpoints need 't_from' and 'value'");
                        }
                        points.push_back({p.at("t_from").get<double>(), p.at("value").get<double>()});
                    }
                    b.model.mu = DriftSchedule(std::move(points));
                } else {
                    throw ConfigError("mu must be a number or an array of breakpoints");
                }
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("mu: ") + e.what());
            } catch (const json::exception& e) {
                throw ConfigError(std::string("mu: ") + e.what());
            }
        }
    }
    if (j.contains("hawkes")) {
        const auto& h = j.at("hawkes");
        reject_unknown(h, "hawkes", {"lambda0", "alpha", "beta"});
        read_number(h, "lambda0", b.hawkes.lambda0);
        read_number(h, "alpha", b.hawkes.alpha);
        read_number(h, "beta", b.hawkes.beta);
    }
    if (j.contains("jump_law")) b.law = law_from_json(j.at("jump_law"));
    return b;
}

ModelBundle load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
    return validate(bundle_from_json(j));
}

json report_to_json(const McReport& r) {
    return {{"name", r.name},
            {"estimate", r.estimate},
            {"std_error", r.std_error},
            {"target", r.target},
            {"mode", to_string(r.mode)},
            {"verdict", to_string(r.verdict)},
            {"pass", r.pass},
            {"n_paths", r.n_paths}};
}

json suite_to_json(const SuiteResult& result) {
    json checks = json::array();
    for (const auto& e : result.entries) {
        json item = report_to_json(e.report);
        item["group"] = e.group;
        item["config_hash"] = hex64(e.config_hash);
        checks.push_back(std::move(item));
    }
    return {{"suite", result.suite},
            {"seed", result.seed},
            {"c_l", result.c_l},
            {"c_s", result.c_s},
            {"passed", result.passed()},
            {"checks", checks}};
}

std::string suite_table(const SuiteResult& result) {
    std::ostringstream os;
    os << "suite " << result.suite << "  seed " << result.seed << "  c_s " << result.c_s
       << "  c_l " << result.c_l << "\n";
    os << std::left << std::setw(15) << "group" << std::setw(34) << "check" << std::right
       << std::setw(14) << "estimate" << std::setw(12) << "std_error" << std::setw(14) << "target"
       << std::setw(10) << "mode" << std::setw(14) << "verdict" << std::setw(9) << "time_s"
       << "\n";
    for (const auto& e : result.entries) {
        const auto& r = e.report;
        os << std::left << std::setw(15) << e.group << std::setw(34) << r.name << std::right
           << std::setprecision(6) << std::setw(14) << r.estimate << std::setw(12) << r.std_error
           << std::setw(14) << r.target << std::setw(10) << to_string(r.mode) << std::setw(14)
           << to_string(r.verdict) << std::setw(9) << std::setprecision(3) << r.wall_time_s
           << "\n";
    }
    os << (result.passed() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::filesystem::create_directories(dir);
    const auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace hhsv
