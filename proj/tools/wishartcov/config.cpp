#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wishart::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ConfigError("config error at " + path + ": " + why);
}

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& known,
                  const std::set<std::string>& required) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items())
        if (!known.count(key)) fail(path + "." + key, "unknown key (strict mode)");
    for (const auto& key : required)
        if (!obj.contains(key)) fail(path, "missing required key '" + key + "'");
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& path, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

std::string line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::string where = e.byte > 0 ? line_of(text, e.byte - 1) : "start of file";
        throw ConfigError("config parse error in " + origin + " (" + where + "): " + e.what());
    }

    ExperimentConfig cfg;
    require_keys(doc, "config",
                 {"scale", "field", "process", "times", "observables", "mc", "quadrature",
                  "output"},
                 {"scale", "field", "process", "times", "observables"});

    {
        const auto& scale = doc.at("scale");
        require_keys(scale, "scale", {"L"}, {"L"});
        const auto L = get_integer(scale, "scale", "L");
        if (L < 1) fail("scale.L", "must be >= 1");
        cfg.geometry.L = L;
    }
    {
        const auto& field = doc.at("field");
        require_keys(field, "field", {"beta"}, {"beta"});
        const auto beta = get_integer(field, "field", "beta");
        if (beta != 1 && beta != 2 && beta != 4) fail("field.beta", "must be 1, 2 or 4");
        cfg.geometry.process.field = scalar_field_from_beta(static_cast<int>(beta));
    }
    {
        const auto& process = doc.at("process");
        require_keys(process, "process", {"family", "rate"}, {"family"});
        const auto family = process.at("family").get<std::string>();
        if (family == "gaussian_ou") {
            cfg.geometry.process.family = ProcessFamily::GaussianOU;
            if (!process.contains("rate")) fail("process", "gaussian_ou needs 'rate'");
            cfg.geometry.process.rate = get_number(process, "process", "rate");
            if (!(cfg.geometry.process.rate > 0.0)) fail("process.rate", "must be > 0");
        } else if (family == "frozen" || family == "independent_refresh") {
            cfg.geometry.process.family = family == "frozen" ? ProcessFamily::Frozen
                                                             : ProcessFamily::IndependentRefresh;
            if (process.contains("rate"))
                fail("process.rate", "only valid for family 'gaussian_ou'");
        } else {
            fail("process.family",
                 "unknown family '" + family +
                     "' (expected gaussian_ou, frozen or independent_refresh)");
        }
    }
    {
        const auto& times = doc.at("times");
        if (!times.is_array() || times.empty()) fail("times", "expected a non-empty array");
        std::vector<double> ts;
        for (const auto& t : times) {
            if (!t.is_number()) fail("times", "expected numbers");
            ts.push_back(t.get<double>());
        }
        try {
            cfg.geometry.grid = TimeGrid(ts);
        } catch (const ContractViolation& e) {
            fail("times", e.what());
        }
    }
    {
        const auto& obs = doc.at("observables");
        if (!obs.is_array() || obs.empty()) fail("observables", "expected a non-empty array");
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const std::string path = "observables[" + std::to_string(i) + "]";
            require_keys(obs[i], path,
                         {"row_offset", "col_offset", "mu", "nu", "power", "time_index"},
                         {"mu", "nu", "power", "time_index"});
            ObservableSpec o;
            o.row_offset = obs[i].contains("row_offset") ? get_number(obs[i], path, "row_offset")
                                                         : 0.0;
            o.col_offset = obs[i].contains("col_offset") ? get_number(obs[i], path, "col_offset")
                                                         : 0.0;
            o.mu = get_number(obs[i], path, "mu");
            o.nu = get_number(obs[i], path, "nu");
            const auto power = get_integer(obs[i], path, "power");
            if (power < 1 || power > 32) fail(path + ".power", "must be in [1, 32]");
            o.power = static_cast<int>(power);
            const auto ti = get_integer(obs[i], path, "time_index");
            if (ti < 0 || static_cast<std::size_t>(ti) >= cfg.geometry.grid.size())
                fail(path + ".time_index", "out of range for 'times'");
            o.time_index = static_cast<std::size_t>(ti);
            cfg.geometry.observables.push_back(o);
        }
    }
    if (doc.contains("mc")) {
        const auto& mc = doc.at("mc");
        require_keys(mc, "mc",
                     {"replicas", "seed", "workers", "batch_size", "checkpoint_path",
                      "checkpoint_every"},
                     {"replicas", "seed"});
        McConfig m;
        const auto replicas = get_integer(mc, "mc", "replicas");
        if (replicas < 2) fail("mc.replicas", "must be >= 2");
        m.replicas = static_cast<std::uint64_t>(replicas);
        m.seed = static_cast<std::uint64_t>(get_integer(mc, "mc", "seed"));
        if (mc.contains("workers")) {
            const auto& w = mc.at("workers");
            if (w.is_string()) {
                if (w.get<std::string>() != "auto")
                    fail("mc.workers", "expected a positive integer or \"auto\"");
                m.workers = 0;
            } else {
                const auto n = get_integer(mc, "mc", "workers");
                if (n < 1) fail("mc.workers", "must be >= 1");
                m.workers = static_cast<unsigned>(n);
            }
        }
        if (mc.contains("batch_size")) {
            const auto b = get_integer(mc, "mc", "batch_size");
            if (b < 1) fail("mc.batch_size", "must be >= 1");
            if (b > replicas) fail("mc.batch_size", "must be <= replicas");
            m.batch_size = static_cast<std::uint64_t>(b);
        }
        if (mc.contains("checkpoint_path"))
            m.checkpoint_path = mc.at("checkpoint_path").get<std::string>();
        if (mc.contains("checkpoint_every")) {
            const auto e = get_integer(mc, "mc", "checkpoint_every");
            if (e < 1) fail("mc.checkpoint_every", "must be >= 1");
            m.checkpoint_every = static_cast<std::uint64_t>(e);
        }
        cfg.mc = m;
    }
    if (doc.contains("quadrature")) {
        const auto& quad = doc.at("quadrature");
        require_keys(quad, "quadrature", {"abs_tol", "max_refinements"}, {});
        if (quad.contains("abs_tol")) {
            cfg.quadrature.abs_tol = get_number(quad, "quadrature", "abs_tol");
            if (!(cfg.quadrature.abs_tol > 0.0)) fail("quadrature.abs_tol", "must be > 0");
        }
        if (quad.contains("max_refinements")) {
            const auto r = get_integer(quad, "quadrature", "max_refinements");
            if (r < 1) fail("quadrature.max_refinements", "must be >= 1");
            cfg.quadrature.max_refinements = static_cast<int>(r);
        }
    }
    if (doc.contains("output")) {
        const auto& output = doc.at("output");
        require_keys(output, "output", {"path", "format"}, {});
        if (output.contains("path")) cfg.output.path = output.at("path").get<std::string>();
        if (output.contains("format")) {
            const auto f = output.at("format").get<std::string>();
            if (f == "csv")
                cfg.output.format = OutputFormat::Csv;
            else if (f == "json")
                cfg.output.format = OutputFormat::Json;
            else
                fail("output.format", "expected 'csv' or 'json'");
        }
    }

    try {
        cfg.geometry.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }

    if (!cfg.geometry.placement_is_integral()) {
        std::ostringstream w;
        w << "warning: some scaled offsets/extents are not integral at L = " << cfg.geometry.L
          << "; dimensions were rounded to the nearest integer";
        cfg.warnings.push_back(w.str());
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

namespace {

json semantic_json(const ExperimentConfig& cfg) {
    const auto& g = cfg.geometry;
    json doc;
    doc["scale"] = {{"L", g.L}};
    doc["field"] = {{"beta", beta_of(g.process.field)}};
    json process;
    switch (g.process.family) {
        case ProcessFamily::GaussianOU:
            process = {{"family", "gaussian_ou"}, {"rate", g.process.rate}};
            break;
        case ProcessFamily::Frozen: process = {{"family", "frozen"}}; break;
        case ProcessFamily::IndependentRefresh:
            process = {{"family", "independent_refresh"}};
            break;
    }
    doc["process"] = process;
    doc["times"] = g.grid.times();
    json obs = json::array();
    for (const auto& o : g.observables)
        obs.push_back({{"row_offset", o.row_offset},
                       {"col_offset", o.col_offset},
                       {"mu", o.mu},
                       {"nu", o.nu},
                       {"power", o.power},
                       {"time_index", o.time_index}});
    doc["observables"] = obs;
    if (cfg.mc) {
        json mc = {{"replicas", cfg.mc->replicas},
                   {"seed", cfg.mc->seed},
                   {"batch_size", cfg.mc->batch_size},
                   {"checkpoint_every", cfg.mc->checkpoint_every}};
        if (!cfg.mc->checkpoint_path.empty()) mc["checkpoint_path"] = cfg.mc->checkpoint_path;
        doc["mc"] = mc;
    }
    doc["quadrature"] = {{"abs_tol", cfg.quadrature.abs_tol},
                         {"max_refinements", cfg.quadrature.max_refinements}};
    return doc;
}

}  // namespace

json effective_config_json(const ExperimentConfig& cfg) {
    json doc = semantic_json(cfg);
    if (cfg.mc) {
        doc["mc"]["workers"] = cfg.mc->workers == 0 ? json("auto") : json(cfg.mc->workers);
        if (cfg.mc->checkpoint_path.empty()) doc["mc"].erase("checkpoint_path");
    }
    doc["output"] = {{"path", cfg.output.path},
                     {"format", cfg.output.format == OutputFormat::Csv ? "csv" : "json"}};
    return doc;
}

std::uint64_t effective_hash(const ExperimentConfig& cfg) {
    return fnv1a64(semantic_json(cfg).dump());
}

}  // namespace wishart::cli
