#include "report.hpp"

#include <cstdio>

namespace wishart::cli {

using nlohmann::json;

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string opt_field(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(); }

}  // namespace

void write_theory_report(std::ostream& out, OutputFormat format,
                         const std::vector<TheoryRow>& rows) {
    const bool with_quad = !rows.empty() && rows.front().quadrature.has_value();
    if (format == OutputFormat::Csv) {
        out << (with_quad ? "i,j,exact,quadrature,abs_discrepancy\n" : "i,j,exact\n");
        for (const auto& r : rows) {
            out << r.i << ',' << r.j << ',' << format_number(r.exact);
            if (with_quad)
                out << ',' << format_number(*r.quadrature) << ','
                    << format_number(std::abs(r.exact - *r.quadrature));
            out << '\n';
        }
        return;
    }
    json doc;
    doc["command"] = "theory";
    json entries = json::array();
    for (const auto& r : rows) {
        json e = {{"i", r.i}, {"j", r.j}, {"exact", r.exact}};
        if (r.quadrature) {
            e["quadrature"] = *r.quadrature;
            e["abs_discrepancy"] = std::abs(r.exact - *r.quadrature);
        }
        entries.push_back(e);
    }
    doc["entries"] = entries;
    out << doc.dump(2) << '\n';
}

void write_simulate_report(std::ostream& out, OutputFormat format,
                           const std::vector<SimulateRow>& rows) {
    if (format == OutputFormat::Csv) {
        out << "i,j,cov,se,replicas,skew_z,kurt_z\n";
        for (const auto& r : rows)
            out << r.i << ',' << r.j << ',' << format_number(r.cov) << ','
                << format_number(r.se) << ',' << r.replicas << ',' << opt_field(r.skew_z) << ','
                << opt_field(r.kurt_z) << '\n';
        return;
    }
    json doc;
    doc["command"] = "simulate";
    json entries = json::array();
    for (const auto& r : rows) {
        json e = {{"i", r.i},
                  {"j", r.j},
                  {"cov", r.cov},
                  {"se", r.se},
                  {"replicas", r.replicas}};
        if (r.skew_z) e["skew_z"] = *r.skew_z;
        if (r.kurt_z) e["kurt_z"] = *r.kurt_z;
        entries.push_back(e);
    }
    doc["entries"] = entries;
    out << doc.dump(2) << '\n';
}

void write_compare_report(std::ostream& out, OutputFormat format,
                          const std::vector<CompareRow>& rows, double z_threshold, bool pass) {
    if (format == OutputFormat::Csv) {
        out << "i,j,theory,mc,se,z,rel_err\n";
        for (const auto& r : rows)
            out << r.i << ',' << r.j << ',' << format_number(r.theory) << ','
                << format_number(r.mc) << ',' << format_number(r.se) << ','
                << format_number(r.z) << ',' << opt_field(r.rel_err) << '\n';
        return;
    }
    json doc;
    doc["command"] = "compare";
    doc["z_threshold"] = z_threshold;
    doc["pass"] = pass;
    json entries = json::array();
    for (const auto& r : rows)
        entries.push_back({{"i", r.i},
                           {"j", r.j},
                           {"theory", r.theory},
                           {"mc", r.mc},
                           {"se", r.se},
                           {"z", r.z},
                           {"rel_err", opt_json(r.rel_err)}});
    doc["entries"] = entries;
    out << doc.dump(2) << '\n';
}

void write_validate_report(std::ostream& out, OutputFormat format, const MomentReport& report) {
    if (format == OutputFormat::Csv) {
        out << "check,time_s,time_t,estimate,target,se,z,pass\n";
        for (const auto& c : report.checks)
            out << c.name << ',' << format_number(c.s) << ',' << format_number(c.t) << ','
                << format_number(c.estimate) << ',' << format_number(c.target) << ','
                << format_number(c.se) << ',' << format_number(c.z) << ','
                << (c.pass ? "true" : "false") << '\n';
        return;
    }
    json doc;
    doc["command"] = "validate";
    doc["draws"] = report.draws;
    doc["pass"] = report.all_pass;
    json entries = json::array();
    for (const auto& c : report.checks)
        entries.push_back({{"check", c.name},
                           {"time_s", c.s},
                           {"time_t", c.t},
                           {"estimate", c.estimate},
                           {"target", c.target},
                           {"se", c.se},
                           {"z", c.z},
                           {"pass", c.pass}});
    doc["entries"] = entries;
    out << doc.dump(2) << '\n';
}

}  // namespace wishart::cli
