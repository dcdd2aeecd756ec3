#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "wishart/covariance.hpp"

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct ProcResult {
    int exit_code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Golden runs drive the installed binary end to end.
ProcResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() / ("wcov_out_" + std::to_string(counter));
    const fs::path err = fs::temp_directory_path() / ("wcov_err_" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(WISHARTCOV_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    ProcResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return result;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::trunc);
    out << text;
    return p;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

const char* kExample1Config = R"({
  "scale": {"L": 8},
  "field": {"beta": 1},
  "process": {"family": "gaussian_ou", "rate": 0.6931471805599453},
  "times": [0.0, 1.0],
  "observables": [
    {"row_offset": 0.0, "col_offset": 0.0, "mu": 4.0, "nu": 2.0, "power": 1, "time_index": 0},
    {"row_offset": 0.0, "col_offset": 0.0, "mu": 1.0, "nu": 1.0, "power": 1, "time_index": 1}
  ],
  "mc": {"replicas": 2000, "seed": 11, "workers": 2, "batch_size": 40}
})";

const char* kExample2Config = R"({
  "scale": {"L": 10},
  "field": {"beta": 1},
  "process": {"family": "gaussian_ou", "rate": 0.6931471805599453},
  "times": [0.0, 1.0],
  "observables": [
    {"row_offset": 0.0, "col_offset": 0.0, "mu": 5.0, "nu": 2.0, "power": 2, "time_index": 0},
    {"row_offset": 0.0, "col_offset": 0.0, "mu": 3.0, "nu": 1.0, "power": 2, "time_index": 1}
  ]
})";

}  // namespace

TEST_CASE("theory: worked example values through the CLI") {
    const auto cfg1 = write_config("cli_ex1.json", kExample1Config);
    const auto res1 = run_cli("theory " + cfg1.string());
    CHECK(res1.exit_code == 0);
    const auto rows = parse_csv(res1.out);
    REQUIRE(rows.size() == 4);  // header + (0,0) (0,1) (1,1)
    CHECK(rows[0] == std::vector<std::string>{"i", "j", "exact"});
    CHECK(std::stod(rows[2][2]) == doctest::Approx(0.5).epsilon(1e-12));

    const auto cfg2 = write_config("cli_ex2.json", kExample2Config);
    const auto res2 = run_cli("theory " + cfg2.string());
    CHECK(res2.exit_code == 0);
    const auto rows2 = parse_csv(res2.out);
    CHECK(std::stod(rows2[2][2]) == doctest::Approx(186.0).epsilon(1e-12));
}

TEST_CASE("theory --with-quadrature reports small discrepancies") {
    const auto cfg = write_config("cli_ex1_quad.json", kExample1Config);
    const auto res = run_cli("theory " + cfg.string() + " --with-quadrature");
    CHECK(res.exit_code == 0);
    const auto rows = parse_csv(res.out);
    CHECK(rows[0] ==
          std::vector<std::string>{"i", "j", "exact", "quadrature", "abs_discrepancy"});
    for (std::size_t r = 1; r < rows.size(); ++r)
        CHECK(std::stod(rows[r][4]) <= 1e-6);
}

TEST_CASE("config errors exit with code 2 and name the key") {
    const auto bogus = write_config("cli_bogus.json", R"({"scale": {"L": 8}, "bogus": 1})");
    const auto res = run_cli("theory " + bogus.string());
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("bogus") != std::string::npos);

    const auto inner = write_config("cli_inner.json", R"({
      "scale": {"L": 8}, "field": {"beta": 1}, "process": {"family": "frozen"},
      "times": [0.0],
      "observables": [{"mu": 1.0, "nu": 1.0, "power": 1, "time_index": 0, "oops": 3}]
    })");
    const auto res2 = run_cli("theory " + inner.string());
    CHECK(res2.exit_code == 2);
    CHECK(res2.err.find("observables[0].oops") != std::string::npos);

    const auto broken = write_config("cli_broken.json", "{\n  \"scale\": {\n");
    const auto res3 = run_cli("theory " + broken.string());
    CHECK(res3.exit_code == 2);
    CHECK(res3.err.find("line") != std::string::npos);
}

TEST_CASE("compare: schema, exit codes and threshold") {
    const auto cfg = write_config("cli_cmp.json", kExample1Config);
    const auto res = run_cli("compare " + cfg.string());
    CHECK(res.exit_code == 0);
    const auto rows = parse_csv(res.out);
    CHECK(rows[0] == std::vector<std::string>{"i", "j", "theory", "mc", "se", "z", "rel_err"});
    REQUIRE(rows.size() == 4);

    // an impossible threshold must flip the exit code to 1
    const auto strict = run_cli("compare " + cfg.string() + " --z-threshold 0");
    CHECK(strict.exit_code == 1);
}

TEST_CASE("simulate: deterministic CSV with diagnostics on diagonal rows") {
    const auto cfg = write_config("cli_sim.json", kExample1Config);
    const auto a = run_cli("simulate " + cfg.string());
    const auto b = run_cli("simulate " + cfg.string() + " --workers 1");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);  // bit-identical report for any worker count

    const auto rows = parse_csv(a.out);
    CHECK(rows[0] ==
          std::vector<std::string>{"i", "j", "cov", "se", "replicas", "skew_z", "kurt_z"});
    REQUIRE(rows.size() == 4);
    CHECK(!rows[1][5].empty());  // (0,0) has diagnostics
    CHECK(rows[2][5].empty());   // (0,1) does not
    CHECK(rows[1][4] == "2000");
}

TEST_CASE("validate: frozen beta=2 passes and reports the 1+2/beta target") {
    const auto cfg = write_config("cli_val.json", R"({
      "scale": {"L": 4}, "field": {"beta": 2}, "process": {"family": "frozen"},
      "times": [0.0, 1.0],
      "observables": [{"mu": 1.0, "nu": 1.0, "power": 1, "time_index": 0}],
      "mc": {"replicas": 20000, "seed": 5}
    })");
    const auto res = run_cli("validate " + cfg.string());
    CHECK(res.exit_code == 0);
    const auto rows = parse_csv(res.out);
    CHECK(rows[0] == std::vector<std::string>{"check", "time_s", "time_t", "estimate",
                                              "target", "se", "z", "pass"});
    bool saw_fourth = false;
    for (const auto& row : rows)
        if (row[0] == "E |Z|^4") {
            saw_fourth = true;
            CHECK(std::stod(row[4]) == doctest::Approx(2.0));
            CHECK(row[7] == "true");
        }
    CHECK(saw_fourth);
}

TEST_CASE("JSON format and --out") {
    const auto cfg = write_config("cli_json.json", kExample1Config);
    const fs::path out = fs::temp_directory_path() / "cli_json_report.json";
    const auto res = run_cli("theory " + cfg.string() + " --format json --out " + out.string());
    CHECK(res.exit_code == 0);
    const json doc = json::parse(slurp(out));
    CHECK(doc.at("command") == "theory");
    bool found = false;
    for (const auto& e : doc.at("entries"))
        if (e.at("i") == 0 && e.at("j") == 1) {
            CHECK(e.at("exact").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
            found = true;
        }
    CHECK(found);
    fs::remove(out);
}

TEST_CASE("dump-effective-config round-trips hash-equal") {
    const auto cfg = write_config("cli_dump.json", kExample1Config);
    const auto dump = run_cli("theory " + cfg.string() + " --dump-effective-config");
    CHECK(dump.exit_code == 0);

    const auto redumped_path = write_config("cli_dump2.json", dump.out);
    const auto redump = run_cli("theory " + redumped_path.string() + " --dump-effective-config");
    CHECK(redump.exit_code == 0);
    CHECK(dump.out == redump.out);

    // hash equality of the two effective experiments, in process
    const auto a = wishart::cli::parse_config_text(slurp(cfg), "a");
    const auto b = wishart::cli::parse_config_text(dump.out, "b");
    CHECK(wishart::cli::effective_hash(a) == wishart::cli::effective_hash(b));
}

TEST_CASE("17-significant-digit serialization round-trips the exact value") {
    const auto cfg = write_config("cli_digits.json", kExample2Config);
    const auto res = run_cli("theory " + cfg.string());
    REQUIRE(res.exit_code == 0);
    const auto rows = parse_csv(res.out);

    wishart::ExperimentGeometry geom =
        wishart::cli::parse_config_text(kExample2Config, "inline").geometry;
    const auto expected = wishart::covariance_matrix(geom);
    CHECK(std::stod(rows[2][2]) == expected(0, 1));  // exact double round-trip
}

TEST_CASE("rounding warnings are surfaced on stderr") {
    const auto cfg = write_config("cli_warn.json", R"({
      "scale": {"L": 3}, "field": {"beta": 1}, "process": {"family": "frozen"},
      "times": [0.0],
      "observables": [{"mu": 1.1, "nu": 1.0, "power": 1, "time_index": 0}]
    })");
    const auto res = run_cli("theory " + cfg.string());
    CHECK(res.exit_code == 0);
    CHECK(res.err.find("rounded") != std::string::npos);
}
