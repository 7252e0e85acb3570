#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "piqlab/cli/cli.hpp"
#include "piqlab/dynamics/projective.hpp"
#include "piqlab/engine/piq.hpp"
#include "piqlab/lattes/lattes.hpp"
#include "test_support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace piqlab;
using namespace piqlab::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = PIQ_LAB_SOURCE_DIR;

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig bundled(const std::string& name) { return parse_config(slurp(kSource / "configs" / (name + ".json"))); }

std::vector<fs::path> bundled_paths()
{
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(kSource / "configs")) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string config_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

// Subset of JSON Schema used by the published report schema: type, const,
// enum, required, properties, additionalProperties, items, allOf, if/then, $ref.
bool type_matches(const Json& v, const std::string& t)
{
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

void check_schema(const Json& s, const Json& root, const Json& v, const std::string& path,
                  std::vector<std::string>& errs)
{
    if (s.contains("$ref")) {
        std::string ref = s["$ref"];
        REQUIRE(ref.rfind("#/$defs/", 0) == 0);
        check_schema(root["$defs"][ref.substr(8)], root, v, path, errs);
    }
    if (s.contains("type")) {
        bool ok = false;
        if (s["type"].is_array()) {
            for (const auto& t : s["type"]) ok = ok || type_matches(v, t);
        } else {
            ok = type_matches(v, s["type"]);
        }
        if (!ok) errs.push_back(path + ": wrong type");
    }
    if (s.contains("const") && v != s["const"]) errs.push_back(path + ": const mismatch");
    if (s.contains("enum")) {
        bool ok = false;
        for (const auto& e : s["enum"]) ok = ok || v == e;
        if (!ok) errs.push_back(path + ": not in enum");
    }
    if (v.is_object()) {
        if (s.contains("required")) {
            for (const auto& k : s["required"]) {
                if (!v.contains(k.get<std::string>())) errs.push_back(path + "." + k.get<std::string>() + ": missing");
            }
        }
        if (s.contains("properties")) {
            for (const auto& item : v.items()) {
                if (s["properties"].contains(item.key())) {
                    check_schema(s["properties"][item.key()], root, item.value(), path + "." + item.key(), errs);
                } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
                    errs.push_back(path + "." + item.key() + ": not allowed");
                }
            }
        }
    }
    if (v.is_array() && s.contains("items")) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            check_schema(s["items"], root, v[k], path + "[" + std::to_string(k) + "]", errs);
        }
    }
    if (s.contains("allOf")) {
        for (const auto& sub : s["allOf"]) check_schema(sub, root, v, path, errs);
    }
    if (s.contains("if")) {
        std::vector<std::string> probe;
        check_schema(s["if"], root, v, path, probe);
        if (probe.empty() && s.contains("then")) check_schema(s["then"], root, v, path, errs);
    }
}

std::vector<std::string> schema_errors(const Json& report)
{
    static const Json schema = Json::parse(slurp(kSource / "docs" / "report.schema.json"));
    std::vector<std::string> errs;
    check_schema(schema, schema, report, "report", errs);
    return errs;
}

// hand-rolled generator of valid configs
Json random_config(testing::Gen& gen)
{
    const auto& cmds = commands();
    Json j;
    j["command"] = cmds[static_cast<std::size_t>(gen.range(0, static_cast<long>(cmds.size()) - 1))];
    const char* maps[] = {"z^2", "z^3 - 3*z", "(z^2+1)/(2*z)", "z^2 + i", "-z"};
    if (gen.coin()) j["f"] = maps[gen.range(0, 4)];
    if (gen.coin()) j["g"] = Json{{"F0", Json::array({"0", "0", "1"})}, {"F1", Json::array({1})}};
    if (gen.coin()) j["field"] = gen.coin() ? "Q(i)" : "Q";
    if (gen.coin()) {
        switch (gen.range(0, 3)) {
        case 0: j["subscheme"] = "diagonal"; break;
        case 1: j["subscheme"] = Json{{"kind", "point"}, {"P", "1"}, {"Q", "inf"}}; break;
        case 2: j["subscheme"] = Json{{"kind", "lines-through-infinity"}}; break;
        default:
            j["subscheme"] = Json{{"kind", "curve"}, {"degree", {1, 1}}, {"terms", Json::array({Json::array({1, 1, "2/3"})})}};
        }
    }
    const char* bound_keys[] = {"H", "S_max", "precision", "truncation", "grid_depth", "n_max"};
    Json b = Json::object();
    for (const char* k : bound_keys) {
        if (gen.coin()) b[k] = gen.range(1, 100);
    }
    if (!b.empty()) j["bounds"] = b;
    if (gen.coin()) j["levels"] = Json::array({gen.range(0, 4), gen.range(0, 4)});
    if (gen.coin()) j["primes"] = Json::array({3, 7});
    if (gen.coin()) j["dimensions"] = Json::array({gen.range(1, 4)});
    if (gen.coin()) j["seeds"] = Json::array({"1+i", "(1:2)", "inf"});
    if (gen.coin()) j["seed_height"] = gen.range(1, 10);
    if (gen.coin()) j["max_witnesses"] = gen.range(1, 3);
    if (gen.coin()) j["keep_per_level"] = gen.range(0, 9);
    if (gen.coin()) j["random_points"] = gen.range(0, 9);
    if (gen.coin()) j["germ"] = Json{{"p", 5}, {"coefficients", Json::array({"0", "5", "1"})}};
    if (gen.coin()) j["matrix"] = Json::array({Json::array({gen.range(-3, 3), 1}), Json::array({0, "1/2"})});
    if (gen.coin()) j["output"] = "out-" + std::to_string(gen.range(0, 99)) + ".json";
    if (gen.coin()) j["seed"] = static_cast<std::uint64_t>(gen.range(0, 1L << 40));
    return j;
}

int run_exe(const std::string& args)
{
    std::string cmd = std::string(PIQ_LAB_EXE) + " " + args;
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("piqlab_cli_" + std::to_string(::getpid())))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

} // namespace

TEST_CASE("bundled configs parse and round-trip")
{
    auto paths = bundled_paths();
    CHECK(paths.size() == commands().size());
    std::set<std::string> seen;
    for (const auto& p : paths) {
        ExperimentConfig c = parse_config(slurp(p));
        seen.insert(c.command);
        CHECK(config_from_json(to_json(c)) == c);
        CHECK(to_json(config_from_json(to_json(c))).dump() == to_json(c).dump());
    }
    CHECK(seen.size() == commands().size());
}

TEST_CASE("random configs round-trip")
{
    testing::Gen gen(31);
    for (int trial = 0; trial < 300; ++trial) {
        Json j = random_config(gen);
        ExperimentConfig c = config_from_json(j);
        CHECK(config_from_json(Json::parse(to_json(c).dump())) == c);
        // the canonical form keeps every field the generator produced
        CHECK(to_json(c).size() == j.size());
    }
}

TEST_CASE("config errors name the line or field")
{
    CHECK(config_error("{\"command\": \"piq-run\",\n  \"f\": \"z^2\",,\n}").rfind("line 2, column 14", 0) == 0);
    CHECK(config_error("{\"command\": \"piq-run\", \"bounds\": {\"H\": 0}}").rfind("bounds.H:", 0) == 0);
    CHECK(config_error("{\"command\": \"piq-run\", \"bounds\": {\"S_max\": -2}}").rfind("bounds.S_max:", 0) == 0);
    CHECK(config_error("{\"command\": \"piq-run\", \"colour\": 1}").rfind("colour: unknown field", 0) == 0);
    CHECK(config_error("{\"command\": \"fly\"}").rfind("command:", 0) == 0);
    CHECK(config_error("{\"f\": \"z\"}").rfind("command:", 0) == 0);
    CHECK(config_error("{\"command\": \"piq-run\", \"f\": \"z^^2\"}").rfind("f:", 0) == 0);
    CHECK(config_error("{\"command\": \"piq-run\", \"subscheme\": {\"kind\": \"cone\"}}").rfind("subscheme.kind:", 0) ==
          0);
    CHECK(config_error("{\"command\": \"piq-run\", \"subscheme\": {\"kind\": \"point\", \"P\": \"1\"}}")
              .rfind("subscheme.Q:", 0) == 0);
    CHECK(config_error("{\"command\": \"modp-report\", \"primes\": [3, 9]}").rfind("primes[1]:", 0) == 0);
    CHECK(config_error("{\"command\": \"lattes-witness\", \"seeds\": [\"1\", \"(0:0)\"]}").rfind("seeds[1]:", 0) == 0);
    CHECK(config_error("{\"command\": \"piq-run\", \"seed\": -1}").rfind("seed:", 0) == 0);
    // structured blocks are checked when the command reads them
    ExperimentConfig c = parse_config("{\"command\": \"gauss-norm\", \"series\": [{\"p\": 4, \"nvars\": 1, \"terms\": []}]}");
    try {
        run(c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("series[0].p:", 0) == 0);
    }
    CHECK_THROWS_AS(run(parse_config("{\"command\": \"piq-run\"}")), ConfigError);
}

TEST_CASE("piq-run example: z^2 on the diagonal stabilizes at s0 = 1")
{
    Json r = run(bundled("piq_z2_diagonal"));
    const Json& res = r["results"];
    CHECK(res["s0"] == 1);
    CHECK(res["H"] == 50);
    CHECK(res["S_max"] == 12);
    // oracle: x^2 = y^2 with x != y forces y = -x, and 0 and inf are their own negatives
    long n = res["points_per_coordinate"];
    CHECK(n == static_cast<long>(dynamics::enumerate_points(50).size()));
    CHECK(res["tails"][0]["count"] == n - 2);
    CHECK(res["inside"] == n);
    for (std::size_t s = 1; s < res["tails"].size(); ++s) CHECK(res["tails"][s]["count"] == 0);
    CHECK(res["never"] == n * n - n - (n - 2));
    for (const auto& pair : res["tails"][0]["sample"]) {
        auto x = dynamics::parse_point(pair[0]).value();
        auto y = dynamics::parse_point(pair[1]).value();
        REQUIRE(x.has_value());
        REQUIRE(y.has_value());
        CHECK(*x == -*y);
    }
}

TEST_CASE("gauss-norm example: bundled series reproduce the norm, ord and factor bound examples")
{
    Json res = run(bundled("gauss_norm_examples"))["results"]["series"];
    REQUIRE(res.size() == 6);
    // 5z + z^2 at r = 1/5: both terms attain 5^-2
    CHECK(res[0]["norm_exponent"] == "2");
    CHECK(res[0]["ord"] == 2);
    // unit constant 7
    CHECK(res[1]["norm_exponent"] == "0");
    CHECK(res[1]["ord"] == 0);
    // 25 + 5z + z^3 at r = 1/25: the constant term attains 5^-2
    CHECK(res[2]["norm_exponent"] == "2");
    CHECK(res[2]["ord"] == 0);
    // 5z + z^2 at r = 1/25: the linear term alone attains 5^-3
    CHECK(res[3]["norm_exponent"] == "3");
    CHECK(res[3]["ord"] == 1);
    // z^2 + 5z = z(z + 5) at r = 1: two factors
    CHECK(res[4]["prime_factor_bound"] == 2);
    // (z - 1)(z - 2)(z - 3) over Q_7 at r = 1
    CHECK(res[5]["prime_factor_bound"] == 3);
}

TEST_CASE("ord-scan example: staircase sets")
{
    Json res = run(bundled("ord_scan_examples"))["results"]["series"];
    REQUIRE(res.size() == 3);
    CHECK(res[0]["staircase"] == Json::array({Json::array({1}), Json::array({2})}));
    CHECK(res[0]["ord_along_diagonal"] == Json::array({2, 1, 1, 1, 1}));
    CHECK(res[1]["staircase"] == Json::array({Json::array({0})}));
    CHECK(res[2]["staircase"] == Json::array({Json::array({1, 1}), Json::array({2, 0})}));
    for (const auto& row : res) {
        // sizes are non-decreasing in the grid depth
        for (std::size_t k = 1; k < row["staircase_sizes"].size(); ++k) {
            CHECK(row["staircase_sizes"][k] >= row["staircase_sizes"][k - 1]);
        }
    }
}

TEST_CASE("lattes-witness example: a witness at every level 0..4")
{
    ExperimentConfig c = bundled("lattes_witness");
    Json res = run(c, {2, false})["results"];
    REQUIRE(res["levels"].size() == 5);
    auto pair = lattes::build_lattes_pair();
    auto sys = lattes::lattes_system(pair);
    for (const auto& level : res["levels"]) {
        long s = level["s"];
        REQUIRE(level["witnesses"].size() >= 1);
        for (const auto& w : level["witnesses"]) {
            CHECK(w["entry_time"] == s + 1);
            CHECK(dynamics::parse_point(w["seed"]).height() <= 10);
            if (s <= 1) {
                engine::PointPair x{dynamics::parse_point(w["x"][0]), dynamics::parse_point(w["x"][1])};
                CHECK(engine::first_entry_time(sys, engine::Subscheme::diagonal(), x, static_cast<int>(s) + 2) == s + 1);
            }
        }
    }
}

TEST_CASE("descend-sym2 example commutes and membership agrees")
{
    Json res = run(bundled("descend_sym2"))["results"];
    CHECK(res["all_commute"] == true);
    CHECK(res["membership_agrees"] == true);
    CHECK(res["points"].size() == 14);
    // sqrt(2) is a root of z^2 - 2 and its conjugate pair descends to x0^2 - 2 x1^2
    CHECK(res["points"][0]["on_Y"] == true);
    CHECK(res["points"][0]["descend_x"] == Json::array({"1", "0", "-2"}));
}

TEST_CASE("reports are deterministic and independent of the job count")
{
    for (const auto& p : bundled_paths()) {
        ExperimentConfig c = parse_config(slurp(p));
        if (c.command == "lattes-witness") c.levels = {0, 1};
        std::string a = run(c, {1, false}).dump();
        std::string b = run(c, {3, false}).dump();
        CHECK_MESSAGE(a == b, p.filename().string());
        CHECK_FALSE(run(c, {1, true}).dump() == a);
    }
}

TEST_CASE("reports validate against the published schema")
{
    for (const auto& p : bundled_paths()) {
        ExperimentConfig c = parse_config(slurp(p));
        if (c.command == "lattes-witness") c.levels = {0};
        Json r = run(c, {1, true});
        CHECK_MESSAGE(validate_report(r).empty(), p.filename().string());
        auto errs = schema_errors(r);
        std::string what = p.filename().string() + (errs.empty() ? std::string() : ": " + errs[0]);
        CHECK_MESSAGE(errs.empty(), what);
    }
    Json r = run(bundled("cyclo_split"));
    Json bad = r;
    bad["schema_version"] = "2";
    CHECK_FALSE(validate_report(bad).empty());
    CHECK_FALSE(schema_errors(bad).empty());
    bad = r;
    bad["results"].erase("n0");
    CHECK_FALSE(validate_report(bad).empty());
    CHECK_FALSE(schema_errors(bad).empty());
    bad = r;
    bad["extra"] = 1;
    CHECK_FALSE(validate_report(bad).empty());
    CHECK_FALSE(schema_errors(bad).empty());
    bad = r;
    bad["config"]["command"] = "piq-run";
    CHECK_FALSE(validate_report(bad).empty());
}

TEST_CASE("exit codes map error kinds")
{
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(InvarianceViolated("x")) == 3);
    CHECK(exit_code_for(ExtensionRequired("x")) == 4);
    CHECK(exit_code_for(PrecisionLoss("x")) == 5);
    CHECK(exit_code_for(SearchExhausted("x")) == 6);
    CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("executable: outputs, flags and exit codes")
{
    TempDir tmp;
    const std::string q = " 2>/dev/null";
    auto cfg = [&](const std::string& name, const std::string& text) { return tmp.write(name, text).string(); };

    fs::path out = tmp.path / "report.json";
    std::string period = (kSource / "configs" / "period_bound.json").string();
    REQUIRE(run_exe("--config " + period + " --out " + out.string() + q) == 0);
    CHECK(fs::exists(out));
    CHECK_FALSE(fs::exists(tmp.path / "report.json.tmp"));
    Json r = Json::parse(slurp(out));
    CHECK(validate_report(r).empty());
    CHECK(r.dump(2) + "\n" == slurp(out));
    CHECK(r.dump() == run(bundled("period_bound")).dump());

    // PIQ_LAB_JOBS is read when --jobs is absent, and the job count never reaches the report
    std::string piq = cfg("piq.json", R"({"command": "piq-run", "f": "z^2 - 1", "bounds": {"H": 10, "S_max": 4}})");
    fs::path o1 = tmp.path / "o1.json", o2 = tmp.path / "o2.json";
    REQUIRE(run_exe("--config " + piq + " --out " + o1.string() + " --jobs 1" + q) == 0);
    CHECK(std::system(("PIQ_LAB_JOBS=3 " + std::string(PIQ_LAB_EXE) + " --config " + piq + " --out " + o2.string())
                          .c_str()) == 0);
    CHECK(slurp(o1) == slurp(o2));
    CHECK(WEXITSTATUS(std::system(
              ("PIQ_LAB_JOBS=zero " + std::string(PIQ_LAB_EXE) + " --config " + piq + " > /dev/null 2>&1").c_str())) ==
          2);

    // --seed is recorded and drives the random points
    std::string sym = (kSource / "configs" / "descend_sym2.json").string();
    REQUIRE(run_exe("--config " + sym + " --seed 9 --out " + o1.string() + q) == 0);
    Json seeded = Json::parse(slurp(o1));
    CHECK(seeded["config"]["seed"] == 9);
    CHECK(seeded["results"]["points"] != run(bundled("descend_sym2"))["results"]["points"]);
    CHECK(seeded["results"] == run(config_from_json(seeded["config"]))["results"]);

    // the positional subcommand must agree with the config
    CHECK(run_exe("period-bound --config " + period + " > /dev/null" + q) == 0);
    CHECK(run_exe("gauss-norm --config " + period + " > /dev/null" + q) == 2);
    CHECK(run_exe("--config " + (tmp.path / "missing.json").string() + q) == 2);
    CHECK(run_exe("--config " + cfg("bad.json", "{\"command\": \"piq-run\", \"bounds\": {\"H\": 0}}") + q) == 2);
    CHECK(run_exe("--config " + cfg("inv.json", R"({"command": "piq-run", "f": "z^2", "g": "z^3"})") + q) == 3);
    CHECK(run_exe("--config " +
                  cfg("ext.json", R"({"command": "boettcher", "germ": {"p": 7, "coefficients": ["0", "0", "0", "3"]}})") +
                  " > /dev/null" + q) == 4);
    CHECK(run_exe("--config " +
                  cfg("prec.json", R"({"command": "linearize", "germ": {"p": 5, "coefficients": ["0", "0", "1"]}})") +
                  " > /dev/null" + q) == 5);
    CHECK(run_exe("--config " +
                  cfg("exh.json", R"({"command": "cyclo-split", "matrix": [[0, -1], [1, -1]], "bounds": {"n_max": 2}})") +
                  " > /dev/null" + q) == 6);
    CHECK(run_exe("--help > /dev/null") == 0);
    CHECK(run_exe("--config" + q) == 2);
}
