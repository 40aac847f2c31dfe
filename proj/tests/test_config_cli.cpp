#include "pinlock/commands.hpp"
#include "pinlock/config.hpp"
#include "pinlock/errors.hpp"
#include "pinlock/report.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

using namespace pinlock;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kDefaultConfig = std::string(PINLOCK_SOURCE_DIR) + "/configs/paper-default.json";

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pinlock-test-" + std::to_string(std::rand()) + "-" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

json results_of(const std::string& path) { return json::parse(slurp(path)).at("results"); }

json default_doc() { return json::parse(slurp(kDefaultConfig)); }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("shipped config loads") {
    const auto loaded = load_config(kDefaultConfig);
    const RunConfig& c = loaded.config;
    CHECK(c.model.pin_count == 132);
    CHECK(c.model.contact_probability == 0.1);
    CHECK(c.model.friction_range == UniformRange{0.4, 3.0});
    CHECK(c.robot.per_unit_holding_force == 21.1);
    CHECK(c.robot.total_mass == 15.7);
    CHECK(c.trials == 100000);
    CHECK(pressing_mass_below(c.model.pressing, 5.0) >= 0.99);
    CHECK(loaded.hash == content_digest(loaded.bytes));
    CHECK(loaded.hash.size() == 16);
    CHECK(c.metadata.at("spring_coefficient_n_per_m") == 0.098);

    const auto outdoor = load_config(std::string(PINLOCK_SOURCE_DIR) + "/configs/outdoor-200mm.json").config;
    CHECK(outdoor.gait.stride == 0.2);
    CHECK(outdoor.gait.step_duration == 60.0);
}

TEST_CASE("round trip is a fixed point") {
    const RunConfig c = load_config(kDefaultConfig).config;
    const json once = serialize_config(c);
    const RunConfig back = parse_config(once);
    CHECK(back == c);
    CHECK(serialize_config(back) == once);
    CHECK(parse_config_text(once.dump()) == c);
}

TEST_CASE("digest") {
    // FNV-1a 64 reference values.
    CHECK(content_digest("") == "cbf29ce484222325");
    CHECK(content_digest("a") == "af63dc4c8601ec8c");
    CHECK(content_digest("foobar") == "85944171f73967e8");
    CHECK(content_digest("{}") != content_digest("{ }"));
}

TEST_CASE("errors carry field paths") {
    auto expect_issue = [](json doc, const std::string& field) {
        try {
            parse_config(doc);
            FAIL("expected ConfigError for " << field);
        } catch (const ConfigError& e) {
            bool found = false;
            for (const auto& i : e.issues()) found |= i.rfind(field + ":", 0) == 0;
            INFO(e.what());
            CHECK(found);
        }
    };
    json d = default_doc();
    d["model"]["contact_probability"] = 1.5;
    expect_issue(d, "model.contact_probability");

    d = default_doc();
    d["schema_version"] = 2;
    expect_issue(d, "schema_version");

    d = default_doc();
    d["model"]["pressing"] = {{"shape", 1.0}, {"scale", 3.0}};
    expect_issue(d, "model.pressing");

    d = default_doc();
    d["layout"]["colour"] = "red";
    expect_issue(d, "layout.colour");

    d = default_doc();
    d["material"].erase("effective_length");
    expect_issue(d, "material.effective_length");

    d = default_doc();
    d["gait"]["leg_sequence"] = {0, 1, 2};
    expect_issue(d, "gait.leg_sequence");

    d = default_doc();
    d["robot"]["force_preset"] = "median";
    expect_issue(d, "robot.force_preset");

    d = default_doc();
    d["trials"] = "many";
    expect_issue(d, "trials");

    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
}

TEST_CASE("pressing may be given by moments") {
    json d = default_doc();
    d["model"]["pressing"] = {{"mean", 1.774}, {"variance", 0.881}};
    const RunConfig c = parse_config(d);
    CHECK(c.model.pressing.shape == doctest::Approx(1.774 * 1.774 / 0.881));
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("seed resolution") {
    unsetenv("PINLOCK_SEED");
    CHECK(cli::resolve_seed(std::nullopt, 5) == 5);
    setenv("PINLOCK_SEED", "17", 1);
    CHECK(cli::resolve_seed(std::nullopt, 5) == 17);
    CHECK(cli::resolve_seed(3, 5) == 3);
    setenv("PINLOCK_SEED", "x1", 1);
    CHECK_THROWS_AS(cli::resolve_seed(std::nullopt, 5), std::invalid_argument);
    unsetenv("PINLOCK_SEED");
}

TEST_CASE("grasp-sim") {
    TempDir tmp;
    std::ostringstream out, err;
    cli::GraspSimOptions o;
    o.config_path = kDefaultConfig;
    o.trials = 20000;
    o.output_path = tmp / "r.json";
    o.totals_csv_path = tmp / "t.csv";
    REQUIRE(cli::cmd_grasp_sim(o, out, err) == cli::kOk);
    CHECK(out.str().find("mean") != std::string::npos);

    const json record = json::parse(slurp(o.output_path));
    for (const char* k : {"command", "tool_version", "timestamp", "config_hash", "results"}) CHECK(record.contains(k));
    const json r = record["results"];
    for (const char* k : {"trial_count", "mean_n", "variance_n2", "percentiles", "master_seed", "config_hash"}) {
        CHECK(r.contains(k));
    }
    CHECK(r["trial_count"] == 20000);
    CHECK(r["mean_n"].get<double>() == doctest::Approx(39.8).epsilon(0.05));
    CHECK(r["percentiles"].contains("0.05"));
    CHECK(r["config_hash"] == content_digest(slurp(kDefaultConfig)));

    const std::string csv = slurp(o.totals_csv_path);
    CHECK(csv.rfind("total_force_n\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 20001);
}

TEST_CASE("grasp-sim is deterministic") {
    TempDir tmp;
    std::ostringstream out, err;
    cli::GraspSimOptions o;
    o.config_path = kDefaultConfig;
    o.trials = 1;
    o.seed = 7;
    o.output_path = tmp / "a.json";
    REQUIRE(cli::cmd_grasp_sim(o, out, err) == cli::kOk);
    o.output_path = tmp / "b.json";
    o.serial = true;
    REQUIRE(cli::cmd_grasp_sim(o, out, err) == cli::kOk);
    CHECK(results_of(tmp / "a.json").dump() == results_of(tmp / "b.json").dump());

    // Only the timestamp differs between the two records.
    json a = json::parse(slurp(tmp / "a.json")), b = json::parse(slurp(tmp / "b.json"));
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a == b);
}

TEST_CASE("config hash follows the config bytes") {
    TempDir tmp;
    std::string text = slurp(kDefaultConfig);
    spit(tmp / "c1.json", text);
    spit(tmp / "c2.json", text + "\n");
    std::ostringstream out, err;
    cli::GraspSimOptions o;
    o.trials = 10;
    o.config_path = tmp / "c1.json";
    o.output_path = tmp / "r1.json";
    REQUIRE(cli::cmd_grasp_sim(o, out, err) == 0);
    o.config_path = tmp / "c2.json";
    o.output_path = tmp / "r2.json";
    REQUIRE(cli::cmd_grasp_sim(o, out, err) == 0);
    o.config_path = tmp / "c1.json";
    o.output_path = tmp / "r3.json";
    REQUIRE(cli::cmd_grasp_sim(o, out, err) == 0);
    const auto h1 = results_of(tmp / "r1.json")["config_hash"];
    CHECK(h1 != results_of(tmp / "r2.json")["config_hash"]);
    CHECK(h1 == results_of(tmp / "r3.json")["config_hash"]);
    CHECK(results_of(tmp / "r1.json")["mean_n"] == results_of(tmp / "r2.json")["mean_n"]);
}

TEST_CASE("exit codes") {
    TempDir tmp;
    std::ostringstream out, err;
    json d = default_doc();
    d["model"]["contact_probability"] = 1.5;
    spit(tmp / "bad.json", d.dump());
    cli::GraspSimOptions o;
    o.config_path = tmp / "bad.json";
    CHECK(cli::cmd_grasp_sim(o, out, err) == cli::kValidation);
    CHECK(err.str().find("model.contact_probability") != std::string::npos);

    o.config_path = tmp / "missing.json";
    CHECK(cli::cmd_grasp_sim(o, out, err) == cli::kIo);

    o.config_path = kDefaultConfig;
    o.trials = 5;
    o.output_path = (tmp.path / "no" / "such" / "dir.json").string();
    CHECK(cli::cmd_grasp_sim(o, out, err) == cli::kIo);

    cli::CalibrateOptions c;
    c.mean = 39.8;
    c.ci_low = 19.8;
    c.ci_high = 62.9;
    CHECK(cli::cmd_calibrate(c, out, err) == cli::kOk);
    CHECK(out.str().find("E[P]   = 1.7736") != std::string::npos);
    c.mean = 70.0;
    CHECK(cli::cmd_calibrate(c, out, err) == cli::kValidation);
    c.mean = c.ci_low = c.ci_high = 39.8;
    CHECK(cli::cmd_calibrate(c, out, err) == cli::kInfeasible);
    c.ci_low = 35.0;
    c.ci_high = 45.0;
    CHECK(cli::cmd_calibrate(c, out, err) == cli::kInfeasible);
}

TEST_CASE("calibrate writes parameters") {
    TempDir tmp;
    std::ostringstream out, err;
    cli::CalibrateOptions c{39.8, 19.8, 62.9, kDefaultConfig, tmp / "cal.json"};
    REQUIRE(cli::cmd_calibrate(c, out, err) == cli::kOk);
    const json r = json::parse(slurp(c.output_path));
    const auto shipped = load_config(kDefaultConfig).config.model.pressing;
    CHECK(r["shape"].get<double>() == shipped.shape);
    CHECK(r["scale"].get<double>() == shipped.scale);
}

TEST_CASE("climb-angle") {
    TempDir tmp;
    std::ostringstream out, err;
    cli::ClimbAngleOptions o;
    o.config_path = kDefaultConfig;
    o.output_path = tmp / "climb.csv";
    REQUIRE(cli::cmd_climb_angle(o, out, err) == cli::kOk);
    CHECK(out.str().find("max static angle = 55.28 deg") != std::string::npos);
    const std::string csv = slurp(o.output_path);
    CHECK(csv.rfind("angle_deg,required_N,margin_N\n0,0.000000,126.600000\n", 0) == 0);
    CHECK(csv.find("\n90,154.017") != std::string::npos);

    std::ostringstream out2;
    o.preset = "worst-case";
    REQUIRE(cli::cmd_climb_angle(o, out2, err) == cli::kOk);
    CHECK(out2.str().find("max static angle = 13.77 deg") != std::string::npos);

    json d = default_doc();
    d["robot"]["total_mass"] = 1e-6;
    spit(tmp / "light.json", d.dump());
    std::ostringstream out3;
    o.preset.clear();
    o.config_path = tmp / "light.json";
    REQUIRE(cli::cmd_climb_angle(o, out3, err) == cli::kOk);
    CHECK(out3.str().find("90.00 deg (capped") != std::string::npos);
}

TEST_CASE("gait") {
    TempDir tmp;
    std::ostringstream out, err;
    cli::GaitOptions o;
    o.config_path = kDefaultConfig;
    o.seed = 11;
    o.output_path = tmp / "g1.json";
    REQUIRE(cli::cmd_gait(o, out, err) == cli::kOk);
    o.output_path = tmp / "g2.json";
    REQUIRE(cli::cmd_gait(o, out, err) == cli::kOk);
    CHECK(results_of(tmp / "g1.json").dump() == results_of(tmp / "g2.json").dump());
    const json r = results_of(tmp / "g1.json");
    CHECK(r["outcome"] == "completed");
    CHECK(r["distance_m"].get<double>() == doctest::Approx(0.36));
    CHECK(r["elapsed_s"].get<double>() == doctest::Approx(1800.0));

    o.sweep_seeds = 40;
    o.incline_deg = 0.0;
    o.format = cli::Format::csv;
    o.output_path = tmp / "sweep.csv";
    std::ostringstream sweep_out;
    REQUIRE(cli::cmd_gait(o, sweep_out, err) == cli::kOk);
    CHECK(sweep_out.str().find("slip probability 0.0000") != std::string::npos);
    const std::string csv = slurp(o.output_path);
    CHECK(csv.rfind("seed,incline_deg,outcome,distance_m,slip_events\n", 0) == 0);

    o.format = cli::Format::json;
    o.output_path = tmp / "s1.json";
    REQUIRE(cli::cmd_gait(o, out, err) == cli::kOk);
    o.serial = true;
    o.output_path = tmp / "s2.json";
    REQUIRE(cli::cmd_gait(o, out, err) == cli::kOk);
    CHECK(results_of(tmp / "s1.json").dump() == results_of(tmp / "s2.json").dump());

    o.incline_deg = 95.0;
    CHECK(cli::cmd_gait(o, out, err) == cli::kValidation);
}

TEST_CASE("wedge-gen") {
    TempDir tmp;
    std::ostringstream out, err;
    cli::WedgeGenOptions o;
    o.name = "wedge:+60";
    o.output_path = tmp / "w.csv";
    REQUIRE(cli::cmd_wedge_gen(o, out, err) == cli::kOk);
    std::ifstream in(o.output_path);
    const TerrainProfile t = read_terrain_csv(in);
    CHECK(t.sample_positions.front() == 0.0);
    CHECK(t.sample_positions.back() == doctest::Approx(0.15));
    CHECK(-t.heights.back() == doctest::Approx(0.075 * std::sqrt(3.0)).epsilon(1e-12));

    o.name = "wedge:+120";
    CHECK(cli::cmd_wedge_gen(o, out, err) == cli::kValidation);
}

TEST_CASE("plot") {
    TempDir tmp;
    std::ostringstream out, err;
    fs::create_directories(tmp.path / "runs");
    cli::GraspSimOptions g;
    g.config_path = kDefaultConfig;
    g.trials = 4000;
    for (double phi : standard_wedge_angles()) {
        g.scenario = wedge_name(phi);
        g.output_path = (tmp.path / "runs" / (std::to_string(static_cast<int>(phi)) + ".json")).string();
        REQUIRE(cli::cmd_grasp_sim(g, out, err) == cli::kOk);
    }
    const json one = results_of((tmp.path / "runs" / "30.json").string());
    CHECK(one["scenario"] == "wedge:+30");
    CHECK(one["deterministic_holding_force_n"].get<double>() > 0.0);

    spit(tmp / "meas.csv", "phi_deg,force_n\n-90,25.0\n30,41.5\n");
    cli::PlotOptions p;
    p.inputs = {(tmp.path / "runs").string()};
    p.output_path = tmp / "band.svg";
    p.measurements_path = tmp / "meas.csv";
    REQUIRE(cli::cmd_plot(p, out, err) == cli::kOk);
    const std::string svg = slurp(p.output_path);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find(R"(id="band")") != std::string::npos);
    CHECK(svg.find(R"(id="mean")") != std::string::npos);
    const std::regex circle("<circle ");
    CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), circle), std::sregex_iterator()) == 2);

    REQUIRE(cli::cmd_plot(p, out, err) == cli::kOk);
    CHECK(slurp(p.output_path) == svg);

    std::ostringstream err2;
    p.inputs = {(tmp.path / "runs" / "30.json").string()};
    CHECK(cli::cmd_plot(p, out, err2) == cli::kValidation);
    const std::string msg = err2.str();
    CHECK(msg.find("5 angle(s)") != std::string::npos);
    for (const char* name : {"wedge:-90", "wedge:-60", "wedge:-30", "wedge:+60", "wedge:+90"}) {
        CHECK(msg.find(name) != std::string::npos);
    }
    CHECK(msg.find("wedge:+30") == std::string::npos);
}

}  // TEST_SUITE

TEST_SUITE("report") {

TEST_CASE("band svg layout") {
    std::vector<BandPoint> band;
    for (double phi : standard_wedge_angles()) band.push_back({phi, 20.0, 40.0, 63.0});
    const std::string svg = render_band_svg(band, {});
    // y_max = ceil(63 * 1.1 / 10) * 10 = 70; 20 N maps to 350 - 20/70*320.
    CHECK(svg.find("70.00,") != std::string::npos);
    CHECK(svg.find("620.00,") != std::string::npos);
    CHECK(svg.find(",258.57") != std::string::npos);
    CHECK(svg.find(R"(width="640" height="400")") != std::string::npos);
    CHECK_THROWS_AS(render_band_svg({}, {}), DomainError);
}

TEST_CASE("band ordering holds on every series") {
    std::vector<BandPoint> band;
    GraspDistribution d;
    for (double phi : standard_wedge_angles()) {
        const std::vector<double> xs{1.0, 5.0, 2.0, 9.0, 3.5, 4.0};
        const std::vector<double> probs{0.05, 0.95};
        d = summarize_totals(xs, probs, 0);
        band.push_back({phi, d.percentiles.at(0.05), d.mean, d.percentiles.at(0.95)});
    }
    for (const auto& b : band) {
        CHECK(b.low <= b.mean);
        CHECK(b.mean <= b.high);
    }
}

TEST_CASE("csv readers") {
    std::istringstream ok("position_m,height_m\n0,0\n0.1,-0.05\n\n0.2,-0.1\n");
    const auto t = read_terrain_csv(ok);
    CHECK(t.sample_positions.size() == 3);
    std::istringstream bad("0,0\n0.1,abc\n");
    CHECK_THROWS_AS(read_terrain_csv(bad), DomainError);
    std::istringstream cols("0,0,1\n");
    CHECK_THROWS_AS(read_measurements_csv(cols), DomainError);

    std::ostringstream out;
    write_terrain_csv(out, t);
    std::istringstream again(out.str());
    const auto t2 = read_terrain_csv(again);
    CHECK(t2.sample_positions == t.sample_positions);
    CHECK(t2.heights == t.heights);
}

TEST_CASE("climb table") {
    const auto rows = climb_table(RobotSpec{}, 7.0);
    CHECK(rows.front().angle_deg == 0.0);
    CHECK(rows.back().angle_deg == 90.0);
    CHECK(rows.back().required == doctest::Approx(154.017));
    CHECK_THROWS_AS(climb_table(RobotSpec{}, 0.0), DomainError);
}

TEST_CASE("probability keys") {
    CHECK(probability_key(0.05) == "0.05");
    CHECK(probability_key(0.5) == "0.5");
    CHECK(probability_key(0.95) == "0.95");
}

}  // TEST_SUITE
