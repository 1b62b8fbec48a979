#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wallgp/cli.hpp"
#include "wallgp/persistence.hpp"

using namespace wallgp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const char* env = std::getenv("WALLGP_TEST_TMP");
    const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "wallgp_cli_tests";
    const fs::path dir = root / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "wallgp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

void write_db(const fs::path& p, std::vector<dataset::WallSpecimen> db) { dataset::save_csv(p, db); }

const std::vector<std::string> kFast = {"--features", "alr,ar,fc_mpa", "--restarts", "1"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void write_record(const fs::path& p, const dataset::HysteresisRecord& r) {
    std::ofstream out(p);
    out << "disp_mm,force_kn\n";
    out.precision(17);
    for (const auto& s : r.samples) out << s.displacement << ',' << s.force << '\n';
}

}  // namespace

TEST_CASE("exit code table") {
    CHECK(cli::exit_code_for(ErrorCode::SchemaMismatch) == 2);
    CHECK(cli::exit_code_for(ErrorCode::UnitError) == 2);
    CHECK(cli::exit_code_for(ErrorCode::InvariantViolation) == 2);
    CHECK(cli::exit_code_for(ErrorCode::TooFewSpecimens) == 3);
    CHECK(cli::exit_code_for(ErrorCode::OptimizationDiverged) == 4);
    CHECK(cli::exit_code_for(ErrorCode::NotPositiveDefinite) == 4);
    CHECK(cli::exit_code_for(ErrorCode::NoPeak) == 5);
    CHECK(cli::exit_code_for(ErrorCode::TooFewCycles) == 5);
    CHECK(cli::exit_code_for(ErrorCode::FeatureMismatch) == 6);
    CHECK(cli::exit_code_for(ErrorCode::ConfigError) == 1);
    CHECK(cli::exit_code_for(ErrorCode::IoError) == 1);
}

TEST_CASE("train writes seven models and is byte-for-byte reproducible") {
    const auto dir = scratch("train");
    write_db(dir / "db.csv", dataset::generate_synthetic_database(40, 42, 0.15));
    const auto a = run(with({"train", (dir / "db.csv").string(), "--models", (dir / "a").string(), "--seed", "42"}, kFast));
    REQUIRE(a.code == 0);
    const auto b = run(with({"train", (dir / "db.csv").string(), "--models", (dir / "b").string(), "--seed", "42"}, kFast));
    REQUIRE(b.code == 0);
    for (auto o : dataset::kOutputs) {
        const auto fa = cli::model_path(dir / "a", o);
        const auto fb = cli::model_path(dir / "b", o);
        REQUIRE(fs::exists(fa));
        CHECK(slurp(fa) == slurp(fb));
    }
    CHECK(slurp(dir / "a" / "training_report.json") == slurp(dir / "b" / "training_report.json"));

    const auto report = persistence::read_document(dir / "a" / "training_report.json");
    CHECK(report["config"]["seed"] == 42);
    CHECK(report["models"].size() == 7);
    CHECK(report["models"][0].contains("lambda"));
    CHECK(report["models"][0].contains("ranking"));
}

TEST_CASE("flexure-only database exits with the empty-scope code") {
    const auto dir = scratch("flexure");
    auto db = dataset::generate_synthetic_database(30, 1, 0.1);
    for (auto& s : db) s.failure_mode = dataset::FailureMode::Flexure;
    write_db(dir / "db.csv", db);
    const auto r = run({"train", (dir / "db.csv").string(), "--models", (dir / "m").string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("TooFewSpecimens") != std::string::npos);
}

TEST_CASE("schema problems exit with code 2") {
    const auto dir = scratch("schema");
    std::ofstream(dir / "db.csv") << "id,banana\nA,1\n";
    CHECK(run({"train", (dir / "db.csv").string(), "--models", (dir / "m").string()}).code == 2);
    std::ofstream(dir / "units.csv") << "id,fc_furlong\n";
    CHECK(run({"train", (dir / "units.csv").string(), "--models", (dir / "m").string()}).code == 2);
}

TEST_CASE("usage and configuration errors exit with code 1") {
    const auto dir = scratch("config");
    write_db(dir / "db.csv", dataset::generate_synthetic_database(30, 2, 0.1));
    std::ofstream(dir / "bad.json") << R"({"seed": 3, "colour": "blue"})";
    const auto r = run({"train", (dir / "db.csv").string(), "--models", (dir / "m").string(), "--config",
                        (dir / "bad.json").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("colour") != std::string::npos);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"train", (dir / "db.csv").string()}).code == 1);
    CHECK(run({"evaluate", (dir / "db.csv").string(), "--trials", "0"}).code == 1);
    CHECK(run({"evaluate", (dir / "db.csv").string(), "--lambda", "banana"}).code == 1);
    CHECK(run({"train", (dir / "missing.csv").string(), "--models", (dir / "m").string()}).code == 1);
}

TEST_CASE("flags override the config file") {
    const auto dir = scratch("override");
    write_db(dir / "db.csv", dataset::generate_synthetic_database(30, 3, 0.1));
    std::ofstream(dir / "run.json") << R"({"seed": 5, "lambda": "none", "optimizer": {"restarts": 1}})";
    const auto r = run({"train", (dir / "db.csv").string(), "--models", (dir / "m").string(), "--config",
                        (dir / "run.json").string(), "--seed", "9", "--features", "alr,ar"});
    REQUIRE(r.code == 0);
    const auto report = persistence::read_document(dir / "m" / "training_report.json");
    CHECK(report["config"]["seed"] == 9);
    CHECK(report["config"]["lambda"] == "none");
    CHECK(report["config"]["optimizer"]["restarts"] == 1);
    CHECK(report["models"][0]["boxcox"] == false);
}

TEST_CASE("predict: three specimens give three rows and three polylines") {
    const auto dir = scratch("predict");
    const auto db = dataset::generate_synthetic_database(40, 4, 0.1);
    write_db(dir / "db.csv", db);
    REQUIRE(run(with({"train", (dir / "db.csv").string(), "--models", (dir / "m").string()}, kFast)).code == 0);
    const std::vector<dataset::WallSpecimen> batch = {db[0], db[1], db[2]};
    write_db(dir / "batch.csv", batch);
    const auto r = run({"predict", "--models", (dir / "m").string(), (dir / "batch.csv").string(), "--table",
                        (dir / "pred.csv").string(), "--polyline", (dir / "poly.csv").string()});
    REQUIRE(r.code == 0);
    const auto rows = lines_of(slurp(dir / "pred.csv"));
    CHECK(rows.size() == 4);
    CHECK(rows[0].rfind("id,Vcr,Vcr_sd,", 0) == 0);
    std::ifstream poly(dir / "poly.csv");
    const auto lines = dataset::read_polyline_csv(poly);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].id == db[1].id);
    CHECK(lines[1].vertices.front() == dataset::Vertex{0, 0});
}

TEST_CASE("predict recovers training targets of a noise-free model") {
    const auto dir = scratch("interpolate");
    const auto db = dataset::generate_synthetic_database(30, 5, 0.0);
    write_db(dir / "db.csv", db);
    REQUIRE(run({"train", (dir / "db.csv").string(), "--models", (dir / "m").string(), "--noise-variance", "0",
                 "--lambda", "none"})
                .code == 0);
    const auto scoped = dataset::filter_scope(db).in_scope;
    const std::vector<dataset::WallSpecimen> probe = {scoped[0], scoped[5]};
    write_db(dir / "probe.csv", probe);
    const auto r = run({"predict", "--models", (dir / "m").string(), (dir / "probe.csv").string(), "--format", "doc"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    for (std::size_t i = 0; i < probe.size(); ++i) {
        for (auto o : dataset::kOutputs) {
            const double got = doc["predictions"][i]["mean"][std::string(dataset::output_name(o))];
            CHECK(got == doctest::Approx(probe[i].backbone->get(o)).epsilon(1e-6));
        }
    }
}

TEST_CASE("predict flags backbone violations instead of fixing them") {
    const auto dir = scratch("flags");
    const auto db = dataset::generate_synthetic_database(40, 6, 0.1);
    write_db(dir / "db.csv", db);
    REQUIRE(run(with({"train", (dir / "db.csv").string(), "--models", (dir / "m").string()}, kFast)).code == 0);
    // Swap the displacement models so predicted dmax exceeds predicted du.
    fs::rename(cli::model_path(dir / "m", dataset::Output::DeltaMax), dir / "m" / "tmp.json");
    fs::rename(cli::model_path(dir / "m", dataset::Output::DeltaU), cli::model_path(dir / "m", dataset::Output::DeltaMax));
    fs::rename(dir / "m" / "tmp.json", cli::model_path(dir / "m", dataset::Output::DeltaU));
    const std::vector<dataset::WallSpecimen> one = {dataset::filter_scope(db).in_scope[0]};
    write_db(dir / "one.csv", one);
    const auto r = run({"predict", "--models", (dir / "m").string(), (dir / "one.csv").string(), "--format", "doc"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const auto& p = doc["predictions"][0];
    CHECK(p["mean"]["dmax"].get<double>() > p["mean"]["du"].get<double>());
    CHECK(!p["flags"].empty());
}

TEST_CASE("predict with a missing feature column exits with code 6") {
    const auto dir = scratch("mismatch");
    const auto db = dataset::generate_synthetic_database(40, 7, 0.1);
    write_db(dir / "db.csv", db);
    REQUIRE(run({"train", (dir / "db.csv").string(), "--models", (dir / "m").string(), "--features", "alr,ar,s_mm",
                 "--restarts", "1"})
                .code == 0);
    auto lacking = db[0];
    lacking.stirrup_spacing.reset();
    const std::vector<dataset::WallSpecimen> one = {lacking};
    write_db(dir / "one.csv", one);
    const auto r = run({"predict", "--models", (dir / "m").string(), (dir / "one.csv").string()});
    CHECK(r.code == 6);
    CHECK(run({"train", (dir / "db.csv").string(), "--models", (dir / "n").string(), "--features", "alr,nope"}).code ==
          1);
}

TEST_CASE("extract: constructed loops, polyline reload and a monotone record") {
    const auto dir = scratch("extract");
    oracle::LoopSpec spec;
    spec.envelope = oracle::elastoplastic;
    spec.amplitudes = oracle::amplitude_range(1.0, 20.0, 1.0);
    const auto record = oracle::make_loops(spec, 2000.0);
    write_record(dir / "loops.csv", record);
    const auto r = run({"extract", (dir / "loops.csv").string(), "--height", "2000", "--id", "EP", "--polyline",
                        (dir / "poly.csv").string(), "--format", "doc"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["backbone"]["Vy"].get<double>() == doctest::Approx(500.0).epsilon(0.01));
    CHECK(doc["backbone"]["dy"].get<double>() == doctest::Approx(5.0).epsilon(0.01));

    std::ifstream in(dir / "poly.csv");
    const auto lines = dataset::read_polyline_csv(in);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].id == "EP");
    const auto direct = dataset::extract_backbone(record);
    CHECK(lines[0].vertices == dataset::backbone_to_polyline(direct));
    CHECK(dataset::backbone_from_polyline(lines[0].vertices, 2000.0) == direct);

    dataset::HysteresisRecord monotone;
    for (int i = 0; i < 40; ++i) monotone.samples.push_back({0.5 * i, 100.0 * std::min(0.5 * i, 5.0)});
    write_record(dir / "mono.csv", monotone);
    CHECK(run({"extract", (dir / "mono.csv").string(), "--height", "2000"}).code == 5);
}

TEST_CASE("asce41 command mirrors the table arithmetic") {
    const auto dir = scratch("asce");
    auto r = run({"asce41", "--vy", "100", "--height", "1000", "--axial", "0.3", "--format", "doc", "--polyline",
                  (dir / "poly.csv").string()});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    const auto& b = doc["walls"][0]["backbone"];
    CHECK(b["Vcr"] == 60.0);
    CHECK(b["dy"] == 4.0);
    CHECK(b["dmax"] == 10.0);
    CHECK(b["du"] == 20.0);
    CHECK(b["Vu"] == 20.0);
    std::ifstream in(dir / "poly.csv");
    CHECK(dataset::read_polyline_csv(in).size() == 1);

    r = run({"asce41", "--vy", "100", "--height", "1000", "--axial", "0.5", "--format", "doc"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["walls"][0]["backbone"]["Vu"] == 20.0);
    r = run({"asce41", "--vy", "100", "--height", "1000", "--axial", "0.7", "--format", "doc"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["walls"][0]["backbone"]["Vu"] == 0.0);
    CHECK(run({"asce41", "--vy", "100"}).code == 1);
}

TEST_CASE("evaluate: single trial, both report formats, seed changes splits") {
    const auto dir = scratch("evaluate");
    write_db(dir / "db.csv", dataset::generate_synthetic_database(40, 8, 0.15));
    auto args = with({"evaluate", (dir / "db.csv").string(), "--trials", "1", "--out-dir", (dir / "a").string(),
                      "--compare-asce41"},
                     kFast);
    REQUIRE(run(args).code == 0);
    const auto a = persistence::read_document(dir / "a" / "evaluation_report.json");
    CHECK(a["trial_count"] == 1);
    CHECK(a["outputs"].size() == 7);
    CHECK(a.contains("config"));
    CHECK(a.contains("asce41_comparison"));
    CHECK(fs::exists(dir / "a" / "evaluation_report.txt"));

    args = with({"evaluate", (dir / "db.csv").string(), "--trials", "1", "--out-dir", (dir / "b").string(), "--seed",
                 "1234"},
                kFast);
    REQUIRE(run(args).code == 0);
    const auto b = persistence::read_document(dir / "b" / "evaluation_report.json");
    std::vector<std::string> keys_a, keys_b;
    for (const auto& [k, v] : a["outputs"][0].items()) keys_a.push_back(k);
    for (const auto& [k, v] : b["outputs"][0].items()) keys_b.push_back(k);
    CHECK(keys_a == keys_b);
    CHECK(a["outputs"] != b["outputs"]);
}

TEST_CASE("synth writes a reproducible database") {
    const auto dir = scratch("synth");
    REQUIRE(run({"synth", "--count", "25", "--seed", "3", "--out", (dir / "a.csv").string()}).code == 0);
    REQUIRE(run({"synth", "--count", "25", "--seed", "3", "--out", (dir / "b.csv").string()}).code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(dataset::load_csv(dir / "a.csv") == dataset::generate_synthetic_database(25, 3, 0.15));
}

TEST_CASE("config documents round trip") {
    cli::RunConfig c;
    c.seed = 77;
    c.trials = 12;
    c.transform = cli::parse_lambda("-0.3");
    c.scope = cli::parse_scope("all");
    c.features = cli::parse_feature_list("alr, ar ,ssr");
    c.optimizer.fixed_noise_variance = 0.01;
    const auto doc = cli::config_to_document(c);
    const auto back = cli::config_from_document(doc);
    CHECK(cli::config_to_document(back) == doc);
    CHECK(back.features == std::vector<std::string>{"alr", "ar", "ssr"});
    CHECK(back.transform.mode == transforms::LambdaMode::Fixed);
    CHECK(back.transform.fixed_lambda == -0.3);
    CHECK(cli::parse_lambda("auto").mode == transforms::LambdaMode::Auto);
    CHECK(cli::parse_lambda("none").mode == transforms::LambdaMode::None);
    CHECK_THROWS_AS(cli::parse_scope("everything"), Error);
    CHECK_THROWS_AS(cli::config_from_document(nlohmann::json{{"split", {{"folds", 3}}}}), Error);
}
