#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "wallgp/cli.hpp"
#include "wallgp/persistence.hpp"

namespace wallgp::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) fail(ErrorCode::ConfigError, where + " must be an object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) fail(ErrorCode::ConfigError, fmt::format("unknown config key '{}{}'", where, key));
    }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorCode::ConfigError, fmt::format("config key '{}{}' has the wrong type", where, key));
    }
}

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        fail(ErrorCode::ConfigError, fmt::format("{}: '{}' is not a number", what, text));
    }
    return v;
}

json lambda_to_json(const transforms::TargetTransformConfig& t) {
    switch (t.mode) {
        case transforms::LambdaMode::None: return "none";
        case transforms::LambdaMode::Auto: return "auto";
        case transforms::LambdaMode::Fixed: return t.fixed_lambda;
    }
    return "auto";
}

}  // namespace

transforms::TargetTransformConfig parse_lambda(const std::string& text) {
    transforms::TargetTransformConfig t;
    if (text == "auto") {
        t.mode = transforms::LambdaMode::Auto;
    } else if (text == "none") {
        t.mode = transforms::LambdaMode::None;
    } else {
        t.mode = transforms::LambdaMode::Fixed;
        t.fixed_lambda = parse_double(text, "lambda");
    }
    return t;
}

dataset::ScopeCriteria parse_scope(const std::string& text) {
    if (text == "s-sf") return dataset::ScopeCriteria::shear_dominated();
    if (text == "all") return dataset::ScopeCriteria::all_modes();
    fail(ErrorCode::ConfigError, fmt::format("scope must be 's-sf' or 'all', got '{}'", text));
}

std::vector<std::string> parse_feature_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void validate(const RunConfig& c) {
    const auto& known = dataset::selectable_feature_names();
    if (c.features.empty()) fail(ErrorCode::ConfigError, "feature list is empty");
    std::set<std::string> seen;
    for (const auto& f : c.features) {
        if (std::find(known.begin(), known.end(), f) == known.end()) {
            fail(ErrorCode::ConfigError, fmt::format("unknown feature '{}'", f));
        }
        if (!seen.insert(f).second) fail(ErrorCode::ConfigError, fmt::format("feature '{}' listed twice", f));
    }
    if (c.transform.mode == transforms::LambdaMode::Fixed &&
        !(c.transform.fixed_lambda >= transforms::kLambdaMin && c.transform.fixed_lambda <= transforms::kLambdaMax)) {
        fail(ErrorCode::ConfigError, fmt::format("lambda {} outside [{}, {}]", c.transform.fixed_lambda,
                                                 transforms::kLambdaMin, transforms::kLambdaMax));
    }
    const auto& o = c.optimizer;
    if (o.max_iterations < 1) fail(ErrorCode::ConfigError, "optimizer.max_iterations must be >= 1");
    if (o.restarts < 0) fail(ErrorCode::ConfigError, "optimizer.restarts must be >= 0");
    if (o.history < 1) fail(ErrorCode::ConfigError, "optimizer.history must be >= 1");
    if (!(o.gradient_tolerance > 0.0)) fail(ErrorCode::ConfigError, "optimizer.gradient_tolerance must be > 0");
    if (!(o.function_tolerance >= 0.0)) fail(ErrorCode::ConfigError, "optimizer.function_tolerance must be >= 0");
    if (!(o.perturbation_decades >= 0.0)) fail(ErrorCode::ConfigError, "optimizer.perturbation_decades must be >= 0");
    if (o.fixed_noise_variance && !(*o.fixed_noise_variance >= 0.0)) {
        fail(ErrorCode::ConfigError, "optimizer.noise_variance must be >= 0");
    }
    if (c.trials < 1) fail(ErrorCode::ConfigError, "split.trials must be >= 1");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
        fail(ErrorCode::ConfigError, "split.train_fraction must lie in (0, 1)");
    }
    if (c.scope.modes.empty()) fail(ErrorCode::ConfigError, "scope.modes is empty");
    if (!(c.scope.max_length_to_thickness > 0.0) || !(c.scope.max_aspect_ratio > 0.0)) {
        fail(ErrorCode::ConfigError, "scope limits must be > 0");
    }
    if (c.top_k < 1) fail(ErrorCode::ConfigError, "top_k must be >= 1");
    if (c.threads < 0) fail(ErrorCode::ConfigError, "threads must be >= 0");
}

json config_to_document(const RunConfig& c) {
    json modes = json::array();
    for (auto m : c.scope.modes) modes.push_back(std::string(dataset::to_string(m)));
    const auto& o = c.optimizer;
    return {
        {"seed", c.seed},
        {"features", c.features},
        {"lambda", lambda_to_json(c.transform)},
        {"optimizer",
         {{"restarts", o.restarts},
          {"max_iterations", o.max_iterations},
          {"gradient_tolerance", o.gradient_tolerance},
          {"function_tolerance", o.function_tolerance},
          {"perturbation_decades", o.perturbation_decades},
          {"history", o.history},
          {"noise_variance", o.fixed_noise_variance ? json(*o.fixed_noise_variance) : json("auto")}}},
        {"split", {{"trials", c.trials}, {"train_fraction", c.train_fraction}}},
        {"scope",
         {{"modes", modes},
          {"max_length_to_thickness", c.scope.max_length_to_thickness},
          {"max_aspect_ratio", c.scope.max_aspect_ratio}}},
        {"overtraining", {{"max_gap", c.overtraining.max_gap}, {"min_test_r2", c.overtraining.min_test_r2}}},
        {"top_k", c.top_k},
        {"threads", c.threads},
        {"stress_unit", c.stress_unit == asce41::StressUnit::Psi ? "psi" : "mpa"},
        {"output_dir", c.output_dir.string()},
        {"format", c.format == OutputFormat::Table ? "table" : "doc"},
    };
}

RunConfig config_from_document(const json& doc, RunConfig c) {
    check_keys(doc, {"seed", "features", "lambda", "optimizer", "split", "scope", "overtraining", "top_k", "threads",
                     "stress_unit", "output_dir", "format"},
               "");
    if (doc.contains("seed")) c.seed = get<std::uint64_t>(doc, "seed", "");
    if (doc.contains("features")) c.features = get<std::vector<std::string>>(doc, "features", "");
    if (doc.contains("lambda")) {
        const json& l = doc.at("lambda");
        if (l.is_number()) {
            c.transform.mode = transforms::LambdaMode::Fixed;
            c.transform.fixed_lambda = l.get<double>();
        } else if (l.is_string()) {
            c.transform = parse_lambda(l.get<std::string>());
        } else {
            fail(ErrorCode::ConfigError, "config key 'lambda' must be \"auto\", \"none\" or a number");
        }
    }
    if (doc.contains("optimizer")) {
        const json& o = doc.at("optimizer");
        const std::string w = "optimizer.";
        check_keys(o, {"restarts", "max_iterations", "gradient_tolerance", "function_tolerance", "perturbation_decades",
                       "history", "noise_variance"},
                   w);
        if (o.contains("restarts")) c.optimizer.restarts = get<int>(o, "restarts", w);
        if (o.contains("max_iterations")) c.optimizer.max_iterations = get<int>(o, "max_iterations", w);
        if (o.contains("gradient_tolerance")) c.optimizer.gradient_tolerance = get<double>(o, "gradient_tolerance", w);
        if (o.contains("function_tolerance")) c.optimizer.function_tolerance = get<double>(o, "function_tolerance", w);
        if (o.contains("perturbation_decades")) {
            c.optimizer.perturbation_decades = get<double>(o, "perturbation_decades", w);
        }
        if (o.contains("history")) c.optimizer.history = get<int>(o, "history", w);
        if (o.contains("noise_variance")) {
            const json& nv = o.at("noise_variance");
            if (nv.is_string() && nv.get<std::string>() == "auto") {
                c.optimizer.fixed_noise_variance.reset();
            } else if (nv.is_number()) {
                c.optimizer.fixed_noise_variance = nv.get<double>();
            } else {
                fail(ErrorCode::ConfigError, "config key 'optimizer.noise_variance' must be \"auto\" or a number");
            }
        }
    }
    if (doc.contains("split")) {
        const json& s = doc.at("split");
        check_keys(s, {"trials", "train_fraction"}, "split.");
        if (s.contains("trials")) c.trials = get<int>(s, "trials", "split.");
        if (s.contains("train_fraction")) c.train_fraction = get<double>(s, "train_fraction", "split.");
    }
    if (doc.contains("scope")) {
        const json& s = doc.at("scope");
        check_keys(s, {"modes", "max_length_to_thickness", "max_aspect_ratio"}, "scope.");
        if (s.contains("modes")) {
            c.scope.modes.clear();
            for (const auto& m : get<std::vector<std::string>>(s, "modes", "scope.")) {
                const auto mode = dataset::parse_failure_mode(m);
                if (!mode) fail(ErrorCode::ConfigError, fmt::format("unknown failure mode '{}'", m));
                c.scope.modes.push_back(*mode);
            }
        }
        if (s.contains("max_length_to_thickness")) {
            c.scope.max_length_to_thickness = get<double>(s, "max_length_to_thickness", "scope.");
        }
        if (s.contains("max_aspect_ratio")) c.scope.max_aspect_ratio = get<double>(s, "max_aspect_ratio", "scope.");
    }
    if (doc.contains("overtraining")) {
        const json& r = doc.at("overtraining");
        check_keys(r, {"max_gap", "min_test_r2"}, "overtraining.");
        if (r.contains("max_gap")) c.overtraining.max_gap = get<double>(r, "max_gap", "overtraining.");
        if (r.contains("min_test_r2")) c.overtraining.min_test_r2 = get<double>(r, "min_test_r2", "overtraining.");
    }
    if (doc.contains("top_k")) c.top_k = get<int>(doc, "top_k", "");
    if (doc.contains("threads")) c.threads = get<int>(doc, "threads", "");
    if (doc.contains("stress_unit")) {
        const auto u = get<std::string>(doc, "stress_unit", "");
        if (u == "psi") {
            c.stress_unit = asce41::StressUnit::Psi;
        } else if (u == "mpa") {
            c.stress_unit = asce41::StressUnit::MPa;
        } else {
            fail(ErrorCode::ConfigError, fmt::format("stress_unit must be 'psi' or 'mpa', got '{}'", u));
        }
    }
    if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir", "");
    if (doc.contains("format")) {
        const auto f = get<std::string>(doc, "format", "");
        if (f == "table") {
            c.format = OutputFormat::Table;
        } else if (f == "doc") {
            c.format = OutputFormat::Document;
        } else {
            fail(ErrorCode::ConfigError, fmt::format("format must be 'table' or 'doc', got '{}'", f));
        }
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    json doc;
    try {
        doc = persistence::read_document(path);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::IoError) throw;
        fail(ErrorCode::ConfigError, std::string("config file: ") + e.what());
    }
    return config_from_document(doc, std::move(base));
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::SchemaMismatch:
        case ErrorCode::UnitError:
        case ErrorCode::InvariantViolation:
        case ErrorCode::NonPositiveInput:
        case ErrorCode::DegenerateData:
            return 2;
        case ErrorCode::TooFewSpecimens:
            return 3;
        case ErrorCode::OptimizationDiverged:
        case ErrorCode::NotPositiveDefinite:
            return 4;
        case ErrorCode::NoPeak:
        case ErrorCode::TooFewCycles:
            return 5;
        case ErrorCode::FeatureMismatch:
            return 6;
        default:
            return 1;
    }
}

}  // namespace wallgp::cli
