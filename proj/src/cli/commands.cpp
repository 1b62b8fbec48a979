#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wallgp/cli.hpp"
#include "wallgp/persistence.hpp"

namespace wallgp::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) ensure_dir(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

std::string num(double v) { return fmt::format("{}", v); }

json backbone_to_json(const dataset::BackbonePoints& b) {
    json j;
    for (auto o : dataset::kOutputs) j[std::string(dataset::output_name(o))] = b.get(o);
    return j;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? std::string(sep) : "") + items[i];
    return out;
}

// Scope-filtered database with at least 20 specimens.
std::vector<dataset::WallSpecimen> load_scoped(const fs::path& db, const RunConfig& config, std::size_t& excluded) {
    const auto all = dataset::load_csv(db);
    auto part = dataset::filter_scope(all, config.scope);
    excluded = part.excluded.size();
    if (part.in_scope.size() < 20) {
        fail(ErrorCode::TooFewSpecimens, fmt::format("{} of {} specimens are in scope, need at least 20",
                                                     part.in_scope.size(), all.size()));
    }
    for (const auto& s : part.in_scope) {
        if (!s.backbone) fail(ErrorCode::InvariantViolation, "specimen " + s.id + " has no backbone targets");
    }
    return std::move(part.in_scope);
}

gpr::FitConfig fit_config(const RunConfig& config, dataset::Output o) {
    gpr::FitConfig fit;
    fit.target = config.transform;
    fit.optimizer = config.optimizer;
    fit.optimizer.seed = model_seed(config.seed, o);
    fit.feature_names = config.features;
    fit.output_name = std::string(dataset::output_name(o));
    return fit;
}

}  // namespace

std::uint64_t model_seed(std::uint64_t seed, dataset::Output output) {
    return evaluation::derive_seed(seed, 0xC0FFEE, static_cast<std::uint64_t>(output));
}

fs::path model_path(const fs::path& dir, dataset::Output output) {
    return dir / (std::string(dataset::output_name(output)) + ".json");
}

// ---- train ----------------------------------------------------------------

void cmd_train(const TrainOptions& options, const RunConfig& config, std::ostream& out) {
    validate(config);
    std::size_t excluded = 0;
    const auto specimens = load_scoped(options.database, config, excluded);
    const auto x = dataset::feature_matrix(specimens, config.features);
    ensure_dir(options.model_dir);

    json models = json::array();
    std::string table = fmt::format("{:<6} {:>8} {:>10} {:>10} {:>12}  ranking\n", "output", "lambda", "signal",
                                    "noise", "log-lik");
    for (auto o : dataset::kOutputs) {
        const auto y = dataset::target_vector(specimens, o);
        const gpr::GprModel model = gpr::fit(x, y, fit_config(config, o));
        const fs::path file = model_path(options.model_dir, o);
        persistence::save_model(model, file);

        const double ll =
            gpr::log_marginal_likelihood(model.training_inputs(), model.training_targets(), model.params()).value;
        const auto& t = model.target_transform();
        json ranking = json::array();
        std::vector<std::string> names;
        for (const auto& r : gpr::feature_relevance(model)) {
            ranking.push_back({{"feature", r.name}, {"relevance", r.relevance}});
            names.push_back(r.name);
        }
        json lengthscales = json::object();
        for (std::size_t d = 0; d < config.features.size(); ++d) {
            lengthscales[config.features[d]] = model.params().lengthscales(static_cast<Eigen::Index>(d));
        }
        const std::string name(dataset::output_name(o));
        models.push_back({{"output", name},
                          {"file", file.filename().string()},
                          {"boxcox", t.boxcox_enabled},
                          {"lambda", t.boxcox.lambda},
                          {"shift", t.boxcox.shift},
                          {"signal_variance", model.params().signal_variance},
                          {"noise_variance", model.params().noise_variance},
                          {"lengthscales", lengthscales},
                          {"log_marginal_likelihood", ll},
                          {"ranking", ranking}});
        table += fmt::format("{:<6} {:>8} {:>10.4g} {:>10.4g} {:>12.4f}  {}\n", name,
                             t.boxcox_enabled ? fmt::format("{:.3f}", t.boxcox.lambda) : "none",
                             model.params().signal_variance, model.params().noise_variance, ll,
                             join({names.begin(), names.begin() + std::min<std::size_t>(3, names.size())}, " > "));
    }
    json report = {{"kind", "wallgp.training_report"},
                   {"config", config_to_document(config)},
                   {"specimens_in_scope", specimens.size()},
                   {"specimens_excluded", excluded},
                   {"models", models}};
    persistence::write_document(report, options.model_dir / "training_report.json");
    if (config.format == OutputFormat::Document) {
        out << report.dump(2) << '\n';
    } else {
        out << table << fmt::format("trained on {} specimens ({} excluded); models in {}\n", specimens.size(),
                                    excluded, options.model_dir.string());
    }
}

// ---- predict --------------------------------------------------------------

void cmd_predict(const PredictOptions& options, const RunConfig& config, std::ostream& out) {
    std::vector<std::pair<dataset::Output, gpr::GprModel>> models;
    for (auto o : dataset::kOutputs) {
        const fs::path file = model_path(options.model_dir, o);
        if (fs::exists(file)) models.emplace_back(o, persistence::load_model(file));
    }
    if (models.empty()) fail(ErrorCode::IoError, "no model files found in " + options.model_dir.string());

    std::ifstream in(options.specimens);
    if (!in) fail(ErrorCode::IoError, "cannot open " + options.specimens.string());
    auto read = dataset::read_csv(in);
    if (!read.issues.empty()) {
        std::string msg = std::to_string(read.issues.size()) + " invalid row(s)";
        for (const auto& i : read.issues) msg += fmt::format("\n  row {}: {}", i.row, i.message);
        fail(ErrorCode::InvariantViolation, msg);
    }
    const auto& specimens = read.specimens;

    struct Row {
        std::string id;
        dataset::BackbonePoints mean;
        std::vector<double> sd;
        std::vector<std::string> flags;
    };
    std::vector<Row> rows;
    for (const auto& s : specimens) {
        Row row;
        row.id = s.id;
        row.mean.wall_height = s.height;
        for (const auto& [o, model] : models) {
            numerics::Vector q(static_cast<Eigen::Index>(model.feature_names().size()));
            for (std::size_t d = 0; d < model.feature_names().size(); ++d) {
                q(static_cast<Eigen::Index>(d)) = dataset::feature_value(s, model.feature_names()[d]);
            }
            const auto p = gpr::predict(model, q);
            row.mean.set(o, p.mean);
            row.sd.push_back(std::sqrt(p.variance));
        }
        if (models.size() == dataset::kOutputs.size()) row.flags = row.mean.invariant_violations();
        rows.push_back(std::move(row));
    }

    // Long-form CSV table of predictions.
    std::ostringstream csv;
    csv << "id";
    for (const auto& [o, m] : models) csv << ',' << dataset::output_name(o) << ',' << dataset::output_name(o) << "_sd";
    csv << ",flags\n";
    for (const auto& r : rows) {
        csv << r.id;
        for (std::size_t k = 0; k < models.size(); ++k) csv << ',' << num(r.mean.get(models[k].first)) << ',' << num(r.sd[k]);
        csv << ',' << (r.flags.empty() ? "ok" : "\"" + join(r.flags, "; ") + "\"") << '\n';
    }
    if (options.table_csv) open_out(*options.table_csv) << csv.str();

    if (options.polyline_csv) {
        if (models.size() != dataset::kOutputs.size()) {
            fail(ErrorCode::FeatureMismatch, "polylines need models for all seven outputs");
        }
        std::vector<dataset::Polyline> lines;
        for (const auto& r : rows) lines.push_back({r.id, dataset::backbone_to_polyline(r.mean)});
        auto f = open_out(*options.polyline_csv);
        dataset::write_polyline_csv(f, lines);
    }

    if (config.format == OutputFormat::Document) {
        json doc = json::array();
        for (const auto& r : rows) {
            json sd = json::object();
            for (std::size_t k = 0; k < models.size(); ++k) sd[std::string(dataset::output_name(models[k].first))] = r.sd[k];
            json mean = json::object();
            for (const auto& [o, m] : models) mean[std::string(dataset::output_name(o))] = r.mean.get(o);
            doc.push_back({{"id", r.id}, {"mean", mean}, {"sd", sd}, {"flags", r.flags}});
        }
        out << json{{"kind", "wallgp.predictions"}, {"predictions", doc}}.dump(2) << '\n';
        return;
    }
    out << fmt::format("{:<12}", "id");
    for (const auto& [o, m] : models) out << fmt::format(" {:>18}", dataset::output_name(o));
    out << "  flags\n";
    for (const auto& r : rows) {
        out << fmt::format("{:<12}", r.id);
        for (std::size_t k = 0; k < models.size(); ++k) {
            out << fmt::format(" {:>18}", fmt::format("{:.4g} +/- {:.2g}", r.mean.get(models[k].first), r.sd[k]));
        }
        out << "  " << (r.flags.empty() ? "ok" : join(r.flags, "; ")) << '\n';
    }
}

// ---- evaluate -------------------------------------------------------------

void cmd_evaluate(const EvaluateOptions& options, const RunConfig& config, std::ostream& out) {
    validate(config);
    std::size_t excluded = 0;
    const auto specimens = load_scoped(options.database, config, excluded);
    std::vector<std::string> ids;
    for (const auto& s : specimens) ids.push_back(s.id);
    const auto plan = evaluation::make_splits(ids, config.seed, config.trials, config.train_fraction);

    evaluation::PipelineConfig pipeline;
    pipeline.features = config.features;
    pipeline.fit.target = config.transform;
    pipeline.fit.optimizer = config.optimizer;
    pipeline.threads = config.threads;
    auto results = evaluation::filter_overtrained(evaluation::run_trials(specimens, plan, pipeline), config.overtraining);
    const auto report = evaluation::aggregate(results, config.features, config.overtraining, config.top_k);

    json doc = evaluation::report_to_document(report);
    doc["config"] = config_to_document(config);
    doc["specimens_in_scope"] = specimens.size();
    doc["specimens_excluded"] = excluded;
    std::string table = report_to_table(report);

    if (options.compare_asce41) {
        // Production-style models on the first trial's training split, compared on its unseen test set.
        const auto& split = plan.trials.front();
        std::vector<dataset::WallSpecimen> train;
        std::vector<dataset::WallSpecimen> test;
        for (auto i : split.train) train.push_back(specimens[i]);
        for (auto i : split.test) test.push_back(specimens[i]);
        const auto x = dataset::feature_matrix(train, config.features);
        std::vector<std::pair<dataset::Output, gpr::GprModel>> models;
        for (auto o : dataset::kOutputs) {
            gpr::FitConfig fit = fit_config(config, o);
            fit.optimizer.seed =
                evaluation::derive_seed(plan.seed, 0, 0x100 + static_cast<std::uint64_t>(o));
            models.emplace_back(o, gpr::fit(x, dataset::target_vector(train, o), fit));
        }
        const auto cmp = evaluation::compare_asce41(test, models);
        doc["asce41_comparison"] = evaluation::comparison_to_document(cmp);
        table += "\nASCE 41 comparison (P/A on the first trial's test set)\n" + evaluation::comparison_to_table(cmp);
    }

    ensure_dir(config.output_dir);
    persistence::write_document(doc, config.output_dir / "evaluation_report.json");
    write_text(config.output_dir / "evaluation_report.txt", table);
    if (config.format == OutputFormat::Document) {
        out << doc.dump(2) << '\n';
    } else {
        out << table;
    }
}

// ---- extract --------------------------------------------------------------

void cmd_extract(const ExtractOptions& options, const RunConfig& config, std::ostream& out) {
    if (!(options.height > 0.0)) fail(ErrorCode::ConfigError, "--height must be > 0");
    const auto record = dataset::load_hysteresis_csv(options.hysteresis, options.height);
    const auto b = dataset::extract_backbone(record, options.extraction);
    const std::string id = options.id.empty() ? options.hysteresis.stem().string() : options.id;
    const std::vector<dataset::Polyline> lines = {{id, dataset::backbone_to_polyline(b)}};
    if (options.polyline_csv) {
        auto f = open_out(*options.polyline_csv);
        dataset::write_polyline_csv(f, lines);
    }
    if (config.format == OutputFormat::Document) {
        out << json{{"kind", "wallgp.backbone"}, {"id", id}, {"height_mm", options.height},
                    {"backbone", backbone_to_json(b)}}
                   .dump(2)
            << '\n';
        return;
    }
    out << "id";
    for (auto o : dataset::kOutputs) out << ',' << dataset::output_name(o);
    out << '\n' << id;
    for (auto o : dataset::kOutputs) out << ',' << num(b.get(o));
    out << '\n';
}

// ---- asce41 ---------------------------------------------------------------

void cmd_asce41(const Asce41Options& options, const RunConfig& config, std::ostream& out) {
    struct Row {
        std::string id;
        double v_n = 0.0;
        asce41::WallState state;
        asce41::Asce41ShearParams params;
        dataset::BackbonePoints backbone;
    };
    std::vector<Row> rows;
    if (options.specimens) {
        std::ifstream in(*options.specimens);
        if (!in) fail(ErrorCode::IoError, "cannot open " + options.specimens->string());
        auto read = dataset::read_csv(in);
        if (!read.issues.empty()) {
            fail(ErrorCode::InvariantViolation,
                 fmt::format("row {}: {}", read.issues.front().row, read.issues.front().message));
        }
        for (const auto& s : read.specimens) {
            Row r;
            r.id = s.id;
            r.v_n = evaluation::resolve_vn(s, {});
            r.state = asce41::wall_state(s, r.v_n, config.stress_unit);
            r.params = asce41::shear_controlled_params(r.state);
            r.backbone = asce41::back_calculate_shear(r.params, r.v_n, s.height);
            rows.push_back(r);
        }
    } else {
        if (!(options.v_y > 0.0) || !(options.height > 0.0)) {
            fail(ErrorCode::ConfigError, "give --specimens, or --vy and --height (both > 0)");
        }
        Row r;
        r.id = "wall";
        r.v_n = options.v_y;
        r.state.axial_metric = options.axial;
        r.params = asce41::shear_controlled_params(r.state);
        r.backbone = asce41::back_calculate_shear(r.params, options.v_y, options.height);
        rows.push_back(r);
    }
    if (options.polyline_csv) {
        std::vector<dataset::Polyline> lines;
        for (const auto& r : rows) lines.push_back({r.id, dataset::backbone_to_polyline(r.backbone)});
        auto f = open_out(*options.polyline_csv);
        dataset::write_polyline_csv(f, lines);
    }
    if (config.format == OutputFormat::Document) {
        json doc = json::array();
        for (const auto& r : rows) {
            doc.push_back({{"id", r.id},
                           {"vy_kn", r.v_n},
                           {"axial_metric", r.state.axial_metric},
                           {"params",
                            {{"f", r.params.f},
                             {"c", r.params.c},
                             {"d", r.params.d},
                             {"e", r.params.e},
                             {"g", r.params.g},
                             {"strength_ratio", r.params.strength_ratio}}},
                           {"backbone", backbone_to_json(r.backbone)}});
        }
        out << json{{"kind", "wallgp.asce41_baseline"}, {"walls", doc}}.dump(2) << '\n';
        return;
    }
    out << "id,vy_kn,axial_metric,f,c,d,e,g";
    for (auto o : dataset::kOutputs) out << ',' << dataset::output_name(o);
    out << '\n';
    for (const auto& r : rows) {
        out << r.id << ',' << num(r.v_n) << ',' << num(r.state.axial_metric) << ',' << num(r.params.f) << ','
            << num(r.params.c) << ',' << num(r.params.d) << ',' << num(r.params.e) << ',' << num(r.params.g);
        for (auto o : dataset::kOutputs) out << ',' << num(r.backbone.get(o));
        out << '\n';
    }
}

// ---- synth ----------------------------------------------------------------

void cmd_synth(const SynthOptions& options, const RunConfig& config, std::ostream& out) {
    const auto db = dataset::generate_synthetic_database(options.count, config.seed, options.noise);
    if (options.output) {
        auto f = open_out(*options.output);
        dataset::write_csv(f, db);
    } else {
        dataset::write_csv(out, db);
    }
}

// ---- entry point ----------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian process backbone-curve models for reinforced concrete walls"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "wallgp 1.0");

    // Options shared by every subcommand; file values are applied first, flags override.
    std::string config_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> train_fraction;
    std::string lambda;
    std::string scope;
    std::string features;
    std::string format;
    std::string noise_variance;
    std::optional<int> restarts;
    std::optional<int> threads;
    std::string stress_unit;
    std::string output_dir;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "Run configuration document (JSON)");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--trials", trials, "Number of randomized train/test trials");
        sub->add_option("--train-fraction", train_fraction, "Training share of each split");
        sub->add_option("--lambda", lambda, "Box-Cox lambda: auto, none or a value");
        sub->add_option("--scope", scope, "Specimen scope: s-sf or all");
        sub->add_option("--features", features, "Comma-separated feature columns");
        sub->add_option("--format", format, "Output format: table or doc");
        sub->add_option("--noise-variance", noise_variance, "Fixed latent noise variance, or auto");
        sub->add_option("--restarts", restarts, "Optimizer restarts");
        sub->add_option("--threads", threads, "Worker threads for trials (0 = all cores)");
        sub->add_option("--stress-unit", stress_unit, "Shear-stress metric units: psi or mpa");
        sub->add_option("--out-dir", output_dir, "Directory for report files");
    };

    TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Fit one model per backbone variable");
    train_cmd->add_option("database", train.database, "Specimen CSV")->required();
    train_cmd->add_option("--models", train.model_dir, "Model output directory")->required();
    add_common(train_cmd);

    PredictOptions predict;
    std::string predict_table;
    std::string predict_polyline;
    auto* predict_cmd = app.add_subcommand("predict", "Predict backbone points for new walls");
    predict_cmd->add_option("--models", predict.model_dir, "Model directory")->required();
    predict_cmd->add_option("specimens", predict.specimens, "Specimen CSV")->required();
    predict_cmd->add_option("--table", predict_table, "Write the prediction table as CSV");
    predict_cmd->add_option("--polyline", predict_polyline, "Write backbone polylines as CSV");
    add_common(predict_cmd);

    EvaluateOptions evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Run the repeated split evaluation");
    evaluate_cmd->add_option("database", evaluate.database, "Specimen CSV")->required();
    evaluate_cmd->add_flag("--compare-asce41", evaluate.compare_asce41, "Add the ASCE 41 comparison");
    add_common(evaluate_cmd);

    ExtractOptions extract;
    std::string yield = "eeep";
    std::string extract_polyline;
    auto* extract_cmd = app.add_subcommand("extract", "Extract backbone points from a hysteresis record");
    extract_cmd->add_option("hysteresis", extract.hysteresis, "Hysteresis CSV (disp_mm,force_kn)")->required();
    extract_cmd->add_option("--height", extract.height, "Wall height, mm")->required();
    extract_cmd->add_option("--id", extract.id, "Specimen id for the output");
    extract_cmd->add_option("--yield", yield, "Yield idealization: eeep or secant");
    extract_cmd->add_option("--polyline", extract_polyline, "Write the backbone polyline as CSV");
    add_common(extract_cmd);

    Asce41Options baseline;
    std::string baseline_specimens;
    std::string baseline_polyline;
    auto* asce_cmd = app.add_subcommand("asce41", "Shear-controlled ASCE 41 backbone");
    asce_cmd->add_option("--specimens", baseline_specimens, "Specimen CSV");
    asce_cmd->add_option("--vy", baseline.v_y, "Yield (nominal) shear strength, kN");
    asce_cmd->add_option("--height", baseline.height, "Wall height, mm");
    asce_cmd->add_option("--axial", baseline.axial, "Axial metric");
    asce_cmd->add_option("--polyline", baseline_polyline, "Write backbone polylines as CSV");
    add_common(asce_cmd);

    SynthOptions synth;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic specimen database");
    synth_cmd->add_option("--count", synth.count, "Number of specimens");
    synth_cmd->add_option("--noise", synth.noise, "Multiplicative noise level (log-normal sigma)");
    synth_cmd->add_option("--out", synth_out, "Output CSV (stdout when omitted)");
    add_common(synth_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg_out;
        std::ostringstream msg_err;
        const int code = app.exit(e, msg_out, msg_err);
        out << msg_out.str();
        err << msg_err.str();
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig config;
        if (!config_file.empty()) config = load_config(config_file, config);
        if (seed) config.seed = *seed;
        if (trials) config.trials = *trials;
        if (train_fraction) config.train_fraction = *train_fraction;
        if (!lambda.empty()) config.transform = parse_lambda(lambda);
        if (!scope.empty()) config.scope = parse_scope(scope);
        if (!features.empty()) config.features = parse_feature_list(features);
        if (!format.empty()) {
            if (format == "table") {
                config.format = OutputFormat::Table;
            } else if (format == "doc") {
                config.format = OutputFormat::Document;
            } else {
                fail(ErrorCode::ConfigError, "--format must be 'table' or 'doc'");
            }
        }
        if (!noise_variance.empty()) {
            config = config_from_document(json{{"optimizer", {{"noise_variance", noise_variance == "auto"
                                                                                     ? json("auto")
                                                                                     : json(std::stod(noise_variance))}}}},
                                          config);
        }
        if (restarts) config.optimizer.restarts = *restarts;
        if (threads) config.threads = *threads;
        if (!stress_unit.empty()) config = config_from_document(json{{"stress_unit", stress_unit}}, config);
        if (!output_dir.empty()) config.output_dir = output_dir;
        validate(config);

        if (train_cmd->parsed()) {
            cmd_train(train, config, out);
        } else if (predict_cmd->parsed()) {
            if (!predict_table.empty()) predict.table_csv = predict_table;
            if (!predict_polyline.empty()) predict.polyline_csv = predict_polyline;
            cmd_predict(predict, config, out);
        } else if (evaluate_cmd->parsed()) {
            cmd_evaluate(evaluate, config, out);
        } else if (extract_cmd->parsed()) {
            if (yield == "eeep") {
                extract.extraction.yield = dataset::YieldStrategy::EquivalentEnergy;
            } else if (yield == "secant") {
                extract.extraction.yield = dataset::YieldStrategy::SecantFraction;
            } else {
                fail(ErrorCode::ConfigError, "--yield must be 'eeep' or 'secant'");
            }
            if (!extract_polyline.empty()) extract.polyline_csv = extract_polyline;
            cmd_extract(extract, config, out);
        } else if (asce_cmd->parsed()) {
            if (!baseline_specimens.empty()) baseline.specimens = baseline_specimens;
            if (!baseline_polyline.empty()) baseline.polyline_csv = baseline_polyline;
            cmd_asce41(baseline, config, out);
        } else if (synth_cmd->parsed()) {
            if (!synth_out.empty()) synth.output = synth_out;
            cmd_synth(synth, config, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace wallgp::cli
