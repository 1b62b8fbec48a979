#include "wallgp/persistence.hpp"

#include <fstream>
#include <string>

#include "wallgp/error.hpp"

namespace wallgp::persistence {

using nlohmann::json;

namespace {

json vector_to_json(const numerics::Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

numerics::Vector vector_from_json(const json& j, const char* key) {
    if (!j.is_array()) fail(ErrorCode::SchemaMismatch, std::string("model document: '") + key + "' must be an array");
    numerics::Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

json matrix_to_json(const numerics::Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
    return rows;
}

numerics::Matrix matrix_from_json(const json& j, const char* key) {
    if (!j.is_array() || j.empty()) {
        fail(ErrorCode::SchemaMismatch, std::string("model document: '") + key + "' must be a non-empty array");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    numerics::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            fail(ErrorCode::SchemaMismatch, std::string("model document: ragged rows in '") + key + "'");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

const json& require(const json& doc, const char* key) {
    if (!doc.contains(key)) fail(ErrorCode::SchemaMismatch, std::string("model document: missing '") + key + "'");
    return doc.at(key);
}

}  // namespace

json model_to_document(const gpr::GprModel& model) {
    const auto& t = model.target_transform();
    json doc;
    doc["schema_version"] = kModelSchemaVersion;
    doc["kind"] = "wallgp.gpr_model";
    doc["output"] = model.output_name();
    doc["features"] = model.feature_names();
    doc["standardizer"] = {{"mean", vector_to_json(model.standardizer().mean)},
                           {"scale", vector_to_json(model.standardizer().scale)}};
    doc["target_transform"] = {{"boxcox", t.boxcox_enabled},
                               {"lambda", t.boxcox.lambda},
                               {"shift", t.boxcox.shift},
                               {"center", t.center},
                               {"scale", t.scale}};
    doc["kernel"] = {{"type", "se_ard"},
                     {"signal_variance", model.params().signal_variance},
                     {"lengthscales", vector_to_json(model.params().lengthscales)},
                     {"noise_variance", model.params().noise_variance}};
    doc["training_inputs"] = matrix_to_json(model.training_inputs());
    doc["training_targets"] = vector_to_json(model.training_targets());
    return doc;
}

gpr::GprModel model_from_document(const json& doc) {
    try {
        const int version = require(doc, "schema_version").get<int>();
        if (version != kModelSchemaVersion) {
            fail(ErrorCode::SchemaMismatch, "model document: unsupported schema_version " + std::to_string(version));
        }
        const json& s = require(doc, "standardizer");
        transforms::Standardizer standardizer{vector_from_json(require(s, "mean"), "standardizer.mean"),
                                              vector_from_json(require(s, "scale"), "standardizer.scale")};
        const json& t = require(doc, "target_transform");
        transforms::TargetTransform target;
        target.boxcox_enabled = require(t, "boxcox").get<bool>();
        target.boxcox.lambda = require(t, "lambda").get<double>();
        target.boxcox.shift = require(t, "shift").get<double>();
        target.center = require(t, "center").get<double>();
        target.scale = require(t, "scale").get<double>();
        const json& k = require(doc, "kernel");
        gpr::KernelParams params;
        params.signal_variance = require(k, "signal_variance").get<double>();
        params.lengthscales = vector_from_json(require(k, "lengthscales"), "kernel.lengthscales");
        params.noise_variance = require(k, "noise_variance").get<double>();
        return gpr::GprModel::assemble(matrix_from_json(require(doc, "training_inputs"), "training_inputs"),
                                       vector_from_json(require(doc, "training_targets"), "training_targets"),
                                       std::move(params), std::move(standardizer), target,
                                       require(doc, "features").get<std::vector<std::string>>(),
                                       require(doc, "output").get<std::string>());
    } catch (const json::exception& e) {
        fail(ErrorCode::SchemaMismatch, std::string("model document: ") + e.what());
    }
}

json read_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
    }
}

void write_document(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

void save_model(const gpr::GprModel& model, const std::filesystem::path& path) {
    write_document(model_to_document(model), path);
}

gpr::GprModel load_model(const std::filesystem::path& path) { return model_from_document(read_document(path)); }

}  // namespace wallgp::persistence
