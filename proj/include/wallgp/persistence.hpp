#pragma once

#include <filesystem>

#include <json.hpp>

#include "wallgp/gpr.hpp"

namespace wallgp::persistence {

inline constexpr int kModelSchemaVersion = 1;

// Model document: schema_version, output/feature names, standardizer stats,
// output transform, hyperparameters and the (transformed) training set.
// Doubles are written in shortest round-trip form, so a reload reproduces
// predictions bit for bit.
nlohmann::json model_to_document(const gpr::GprModel& model);
gpr::GprModel model_from_document(const nlohmann::json& doc);

void save_model(const gpr::GprModel& model, const std::filesystem::path& path);
gpr::GprModel load_model(const std::filesystem::path& path);

// Shared helpers for every document this project writes.
nlohmann::json read_document(const std::filesystem::path& path);
void write_document(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace wallgp::persistence
