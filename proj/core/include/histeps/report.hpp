#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace histeps {

struct Report {
  nlohmann::json summary;  // {"runs", "grids", "estimates", "recommendations", "corrupt"}
  std::string text;
};

/// Scans `dir` recursively for run.json, grid.json and estimate.json files.
/// Unreadable or malformed files are listed under "corrupt" and skipped.
/// For each estimated range the two bounds are paired with the best alpha
/// found for that epsilon in any grid of the same rule, falling back to the
/// probe learning rate.
Report build_report(const std::filesystem::path& dir);

}  // namespace histeps
