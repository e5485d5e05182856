#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace tmm {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;  // one line
  std::vector<std::string> details;
  nlohmann::json data;
  double seconds = 0.0;
};

constexpr int criterion_count = 12;

// Throws ValidationError for ids outside 1..12.
CriterionResult run_criterion(int id);
// All criteria when `only` is empty.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {});

std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

}  // namespace tmm
