#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace steinevt {

// Bad parameters or malformed input.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A bound was requested outside its validity region (sample size too small, threshold gate, ...).
struct GateError : std::runtime_error {
  long required_min_n = -1;
  explicit GateError(const std::string& what, long min_n = -1)
      : std::runtime_error(what), required_min_n(min_n) {}
};

// Quadrature, root finding or limit extrapolation failed to converge.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundTerm {
  std::string stage;
  std::string label;
  double value = 0.0;
  std::string ref;
};

struct BoundReport {
  std::string name;
  std::vector<BoundTerm> terms;
  double total = 0.0;
  std::optional<double> oracle;
  std::map<std::string, double> meta;
  std::vector<std::string> notes;

  void add(std::string stage, std::string label, double value, std::string ref);
  // recomputes total as the plain sum of all terms
  double sum_terms() const;
  double margin() const { return oracle ? total - *oracle : total; }
};

nlohmann::ordered_json to_json(const BoundReport& r);
std::string to_csv(const BoundReport& r);

}  // namespace steinevt
