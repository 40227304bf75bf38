#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heis/rational.hpp"

namespace heis {

/// One checked equation. Symbolic residuals pass only when identically zero;
/// numeric ones when the magnitude is at most the tolerance.
struct Residual {
  std::string id;
  bool ok = true;
  std::optional<RationalFn> symbolic;
  double magnitude = 0.0;
  double tolerance = 0.0;
  std::string note;

  /// Short printable form of the residual.
  std::string digest(std::size_t max_len = 80) const;
};

class Report {
 public:
  Report() = default;
  explicit Report(std::string check) : check_(std::move(check)) {}

  const std::string& check() const { return check_; }
  const std::vector<Residual>& residuals() const { return residuals_; }
  const std::vector<std::pair<std::string, std::string>>& context() const { return context_; }
  bool pass() const;
  /// First failing residual id, or empty.
  std::string first_failure() const;

  Report& with(std::string key, std::string value);
  void add_symbolic(std::string id, RationalFn residual);
  void add_numeric(std::string id, double magnitude, double tolerance, std::string note = {});
  void add_flag(std::string id, bool ok, std::string note = {});
  /// Copies the residuals of `other` with ids prefixed by its check name.
  void absorb(const Report& other);

  /// Line-oriented text: a header line, then one line per residual.
  std::string to_text() const;

 private:
  std::string check_;
  std::vector<std::pair<std::string, std::string>> context_;
  std::vector<Residual> residuals_;
};

}  // namespace heis
