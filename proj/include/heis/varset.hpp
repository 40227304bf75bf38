#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heis {

/// Ordered ring variables x1..xn, y1..yn, t followed by formal parameters.
/// Parameters are constants for differentiation.
class VarSet {
 public:
  explicit VarSet(int n, std::vector<std::string> params = {});

  int n() const { return n_; }
  int coord_count() const { return 2 * n_ + 1; }
  int size() const { return coord_count() + static_cast<int>(params_.size()); }

  /// 1-based j, as in x_j.
  int x(int j) const;
  int y(int j) const;
  int t() const { return 2 * n_; }
  /// Horizontal coordinate k in 1..2n (x_{n+j} = y_j).
  int horizontal(int k) const;
  int param(std::string_view name) const;

  bool is_param(int index) const { return index >= coord_count(); }
  const std::vector<std::string>& params() const { return params_; }
  std::string name(int index) const;
  std::optional<int> find(std::string_view name) const;

  friend bool operator==(const VarSet&, const VarSet&) = default;

 private:
  int n_;
  std::vector<std::string> params_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline VarSetPtr make_varset(int n, std::vector<std::string> params = {}) {
  return std::make_shared<const VarSet>(n, std::move(params));
}

}  // namespace heis
