#include "heis/varset.hpp"

#include <algorithm>
#include <stdexcept>

#include "heis/polynomial.hpp"

namespace heis {

VarSet::VarSet(int n, std::vector<std::string> params) : n_(n), params_(std::move(params)) {
  if (n < 1) throw std::invalid_argument("dimension n must be at least 1");
  if (size() > kMaxVars) throw std::invalid_argument("too many variables for the polynomial ring");
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const auto& p = params_[k];
    bool coord_like = p.size() >= 2 && (p[0] == 'x' || p[0] == 'y') &&
                      std::all_of(p.begin() + 1, p.end(), [](char c) { return c >= '0' && c <= '9'; });
    bool duplicate = std::find(params_.begin(), params_.begin() + static_cast<std::ptrdiff_t>(k), p) !=
                     params_.begin() + static_cast<std::ptrdiff_t>(k);
    if (p.empty() || p == "i" || p == "t" || coord_like || duplicate)
      throw std::invalid_argument("invalid or duplicate parameter name '" + p + "'");
  }
}

int VarSet::x(int j) const {
  if (j < 1 || j > n_) throw std::out_of_range("index j out of range 1..n");
  return j - 1;
}

int VarSet::y(int j) const {
  if (j < 1 || j > n_) throw std::out_of_range("index j out of range 1..n");
  return n_ + j - 1;
}

int VarSet::horizontal(int k) const {
  if (k < 1 || k > 2 * n_) throw std::out_of_range("horizontal index out of range 1..2n");
  return k - 1;
}

int VarSet::param(std::string_view name) const {
  auto it = std::find(params_.begin(), params_.end(), name);
  if (it == params_.end()) throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
  return coord_count() + static_cast<int>(it - params_.begin());
}

std::string VarSet::name(int index) const {
  if (index < 0 || index >= size()) throw std::out_of_range("variable index out of range");
  if (index < n_) return "x" + std::to_string(index + 1);
  if (index < 2 * n_) return "y" + std::to_string(index - n_ + 1);
  if (index == 2 * n_) return "t";
  return params_[static_cast<std::size_t>(index - coord_count())];
}

std::optional<int> VarSet::find(std::string_view name) const {
  if (name == "t") return t();
  if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'y') &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; }) && name[1] != '0') {
    int j = std::stoi(std::string(name.substr(1)));
    if (j >= 1 && j <= n_) return name[0] == 'x' ? x(j) : y(j);
    return std::nullopt;
  }
  auto it = std::find(params_.begin(), params_.end(), name);
  if (it == params_.end()) return std::nullopt;
  return coord_count() + static_cast<int>(it - params_.begin());
}

}  // namespace heis
