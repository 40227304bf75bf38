#include "heis/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace heis {

std::string Residual::digest(std::size_t max_len) const {
  std::string out;
  if (symbolic) {
    out = symbolic->to_string();
  } else if (tolerance > 0.0 || magnitude != 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e (tol %.1e)", magnitude, tolerance);
    out = buf;
  } else {
    out = ok ? "ok" : "failed";
  }
  if (out.size() > max_len) out = out.substr(0, max_len) + "...";
  if (!note.empty()) out += " [" + note + "]";
  return out;
}

bool Report::pass() const {
  for (const auto& r : residuals_)
    if (!r.ok) return false;
  return true;
}

std::string Report::first_failure() const {
  for (const auto& r : residuals_)
    if (!r.ok) return r.id;
  return {};
}

Report& Report::with(std::string key, std::string value) {
  context_.emplace_back(std::move(key), std::move(value));
  return *this;
}

void Report::add_symbolic(std::string id, RationalFn residual) {
  Residual r;
  r.id = std::move(id);
  r.ok = residual.is_zero();
  r.symbolic = std::move(residual);
  residuals_.push_back(std::move(r));
}

void Report::add_numeric(std::string id, double magnitude, double tolerance, std::string note) {
  Residual r;
  r.id = std::move(id);
  r.ok = std::isfinite(magnitude) && magnitude <= tolerance;
  r.magnitude = magnitude;
  r.tolerance = tolerance;
  r.note = std::move(note);
  residuals_.push_back(std::move(r));
}

void Report::add_flag(std::string id, bool ok, std::string note) {
  Residual r;
  r.id = std::move(id);
  r.ok = ok;
  r.note = std::move(note);
  residuals_.push_back(std::move(r));
}

void Report::absorb(const Report& other) {
  for (Residual r : other.residuals_) {
    r.id = other.check_ + "/" + r.id;
    residuals_.push_back(std::move(r));
  }
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "check " << check_ << " " << (pass() ? "PASS" : "FAIL");
  for (const auto& [k, v] : context_) out << " " << k << "=" << v;
  out << "\n";
  for (const auto& r : residuals_) out << "  " << (r.ok ? "ok   " : "FAIL ") << r.id << " " << r.digest() << "\n";
  return out.str();
}

}  // namespace heis
