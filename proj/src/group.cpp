#include "heis/group.hpp"

namespace heis {

double symplectic_form(std::span<const std::complex<double>> z, std::span<const std::complex<double>> w) {
  if (z.size() != w.size()) throw DimensionMismatch("symplectic_form: dimension mismatch");
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) sum += z[j] * std::conj(w[j]);
  return sum.imag();
}

Scalar symplectic_form(std::span<const Scalar> z, std::span<const Scalar> w) {
  if (z.size() != w.size()) throw DimensionMismatch("symplectic_form: dimension mismatch");
  Scalar sum;
  for (std::size_t j = 0; j < z.size(); ++j) sum += z[j] * w[j].conj();
  return Scalar(sum.im());
}

ComplexPoint to_complex(const Point<Scalar>& p) {
  ComplexPoint out{{}, p.t};
  for (std::size_t j = 0; j < p.x.size(); ++j) out.z.push_back(p.x[j] + p.y[j] * Scalar::i());
  return out;
}

Point<Scalar> from_complex(const ComplexPoint& p) {
  std::vector<Scalar> x;
  std::vector<Scalar> y;
  for (const auto& z : p.z) {
    x.emplace_back(z.re());
    y.emplace_back(z.im());
  }
  return Point<Scalar>(std::move(x), std::move(y), p.t);
}

ComplexPoint group_mul(const ComplexPoint& p, const ComplexPoint& q) {
  if (p.z.size() != q.z.size()) throw DimensionMismatch("group_mul: points of different dimension");
  ComplexPoint r = p;
  for (std::size_t j = 0; j < p.z.size(); ++j) r.z[j] += q.z[j];
  Scalar w = symplectic_form(p.z, q.z);
  r.t = p.t + q.t + w + w;
  return r;
}

}  // namespace heis
