#include "heis/scalar.hpp"

#include <stdexcept>

namespace heis {

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

Scalar Scalar::from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty numeric literal");
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad numeric literal: " + text);
    q.canonicalize();
    return Scalar(q);
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty() || text.find('.', dot + 1) != std::string::npos)
    throw std::invalid_argument("bad numeric literal: " + text);
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad numeric literal: " + text);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero scalar");
  mpq_class norm = re_ * re_ + im_ * im_;
  return Scalar(re_ / norm, -im_ / norm);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (sgn(o.im_) == 0) {
    if (sgn(o.re_) == 0) throw std::domain_error("division by zero scalar");
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string Scalar::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string im_part;
  if (im_ == 1) {
    im_part = "i";
  } else if (im_ == -1) {
    im_part = "-i";
  } else {
    im_part = im_.get_str() + "*i";
  }
  if (sgn(re_) == 0) return im_part;
  std::string out = "(" + re_.get_str();
  if (im_part[0] != '-') out += "+";
  out += im_part + ")";
  return out;
}

Scalar pow(const Scalar& base, unsigned exponent) {
  Scalar result(1);
  Scalar b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

}  // namespace heis
