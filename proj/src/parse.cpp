#include "heis/parse.hpp"

#include <algorithm>
#include <cctype>

#include "parser_core.hpp"

namespace heis {

namespace {

struct RationalBuilder {
  using Value = RationalFn;
  VarSetPtr vars;

  Value number(Scalar s) { return RationalFn(vars, Polynomial(std::move(s))); }
  Value identifier(const std::string& name, std::size_t pos) {
    if (name == "i") return RationalFn(vars, Polynomial(Scalar::i()));
    auto idx = vars->find(name);
    if (!idx) throw ParseError("unknown identifier '" + name + "'", pos);
    return RationalFn::var(vars, *idx);
  }
  bool is_function(const std::string&) const { return false; }
  Value call(const std::string& name, Value, std::size_t pos) { throw ParseError("unknown function " + name, pos); }
  Value bracket(Value, Value, std::size_t pos) { throw ParseError("brackets need operator operands", pos); }
  Value add(Value a, Value b) { return a + b; }
  Value sub(Value a, Value b) { return a - b; }
  Value mul(Value a, Value b) { return a * b; }
  Value div(Value a, Value b, std::size_t pos) {
    if (b.is_zero()) throw ParseError("division by zero", pos);
    return a / b;
  }
  Value neg(Value a) { return -a; }
  Value pow(Value a, int e, std::size_t pos) {
    if (e < 0 && a.is_zero()) throw ParseError("negative power of zero", pos);
    return a.pow(e);
  }
};

}  // namespace

RationalFn parse_rational(std::string_view text, const VarSetPtr& vars) {
  if (!vars) throw std::invalid_argument("parse_rational needs a variable set");
  RationalBuilder builder{vars};
  detail::Parser<RationalBuilder> parser(text, builder);
  return parser.parse();
}

std::vector<std::string> collect_parameters(std::string_view text, int n, const std::vector<std::string>& reserved) {
  VarSet coords(n);
  std::vector<std::string> out;
  std::size_t k = 0;
  while (k < text.size()) {
    char c = text[k];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '.')) ++k;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = k;
      while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_')) ++k;
      std::string name(text.substr(start, k - start));
      bool skip = name == "i" || coords.find(name).has_value() ||
                  std::find(reserved.begin(), reserved.end(), name) != reserved.end() ||
                  std::find(out.begin(), out.end(), name) != out.end();
      bool coord_like = name.size() >= 2 && (name[0] == 'x' || name[0] == 'y') &&
                        std::all_of(name.begin() + 1, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
      if (!skip && !coord_like) out.push_back(name);
      continue;
    }
    ++k;
  }
  return out;
}

}  // namespace heis
