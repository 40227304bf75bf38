#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heis/errors.hpp"
#include "heis/flows.hpp"
#include "heis/maps.hpp"
#include "heis/parse.hpp"
#include "heis/replay.hpp"

using namespace heis;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  int n = 1;
  std::string map;
  std::vector<std::string> maps;
  std::string phi;
  std::vector<std::string> points;
  std::vector<std::string> params;
  std::vector<std::string> w{"T"};
  double smax = 1.0;
  double step = 1e-3;
  double tol = 1e-6;
  double box = 1.0;
  std::uint64_t seed = 1;
  int count = 20;
  int jobs = 1;
  std::string out;
  std::string format = "text";
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string join(const std::vector<std::string>& v, char sep = ',') {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : std::string(1, sep)) + x;
  return s;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// A spec file when the path exists, a corpus name otherwise.
ContactMap resolve_map(const std::string& spec, int n) {
  if (std::filesystem::is_regular_file(spec)) return load_map_spec(spec);
  try {
    return corpus::by_name(spec, n);
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError("unknown map '" + spec + "': " + e.what());
  }
}

/// Values for the formal parameters of `vars` from name=value pairs.
std::vector<double> param_values(const VarSetPtr& vars, const std::vector<std::string>& pairs) {
  std::vector<double> out(vars->params().size());
  std::vector<bool> set(out.size());
  for (const auto& p : pairs) {
    auto eq = p.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + p + "'");
    std::string name = p.substr(0, eq);
    auto idx = vars->find(name);
    if (!idx || !vars->is_param(*idx)) throw UsageError("map has no parameter '" + name + "'");
    auto v = parse_doubles(p.substr(eq + 1));
    if (v.size() != 1) throw UsageError("--param " + name + " needs one value");
    std::size_t k = static_cast<std::size_t>(*idx - vars->coord_count());
    out[k] = v[0];
    set[k] = true;
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    if (!set[k]) throw UsageError("parameter '" + vars->params()[k] + "' needs a value (--param " + vars->params()[k] + "=...)");
  return out;
}

json report_json(const Report& r) {
  json ctx = json::object();
  for (const auto& [k, v] : r.context()) ctx[k] = v;
  json res = json::array();
  for (const auto& x : r.residuals()) res.push_back({{"id", x.id}, {"ok", x.ok}, {"residual", x.digest()}});
  return {{"check", r.check()}, {"pass", r.pass()}, {"context", ctx}, {"residuals", res}};
}

/// Prints header, reports and verdict in the requested format.
int emit(const RunConfig& cfg, const std::vector<std::pair<std::string, std::string>>& header,
         const std::vector<Report>& reports, bool to_out) {
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass();
  std::string text;
  if (cfg.format == "json") {
    json h = json::object();
    for (const auto& [k, v] : header) h[k] = v;
    json rs = json::array();
    for (const auto& r : reports) rs.push_back(report_json(r));
    json doc = {{"command", cfg.command}, {"config", h}, {"pass", pass}, {"reports", rs}};
    text = doc.dump(2) + "\n";
  } else {
    text = "# heis " + cfg.command;
    for (const auto& [k, v] : header) text += " " + k + "=" + v;
    text += "\n";
    for (const auto& r : reports) text += r.to_text();
    text += std::string("verdict ") + (pass ? "PASS" : "FAIL") + "\n";
  }
  if (to_out && !cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + cfg.out);
    f << text;
  } else {
    std::cout << text;
  }
  return pass ? kPass : kFail;
}

std::vector<std::pair<std::string, std::string>> base_header(const RunConfig& cfg) {
  return {{"n", std::to_string(cfg.n)}, {"seed", std::to_string(cfg.seed)}, {"jobs", std::to_string(cfg.jobs)}};
}

int cmd_identities(const RunConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 3) throw UsageError("identities needs n in 1..3");
  std::vector<Report> reports{frame_brackets(cfg.n), complexified_identities(cfg.n), factorization_identity(cfg.n),
                              random_operator_identities(cfg.n, cfg.seed, cfg.count)};
  auto h = base_header(cfg);
  h.emplace_back("count", std::to_string(cfg.count));
  return emit(cfg, h, reports, true);
}

int cmd_check_map(const RunConfig& cfg) {
  if (cfg.map.empty()) throw UsageError("check-map needs --map");
  ContactMap F = resolve_map(cfg.map, cfg.n);
  std::vector<Report> reports{is_contact(F)};
  if (reports.back().pass()) {
    try {
      reports.push_back(is_conformal(F));
      reports.push_back(cr_check(F));
      reports.push_back(lambda_nu_check(F));
    } catch (const NotContact& e) {
      Report r("check_map");
      r.add_flag("contact", false, e.what());
      reports.push_back(r);
    }
  }
  auto h = base_header(cfg);
  h[0].second = std::to_string(F.n());
  h.emplace_back("map", F.name());
  return emit(cfg, h, reports, true);
}

int cmd_replay(const RunConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 3) throw UsageError("replay needs n in 1..3");
  std::vector<std::string> names = cfg.maps.empty() ? default_replay_maps(cfg.n) : cfg.maps;
  std::vector<ContactMap> maps;
  for (const auto& name : names) {
    maps.push_back(resolve_map(name, cfg.n));
    if (maps.back().n() != cfg.n) throw UsageError("map '" + name + "' is not on H^" + std::to_string(cfg.n));
  }
  ReplayOptions opts;
  opts.jobs = cfg.jobs;
  Bundle b = replay_maps(cfg.n, maps, opts);
  auto h = base_header(cfg);
  h.emplace_back("maps", join(names));
  h.emplace_back("ytilde_sign", std::to_string(b.ytilde_sign));
  return emit(cfg, h, b.reports, true);
}

int cmd_flow(const RunConfig& cfg) {
  if (cfg.phi.empty()) throw UsageError("flow needs --phi");
  if (cfg.n < 1 || cfg.n > 3) throw UsageError("flow needs n in 1..3");
  VarSetPtr vars = make_varset(cfg.n);
  RationalFn phi = parse_rational(cfg.phi, vars);
  FlowConfig fc;
  fc.s_max = cfg.smax;
  fc.step = cfg.step;
  fc.tolerance = cfg.tol;
  fc.box_half = cfg.box;
  fc.jobs = cfg.jobs;
  try {
    fc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  KRResult res = kr_experiment(make_kr_potential(phi, vars, cfg.box), fc);
  auto h = base_header(cfg);
  h.insert(h.end(), {{"phi", phi.to_string()},
                     {"box", fmt(fc.box_half)},
                     {"smax", fmt(fc.s_max)},
                     {"step", fmt(fc.step)},
                     {"tol", fmt(fc.tolerance)},
                     {"bound_slack", fmt(fc.bound_slack)},
                     {"contact_tol", fmt(fc.contact_tolerance)},
                     {"sample_stride", std::to_string(fc.sample_stride)},
                     {"csv", cfg.out.empty() ? "none" : cfg.out}});
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + cfg.out);
    f << traces_to_csv(res.traces, cfg.n);
  }
  return emit(cfg, h, {res.report}, false);
}

int cmd_rivf(const RunConfig& cfg) {
  if (cfg.map.empty()) throw UsageError("rivf-check needs --map");
  ContactMap F = resolve_map(cfg.map, cfg.n);
  int n = F.n();
  std::vector<double> params = param_values(F.vars(), cfg.params);
  std::vector<std::vector<double>> points;
  for (const auto& p : cfg.points) {
    points.push_back(parse_doubles(p));
    if (static_cast<int>(points.back().size()) != 2 * n + 1)
      throw UsageError("--point needs " + std::to_string(2 * n + 1) + " coordinates");
  }
  if (points.empty()) points = default_rivf_points(n);
  FlowConfig fc;
  fc.tolerance = cfg.tol;
  try {
    fc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<Report> reports;
  for (const auto& w : cfg.w) {
    LieVector<Scalar> W;
    try {
      W = basis_vector(w, n);
    } catch (const std::exception& e) {
      throw UsageError("--w: " + std::string(e.what()));
    }
    reports.push_back(rivf_check(F, W, points, fc, params));
  }
  auto h = base_header(cfg);
  h[0].second = std::to_string(n);
  std::vector<std::string> pts;
  for (const auto& p : points) {
    std::string s;
    for (double c : p) s += (s.empty() ? "" : ";") + fmt(c);
    pts.push_back(s);
  }
  h.insert(h.end(), {{"map", F.name()},
                     {"w", join(cfg.w)},
                     {"points", join(pts, '|')},
                     {"params", cfg.params.empty() ? "none" : join(cfg.params)},
                     {"tol", fmt(fc.tolerance)},
                     {"fd_step", fmt(fc.fd_step)}});
  return emit(cfg, h, reports, true);
}

int default_n() {
  const char* env = std::getenv("HEIS_DEFAULT_N");
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    int n = std::stoi(env, &used);
    if (used == std::string(env).size()) return n;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("HEIS_DEFAULT_N is not an integer: ") + env);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg.n = default_n();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Exact and numeric checks for conformal maps of the Heisenberg group"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Dimension n of H^n (default $HEIS_DEFAULT_N or 1)");
    sub->add_option("--out", cfg.out, "Output file");
    sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", cfg.seed, "Seed for random sampling");
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  };

  auto* ids = app.add_subcommand("identities", "Frame brackets, complexified identities and the factorization");
  common(ids);
  ids->add_option("--count", cfg.count, "Random operator triples")->check(CLI::NonNegativeNumber);

  auto* chk = app.add_subcommand("check-map", "Contact, conformality, CR and lambda checks for one map");
  common(chk);
  chk->add_option("--map,map", cfg.map, "Spec file or corpus name");

  auto* rep = app.add_subcommand("replay", "Replay the regularity argument over a set of maps");
  common(rep);
  rep->add_option("--maps", cfg.maps, "Comma-separated spec files or corpus names")->delimiter(',');

  auto* flow = app.add_subcommand("flow", "Korányi-Reimann flow distortion experiment");
  common(flow);
  flow->add_option("--phi", cfg.phi, "Potential phi")->required();
  flow->add_option("--box", cfg.box, "Half width of the box");
  flow->add_option("--smax", cfg.smax, "Flow time");
  flow->add_option("--step", cfg.step, "RK4 step");
  flow->add_option("--tol", cfg.tol, "Step-halving tolerance");

  auto* rivf = app.add_subcommand("rivf-check", "Finite-difference check of the mirror derivative formula");
  common(rivf);
  rivf->add_option("--map", cfg.map, "Spec file or corpus name")->required();
  rivf->add_option("--w", cfg.w, "Lie vectors X<j>, Y<j> or T")->delimiter(',');
  rivf->add_option("--point", cfg.points, "Sample point x1,..,yn,t (repeatable)");
  rivf->add_option("--param", cfg.params, "Parameter value name=value (repeatable)");
  rivf->add_option("--tol", cfg.tol, "Relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (cfg.command == "identities") return cmd_identities(cfg);
    if (cfg.command == "check-map") return cmd_check_map(cfg);
    if (cfg.command == "replay") return cmd_replay(cfg);
    if (cfg.command == "flow") return cmd_flow(cfg);
    if (cfg.command == "rivf-check") return cmd_rivf(cfg);
  } catch (const FlowError& e) {
    std::cerr << "flow failed: " << e.what() << "\n";
    return kFail;
  } catch (const std::invalid_argument& e) {
    // ParseError, UsageError, DimensionMismatch, unknown variables
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
