#include "nnpart/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nnpart/errors.hpp"
#include "nnpart/kernels.hpp"
#include "nnpart/ledger.hpp"

namespace nnpart {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(x))
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  long x = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const long x = to_long(key, v);
  if (x < -1000000000L || x > 1000000000L) throw ConfigError(key + ": out of range");
  return static_cast<int>(x);
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

std::string num(double x) { return format_number(x); }

const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"dimension", {[](C& c, S k, S v) { c.dimension = to_long(k, v); }, [](const C& c) { return std::to_string(c.dimension); }}},
      {"labels", {[](C& c, S k, S v) { c.labels = to_int(k, v); }, [](const C& c) { return std::to_string(c.labels); }}},
      {"metric", {[](C& c, S, S v) { c.metric = parse_metric(v); }, [](const C& c) { return metric_name(c.metric); }}},
      {"alpha", {[](C& c, S k, S v) { c.alpha = to_double(k, v); }, [](const C& c) { return num(c.alpha); }}},
      {"p", {[](C& c, S k, S v) { c.p = to_double(k, v); }, [](const C& c) { return num(c.p); }}},
      {"delta", {[](C& c, S k, S v) { c.delta = to_double(k, v); }, [](const C& c) { return num(c.delta); }}},
      {"rounds", {[](C& c, S k, S v) { c.rounds = to_long(k, v); }, [](const C& c) { return std::to_string(c.rounds); }}},
      {"seed", {[](C& c, S k, S v) { c.seed = to_u64(k, v); }, [](const C& c) { return std::to_string(c.seed); }}},
      {"adversary", {[](C& c, S, S v) { c.adversary = v; }, [](const C& c) { return c.adversary; }}},
      {"adversary.gamma", {[](C& c, S k, S v) { c.adversary_gamma = to_double(k, v); }, [](const C& c) { return num(c.adversary_gamma); }}},
      {"adversary.candidates", {[](C& c, S k, S v) { c.adversary_candidates = to_int(k, v); }, [](const C& c) { return std::to_string(c.adversary_candidates); }}},
      {"adversary.replay_file", {[](C& c, S, S v) { c.replay_file = v; }, [](const C& c) { return c.replay_file; }}},
      {"centers", {[](C& c, S, S v) { c.centers = v; }, [](const C& c) { return c.centers; }}},
      {"report.gamma", {[](C& c, S k, S v) { c.report_gamma = to_double(k, v); }, [](const C& c) { return num(c.report_gamma); }}},
      {"learner", {[](C& c, S, S v) { c.learner = v; }, [](const C& c) { return c.learner; }}},
      {"lowerbound.replications", {[](C& c, S k, S v) { c.replications = to_int(k, v); }, [](const C& c) { return std::to_string(c.replications); }}},
      {"solver.lp_tolerance", {[](C& c, S k, S v) { c.lp_tolerance = to_double(k, v); }, [](const C& c) { return num(c.lp_tolerance); }}},
      {"solver.mc_samples", {[](C& c, S k, S v) { c.mc_samples = to_long(k, v); }, [](const C& c) { return std::to_string(c.mc_samples); }}},
      {"solver.burn_in", {[](C& c, S k, S v) { c.burn_in = to_long(k, v); }, [](const C& c) { return std::to_string(c.burn_in); }}},
      {"solver.i_min", {[](C& c, S k, S v) { c.i_min = to_int(k, v); }, [](const C& c) { return std::to_string(c.i_min); }}},
      {"solver.i_max", {[](C& c, S k, S v) { if (v == "auto") c.i_max.reset(); else c.i_max = to_int(k, v); },
                        [](const C& c) { return c.i_max ? std::to_string(*c.i_max) : std::string("auto"); }}},
      {"solver.c_scale", {[](C& c, S k, S v) { c.c_scale = to_double(k, v); }, [](const C& c) { return num(c.c_scale); }}},
      {"solver.selection_constant", {[](C& c, S k, S v) { c.selection_constant = to_double(k, v); }, [](const C& c) { return num(c.selection_constant); }}},
      {"solver.slack_constant", {[](C& c, S k, S v) { c.slack_constant = to_double(k, v); }, [](const C& c) { return num(c.slack_constant); }}},
      {"solver.i_cap", {[](C& c, S k, S v) { c.i_cap = to_int(k, v); }, [](const C& c) { return std::to_string(c.i_cap); }}},
      {"solver.max_lifted_dim", {[](C& c, S k, S v) { c.max_lifted_dim = to_long(k, v); }, [](const C& c) { return std::to_string(c.max_lifted_dim); }}},
      {"output.ledger", {[](C& c, S, S v) { c.ledger_path = v; }, [](const C& c) { return c.ledger_path; }}},
      {"output.summary", {[](C& c, S, S v) { c.summary_path = v; }, [](const C& c) { return c.summary_path; }}},
      {"output.sweep", {[](C& c, S, S v) { c.sweep_path = v; }, [](const C& c) { return c.sweep_path; }}},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [k, f] : fields())
    if (k == key) return &f;
  return nullptr;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key.rfind("grid.", 0) == 0) {
    const std::string axis = key.substr(5);
    if (!find_field(axis)) throw ConfigError("unknown grid key '" + axis + "'");
    std::vector<std::string> values;
    if (!trim(value).empty()) values = split(value, ',');
    for (const auto& v : values) {
      if (v.empty()) throw ConfigError("grid." + axis + ": empty value in list");
      ExperimentConfig probe = *this;
      probe.set(axis, v);  // reject bad values up front
    }
    for (auto& g : grid) {
      if (g.first == axis) {
        g.second = std::move(values);
        return;
      }
    }
    grid.emplace_back(axis, std::move(values));
    return;
  }
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key '" + key + "'");
  f->set(*this, key, value);
}

std::optional<std::vector<Eigen::VectorXd>> ExperimentConfig::explicit_centers() const {
  if (centers == "random") return std::nullopt;
  std::vector<Eigen::VectorXd> out;
  for (const auto& part : split(centers, ';')) {
    const auto coords = split(part, ',');
    Eigen::VectorXd x(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) x[static_cast<Eigen::Index>(i)] = to_double("centers", coords[i]);
    out.push_back(std::move(x));
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (dimension < 1) throw ConfigError("dimension must be positive");
  if (labels < 2) throw ConfigError("labels must be at least 2");
  if (rounds < 0) throw ConfigError("rounds must be nonnegative");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (metric != Metric::InnerProduct && alpha != 1.0)
    throw ConfigError("alpha applies to the inner_product metric only; l2 and lp lifts fix their own exponent");
  if (metric == Metric::Lp && !(p >= 2.0)) throw ConfigError("lp metric needs p >= 2");
  if (delta < 0.0) throw ConfigError("delta must be nonnegative");
  const bool even_p = std::abs(p - std::round(p)) < 1e-12 && static_cast<long>(std::round(p)) % 2 == 0;
  if (metric == Metric::Lp && !even_p && learner == "reduction") {
    if (!(p > 2.0)) throw ConfigError("lp metric with p that is not an even integer needs p > 2");
    if (!(delta > 0.0)) throw ConfigError("lp metric with p that is not an even integer needs delta > 0");
    GeneralPKernel(p, dimension, 1, c_scale);  // p·δ_1 <= 1 and integral D_i
    if (!(selection_constant > 0.0)) throw ConfigError("solver.selection_constant must be positive");
    if (!(slack_constant > 2.0)) throw ConfigError("solver.slack_constant must exceed 2");
    if (i_cap < 0) throw ConfigError("solver.i_cap must be nonnegative");
  }
  if (adversary != "uniform_ball" && adversary != "margin" && adversary != "adaptive_width" &&
      adversary != "replay" && adversary != "lowerbound")
    throw ConfigError("unknown adversary '" + adversary + "'");
  if (adversary == "margin" && adversary_gamma < 0.0) throw ConfigError("adversary.gamma must be nonnegative");
  if (adversary == "replay" && replay_file.empty()) throw ConfigError("replay adversary needs adversary.replay_file");
  if (adversary_candidates < 1) throw ConfigError("adversary.candidates must be positive");
  if (report_gamma < 0.0) throw ConfigError("report.gamma must be nonnegative");
  if (learner != "reduction" && learner != "random") throw ConfigError("learner must be reduction or random");
  if (replications < 1) throw ConfigError("lowerbound.replications must be positive");
  if (!(lp_tolerance > 0.0)) throw ConfigError("solver.lp_tolerance must be positive");
  if (mc_samples < 1 || burn_in < 1) throw ConfigError("solver.mc_samples and solver.burn_in must be positive");
  if (i_max && *i_max < i_min) throw ConfigError("solver.i_max must be at least solver.i_min");
  if (max_lifted_dim < 1) throw ConfigError("solver.max_lifted_dim must be positive");
  if (auto c = explicit_centers()) {
    if (static_cast<int>(c->size()) != labels) throw ConfigError("centers: expected one center per label");
    for (const auto& x : *c) {
      if (x.size() != dimension) throw ConfigError("centers: wrong dimension");
      if (x.norm() > 1.0 + 1e-9) throw ConfigError("centers must lie in the unit ball");
    }
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::effective() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, f] : fields()) out.emplace_back(k, f.get(*this));
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace nnpart
