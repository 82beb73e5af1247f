#include "dmmf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "dmmf/errors.hpp"
#include "dmmf/format.hpp"

namespace dmmf {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

class Reader {
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  std::vector<Section> read(std::istream& in) {
    std::vector<Section> sections;
    std::set<std::string> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (text.empty()) continue;
      if (text.front() == '[') {
        if (text.back() != ']') fail(line, "section header must end with ']'");
        const std::string name = trim(text.substr(1, text.size() - 2));
        if (name.empty()) fail(line, "empty section name");
        if (!seen.insert(name).second) fail(line, "section [" + name + "] appears twice");
        sections.push_back({name, line, {}});
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value'");
      if (sections.empty()) fail(line, "key outside any section");
      Entry e{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
      if (e.key.empty()) fail(line, "empty key");
      if (e.value.empty()) fail(line, "key '" + e.key + "' has no value");
      for (const auto& prev : sections.back().entries)
        if (prev.key == e.key) fail(line, "key '" + e.key + "' repeated (first on line " + std::to_string(prev.line) + ")");
      sections.back().entries.push_back(std::move(e));
    }
    return sections;
  }

  // Runs `f` and rewrites library errors as line-numbered config errors.
  template <class F>
  auto at(int line, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.rfind(source_ + ":", 0) == 0) throw;
      fail(line, what);
    } catch (const Error& e) {
      fail(line, e.what());
    } catch (const std::invalid_argument& e) {
      fail(line, e.what());
    } catch (const std::out_of_range& e) {
      fail(line, e.what());
    }
  }

  double real(const Entry& e) const {
    return at(e.line, [&] {
      try {
        return parse_real(e.value);
      } catch (const std::exception&) {
        fail(e.line, "'" + e.key + "' expects a number, got '" + e.value + "'");
      }
    });
  }

  std::int64_t integer(const Entry& e) const {
    try {
      return parse_integer(e.value);
    } catch (const std::exception&) {
      fail(e.line, "'" + e.key + "' expects an integer, got '" + e.value + "'");
    }
  }

  std::uint64_t unsigned_integer(const Entry& e) const {
    std::size_t used = 0;
    try {
      if (!e.value.empty() && e.value.front() != '-') {
        const auto v = std::stoull(e.value, &used);
        if (used == e.value.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail(e.line, "'" + e.key + "' expects a non-negative integer, got '" + e.value + "'");
  }

  Ratio ratio(const Entry& e) const {
    try {
      return Ratio::parse(e.value);
    } catch (const std::exception&) {
      fail(e.line, "'" + e.key + "' expects a number or fraction, got '" + e.value + "'");
    }
  }

  const std::string& source() const { return source_; }

private:
  std::string source_;
};

// ---------------------------------------------------------------------------
// Strategies

std::map<std::string, std::string> options(const std::vector<std::string>& tok, const std::string& name,
                                           const std::set<std::string>& allowed) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    const auto eq = tok[i].find('=');
    if (eq == std::string::npos) throw ConfigError(name + ": option '" + tok[i] + "' must be key=value");
    const std::string key = tok[i].substr(0, eq);
    if (!allowed.count(key)) throw ConfigError(name + ": unknown option '" + key + "'");
    if (!out.emplace(key, tok[i].substr(eq + 1)).second) throw ConfigError(name + ": option '" + key + "' repeated");
  }
  return out;
}

double option_real(const std::map<std::string, std::string>& o, const std::string& key, const std::string& name) {
  try {
    return parse_real(o.at(key));
  } catch (const std::exception&) {
    throw ConfigError(name + ": " + key + " expects a number");
  }
}

std::int64_t option_integer(const std::map<std::string, std::string>& o, const std::string& key,
                            const std::string& name) {
  try {
    return parse_integer(o.at(key));
  } catch (const std::exception&) {
    throw ConfigError(name + ": " + key + " expects an integer");
  }
}

// ---------------------------------------------------------------------------
// Bound parameters by name

struct ParamField {
  const char* name;
  std::optional<double> BoundParams::*real = nullptr;
  std::optional<std::int64_t> BoundParams::*integer = nullptr;
};

constexpr ParamField kParamFields[] = {
    {"alpha", &BoundParams::alpha, nullptr},     {"beta", &BoundParams::beta, nullptr},
    {"gamma", &BoundParams::gamma, nullptr},     {"r", &BoundParams::r, nullptr},
    {"p", &BoundParams::p, nullptr},             {"lambda1", &BoundParams::lambda1, nullptr},
    {"lambda2", &BoundParams::lambda2, nullptr}, {"min_pi", &BoundParams::min_pi, nullptr},
    {"sigma", &BoundParams::sigma, nullptr},     {"k_max", nullptr, &BoundParams::k_max},
    {"n", nullptr, &BoundParams::n},
};

const ParamField* param_field(const std::string& name) {
  for (const auto& f : kParamFields)
    if (name == f.name) return &f;
  return nullptr;
}

bool param_set(const BoundParams& p, const ParamField& f) {
  return f.real ? (p.*f.real).has_value() : (p.*f.integer).has_value();
}

void param_assign(BoundParams& p, const ParamField& f, double v) {
  if (f.real) {
    p.*f.real = v;
  } else {
    if (v != std::floor(v)) throw ConfigError(std::string(f.name) + " must be an integer");
    p.*f.integer = static_cast<std::int64_t>(v);
  }
}

std::vector<BoundKind> parse_kinds(const std::string& text) {
  std::vector<BoundKind> kinds;
  for (const auto& name : split(text, ',')) {
    if (name.empty()) throw ConfigError("empty bound kind in list");
    const auto k = parse_bound_kind(name);
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end())
      throw ConfigError("bound kind '" + name + "' listed twice");
    kinds.push_back(k);
  }
  return kinds;
}

// ---------------------------------------------------------------------------
// Agents

struct AgentDraft {
  int line = 0;
  AgentSpec spec;
};

AgentDraft parse_agent(const Reader& rd, const Section& sec) {
  AgentDraft out;
  out.line = sec.line;
  bool have_alpha = false, have_strategy = false;
  std::optional<Entry> law, transition, sticky, initial;
  std::map<std::size_t, Entry> state_laws;
  for (const auto& e : sec.entries) {
    if (e.key == "alpha") {
      out.spec.alpha = rd.ratio(e);
      have_alpha = true;
    } else if (e.key == "strategy") {
      out.spec.strategy = rd.at(e.line, [&] { return parse_strategy(e.value); });
      have_strategy = true;
    } else if (e.key == "target") {
      const auto t = rd.integer(e);
      if (t < 0) rd.fail(e.line, "target must be >= 0");
      out.spec.target = static_cast<std::size_t>(t);
    } else if (e.key == "law") {
      law = e;
    } else if (e.key == "transition") {
      transition = e;
    } else if (e.key == "sticky") {
      sticky = e;
    } else if (e.key == "initial_state") {
      initial = e;
    } else if (e.key.rfind("law.", 0) == 0) {
      const Entry idx{e.key, e.key.substr(4), e.line};
      const auto s = rd.integer(idx);
      if (s < 0) rd.fail(e.line, "state index must be >= 0");
      state_laws.emplace(static_cast<std::size_t>(s), e);
    } else {
      rd.fail(e.line, "unknown key '" + e.key + "' in [" + sec.name + "]");
    }
  }
  if (!have_alpha) rd.fail(sec.line, "[" + sec.name + "] needs alpha");
  if (!have_strategy) rd.fail(sec.line, "[" + sec.name + "] needs strategy");

  const int forms = (law ? 1 : 0) + (transition ? 1 : 0) + (sticky ? 1 : 0);
  if (forms > 1) rd.fail(sec.line, "[" + sec.name + "]: give exactly one of law, transition or sticky");
  if (!transition && !state_laws.empty())
    rd.fail(state_laws.begin()->second.line, "law.<state> keys need a transition matrix");
  if (initial && !transition) rd.fail(initial->line, "initial_state needs a transition matrix");

  if (law) {
    out.spec.model = rd.at(law->line, [&] { return MarkovValueModel::iid(parse_state_law(law->value)); });
  } else if (sticky) {
    const auto tok = words(sticky->value);
    if (tok.size() != 2) rd.fail(sticky->line, "sticky expects two numbers: the state-0 share and gamma");
    out.spec.model = rd.at(sticky->line, [&] {
      return MarkovValueModel::sticky_two_state(parse_real(tok[0]), parse_real(tok[1]));
    });
  } else if (transition) {
    Matrix m;
    for (const auto& row : split(transition->value, ';')) {
      std::vector<double> r;
      for (const auto& w : words(row)) {
        try {
          r.push_back(parse_real(w));
        } catch (const std::exception&) {
          rd.fail(transition->line, "transition entry '" + w + "' is not a number");
        }
      }
      m.push_back(std::move(r));
    }
    std::vector<StateLaw> laws;
    for (std::size_t s = 0; s < m.size(); ++s) {
      const auto it = state_laws.find(s);
      if (it == state_laws.end()) rd.fail(transition->line, "missing law." + std::to_string(s));
      laws.push_back(rd.at(it->second.line, [&] { return parse_state_law(it->second.value); }));
    }
    if (state_laws.size() != m.size())
      rd.fail(state_laws.rbegin()->second.line, "law for a state the transition matrix does not have");
    std::optional<std::size_t> init;
    if (initial) {
      const auto v = rd.integer(*initial);
      if (v < 0) rd.fail(initial->line, "initial_state must be >= 0");
      init = static_cast<std::size_t>(v);
    }
    out.spec.model = rd.at(transition->line, [&] { return MarkovValueModel(m, laws, init); });
  }
  return out;
}

// Exact shares that sum to exactly 1, after checking the written sum is
// within 1e-9 of 1.
std::vector<Ratio> normalize_shares(const Reader& rd, const std::vector<AgentDraft>& agents, int line) {
  double sum = 0;
  for (const auto& a : agents) sum += a.spec.alpha.to_double();
  if (std::abs(sum - 1) > 1e-9)
    rd.fail(line, "agent shares must sum to 1 (within 1e-9); they sum to " + format_real(sum));
  for (const auto& a : agents)
    if (a.spec.alpha.num() == 0) rd.fail(a.line, "alpha must be positive");
  int128 lcm = 1;
  const int128 limit = int128{1} << 62;
  for (const auto& a : agents) {
    int128 x = lcm, y = a.spec.alpha.den();
    while (y != 0) x = std::exchange(y, x % y);
    lcm = lcm / x * a.spec.alpha.den();
    if (lcm > limit) rd.fail(line, "agent shares need too large a common denominator");
  }
  std::vector<int128> nums;
  int128 total = 0;
  for (const auto& a : agents) {
    nums.push_back(int128{a.spec.alpha.num()} * (lcm / a.spec.alpha.den()));
    total += nums.back();
    if (total > limit) rd.fail(line, "agent shares need too large a common denominator");
  }
  std::vector<Ratio> out;
  for (auto n : nums) out.emplace_back(static_cast<std::int64_t>(n), static_cast<std::int64_t>(total));
  return out;
}

} // namespace

// ---------------------------------------------------------------------------

StrategySpec parse_strategy(const std::string& text) {
  const auto tok = words(text);
  if (tok.empty()) throw ConfigError("empty strategy");
  const std::string& name = tok[0];
  if (name == "beta_aggressive") {
    const auto o = options(tok, name, {"beta"});
    BetaAggressive s;
    if (o.count("beta")) s.beta = option_real(o, "beta", name);
    return s;
  }
  if (name == "state_independent") {
    const auto o = options(tok, name, {"p"});
    if (!o.count("p")) throw ConfigError("state_independent needs p=<rate>");
    return StateIndependent{option_real(o, "p", name)};
  }
  if (name == "always" || name == "never" || name == "silent") {
    options(tok, name, {});
    if (name == "always") return AlwaysRequest{};
    if (name == "never") return NeverRequest{};
    return Silent{};
  }
  if (name == "fixed_threshold") {
    const auto o = options(tok, name, {"tau"});
    if (!o.count("tau")) throw ConfigError("fixed_threshold needs tau=<value>");
    return FixedThreshold{option_real(o, "tau", name)};
  }
  if (name == "greedy_blocker") {
    const auto o = options(tok, name, {"observe", "duration"});
    GreedyBlocker g;
    if (o.count("observe")) {
      const auto& v = o.at("observe");
      if (v == "wins_only")
        g.observe = Observe::wins_only;
      else if (v == "full_requests")
        g.observe = Observe::full_requests;
      else
        throw ConfigError("greedy_blocker: observe must be wins_only or full_requests");
    }
    if (o.count("duration")) g.duration = option_integer(o, "duration", name);
    return g;
  }
  if (name == "win_triggered") {
    const auto o = options(tok, name, {"window"});
    WinTriggered w;
    if (o.count("window")) w.window = option_integer(o, "window", name);
    return w;
  }
  if (name == "kmax_flooder") {
    const auto o = options(tok, name, {"k"});
    KmaxFlooder k;
    if (o.count("k")) k.k = option_integer(o, "k", name);
    return k;
  }
  throw ConfigError("unknown strategy '" + name + "'");
}

std::string describe(const StrategySpec& spec) {
  std::string s = strategy_name(spec);
  if (const auto* b = std::get_if<BetaAggressive>(&spec)) {
    if (b->beta) s += " beta=" + format_exact(*b->beta);
  } else if (const auto* p = std::get_if<StateIndependent>(&spec)) {
    s += " p=" + format_exact(p->p);
  } else if (const auto* t = std::get_if<FixedThreshold>(&spec)) {
    s += " tau=" + format_exact(t->tau);
  } else if (const auto* g = std::get_if<GreedyBlocker>(&spec)) {
    s += g->observe == Observe::wins_only ? " observe=wins_only" : " observe=full_requests";
    s += " duration=" + std::to_string(g->duration);
  } else if (const auto* w = std::get_if<WinTriggered>(&spec)) {
    if (w->window) s += " window=" + std::to_string(*w->window);
  } else if (const auto* k = std::get_if<KmaxFlooder>(&spec)) {
    if (k->k) s += " k=" + std::to_string(*k->k);
  }
  return s;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    double a = 0, step = 0, b = 0;
    try {
      a = parse_real(parts[0]);
      step = parse_real(parts[1]);
      b = parse_real(parts[2]);
    } catch (const std::exception&) {
      throw ConfigError("grid '" + text + "': a:step:b expects three numbers");
    }
    if (!(step > 0)) throw ConfigError("grid '" + text + "': step must be positive");
    if (!(b >= a)) throw ConfigError("grid '" + text + "': empty (b < a)");
    const auto n = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9));
    if (n > 10'000'000) throw ConfigError("grid '" + text + "': too many points");
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    if (std::abs(out.back() - b) <= 1e-9 * std::max(1.0, std::abs(b))) out.back() = b;
    return out;
  }
  if (parts.size() != 1) throw ConfigError("grid '" + text + "': expected a:step:b or a list");
  for (const auto& item : split(text, ',')) {
    try {
      out.push_back(parse_real(item));
    } catch (const std::exception&) {
      throw ConfigError("grid '" + text + "': '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  scenario.validate();
  if (outputs.summary.empty()) throw ConfigError("summary path must not be empty");
  if (!bounds.kinds.empty()) {
    if (bounds.focal >= scenario.agents.size()) throw ConfigError("bounds: focal agent out of range");
    if (!scenario.agents[bounds.focal].model) throw ConfigError("bounds: the focal agent needs a value model");
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  Reader rd(source);
  const auto sections = rd.read(in);
  ExperimentConfig cfg;
  std::map<std::size_t, AgentDraft> agents;
  int mechanism_line = 0;
  bool have_mode = false, have_horizon = false;

  for (const auto& sec : sections) {
    if (sec.name == "experiment") {
      for (const auto& e : sec.entries) {
        if (e.key == "replications") {
          cfg.replications = rd.integer(e);
          if (cfg.replications < 1) rd.fail(e.line, "replications must be >= 1");
        } else if (e.key == "master_seed") {
          cfg.master_seed = rd.unsigned_integer(e);
        } else {
          rd.fail(e.line, "unknown key '" + e.key + "' in [experiment]");
        }
      }
    } else if (sec.name == "mechanism") {
      mechanism_line = sec.line;
      for (const auto& e : sec.entries) {
        if (e.key == "mode") {
          if (e.value == "single_round")
            cfg.scenario.mode = MechanismMode::single_round;
          else if (e.value == "reusable")
            cfg.scenario.mode = MechanismMode::reusable;
          else
            rd.fail(e.line, "mode must be single_round or reusable");
          have_mode = true;
        } else if (e.key == "horizon") {
          cfg.scenario.horizon = rd.integer(e);
          if (cfg.scenario.horizon < 1) rd.fail(e.line, "horizon must be >= 1");
          have_horizon = true;
        } else if (e.key == "r") {
          cfg.scenario.r = rd.ratio(e);
          if (cfg.scenario.r < Ratio(1, 1)) rd.fail(e.line, "r must be >= 1");
        } else if (e.key == "k_max") {
          cfg.scenario.k_max = rd.integer(e);
          if (*cfg.scenario.k_max < 1) rd.fail(e.line, "k_max must be >= 1");
        } else {
          rd.fail(e.line, "unknown key '" + e.key + "' in [mechanism]");
        }
      }
    } else if (sec.name.rfind("agent.", 0) == 0) {
      const Entry idx{"agent index", sec.name.substr(6), sec.line};
      const auto i = rd.integer(idx);
      if (i < 0) rd.fail(sec.line, "agent index must be >= 0");
      agents.emplace(static_cast<std::size_t>(i), parse_agent(rd, sec));
    } else if (sec.name == "outputs") {
      for (const auto& e : sec.entries) {
        if (e.key == "summary")
          cfg.outputs.summary = e.value;
        else if (e.key == "trace")
          cfg.outputs.trace = e.value;
        else if (e.key == "curve")
          cfg.outputs.curve = e.value;
        else
          rd.fail(e.line, "unknown key '" + e.key + "' in [outputs]");
      }
    } else if (sec.name == "bounds") {
      for (const auto& e : sec.entries) {
        if (e.key == "kinds") {
          cfg.bounds.kinds = rd.at(e.line, [&] { return parse_kinds(e.value); });
        } else if (e.key == "focal") {
          const auto f = rd.integer(e);
          if (f < 0) rd.fail(e.line, "focal must be >= 0");
          cfg.bounds.focal = static_cast<std::size_t>(f);
        } else if (const auto* f = param_field(e.key)) {
          const double v = f->real ? rd.real(e) : static_cast<double>(rd.integer(e));
          rd.at(e.line, [&] { param_assign(cfg.bounds.overrides, *f, v); });
        } else {
          rd.fail(e.line, "unknown key '" + e.key + "' in [bounds]");
        }
      }
    } else {
      rd.fail(sec.line, "unknown section [" + sec.name + "]");
    }
  }

  if (!mechanism_line) rd.fail(1, "missing [mechanism] section");
  if (!have_mode) rd.fail(mechanism_line, "[mechanism] needs mode");
  if (!have_horizon) rd.fail(mechanism_line, "[mechanism] needs horizon");
  if (agents.empty()) rd.fail(mechanism_line, "no [agent.N] sections");
  std::vector<AgentDraft> ordered;
  for (const auto& [i, a] : agents) {
    if (i != ordered.size()) rd.fail(a.line, "agent indices must run 0, 1, 2, ... without gaps");
    ordered.push_back(a);
  }
  const auto shares = normalize_shares(rd, ordered, ordered.front().line);
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    ordered[i].spec.alpha = shares[i];
    cfg.scenario.agents.push_back(ordered[i].spec);
  }
  for (const auto& a : ordered) {
    if (a.spec.target && *a.spec.target >= ordered.size()) rd.fail(a.line, "target agent out of range");
  }
  rd.at(mechanism_line, [&] { cfg.validate(); });
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ":0: cannot open file");
  return parse_config(in, path);
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "replications = " << c.replications << "\n";
  out << "master_seed = " << c.master_seed << "\n\n";

  const auto& s = c.scenario;
  out << "[mechanism]\n";
  out << "mode = " << (s.mode == MechanismMode::reusable ? "reusable" : "single_round") << "\n";
  out << "horizon = " << s.horizon << "\n";
  out << "r = " << s.r.str() << "\n";
  if (s.k_max) out << "k_max = " << *s.k_max << "\n";

  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    out << "\n[agent." << i << "]\n";
    out << "alpha = " << a.alpha.str() << "\n";
    out << "strategy = " << describe(a.strategy) << "\n";
    if (a.target) out << "target = " << *a.target << "\n";
    if (!a.model) continue;
    const auto& m = *a.model;
    if (m.num_states() == 1 && !m.initial_state()) {
      out << "law = " << describe(m.law(0)) << "\n";
      continue;
    }
    out << "transition =";
    for (std::size_t r = 0; r < m.num_states(); ++r) {
      if (r) out << " ;";
      for (double x : m.transition()[r]) out << " " << format_exact(x);
    }
    out << "\n";
    for (std::size_t st = 0; st < m.num_states(); ++st) out << "law." << st << " = " << describe(m.law(st)) << "\n";
    if (m.initial_state()) out << "initial_state = " << *m.initial_state() << "\n";
  }

  out << "\n[outputs]\n";
  out << "summary = " << c.outputs.summary << "\n";
  if (c.outputs.trace) out << "trace = " << *c.outputs.trace << "\n";
  if (c.outputs.curve) out << "curve = " << *c.outputs.curve << "\n";

  if (!c.bounds.kinds.empty() || c.bounds.overrides != BoundParams{} || c.bounds.focal != 0) {
    out << "\n[bounds]\n";
    if (!c.bounds.kinds.empty()) {
      out << "kinds = ";
      for (std::size_t i = 0; i < c.bounds.kinds.size(); ++i)
        out << (i ? ", " : "") << bound_kind_name(c.bounds.kinds[i]);
      out << "\n";
    }
    out << "focal = " << c.bounds.focal << "\n";
    for (const auto& f : kParamFields) {
      if (!param_set(c.bounds.overrides, f)) continue;
      out << f.name << " = ";
      if (f.real)
        out << format_exact(*(c.bounds.overrides.*f.real));
      else
        out << *(c.bounds.overrides.*f.integer);
      out << "\n";
    }
  }
  return out.str();
}

BoundTableSpec parse_bound_table(std::istream& in, const std::string& source) {
  Reader rd(source);
  const auto sections = rd.read(in);
  BoundTableSpec spec;
  bool found = false;
  for (const auto& sec : sections) {
    if (sec.name != "bounds") rd.fail(sec.line, "bound tables take a single [bounds] section");
    found = true;
    for (const auto& e : sec.entries) {
      if (e.key == "kinds") {
        spec.kinds = rd.at(e.line, [&] { return parse_kinds(e.value); });
      } else if (const auto* f = param_field(e.key)) {
        spec.values[f->name] = rd.at(e.line, [&] { return parse_grid(e.value); });
        if (!f->real)
          for (double v : spec.values[f->name])
            if (v != std::floor(v)) rd.fail(e.line, std::string(f->name) + " values must be integers");
      } else {
        rd.fail(e.line, "unknown key '" + e.key + "' in [bounds]");
      }
    }
    if (spec.kinds.empty()) rd.fail(sec.line, "[bounds] needs kinds");
  }
  if (!found) rd.fail(1, "missing [bounds] section");
  return spec;
}

std::vector<BoundTableRow> evaluate_bound_table(const BoundTableSpec& spec) {
  BoundParams probe;
  for (const auto& f : kParamFields) param_assign(probe, f, 1);
  std::vector<BoundTableRow> rows;
  for (const auto kind : spec.kinds) {
    const auto reads = relevant_inputs(kind, probe);
    std::vector<std::pair<const ParamField*, const std::vector<double>*>> axes;
    for (const auto& f : kParamFields) {
      const auto it = spec.values.find(f.name);
      if (param_set(reads, f) && it != spec.values.end()) axes.emplace_back(&f, &it->second);
    }
    std::vector<BoundParams> seen;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      BoundParams p;
      for (std::size_t a = 0; a < axes.size(); ++a) param_assign(p, *axes[a].first, (*axes[a].second)[idx[a]]);
      if (std::find(seen.begin(), seen.end(), p) == seen.end()) {
        seen.push_back(p);
        BoundTableRow row{kind, p, std::nullopt, "ok"};
        try {
          row.report = evaluate_bound(kind, p);
          if (row.report->vacuous) row.applicability = "vacuous";
        } catch (const BoundInapplicable& e) {
          row.applicability = std::string("inapplicable: ") + e.what();
        }
        rows.push_back(std::move(row));
      }
      // Odometer over the axes, last axis fastest.
      std::size_t a = axes.size();
      while (a > 0) {
        --a;
        if (++idx[a] < axes[a].second->size()) break;
        idx[a] = 0;
        if (a == 0) {
          a = axes.size() + 1;
          break;
        }
      }
      if (axes.empty() || a == axes.size() + 1) break;
    }
  }
  return rows;
}

} // namespace dmmf
