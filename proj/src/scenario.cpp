#include "formguard/scenario.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "formguard/errors.hpp"

namespace formguard {

namespace {

std::string where(const toml::node& n) {
  const auto& src = n.source();
  if (src.begin.line == 0) return "";
  return fmt::format(" (line {})", src.begin.line);
}

/// Strict view of one table: every key must be consumed, finish() rejects leftovers.
class TableReader {
 public:
  TableReader(const toml::table& t, std::string path) : t_(t), path_(std::move(path)) {}

  const toml::node* get(const std::string& key) {
    used_.insert(key);
    return t_.get(key);
  }
  const toml::node& need(const std::string& key) {
    const auto* n = get(key);
    if (!n) throw ConfigError(fmt::format("missing key '{}'{}", name(key), where(t_)));
    return *n;
  }
  std::string name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string& key) { return as_number(need(key), name(key)); }
  std::optional<double> opt_number(const std::string& key) {
    const auto* n = get(key);
    if (!n) return std::nullopt;
    return as_number(*n, name(key));
  }
  long integer(const std::string& key) { return as_integer(need(key), name(key)); }
  std::string string(const std::string& key) { return as_string(need(key), name(key)); }
  std::optional<std::string> opt_string(const std::string& key) {
    const auto* n = get(key);
    if (!n) return std::nullopt;
    return as_string(*n, name(key));
  }
  const toml::table& table(const std::string& key) {
    const auto& n = need(key);
    if (!n.is_table()) throw ConfigError(fmt::format("'{}' must be a table{}", name(key), where(n)));
    return *n.as_table();
  }
  const toml::array& array(const std::string& key) {
    const auto& n = need(key);
    if (!n.is_array()) throw ConfigError(fmt::format("'{}' must be an array{}", name(key), where(n)));
    return *n.as_array();
  }

  void finish() const {
    for (const auto& [k, v] : t_) {
      const std::string key(k.str());
      if (!used_.count(key)) {
        throw ConfigError(fmt::format("unknown key '{}'{}", name(key), where(v)));
      }
    }
  }

  static double as_number(const toml::node& n, const std::string& name) {
    if (auto v = n.as_floating_point()) return v->get();
    if (auto v = n.as_integer()) return static_cast<double>(v->get());
    throw ConfigError(fmt::format("'{}' must be a number{}", name, where(n)));
  }
  static long as_integer(const toml::node& n, const std::string& name) {
    if (auto v = n.as_integer()) return static_cast<long>(v->get());
    throw ConfigError(fmt::format("'{}' must be an integer{}", name, where(n)));
  }
  static std::string as_string(const toml::node& n, const std::string& name) {
    if (auto v = n.as_string()) return v->get();
    throw ConfigError(fmt::format("'{}' must be a string{}", name, where(n)));
  }

 private:
  const toml::table& t_;
  std::string path_;
  std::set<std::string> used_;
};

Vec number_vector(const toml::array& a, const std::string& name) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = TableReader::as_number(*a.get(i), fmt::format("{}[{}]", name, i));
  }
  return v;
}

VectorSignal signal_vector(const toml::array& a, const std::string& name) {
  std::vector<Expression> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto item = fmt::format("{}[{}]", name, i);
    const auto& n = *a.get(i);
    // plain numbers are accepted as constant signals
    std::string src = n.is_string() ? TableReader::as_string(n, item)
                                    : fmt::format("{}", TableReader::as_number(n, item));
    try {
      out.emplace_back(src);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("'{}'{}: {}", item, where(n), e.what()));
    }
  }
  return VectorSignal(std::move(out));
}

Vec sized(const toml::array& a, const std::string& name, int n) {
  Vec v = number_vector(a, name);
  if (v.size() != n) {
    throw ConfigError(fmt::format("'{}' must have {} entries, got {}{}", name, n, v.size(), where(a)));
  }
  return v;
}

DynamicsConfig parse_dynamics(const toml::table& t, const std::string& path, int n) {
  TableReader r(t, path);
  DynamicsConfig d;
  d.model = r.string("model");
  if (const auto* m = r.get("matrix")) {
    if (!m->is_array()) throw ConfigError(fmt::format("'{}.matrix' must be an array{}", path, where(*m)));
    const auto& rows = *m->as_array();
    if (static_cast<int>(rows.size()) != n) {
      throw ConfigError(fmt::format("'{}.matrix' must have {} rows{}", path, n, where(*m)));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto* row = rows.get(i)->as_array();
      const auto row_name = fmt::format("{}.matrix[{}]", path, i);
      if (!row) throw ConfigError(fmt::format("'{}' must be an array{}", row_name, where(*rows.get(i))));
      const Vec v = sized(*row, row_name, n);
      d.matrix.insert(d.matrix.end(), v.data(), v.data() + v.size());
    }
  }
  r.finish();
  make_dynamics(d, n);  // validates name and parameters
  return d;
}

int agent_index(long one_based, int n_agents, const std::string& name) {
  if (one_based < 1 || one_based > n_agents) {
    throw ConfigError(fmt::format("'{}' = {} is not an agent (1..{})", name, one_based, n_agents));
  }
  return static_cast<int>(one_based - 1);
}

Scenario parse_document(const toml::table& doc) {
  TableReader root(doc, "");
  const long version = root.integer("schema_version");
  if (version != kSchemaVersion) {
    throw ConfigError(fmt::format("unsupported schema_version {} (expected {})", version, kSchemaVersion));
  }

  Scenario s;
  s.name = root.opt_string("name").value_or("");

  {
    TableReader r(root.table("simulation"), "simulation");
    const long n = r.integer("state_dim");
    if (n < 1) throw ConfigError("'simulation.state_dim' must be at least 1");
    s.state_dim = static_cast<int>(n);
    s.sample_period = r.number("sample_period_s");
    if (!(s.sample_period > 0.0) || !std::isfinite(s.sample_period)) {
      throw ConfigError("'simulation.sample_period_s' must be positive");
    }
    s.horizon_steps = r.integer("horizon_steps");
    if (s.horizon_steps < 1) throw ConfigError("'simulation.horizon_steps' must be at least 1");
    s.divergence_limit = r.opt_number("divergence_limit").value_or(1e9);
    if (!(s.divergence_limit > 0.0)) throw ConfigError("'simulation.divergence_limit' must be positive");
    r.finish();
  }
  const int n = s.state_dim;

  s.dynamics = parse_dynamics(root.table("dynamics"), "dynamics", n);

  int n_agents = 0;
  {
    TableReader r(root.table("topology"), "topology");
    const long na = r.integer("agents");
    if (na < 1) throw ConfigError("'topology.agents' must be at least 1");
    n_agents = static_cast<int>(na);
    const Vec pins = sized(r.array("pin_gains"), "topology.pin_gains", n_agents);
    std::vector<Edge> edges;
    const auto& arr = r.array("edges");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto name = fmt::format("topology.edges[{}]", k);
      const auto* et = arr.get(k)->as_table();
      if (!et) throw ConfigError(fmt::format("'{}' must be a table{}", name, where(*arr.get(k))));
      TableReader er(*et, name);
      Edge e{};
      e.from = agent_index(er.integer("from"), n_agents, name + ".from");
      e.to = agent_index(er.integer("to"), n_agents, name + ".to");
      e.weight = er.opt_number("weight").value_or(1.0);
      er.finish();
      edges.push_back(e);
    }
    r.finish();
    s.graph = DirectedWeightedGraph::from_edges(n_agents, edges, pins);
  }

  Vec k_default, g_default;
  {
    TableReader r(root.table("control"), "control");
    if (const auto* k = r.get("k")) {
      if (!k->is_array()) throw ConfigError("'control.k' must be an array" + where(*k));
      k_default = sized(*k->as_array(), "control.k", n);
    }
    s.gains.c = r.number("c");
    s.gains.state_gain = r.opt_number("state_gain");
    if (const auto* g = r.get("observer_gain")) {
      if (!g->is_array()) throw ConfigError("'control.observer_gain' must be an array" + where(*g));
      g_default = sized(*g->as_array(), "control.observer_gain", n);
    }
    r.finish();
  }

  {
    TableReader r(root.table("network"), "network");
    const auto& axes = r.array("centers_per_axis");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const long c = TableReader::as_integer(*axes.get(i), fmt::format("network.centers_per_axis[{}]", i));
      if (c < 1) throw ConfigError("'network.centers_per_axis' entries must be at least 1");
      s.basis.per_axis.push_back(static_cast<int>(c));
    }
    if (static_cast<int>(s.basis.per_axis.size()) != n) {
      throw ConfigError(fmt::format("'network.centers_per_axis' must have {} entries", n));
    }
    if (const auto* range = r.get("center_range")) {
      if (!range->is_array()) throw ConfigError("'network.center_range' must be an array" + where(*range));
      const Vec lr = sized(*range->as_array(), "network.center_range", 2);
      s.basis.lo = lr(0);
      s.basis.hi = lr(1);
    }
    s.basis.width = r.opt_number("width").value_or(s.basis.width);
    s.tuning.alpha = r.number("alpha");
    s.tuning.gamma = r.number("gamma");
    r.finish();
    s.basis.build();  // validates widths and range
  }

  std::optional<double> d_bound;
  if (const auto* f = root.get("formation")) {
    if (!f->is_table()) throw ConfigError("'formation' must be a table" + where(*f));
    TableReader r(*f->as_table(), "formation");
    d_bound = r.opt_number("offset_bound");
    r.finish();
  }

  {
    TableReader r(root.table("leader"), "leader");
    s.leader = signal_vector(r.array("trajectory"), "leader.trajectory");
    if (s.leader.size() != n) throw ConfigError(fmt::format("'leader.trajectory' must have {} entries", n));
    r.finish();
  }

  {
    const auto& arr = root.array("agents");
    if (static_cast<int>(arr.size()) != n_agents) {
      throw ConfigError(fmt::format("'agents' must list {} agents, got {}{}", n_agents, arr.size(), where(arr)));
    }
    std::vector<Vec> offsets;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto name = fmt::format("agents[{}]", i);
      const auto* at = arr.get(i)->as_table();
      if (!at) throw ConfigError(fmt::format("'{}' must be a table{}", name, where(*arr.get(i))));
      TableReader r(*at, name);
      AgentConfig a;
      a.initial_state = sized(r.array("initial_state"), name + ".initial_state", n);
      offsets.push_back(sized(r.array("offset"), name + ".offset", n));
      if (const auto* w = r.get("disturbance")) {
        if (!w->is_array()) throw ConfigError(fmt::format("'{}.disturbance' must be an array{}", name, where(*w)));
        a.disturbance = signal_vector(*w->as_array(), name + ".disturbance");
        if (a.disturbance.size() != n) {
          throw ConfigError(fmt::format("'{}.disturbance' must have {} entries", name, n));
        }
      } else {
        a.disturbance = VectorSignal::zero(n);
      }
      if (const auto* d = r.get("dynamics")) {
        if (!d->is_table()) throw ConfigError(fmt::format("'{}.dynamics' must be a table{}", name, where(*d)));
        a.dynamics = parse_dynamics(*d->as_table(), name + ".dynamics", n);
      }
      Vec k = k_default, g = g_default;
      if (const auto* kn = r.get("k")) {
        if (!kn->is_array()) throw ConfigError(fmt::format("'{}.k' must be an array{}", name, where(*kn)));
        k = sized(*kn->as_array(), name + ".k", n);
      }
      if (const auto* gn = r.get("observer_gain")) {
        if (!gn->is_array()) throw ConfigError(fmt::format("'{}.observer_gain' must be an array{}", name, where(*gn)));
        g = sized(*gn->as_array(), name + ".observer_gain", n);
      }
      if (k.size() == 0) throw ConfigError(fmt::format("no k gain for agent {} (set control.k)", i + 1));
      if (g.size() == 0) {
        throw ConfigError(fmt::format("no observer gain for agent {} (set control.observer_gain)", i + 1));
      }
      s.gains.k.push_back(k);
      s.gains.observer.push_back(g);
      r.finish();
      s.agents.push_back(std::move(a));
    }
    s.formation = FormationSpec(std::move(offsets), d_bound);
  }

  if (const auto* atk = root.get("attacks")) {
    if (!atk->is_array()) throw ConfigError("'attacks' must be an array of tables" + where(*atk));
    const auto& arr = *atk->as_array();
    for (std::size_t q = 0; q < arr.size(); ++q) {
      const auto name = fmt::format("attacks[{}]", q);
      const auto* at = arr.get(q)->as_table();
      if (!at) throw ConfigError(fmt::format("'{}' must be a table{}", name, where(*arr.get(q))));
      TableReader r(*at, name);
      AttackSpec a;
      a.id = r.string("id");
      a.kind = attack_kind_from_string(r.string("kind"));
      a.target = agent_index(r.integer("target"), n_agents, name + ".target");
      if (const auto* src = r.get("source")) {
        a.source = agent_index(TableReader::as_integer(*src, name + ".source"), n_agents, name + ".source");
      }
      const Vec win = sized(r.array("window_s"), name + ".window_s", 2);
      a.start_s = win(0);
      a.end_s = win(1);
      a.signal = signal_vector(r.array("signal"), name + ".signal");
      r.finish();
      s.attacks.push_back(std::move(a));
    }
  }

  if (const auto* det = root.get("detection")) {
    if (!det->is_table()) throw ConfigError("'detection' must be a table" + where(*det));
    TableReader r(*det->as_table(), "detection");
    auto& d = s.detection;
    d.bounds = r.opt_string("bounds").value_or(d.bounds);
    d.safety_factor = r.opt_number("safety_factor").value_or(d.safety_factor);
    d.transient_s = r.opt_number("transient_s").value_or(d.transient_s);
    d.arm_after_s = r.opt_number("arm_after_s").value_or(d.arm_after_s);
    d.e_M_source = r.opt_string("e_M_source").value_or(d.e_M_source);
    d.reference_pi = r.opt_number("reference_pi");
    r.finish();
  }

  root.finish();
  s.validate();
  return s;
}

// Shortest representation that reads back as a float.
std::string num(double v) {
  auto s = fmt::format("{}", v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";  // 'n' covers nan/inf
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string num_array(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v(i));
  return out + "]";
}

std::string signal_array(const VectorSignal& s) {
  std::string out = "[";
  const auto src = s.sources();
  for (std::size_t i = 0; i < src.size(); ++i) out += (i ? ", " : "") + quoted(src[i]);
  return out + "]";
}

std::string dynamics_inline(const DynamicsConfig& d, int n) {
  std::string out = "{ model = " + quoted(d.model);
  if (!d.matrix.empty()) {
    out += ", matrix = [";
    for (int r = 0; r < n; ++r) {
      out += r ? ", [" : "[";
      for (int c = 0; c < n; ++c) out += (c ? ", " : "") + num(d.matrix[static_cast<std::size_t>(r * n + c)]);
      out += "]";
    }
    out += "]";
  }
  return out + " }";
}

}  // namespace

const AttackSpec* Scenario::find_attack(const std::string& id) const {
  for (const auto& a : attacks) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

Scenario Scenario::without_attacks() const {
  Scenario copy = *this;
  copy.attacks.clear();
  return copy;
}

void Scenario::validate() const {
  if (!(sample_period > 0.0)) throw ConfigError("sample period must be positive");
  if (horizon_steps < 1) throw ConfigError("horizon must be at least one step");
  const int N = n_agents();
  require_dim(static_cast<long>(agents.size()), N, "agents");
  require_dim(formation.size(), N, "formation offsets");
  check_gains_shape(gains, N, state_dim);
  // α > 0 is condition (30), reported by validate_gains rather than rejected here.
  if (!(tuning.alpha >= 0.0) || !std::isfinite(tuning.alpha)) throw ConfigError("'network.alpha' must be nonnegative");
  if (!(tuning.gamma >= 0.0 && tuning.gamma < 1.0)) throw ConfigError("'network.gamma' must lie in [0, 1)");
  require_dim(leader.size(), state_dim, "leader trajectory");
  make_dynamics(dynamics, state_dim);
  for (const auto& a : agents) {
    require_dim(a.initial_state.size(), state_dim, "initial state");
    require_dim(a.disturbance.size(), state_dim, "disturbance");
    if (a.dynamics) make_dynamics(*a.dynamics, state_dim);
  }
  std::set<std::string> ids;
  for (const auto& a : attacks) {
    if (!ids.insert(a.id).second) throw ConfigError("duplicate attack id '" + a.id + "'");
    validate_attack(a, graph, state_dim, horizon_s());
  }
  const auto& d = detection;
  if (!(d.safety_factor >= 1.0)) throw ConfigError("'detection.safety_factor' must be at least 1");
  if (!(d.transient_s >= 0.0)) throw ConfigError("'detection.transient_s' must be nonnegative");
  if (!(d.arm_after_s >= 0.0)) throw ConfigError("'detection.arm_after_s' must be nonnegative");
  if (d.e_M_source != "observed" && d.e_M_source != "formula") {
    throw ConfigError("'detection.e_M_source' must be \"observed\" or \"formula\"");
  }
  if (d.bounds.empty()) throw ConfigError("'detection.bounds' must not be empty");
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  toml::table doc;
  try {
    doc = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    throw ConfigError(fmt::format("{}: parse error at line {}, column {}: {}", origin,
                                  e.source().begin.line, e.source().begin.column, e.description()));
  }
  try {
    return parse_document(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
  const int n = s.state_dim;
  const int N = s.n_agents();
  std::string out;
  auto line = [&out](const std::string& l) { out += l + "\n"; };

  line(fmt::format("schema_version = {}", kSchemaVersion));
  if (!s.name.empty()) line("name = " + quoted(s.name));

  line("\n[simulation]");
  line(fmt::format("state_dim = {}", n));
  line("sample_period_s = " + num(s.sample_period));
  line(fmt::format("horizon_steps = {}", s.horizon_steps));
  line("divergence_limit = " + num(s.divergence_limit));

  line("\n[dynamics]");
  line("model = " + quoted(s.dynamics.model));
  if (!s.dynamics.matrix.empty()) {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        s.dynamics.matrix.data(), n, n);
    std::string m = "matrix = [";
    for (int r = 0; r < n; ++r) m += (r ? ", " : "") + num_array(a.row(r).transpose());
    line(m + "]");
  }

  line("\n[topology]");
  line(fmt::format("agents = {}", N));
  line("pin_gains = " + num_array(s.graph.pin_gains()));
  line("edges = [");
  for (const auto& e : s.graph.edges()) {
    line(fmt::format("  {{ from = {}, to = {}, weight = {} }},", e.from + 1, e.to + 1, num(e.weight)));
  }
  line("]");

  line("\n[control]");
  line("k = " + num_array(s.gains.k.front()));
  line("c = " + num(s.gains.c));
  if (s.gains.state_gain) line("state_gain = " + num(*s.gains.state_gain));
  line("observer_gain = " + num_array(s.gains.observer.front()));

  line("\n[network]");
  {
    std::string axes = "centers_per_axis = [";
    for (std::size_t i = 0; i < s.basis.per_axis.size(); ++i) axes += fmt::format("{}{}", i ? ", " : "", s.basis.per_axis[i]);
    line(axes + "]");
  }
  line(fmt::format("center_range = [{}, {}]", num(s.basis.lo), num(s.basis.hi)));
  line("width = " + num(s.basis.width));
  line("alpha = " + num(s.tuning.alpha));
  line("gamma = " + num(s.tuning.gamma));

  if (s.formation.declared_bound()) {
    line("\n[formation]");
    line("offset_bound = " + num(*s.formation.declared_bound()));
  }

  line("\n[leader]");
  line("trajectory = " + signal_array(s.leader));

  line("\n[detection]");
  line("bounds = " + quoted(s.detection.bounds));
  line("safety_factor = " + num(s.detection.safety_factor));
  line("transient_s = " + num(s.detection.transient_s));
  line("arm_after_s = " + num(s.detection.arm_after_s));
  line("e_M_source = " + quoted(s.detection.e_M_source));
  if (s.detection.reference_pi) line("reference_pi = " + num(*s.detection.reference_pi));

  for (int i = 0; i < N; ++i) {
    const auto& a = s.agents[static_cast<std::size_t>(i)];
    line("\n[[agents]]");
    line("initial_state = " + num_array(a.initial_state));
    line("offset = " + num_array(s.formation.offset(i)));
    line("disturbance = " + signal_array(a.disturbance));
    if (a.dynamics) line("dynamics = " + dynamics_inline(*a.dynamics, n));
    const auto& k = s.gains.k[static_cast<std::size_t>(i)];
    const auto& g = s.gains.observer[static_cast<std::size_t>(i)];
    if (k != s.gains.k.front()) line("k = " + num_array(k));
    if (g != s.gains.observer.front()) line("observer_gain = " + num_array(g));
  }

  for (const auto& a : s.attacks) {
    line("\n[[attacks]]");
    line("id = " + quoted(a.id));
    line("kind = " + quoted(to_string(a.kind)));
    line(fmt::format("target = {}", a.target + 1));
    if (a.source) line(fmt::format("source = {}", *a.source + 1));
    line(fmt::format("window_s = [{}, {}]", num(a.start_s), num(a.end_s)));
    line("signal = " + signal_array(a.signal));
  }
  return out;
}

}  // namespace formguard
