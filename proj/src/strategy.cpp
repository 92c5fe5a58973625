#include "rtdc/strategy.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace rtdc {

std::size_t StrategyNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

// ---------------------------------------------------------------- extraction

namespace {

const SearchNode* true_child(const SearchNode& n) {
  for (const auto& c : n.children)
    if (c->truth == Truth::yes) return c.get();
  throw MalformedTree("true node without a true child");
}

StrategyNode extract_from(const SearchNode& entry, const ReactivePairs& fired) {
  StrategyNode out;
  const DtnuState& st = *entry.state;
  out.start = st.now;
  for (const auto& u : entry.occurred) {
    out.assumed_occurred.push_back({u, st.memory[u.value]->window()});
    for (const auto& [trigger, phi] : fired)
      if (trigger == u) out.reactive_executed.push_back({phi, st.memory[phi.value]->window()});
  }
  std::sort(out.reactive_executed.begin(), out.reactive_executed.end(),
            [](const Occurrence& a, const Occurrence& b) { return a.tp < b.tp; });

  const SearchNode* cur = &entry;
  while (true) {
    if (cur->truth != Truth::yes) throw MalformedTree("strategy path reaches a node that is not true");
    if (cur->children.empty()) {
      if (cur->witness)
        for (const auto& [a, t] : *cur->witness) out.leaf_schedule.push_back({a, t});
      return out;
    }
    const SearchNode* next = true_child(*cur->children.front());
    if (next->kind == NodeKind::dtnu) {
      out.schedule_now.push_back({*next->decision, next->state->now});
      cur = next;
      continue;
    }
    if (next->kind != NodeKind::wait || !next->plan || next->children.empty())
      throw MalformedTree("d-OR child is neither a schedule nor a wait");
    const SearchNode* and_node = true_child(*next->children.front());
    out.wait = StrategyWait{next->plan->start + next->plan->delta, and_node->reactive};
    if (and_node->children.size() != and_node->total_children)
      throw MalformedTree("true AND node with unexplored outcomes");
    for (const auto& c : and_node->children) {
      if (c->truth != Truth::yes) throw MalformedTree("true AND node with a child that is not true");
      out.children.push_back(extract_from(*c, and_node->reactive));
    }
    return out;
  }
}

}  // namespace

StrategyNode extract(const SearchNode& root) {
  if (root.kind != NodeKind::dtnu || root.truth != Truth::yes) throw MalformedTree("root is not a true DTNU node");
  return extract_from(root, {});
}

// -------------------------------------------------------------- verification

namespace {

std::string path_text(const std::vector<std::size_t>& path) {
  std::string s = "/";
  for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "/" : "") + std::to_string(path[i]);
  return s;
}

class StructureChecker {
public:
  StructureChecker(const Dtnu& dtnu, VerificationReport& rep) : dtnu_(dtnu), rep_(rep) {}

  struct State {
    std::vector<std::optional<Interval>> exec;
    std::map<std::uint32_t, std::vector<Interval>> pending;
  };

  void run(const StrategyNode& root) {
    State s;
    s.exec.resize(dtnu_.size());
    check(root, std::move(s), TimeValue(0), {});
  }

private:
  void issue(const std::vector<std::size_t>& path, const std::string& msg) {
    rep_.structural_ok = false;
    if (rep_.structural_issues.size() < 100) rep_.structural_issues.push_back(path_text(path) + ": " + msg);
  }

  void activate(State& s, TimepointRef trigger, const Interval& when) {
    for (const auto& link : dtnu_.links()) {
      if (link.trigger != trigger) continue;
      std::vector<Interval> ws;
      for (const auto& iv : link.intervals) {
        Interval w(when.lo() + iv.lo(), when.hi() + iv.hi());
        if (!ws.empty() && w.lo() <= ws.back().hi()) ws.back() = Interval(ws.back().lo(), max(ws.back().hi(), w.hi()));
        else ws.push_back(w);
      }
      s.pending[link.target.value] = std::move(ws);
    }
  }

  void execute(State& s, TimepointRef tp, const Interval& when, const std::vector<std::size_t>& path) {
    if (tp.value >= dtnu_.size() || !dtnu_.is_controllable(tp)) {
      issue(path, "schedules a timepoint that is not controllable");
      return;
    }
    if (s.exec[tp.value]) issue(path, dtnu_.id(tp) + " is scheduled twice");
    s.exec[tp.value] = when;
    activate(s, tp, when);
  }

  void check(const StrategyNode& n, State s, const TimeValue& expected_start, const std::vector<std::size_t>& path) {
    if (n.start != expected_start)
      issue(path, "starts at " + n.start.to_string() + " instead of " + expected_start.to_string());
    for (const auto& e : n.schedule_now) {
      if (e.time != n.start) issue(path, "immediate schedule of " + dtnu_.id(e.tp) + " is not at the node time");
      execute(s, e.tp, Interval::point(e.time), path);
    }
    if (n.is_leaf()) {
      if (!n.children.empty()) issue(path, "leaf with children");
      for (const auto& e : n.leaf_schedule) {
        if (e.time < n.start) issue(path, "final schedule of " + dtnu_.id(e.tp) + " lies in the past");
        execute(s, e.tp, Interval::point(e.time), path);
      }
      for (std::size_t a = 0; a < dtnu_.num_controllables(); ++a)
        if (!s.exec[a]) issue(path, dtnu_.id(dtnu_.controllable(a)) + " is never scheduled on this branch");
      return;
    }
    if (!n.leaf_schedule.empty()) issue(path, "final schedule on a node that waits");
    const TimeValue& st = n.start;
    const TimeValue& end = n.wait->end;
    if (!(st < end)) issue(path, "wait does not move time forward");

    std::vector<std::uint32_t> certain, possible;
    std::map<std::uint32_t, Interval> hull;
    for (const auto& [u, ws] : s.pending) {
      if (ws.back().hi() < st) issue(path, dtnu_.id(TimepointRef{u}) + " could have occurred unobserved");
      std::optional<Interval> h;
      for (const auto& w : ws) {
        if (!(w.lo() < end || w.hi() == end) || w.hi() < st) continue;
        Interval part(max(w.lo(), st), min(w.hi(), end));
        h = h ? Interval(h->lo(), part.hi()) : part;
      }
      if (!h) continue;
      hull.emplace(u, *h);
      (ws.back().hi() <= end ? certain : possible).push_back(u);
    }

    std::set<std::uint32_t> reacting;
    for (const auto& [u, phi] : n.wait->reactive) {
      if (!hull.count(u.value)) issue(path, "reactive trigger " + dtnu_.id(u) + " cannot occur during the wait");
      if (!dtnu_.is_controllable(phi) || s.exec[phi.value]) issue(path, "reactive timepoint is not an open controllable");
      if (!reacting.insert(phi.value).second) issue(path, dtnu_.id(phi) + " reacts twice");
    }

    const std::size_t expected = possible.size() >= 63 ? SIZE_MAX : (std::size_t{1} << possible.size());
    std::set<std::vector<std::uint32_t>> seen;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const auto& c = n.children[i];
      auto child_path = path;
      child_path.push_back(i);
      std::vector<std::uint32_t> set;
      for (const auto& o : c.assumed_occurred) set.push_back(o.tp.value);
      std::sort(set.begin(), set.end());
      if (!seen.insert(set).second) issue(child_path, "duplicate outcome branch");
      bool ok = true;
      for (auto u : certain)
        if (!std::binary_search(set.begin(), set.end(), u)) ok = false;
      for (const auto& o : c.assumed_occurred) {
        auto h = hull.find(o.tp.value);
        if (h == hull.end()) ok = false;
        else if (!(h->second == o.window)) issue(child_path, "occurrence window of " + dtnu_.id(o.tp) + " is wrong");
      }
      if (!ok) issue(child_path, "branch is not an outcome of the wait");

      std::vector<Occurrence> reactions;
      for (const auto& [u, phi] : n.wait->reactive)
        if (std::binary_search(set.begin(), set.end(), u.value) && hull.count(u.value))
          reactions.push_back({phi, hull.at(u.value)});
      std::sort(reactions.begin(), reactions.end(), [](const Occurrence& a, const Occurrence& b) { return a.tp < b.tp; });
      if (reactions != c.reactive_executed) issue(child_path, "reactive executions do not match the wait's strategy");

      State cs = s;
      for (auto u : possible) {
        if (std::binary_search(set.begin(), set.end(), u)) continue;
        std::vector<Interval> rest;
        for (const auto& w : cs.pending[u])
          if (w.hi() >= end) rest.emplace_back(max(w.lo(), end), w.hi());
        cs.pending[u] = std::move(rest);
      }
      for (const auto& o : c.assumed_occurred) {
        if (o.tp.value < cs.exec.size()) cs.exec[o.tp.value] = o.window;
        cs.pending.erase(o.tp.value);
      }
      for (const auto& r : reactions) execute(cs, r.tp, r.window, child_path);
      check(c, std::move(cs), end, child_path);
    }
    if (n.children.size() != expected) issue(path, "wait outcomes are not all covered");
  }

  const Dtnu& dtnu_;
  VerificationReport& rep_;
};

using DelayPicker = std::function<TimeValue(TimepointRef u, const ContingencyLink& link, const TimeValue& trigger_time)>;

class Simulator {
public:
  Simulator(const Dtnu& dtnu, VerificationReport& rep) : dtnu_(dtnu), rep_(rep) {}

  void run(const StrategyNode& root, DelayPicker pick) {
    pick_ = std::move(pick);
    Sim s;
    s.times.resize(dtnu_.size());
    step(root, std::move(s), {});
  }

private:
  struct Sim {
    std::vector<std::optional<TimeValue>> times;
    std::map<std::uint32_t, TimeValue> pending;
  };

  void violation(const std::vector<std::size_t>& path, const Sim& s, std::optional<std::size_t> disjunct,
                 std::string msg) {
    ++rep_.violation_count;
    if (rep_.violations.size() >= 20) return;
    Violation v;
    v.path = path;
    for (std::size_t i = 0; i < s.times.size(); ++i)
      if (s.times[i]) v.times.emplace_back(TimepointRef{static_cast<std::uint32_t>(i)}, *s.times[i]);
    v.disjunct = disjunct;
    v.message = std::move(msg);
    rep_.violations.push_back(std::move(v));
  }

  void execute(Sim& s, TimepointRef a, const TimeValue& t) {
    s.times[a.value] = t;
    for (const auto& link : dtnu_.links())
      if (link.trigger == a) s.pending[link.target.value] = t + pick_(link.target, link, t);
  }

  void step(const StrategyNode& n, Sim s, const std::vector<std::size_t>& path) {
    for (const auto& e : n.schedule_now) execute(s, e.tp, n.start);
    if (n.is_leaf()) {
      for (const auto& e : n.leaf_schedule) execute(s, e.tp, e.time);
      for (const auto& [u, t] : s.pending) s.times[u] = t;
      for (std::size_t i = 0; i < s.times.size(); ++i) {
        if (!s.times[i]) {
          violation(path, s, std::nullopt, dtnu_.timepoints()[i].id + " never happens");
          return;
        }
      }
      std::vector<TimeValue> full(s.times.size());
      for (std::size_t i = 0; i < full.size(); ++i) full[i] = *s.times[i];
      for (std::size_t k = 0; k < dtnu_.constraints().size(); ++k)
        if (!holds(dtnu_.constraints()[k], full)) violation(path, s, k, "constraint " + std::to_string(k) + " violated");
      return;
    }
    const TimeValue& end = n.wait->end;
    std::set<std::uint32_t> required, optional;
    for (const auto& [u, t] : s.pending) {
      if (t < n.start) {
        violation(path, s, std::nullopt, dtnu_.timepoints()[u].id + " occurred before the strategy looked");
        return;
      }
      if (t < end) required.insert(u);
      else if (t == end) optional.insert(u);
    }
    bool matched = false;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const auto& c = n.children[i];
      std::set<std::uint32_t> set;
      for (const auto& o : c.assumed_occurred) set.insert(o.tp.value);
      if (!std::includes(set.begin(), set.end(), required.begin(), required.end())) continue;
      if (!std::all_of(set.begin(), set.end(), [&](auto u) { return required.count(u) || optional.count(u); })) continue;
      matched = true;
      auto child_path = path;
      child_path.push_back(i);
      Sim cs = s;
      for (const auto& o : c.assumed_occurred) {
        const TimeValue t = cs.pending.at(o.tp.value);
        if (!o.window.contains(t)) violation(child_path, cs, std::nullopt, "occurrence outside its assumed window");
        cs.times[o.tp.value] = t;
        cs.pending.erase(o.tp.value);
      }
      for (const auto& [u, phi] : n.wait->reactive)
        if (set.count(u.value)) execute(cs, phi, *cs.times[u.value]);
      step(c, std::move(cs), child_path);
    }
    if (!matched) violation(path, s, std::nullopt, "no branch matches what occurred during the wait");
  }

  const Dtnu& dtnu_;
  VerificationReport& rep_;
  DelayPicker pick_;
};

void collect_boundaries(const StrategyNode& n, std::set<TimeValue>& out) {
  out.insert(n.start);
  if (n.wait) out.insert(n.wait->end);
  for (const auto& c : n.children) collect_boundaries(c, out);
}

TimeValue finite_hi(const Interval& iv) {
  if (iv.hi().is_finite()) return iv.hi();
  return iv.lo() + TimeValue(100);
}

}  // namespace

VerificationReport verify(const StrategyNode& strategy, const Dtnu& dtnu, const VerifyConfig& cfg) {
  VerificationReport rep;
  rep.seed = cfg.seed;
  StructureChecker(dtnu, rep).run(strategy);
  if (!rep.structural_ok) return rep;

  Simulator sim(dtnu, rep);
  const std::size_t nu = dtnu.num_uncontrollables();

  if (cfg.endpoint_exhaustive) {
    std::vector<std::vector<TimeValue>> ends(nu);
    for (std::size_t j = 0; j < nu; ++j) {
      const auto* link = dtnu.link_to(dtnu.uncontrollable(j));
      std::set<TimeValue> e;
      for (const auto& iv : link->intervals) {
        e.insert(iv.lo());
        if (iv.hi().is_finite()) e.insert(iv.hi());
      }
      ends[j].assign(e.begin(), e.end());
    }
    std::vector<std::size_t> digit(nu, 0);
    for (std::size_t combos = 0;; ++combos) {
      if (combos == cfg.max_endpoint_combinations) {
        rep.endpoints_complete = false;
        break;
      }
      sim.run(strategy, [&](TimepointRef u, const ContingencyLink&, const TimeValue&) {
        const std::size_t j = u.value - dtnu.num_controllables();
        return ends[j][digit[j]];
      });
      ++rep.samples_run;
      std::size_t j = 0;
      while (j < nu && ++digit[j] == ends[j].size()) digit[j++] = 0;
      if (j == nu) break;
    }
  }

  std::set<TimeValue> boundary_set;
  collect_boundaries(strategy, boundary_set);
  const std::vector<TimeValue> boundaries(boundary_set.begin(), boundary_set.end());
  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
  static constexpr std::int64_t kDenominators[] = {2, 3, 7, 10, 1000};

  for (std::size_t s = 0; s < cfg.random_samples; ++s) {
    sim.run(strategy, [&](TimepointRef, const ContingencyLink& link, const TimeValue& t) {
      const Interval& iv = link.intervals[uniform(link.intervals.size())];
      const TimeValue lo = iv.lo();
      const TimeValue hi = finite_hi(iv);
      switch (uniform(3)) {
        case 0: return uniform(2) == 0 ? lo : hi;
        case 2: {
          auto first = std::lower_bound(boundaries.begin(), boundaries.end(), t + lo);
          auto last = std::upper_bound(boundaries.begin(), boundaries.end(), t + hi);
          if (first != last) return *(first + static_cast<std::ptrdiff_t>(uniform(static_cast<std::uint64_t>(last - first)))) - t;
          [[fallthrough]];
        }
        default: {
          const std::int64_t den = kDenominators[uniform(std::size(kDenominators))];
          const auto num = static_cast<std::int64_t>(uniform(static_cast<std::uint64_t>(den) + 1));
          return lo + TimeValue((hi - lo).rational() * TimeValue::Rational(num, den));
        }
      }
    });
    ++rep.samples_run;
  }
  return rep;
}

// ----------------------------------------------------------------- rendering

namespace {

std::string id_list(const Dtnu& dtnu, const std::vector<TimepointRef>& tps) {
  std::string s = "[";
  for (std::size_t i = 0; i < tps.size(); ++i) s += (i ? ", " : "") + dtnu.id(tps[i]);
  return s + "]";
}

void render(const StrategyNode& n, const Dtnu& dtnu, int depth, bool root, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (!root) {
    std::vector<TimepointRef> occ, react;
    for (const auto& o : n.assumed_occurred) occ.push_back(o.tp);
    for (const auto& o : n.reactive_executed) react.push_back(o.tp);
    out << pad << "If these points occurred: " << id_list(dtnu, occ);
    if (!react.empty()) out << ", reacting with " << id_list(dtnu, react);
    out << "\n";
  }
  std::vector<TimepointRef> now;
  for (const auto& e : n.schedule_now) now.push_back(e.tp);
  for (const auto& e : n.leaf_schedule)
    if (e.time == n.start) now.push_back(e.tp);
  if (!now.empty()) out << pad << "Schedule " << id_list(dtnu, now) << " at current time t = " << n.start.to_fixed(2) << ",\n";
  if (n.wait) {
    out << pad << "Wait " << (n.wait->end - n.start).to_string() << " units at current time t = " << n.start.to_fixed(2)
        << " with reactive strategy: {";
    std::map<TimepointRef, std::vector<TimepointRef>> by_trigger;
    for (const auto& [u, phi] : n.wait->reactive) by_trigger[u].push_back(phi);
    bool first = true;
    for (const auto& [u, phis] : by_trigger) {
      out << (first ? "" : ", ") << dtnu.id(u) << ": " << id_list(dtnu, phis);
      first = false;
    }
    out << "},\n";
    for (const auto& c : n.children) render(c, dtnu, depth + 1, false, out);
    return;
  }
  for (const auto& e : n.leaf_schedule)
    if (e.time != n.start)
      out << pad << "Schedule " << dtnu.id(e.tp) << " at given time: [" << e.time << ", " << e.time << "]\n";
  out << pad << "Problem solved\n";
}

}  // namespace

std::string render_text(const StrategyNode& strategy, const Dtnu& dtnu) {
  std::ostringstream out;
  render(strategy, dtnu, 0, true, out);
  return out.str();
}

// ---------------------------------------------------------------------- json

namespace {

using nlohmann::json;

json occurrences(const std::vector<Occurrence>& v, const Dtnu& dtnu) {
  json a = json::array();
  for (const auto& o : v) a.push_back({{"tp", dtnu.id(o.tp)}, {"window", {o.window.lo().to_string(), o.window.hi().to_string()}}});
  return a;
}

json decisions(const std::vector<TimedDecision>& v, const Dtnu& dtnu) {
  json a = json::array();
  for (const auto& e : v) a.push_back({{"tp", dtnu.id(e.tp)}, {"time", e.time.to_string()}});
  return a;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw std::invalid_argument("strategy " + (where.empty() ? "/" : where) + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) schema_error(where, std::string("missing \"") + key + "\"");
  return j.at(key);
}

TimeValue time_at(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return TimeValue::parse(j.get<std::string>());
    if (j.is_number_integer()) return TimeValue(j.get<std::int64_t>());
  } catch (const std::invalid_argument& e) {
    schema_error(where, e.what());
  }
  schema_error(where, "expected a time value");
}

TimepointRef tp_at(const json& j, const Dtnu& dtnu, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a timepoint id");
  auto r = dtnu.find(j.get<std::string>());
  if (!r) schema_error(where, "unknown timepoint \"" + j.get<std::string>() + "\"");
  return *r;
}

std::vector<Occurrence> occurrences_from(const json& j, const Dtnu& dtnu, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  std::vector<Occurrence> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    const auto& win = field(j[i], "window", w);
    if (!win.is_array() || win.size() != 2) schema_error(w + "/window", "expected [lo, hi]");
    const TimeValue lo = time_at(win[0], w + "/window/0");
    const TimeValue hi = time_at(win[1], w + "/window/1");
    if (hi < lo) schema_error(w + "/window", "empty interval");
    out.push_back({tp_at(field(j[i], "tp", w), dtnu, w + "/tp"), Interval(lo, hi)});
  }
  return out;
}

std::vector<TimedDecision> decisions_from(const json& j, const Dtnu& dtnu, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  std::vector<TimedDecision> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    out.push_back({tp_at(field(j[i], "tp", w), dtnu, w + "/tp"), time_at(field(j[i], "time", w), w + "/time")});
  }
  return out;
}

StrategyNode node_from(const json& j, const Dtnu& dtnu, const std::string& where) {
  StrategyNode n;
  n.start = time_at(field(j, "start", where), where + "/start");
  n.assumed_occurred = occurrences_from(field(j, "assumed_occurred", where), dtnu, where + "/assumed_occurred");
  n.reactive_executed = occurrences_from(field(j, "reactive_executed", where), dtnu, where + "/reactive_executed");
  n.schedule_now = decisions_from(field(j, "schedule_now", where), dtnu, where + "/schedule_now");
  n.leaf_schedule = decisions_from(field(j, "leaf_schedule", where), dtnu, where + "/leaf_schedule");
  const auto& wait = field(j, "wait", where);
  if (!wait.is_null()) {
    StrategyWait w{time_at(field(wait, "end", where + "/wait"), where + "/wait/end"), {}};
    const auto& reactive = field(wait, "reactive", where + "/wait");
    if (!reactive.is_array()) schema_error(where + "/wait/reactive", "expected an array");
    for (std::size_t i = 0; i < reactive.size(); ++i) {
      const std::string rw = where + "/wait/reactive/" + std::to_string(i);
      w.reactive.emplace_back(tp_at(field(reactive[i], "trigger", rw), dtnu, rw + "/trigger"),
                              tp_at(field(reactive[i], "react", rw), dtnu, rw + "/react"));
    }
    n.wait = std::move(w);
  }
  const auto& children = field(j, "children", where);
  if (!children.is_array()) schema_error(where + "/children", "expected an array");
  for (std::size_t i = 0; i < children.size(); ++i)
    n.children.push_back(node_from(children[i], dtnu, where + "/children/" + std::to_string(i)));
  return n;
}

}  // namespace

nlohmann::json strategy_to_json(const StrategyNode& n, const Dtnu& dtnu) {
  json j;
  j["start"] = n.start.to_string();
  j["assumed_occurred"] = occurrences(n.assumed_occurred, dtnu);
  j["reactive_executed"] = occurrences(n.reactive_executed, dtnu);
  j["schedule_now"] = decisions(n.schedule_now, dtnu);
  if (n.wait) {
    json reactive = json::array();
    for (const auto& [u, phi] : n.wait->reactive) reactive.push_back({{"trigger", dtnu.id(u)}, {"react", dtnu.id(phi)}});
    j["wait"] = {{"end", n.wait->end.to_string()}, {"reactive", reactive}};
  } else {
    j["wait"] = nullptr;
  }
  j["children"] = json::array();
  for (const auto& c : n.children) j["children"].push_back(strategy_to_json(c, dtnu));
  j["leaf_schedule"] = decisions(n.leaf_schedule, dtnu);
  return j;
}

StrategyNode strategy_from_json(const nlohmann::json& j, const Dtnu& dtnu) { return node_from(j, dtnu, ""); }

}  // namespace rtdc
