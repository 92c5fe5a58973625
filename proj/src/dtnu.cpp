#include "rtdc/dtnu.hpp"

#include <algorithm>
#include <stdexcept>

namespace rtdc {

bool Disjunct::satisfied() const {
  return std::any_of(conjuncts.begin(), conjuncts.end(),
                     [](const Conjunct& c) { return c.status == ConjunctStatus::satisfied; });
}

bool Disjunct::violated() const {
  return std::all_of(conjuncts.begin(), conjuncts.end(),
                     [](const Conjunct& c) { return c.status == ConjunctStatus::violated; });
}

Dtnu::Dtnu(std::vector<std::string> controllables, std::vector<std::string> uncontrollables)
    : num_controllables_(controllables.size()) {
  timepoints_.reserve(controllables.size() + uncontrollables.size());
  for (std::size_t i = 0; i < controllables.size(); ++i)
    timepoints_.push_back({std::move(controllables[i]), TimepointKind::controllable, i});
  for (std::size_t i = 0; i < uncontrollables.size(); ++i)
    timepoints_.push_back({std::move(uncontrollables[i]), TimepointKind::uncontrollable, i});
  for (std::uint32_t i = 0; i < timepoints_.size(); ++i) index_.emplace(timepoints_[i].id, i);
}

std::optional<TimepointRef> Dtnu::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return TimepointRef{it->second};
}

TimepointRef Dtnu::ref(std::string_view id) const {
  if (auto r = find(id)) return *r;
  throw std::out_of_range("unknown timepoint '" + std::string(id) + "'");
}

const ContingencyLink* Dtnu::link_to(TimepointRef u) const {
  for (const auto& link : links_)
    if (link.target == u) return &link;
  return nullptr;
}

bool Dtnu::ids_equal(const Dtnu& other) const {
  for (std::size_t i = 0; i < timepoints_.size(); ++i)
    if (timepoints_[i].id != other.timepoints_[i].id) return false;
  return true;
}

ValidationReport validate(const Dtnu& dtnu) {
  ValidationReport report;
  auto issue = [&](std::string msg) { report.issues.push_back(std::move(msg)); };
  auto in_range = [&](TimepointRef r) { return r.value < dtnu.size(); };
  auto name = [&](TimepointRef r) { return in_range(r) ? dtnu.id(r) : "#" + std::to_string(r.value); };

  std::unordered_map<std::string, int> seen;
  for (const auto& tp : dtnu.timepoints()) {
    if (tp.id.empty()) issue("timepoint with empty identifier");
    if (++seen[tp.id] == 2) issue("duplicate timepoint identifier '" + tp.id + "'");
  }

  for (std::size_t d = 0; d < dtnu.constraints().size(); ++d) {
    const auto& disjunct = dtnu.constraints()[d];
    const std::string where = "constraint " + std::to_string(d);
    if (disjunct.conjuncts.empty()) issue(where + " has no conjuncts");
    for (const auto& c : disjunct.conjuncts) {
      if (!in_range(c.v) || (!c.is_unary() && !in_range(c.vi))) {
        issue(where + " references an unknown timepoint");
        continue;
      }
      if (!c.is_unary() && c.v == c.vi) issue(where + " relates '" + name(c.v) + "' to itself");
      if (c.status != ConjunctStatus::open) issue(where + " has a pre-resolved conjunct");
    }
  }

  std::vector<int> link_count(dtnu.size(), 0);
  for (std::size_t l = 0; l < dtnu.links().size(); ++l) {
    const auto& link = dtnu.links()[l];
    const std::string where = "link " + std::to_string(l);
    if (!in_range(link.trigger) || !in_range(link.target)) {
      issue(where + " references an unknown timepoint");
      continue;
    }
    if (!dtnu.is_controllable(link.trigger)) issue(where + " is triggered by uncontrollable '" + name(link.trigger) + "'");
    if (dtnu.is_controllable(link.target)) issue(where + " targets controllable '" + name(link.target) + "'");
    else ++link_count[link.target.value];
    if (link.intervals.empty()) issue(where + " has no intervals");
    for (std::size_t k = 0; k < link.intervals.size(); ++k) {
      const auto& iv = link.intervals[k];
      if (iv.lo() < TimeValue(0)) issue(where + " has a negative bound");
      if (!iv.lo().is_finite()) issue(where + " has an infinite lower bound");
      if (k > 0 && iv.lo() < link.intervals[k - 1].hi())
        issue(where + " intervals are not sorted and disjoint (" + std::to_string(k - 1) + ", " + std::to_string(k) + ")");
    }
  }
  for (std::size_t i = dtnu.num_controllables(); i < dtnu.size(); ++i) {
    const auto& id = dtnu.timepoints()[i].id;
    if (link_count[i] == 0) issue(id + " has no contingency link");
    if (link_count[i] > 1) issue(id + " is the target of " + std::to_string(link_count[i]) + " contingency links");
  }
  return report;
}

Interval ExecutionRecord::window() const {
  if (const auto* t = std::get_if<TimeValue>(&when)) return Interval::point(*t);
  return std::get<Interval>(when);
}

void ActivationSet::set(TimepointRef u, std::vector<Interval> windows) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), u,
                             [](const Entry& e, TimepointRef r) { return e.first < r; });
  if (it != entries_.end() && it->first == u) it->second = std::move(windows);
  else entries_.emplace(it, u, std::move(windows));
}

void ActivationSet::erase(TimepointRef u) {
  std::erase_if(entries_, [u](const Entry& e) { return e.first == u; });
}

const std::vector<Interval>* ActivationSet::find(TimepointRef u) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), u,
                             [](const Entry& e, TimepointRef r) { return e.first < r; });
  if (it != entries_.end() && it->first == u) return &it->second;
  return nullptr;
}

std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo() < b.lo() || (a.lo() == b.lo() && a.hi() < b.hi()); });
  std::vector<Interval> merged;
  for (auto& iv : intervals) {
    if (!merged.empty() && iv.lo() <= merged.back().hi()) {
      if (merged.back().hi() < iv.hi()) merged.back() = Interval(merged.back().lo(), iv.hi());
    } else {
      merged.push_back(std::move(iv));
    }
  }
  return merged;
}

std::vector<Interval> activation_windows(const ContingencyLink& link, const ExecutionRecord& trigger_exec) {
  if (trigger_exec.timepoint != link.trigger)
    throw std::invalid_argument("execution record is not for the link trigger");
  const Interval w = trigger_exec.window();
  std::vector<Interval> out;
  out.reserve(link.intervals.size());
  for (const auto& iv : link.intervals) out.emplace_back(w.lo() + iv.lo(), w.hi() + iv.hi());
  return merge_intervals(std::move(out));
}

bool holds(const Conjunct& c, std::span<const TimeValue> times) {
  const TimeValue& v = times[c.v.value];
  return c.iv.contains(c.is_unary() ? v : v - times[c.vi.value]);
}

bool holds(const Disjunct& d, std::span<const TimeValue> times) {
  return std::any_of(d.conjuncts.begin(), d.conjuncts.end(), [&](const Conjunct& c) { return holds(c, times); });
}

}  // namespace rtdc
