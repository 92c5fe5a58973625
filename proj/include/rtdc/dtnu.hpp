#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "rtdc/time_value.hpp"

namespace rtdc {

enum class TimepointKind : std::uint8_t { controllable, uncontrollable };

/// Dense handle for a timepoint inside one Dtnu. Controllables occupy
/// [0, num_controllables), uncontrollables follow.
struct TimepointRef {
  std::uint32_t value = 0;
  friend auto operator<=>(const TimepointRef&, const TimepointRef&) = default;
};

struct Timepoint {
  std::string id;
  TimepointKind kind = TimepointKind::controllable;
  std::size_t index = 0;  // ordinal within its kind
};

enum class ConjunctStatus : std::uint8_t { open, satisfied, violated };

/// One atomic interval constraint: `v in iv` (unary, absolute time) or
/// `v - vi in iv` (binary).
struct Conjunct {
  enum class Form : std::uint8_t { unary, binary };

  Form form = Form::unary;
  TimepointRef v;
  TimepointRef vi;  // meaningful for binary only
  Interval iv{0, 0};
  ConjunctStatus status = ConjunctStatus::open;

  static Conjunct unary(TimepointRef v, Interval iv) { return {Form::unary, v, v, std::move(iv)}; }
  static Conjunct binary(TimepointRef vj, TimepointRef vi, Interval iv) {
    return {Form::binary, vj, vi, std::move(iv)};
  }

  bool is_unary() const { return form == Form::unary; }
  bool is_open() const { return status == ConjunctStatus::open; }
  bool mentions(TimepointRef tp) const { return v == tp || (form == Form::binary && vi == tp); }

  friend bool operator==(const Conjunct&, const Conjunct&) = default;
};

/// OR over conjuncts. Satisfied once any conjunct is satisfied, violated once
/// all of them are.
struct Disjunct {
  std::vector<Conjunct> conjuncts;

  bool satisfied() const;
  bool violated() const;

  friend bool operator==(const Disjunct&, const Disjunct&) = default;
};

struct ContingencyLink {
  TimepointRef trigger;
  std::vector<Interval> intervals;
  TimepointRef target;

  friend bool operator==(const ContingencyLink&, const ContingencyLink&) = default;
};

/// Disjunctive temporal network with uncertainty.
class Dtnu {
public:
  Dtnu() = default;
  Dtnu(std::vector<std::string> controllables, std::vector<std::string> uncontrollables);

  void add_constraint(Disjunct d) { constraints_.push_back(std::move(d)); }
  void add_link(ContingencyLink link) { links_.push_back(std::move(link)); }

  std::size_t size() const { return timepoints_.size(); }
  std::size_t num_controllables() const { return num_controllables_; }
  std::size_t num_uncontrollables() const { return timepoints_.size() - num_controllables_; }

  bool is_controllable(TimepointRef tp) const { return tp.value < num_controllables_; }
  const Timepoint& timepoint(TimepointRef tp) const { return timepoints_.at(tp.value); }
  const std::string& id(TimepointRef tp) const { return timepoint(tp).id; }
  std::span<const Timepoint> timepoints() const { return timepoints_; }

  TimepointRef controllable(std::size_t index) const { return {static_cast<std::uint32_t>(index)}; }
  TimepointRef uncontrollable(std::size_t index) const {
    return {static_cast<std::uint32_t>(num_controllables_ + index)};
  }

  /// Looks up a timepoint by its identifier.
  std::optional<TimepointRef> find(std::string_view id) const;
  /// Like find() but throws std::out_of_range for unknown ids.
  TimepointRef ref(std::string_view id) const;

  const std::vector<Disjunct>& constraints() const { return constraints_; }
  const std::vector<ContingencyLink>& links() const { return links_; }

  /// The link whose target is `u`, if any.
  const ContingencyLink* link_to(TimepointRef u) const;

  friend bool operator==(const Dtnu& a, const Dtnu& b) {
    return a.timepoints_.size() == b.timepoints_.size() && a.num_controllables_ == b.num_controllables_ &&
           a.ids_equal(b) && a.constraints_ == b.constraints_ && a.links_ == b.links_;
  }

private:
  bool ids_equal(const Dtnu& other) const;

  std::vector<Timepoint> timepoints_;
  std::size_t num_controllables_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<Disjunct> constraints_;
  std::vector<ContingencyLink> links_;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

/// Reports every structural defect; an empty report means well-formed.
ValidationReport validate(const Dtnu& dtnu);

/// When a timepoint executed: exactly, or somewhere inside a window.
struct ExecutionRecord {
  TimepointRef timepoint;
  std::variant<TimeValue, Interval> when;

  bool is_exact() const { return std::holds_alternative<TimeValue>(when); }
  /// Exact(t) is reported as [t, t].
  Interval window() const;

  friend bool operator==(const ExecutionRecord&, const ExecutionRecord&) = default;
};

/// Activation windows (absolute) of uncontrollables whose trigger executed.
class ActivationSet {
public:
  using Entry = std::pair<TimepointRef, std::vector<Interval>>;

  void set(TimepointRef u, std::vector<Interval> windows);
  void erase(TimepointRef u);
  const std::vector<Interval>* find(TimepointRef u) const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const ActivationSet&, const ActivationSet&) = default;

private:
  std::vector<Entry> entries_;  // sorted by timepoint
};

/// Sorts and merges overlapping or touching intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> intervals);

/// Absolute activation windows of `link.target` given how its trigger executed.
/// Throws std::invalid_argument when the record is not for the trigger.
std::vector<Interval> activation_windows(const ContingencyLink& link, const ExecutionRecord& trigger_exec);

/// Direct evaluation of a conjunct / disjunct under a full exact assignment
/// indexed by TimepointRef::value.
bool holds(const Conjunct& c, std::span<const TimeValue> times);
bool holds(const Disjunct& d, std::span<const TimeValue> times);

}  // namespace rtdc

template <>
struct std::hash<rtdc::TimepointRef> {
  std::size_t operator()(const rtdc::TimepointRef& r) const noexcept { return std::hash<std::uint32_t>{}(r.value); }
};
