#include "rtdc/search.hpp"

#include <algorithm>
#include <iostream>

#include "rtdc/waits.hpp"

namespace rtdc {

const char* to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::rtdc: return "rtdc";
    case Verdict::Outcome::not_rtdc: return "not_rtdc";
    case Verdict::Outcome::timeout: return "timeout";
  }
  return "?";
}

Search::Search(const Dtnu& dtnu, SolveConfig config)
    : dtnu_(dtnu), cfg_(config), rng_(config.random_order_seed.value_or(0)) {
  const auto report = validate(dtnu);
  if (!report.ok()) {
    std::string msg = "invalid DTNU:";
    for (const auto& issue : report.issues) msg += "\n  " + issue;
    throw InvalidInput(msg);
  }
  if (cfg_.timeout) {
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(*cfg_.timeout);
  }
  root_ = std::make_unique<SearchNode>();
  root_->state = std::make_unique<DtnuState>(initial_state(dtnu));
  root_->state->epoch = new_epoch();
}

std::size_t Search::new_epoch() {
  epochs_.emplace_back();
  return epochs_.size() - 1;
}

void Search::tick() {
  if (deadline_ && (++ticks_ & 255) == 0 && std::chrono::steady_clock::now() > *deadline_) throw DeadlineExceeded();
}

SearchNode& Search::attach(SearchNode& parent, std::unique_ptr<SearchNode> child) {
  child->parent = &parent;
  parent.children.push_back(std::move(child));
  SearchNode& ref = *parent.children.back();
  if (ref.truth != Truth::unknown) propagate_truth(ref);
  return ref;
}

void Search::settle_leaf(SearchNode& n) {
  LeafInfo info;
  n.truth = leaf_check(dtnu_, *n.state, &info, deadline_);
  if (info.dtn_called) ++stats_.dtn_calls;
  if (info.witness) n.witness = std::move(info.witness);
}

std::vector<std::size_t> Search::dor_order(const SearchNode& n, int depth) {
  const DtnuState& st = *n.state;
  std::vector<TimepointRef> remaining;
  for (std::size_t a = 0; a < dtnu_.num_controllables(); ++a)
    if (!st.executed(dtnu_.controllable(a))) remaining.push_back(dtnu_.controllable(a));
  const bool wait_ok = wait_eligible(st.constraints, st.activated);

  if (n.parent == nullptr && cfg_.root_decision) {
    const std::size_t d = *cfg_.root_decision;
    if (d < dtnu_.num_controllables() && !st.executed(dtnu_.controllable(d))) return {dtnu_.controllable(d).value};
    if (d == dtnu_.num_controllables() && wait_ok) return {kWaitDecision};
    return {};
  }

  std::vector<std::size_t> order;
  for (const auto& a : remaining) order.push_back(a.value);
  if (wait_ok) order.push_back(kWaitDecision);

  if (cfg_.heuristic && depth <= cfg_.heuristic_max_dor_depth) {
    ++stats_.heuristic_calls;
    try {
      const auto probs = cfg_.heuristic->rank(to_graph(dtnu_, st));
      if (probs.size() != remaining.size() + 1) throw HeuristicError("probability count does not match active nodes");
      auto score = [&](std::size_t decision) {
        if (decision == kWaitDecision) return probs.back();
        const auto it = std::find(remaining.begin(), remaining.end(), TimepointRef{static_cast<std::uint32_t>(decision)});
        return probs[static_cast<std::size_t>(it - remaining.begin())];
      };
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return score(a) > score(b); });
      return order;
    } catch (const std::exception& e) {
      ++stats_.heuristic_failures;
      if (cfg_.strict_heuristic) throw HeuristicError(e.what());
      if (!warned_) {
        std::cerr << "warning: heuristic failed (" << e.what() << "); using creation order\n";
        warned_ = true;
      }
    }
  }
  if (cfg_.random_order_seed) std::shuffle(order.begin(), order.end(), rng_);
  return order;
}

void Search::ensure_dor(SearchNode& n) {
  if (!n.children.empty()) return;
  auto d = std::make_unique<SearchNode>();
  d->kind = NodeKind::d_or;
  d->dor_depth = n.dor_depth + 1;
  d->order = dor_order(n, d->dor_depth);
  d->total_children = d->order.size();
  SearchNode& ref = attach(n, std::move(d));
  if (ref.total_children == 0) {
    ref.truth = Truth::no;
    propagate_truth(ref);
  }
}

std::unique_ptr<SearchNode> Search::schedule_child(const SearchNode& src, TimepointRef a, int depth) {
  auto c = std::make_unique<SearchNode>();
  c->dor_depth = depth;
  c->decision = a;
  auto st = std::make_unique<DtnuState>(*src.state);
  const TimeValue t = st->now;
  const ExecutionRecord rec{a, t};
  st->memory[a.value] = rec;
  if (!st->violated) st->violated = apply_exact(st->constraints, a, t);
  for (const auto& link : dtnu_.links())
    if (link.trigger == a) st->activated.set(link.target, activation_windows(link, rec));
  if (!st->violated) st->violated = apply_expire(st->constraints, t, st->executed_mask());
  st->epoch_scheduled[a.value] = true;
  const bool duplicate = cfg_.symmetry_pruning && !epochs_[st->epoch].insert(st->epoch_scheduled).second;
  c->state = std::move(st);
  if (duplicate) c->truth = Truth::no;
  else settle_leaf(*c);
  return c;
}

std::unique_ptr<SearchNode> Search::wait_child(const SearchNode& src, int depth) {
  auto c = std::make_unique<SearchNode>();
  c->kind = NodeKind::wait;
  c->dor_depth = depth;
  const DtnuState& st = *src.state;
  const auto w = try_wait_duration(st.now, st.constraints, st.activated);
  if (!w) {
    c->truth = Truth::no;
    return c;
  }
  auto plan = std::make_unique<WaitPlan>();
  plan->start = st.now;
  plan->delta = w->delta;
  plan->outcomes = classify_outcomes(st.activated, st.now, w->delta);
  plan->candidates = reactive_candidates(dtnu_, st, plan->outcomes, st.now + w->delta);
  c->plan = std::move(plan);
  c->total_children = 1;
  ++stats_.waits;
  return c;
}

std::unique_ptr<SearchNode> Search::and_child(const SearchNode& w_or, const std::vector<std::size_t>& pick) {
  const WaitPlan& plan = *w_or.parent->plan;
  auto c = std::make_unique<SearchNode>();
  c->kind = NodeKind::and_;
  c->dor_depth = w_or.dor_depth;
  for (auto i : pick) c->reactive.push_back(plan.candidates[i]);
  c->total_children = SubsetOrder::count(plan.outcomes.possible.size());
  return c;
}

std::unique_ptr<SearchNode> Search::outcome_child(const SearchNode& and_node, const std::vector<std::size_t>& pick) {
  const SearchNode& wait = *and_node.parent->parent;
  const SearchNode& src = *wait.parent->parent;
  const WaitPlan& plan = *wait.plan;
  const OutcomeSets& out = plan.outcomes;
  const TimeValue end = plan.start + plan.delta;

  auto c = std::make_unique<SearchNode>();
  c->dor_depth = and_node.dor_depth;
  auto st = std::make_unique<DtnuState>(*src.state);

  std::vector<std::pair<TimepointRef, Interval>> happened;
  for (std::size_t i = 0; i < out.certain.size(); ++i) happened.emplace_back(out.certain[i], out.certain_windows[i]);
  for (auto j : pick) happened.emplace_back(out.possible[j], out.possible_windows[j]);
  std::sort(happened.begin(), happened.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  for (std::size_t j = 0; j < out.possible.size(); ++j) {
    if (std::find(pick.begin(), pick.end(), j) != pick.end()) continue;
    std::vector<Interval> rest;
    for (const auto& w : *st->activated.find(out.possible[j]))
      if (w.hi() >= end) rest.emplace_back(max(w.lo(), end), w.hi());
    st->activated.set(out.possible[j], std::move(rest));
  }
  for (const auto& [u, w] : happened) {
    st->memory[u.value] = ExecutionRecord{u, w};
    st->activated.erase(u);
  }

  ReactivePairs fired;
  for (const auto& [u, phi] : and_node.reactive) {
    const bool occurred =
        std::any_of(happened.begin(), happened.end(), [u = u](const auto& h) { return h.first == u; });
    if (occurred) fired.emplace_back(u, phi);
  }
  for (const auto& [u, w] : happened)
    if (!st->violated) st->violated = apply_bounded(st->constraints, u, w, fired);
  for (const auto& [u, phi] : fired) {
    const auto& w = std::find_if(happened.begin(), happened.end(), [u = u](const auto& h) { return h.first == u; })->second;
    const ExecutionRecord rec{phi, w};
    st->memory[phi.value] = rec;
    if (!st->violated) st->violated = apply_bounded(st->constraints, phi, w, fired);
    for (const auto& link : dtnu_.links())
      if (link.trigger == phi) st->activated.set(link.target, activation_windows(link, rec));
  }

  st->now = end;
  if (!st->violated) st->violated = apply_expire(st->constraints, end, st->executed_mask());
  st->epoch = new_epoch();
  st->epoch_scheduled.assign(dtnu_.num_controllables(), false);
  for (const auto& h : happened) c->occurred.push_back(h.first);
  c->state = std::move(st);
  settle_leaf(*c);
  return c;
}

SearchNode* Search::next_child(SearchNode& n) {
  std::unique_ptr<SearchNode> child;
  std::vector<std::size_t> pick;
  switch (n.kind) {
    case NodeKind::d_or: {
      if (n.next_child >= n.order.size()) return nullptr;
      const std::size_t d = n.order[n.next_child];
      const SearchNode& src = *n.parent;
      child = d == kWaitDecision ? wait_child(src, n.dor_depth)
                                 : schedule_child(src, TimepointRef{static_cast<std::uint32_t>(d)}, n.dor_depth);
      break;
    }
    case NodeKind::w_or: {
      if (!n.subsets) n.subsets = std::make_unique<SubsetOrder>(n.parent->plan->candidates.size());
      if (!n.subsets->next(pick)) return nullptr;
      child = and_child(n, pick);
      break;
    }
    case NodeKind::and_: {
      const WaitPlan& plan = *n.parent->parent->plan;
      if (!n.subsets) n.subsets = std::make_unique<SubsetOrder>(plan.outcomes.possible.size());
      if (!n.subsets->next(pick)) return nullptr;
      child = outcome_child(n, pick);
      break;
    }
    case NodeKind::wait: {
      if (!n.children.empty()) return nullptr;
      child = std::make_unique<SearchNode>();
      child->kind = NodeKind::w_or;
      child->dor_depth = n.dor_depth;
      child->total_children = SubsetOrder::count(n.plan->candidates.size());
      break;
    }
    case NodeKind::dtnu:
      return nullptr;
  }
  ++n.next_child;
  return &attach(n, std::move(child));
}

void Search::explore(SearchNode& n) {
  if (n.truth != Truth::unknown || truth_check_skip(n)) return;
  tick();
  ++stats_.expanded;
  if (n.kind == NodeKind::dtnu) {
    ensure_dor(n);
    explore(*n.children.front());
    if (n.parent == nullptr || n.parent->kind == NodeKind::and_) std::unordered_set<std::vector<bool>>().swap(epochs_[n.state->epoch]);
  } else {
    while (n.truth == Truth::unknown) {
      SearchNode* c = next_child(n);
      if (c == nullptr) break;
      explore(*c);
    }
  }
  if (cfg_.retain_tree) return;
  if (n.truth == Truth::no) {
    n.children.clear();
  } else if (n.truth == Truth::yes && (n.kind == NodeKind::d_or || n.kind == NodeKind::w_or)) {
    std::erase_if(n.children, [](const auto& c) { return c->truth != Truth::yes; });
  }
}

std::vector<SearchNode*> Search::expand_dor(SearchNode& dtnu_node) {
  ensure_dor(dtnu_node);
  SearchNode& d = *dtnu_node.children.front();
  while (next_child(d) != nullptr) {
  }
  std::vector<SearchNode*> out;
  for (auto& c : d.children) out.push_back(c.get());
  return out;
}

Verdict Search::run() {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    // A forced root decision must be explored even when the root is already a leaf.
    if (root_->state->violated) root_->truth = Truth::no;
    else if (!cfg_.root_decision) settle_leaf(*root_);
    explore(*root_);
  } catch (const DeadlineExceeded&) {
  }
  switch (root_->truth) {
    case Truth::yes:
      v.outcome = Verdict::Outcome::rtdc;
      v.strategy = extract(*root_);
      break;
    case Truth::no: v.outcome = Verdict::Outcome::not_rtdc; break;
    case Truth::unknown: v.outcome = Verdict::Outcome::timeout; break;
  }
  stats_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.stats = stats_;
  if (cfg_.retain_tree) v.tree = std::shared_ptr<SearchNode>(std::move(root_));
  return v;
}

Verdict solve(const Dtnu& dtnu, const SolveConfig& config) { return Search(dtnu, config).run(); }

}  // namespace rtdc
