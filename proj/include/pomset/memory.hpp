#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pomset/errors.hpp"
#include "pomset/partial_string.hpp"
#include "pomset/program.hpp"

namespace pomset {

// Store a load reads from; nullopt is the bottom element (the initial value).
using RfTarget = std::optional<Event>;

// Read-from function on the loads of one partial string.
struct RfMap {
  std::map<Event, RfTarget> reads;

  void set(Event load, RfTarget store) { reads[load] = store; }
  RfTarget operator()(Event load) const { return reads.at(load); }
  friend bool operator==(const RfMap&, const RfMap&) = default;
};

// ⋁H_x(l): an event, bottom (H empty), or none (H has no maximum).
struct Lub {
  enum class Kind { event, bottom, none };
  Kind kind = Kind::bottom;
  Event event = 0;

  static Lub of(Event e) { return {Kind::event, e}; }
  static Lub bottom() { return {Kind::bottom, 0}; }
  static Lub none() { return {Kind::none, 0}; }

  bool exists() const noexcept { return kind != Kind::none; }
  // Compares against an rf target; `none` equals nothing.
  bool matches(RfTarget t) const noexcept {
    if (kind == Kind::bottom) return !t.has_value();
    return kind == Kind::event && t.has_value() && *t == event;
  }
  friend bool operator==(const Lub&, const Lub&) = default;
};

struct Violation {
  std::string axiom;
  std::vector<Event> events;
};

// Axioms evaluated over the release/acquire events of each address.
struct AxiomReport {
  bool sw = true;         // synchronizes-with: rf(l) = s implies s ⪯ l
  bool wc = true;         // write coherence: releases on one address totally ordered
  bool fr = true;         // from-read: rf(l) = s and s ≺ s' imply l ⪯ s'
  bool weak_rc = true;    // ⋁H(l) exists and ⋁H(l) ⪯ rf(l)
  bool strong_rc = true;  // rf(l) = ⋁H(l)
  bool sc_relaxed = true;
  std::vector<Violation> witnesses;

  bool three_axioms() const noexcept { return sw && wc && fr; }
};

namespace detail {

inline bool on_address(const PartialString& x, Event e, const std::string& addr) {
  auto a = x.label(e).address();
  return a && *a == addr;
}

inline std::set<std::string> addresses(const PartialString& x) {
  std::set<std::string> out;
  for (const auto& l : x.labels())
    if (auto a = l.address()) out.insert(*a);
  return out;
}

// Maximum of the stores (optionally releases only) on l's address that are ⪯ l.
inline Lub lub_below(const PartialString& x, Event l, bool releases_only) {
  const std::string addr = *x.label(l).address();
  std::vector<Event> h;
  for (Event s = 0; s < x.size(); ++s) {
    const auto& lab = x.label(s);
    if (lab.is_store() && on_address(x, s, addr) && (!releases_only || lab.is_release()) && x.leq(s, l))
      h.push_back(s);
  }
  if (h.empty()) return Lub::bottom();
  for (Event m : h)
    if (std::all_of(h.begin(), h.end(), [&](Event s) { return x.leq(s, m); })) return Lub::of(m);
  return Lub::none();
}

// ⊥ is below every event.
inline bool target_leq(const PartialString& x, RfTarget t, Event e) { return !t || x.leq(*t, e); }

}  // namespace detail

inline bool is_sc_relaxed(const PartialString& x) {
  for (Event a = 0; a < x.size(); ++a) {
    const auto& la = x.label(a);
    if (!la.is_synchronizing()) continue;
    for (Event b = a + 1; b < x.size(); ++b) {
      const auto& lb = x.label(b);
      if (!lb.is_synchronizing() || !(la.address() == lb.address())) continue;
      // Two acquires may stay concurrent; every other synchronizing pair must be ordered.
      if (la.is_acquire() && lb.is_acquire()) continue;
      if (!x.comparable(a, b)) return false;
    }
  }
  return true;
}

// H_x(l): stores on l's address that happen-before-or-equal l.
inline std::vector<Event> hb_stores(const PartialString& x, Event l) {
  if (!x.label(l).is_load()) throw InvalidArgument("event " + x.name(l) + " is not a load");
  const std::string addr = *x.label(l).address();
  std::vector<Event> out;
  for (Event s = 0; s < x.size(); ++s)
    if (x.label(s).is_store() && detail::on_address(x, s, addr) && x.leq(s, l)) out.push_back(s);
  return out;
}

inline Lub lub_hb_stores(const PartialString& x, Event l) {
  if (!x.label(l).is_load()) throw InvalidArgument("event " + x.name(l) + " is not a load");
  return detail::lub_below(x, l, false);
}

// Totality on loads, same-address targets, and bottom only where H_x(l) is empty.
inline void validate_rf(const PartialString& x, const RfMap& rf) {
  for (const auto& [l, t] : rf.reads) {
    if (l >= x.size() || !x.label(l).is_load()) throw MalformedRf("rf source is not a load");
    if (t) {
      if (*t >= x.size() || !x.label(*t).is_store())
        throw MalformedRf("rf(" + x.name(l) + ") is not a store");
      if (x.label(*t).address() != x.label(l).address())
        throw MalformedRf("rf(" + x.name(l) + ") = " + x.name(*t) + " accesses a different address");
    } else if (!hb_stores(x, l).empty()) {
      throw MalformedRf("rf(" + x.name(l) + ") = bottom although a store happens-before it");
    }
  }
  for (Event l = 0; l < x.size(); ++l)
    if (x.label(l).is_load() && !rf.reads.contains(l)) throw MalformedRf("rf undefined on load " + x.name(l));
}

// An acquire reading from a non-release store is outside the release/acquire
// fragment: it fails sw and strong_rc and is skipped by fr and weak_rc.
inline AxiomReport check_axioms(const PartialString& x, const RfMap& rf) {
  validate_rf(x, rf);
  AxiomReport r;
  auto fail = [&r](bool& flag, std::string name, std::vector<Event> ev) {
    flag = false;
    r.witnesses.push_back({std::move(name), std::move(ev)});
  };
  const std::size_t n = x.size();
  for (Event a = 0; a < n; ++a)
    for (Event b = a + 1; b < n; ++b)
      if (x.label(a).is_release() && x.label(b).is_release() && x.label(a).address() == x.label(b).address() &&
          !x.comparable(a, b))
        fail(r.wc, "wc", {a, b});

  for (Event l = 0; l < n; ++l) {
    if (!x.label(l).is_acquire()) continue;
    const RfTarget s = rf(l);
    const bool in_scope = !s || x.label(*s).is_release();
    const Lub lub = detail::lub_below(x, l, true);

    if (!in_scope) {
      fail(r.sw, "sw", {l, *s});
      fail(r.strong_rc, "strong_rc", {l, *s});
      if (!lub.exists()) fail(r.weak_rc, "weak_rc", {l});
      continue;
    }
    if (!detail::target_leq(x, s, l)) fail(r.sw, "sw", {l, *s});
    for (Event s2 = 0; s2 < n; ++s2) {
      if (!x.label(s2).is_release() || x.label(s2).address() != x.label(l).address()) continue;
      const bool s_before = !s ? true : x.less(*s, s2);
      if (s_before && !x.leq(l, s2)) {
        std::vector<Event> ev{l};
        if (s) ev.push_back(*s);
        ev.push_back(s2);
        fail(r.fr, "fr", std::move(ev));
      }
    }
    if (!lub.exists()) {
      fail(r.weak_rc, "weak_rc", {l});
      fail(r.strong_rc, "strong_rc", {l});
      continue;
    }
    // ⋁H ⪯ rf(l): bottom is below everything; nothing but bottom is below bottom.
    const bool weak = lub.kind == Lub::Kind::bottom || (s && x.leq(lub.event, *s));
    if (!weak) fail(r.weak_rc, "weak_rc", s ? std::vector<Event>{l, *s} : std::vector<Event>{l});
    if (!lub.matches(s)) fail(r.strong_rc, "strong_rc", s ? std::vector<Event>{l, *s} : std::vector<Event>{l});
  }
  if (!is_sc_relaxed(x)) {
    r.sc_relaxed = false;
    for (Event a = 0; a < n; ++a)
      for (Event b = a + 1; b < n; ++b) {
        const auto &la = x.label(a), &lb = x.label(b);
        if (la.is_synchronizing() && lb.is_synchronizing() && la.address() == lb.address() &&
            !(la.is_acquire() && lb.is_acquire()) && !x.comparable(a, b))
          r.witnesses.push_back({"sc_relaxed", {a, b}});
      }
  }
  return r;
}

// [SC-relaxed and rf(l) = ⋁H(l) for every acquire] agrees with [sw ∧ wc ∧ fr].
inline bool theorem3_equivalence(const PartialString& x, const RfMap& rf) {
  const AxiomReport r = check_axioms(x, rf);
  bool lhs = is_sc_relaxed(x);
  for (Event l = 0; l < x.size() && lhs; ++l)
    if (x.label(l).is_acquire() && !detail::lub_below(x, l, true).matches(rf(l))) lhs = false;
  return lhs == r.three_axioms();
}

// x extended with one release per address, ordered before every event of x.
// Original events keep their indices; initializers are appended.
struct Initialized {
  PartialString string;
  std::map<std::string, Event> init;  // address -> initializer event
};

inline Initialized with_initializers(const PartialString& x) {
  std::vector<Label> labels = x.labels();
  std::vector<Edge> edges = x.edges();
  std::vector<std::string> names = x.names();
  std::set<std::string> taken(names.begin(), names.end());
  Initialized out;
  const std::size_t n = x.size();
  for (const auto& addr : detail::addresses(x)) {
    const Event e = labels.size();
    labels.push_back(Label::release(addr, 0));
    std::string name = "init_" + addr;
    while (taken.contains(name)) name += "'";
    taken.insert(name);
    names.push_back(name);
    for (Event f = 0; f < n; ++f) edges.emplace_back(e, f);
    out.init[addr] = e;
  }
  out.string = PartialString(std::move(labels), std::move(edges), std::move(names));
  return out;
}

// Strings of ↓X (up to isomorphism) that are SC-relaxed.
inline std::vector<PartialString> sc_relaxed_restrict(const Program& x, std::size_t max_events) {
  std::vector<PartialString> out;
  for (auto& p : enumerate_closure(x, max_events))
    if (is_sc_relaxed(p)) out.push_back(std::move(p));
  return out;
}

// Unordered pairs of non-synchronizing accesses to one address, at least one a store.
inline std::vector<Edge> find_races(const PartialString& x) {
  std::vector<Edge> out;
  for (Event a = 0; a < x.size(); ++a)
    for (Event b = a + 1; b < x.size(); ++b) {
      const auto &la = x.label(a), &lb = x.label(b);
      if (!la.is_memory_access() || !lb.is_memory_access()) continue;
      if (la.is_synchronizing() || lb.is_synchronizing()) continue;
      if (la.address() != lb.address()) continue;
      if (!la.is_store() && !lb.is_store()) continue;
      if (!x.comparable(a, b)) out.emplace_back(a, b);
    }
  return out;
}

}  // namespace pomset
