#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causkit/process.hpp"
#include "causkit/report.hpp"
#include "causkit/types.hpp"

namespace causkit {

/// Strict partial order on events, stored transitively closed.
class EventPoset {
 public:
  EventPoset() = default;
  /// `order` holds (below, above) name pairs. Throws UnknownEvent or
  /// BadPartition (cycle).
  EventPoset(std::vector<Event> events, const std::vector<std::pair<std::string, std::string>>& order);

  static EventPoset chain(std::vector<Event> events);

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  std::size_t index(const std::string& name) const;
  bool below(std::size_t a, std::size_t b) const { return below_[a][b]; }
  /// Closed relation as (below, above) name pairs.
  std::vector<std::pair<std::string, std::string>> relation() const;

 private:
  std::vector<Event> events_;
  std::vector<std::vector<bool>> below_;
};

/// Down-closure of a set of event names, in poset order.
std::vector<std::string> past(const EventPoset& poset, const std::vector<std::string>& names);

EventPoset poset_from_json(const nlohmann::json& j);
nlohmann::json poset_to_json(const EventPoset& p);

/// Outputs of `first` do not depend on inputs of `second` (and Phi causal).
CheckReport check_one_way(const Process& phi, const std::vector<Event>& first,
                          const std::vector<Event>& second, Tolerance tol = {});
CheckReport check_nonsignalling(const Process& phi, const std::vector<Event>& events,
                                Tolerance tol = {});
CheckReport check_comb(const Process& phi, const std::vector<Event>& order, Tolerance tol = {});
CheckReport check_order_consistency(const Process& phi, const EventPoset& poset, Tolerance tol = {});

/// All linear extensions (at most 8 events).
std::vector<EventPoset> totalisations(const EventPoset& poset);
CheckReport check_via_totalisations(const Process& phi, const EventPoset& poset, Tolerance tol = {});

inline constexpr std::size_t kDefaultSocBudget = 200000;

/**
 * Second-order causality. A party event's `ins` are the wires the party
 * receives (outputs of w) and its `outs` the wires it returns (inputs of
 * w). `out_event` is the global input/output pair of w.
 **/
CheckReport check_soc(const Process& w, const std::vector<Event>& party_events, const Event& out_event,
                      Tolerance tol = {}, std::size_t budget = kDefaultSocBudget);

/// Dispatches on the normal form of `t`. Throws UnsupportedType for shapes
/// outside the characterized families.
CheckReport check_membership(const Process& phi, const CausalType& t, Tolerance tol = {});

}  // namespace causkit
