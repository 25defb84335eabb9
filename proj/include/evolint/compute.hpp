#pragma once

// The `compute` command: evolution operators U_T for requested subsets.

#include <string>
#include <vector>

#include <json.hpp>

#include "evolint/scenario.hpp"

namespace evolint {

/// "1,2;3;{}" -> three subsets. Labels must belong to the frame
/// (DomainError otherwise); "{}" or an empty item is the empty set.
std::vector<TimeSet> parse_subsets(const TimeFrame& frame, const std::string& text);

/// U_T for each subset, diagonal unless `conjugated`, in which case the
/// scenario conjugator (or the derived Haar one) is applied and the dense
/// matrix is written. Throws DomainError for a subset outside Sigma_0.
nlohmann::json compute_operators(const Scenario& scenario, const std::vector<TimeSet>& subsets,
                                 bool conjugated);

}  // namespace evolint
