#pragma once

// Leave-2-dyads-out split plan: every unordered pair of dyads serves once as
// the test set, keeping dyads whole so no participant leaks across the
// train/test boundary.

#include <string>
#include <utility>
#include <vector>

#include "rapport/schema.hpp"

namespace rapport {

struct SplitPlan {
    std::vector<std::string> dyads;           // sorted unique dyad ids
    std::vector<std::pair<int, int>> splits;  // index pairs into dyads, a < b,
                                              // lexicographic over (a, b)

    std::size_t size() const { return splits.size(); }
};

// All C(D, 2) dyad pairs; requires at least 3 dyads so train is never empty.
SplitPlan make_split_plan(const Dataset& data);

// Sample indices of one split. Test = members of the two chosen dyads (4
// samples), train = everyone else.
void split_indices(const Dataset& data, const SplitPlan& plan, std::size_t split,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& test);

// Dataset restricted to the given sample indices, order preserved.
Dataset subset_by_indices(const Dataset& data, const std::vector<std::size_t>& indices);

// All schema features of one category, ascending. Unknown names error.
std::vector<int> category_subset(const FeatureSchema& schema, const std::string& category);

// The full feature index list 0..74.
std::vector<int> all_features(const FeatureSchema& schema);

}  // namespace rapport
