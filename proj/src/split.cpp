#include "rapport/split.hpp"

#include <algorithm>
#include <numeric>

#include "rapport/error.hpp"

namespace rapport {

SplitPlan make_split_plan(const Dataset& data) {
    SplitPlan plan;
    plan.dyads = data.dyad_ids_sorted();
    const int d = static_cast<int>(plan.dyads.size());
    if (d < 3) throw InputError("split: need at least 3 dyads for leave-2-dyads-out");
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) plan.splits.emplace_back(a, b);
    return plan;
}

void split_indices(const Dataset& data, const SplitPlan& plan, std::size_t split,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
    if (split >= plan.splits.size()) throw InputError("split: index out of range");
    const std::string& da = plan.dyads[static_cast<std::size_t>(plan.splits[split].first)];
    const std::string& db = plan.dyads[static_cast<std::size_t>(plan.splits[split].second)];
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const std::string& dyad = data.samples[i].dyad_id;
        if (dyad == da || dyad == db)
            test.push_back(i);
        else
            train.push_back(i);
    }
}

Dataset subset_by_indices(const Dataset& data, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.samples.reserve(indices.size());
    for (const std::size_t i : indices) out.samples.push_back(data.samples[i]);
    return out;
}

std::vector<int> category_subset(const FeatureSchema& schema, const std::string& category) {
    const auto c = category_from_string(category);
    if (!c) throw InputError("split: unknown feature category '" + category + "'");
    return schema.category_indices(*c);
}

std::vector<int> all_features(const FeatureSchema& schema) {
    std::vector<int> out(schema.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
}

}  // namespace rapport
