// Chained ridge imputation: identity on complete data, exact linear recovery,
// and the never-touch-valid-cells contract.

#include <cmath>

#include "doctest.h"
#include "rapport/error.hpp"
#include "rapport/impute.hpp"
#include "rapport/rng.hpp"
#include "support/oracles.hpp"

using namespace rapport;

namespace {

// n samples of standard-normal features, paired into dyads.
Dataset random_dataset(std::size_t n, std::uint64_t seed) {
    const std::size_t p = FeatureSchema::standard().size();
    Rng rng(seed);
    Dataset d;
    for (std::size_t r = 0; r < n; ++r) {
        Sample s;
        s.participant_id = "p" + std::to_string(r);
        s.dyad_id = "d" + std::to_string(r / 2);
        s.affiliation = 4.0;
        s.features = FeatureVector(p);
        for (std::size_t j = 0; j < p; ++j) s.features.set(j, rng.normal());
        d.samples.push_back(std::move(s));
    }
    return d;
}

}  // namespace

TEST_CASE("imputer on complete data is identity and converges immediately") {
    Dataset d = random_dataset(20, 101);
    const ImputationModel model = fit_imputer(d);
    CHECK(model.sweeps_run == 0);

    const Dataset out = impute_dataset(model, d);
    for (std::size_t r = 0; r < d.samples.size(); ++r)
        for (std::size_t j = 0; j < d.samples[r].features.size(); ++j) {
            CHECK(out.samples[r].features.values[j] == d.samples[r].features.values[j]);
            CHECK(out.samples[r].features.is_valid(j));
        }
}

TEST_CASE("imputer recovers B = 2A exactly as lambda -> 0") {
    // Feature 1 is exactly twice feature 0; everything else is noise. With a
    // vanishing ridge penalty the fitted predictor must reproduce the affine
    // relation, so the one missing B cell lands within 1e-6 of 2A.
    Dataset d = random_dataset(100, 202);
    for (Sample& s : d.samples) s.features.set(1, 2.0 * s.features.values[0]);
    const double hidden_a = d.samples[7].features.values[0];
    d.samples[7].features.set_invalid(1);

    ImputerParams params;
    params.lambda = 1e-6;
    const ImputationModel model = fit_imputer(d, params);
    CHECK(model.sweeps_run >= 1);

    const Dataset out = impute_dataset(model, d);
    CHECK(out.samples[7].features.is_valid(1));
    CHECK(std::abs(out.samples[7].features.values[1] - 2.0 * hidden_a) < 1e-6);
}

TEST_CASE("imputer never alters valid cells") {
    Dataset d = random_dataset(30, 303);
    Rng rng(304);
    for (Sample& s : d.samples)
        for (std::size_t j = 0; j < s.features.size(); ++j)
            if (rng.uniform01() < 0.1) s.features.set_invalid(j);
    // Keep every feature observable at least twice (n=30, 10% missing makes
    // a fully-starved column vanishingly unlikely, but assert anyway).
    const ImputationModel model = fit_imputer(d);

    const Dataset out = impute_dataset(model, d);
    for (std::size_t r = 0; r < d.samples.size(); ++r)
        for (std::size_t j = 0; j < d.samples[r].features.size(); ++j) {
            if (d.samples[r].features.is_valid(j)) {
                CHECK(out.samples[r].features.values[j] == d.samples[r].features.values[j]);
            } else {
                CHECK(out.samples[r].features.is_valid(j));
                CHECK(std::isfinite(out.samples[r].features.values[j]));
            }
        }
    CHECK(model.sweeps_run >= 1);
    CHECK(model.sweeps_run <= 10);
}

TEST_CASE("imputer visit order is ascending missing count") {
    Dataset d = random_dataset(20, 404);
    for (int r = 0; r < 6; ++r) d.samples[r].features.set_invalid(3);
    for (int r = 0; r < 2; ++r) d.samples[r].features.set_invalid(9);
    const ImputationModel model = fit_imputer(d);
    // Feature 9 (2 missing) must be visited before feature 3 (6 missing);
    // complete features come before both.
    std::size_t pos3 = 0, pos9 = 0, pos0 = 0;
    for (std::size_t i = 0; i < model.order.size(); ++i) {
        if (model.order[i] == 3) pos3 = i;
        if (model.order[i] == 9) pos9 = i;
        if (model.order[i] == 0) pos0 = i;
    }
    CHECK(pos0 < pos9);
    CHECK(pos9 < pos3);
}

TEST_CASE("imputer imputes the constant for a zero-variance column") {
    Dataset d = random_dataset(20, 505);
    for (Sample& s : d.samples) s.features.set(5, 3.0);
    d.samples[4].features.set_invalid(5);
    const ImputationModel model = fit_imputer(d);
    const Dataset out = impute_dataset(model, d);
    CHECK(out.samples[4].features.values[5] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("imputer errors when a feature is observed in fewer than 2 samples") {
    Dataset d = random_dataset(10, 606);
    for (std::size_t r = 0; r + 1 < d.samples.size(); ++r) d.samples[r].features.set_invalid(2);
    const std::string name = FeatureSchema::standard().entry(2).name;
    CHECK_THROWS_WITH_AS(fit_imputer(d),
                         ("impute: feature '" + name + "' is valid in fewer than 2 training samples")
                             .c_str(),
                         InputError);
}

TEST_CASE("impute rejects width mismatch") {
    Dataset d = random_dataset(10, 707);
    const ImputationModel model = fit_imputer(d);
    FeatureVector narrow(5);
    CHECK_THROWS_AS(impute(model, narrow), InputError);
}
