#pragma once

// Shared statistics: affiliation scoring, scale reliability, the median split
// that defines the classification target, and Kendall tau-b for
// feature/outcome association.

#include <cstddef>
#include <vector>

#include "rapport/schema.hpp"

namespace rapport {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // sample variance, N-1
double stddev(const std::vector<double>& x);
double median(std::vector<double> x);  // even N: midpoint of central order stats

// Mean of the 11 affiliation items. Items must lie in [1,7]; violations are
// reported with the offending item index.
double score_affiliation(const std::vector<double>& items);

// Cronbach's alpha over an items matrix (rows = respondents, columns = items).
// Requires >= 2 rows and a nonzero total-score variance.
double cronbach_alpha(const std::vector<std::vector<double>>& items);

// Labels each sample high iff affiliation > median (ties go to low) and
// returns the labeled copy. Group sizes may differ by more than one when
// scores tie at the median.
Dataset median_split(const Dataset& data);

// Kendall tau-b with tie correction (Knight's O(n log n) algorithm).
// Errors if either input is constant (tau undefined).
double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rapport
