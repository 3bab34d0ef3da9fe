#pragma once

#include <array>
#include <string>
#include <vector>

namespace mrforge::analysis {

/// Labeled sample of final fitness values, one per repetition.
struct SampleSet {
    std::string label;
    std::vector<double> values;
};

/// Exact 2-D hypervolume (minimization) of a front against a reference
/// point: staircase sweep over the non-dominated subset. Points beyond the
/// reference throw PointBeyondReferenceError; dominated points contribute
/// nothing.
double hypervolume(const std::vector<std::array<double, 2>>& front,
                   const std::array<double, 2>& reference);

struct KWResult {
    double H = 0.0;
    double p = 1.0;
};

/// Kruskal-Wallis H with tie correction; p from the chi-squared survival
/// function with k-1 degrees of freedom. Fully degenerate data (all values
/// identical) yields p = 1.
KWResult kruskal_wallis(const std::vector<SampleSet>& groups);

struct MWUResult {
    double U = 0.0;  // U statistic of the first sample (ties count half)
    double p = 1.0;  // two-sided
    bool exact = false;
};

/// Mann-Whitney U. Exact distribution (ties handled through midranks) when
/// n*m <= 400; otherwise normal approximation with tie and continuity
/// correction. Two-sided p doubles the smaller tail, capped at 1.
MWUResult mann_whitney_u(const SampleSet& a, const SampleSet& b);

/// Dunn's pairwise z-tests on mean ranks with tie correction. Returns the
/// symmetric matrix of raw two-sided p values (diagonal 1); the caller
/// applies Bonferroni.
std::vector<std::vector<double>> dunns_test(const std::vector<SampleSet>& groups);

enum class Magnitude { negligible, small, medium, large };

std::string_view to_string(Magnitude m);

struct A12Result {
    double a12 = 0.5;
    Magnitude magnitude = Magnitude::negligible;
    char direction = '=';  // '>' when a tends larger, '<' when smaller
};

/// Vargha-Delaney A-hat-12 effect size with the scaled magnitude bands on
/// |A12 - 0.5|: <0.06 negligible, <0.14 small, <0.21 medium, else large.
A12Result vargha_delaney_a(const SampleSet& a, const SampleSet& b);

double bonferroni_alpha(double base_alpha, int comparisons);

/// Midranks of `values` (average rank over ties), 1-based.
std::vector<double> midranks(const std::vector<double>& values);

}  // namespace mrforge::analysis
