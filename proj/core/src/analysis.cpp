#include "mrforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "mrforge/errors.hpp"

namespace mrforge::analysis {

namespace {

double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double tie_term(const std::vector<double>& combined) {
    std::map<double, std::size_t> counts;
    for (double v : combined) ++counts[v];
    double t = 0.0;
    for (const auto& [v, c] : counts) {
        (void)v;
        double cd = static_cast<double>(c);
        t += cd * cd * cd - cd;
    }
    return t;
}

}  // namespace

std::vector<double> midranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double hypervolume(const std::vector<std::array<double, 2>>& front,
                   const std::array<double, 2>& reference) {
    for (const auto& p : front) {
        if (p[0] > reference[0] || p[1] > reference[1])
            throw PointBeyondReferenceError("hypervolume: point (" + std::to_string(p[0]) + "," +
                                            std::to_string(p[1]) + ") beyond reference");
    }
    if (front.empty()) return 0.0;
    std::vector<std::array<double, 2>> pts = front;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });
    // Lower staircase: keep points strictly improving in f2.
    std::vector<std::array<double, 2>> stair;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        if (p[1] < best_f2) {
            stair.push_back(p);
            best_f2 = p[1];
        }
    }
    double hv = 0.0;
    for (std::size_t i = 0; i < stair.size(); ++i) {
        double next_f1 = i + 1 < stair.size() ? stair[i + 1][0] : reference[0];
        hv += (next_f1 - stair[i][0]) * (reference[1] - stair[i][1]);
    }
    return hv;
}

KWResult kruskal_wallis(const std::vector<SampleSet>& groups) {
    if (groups.size() < 2)
        throw DegenerateSamplesError("kruskal_wallis: need at least 2 groups");
    std::vector<double> combined;
    for (const auto& g : groups) {
        if (g.values.size() < 2)
            throw DegenerateSamplesError("kruskal_wallis: each group needs >= 2 samples");
        combined.insert(combined.end(), g.values.begin(), g.values.end());
    }
    const double n_total = static_cast<double>(combined.size());
    auto ranks = midranks(combined);

    double h = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i) rank_sum += ranks[offset + i];
        offset += g.values.size();
        h += rank_sum * rank_sum / static_cast<double>(g.values.size());
    }
    h = 12.0 / (n_total * (n_total + 1.0)) * h - 3.0 * (n_total + 1.0);

    double correction = 1.0 - tie_term(combined) / (n_total * n_total * n_total - n_total);
    if (correction <= 0.0) return {0.0, 1.0};  // all values identical
    h /= correction;

    double df = static_cast<double>(groups.size()) - 1.0;
    return {h, chi2_sf(h, df)};
}

namespace {

double u_statistic(const SampleSet& a, const SampleSet& b) {
    std::vector<double> combined = a.values;
    combined.insert(combined.end(), b.values.begin(), b.values.end());
    auto ranks = midranks(combined);
    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) rank_sum_a += ranks[i];
    double n = static_cast<double>(a.values.size());
    return rank_sum_a - n * (n + 1.0) / 2.0;
}

// Exact two-sided p via the permutation distribution of U over all
// C(n+m, n) assignments of the observed values. Midranks doubled to stay
// in integer arithmetic; counts fit in doubles (< 2^53 for n+m <= 40).
double exact_mwu_p(const SampleSet& a, const SampleSet& b, double u_obs) {
    const std::size_t n = a.values.size();
    std::vector<double> combined = a.values;
    combined.insert(combined.end(), b.values.begin(), b.values.end());
    auto ranks = midranks(combined);
    std::vector<long long> doubled(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i)
        doubled[i] = std::llround(2.0 * ranks[i]);

    long long max_sum = std::accumulate(doubled.begin(), doubled.end(), 0LL);
    // count[k][s] = number of size-k subsets of the doubled ranks summing to s
    std::vector<std::vector<double>> count(
        n + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    count[0][0] = 1.0;
    for (long long item : doubled) {
        for (std::size_t k = std::min(n, static_cast<std::size_t>(ranks.size())); k >= 1; --k) {
            for (long long s = max_sum; s >= item; --s) {
                double ways = count[k - 1][static_cast<std::size_t>(s - item)];
                if (ways > 0.0) count[k][static_cast<std::size_t>(s)] += ways;
            }
        }
    }

    const long long offset = static_cast<long long>(n) * (static_cast<long long>(n) + 1);
    const long long u2_obs = std::llround(2.0 * u_obs);
    double total = 0.0, lo = 0.0, hi = 0.0;
    for (long long s = 0; s <= max_sum; ++s) {
        double ways = count[n][static_cast<std::size_t>(s)];
        if (ways == 0.0) continue;
        long long u2 = s - offset;
        total += ways;
        if (u2 <= u2_obs) lo += ways;
        if (u2 >= u2_obs) hi += ways;
    }
    return std::min(1.0, 2.0 * std::min(lo, hi) / total);
}

}  // namespace

MWUResult mann_whitney_u(const SampleSet& a, const SampleSet& b) {
    if (a.values.empty() || b.values.empty())
        throw DegenerateSamplesError("mann_whitney_u: empty sample");
    const double n = static_cast<double>(a.values.size());
    const double m = static_cast<double>(b.values.size());
    MWUResult result;
    result.U = u_statistic(a, b);

    if (n * m <= 400.0) {
        result.exact = true;
        result.p = exact_mwu_p(a, b, result.U);
        return result;
    }

    std::vector<double> combined = a.values;
    combined.insert(combined.end(), b.values.begin(), b.values.end());
    const double n_total = n + m;
    double sigma2 =
        n * m / 12.0 * ((n_total + 1.0) - tie_term(combined) / (n_total * (n_total - 1.0)));
    if (sigma2 <= 0.0) {
        result.p = 1.0;
        return result;
    }
    double mu = n * m / 2.0;
    double u_big = std::max(result.U, n * m - result.U);
    double z = (u_big - mu - 0.5) / std::sqrt(sigma2);
    result.p = std::min(1.0, 2.0 * normal_sf(z));
    return result;
}

std::vector<std::vector<double>> dunns_test(const std::vector<SampleSet>& groups) {
    if (groups.size() < 2) throw DegenerateSamplesError("dunns_test: need at least 2 groups");
    std::vector<double> combined;
    for (const auto& g : groups) {
        if (g.values.size() < 2)
            throw DegenerateSamplesError("dunns_test: each group needs >= 2 samples");
        combined.insert(combined.end(), g.values.begin(), g.values.end());
    }
    const double n_total = static_cast<double>(combined.size());
    auto ranks = midranks(combined);

    std::vector<double> mean_rank(groups.size(), 0.0);
    std::size_t offset = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i = 0; i < groups[g].values.size(); ++i)
            mean_rank[g] += ranks[offset + i];
        mean_rank[g] /= static_cast<double>(groups[g].values.size());
        offset += groups[g].values.size();
    }

    double variance_core = n_total * (n_total + 1.0) / 12.0 -
                           tie_term(combined) / (12.0 * (n_total - 1.0));
    std::vector<std::vector<double>> p(groups.size(), std::vector<double>(groups.size(), 1.0));
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            double ni = static_cast<double>(groups[i].values.size());
            double nj = static_cast<double>(groups[j].values.size());
            double denom = variance_core * (1.0 / ni + 1.0 / nj);
            double pij = 1.0;
            if (denom > 0.0) {
                double z = std::abs(mean_rank[i] - mean_rank[j]) / std::sqrt(denom);
                pij = std::min(1.0, 2.0 * normal_sf(z));
            }
            p[i][j] = pij;
            p[j][i] = pij;
        }
    }
    return p;
}

std::string_view to_string(Magnitude m) {
    switch (m) {
        case Magnitude::negligible: return "negligible";
        case Magnitude::small: return "small";
        case Magnitude::medium: return "medium";
        case Magnitude::large: return "large";
    }
    return "?";
}

A12Result vargha_delaney_a(const SampleSet& a, const SampleSet& b) {
    if (a.values.empty() || b.values.empty())
        throw DegenerateSamplesError("vargha_delaney_a: empty sample");
    double greater = 0.0, equal = 0.0;
    for (double x : a.values) {
        for (double y : b.values) {
            if (x > y)
                greater += 1.0;
            else if (x == y)
                equal += 1.0;
        }
    }
    A12Result r;
    r.a12 = (greater + 0.5 * equal) /
            (static_cast<double>(a.values.size()) * static_cast<double>(b.values.size()));
    double d = std::abs(r.a12 - 0.5);
    if (d < 0.06)
        r.magnitude = Magnitude::negligible;
    else if (d < 0.14)
        r.magnitude = Magnitude::small;
    else if (d < 0.21)
        r.magnitude = Magnitude::medium;
    else
        r.magnitude = Magnitude::large;
    r.direction = r.a12 > 0.5 ? '>' : (r.a12 < 0.5 ? '<' : '=');
    return r;
}

double bonferroni_alpha(double base_alpha, int comparisons) {
    if (comparisons < 1) throw ConfigError("bonferroni_alpha: comparisons must be >= 1");
    return base_alpha / static_cast<double>(comparisons);
}

}  // namespace mrforge::analysis
