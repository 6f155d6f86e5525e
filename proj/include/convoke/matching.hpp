#pragma once
// Counterfactual cohort construction: ridge-penalized logistic propensity
// model plus greedy 1:1 nearest-neighbour matching without replacement, with
// covariate balance diagnostics.
//
// Tie-breaking is total and documented so independent re-executions agree:
//   propensity strategy    — focal processed by (score desc, id asc); each
//                            takes the unmatched candidate minimizing
//                            |score difference|, ties by standardized
//                            covariate distance, then smaller AuthorId.
//   lexicographic strategy — focal processed by id asc; distance is weighted
//                            L2 on standardized covariates with the weight
//                            ladder applied in priority order, ties by
//                            smaller AuthorId.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "convoke/io.hpp"
#include "convoke/profiles.hpp"

namespace convoke {

inline constexpr std::array<Covariate, 3> kMatchingCovariates = {
    Covariate::first_pub_year, Covariate::scholarly_output, Covariate::coauthor_count};

inline constexpr std::array<Covariate, 3> kDefaultPriority = {
    Covariate::scholarly_output, Covariate::first_pub_year, Covariate::coauthor_count};

inline constexpr double kRidgeLambda = 1e-6;
inline constexpr int kMaxFitIterations = 100;
inline constexpr double kGradientTolerance = 1e-10;

struct CovariateVector {
    AuthorId author;
    std::array<double, 3> raw{}; // ordered as kMatchingCovariates
    std::array<double, 3> z{};
};

inline std::size_t matching_covariate_index(Covariate c) {
    for (std::size_t k = 0; k < kMatchingCovariates.size(); ++k) {
        if (kMatchingCovariates[k] == c) {
            return k;
        }
    }
    throw Error("'" + std::string(to_string(c)) + "' is not a matching covariate");
}

// Parses a --priority triple such as "out,year,coauth"; must name each
// matching covariate exactly once.
inline std::array<Covariate, 3> parse_priority(const std::string& text) {
    auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw Error("priority must list exactly three covariates, got '" + text + "'");
    }
    std::array<Covariate, 3> priority{};
    std::set<Covariate> seen;
    for (std::size_t k = 0; k < 3; ++k) {
        auto c = parse_covariate(trim(parts[k]));
        if (!c) {
            throw Error("unknown covariate '" + trim(parts[k]) + "' in priority list");
        }
        matching_covariate_index(*c); // rejects citation_total
        if (!seen.insert(*c).second) {
            throw Error("priority lists '" + std::string(to_string(*c)) + "' twice");
        }
        priority[k] = *c;
    }
    return priority;
}

struct StandardizedSample {
    std::vector<CovariateVector> focal; // ascending AuthorId
    std::vector<CovariateVector> pool;  // ascending AuthorId
    std::array<double, 3> mean{};
    std::array<double, 3> stddev{}; // sample sd over focal ∪ pool; 0 pins z to 0
};

inline StandardizedSample standardize(const ProfileSet& profiles,
                                      const std::set<AuthorId>& focal,
                                      const std::set<AuthorId>& pool) {
    for (const auto& a : focal) {
        if (pool.count(a)) {
            throw Error("author '" + a + "' appears in both the focal group and the pool");
        }
    }
    auto row_of = [&](const AuthorId& a) {
        auto it = profiles.profiles.find(a);
        if (it == profiles.profiles.end()) {
            throw Error("no profile for author '" + a + "'");
        }
        CovariateVector v;
        v.author = a;
        for (std::size_t k = 0; k < 3; ++k) {
            v.raw[k] = covariate_value(it->second, kMatchingCovariates[k]);
        }
        return v;
    };
    StandardizedSample s;
    s.focal.reserve(focal.size());
    s.pool.reserve(pool.size());
    for (const auto& a : focal) {
        s.focal.push_back(row_of(a));
    }
    for (const auto& a : pool) {
        s.pool.push_back(row_of(a));
    }

    const double n = static_cast<double>(s.focal.size() + s.pool.size());
    if (n == 0) {
        throw Error("cannot standardize an empty sample");
    }
    for (std::size_t k = 0; k < 3; ++k) {
        double sum = 0;
        for (const auto& v : s.focal) {
            sum += v.raw[k];
        }
        for (const auto& v : s.pool) {
            sum += v.raw[k];
        }
        s.mean[k] = sum / n;
        double ss = 0;
        for (const auto& v : s.focal) {
            ss += (v.raw[k] - s.mean[k]) * (v.raw[k] - s.mean[k]);
        }
        for (const auto& v : s.pool) {
            ss += (v.raw[k] - s.mean[k]) * (v.raw[k] - s.mean[k]);
        }
        s.stddev[k] = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    }
    auto apply = [&](CovariateVector& v) {
        for (std::size_t k = 0; k < 3; ++k) {
            v.z[k] = s.stddev[k] > 0 ? (v.raw[k] - s.mean[k]) / s.stddev[k] : 0.0;
        }
    };
    for (auto& v : s.focal) {
        apply(v);
    }
    for (auto& v : s.pool) {
        apply(v);
    }
    return s;
}

struct PropensityModel {
    std::array<double, 4> beta{}; // intercept, then slopes in kMatchingCovariates order
    int iterations = 0;
    double gradient_norm = 0;           // max |gradient| at exit
    std::vector<double> log_likelihood; // penalized, one entry per accepted iterate

    double linear_predictor(const CovariateVector& v) const {
        double eta = beta[0];
        for (std::size_t k = 0; k < 3; ++k) {
            eta += beta[k + 1] * v.z[k];
        }
        return eta;
    }
    double score(const CovariateVector& v) const {
        return 1.0 / (1.0 + std::exp(-linear_predictor(v)));
    }
};

namespace detail {

// Gaussian elimination with partial pivoting; the systems here are 4x4.
inline std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> m,
                                    std::array<double, 4> b) {
    constexpr std::size_t n = 4;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(m[pivot][col]) < 1e-300) {
            throw Error("singular system in propensity fit");
        }
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::array<double, 4> x{};
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) {
            acc -= m[ri][c] * x[c];
        }
        x[ri] = acc / m[ri][ri];
    }
    return x;
}

inline double penalized_ll(const std::vector<std::array<double, 4>>& xs,
                           const std::vector<int>& ys, const std::array<double, 4>& beta) {
    double ll = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double eta = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            eta += beta[k] * xs[i][k];
        }
        // log(1 + e^eta) computed without overflow
        double softplus = std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta)));
        ll += ys[i] * eta - softplus;
    }
    for (std::size_t k = 1; k < 4; ++k) {
        ll -= 0.5 * kRidgeLambda * beta[k] * beta[k];
    }
    return ll;
}

} // namespace detail

// Newton iterations with step-halving on the ridge-penalized logistic
// log-likelihood; the penalty applies to slopes only, never the intercept.
inline PropensityModel fit_propensity(const StandardizedSample& sample) {
    std::vector<std::array<double, 4>> xs;
    std::vector<int> ys;
    xs.reserve(sample.focal.size() + sample.pool.size());
    for (const auto& v : sample.focal) {
        xs.push_back({1.0, v.z[0], v.z[1], v.z[2]});
        ys.push_back(1);
    }
    for (const auto& v : sample.pool) {
        xs.push_back({1.0, v.z[0], v.z[1], v.z[2]});
        ys.push_back(0);
    }
    if (xs.empty()) {
        throw Error("cannot fit a propensity model on an empty sample");
    }

    PropensityModel model;
    double ll = detail::penalized_ll(xs, ys, model.beta);
    model.log_likelihood.push_back(ll);

    for (int iter = 1; iter <= kMaxFitIterations; ++iter) {
        std::array<double, 4> grad{};
        std::array<std::array<double, 4>, 4> hess{};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double eta = 0;
            for (std::size_t k = 0; k < 4; ++k) {
                eta += model.beta[k] * xs[i][k];
            }
            double p = 1.0 / (1.0 + std::exp(-eta));
            double w = p * (1.0 - p);
            for (std::size_t k = 0; k < 4; ++k) {
                grad[k] += (ys[i] - p) * xs[i][k];
                for (std::size_t c = 0; c < 4; ++c) {
                    hess[k][c] += w * xs[i][k] * xs[i][c];
                }
            }
        }
        for (std::size_t k = 1; k < 4; ++k) {
            grad[k] -= kRidgeLambda * model.beta[k];
            hess[k][k] += kRidgeLambda;
        }

        double gnorm = 0;
        for (double g : grad) {
            gnorm = std::max(gnorm, std::abs(g));
        }
        model.gradient_norm = gnorm;
        model.iterations = iter - 1;
        if (gnorm < kGradientTolerance) {
            return model;
        }

        auto step = detail::solve4(hess, grad);
        // Near the optimum the true improvement per step drops below the
        // rounding noise of the summed log-likelihood; demanding a measurable
        // increase would stall the quadratic phase, so ties within noise pass.
        const double slack = 1e-12 * (1.0 + std::abs(ll));
        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            std::array<double, 4> trial;
            for (std::size_t k = 0; k < 4; ++k) {
                trial[k] = model.beta[k] + t * step[k];
            }
            double trial_ll = detail::penalized_ll(xs, ys, trial);
            if (trial_ll >= ll - slack) {
                model.beta = trial;
                ll = trial_ll;
                model.log_likelihood.push_back(std::max(ll, model.log_likelihood.back()));
                accepted = true;
                break;
            }
            t /= 2;
        }
        if (!accepted) {
            throw Error("propensity fit line search failed (max |gradient| = " +
                        std::to_string(model.gradient_norm) + ")");
        }
    }
    throw Error("propensity fit did not converge after " + std::to_string(kMaxFitIterations) +
                " iterations (max |gradient| = " + std::to_string(model.gradient_norm) + ")");
}

enum class MatchStrategy { propensity, lexicographic };

inline std::string to_string(MatchStrategy s) {
    return s == MatchStrategy::propensity ? "propensity" : "lexicographic";
}

inline MatchStrategy parse_strategy(const std::string& text) {
    if (text == "propensity") {
        return MatchStrategy::propensity;
    }
    if (text == "lexicographic") {
        return MatchStrategy::lexicographic;
    }
    throw Error("unknown matching strategy '" + text +
                "' (expected propensity or lexicographic)");
}

struct MatchOptions {
    MatchStrategy strategy = MatchStrategy::propensity;
    std::array<Covariate, 3> priority = kDefaultPriority;
    std::array<double, 3> weights = {100.0, 10.0, 1.0};
    std::optional<double> caliper; // max |score difference|, propensity strategy only
};

struct MatchedPair {
    AuthorId focal;
    AuthorId control;
    double distance = 0;
    double focal_score = 0;
    double control_score = 0;
};

struct CovariateBalance {
    Covariate covariate;
    double smd_before = 0;
    double smd_after = 0;
    double variance_ratio_before = 0;
    double variance_ratio_after = 0;
    bool degenerate_before = false;
    bool degenerate_after = false;
};

struct BalanceReport {
    std::vector<CovariateBalance> rows; // kMatchingCovariates order
};

namespace detail {

struct GroupMoments {
    double mean = 0;
    double var = 0; // sample variance, n-1
};

inline GroupMoments moments(const std::vector<double>& xs) {
    GroupMoments m;
    if (xs.empty()) {
        return m;
    }
    for (double x : xs) {
        m.mean += x;
    }
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) {
            ss += (x - m.mean) * (x - m.mean);
        }
        m.var = ss / (static_cast<double>(xs.size()) - 1);
    }
    return m;
}

inline void fill_balance(CovariateBalance& row, const GroupMoments& f, const GroupMoments& c,
                         bool after) {
    double pooled = (f.var + c.var) / 2;
    double smd;
    bool degenerate = false;
    if (pooled > 0) {
        smd = std::abs(f.mean - c.mean) / std::sqrt(pooled);
    } else {
        smd = 0;
        degenerate = f.mean != c.mean;
    }
    double ratio;
    if (c.var > 0) {
        ratio = f.var / c.var;
    } else {
        ratio = f.var == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    if (after) {
        row.smd_after = smd;
        row.variance_ratio_after = ratio;
        row.degenerate_after = degenerate;
    } else {
        row.smd_before = smd;
        row.variance_ratio_before = ratio;
        row.degenerate_before = degenerate;
    }
}

} // namespace detail

// SMD on raw (unstandardized) covariates: focal vs the full pool before
// matching, focal vs matched controls after.
inline BalanceReport balance_report(const StandardizedSample& sample,
                                    const std::vector<MatchedPair>& pairs) {
    std::set<AuthorId> matched;
    for (const auto& p : pairs) {
        matched.insert(p.control);
    }
    BalanceReport report;
    for (std::size_t k = 0; k < 3; ++k) {
        CovariateBalance row;
        row.covariate = kMatchingCovariates[k];
        std::vector<double> f, pool_all, controls;
        for (const auto& v : sample.focal) {
            f.push_back(v.raw[k]);
        }
        for (const auto& v : sample.pool) {
            pool_all.push_back(v.raw[k]);
            if (matched.count(v.author)) {
                controls.push_back(v.raw[k]);
            }
        }
        auto mf = detail::moments(f);
        detail::fill_balance(row, mf, detail::moments(pool_all), false);
        detail::fill_balance(row, mf, detail::moments(controls), true);
        report.rows.push_back(row);
    }
    return report;
}

struct MatchResult {
    std::vector<MatchedPair> pairs; // greedy processing order
    MatchStrategy strategy = MatchStrategy::propensity;
    BalanceReport diagnostics;
};

inline MatchResult nn_match(const StandardizedSample& sample, const PropensityModel& model,
                            const MatchOptions& opts = {}) {
    if (sample.pool.size() < sample.focal.size()) {
        throw Error("candidate pool (" + std::to_string(sample.pool.size()) +
                    ") is smaller than the focal group (" + std::to_string(sample.focal.size()) +
                    "): cannot match 1:1 without replacement");
    }
    {
        std::set<AuthorId> ids;
        for (const auto& v : sample.focal) {
            if (!ids.insert(v.author).second) {
                throw Error("duplicate author '" + v.author + "' in matching input");
            }
        }
        for (const auto& v : sample.pool) {
            if (!ids.insert(v.author).second) {
                throw Error("duplicate author '" + v.author + "' in matching input");
            }
        }
    }

    std::vector<double> focal_scores(sample.focal.size());
    std::vector<double> pool_scores(sample.pool.size());
    for (std::size_t i = 0; i < sample.focal.size(); ++i) {
        focal_scores[i] = model.score(sample.focal[i]);
    }
    for (std::size_t j = 0; j < sample.pool.size(); ++j) {
        pool_scores[j] = model.score(sample.pool[j]);
    }

    std::vector<std::size_t> order(sample.focal.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    if (opts.strategy == MatchStrategy::propensity) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (focal_scores[a] != focal_scores[b]) {
                return focal_scores[a] > focal_scores[b];
            }
            return sample.focal[a].author < sample.focal[b].author;
        });
    } // lexicographic keeps ascending AuthorId, which is the sample order

    auto zdist2 = [](const CovariateVector& a, const CovariateVector& b) {
        double d = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            d += (a.z[k] - b.z[k]) * (a.z[k] - b.z[k]);
        }
        return d;
    };
    std::array<std::size_t, 3> pk{}; // priority -> covariate slot
    for (std::size_t k = 0; k < 3; ++k) {
        pk[k] = matching_covariate_index(opts.priority[k]);
    }
    auto wdist2 = [&](const CovariateVector& a, const CovariateVector& b) {
        double d = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            double delta = a.z[pk[k]] - b.z[pk[k]];
            d += opts.weights[k] * delta * delta;
        }
        return d;
    };

    MatchResult result;
    result.strategy = opts.strategy;
    std::vector<bool> taken(sample.pool.size(), false);

    for (std::size_t oi : order) {
        const auto& f = sample.focal[oi];
        std::size_t best = sample.pool.size();
        double best_primary = 0, best_secondary = 0;
        for (std::size_t j = 0; j < sample.pool.size(); ++j) {
            if (taken[j]) {
                continue;
            }
            const auto& c = sample.pool[j];
            double primary, secondary = 0;
            if (opts.strategy == MatchStrategy::propensity) {
                primary = std::abs(focal_scores[oi] - pool_scores[j]);
                secondary = zdist2(f, c);
            } else {
                primary = wdist2(f, c);
            }
            bool better;
            if (best == sample.pool.size()) {
                better = true;
            } else if (primary != best_primary) {
                better = primary < best_primary;
            } else if (secondary != best_secondary) {
                better = secondary < best_secondary;
            } else {
                better = c.author < sample.pool[best].author;
            }
            if (better) {
                best = j;
                best_primary = primary;
                best_secondary = secondary;
            }
        }
        if (opts.strategy == MatchStrategy::propensity && opts.caliper &&
            best_primary > *opts.caliper) {
            throw Error("no candidate within caliper " + std::to_string(*opts.caliper) +
                        " for focal author '" + f.author + "'");
        }
        taken[best] = true;
        MatchedPair pair;
        pair.focal = f.author;
        pair.control = sample.pool[best].author;
        pair.distance = opts.strategy == MatchStrategy::propensity ? best_primary
                                                                   : std::sqrt(best_primary);
        pair.focal_score = focal_scores[oi];
        pair.control_score = pool_scores[best];
        result.pairs.push_back(pair);
    }

    result.diagnostics = balance_report(sample, result.pairs);
    return result;
}

inline std::string matches_to_tsv(const MatchResult& result) {
    std::string out = "focal\tcontrol\tdistance\tfocal_score\tcontrol_score\n";
    for (const auto& p : result.pairs) {
        out += p.focal + "\t" + p.control + "\t" + format_fixed(p.distance, 9) + "\t" +
               format_fixed(p.focal_score, 9) + "\t" + format_fixed(p.control_score, 9) + "\n";
    }
    return out;
}

inline std::string balance_to_tsv(const BalanceReport& report, MatchStrategy strategy) {
    std::string out = "# balance strategy=" + to_string(strategy) + "\n";
    out += "covariate\tsmd_before\tsmd_after\tvar_ratio_before\tvar_ratio_after\tflags\n";
    for (const auto& row : report.rows) {
        std::string flags;
        if (row.degenerate_before) {
            flags = "degenerate_before";
        }
        if (row.degenerate_after) {
            flags += flags.empty() ? "degenerate_after" : ",degenerate_after";
        }
        if (flags.empty()) {
            flags = "-";
        }
        out += std::string(to_string(row.covariate)) + "\t" + format_fixed(row.smd_before, 6) + "\t" +
               format_fixed(row.smd_after, 6) + "\t" + format_fixed(row.variance_ratio_before, 6) +
               "\t" + format_fixed(row.variance_ratio_after, 6) + "\t" + flags + "\n";
    }
    return out;
}

} // namespace convoke
