#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modring.hpp"
#include "rational.hpp"

namespace orthosel {

// Outcome key: a module isomorphism class, optionally tagged with a model
// rank component (rank = -1 means "no rank in this key space").
struct Outcome {
    int rank = -1;
    ModuleClass cls;

    bool operator==(const Outcome&) const = default;
    bool operator<(const Outcome& o) const {
        if (rank != o.rank) return rank < o.rank;
        return cls < o.cls;
    }
    std::string str() const;
};

// Exact distributions carry rational weights summing to 1; empirical ones
// carry raw counts (never pre-normalized) plus the seed that produced them.
struct Distribution {
    bool exact = true;
    std::map<Outcome, Rational> probs;
    std::map<Outcome, uint64_t> counts;
    uint64_t total = 0;
    uint64_t seed = 0;
    std::string note;

    static Distribution exact_dist() { return Distribution{}; }
    static Distribution empirical(uint64_t seed_) {
        Distribution d;
        d.exact = false;
        d.seed = seed_;
        return d;
    }

    void add_prob(const Outcome& k, const Rational& p);
    void add_count(const Outcome& k, uint64_t n = 1);
    Rational prob(const Outcome& k) const;
    Rational total_mass() const;
    std::vector<Outcome> support() const;
    void merge(const Distribution& other);  // empirical accumulators only
};

// half the L1 distance; exact rationals throughout (empirical weights are
// counts/total).  Throws on mismatched key spaces (rank tag present on one
// side only).
Rational tv_distance(const Distribution& a, const Distribution& b);

// E[|G|^j] over the outcome classes, and its j = 1 shorthand
Rational moment(const Distribution& p, unsigned j);
Rational mean_size(const Distribution& p);

struct CompareReport {
    Rational tv;
    Rational threshold;
    bool pass = false;
    // per-outcome probabilities (a, b) for the union support
    std::vector<std::pair<Outcome, std::pair<Rational, Rational>>> rows;
    std::vector<std::pair<unsigned, std::pair<Rational, Rational>>> moments;  // j = 1, 2
};
CompareReport compare_models(const Distribution& a, const Distribution& b,
                             const Rational& tv_threshold);

// serialization: [[key, num, den], ...] triples with arbitrary-precision
// numerators/denominators rendered as decimal strings
std::string distribution_json(const Distribution& d);
std::string distribution_csv(const Distribution& d);

}  // namespace orthosel
