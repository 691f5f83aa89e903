#ifndef HEEGNER_GROSSGALOIS_HPP
#define HEEGNER_GROSSGALOIS_HPP

#include "heegner/quadratic.hpp"
#include "heegner/quaternion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heegner {

// Optimal embedding of O_n into the left order of an ideal class, stored as
// the image x of (t0 + n sqrt(D_L))/2, canonical modulo unit conjugation.
struct GrossPoint {
    int class_index = 0;
    Quat embedding;
    long long conductor = 1;

    bool operator==(const GrossPoint&) const = default;
};

// Twist: the class of a prime ideal above p in Pic(O_n) for every n at once
// (p = 1 is the identity twist).
using Twist = long long;

struct GaloisOrbitTable {
    long long n = 1;
    std::vector<Twist> twists;
    std::vector<BQForm> row_elements;       // Pic(O_n) in sorted-form order
    std::vector<std::vector<int>> rows;     // rows[nu][t] = reduction class index
};

struct ExperimentConfig {
    long long t1 = 1;
    long long t2 = 1;
    long long dimA = 1;
    long long r = 1;
};

struct EquidistRow {
    long long ell = 0;
    long long n = 0;
    Rat d;
    Rat c;
    bool in_regime = true;
    double coverage = -1; // -1 = not applicable
    double tv = -1;
};

struct EquidistReport {
    std::vector<EquidistRow> rows;
    std::vector<std::vector<int>> partition; // blocks of twist indices
    std::string to_json() const;
    std::string to_csv() const;
};

std::vector<GrossPoint> optimal_embeddings(const IdealClassSet& S, const QuadOrder& order);

GrossPoint base_gross_point(const IdealClassSet& S, const QuadOrder& order);

// action of the class of the prime form g (norm p) on a Gross point
GrossPoint class_action(const IdealClassSet& S, const GrossPoint& pt, const BQForm& g);

GaloisOrbitTable simultaneous_reduction(long long n, const std::vector<Twist>& T,
                                        const IdealClassSet& S, const ImagQuadField& field);

// c(pi, ell, T) = min_i (w_i^-1 / sum_j w_j^-1)^r
Rat c_constant(const std::vector<RightIdealClass>& classes, long long r);

// smallest inert ell with #classes > (t1 r!)^(2 dimA) t2
struct EllSelection {
    long long ell = 0;
    Int threshold;
    std::vector<std::pair<long long, long long>> counts; // (ell tried, #classes)
};
EllSelection select_ell(const ExperimentConfig& cfg, const ImagQuadField& field, long long N);

// empirical commensurability partition from the tables of a run
std::vector<std::vector<int>> partition_T(const std::vector<Twist>& T,
                                          const std::vector<GaloisOrbitTable>& tables,
                                          size_t min_tables = 3);

EquidistReport surjectivity_experiment(const IdealClassSet& S, const ImagQuadField& field,
                                       const std::vector<Twist>& T,
                                       const std::vector<long long>& n_list,
                                       unsigned workers = 1);

// TV distance between row x0 of B(n)/sigma_1(n) and the weight measure
EquidistReport hecke_equidist_stats(const IdealClassSet& S, int x0_class,
                                    const std::vector<long long>& n_list,
                                    unsigned workers = 1);

struct MultiEllRow {
    long long ell = 0;
    long long s = 0;
    Rat bound_ratio;            // t1 / s(ell)
    std::vector<long long> ns;
    std::vector<double> distinct_pair_fraction;
};

struct MultiEllReport {
    std::vector<MultiEllRow> rows;
    std::string to_json() const;
};

MultiEllReport multi_ell_scan(const std::vector<long long>& S_circ, const ImagQuadField& field,
                              long long N, const std::vector<Twist>& T,
                              const std::vector<long long>& n_list, const ExperimentConfig& cfg);

} // namespace heegner

#endif
