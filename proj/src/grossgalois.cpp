#include "heegner/grossgalois.hpp"
#include "heegner/parallel.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace heegner {

static bool quat_vec_less(const Quat& a, const Quat& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

static std::vector<Quat> unit_group(const QuaternionAlgebra& B, const QLattice& order) {
    Mat4Q A = nrd_gram(B, order, Rat(1));
    std::vector<Quat> units;
    enumerate_quadratic(A, Rat(1), Vec4Q{}, [&](const Rat& v, const std::array<long long, 4>& c) {
        if (v != 1) return true;
        Quat u{Rat(0), Rat(0), Rat(0), Rat(0)};
        for (int i = 0; i < 4; i++)
            u = quat_add(u, quat_scale(quat_from_vec(order.rows[i]), Rat(c[i])));
        units.push_back(u);
        return true;
    });
    return units;
}

static Quat canonical_mod_units(const QuaternionAlgebra& B, const std::vector<Quat>& units,
                                const Quat& x) {
    Quat best = x;
    bool first = true;
    for (auto& u : units) {
        Quat y = quat_mul(B, quat_mul(B, u, x), quat_inverse(B, u));
        if (first || quat_vec_less(y, best)) { best = y; first = false; }
    }
    return best;
}

static bool embedding_optimal(const QuaternionAlgebra& B, const QLattice& order, const Quat& x,
                              long long n, long long D_L, long long t0) {
    Quat y = quat_sub(quat_scale(x, 2), Quat{Rat(t0), Rat(0), Rat(0), Rat(0)});
    for (auto& pp : factorize(n).factors) {
        long long p = pp.p;
        long long m = n / p;
        long long t1 = (((m * m % 2) * (D_L % 2)) % 2 + 2) % 2;
        // candidate generator of O_{n/p}: (t1 + y/p) / 2
        Quat cand = quat_scale(quat_add(Quat{Rat(t1), Rat(0), Rat(0), Rat(0)},
                                        quat_scale(y, Rat(1, p))),
                               Rat(1, 2));
        if (lattice_contains(order, quat_to_vec(cand))) return false;
    }
    return true;
}

std::vector<GrossPoint> optimal_embeddings(const IdealClassSet& S, const QuadOrder& order) {
    const auto& B = S.order.B;
    long long n = order.conductor;
    long long D_L = order.field.D;
    if (kronecker(D_L, B.ell) != -1)
        throw std::invalid_argument("optimal_embeddings: ell must be inert in L");
    if (gcd_ll(n, B.ell * S.order.level) != 1)
        throw std::invalid_argument("optimal_embeddings: n must be coprime to ell*N");
    long long disc = n * n * D_L;
    long long t0 = ((disc % 2) + 2) % 2;
    Rat m0 = Rat(t0 * t0 - disc, 4);
    std::vector<GrossPoint> out;
    for (auto& cls : S.classes) {
        auto units = unit_group(B, cls.left_order);
        auto elems = order_elements_with_charpoly(B, cls.left_order, t0, m0, SIZE_MAX);
        std::vector<Quat> reps;
        for (auto& x : elems) {
            if (!embedding_optimal(B, cls.left_order, x, n, D_L, t0)) continue;
            Quat canon = canonical_mod_units(B, units, x);
            bool seen = false;
            for (auto& r : reps)
                if (r == canon) { seen = true; break; }
            if (!seen) reps.push_back(canon);
        }
        std::sort(reps.begin(), reps.end(), quat_vec_less);
        for (auto& r : reps) out.push_back(GrossPoint{cls.index, r, n});
    }
    return out;
}

GrossPoint base_gross_point(const IdealClassSet& S, const QuadOrder& order) {
    auto all = optimal_embeddings(S, order);
    if (all.empty()) throw std::logic_error("base_gross_point: no optimal embeddings");
    // ordered by (class_index, embedding) already
    return all.front();
}

GrossPoint class_action(const IdealClassSet& S, const GrossPoint& pt, const BQForm& g) {
    const auto& B = S.order.B;
    long long p = g.a;
    if (!is_prime(p))
        throw std::invalid_argument("class_action: form must have prime leading coefficient");
    const auto& cls = S.classes[pt.class_index];
    long long disc = g.disc(); // the form lives in Pic(O_n), disc = n^2 D_L
    long long t0 = ((disc % 2) + 2) % 2;
    Quat y = quat_sub(quat_scale(pt.embedding, 2), Quat{Rat(t0), Rat(0), Rat(0), Rat(0)});
    // phi(pi), pi = (-b + n sqrt(D_L)) / 2 for the prime ideal (p, pi)
    Quat phi_pi = quat_scale(quat_add(Quat{Rat(-g.b), Rat(0), Rat(0), Rat(0)}, y), Rat(1, 2));
    std::vector<Vec4Q> gens;
    for (auto& row : cls.left_order.rows) {
        gens.push_back(quat_to_vec(quat_scale(quat_from_vec(row), Rat(p))));
        gens.push_back(quat_to_vec(quat_mul(B, quat_from_vec(row), phi_pi)));
    }
    QLattice P = lattice_from_generators(gens);
    QLattice Inew = lattice_mul(B, lattice_conj(P), cls.lattice);
    for (auto& target : S.classes) {
        auto alpha = ideal_isometry(S.order, Inew, target.lattice);
        if (!alpha) continue;
        Quat ainv = quat_inverse(B, *alpha);
        Quat ynew = quat_mul(B, quat_mul(B, ainv, y), *alpha);
        Quat xnew = quat_scale(quat_add(Quat{Rat(t0), Rat(0), Rat(0), Rat(0)}, ynew), Rat(1, 2));
        if (!lattice_contains(target.left_order, quat_to_vec(xnew)))
            throw std::logic_error("class_action: transported embedding left the order");
        auto units = unit_group(B, target.left_order);
        return GrossPoint{target.index, canonical_mod_units(B, units, xnew), pt.conductor};
    }
    throw std::logic_error("class_action: image ideal matched no class");
}

// prime-form generators that generate Pic(O_n), smallest primes first
static std::vector<std::pair<BQForm, int>> generating_prime_forms(const ClassGroup& G,
                                                                  long long forbidden) {
    std::vector<std::pair<BQForm, int>> gens;
    std::set<int> span = {G.identity};
    for (long long p = 2; p < 20000; p++) {
        if (!is_prime(p)) continue;
        if (forbidden % p == 0) continue;
        if (kronecker(G.order.disc(), p) != 1) continue; // split primes only
        BQForm f = prime_form_above(G.order, p);
        int idx = G.index_of(f);
        if (idx < 0) throw std::logic_error("generating_prime_forms: form not reduced-canonical");
        gens.push_back({f, idx});
        // close the span
        std::vector<int> frontier(span.begin(), span.end());
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int s : frontier)
                for (auto& [gf, gi] : gens) {
                    int t = G.mul(s, gi);
                    if (span.insert(t).second) next.push_back(t);
                }
            frontier = next;
        }
        if ((long long)span.size() == G.h()) return gens;
    }
    throw std::logic_error("generating_prime_forms: generator search bound exceeded");
}

GaloisOrbitTable simultaneous_reduction(long long n, const std::vector<Twist>& T,
                                        const IdealClassSet& S, const ImagQuadField& field) {
    long long ell = S.order.B.ell, N = S.order.level;
    if (gcd_ll(n, ell * N * field.D) != 1)
        throw std::invalid_argument("simultaneous_reduction: n not coprime to ell*N*D_L");
    QuadOrder On(field, n);
    ClassGroup G = class_group(On);
    GrossPoint base = base_gross_point(S, On);
    long long forbidden = ell * N * n;
    auto gens = generating_prime_forms(G, forbidden);
    // Cayley BFS carrying Gross points along tree edges
    std::vector<std::optional<GrossPoint>> points(G.h());
    points[G.identity] = base;
    std::vector<int> frontier = {G.identity};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int s : frontier)
            for (auto& [gf, gi] : gens) {
                int t = G.mul(s, gi);
                if (points[t]) continue;
                points[t] = class_action(S, *points[s], gf);
                next.push_back(t);
            }
        frontier = next;
    }
    GaloisOrbitTable tab;
    tab.n = n;
    tab.twists = T;
    tab.row_elements = G.elements;
    tab.rows.assign(G.h(), std::vector<int>(T.size(), -1));
    for (long long t = 0; t < (long long)T.size(); t++) {
        std::optional<BQForm> tf;
        if (T[t] != 1) {
            if (gcd_ll(T[t], forbidden) != 1 || kronecker(On.disc(), T[t]) != 1)
                throw std::invalid_argument("simultaneous_reduction: invalid twist prime");
            tf = prime_form_above(On, T[t]);
        }
        for (long long r = 0; r < G.h(); r++) {
            const GrossPoint& pt = *points[r];
            tab.rows[r][t] = tf ? class_action(S, pt, *tf).class_index : pt.class_index;
        }
    }
    return tab;
}

Rat c_constant(const std::vector<RightIdealClass>& classes, long long r) {
    if (classes.empty() || r < 1) throw std::invalid_argument("c_constant: bad input");
    Rat total(0);
    for (auto& c : classes) total += Rat(1, c.w);
    Rat best;
    bool first = true;
    for (auto& c : classes) {
        Rat v = Rat(1, c.w) / total;
        if (first || v < best) { best = v; first = false; }
    }
    Rat out(1);
    for (long long k = 0; k < r; k++) out *= best;
    out.canonicalize();
    return out;
}

EllSelection select_ell(const ExperimentConfig& cfg, const ImagQuadField& field, long long N) {
    if (cfg.t1 < 1 || cfg.t2 < 1 || cfg.dimA < 1 || cfg.r < 1)
        throw std::invalid_argument("select_ell: config entries must be positive");
    Int rfact = 1;
    for (long long k = 2; k <= cfg.r; k++) rfact *= k;
    Int base = Int(cfg.t1) * rfact;
    Int threshold(1);
    for (long long k = 0; k < 2 * cfg.dimA; k++) threshold *= base;
    threshold *= cfg.t2;
    EllSelection sel;
    sel.threshold = threshold;
    for (long long ell = 2; ell <= 10000; ell++) {
        if (!is_prime(ell)) continue;
        if (gcd_ll(ell, N * field.D) != 1) continue;
        if (kronecker(field.D, ell) != -1) continue;
        QuatOrder O = maximal_order(definite_algebra(ell));
        if (N > 1) O = eichler_order(O, N, field);
        IdealClassSet S = ideal_classes(O);
        sel.counts.push_back({ell, (long long)S.classes.size()});
        if (Int((long long)S.classes.size()) > threshold) {
            sel.ell = ell;
            return sel;
        }
    }
    throw std::runtime_error("select_ell: search bound ell <= 1e4 exceeded");
}

std::vector<std::vector<int>> partition_T(const std::vector<Twist>& T,
                                          const std::vector<GaloisOrbitTable>& tables,
                                          size_t min_tables) {
    if (tables.size() < min_tables)
        throw std::invalid_argument("partition_T: insufficient data (need more n values)");
    size_t r = T.size();
    // grouped(i, j): in every table the (i, j) projection is a partial bijection
    std::vector<std::vector<bool>> grouped(r, std::vector<bool>(r, true));
    for (auto& tab : tables) {
        for (size_t i = 0; i < r; i++)
            for (size_t j = i + 1; j < r; j++) {
                std::map<int, std::set<int>> fwd, bwd;
                for (auto& row : tab.rows) {
                    fwd[row[i]].insert(row[j]);
                    bwd[row[j]].insert(row[i]);
                }
                bool bij = true;
                for (auto& [k, v] : fwd)
                    if (v.size() > 1) { bij = false; break; }
                for (auto& [k, v] : bwd)
                    if (v.size() > 1) { bij = false; break; }
                grouped[i][j] = grouped[j][i] = grouped[i][j] && bij;
            }
    }
    // connected components
    std::vector<int> comp(r, -1);
    std::vector<std::vector<int>> blocks;
    for (size_t i = 0; i < r; i++) {
        if (comp[i] >= 0) continue;
        std::vector<int> block = {(int)i};
        comp[i] = (int)blocks.size();
        std::vector<size_t> stack = {i};
        while (!stack.empty()) {
            size_t s = stack.back();
            stack.pop_back();
            for (size_t j = 0; j < r; j++)
                if (comp[j] < 0 && grouped[s][j]) {
                    comp[j] = comp[i];
                    block.push_back((int)j);
                    stack.push_back(j);
                }
        }
        std::sort(block.begin(), block.end());
        blocks.push_back(block);
    }
    return blocks;
}

static double coverage_fraction(const GaloisOrbitTable& tab,
                                const std::vector<std::vector<int>>& partition, long long s) {
    // distinct block-projected tuples over the predicted product target
    std::set<std::vector<int>> image;
    for (auto& row : tab.rows) {
        std::vector<int> proj;
        for (auto& block : partition) proj.push_back(row[block[0]]);
        image.insert(proj);
    }
    double target = 1;
    for (size_t k = 0; k < partition.size(); k++) target *= (double)s;
    return (double)image.size() / target;
}

EquidistReport surjectivity_experiment(const IdealClassSet& S, const ImagQuadField& field,
                                       const std::vector<Twist>& T,
                                       const std::vector<long long>& n_list,
                                       unsigned workers) {
    std::vector<long long> ns = n_list;
    std::sort(ns.begin(), ns.end());
    std::vector<GaloisOrbitTable> tables(ns.size());
    parallel_for(ns.size(), workers, [&](size_t i) {
        tables[i] = simultaneous_reduction(ns[i], T, S, field);
    });
    std::vector<std::vector<int>> partition;
    if (T.size() == 1) partition = {{0}};
    else if (tables.size() >= 3) partition = partition_T(T, tables);
    else
        for (size_t i = 0; i < T.size(); i++) partition.push_back({(int)i});
    Rat c = c_constant(S.classes, (long long)T.size());
    EquidistReport rep;
    rep.partition = partition;
    for (size_t i = 0; i < ns.size(); i++) {
        EquidistRow row;
        row.ell = S.order.B.ell;
        row.n = ns[i];
        row.d = d_of_n(ns[i], field);
        row.c = c;
        row.in_regime = Rat(1) - row.d < c;
        row.coverage = coverage_fraction(tables[i], partition, (long long)S.classes.size());
        rep.rows.push_back(row);
    }
    return rep;
}

EquidistReport hecke_equidist_stats(const IdealClassSet& S, int x0_class,
                                    const std::vector<long long>& n_list,
                                    unsigned workers) {
    if (x0_class < 0 || x0_class >= (int)S.classes.size())
        throw std::invalid_argument("hecke_equidist_stats: bad class index");
    std::vector<long long> ns = n_list;
    std::sort(ns.begin(), ns.end());
    Rat total(0);
    for (auto& c : S.classes) total += Rat(1, c.w);
    std::vector<Rat> weight;
    for (auto& c : S.classes) weight.push_back(Rat(1, c.w) / total);
    EquidistReport rep;
    rep.rows.resize(ns.size());
    parallel_for(ns.size(), workers, [&](size_t i) {
        BrandtMatrix Bm = brandt_matrix(S, ns[i]);
        long long deg = sigma1(ns[i]);
        Rat tv(0);
        for (size_t j = 0; j < S.classes.size(); j++) {
            Rat diff = Rat(Bm.entries[x0_class][j], deg) - weight[j];
            if (diff < 0) diff = -diff;
            tv += diff;
        }
        tv /= 2;
        EquidistRow row;
        row.ell = S.order.B.ell;
        row.n = ns[i];
        row.tv = tv.get_d();
        rep.rows[i] = row;
    });
    return rep;
}

MultiEllReport multi_ell_scan(const std::vector<long long>& S_circ, const ImagQuadField& field,
                              long long N, const std::vector<Twist>& T,
                              const std::vector<long long>& n_list, const ExperimentConfig& cfg) {
    MultiEllReport rep;
    std::vector<long long> ells = S_circ;
    std::sort(ells.begin(), ells.end());
    for (long long ell : ells) {
        if (kronecker(field.D, ell) != -1)
            throw std::invalid_argument("multi_ell_scan: every ell in S° must be inert in L");
        QuatOrder O = maximal_order(definite_algebra(ell));
        if (N > 1) O = eichler_order(O, N, field);
        IdealClassSet S = ideal_classes(O);
        MultiEllRow row;
        row.ell = ell;
        row.s = (long long)S.classes.size();
        row.bound_ratio = Rat(cfg.t1, row.s);
        for (long long n : n_list) {
            if (gcd_ll(n, ell * N * field.D) != 1)
                throw std::invalid_argument("multi_ell_scan: n not coprime to S° * N * D_L");
            GaloisOrbitTable tab = simultaneous_reduction(n, T, S, field);
            long long h = (long long)tab.rows.size();
            long long distinct = 0, total = 0;
            for (long long a = 0; a < h; a++)
                for (long long b = a + 1; b < h; b++) {
                    total++;
                    if (tab.rows[a] != tab.rows[b]) distinct++;
                }
            row.ns.push_back(n);
            row.distinct_pair_fraction.push_back(total ? (double)distinct / (double)total : 1.0);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

// ---- serialization -------------------------------------------------------

static void json_rat_pair(std::ostringstream& os, const Rat& r) {
    os << "[" << r.get_num().get_str() << ", " << r.get_den().get_str() << "]";
}

std::string EquidistReport::to_json() const {
    std::ostringstream os;
    os << "{\"partition\": [";
    for (size_t b = 0; b < partition.size(); b++) {
        os << (b ? ", [" : "[");
        for (size_t i = 0; i < partition[b].size(); i++)
            os << (i ? ", " : "") << partition[b][i];
        os << "]";
    }
    os << "], \"rows\": [";
    for (size_t i = 0; i < rows.size(); i++) {
        auto& r = rows[i];
        os << (i ? ", " : "") << "{\"c\": ";
        json_rat_pair(os, r.c);
        os << ", \"coverage\": " << r.coverage << ", \"d\": ";
        json_rat_pair(os, r.d);
        os << ", \"ell\": " << r.ell
           << ", \"in_regime\": " << (r.in_regime ? "true" : "false")
           << ", \"n\": " << r.n
           << ", \"tv\": " << r.tv << "}";
    }
    os << "]}";
    return os.str();
}

std::string EquidistReport::to_csv() const {
    std::ostringstream os;
    os << "ell,n,d_num,d_den,c_num,c_den,in_regime,coverage,tv\n";
    for (auto& r : rows) {
        os << r.ell << "," << r.n << "," << r.d.get_num().get_str() << ","
           << r.d.get_den().get_str() << "," << r.c.get_num().get_str() << ","
           << r.c.get_den().get_str() << "," << (r.in_regime ? 1 : 0) << ","
           << r.coverage << "," << r.tv << "\n";
    }
    return os.str();
}

std::string MultiEllReport::to_json() const {
    std::ostringstream os;
    os << "{\"rows\": [";
    for (size_t i = 0; i < rows.size(); i++) {
        auto& r = rows[i];
        os << (i ? ", " : "") << "{\"bound_ratio\": ";
        json_rat_pair(os, r.bound_ratio);
        os << ", \"ell\": " << r.ell << ", \"fractions\": [";
        for (size_t k = 0; k < r.distinct_pair_fraction.size(); k++)
            os << (k ? ", " : "") << r.distinct_pair_fraction[k];
        os << "], \"ns\": [";
        for (size_t k = 0; k < r.ns.size(); k++)
            os << (k ? ", " : "") << r.ns[k];
        os << "], \"s\": " << r.s << "}";
    }
    os << "]}";
    return os.str();
}

} // namespace heegner
