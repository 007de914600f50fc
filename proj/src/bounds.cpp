#include "exbounds/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

namespace exbounds {

namespace {

double log2_floored(double x) { return std::log2(std::max(x, tol::eps_log)); }

double overlap_max(const EnsembleContext& ctx, int m, int l) {
    return ctx.overlaps[m][l].maxCoeff();
}

void require_pair(const EnsembleContext& ctx, const char* what) {
    if (ctx.n() != 2)
        throw DimensionError(std::string(what) + " is defined for exactly two bases");
}

void require_perm_scale(const EnsembleContext& ctx) {
    if (ctx.n() > 6)
        throw DimensionError("permutation scans are guarded to at most six bases");
}

double min_over_permutations(const EnsembleContext& ctx,
                             double (*reduce)(const RVector&)) {
    require_perm_scale(ctx);
    std::vector<int> perm(ctx.n());
    for (int i = 0; i < ctx.n(); ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        best = std::min(best, reduce(chain_vector(ctx.ensemble, perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double chain_max(const RVector& v) { return v.maxCoeff(); }
double chain_sum(const RVector& v) { return v.sum(); }

void require_bipartite(const DensityMatrix& rho, int d) {
    if (rho.dims.size() != 2)
        throw DimensionError("expected a bipartite state with dims {d_A, d_B}");
    if (rho.dims[0] != d)
        throw DimensionError("state's measured factor has dimension " +
                             std::to_string(rho.dims[0]) + ", ensemble needs " +
                             std::to_string(d));
}

}  // namespace

EnsembleContext prepare_ensemble(const Ensemble& e, const OracleOptions& opt) {
    EnsembleContext ctx;
    ctx.ensemble = e;
    const int n = e.n();
    ctx.overlaps.assign(n, std::vector<RMatrix>(n));
    for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
            if (m != l) ctx.overlaps[m][l] = overlap_matrix(e.bases[m], e.bases[l]);
    ctx.omega = compute_omega(e, opt);
    ctx.a_vectors = build_a_vectors(e);
    ctx.wb_ascending = omega_dot_b(ctx.omega, ctx.a_vectors, BOrdering::ascending);
    ctx.wb_descending = omega_dot_b(ctx.omega, ctx.a_vectors, BOrdering::descending);
    ctx.heuristic_omega = ctx.omega.method == OmegaMethod::stochastic_oracle;
    return ctx;
}

double omega_b(const EnsembleContext& ctx, BOrdering ordering) {
    return ordering == BOrdering::ascending ? ctx.wb_ascending : ctx.wb_descending;
}

double conditional_outcome_entropy(const DensityMatrix& rho_ab, const Basis& m) {
    require_bipartite(rho_ab, m.dim());
    const DensityMatrix rho_mb = dephase_in_basis(rho_ab, m);
    const DensityMatrix rho_b = partial_trace(rho_ab, 1);
    return von_neumann_entropy(rho_mb.mat) - von_neumann_entropy(rho_b.mat);
}

double mutual_information(const DensityMatrix& rho_ab, const Basis& m) {
    require_bipartite(rho_ab, m.dim());
    const DensityMatrix rho_a = partial_trace(rho_ab, 0);
    const double h_m = shannon_entropy(outcome_distribution(m, rho_a));
    return h_m - conditional_outcome_entropy(rho_ab, m);
}

MemoryTerms memory_terms(const DensityMatrix& rho_ab, int n_measurements) {
    if (rho_ab.dims.size() != 2)
        throw DimensionError("memory terms need a bipartite state");
    MemoryTerms t;
    t.h_a = von_neumann_entropy(partial_trace(rho_ab, 0).mat);
    t.h_b = von_neumann_entropy(partial_trace(rho_ab, 1).mat);
    t.h_a_given_b = von_neumann_entropy(rho_ab.mat) - t.h_b;
    t.memory_info = n_measurements * t.h_b - (n_measurements - 1) * t.h_a;
    return t;
}

// --- state-independent parts -------------------------------------------------

double bound_mu(const EnsembleContext& ctx) {
    require_pair(ctx, "the max-overlap bound");
    return -std::log2(overlap_max(ctx, 0, 1));
}

double bound_hall(const EnsembleContext& ctx) {
    require_pair(ctx, "the d^2 c_max bound");
    return std::log2(static_cast<double>(ctx.d()) * ctx.d() * overlap_max(ctx, 0, 1));
}

double bound_grudka(const EnsembleContext& ctx) {
    require_pair(ctx, "the d-largest-overlaps bound");
    const RMatrix& c = ctx.overlaps[0][1];
    std::vector<double> entries(c.data(), c.data() + c.size());
    for (double& x : entries) x = round_for_ties(x);
    std::sort(entries.begin(), entries.end(), std::greater<double>());
    double sum = 0.0;
    for (int i = 0; i < ctx.d(); ++i) sum += entries[i];
    return std::log2(ctx.d() * sum);
}

double bound_coles_piani(const EnsembleContext& ctx) {
    require_pair(ctx, "the directed row-maxima bound");
    const RMatrix& c = ctx.overlaps[0][1];
    const double fwd = c.rowwise().maxCoeff().sum();  // max over the second index
    const double bwd = c.colwise().maxCoeff().sum();  // max over the first index
    return std::log2(ctx.d() * std::min(fwd, bwd));
}

double bound_theorem1_si(const EnsembleContext& ctx, BOrdering o) {
    require_pair(ctx, "the pair exclusion bound");
    return std::log2(static_cast<double>(ctx.d()) * ctx.d()) + 0.5 * omega_b(ctx, o);
}

double bound_rx_si(const EnsembleContext& ctx, BOrdering o) {
    return ctx.n() * std::log2(static_cast<double>(ctx.d())) + omega_b(ctx, o) / ctx.n();
}

double eur_hybrid_si(const EnsembleContext& ctx, BOrdering o) {
    require_pair(ctx, "the pair uncertainty bound");
    return -0.5 * omega_b(ctx, o);
}

double eur_multi_si(const EnsembleContext& ctx, BOrdering o) {
    return -omega_b(ctx, o) / ctx.n();
}

double bound_zhang_u1_si(const EnsembleContext& ctx) {
    return ctx.n() * std::log2(static_cast<double>(ctx.d())) +
           std::log2(min_over_permutations(ctx, chain_max));
}

double bound_zhang_u2_si(const EnsembleContext& ctx) {
    return (ctx.n() - 1) * std::log2(static_cast<double>(ctx.d())) +
           std::log2(min_over_permutations(ctx, chain_sum));
}

double bound_zhang_u3_si(const EnsembleContext& ctx) {
    const int n = ctx.n();
    double acc = 0.0;
    for (int m = 0; m < n; ++m) acc += std::log2(overlap_max(ctx, m, (m + 1) % n));
    return n * std::log2(static_cast<double>(ctx.d())) + acc / n;
}

RoptResult bound_ropt_si(const EnsembleContext& ctx) {
    require_perm_scale(ctx);
    const int n = ctx.n();
    const double base = n * std::log2(static_cast<double>(ctx.d()));

    double cyclic = 0.0;
    for (int m = 0; m < n; ++m) cyclic += std::log2(overlap_max(ctx, m, (m + 1) % n));
    cyclic /= n;

    double all_pairs = 0.0;
    int pair_count = 0;
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
            all_pairs += std::log2(overlap_max(ctx, k, l));
            ++pair_count;
        }
    all_pairs /= pair_count;

    const double full_cycle = std::log2(min_over_permutations(ctx, chain_max));

    RoptResult r{base + cyclic, "cyclic-pairs"};
    if (base + all_pairs < r.value) r = RoptResult{base + all_pairs, "all-pairs"};
    if (base + full_cycle < r.value) r = RoptResult{base + full_cycle, "full-cycle"};
    return r;
}

double bound_lemma2_si(const EnsembleContext& ctx) {
    if (ctx.n() != 3)
        throw DimensionError("the cyclic-shift cube-root bound needs exactly three bases");
    double acc = 0.0;
    for (int t = 0; t < 3; ++t) {
        const std::vector<int> shift = {t, (t + 1) % 3, (t + 2) % 3};
        const RVector v = chain_vector(ctx.ensemble, shift);
        double s = 0.0;
        for (int i = 0; i < v.size(); ++i) s += std::cbrt(v[i]);
        acc += std::log2(s);
    }
    return acc;
}

double bound_ry_si(const EnsembleContext& ctx) {
    require_perm_scale(ctx);
    const int n = ctx.n();
    const double logd = std::log2(static_cast<double>(ctx.d()));

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::set<std::vector<std::vector<int>>> seen;
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<std::vector<int>> shifts;
        shifts.reserve(n);
        for (int t = 0; t < n; ++t) {
            std::vector<int> s(n);
            for (int i = 0; i < n; ++i) s[i] = perm[(i + t) % n];
            shifts.push_back(std::move(s));
        }
        std::vector<std::vector<int>> key = shifts;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) continue;

        std::vector<RVector> chains;
        chains.reserve(n);
        for (const auto& s : shifts) chains.push_back(chain_vector(ctx.ensemble, s));

        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            const int r = std::popcount(mask);
            double val = (n - r) * logd;
            for (int s = 0; s < n; ++s) {
                if (!(mask & (1u << s))) continue;
                double acc = 0.0;
                for (int i = 0; i < chains[s].size(); ++i)
                    acc += std::pow(chains[s][i], 1.0 / r);
                val += std::log2(acc);
            }
            best = std::min(best, val);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double classical_pair_lower(const DensityMatrix& rho_a, const EnsembleContext& ctx) {
    require_pair(ctx, "the classical pair bound");
    if (rho_a.dims.size() != 1 || rho_a.dims[0] != ctx.d())
        throw DimensionError("the classical pair bound acts on the A marginal");
    const RVector p1 = outcome_distribution(ctx.ensemble.bases[0], rho_a);
    const RVector p2 = outcome_distribution(ctx.ensemble.bases[1], rho_a);
    const RMatrix& c = ctx.overlaps[0][1];
    const RVector q2 = c.transpose() * p1;  // mixed first-basis prediction of outcome i2
    const RVector q1 = c * p2;
    double cross = 0.0;
    for (int i = 0; i < ctx.d(); ++i) cross += p2[i] * log2_floored(q2[i]);
    for (int i = 0; i < ctx.d(); ++i) cross += p1[i] * log2_floored(q1[i]);
    return von_neumann_entropy(rho_a.mat) - 0.5 * cross;
}

// --- completed bounds ----------------------------------------------------------

double bound_theorem1(const DensityMatrix& rho_ab, const EnsembleContext& ctx, BOrdering o) {
    const MemoryTerms t = memory_terms(rho_ab, ctx.n());
    return bound_theorem1_si(ctx, o) + 2.0 * t.h_b - t.h_a;
}

double bound_rx(const DensityMatrix& rho_ab, const EnsembleContext& ctx, BOrdering o) {
    const MemoryTerms t = memory_terms(rho_ab, ctx.n());
    return bound_rx_si(ctx, o) + t.memory_info;
}

double eur_hybrid_pair(const DensityMatrix& rho_ab, const EnsembleContext& ctx, BOrdering o) {
    const MemoryTerms t = memory_terms(rho_ab, ctx.n());
    return eur_hybrid_si(ctx, o) + t.h_a - 2.0 * t.h_b;
}

double eur_multi_lower(const DensityMatrix& rho_ab, const EnsembleContext& ctx, BOrdering o) {
    const MemoryTerms t = memory_terms(rho_ab, ctx.n());
    return eur_multi_si(ctx, o) + (ctx.n() - 1) * t.h_a - ctx.n() * t.h_b;
}

double bound_zhang_u1(const DensityMatrix& rho_ab, const EnsembleContext& ctx) {
    return bound_zhang_u1_si(ctx) + memory_terms(rho_ab, ctx.n()).memory_info;
}

double bound_zhang_u2(const DensityMatrix& rho_ab, const EnsembleContext& ctx) {
    return bound_zhang_u2_si(ctx) + memory_terms(rho_ab, ctx.n()).memory_info;
}

double bound_zhang_u3(const DensityMatrix& rho_ab, const EnsembleContext& ctx) {
    const MemoryTerms t = memory_terms(rho_ab, ctx.n());
    return bound_zhang_u3_si(ctx) + 0.5 * ctx.n() * (2.0 * t.h_b - t.h_a);
}

RoptResult bound_ropt(const DensityMatrix& rho_ab, const EnsembleContext& ctx) {
    const MemoryTerms t = memory_terms(rho_ab, ctx.n());
    RoptResult r = bound_ropt_si(ctx);
    r.value += 0.5 * ctx.n() * (2.0 * t.h_b - t.h_a);
    return r;
}

double bound_lemma2(const DensityMatrix& rho_ab, const EnsembleContext& ctx) {
    const MemoryTerms t = memory_terms(rho_ab, ctx.n());
    return bound_lemma2_si(ctx) - 2.0 * t.h_a_given_b;
}

double bound_ry(const DensityMatrix& rho_ab, const EnsembleContext& ctx) {
    return bound_ry_si(ctx) + memory_terms(rho_ab, ctx.n()).memory_info;
}

// --- report --------------------------------------------------------------------

const BoundEntry* BoundReport::find(const std::string& name) const {
    for (const BoundEntry& b : bounds)
        if (b.name == name) return &b;
    return nullptr;
}

double BoundReport::worst_slack() const {
    double w = std::numeric_limits<double>::infinity();
    for (const BoundEntry& b : bounds) w = std::min(w, b.slack);
    return w;
}

const std::vector<std::string>& known_bound_names() {
    static const std::vector<std::string> names = {
        "MU",   "r_H",    "r_G",    "r_CP",       "U1",        "U2",
        "U3",   "thm1",   "r_x",    "r_opt",      "lemma2",    "r_y",
        "eur_hybrid", "eur_multi", "classical_pair"};
    return names;
}

bool bound_applicable(const std::string& name, int n_measurements) {
    static const std::set<std::string> pair_only = {"MU",   "r_H",        "r_G",
                                                    "r_CP", "thm1",       "eur_hybrid",
                                                    "classical_pair"};
    if (name == "lemma2") return n_measurements == 3;
    if (pair_only.count(name)) return n_measurements == 2;
    const auto& known = known_bound_names();
    return std::find(known.begin(), known.end(), name) != known.end();
}

BoundReport full_report(const DensityMatrix& rho_ab, const EnsembleContext& ctx,
                        BOrdering ordering) {
    require_bipartite(rho_ab, ctx.d());
    const int n = ctx.n();

    BoundReport rep;
    rep.n = n;
    rep.d = ctx.d();
    rep.ordering = ordering;
    rep.memory = memory_terms(rho_ab, n);

    const DensityMatrix rho_a = partial_trace(rho_ab, 0);
    for (const Basis& m : ctx.ensemble.bases) {
        const double h_m = shannon_entropy(outcome_distribution(m, rho_a));
        const double h_mb = conditional_outcome_entropy(rho_ab, m);
        rep.infos.push_back(h_m - h_mb);
        rep.cond_entropies.push_back(h_mb);
        rep.lhs_info_sum += h_m - h_mb;
        rep.lhs_entropy_sum += h_mb;
        rep.lhs_outcome_entropy_sum += h_m;
    }

    const MemoryTerms& t = rep.memory;
    const double mem2 = 2.0 * t.h_b - t.h_a;
    const bool heur = ctx.heuristic_omega;

    auto info = [&](const std::string& name, double value, bool heuristic = false) {
        rep.bounds.push_back(
            {name, BoundKind::info_upper, value, value - rep.lhs_info_sum, heuristic});
    };
    auto eur = [&](const std::string& name, double value, bool heuristic = false) {
        rep.bounds.push_back(
            {name, BoundKind::eur_lower, value, rep.lhs_entropy_sum - value, heuristic});
    };

    if (n == 2) {
        info("r_H", bound_hall(ctx) + mem2);
        info("r_G", bound_grudka(ctx) + mem2);
        info("r_CP", bound_coles_piani(ctx) + mem2);
    }
    info("U1", bound_zhang_u1(rho_ab, ctx));
    info("U2", bound_zhang_u2(rho_ab, ctx));
    info("U3", bound_zhang_u3(rho_ab, ctx));
    if (n == 2) info("thm1", bound_theorem1(rho_ab, ctx, ordering), heur);
    info("r_x", bound_rx(rho_ab, ctx, ordering), heur);
    {
        const RoptResult r = bound_ropt(rho_ab, ctx);
        rep.ropt_family = r.family;
        info("r_opt", r.value);
    }
    if (n == 3) info("lemma2", bound_lemma2(rho_ab, ctx));
    info("r_y", bound_ry(rho_ab, ctx));

    if (n == 2) {
        eur("MU", bound_mu(ctx) + t.h_a_given_b);
        eur("eur_hybrid", eur_hybrid_pair(rho_ab, ctx, ordering), heur);
    }
    eur("eur_multi", eur_multi_lower(rho_ab, ctx, ordering), heur);

    if (n == 2) {
        const double v = classical_pair_lower(rho_a, ctx);
        rep.bounds.push_back({"classical_pair", BoundKind::classical_lower, v,
                              rep.lhs_outcome_entropy_sum - v, false});
    }
    return rep;
}

double si_bound(const EnsembleContext& ctx, const std::string& name, BOrdering o) {
    if (name == "MU") return bound_mu(ctx);
    if (name == "r_H") return bound_hall(ctx);
    if (name == "r_G") return bound_grudka(ctx);
    if (name == "r_CP") return bound_coles_piani(ctx);
    if (name == "U1") return bound_zhang_u1_si(ctx);
    if (name == "U2") return bound_zhang_u2_si(ctx);
    if (name == "U3") return bound_zhang_u3_si(ctx);
    if (name == "thm1") return bound_theorem1_si(ctx, o);
    if (name == "r_x") return bound_rx_si(ctx, o);
    if (name == "r_opt") return bound_ropt_si(ctx).value;
    if (name == "lemma2") return bound_lemma2_si(ctx);
    if (name == "r_y") return bound_ry_si(ctx);
    if (name == "eur_hybrid") return eur_hybrid_si(ctx, o);
    if (name == "eur_multi") return eur_multi_si(ctx, o);
    if (name == "classical_pair")
        throw DimensionError("classical_pair needs a state and cannot be swept");
    throw std::invalid_argument("unknown bound name '" + name + "'");
}

}  // namespace exbounds
