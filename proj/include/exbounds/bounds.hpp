#pragma once

#include <string>
#include <vector>

#include "exbounds/majorization.hpp"

namespace exbounds {

// Entropies of the bipartite state that complete the state-independent parts.
struct MemoryTerms {
    double h_a = 0.0;          // H(A)
    double h_b = 0.0;          // H(B)
    double h_a_given_b = 0.0;  // H(A|B) = H(AB) - H(B)
    double memory_info = 0.0;  // N H(B) - (N-1) H(A)
};

// Shared per-ensemble data: overlap cache, the majorization bound and both
// pairings of its log inner products. Preparing this once amortizes the
// oracle cost across states and bound evaluations.
struct EnsembleContext {
    Ensemble ensemble;
    std::vector<std::vector<RMatrix>> overlaps;  // [m][l] = overlap(bases m, l)
    MajorizationBound omega;
    std::vector<RVector> a_vectors;
    double wb_ascending = 0.0;
    double wb_descending = 0.0;
    bool heuristic_omega = false;  // omega came from the stochastic oracle

    int d() const { return ensemble.d; }
    int n() const { return ensemble.n(); }
};

EnsembleContext prepare_ensemble(const Ensemble& e, const OracleOptions& opt = {});

double omega_b(const EnsembleContext& ctx, BOrdering ordering);

// --- outcome-side quantities -----------------------------------------------

// I(M:B) = H(M) - H(M|B) with H(M|B) = H(rho_MB) - H(rho_B).
double mutual_information(const DensityMatrix& rho_ab, const Basis& m);

// H(M|B) alone.
double conditional_outcome_entropy(const DensityMatrix& rho_ab, const Basis& m);

MemoryTerms memory_terms(const DensityMatrix& rho_ab, int n_measurements);

// --- state-independent parts -----------------------------------------------
// Pair bounds (two bases); throw DimensionError otherwise.
double bound_mu(const EnsembleContext& ctx);           // -log2 c_max
double bound_hall(const EnsembleContext& ctx);         // log2(d^2 c_max)
double bound_grudka(const EnsembleContext& ctx);       // log2(d * sum of d largest c)
double bound_coles_piani(const EnsembleContext& ctx);  // log2(d * min directed row-max sums)

// Majorization-driven parts, any N.
double bound_theorem1_si(const EnsembleContext& ctx, BOrdering o);  // log2 d^2 + wb/2
double bound_rx_si(const EnsembleContext& ctx, BOrdering o);        // N log2 d + wb/N
double eur_hybrid_si(const EnsembleContext& ctx, BOrdering o);      // -wb/2
double eur_multi_si(const EnsembleContext& ctx, BOrdering o);       // -wb/N

// Chain-coefficient bounds, exhaustive over permutations (N <= 6).
double bound_zhang_u1_si(const EnsembleContext& ctx);
double bound_zhang_u2_si(const EnsembleContext& ctx);
double bound_zhang_u3_si(const EnsembleContext& ctx);

struct RoptResult {
    double value = 0.0;
    std::string family;  // "cyclic-pairs" | "all-pairs" | "full-cycle"
};
RoptResult bound_ropt_si(const EnsembleContext& ctx);

double bound_lemma2_si(const EnsembleContext& ctx);  // three bases only
double bound_ry_si(const EnsembleContext& ctx);

// Classical pair bound on H(M_1) + H(M_2) of the A marginal.
double classical_pair_lower(const DensityMatrix& rho_a, const EnsembleContext& ctx);

// --- completed (state-dependent) bounds --------------------------------------
double bound_theorem1(const DensityMatrix& rho_ab, const EnsembleContext& ctx,
                      BOrdering o = BOrdering::ascending);
double bound_rx(const DensityMatrix& rho_ab, const EnsembleContext& ctx,
                BOrdering o = BOrdering::ascending);
double eur_hybrid_pair(const DensityMatrix& rho_ab, const EnsembleContext& ctx,
                       BOrdering o = BOrdering::ascending);
double eur_multi_lower(const DensityMatrix& rho_ab, const EnsembleContext& ctx,
                       BOrdering o = BOrdering::ascending);
double bound_zhang_u1(const DensityMatrix& rho_ab, const EnsembleContext& ctx);
double bound_zhang_u2(const DensityMatrix& rho_ab, const EnsembleContext& ctx);
double bound_zhang_u3(const DensityMatrix& rho_ab, const EnsembleContext& ctx);
RoptResult bound_ropt(const DensityMatrix& rho_ab, const EnsembleContext& ctx);
double bound_lemma2(const DensityMatrix& rho_ab, const EnsembleContext& ctx);
double bound_ry(const DensityMatrix& rho_ab, const EnsembleContext& ctx);

// --- report ------------------------------------------------------------------

enum class BoundKind { info_upper, eur_lower, classical_lower };

struct BoundEntry {
    std::string name;
    BoundKind kind = BoundKind::info_upper;
    double value = 0.0;
    double slack = 0.0;  // >= 0 means the inequality holds
    bool heuristic = false;
};

struct BoundReport {
    int n = 0;
    int d = 0;
    BOrdering ordering = BOrdering::ascending;
    double lhs_info_sum = 0.0;           // sum_m I(M_m:B)
    double lhs_entropy_sum = 0.0;        // sum_m H(M_m|B)
    double lhs_outcome_entropy_sum = 0;  // sum_m H(M_m) of the A marginal
    std::vector<double> infos;
    std::vector<double> cond_entropies;
    MemoryTerms memory;
    std::vector<BoundEntry> bounds;
    std::string ropt_family;

    const BoundEntry* find(const std::string& name) const;
    // most negative slack across entries; >= -tolerance means all hold
    double worst_slack() const;
};

// Every applicable bound for the (state, ensemble) pair, with memory
// completions applied so each entry is comparable to its left-hand side.
BoundReport full_report(const DensityMatrix& rho_ab, const EnsembleContext& ctx,
                        BOrdering ordering = BOrdering::ascending);

// name list {MU, r_H, ..., classical_pair} and applicability by basis count
const std::vector<std::string>& known_bound_names();
bool bound_applicable(const std::string& name, int n_measurements);

// State-independent value of a named bound (memory terms zeroed). Throws on
// unknown names and on bounds that need a state (classical_pair).
double si_bound(const EnsembleContext& ctx, const std::string& name,
                BOrdering ordering = BOrdering::ascending);

}  // namespace exbounds
