#pragma once

#include <cstdint>
#include <vector>

#include "exbounds/measurement.hpp"

namespace exbounds {

enum class OmegaMethod { exact_submatrix, stochastic_oracle };

// sort order applied to the log terms before they are paired with omega.
enum class BOrdering { ascending, descending };

struct OracleOptions {
    int restarts = 64;
    int iterations = 500;
    std::uint64_t seed = 12345;
    int threads = 1;
    // seeded random states checked against the finished capitals; violations
    // enlarge the capitals (the oracle only lower-estimates a maximum).
    int validation_samples = 500;
};

// Best maximizer found for one capital. For the exact method, rows/cols name
// the winning submatrix; the state is reconstructed from its singular pair.
struct OmegaCertificate {
    double value = 0.0;
    CVector state;
    std::vector<int> rows;
    std::vector<int> cols;
};

// Universal dominating vector for the tensor-product outcome distribution:
// for every state, sorted(p_1 x ... x p_N) has partial sums <= capitals.
struct MajorizationBound {
    RVector omega;     // nonnegative increments of the capitals, summing to 1
    RVector capitals;  // cumulative maxima, index k-1 holds the k-entry value
    OmegaMethod method = OmegaMethod::exact_submatrix;
    std::vector<OmegaCertificate> certificates;
    int inflation_count = 0;  // capitals enlarged by the validation pass
};

// Exact capitals for a pair of bases: the k-th is the square of
// (1 + sigma_max(R))/2 maximized over submatrices R of the basis-change
// unitary with #rows + #cols = k + 1; saturates at 1 from k = d on.
MajorizationBound omega_exact_pair(const Ensemble& e);

// Multistart projected-gradient estimate of one capital: the maximum over
// pure states of the sum of the k largest tensor-distribution entries.
// Deterministic for a fixed budget; restarts derive per-index seeds.
double omega_oracle(const Ensemble& e, int k, const OracleOptions& opt = {});

// Full oracle bound: every capital, a conservative monotone envelope, and a
// seeded dominance validation that enlarges underestimated entries.
MajorizationBound omega_oracle_bound(const Ensemble& e, const OracleOptions& opt = {});

// exact method for two bases, oracle otherwise.
MajorizationBound compute_omega(const Ensemble& e, const OracleOptions& opt = {});

// Per multi-index (i_0..i_{N-1}): the tensor product over m of column
// i_{(m+N-1) mod N} of S_m, where S_m multiplies the overlap matrices along
// the cyclic visiting order starting at basis m. Each vector is sorted
// descending. For N = 2 this is the column (x) row construction c_{.,i_1}
// (x) c_{i_0,.} of the pair bound.
std::vector<RVector> build_a_vectors(const Ensemble& e);

// log2(omega . A_idx) per multi-index, floored at eps_log, sorted per flag.
RVector b_vector(const MajorizationBound& w, const std::vector<RVector>& a_vectors,
                 BOrdering ordering);

// Inner product of omega (natural order) with the sorted log terms.
double omega_dot_b(const MajorizationBound& w, const std::vector<RVector>& a_vectors,
                   BOrdering ordering);

// Product distribution p_1 x ... x p_N of measuring rho_a in every basis,
// flattened with the first basis slowest.
RVector tensor_distribution(const Ensemble& e, const DensityMatrix& rho_a);

// max_k (partial sums of p sorted descending - capitals); <= 0 means dominated.
double dominance_violation(const RVector& p, const RVector& capitals);

}  // namespace exbounds
