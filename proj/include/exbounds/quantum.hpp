#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "exbounds/tolerances.hpp"

namespace exbounds {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Density operator together with its declared tensor factorization.
// Single systems use dims = {d}; bipartite states dims = {d_A, d_B} with the
// first factor the measured (A) side throughout the library.
struct DensityMatrix {
    CMatrix mat;
    std::vector<int> dims;

    int dim() const { return static_cast<int>(mat.rows()); }
};

// Validates trace one (tau_norm), hermiticity (tau_herm) and positivity
// (eigenvalues >= -tau_psd) before wrapping. Throws InvalidStateError /
// DimensionError on failure.
DensityMatrix make_density_matrix(CMatrix mat, std::vector<int> dims);

DensityMatrix pure_state(const CVector& psi, std::vector<int> dims);

// Base-2 von Neumann entropy. Eigenvalues are clamped to [0,1]; values below
// eps_eig contribute zero.
double von_neumann_entropy(const CMatrix& rho);

// Base-2 Shannon entropy with the same cutoff policy.
double shannon_entropy(const RVector& p);

// Bipartite partial trace; keep = 0 keeps the A factor, keep = 1 the B factor.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

// H(A|B) = H(AB) - H(B) for a bipartite state (first factor conditioned).
double conditional_entropy(const DensityMatrix& rho_ab);

// --- seeded sampling -------------------------------------------------------

using Rng = std::mt19937_64;

// splitmix64-style mix so that per-task streams are independent of scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Haar-distributed pure state of dimension d.
CVector haar_pure(int d, Rng& rng);

// Hilbert-Schmidt-distributed mixed state: G G^dagger / tr, G square Ginibre.
CMatrix hs_mixed(int d, Rng& rng);

// Bipartite sample with dims {d_a, d_b}; pure = Haar on the joint space,
// otherwise Hilbert-Schmidt mixed on the joint space.
DensityMatrix random_bipartite(int d_a, int d_b, bool pure, Rng& rng);

}  // namespace exbounds
