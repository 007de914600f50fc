#pragma once

#include <string>
#include <vector>

#include "exbounds/quantum.hpp"

namespace exbounds {

// Rank-1 projective measurement given by a complete orthonormal basis.
// Column j of `vectors` is the outcome vector |u_j>.
struct Basis {
    std::string label;
    CMatrix vectors;

    int dim() const { return static_cast<int>(vectors.rows()); }
};

// Validates completeness and orthonormality (V^dagger V = I within tau_norm).
Basis make_basis(std::string label, CMatrix vectors);

// Two or more bases sharing one dimension; the measured system is always the
// A factor of a bipartite state.
struct Ensemble {
    int d = 0;
    std::vector<Basis> bases;

    int n() const { return static_cast<int>(bases.size()); }
};

Ensemble make_ensemble(std::vector<Basis> bases);

// c_ij = |<a_i|b_j>|^2; rows/columns each sum to one (doubly stochastic).
RMatrix overlap_matrix(const Basis& a, const Basis& b);

// Complex basis-change matrix U_ij = <a_i|b_j> (the matrix whose submatrices
// the majorization engine scans; overlap_matrix is |U|^2 entrywise).
CMatrix basis_change(const Basis& a, const Basis& b);

// Directed chain coefficient for a visiting order of the ensemble's bases:
//   c(order)[i_last] = sum over middle indices of max over the first index of
//   the product of consecutive overlaps along the chain.
// For two bases this is the column maximum of their overlap matrix.
RVector chain_vector(const Ensemble& e, const std::vector<int>& order);

// Single entry of chain_vector; `order` must be a permutation of all bases.
double chain_coefficient(const Ensemble& e, const std::vector<int>& order, int i_last);

// Born probabilities of measuring `rho` (a single-system state of matching
// dimension) in the given basis.
RVector outcome_distribution(const Basis& b, const DensityMatrix& rho);

// Measure-and-forget channel on the A factor:
//   rho_MB = sum_i (|u_i><u_i| (x) I) rho_AB (|u_i><u_i| (x) I).
// Accepts a bare single-system state as well (dims = {d}).
DensityMatrix dephase_in_basis(const DensityMatrix& rho, const Basis& b);

// Round to `tol::round_digits` decimal digits; the deterministic tie-break
// used when sorting overlap entries.
double round_for_ties(double x);

}  // namespace exbounds
