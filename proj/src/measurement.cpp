#include "exbounds/measurement.hpp"

#include <cmath>

namespace exbounds {

Basis make_basis(std::string label, CMatrix vectors) {
    if (vectors.rows() != vectors.cols())
        throw DimensionError("basis '" + label + "' must be complete: expected a square " +
                             "vector matrix, got " + std::to_string(vectors.rows()) + "x" +
                             std::to_string(vectors.cols()));
    CMatrix gram = vectors.adjoint() * vectors;
    double dev = (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (dev > tol::tau_norm)
        throw InvalidStateError("basis '" + label + "' is not orthonormal (max Gram deviation " +
                                std::to_string(dev) + ")");
    return Basis{std::move(label), std::move(vectors)};
}

Ensemble make_ensemble(std::vector<Basis> bases) {
    if (bases.size() < 2)
        throw DimensionError("an ensemble needs at least two bases, got " +
                             std::to_string(bases.size()));
    int d = bases.front().dim();
    for (const Basis& b : bases)
        if (b.dim() != d)
            throw DimensionError("basis '" + b.label + "' has dimension " +
                                 std::to_string(b.dim()) + ", expected " + std::to_string(d));
    return Ensemble{d, std::move(bases)};
}

CMatrix basis_change(const Basis& a, const Basis& b) {
    if (a.dim() != b.dim())
        throw DimensionError("bases of different dimension");
    return a.vectors.adjoint() * b.vectors;
}

RMatrix overlap_matrix(const Basis& a, const Basis& b) {
    return basis_change(a, b).cwiseAbs2();
}

RVector chain_vector(const Ensemble& e, const std::vector<int>& order) {
    const std::size_t n = order.size();
    if (n < 2) throw DimensionError("chain order needs at least two bases");
    for (int idx : order)
        if (idx < 0 || idx >= e.n())
            throw DimensionError("chain order index " + std::to_string(idx) + " out of range");

    RMatrix c01 = overlap_matrix(e.bases[order[0]], e.bases[order[1]]);
    RVector v = c01.colwise().maxCoeff();  // max over the first index
    for (std::size_t k = 1; k + 1 < n; ++k) {
        RMatrix ck = overlap_matrix(e.bases[order[k]], e.bases[order[k + 1]]);
        v = ck.transpose() * v;  // sum the middle index against the next overlap
    }
    return v;
}

double chain_coefficient(const Ensemble& e, const std::vector<int>& order, int i_last) {
    if (static_cast<int>(order.size()) != e.n())
        throw DimensionError("chain order must visit every basis exactly once");
    std::vector<bool> seen(order.size(), false);
    for (int idx : order) {
        if (idx < 0 || idx >= e.n() || seen[idx])
            throw DimensionError("chain order must be a permutation of the bases");
        seen[idx] = true;
    }
    if (i_last < 0 || i_last >= e.d)
        throw DimensionError("final chain index out of range");
    return chain_vector(e, order)[i_last];
}

RVector outcome_distribution(const Basis& b, const DensityMatrix& rho) {
    if (rho.dim() != b.dim())
        throw DimensionError("state dimension " + std::to_string(rho.dim()) +
                             " does not match basis dimension " + std::to_string(b.dim()));
    RVector p(b.dim());
    for (int i = 0; i < b.dim(); ++i) {
        CVector u = b.vectors.col(i);
        p[i] = std::max(0.0, (u.adjoint() * rho.mat * u)(0, 0).real());
    }
    return p;
}

DensityMatrix dephase_in_basis(const DensityMatrix& rho, const Basis& b) {
    const int da = rho.dims[0];
    if (da != b.dim())
        throw DimensionError("basis dimension " + std::to_string(b.dim()) +
                             " does not match the measured factor " + std::to_string(da));
    if (rho.dims.size() == 1) {
        CMatrix out = CMatrix::Zero(da, da);
        for (int i = 0; i < da; ++i) {
            CVector u = b.vectors.col(i);
            Complex p = (u.adjoint() * rho.mat * u)(0, 0);
            out += p * (u * u.adjoint());
        }
        return DensityMatrix{std::move(out), rho.dims};
    }
    if (rho.dims.size() != 2)
        throw DimensionError("dephase_in_basis expects one or two factors");
    const int db = rho.dims[1];
    CMatrix out = CMatrix::Zero(da * db, da * db);
    for (int i = 0; i < da; ++i) {
        CVector u = b.vectors.col(i);
        // B_i = <u_i|_A rho |u_i>_A, collapsing the A blocks
        CMatrix bi = CMatrix::Zero(db, db);
        for (int a = 0; a < da; ++a)
            for (int ap = 0; ap < da; ++ap)
                bi += std::conj(u[a]) * u[ap] * rho.mat.block(a * db, ap * db, db, db);
        for (int a = 0; a < da; ++a)
            for (int ap = 0; ap < da; ++ap)
                out.block(a * db, ap * db, db, db) += u[a] * std::conj(u[ap]) * bi;
    }
    return DensityMatrix{std::move(out), rho.dims};
}

double round_for_ties(double x) {
    double scale = std::pow(10.0, tol::round_digits);
    return std::round(x * scale) / scale;
}

}  // namespace exbounds
