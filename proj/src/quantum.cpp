#include "exbounds/quantum.hpp"

#include <cmath>

namespace exbounds {

namespace {

int dims_product(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

}  // namespace

DensityMatrix make_density_matrix(CMatrix mat, std::vector<int> dims) {
    if (mat.rows() != mat.cols())
        throw DimensionError("density matrix must be square, got " +
                             std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()));
    if (dims.empty()) dims = {static_cast<int>(mat.rows())};
    for (int d : dims)
        if (d < 1) throw DimensionError("subsystem dimensions must be positive");
    if (dims_product(dims) != mat.rows())
        throw DimensionError("declared dims do not match matrix size " +
                             std::to_string(mat.rows()));

    double herm = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::tau_herm)
        throw InvalidStateError("matrix is not hermitian (max deviation " +
                                std::to_string(herm) + ")");
    double tr_err = std::abs(mat.trace() - Complex(1.0, 0.0));
    if (tr_err > tol::tau_norm)
        throw InvalidStateError("trace differs from one by " + std::to_string(tr_err));

    Eigen::SelfAdjointEigenSolver<CMatrix> es(mat, Eigen::EigenvaluesOnly);
    double lam_min = es.eigenvalues().minCoeff();
    if (lam_min < -tol::tau_psd)
        throw InvalidStateError("matrix is not positive semidefinite (min eigenvalue " +
                                std::to_string(lam_min) + ")");
    return DensityMatrix{std::move(mat), std::move(dims)};
}

DensityMatrix pure_state(const CVector& psi, std::vector<int> dims) {
    double n = psi.norm();
    if (std::abs(n - 1.0) > tol::tau_norm)
        throw InvalidStateError("state vector norm differs from one by " +
                                std::to_string(std::abs(n - 1.0)));
    return make_density_matrix(psi * psi.adjoint(), std::move(dims));
}

double von_neumann_entropy(const CMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    RVector lam = es.eigenvalues();
    double h = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        double p = std::min(std::max(lam[i], 0.0), 1.0);
        if (p > tol::eps_eig) h -= p * std::log2(p);
    }
    return h;
}

double shannon_entropy(const RVector& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        double v = std::min(std::max(p[i], 0.0), 1.0);
        if (v > tol::eps_eig) h -= v * std::log2(v);
    }
    return h;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
    if (rho.dims.size() != 2)
        throw DimensionError("partial_trace expects a bipartite state, got " +
                             std::to_string(rho.dims.size()) + " factors");
    if (keep != 0 && keep != 1)
        throw DimensionError("keep must be 0 (A) or 1 (B)");
    const int da = rho.dims[0], db = rho.dims[1];
    if (keep == 0) {
        CMatrix out = CMatrix::Zero(da, da);
        for (int a = 0; a < da; ++a)
            for (int ap = 0; ap < da; ++ap)
                for (int b = 0; b < db; ++b)
                    out(a, ap) += rho.mat(a * db + b, ap * db + b);
        return DensityMatrix{std::move(out), {da}};
    }
    CMatrix out = CMatrix::Zero(db, db);
    for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp)
            for (int a = 0; a < da; ++a)
                out(b, bp) += rho.mat(a * db + b, a * db + bp);
    return DensityMatrix{std::move(out), {db}};
}

double conditional_entropy(const DensityMatrix& rho_ab) {
    DensityMatrix rho_b = partial_trace(rho_ab, 1);
    return von_neumann_entropy(rho_ab.mat) - von_neumann_entropy(rho_b.mat);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

CVector haar_pure(int d, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(d);
    for (int i = 0; i < d; ++i) {
        double re = gauss(rng);
        double im = gauss(rng);
        v[i] = Complex(re, im);
    }
    v /= v.norm();
    return v;
}

CMatrix hs_mixed(int d, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double re = gauss(rng);
            double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    // round off the tiny anti-hermitian residue of the product
    rho = (rho + rho.adjoint().eval()) / 2.0;
    return rho;
}

DensityMatrix random_bipartite(int d_a, int d_b, bool pure, Rng& rng) {
    int d = d_a * d_b;
    if (pure) return pure_state(haar_pure(d, rng), {d_a, d_b});
    return make_density_matrix(hs_mixed(d, rng), {d_a, d_b});
}

}  // namespace exbounds
