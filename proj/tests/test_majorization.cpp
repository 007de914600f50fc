#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "exbounds/majorization.hpp"
#include "exbounds/scenarios.hpp"

using namespace exbounds;

namespace {

const double half_pi = std::numbers::pi / 2.0;

Ensemble mub_pair() {
    CMatrix h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << Complex(r, 0), Complex(r, 0), Complex(r, 0), Complex(-r, 0);
    return make_ensemble(
        {make_basis("comp", CMatrix::Identity(2, 2)), make_basis("hadamard", h)});
}

Ensemble identical_pair(int d) {
    return make_ensemble(
        {make_basis("one", CMatrix::Identity(d, d)), make_basis("two", CMatrix::Identity(d, d))});
}

// Gradient-free reference for the qubit pair: scan the Bloch sphere on a fine
// grid and return the best sum of the k largest product-distribution entries.
double bloch_scan_omega(const Ensemble& e, int k, int grid = 400) {
    double best = 0.0;
    for (int it = 0; it <= grid; ++it) {
        const double theta = std::numbers::pi * it / grid;
        for (int ip = 0; ip < 2 * grid; ++ip) {
            const double phi = std::numbers::pi * ip / grid;
            CVector psi(2);
            psi << Complex(std::cos(theta / 2), 0),
                std::polar(std::sin(theta / 2), phi);
            const RVector p = tensor_distribution(e, pure_state(psi, {2}));
            RVector s = p;
            std::sort(s.data(), s.data() + s.size(), std::greater<double>());
            best = std::max(best, s.head(k).sum());
        }
    }
    return best;
}

// Partial sums of the sorted outcome distribution against the capitals.
void check_dominated(const Ensemble& e, const MajorizationBound& w, const DensityMatrix& rho) {
    CHECK(dominance_violation(tensor_distribution(e, rho), w.capitals) <= tol::tau_maj);
}

}  // namespace

TEST_CASE("structure of the exact pair bound") {
    for (double a : {0.5, 0.6, 0.75, 0.9, 1.0}) {
        const Ensemble e = qubit_family(a, half_pi);
        const MajorizationBound w = omega_exact_pair(e);
        REQUIRE(w.capitals.size() == 4);  // d^N entries
        REQUIRE(w.omega.size() == 4);
        CHECK(w.method == OmegaMethod::exact_submatrix);
        // monotone nondecreasing, saturating at 1 from entry d-1 on
        for (int i = 1; i < 4; ++i) CHECK(w.capitals(i) >= w.capitals(i - 1) - 1e-15);
        CHECK(w.capitals(1) == doctest::Approx(1.0));
        CHECK(w.capitals(3) == doctest::Approx(1.0));
        // increments are a probability vector
        CHECK(w.omega.minCoeff() >= -1e-15);
        CHECK(w.omega.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pinned capitals for the qubit MUB pair and identical bases") {
    const MajorizationBound mub = omega_exact_pair(mub_pair());
    const double omega1 = 0.25 * (1.0 + 1.0 / std::sqrt(2.0)) * (1.0 + 1.0 / std::sqrt(2.0));
    CHECK(mub.capitals(0) == doctest::Approx(omega1).epsilon(1e-12));  // 0.72855...
    CHECK(mub.omega(0) == doctest::Approx(omega1).epsilon(1e-12));
    CHECK(mub.omega(1) == doctest::Approx(1.0 - omega1).epsilon(1e-12));
    CHECK(mub.omega(2) == doctest::Approx(0.0));
    CHECK(mub.omega(3) == doctest::Approx(0.0));

    const MajorizationBound id2 = omega_exact_pair(identical_pair(2));
    CHECK(id2.capitals(0) == doctest::Approx(1.0));
    CHECK(id2.omega(0) == doctest::Approx(1.0));
    CHECK(id2.omega.tail(3).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("first capital matches the closed form for any qubit pair") {
    // Omega_1 = ((1 + sqrt(c_max))/2)^2 with c_max the largest overlap
    for (double a : {0.5, 0.62, 0.8, 0.97}) {
        const Ensemble e = qubit_family(a, half_pi);
        const double c_max = overlap_matrix(e.bases[0], e.bases[1]).maxCoeff();
        const double expect = std::pow(0.5 * (1.0 + std::sqrt(c_max)), 2);
        CHECK(omega_exact_pair(e).capitals(0) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("exact capitals agree with a gradient-free Bloch scan") {
    for (double a : {0.55, 0.8}) {
        const Ensemble e = qubit_family(a, half_pi);
        const MajorizationBound w = omega_exact_pair(e);
        const double scan = bloch_scan_omega(e, 1);
        CHECK(w.capitals(0) >= scan - 1e-6);           // never undercuts the maximum
        CHECK(w.capitals(0) == doctest::Approx(scan).epsilon(1e-4));  // and is tight
    }
}

TEST_CASE("certificate states achieve the exact capitals") {
    const Ensemble e = qubit_family(0.7, half_pi);
    const MajorizationBound w = omega_exact_pair(e);
    REQUIRE(w.certificates.size() >= 1);
    for (std::size_t k = 0; k < w.certificates.size(); ++k) {
        const OmegaCertificate& cert = w.certificates[k];
        if (cert.state.size() == 0) continue;
        const RVector p = tensor_distribution(e, pure_state(cert.state, {e.d}));
        RVector s = p;
        std::sort(s.data(), s.data() + s.size(), std::greater<double>());
        const double achieved = s.head(static_cast<int>(k) + 1).sum();
        CHECK(achieved == doctest::Approx(w.capitals(static_cast<int>(k))).epsilon(1e-9));
    }
}

TEST_CASE("oracle agrees with the exact engine on random pairs") {
    OracleOptions opt;
    opt.restarts = 24;
    opt.iterations = 300;
    Rng rng(derive_seed(99, 1));
    for (int d : {2, 3}) {
        for (int rep = 0; rep < 3; ++rep) {
            CMatrix g(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    std::normal_distribution<double> nd;
                    g(i, j) = Complex(nd(rng), nd(rng));
                }
            Eigen::HouseholderQR<CMatrix> qr(g);
            CMatrix q = qr.householderQ();
            const Ensemble e = make_ensemble(
                {make_basis("comp", CMatrix::Identity(d, d)), make_basis("haar", q)});
            const MajorizationBound exact = omega_exact_pair(e);
            for (int k = 1; k < d; ++k) {
                const double est = omega_oracle(e, k, opt);
                CHECK(est == doctest::Approx(exact.capitals(k - 1)).epsilon(1e-4));
                CHECK(est <= exact.capitals(k - 1) + 1e-9);  // oracle never overshoots
            }
        }
    }
}

TEST_CASE("oracle bound dominates random states for three measurements") {
    const Ensemble e = qutrit_three_measurements(0.35, half_pi);
    OracleOptions opt;
    opt.restarts = 32;
    opt.iterations = 300;
    const MajorizationBound w = omega_oracle_bound(e, opt);
    REQUIRE(w.capitals.size() == 27);  // d^N
    CHECK(w.method == OmegaMethod::stochastic_oracle);
    for (int i = 1; i < 27; ++i) CHECK(w.capitals(i) >= w.capitals(i - 1) - 1e-15);
    CHECK(w.capitals(8) == doctest::Approx(1.0));  // saturation from d^{N-1} on
    CHECK(w.omega.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w.omega.minCoeff() >= -1e-15);

    Rng rng(derive_seed(4, 4));
    for (int t = 0; t < 200; ++t) {
        const DensityMatrix rho = (t % 2 == 0)
                                      ? pure_state(haar_pure(3, rng), {3})
                                      : make_density_matrix(hs_mixed(3, rng), {3});
        check_dominated(e, w, rho);
    }
}

TEST_CASE("compute_omega picks the exact engine for pairs") {
    CHECK(compute_omega(qubit_family(0.7, half_pi)).method == OmegaMethod::exact_submatrix);
    CHECK(compute_omega(qutrit_three_measurements(0.5, half_pi)).method ==
          OmegaMethod::stochastic_oracle);
}

TEST_CASE("shrunk capitals are flagged by the dominance check") {
    const Ensemble e = qubit_family(0.8, half_pi);
    MajorizationBound w = omega_exact_pair(e);
    w.capitals *= 0.99;
    double worst = 0.0;
    Rng rng(derive_seed(11, 0));
    for (int t = 0; t < 100; ++t) {
        const DensityMatrix rho = pure_state(haar_pure(2, rng), {2});
        worst = std::max(worst, dominance_violation(tensor_distribution(e, rho), w.capitals));
    }
    CHECK(worst > 1e-3);  // the 1% shrink is caught
}

TEST_CASE("oracle results are thread-count invariant") {
    const Ensemble e = qutrit_three_measurements(0.6, half_pi);
    OracleOptions one;
    one.restarts = 16;
    one.iterations = 200;
    OracleOptions four = one;
    four.threads = 4;
    const MajorizationBound w1 = omega_oracle_bound(e, one);
    const MajorizationBound w4 = omega_oracle_bound(e, four);
    CHECK((w1.capitals - w4.capitals).cwiseAbs().maxCoeff() == 0.0);  // bitwise equal
}

TEST_CASE("product vectors match explicit enumeration") {
    // N = 2: A_{i0 i1} = outer product of column i1 of c(u1,u2) with row i0,
    // sorted descending.
    const Ensemble pair = qubit_family(0.7, 0.4);
    const RMatrix c = overlap_matrix(pair.bases[0], pair.bases[1]);
    const std::vector<RVector> av2 = build_a_vectors(pair);
    REQUIRE(av2.size() == 4);
    for (int i0 = 0; i0 < 2; ++i0)
        for (int i1 = 0; i1 < 2; ++i1) {
            std::vector<double> expect;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) expect.push_back(c(i, i1) * c(i0, j));
            std::sort(expect.begin(), expect.end(), std::greater<double>());
            const RVector& got = av2[static_cast<std::size_t>(i0 * 2 + i1)];
            REQUIRE(got.size() == 4);
            for (int t = 0; t < 4; ++t)
                CHECK(got(t) == doctest::Approx(expect[static_cast<std::size_t>(t)])
                                    .epsilon(1e-12));
        }

    // N = 3: entry for inner index (j0,j1,j2) of the vector at outer index
    // (i0,i1,i2) is prod_m S_m(j_m, i_{m-1 mod N}).
    const Ensemble e = qutrit_three_measurements(0.45, half_pi);
    std::vector<RMatrix> s(3);
    for (int m = 0; m < 3; ++m) {
        RMatrix acc = overlap_matrix(e.bases[m], e.bases[(m + 1) % 3]);
        acc = acc * overlap_matrix(e.bases[(m + 1) % 3], e.bases[(m + 2) % 3]);
        s[static_cast<std::size_t>(m)] = acc;
    }
    const std::vector<RVector> av3 = build_a_vectors(e);
    REQUIRE(av3.size() == 27);
    for (int outer = 0; outer < 27; ++outer) {
        const int i0 = outer / 9, i1 = (outer / 3) % 3, i2 = outer % 3;
        const int digits[3] = {i0, i1, i2};
        std::vector<double> expect;
        for (int j0 = 0; j0 < 3; ++j0)
            for (int j1 = 0; j1 < 3; ++j1)
                for (int j2 = 0; j2 < 3; ++j2) {
                    const int inner[3] = {j0, j1, j2};
                    double prod = 1.0;
                    for (int m = 0; m < 3; ++m)
                        prod *= s[static_cast<std::size_t>(m)](inner[m],
                                                               digits[(m + 2) % 3]);
                    expect.push_back(prod);
                }
        std::sort(expect.begin(), expect.end(), std::greater<double>());
        const RVector& got = av3[static_cast<std::size_t>(outer)];
        for (int t = 0; t < 27; ++t)
            CHECK(got(t) ==
                  doctest::Approx(expect[static_cast<std::size_t>(t)]).epsilon(1e-12));
    }
}

TEST_CASE("pinned log-pairing values") {
    // MUB pair: every A vector is the uniform outer product, omega . A = 1/2
    // for the two leading entries; omega B = -2 exactly.
    const Ensemble e = mub_pair();
    const MajorizationBound w = omega_exact_pair(e);
    const std::vector<RVector> av = build_a_vectors(e);
    CHECK(omega_dot_b(w, av, BOrdering::ascending) == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(omega_dot_b(w, av, BOrdering::descending) == doctest::Approx(-2.0).epsilon(1e-9));

    // identical bases: A vectors are indicator-like, omega . A = 1, B = 0.
    const Ensemble id3 = identical_pair(3);
    const MajorizationBound wid = omega_exact_pair(id3);
    const std::vector<RVector> avid = build_a_vectors(id3);
    CHECK(omega_dot_b(wid, avid, BOrdering::ascending) == doctest::Approx(0.0));
    const RVector b = b_vector(wid, avid, BOrdering::ascending);
    CHECK(b.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orderings pair the log terms differently") {
    const Ensemble e = qubit_family(0.75, half_pi);
    const MajorizationBound w = omega_exact_pair(e);
    const std::vector<RVector> av = build_a_vectors(e);
    const RVector asc = b_vector(w, av, BOrdering::ascending);
    const RVector desc = b_vector(w, av, BOrdering::descending);
    // same multiset, reversed order
    for (int i = 0; i < asc.size(); ++i)
        CHECK(asc(i) == doctest::Approx(desc(asc.size() - 1 - i)).epsilon(1e-12));
    for (int i = 1; i < asc.size(); ++i) CHECK(asc(i) >= asc(i - 1) - 1e-15);
    // ascending pairs the most negative logs with the largest omega weights,
    // so it cannot exceed descending
    CHECK(omega_dot_b(w, av, BOrdering::ascending) <=
          omega_dot_b(w, av, BOrdering::descending) + 1e-12);
}

TEST_CASE("log terms are bounded by the flattest product vector") {
    // each A vector majorizes the uniform vector, so omega . A >= 1/d^N and
    // B entries stay above -N log2 d ... 0 after the eps floor; sanity-check
    // the magnitude for the three-measurement family.
    const Ensemble e = qutrit_three_measurements(0.3, half_pi);
    OracleOptions opt;
    opt.restarts = 16;
    opt.iterations = 200;
    const MajorizationBound w = omega_oracle_bound(e, opt);
    const std::vector<RVector> av = build_a_vectors(e);
    const RVector b = b_vector(w, av, BOrdering::ascending);
    CHECK(b.maxCoeff() <= 1e-12);  // logs of probabilities-like masses
    for (int i = 0; i < b.size(); ++i) CHECK(b(i) >= -2.0 * 3 * std::log2(3.0) - 1e-9);
}

TEST_CASE("tensor distribution flattens with the first basis slowest") {
    const Ensemble e = qubit_family(0.8, half_pi);
    CVector psi(2);
    psi << Complex(1, 0), Complex(0, 0);
    const DensityMatrix rho = pure_state(psi, {2});
    const RVector p = tensor_distribution(e, rho);
    REQUIRE(p.size() == 4);
    const RVector p1 = outcome_distribution(e.bases[0], rho);
    const RVector p2 = outcome_distribution(e.bases[1], rho);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(p(i * 2 + j) == doctest::Approx(p1(i) * p2(j)).epsilon(1e-12));
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dominance_violation reports signed worst slack") {
    RVector caps(4);
    caps << 0.7, 1.0, 1.0, 1.0;
    RVector p(4);
    p << 0.25, 0.25, 0.25, 0.25;
    CHECK(dominance_violation(p, caps) <= 0.0);
    RVector q(4);
    q << 0.8, 0.2, 0.0, 0.0;
    CHECK(dominance_violation(q, caps) == doctest::Approx(0.1).epsilon(1e-12));
    // sorting is internal: permuted inputs give the same answer
    RVector qp(4);
    qp << 0.0, 0.2, 0.8, 0.0;
    CHECK(dominance_violation(qp, caps) == doctest::Approx(0.1).epsilon(1e-12));
}
