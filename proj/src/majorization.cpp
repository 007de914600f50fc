#include "exbounds/majorization.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

namespace exbounds {

namespace {

int ipow(int base, int exp) {
    int r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

void decode_digits(int flat, int d, int n, std::vector<int>& digits) {
    digits.resize(n);
    for (int m = n - 1; m >= 0; --m) {
        digits[m] = flat % d;
        flat /= d;
    }
}

RVector increments(const RVector& capitals) {
    RVector omega(capitals.size());
    double prev = 0.0;
    for (int i = 0; i < capitals.size(); ++i) {
        omega[i] = std::max(0.0, capitals[i] - prev);
        prev = capitals[i];
    }
    return omega;
}

// Seeded cross-check of the finished capitals against random states; an
// exceeded partial sum enlarges the capital (plus margin) and is counted.
int validate_and_inflate(const Ensemble& e, MajorizationBound& b, int samples,
                         std::uint64_t seed) {
    int bumped = 0;
    for (int i = 0; i < samples; ++i) {
        Rng rng(derive_seed(seed, (1ull << 32) + static_cast<std::uint64_t>(i)));
        DensityMatrix rho = (i % 2 == 0)
                                ? pure_state(haar_pure(e.d, rng), {e.d})
                                : make_density_matrix(hs_mixed(e.d, rng), {e.d});
        RVector p = tensor_distribution(e, rho);
        std::sort(p.data(), p.data() + p.size(), std::greater<double>());
        double run = 0.0;
        for (int j = 0; j < p.size(); ++j) {
            run += p[j];
            // accumulated rounding can push a full partial sum a few ulp past
            // a capital that is exactly right; only genuine excess counts
            if (run > b.capitals[j] + 1e-12) {
                b.capitals[j] = run + tol::tau_maj;
                ++bumped;
            }
        }
    }
    if (bumped > 0) {
        for (int i = 1; i < b.capitals.size(); ++i)
            b.capitals[i] = std::max(b.capitals[i], b.capitals[i - 1]);
        b.omega = increments(b.capitals);
    }
    return bumped;
}

}  // namespace

MajorizationBound omega_exact_pair(const Ensemble& e) {
    if (e.n() != 2)
        throw DimensionError("the exact submatrix method handles exactly two bases; "
                             "use the stochastic oracle otherwise");
    const int d = e.d;
    if (d > 8) throw DimensionError("submatrix enumeration supports d <= 8");
    const int len = d * d;
    CMatrix u = basis_change(e.bases[0], e.bases[1]);

    RVector caps = RVector::Zero(len);
    std::vector<OmegaCertificate> certs(len);

    std::vector<int> rows, cols;
    for (unsigned rmask = 1; rmask < (1u << d); ++rmask) {
        for (unsigned cmask = 1; cmask < (1u << d); ++cmask) {
            const int k = std::popcount(rmask) + std::popcount(cmask) - 1;
            if (k >= d) continue;  // saturated range, handled by the floor below
            rows.clear();
            cols.clear();
            for (int i = 0; i < d; ++i) {
                if (rmask & (1u << i)) rows.push_back(i);
                if (cmask & (1u << i)) cols.push_back(i);
            }
            CMatrix sub(rows.size(), cols.size());
            for (std::size_t a = 0; a < rows.size(); ++a)
                for (std::size_t b = 0; b < cols.size(); ++b)
                    sub(a, b) = u(rows[a], cols[b]);
            Eigen::JacobiSVD<CMatrix> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const double sigma = std::min(svd.singularValues()(0), 1.0);
            const double val = 0.25 * (1.0 + sigma) * (1.0 + sigma);
            if (val > caps[k - 1]) {
                caps[k - 1] = val;
                // maximizer: (|x> + |y>)/norm from the top singular pair,
                // embedded back through the two bases
                CVector xe = CVector::Zero(d), ye = CVector::Zero(d);
                for (std::size_t a = 0; a < rows.size(); ++a)
                    xe += svd.matrixU().col(0)(a) * e.bases[0].vectors.col(rows[a]);
                for (std::size_t b = 0; b < cols.size(); ++b)
                    ye += svd.matrixV().col(0)(b) * e.bases[1].vectors.col(cols[b]);
                CVector psi = xe + ye;
                psi /= std::sqrt(2.0 + 2.0 * sigma);
                certs[k - 1] = OmegaCertificate{val, std::move(psi), rows, cols};
            }
        }
    }
    for (int i = d - 1; i < len; ++i) {
        caps[i] = 1.0;
        certs[i] = OmegaCertificate{1.0, e.bases[0].vectors.col(0), {}, {}};
    }
    for (int i = 1; i < len; ++i) caps[i] = std::max(caps[i], caps[i - 1]);

    MajorizationBound b;
    b.capitals = caps;
    b.omega = increments(caps);
    b.method = OmegaMethod::exact_submatrix;
    b.certificates = std::move(certs);
    return b;
}

namespace {

// Scratch and cached basis data for the projected-gradient oracle.
struct OracleWork {
    std::vector<CMatrix> vecs;  // basis vectors, column per outcome
    std::vector<CMatrix> adjs;  // adjoints, amplitude maps
    int d = 0, n = 0, len = 0;

    std::vector<CVector> amps;
    std::vector<RVector> probs;
    std::vector<double> tensor;
    std::vector<int> order;
    std::vector<int> digits;
    std::vector<RVector> weights;

    explicit OracleWork(const Ensemble& e)
        : d(e.d), n(e.n()), len(ipow(e.d, e.n())) {
        for (const Basis& b : e.bases) {
            vecs.push_back(b.vectors);
            adjs.push_back(b.vectors.adjoint());
        }
        amps.assign(n, CVector(d));
        probs.assign(n, RVector(d));
        weights.assign(n, RVector(d));
    }

    // sum of the k largest tensor entries at psi; fills amps/probs/order
    double eval(const CVector& psi, int k) {
        for (int m = 0; m < n; ++m) {
            amps[m] = adjs[m] * psi;
            probs[m] = amps[m].cwiseAbs2();
        }
        tensor.resize(len);
        for (int flat = 0; flat < len; ++flat) {
            double v = 1.0;
            int rem = flat;
            for (int m = n - 1; m >= 0; --m) {
                v *= probs[m][rem % d];
                rem /= d;
            }
            tensor[flat] = v;
        }
        order.resize(len);
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + k, order.end(),
                          [&](int a, int b) { return tensor[a] > tensor[b]; });
        double s = 0.0;
        for (int t = 0; t < k; ++t) s += tensor[order[t]];
        return s;
    }

    // ascent direction for the current top-k set (Wirtinger gradient up to scale)
    CVector gradient(int k) {
        for (int m = 0; m < n; ++m) weights[m].setZero();
        for (int t = 0; t < k; ++t) {
            decode_digits(order[t], d, n, digits);
            for (int m = 0; m < n; ++m) {
                double excl = 1.0;
                for (int mm = 0; mm < n; ++mm)
                    if (mm != m) excl *= probs[mm][digits[mm]];
                weights[m][digits[m]] += excl;
            }
        }
        CVector g = CVector::Zero(d);
        for (int m = 0; m < n; ++m)
            g += vecs[m] * amps[m].cwiseProduct(weights[m].cast<Complex>());
        return g;
    }

    double ascend(CVector psi, int k, int iterations, CVector& best_state) {
        double f = eval(psi, k);
        double best = f;
        best_state = psi;
        double eta = 0.25;
        for (int it = 0; it < iterations; ++it) {
            CVector g = gradient(k);
            if (g.norm() < 1e-14) break;
            CVector trial = psi + eta * g;
            trial.normalize();
            const double ft = eval(trial, k);
            if (ft > f) {
                psi = trial;
                f = ft;
                eta = std::min(eta * 1.3, 4.0);
                if (f > best) {
                    best = f;
                    best_state = psi;
                }
            } else {
                eta *= 0.5;
                if (eta < 1e-12) break;
                eval(psi, k);  // restore amps/order for the next gradient
            }
        }
        return best;
    }
};

struct RestartResult {
    double value = -1.0;
    int which = -1;
    CVector state;
};

void merge_best(RestartResult& into, const RestartResult& other) {
    if (other.value > into.value ||
        (other.value == into.value && other.which >= 0 &&
         (into.which < 0 || other.which < into.which)))
        into = other;
}

RestartResult best_over_restarts(const Ensemble& e, int k, const OracleOptions& opt) {
    const int total = std::max(1, opt.restarts);
    const int warm = e.n() * e.d;

    auto run_one = [&](OracleWork& work, int r) {
        CVector psi0;
        if (r < warm) {
            psi0 = e.bases[r / e.d].vectors.col(r % e.d);
        } else {
            Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(r)));
            psi0 = haar_pure(e.d, rng);
        }
        RestartResult res;
        res.which = r;
        res.value = work.ascend(std::move(psi0), k, opt.iterations, res.state);
        return res;
    };

    const int threads = std::clamp(opt.threads, 1, total);
    if (threads == 1) {
        OracleWork work(e);
        RestartResult best;
        for (int r = 0; r < total; ++r) merge_best(best, run_one(work, r));
        return best;
    }
    std::vector<RestartResult> partial(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            OracleWork work(e);
            for (int r = t; r < total; r += threads)
                merge_best(partial[t], run_one(work, r));
        });
    }
    for (std::thread& th : pool) th.join();
    RestartResult best;
    for (const RestartResult& p : partial) merge_best(best, p);
    return best;
}

}  // namespace

double omega_oracle(const Ensemble& e, int k, const OracleOptions& opt) {
    const int len = ipow(e.d, e.n());
    if (k < 1 || k > len)
        throw DimensionError("capital index must lie in 1.." + std::to_string(len));
    // pinning the first basis makes at most d^{N-1} tensor entries nonzero
    if (k >= ipow(e.d, e.n() - 1)) return 1.0;
    return std::min(best_over_restarts(e, k, opt).value, 1.0);
}

MajorizationBound omega_oracle_bound(const Ensemble& e, const OracleOptions& opt) {
    const int d = e.d, n = e.n();
    const int len = ipow(d, n);
    const int floor_k = ipow(d, n - 1);

    RVector caps = RVector::Zero(len);
    std::vector<OmegaCertificate> certs(len);
    bool saturated = false;
    for (int k = 1; k <= len; ++k) {
        if (k >= floor_k || saturated) {
            caps[k - 1] = 1.0;
            certs[k - 1] = OmegaCertificate{1.0, e.bases[0].vectors.col(0), {}, {}};
            continue;
        }
        RestartResult r = best_over_restarts(e, k, opt);
        certs[k - 1] = OmegaCertificate{r.value, r.state, {}, {}};
        if (r.value >= 1.0 - 1e-9) {
            caps[k - 1] = 1.0;
            saturated = true;
        } else {
            caps[k - 1] = r.value;
        }
    }
    // sound repairs from below: the best k of k+1 terms keep at least the
    // fraction k/(k+1), and capitals never decrease
    for (int i = len - 2; i >= 0; --i)
        caps[i] = std::max(caps[i], caps[i + 1] * static_cast<double>(i + 1) /
                                        static_cast<double>(i + 2));
    for (int i = 1; i < len; ++i) caps[i] = std::max(caps[i], caps[i - 1]);
    caps = caps.cwiseMin(1.0);

    MajorizationBound b;
    b.capitals = caps;
    b.omega = increments(caps);
    b.method = OmegaMethod::stochastic_oracle;
    b.certificates = std::move(certs);
    b.inflation_count = validate_and_inflate(e, b, opt.validation_samples, opt.seed);
    return b;
}

MajorizationBound compute_omega(const Ensemble& e, const OracleOptions& opt) {
    if (e.n() == 2 && e.d <= 8) return omega_exact_pair(e);
    return omega_oracle_bound(e, opt);
}

std::vector<RVector> build_a_vectors(const Ensemble& e) {
    const int n = e.n(), d = e.d;
    const int len = ipow(d, n);

    // S_m: overlap products along the cyclic order m, m+1, ..., m+n-1
    std::vector<RMatrix> s(n);
    for (int m = 0; m < n; ++m) {
        RMatrix acc = overlap_matrix(e.bases[m], e.bases[(m + 1) % n]);
        for (int t = 1; t + 1 < n; ++t)
            acc = acc * overlap_matrix(e.bases[(m + t) % n], e.bases[(m + t + 1) % n]);
        s[m] = std::move(acc);
    }

    std::vector<RVector> out(len);
    std::vector<int> digits;
    for (int outer = 0; outer < len; ++outer) {
        decode_digits(outer, d, n, digits);
        // factor m contributes the column addressed by the previous outer digit
        RVector v = s[0].col(digits[n - 1]);
        for (int m = 1; m < n; ++m) {
            const auto col = s[m].col(digits[m - 1]);
            RVector nv(v.size() * d);
            for (int a = 0; a < v.size(); ++a)
                for (int c = 0; c < d; ++c) nv[a * d + c] = v[a] * col[c];
            v.swap(nv);
        }
        std::sort(v.data(), v.data() + v.size(), std::greater<double>());
        out[outer] = std::move(v);
    }
    return out;
}

RVector b_vector(const MajorizationBound& w, const std::vector<RVector>& a_vectors,
                 BOrdering ordering) {
    const int len = static_cast<int>(w.omega.size());
    if (static_cast<int>(a_vectors.size()) != len)
        throw DimensionError("omega and the multi-index family have different lengths");
    RVector b(len);
    for (int idx = 0; idx < len; ++idx) {
        if (a_vectors[idx].size() != len)
            throw DimensionError("multi-index vector length mismatch");
        const double dot = w.omega.dot(a_vectors[idx]);
        b[idx] = std::log2(std::max(dot, tol::eps_log));
    }
    if (ordering == BOrdering::ascending)
        std::sort(b.data(), b.data() + len);
    else
        std::sort(b.data(), b.data() + len, std::greater<double>());
    return b;
}

double omega_dot_b(const MajorizationBound& w, const std::vector<RVector>& a_vectors,
                   BOrdering ordering) {
    return w.omega.dot(b_vector(w, a_vectors, ordering));
}

RVector tensor_distribution(const Ensemble& e, const DensityMatrix& rho_a) {
    const int n = e.n(), d = e.d;
    std::vector<RVector> probs;
    probs.reserve(n);
    for (const Basis& b : e.bases) probs.push_back(outcome_distribution(b, rho_a));
    const int len = ipow(d, n);
    RVector t(len);
    for (int flat = 0; flat < len; ++flat) {
        double v = 1.0;
        int rem = flat;
        for (int m = n - 1; m >= 0; --m) {
            v *= probs[m][rem % d];
            rem /= d;
        }
        t[flat] = v;
    }
    return t;
}

double dominance_violation(const RVector& p, const RVector& capitals) {
    if (p.size() != capitals.size())
        throw DimensionError("distribution and capitals have different lengths");
    RVector sorted = p;
    std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<double>());
    double run = 0.0, worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < sorted.size(); ++i) {
        run += sorted[i];
        worst = std::max(worst, run - capitals[i]);
    }
    return worst;
}

}  // namespace exbounds
