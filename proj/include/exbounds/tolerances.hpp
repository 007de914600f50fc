#pragma once

// Numerical policy: every comparison tolerance used by the library lives here.
// These values are part of the library contract; tests pin behavior against them.
namespace exbounds::tol {

inline constexpr double tau_norm = 1e-10;   // trace-one / orthonormality deviation
inline constexpr double tau_herm = 1e-10;   // max |rho - rho^dagger| entry
inline constexpr double tau_psd = 1e-9;     // allowed eigenvalue negativity
inline constexpr double eps_eig = 1e-12;    // eigenvalue/probability zero cutoff in entropies
inline constexpr double tau_num = 1e-7;     // generic numeric agreement
inline constexpr double tau_maj = 1e-6;     // majorization dominance slack
inline constexpr double tau_verify = 1e-6;  // inequality verification slack
inline constexpr double eps_log = 1e-300;   // floor inside log2 to avoid -inf
inline constexpr int round_digits = 12;     // decimal rounding for deterministic tie-breaks

}  // namespace exbounds::tol
