#pragma once

#include <string>
#include <vector>

#include "exbounds/scenarios.hpp"

namespace exbounds {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ensemble document:
//   {"dimension": d, "bases": [{"label": "...", "vectors": [[[re,im],...],...]}]}
// vector j of a basis becomes column j of the basis block.
Ensemble parse_ensemble(const std::string& text);
Ensemble load_ensemble(const std::string& path);
std::string serialize_ensemble(const Ensemble& e);

// State document: {"dims": [dA, dB], "matrix": [[[re,im],...],...]}
DensityMatrix parse_state(const std::string& text);
DensityMatrix load_state(const std::string& path);
std::string serialize_state(const DensityMatrix& rho);

std::string serialize_report(const BoundReport& rep);

// 12 significant digits, decimal point, no locale
std::string format_double(double x);

std::string to_csv(const SweepTable& t);
std::string to_csv(const CompareTable& t);

std::string verify_summary(const std::vector<VerifyCheck>& checks);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace exbounds
