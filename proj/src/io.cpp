#include "exbounds/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace exbounds {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(where + ": expected a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

json dump_complex(const Complex& z) { return json::array({z.real(), z.imag()}); }

const json& field(const json& j, const char* name, const std::string& where) {
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(where + ": missing field '" + name + "'");
    return *it;
}

json parse_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& err) {
        throw ParseError(what + ": " + err.what());
    }
}

}  // namespace

Ensemble parse_ensemble(const std::string& text) {
    const json doc = parse_text(text, "ensemble document");
    if (!doc.is_object()) throw ParseError("ensemble document: expected an object");
    const json& jd = field(doc, "dimension", "ensemble document");
    if (!jd.is_number_integer() || jd.get<int>() < 1)
        throw ParseError("ensemble document: 'dimension' must be a positive integer");
    const int d = jd.get<int>();

    const json& jb = field(doc, "bases", "ensemble document");
    if (!jb.is_array()) throw ParseError("ensemble document: 'bases' must be a list");
    std::vector<Basis> bases;
    for (std::size_t k = 0; k < jb.size(); ++k) {
        const std::string where = "basis #" + std::to_string(k);
        const json& b = jb[k];
        if (!b.is_object()) throw ParseError(where + ": expected an object");
        const json& jl = field(b, "label", where);
        if (!jl.is_string()) throw ParseError(where + ": 'label' must be a string");
        const json& jv = field(b, "vectors", where);
        if (!jv.is_array() || jv.size() != static_cast<std::size_t>(d))
            throw ParseError(where + ": expected " + std::to_string(d) + " vectors");
        CMatrix m(d, d);
        for (int col = 0; col < d; ++col) {
            const json& vec = jv[col];
            if (!vec.is_array() || vec.size() != static_cast<std::size_t>(d))
                throw ParseError(where + ", vector #" + std::to_string(col) +
                                 ": expected " + std::to_string(d) + " components");
            for (int row = 0; row < d; ++row)
                m(row, col) = parse_complex(vec[row], where + ", vector #" +
                                                          std::to_string(col));
        }
        try {
            bases.push_back(make_basis(jl.get<std::string>(), std::move(m)));
        } catch (const std::exception& err) {
            throw ParseError(where + ": " + err.what());
        }
    }
    try {
        return make_ensemble(std::move(bases));
    } catch (const std::exception& err) {
        throw ParseError(std::string("ensemble document: ") + err.what());
    }
}

std::string serialize_ensemble(const Ensemble& e) {
    json doc;
    doc["dimension"] = e.d;
    json bases = json::array();
    for (const Basis& b : e.bases) {
        json vectors = json::array();
        for (int col = 0; col < e.d; ++col) {
            json vec = json::array();
            for (int row = 0; row < e.d; ++row) vec.push_back(dump_complex(b.vectors(row, col)));
            vectors.push_back(std::move(vec));
        }
        bases.push_back(json{{"label", b.label}, {"vectors", std::move(vectors)}});
    }
    doc["bases"] = std::move(bases);
    return doc.dump(2) + "\n";
}

DensityMatrix parse_state(const std::string& text) {
    const json doc = parse_text(text, "state document");
    if (!doc.is_object()) throw ParseError("state document: expected an object");
    const json& jd = field(doc, "dims", "state document");
    if (!jd.is_array() || jd.empty() || jd.size() > 2)
        throw ParseError("state document: 'dims' must hold one or two factors");
    std::vector<int> dims;
    for (const json& x : jd) {
        if (!x.is_number_integer() || x.get<int>() < 1)
            throw ParseError("state document: factor dimensions must be positive integers");
        dims.push_back(x.get<int>());
    }
    int total = 1;
    for (int x : dims) total *= x;

    const json& jm = field(doc, "matrix", "state document");
    if (!jm.is_array() || jm.size() != static_cast<std::size_t>(total))
        throw ParseError("state document: 'matrix' must have " + std::to_string(total) +
                         " rows");
    CMatrix m(total, total);
    for (int r = 0; r < total; ++r) {
        const json& row = jm[r];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(total))
            throw ParseError("state document, row #" + std::to_string(r) + ": expected " +
                             std::to_string(total) + " entries");
        for (int c = 0; c < total; ++c)
            m(r, c) = parse_complex(row[c], "state document, row #" + std::to_string(r));
    }
    try {
        return make_density_matrix(std::move(m), std::move(dims));
    } catch (const std::exception& err) {
        throw ParseError(std::string("state document: ") + err.what());
    }
}

std::string serialize_state(const DensityMatrix& rho) {
    json doc;
    doc["dims"] = rho.dims;
    json matrix = json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < rho.dim(); ++c) row.push_back(dump_complex(rho.mat(r, c)));
        matrix.push_back(std::move(row));
    }
    doc["matrix"] = std::move(matrix);
    return doc.dump(2) + "\n";
}

Ensemble load_ensemble(const std::string& path) { return parse_ensemble(read_text_file(path)); }

DensityMatrix load_state(const std::string& path) { return parse_state(read_text_file(path)); }

std::string serialize_report(const BoundReport& rep) {
    json doc;
    doc["n"] = rep.n;
    doc["d"] = rep.d;
    doc["ordering"] = rep.ordering == BOrdering::ascending ? "ascending" : "descending";
    doc["lhs"] = json{{"info_sum", rep.lhs_info_sum},
                      {"entropy_sum", rep.lhs_entropy_sum},
                      {"outcome_entropy_sum", rep.lhs_outcome_entropy_sum},
                      {"infos", rep.infos},
                      {"conditional_entropies", rep.cond_entropies}};
    doc["memory"] = json{{"H_A", rep.memory.h_a},
                         {"H_B", rep.memory.h_b},
                         {"H_A_given_B", rep.memory.h_a_given_b},
                         {"memory_info", rep.memory.memory_info}};
    json bounds = json::array();
    for (const BoundEntry& b : rep.bounds) {
        const char* kind = b.kind == BoundKind::info_upper     ? "info_upper"
                           : b.kind == BoundKind::eur_lower    ? "eur_lower"
                                                               : "classical_lower";
        bounds.push_back(json{{"name", b.name},
                              {"kind", kind},
                              {"value", b.value},
                              {"slack", b.slack},
                              {"heuristic", b.heuristic}});
    }
    doc["bounds"] = std::move(bounds);
    if (!rep.ropt_family.empty()) doc["ropt_family"] = rep.ropt_family;
    doc["worst_slack"] = rep.worst_slack();
    return doc.dump(2) + "\n";
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

namespace {

std::string join_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

}  // namespace

std::string to_csv(const SweepTable& t) {
    std::string out = join_row(t.columns);
    for (const auto& row : t.rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double x : row) cells.push_back(format_double(x));
        out += join_row(cells);
    }
    return out;
}

std::string to_csv(const CompareTable& t) {
    std::vector<std::string> header = t.columns;
    header.push_back("winner");
    std::string out = join_row(header);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::vector<std::string> cells;
        cells.reserve(t.rows[r].size() + 1);
        for (double x : t.rows[r]) cells.push_back(format_double(x));
        cells.push_back(t.winners[r]);
        out += join_row(cells);
    }
    return out;
}

std::string verify_summary(const std::vector<VerifyCheck>& checks) {
    std::ostringstream out;
    for (const VerifyCheck& c : checks) {
        out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (trials=" << c.trials
            << ", max violation=" << format_double(c.max_violation) << ")\n";
    }
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << content;
}

}  // namespace exbounds
