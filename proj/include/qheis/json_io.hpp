#pragma once

// JSON forms of the model types.  Readers report the offending location as a
// JSON pointer.

#include "qheis/adjoint_domain.hpp"
#include "qheis/extensions.hpp"
#include "qheis/repr.hpp"
#include "qheis/report.hpp"
#include "qheis/schrodinger.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qheis {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string pointer, const std::string& what)
        : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

namespace jsonio {

inline std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
inline std::string child(const std::string& ptr, std::size_t k) { return ptr + "/" + std::to_string(k); }

inline const json& require(const json& j, const std::string& key, const std::string& ptr) {
    if (!j.is_object()) throw ConfigError(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(child(ptr, key), "missing required member");
    return *it;
}

inline double number(const json& j, const std::string& ptr) {
    if (!j.is_number()) throw ConfigError(ptr, "expected a number");
    return j.get<double>();
}

inline std::int64_t integer(const json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
    return j.get<std::int64_t>();
}

inline const json& array(const json& j, const std::string& ptr) {
    if (!j.is_array()) throw ConfigError(ptr, "expected an array");
    return j;
}

// ---- complex numbers and matrices ----

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// {"re":..,"im":..}, or a bare number for a real value.
inline cplx complex_from(const json& j, const std::string& ptr) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_object()) throw ConfigError(ptr, "expected a complex number {\"re\":..,\"im\":..}");
    const double re = j.contains("re") ? number(j["re"], child(ptr, "re")) : 0.0;
    const double im = j.contains("im") ? number(j["im"], child(ptr, "im")) : 0.0;
    return {re, im};
}

inline json to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
    return out;
}

inline Eigen::MatrixXcd matrix_from(const json& j, const std::string& ptr) {
    array(j, ptr);
    if (j.empty()) throw ConfigError(ptr, "matrix has no rows");
    const std::size_t cols = array(j[0], child(ptr, 0)).size();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string rp = child(ptr, r);
        if (array(j[r], rp).size() != cols) throw ConfigError(rp, "ragged matrix row");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from(j[r][c], child(rp, c));
    }
    return m;
}

inline Eigen::VectorXcd vector_from(const json& j, const std::string& ptr) {
    array(j, ptr);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = complex_from(j[k], child(ptr, k));
    return v;
}

// ---- model types ----

inline json to_json(const AtomFamily& f) {
    auto atoms = [](const std::vector<Atom>& as) {
        json out = json::array();
        for (const auto& a : as) out.push_back({{"a", a.position}, {"w", a.weight}});
        return out;
    };
    return {{"q", f.q()}, {"plus", atoms(f.plus())}, {"minus", atoms(f.minus())}};
}

inline AtomFamily family_from(const json& j, const std::string& ptr) {
    const double q = number(require(j, "q", ptr), child(ptr, "q"));
    auto atoms = [&](const char* key) {
        const std::string ap = child(ptr, key);
        const json& arr = array(require(j, key, ptr), ap);
        std::vector<Atom> out;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string ep = child(ap, k);
            const double a = number(require(arr[k], "a", ep), child(ep, "a"));
            const double w = arr[k].contains("w") ? number(arr[k]["w"], child(ep, "w")) : 1.0;
            if (!(a >= q && a < 1.0)) throw ConfigError(child(ep, "a"), "atom position must lie in [q, 1)");
            if (!(w > 0.0)) throw ConfigError(child(ep, "w"), "atom weight must be positive");
            out.push_back({a, w});
        }
        return out;
    };
    if (!(q > 0.0 && q < 1.0)) throw ConfigError(child(ptr, "q"), "q must lie in (0, 1)");
    std::vector<Atom> plus = atoms("plus"), minus = atoms("minus");
    try {
        return AtomFamily(q, std::move(plus), std::move(minus));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ptr, e.what());
    }
}

inline json to_json(const Window& w) { return {{"n_min", w.n_min}, {"n_max", w.n_max}}; }

inline Window window_from(const json& j, const std::string& ptr) {
    const auto lo = integer(require(j, "n_min", ptr), child(ptr, "n_min"));
    const auto hi = integer(require(j, "n_max", ptr), child(ptr, "n_max"));
    if (lo >= hi) throw ConfigError(ptr, "window needs n_min < n_max");
    if (hi - lo > 100000) throw ConfigError(ptr, "window too long");
    return {static_cast<int>(lo), static_cast<int>(hi)};
}

inline json to_json(const BoundaryMap& b) { return {{"Vprime", to_json(b.Vp())}, {"Wprime", to_json(b.Wp())}}; }

inline json phases_json(double phi, double psi) { return {{"phases", {{"phi", phi}, {"psi", psi}}}}; }

inline BoundaryMap bmap_from(const json& j, const std::string& ptr, double tol = 1e-12) {
    if (!j.is_object()) throw ConfigError(ptr, "expected an object");
    if (j.contains("phases")) {
        const std::string pp = child(ptr, "phases");
        const json& ph = j["phases"];
        return BoundaryMap::from_phases(number(require(ph, "phi", pp), child(pp, "phi")),
                                        number(require(ph, "psi", pp), child(pp, "psi")));
    }
    const Eigen::MatrixXcd v = matrix_from(require(j, "Vprime", ptr), child(ptr, "Vprime"));
    const Eigen::MatrixXcd w = matrix_from(require(j, "Wprime", ptr), child(ptr, "Wprime"));
    try {
        return BoundaryMap::from_matrices(v, w, tol);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ptr, e.what());
    }
}

inline json to_json(const TailVector& tv) {
    json finite = json::array();
    const LatticeVector& f = tv.finite();
    for (std::size_t k = 0; k < f.space().size(); ++k) {
        if (f[k] == cplx{}) continue;
        const LatticeIndex idx = f.space().index_at(k);
        finite.push_back({{"sign", sign_str(idx.sign)}, {"j", idx.j}, {"n", idx.n}, {"re", f[k].real()}, {"im", f[k].imag()}});
    }
    json out{{"finite", finite}, {"even_tail", to_json(tv.even_tail())}, {"odd_tail", to_json(tv.odd_tail())}};
    if (tv.tail_start() != 0) out["tail_start"] = tv.tail_start();
    return out;
}

inline TailVector tail_vector_from(const json& j, const SpacePtr& space, const std::string& ptr) {
    TailVector tv(space);
    LatticeVector f(space);
    const std::string fp = child(ptr, "finite");
    const json& entries = array(require(j, "finite", ptr), fp);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string ep = child(fp, k);
        const json& e = entries[k];
        const json& s = require(e, "sign", ep);
        if (!s.is_string() || (s != "+" && s != "-")) throw ConfigError(child(ep, "sign"), "sign must be \"+\" or \"-\"");
        const auto jj = integer(require(e, "j", ep), child(ep, "j"));
        const auto n = integer(require(e, "n", ep), child(ep, "n"));
        LatticeIndex idx{s == "+" ? Sign::plus : Sign::minus, static_cast<std::size_t>(jj), static_cast<int>(n)};
        try {
            f[space->offset(idx)] += complex_from(e, ep);
        } catch (const std::out_of_range& err) {
            throw ConfigError(ep, err.what());
        }
    }
    const Eigen::VectorXcd even = vector_from(require(j, "even_tail", ptr), child(ptr, "even_tail"));
    const Eigen::VectorXcd odd = vector_from(require(j, "odd_tail", ptr), child(ptr, "odd_tail"));
    const int start = j.contains("tail_start") ? static_cast<int>(integer(j["tail_start"], child(ptr, "tail_start"))) : 0;
    try {
        return TailVector(f, even, odd, start);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ptr, e.what());
    }
}

inline json to_json(const schrodinger::GaussianElement& g) {
    json terms = json::array();
    for (const auto& t : g.terms()) terms.push_back({{"gamma", to_json(t.gamma)}, {"c", to_json(t.c)}});
    return {{"terms", terms}};
}

inline schrodinger::GaussianElement gaussian_from(const json& j, const std::string& ptr) {
    const std::string tp = child(ptr, "terms");
    const json& terms = array(require(j, "terms", ptr), tp);
    schrodinger::GaussianElement g;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string ep = child(tp, k);
        g.add(complex_from(require(terms[k], "gamma", ep), child(ep, "gamma")),
              complex_from(require(terms[k], "c", ep), child(ep, "c")));
    }
    return g;
}

inline json to_json(const CheckReport& rep) {
    json out = json::array();
    for (const auto& e : rep.entries) {
        json entry{{"name", e.name}, {"passed", e.passed}, {"value", e.value}, {"tol", e.tol}};
        if (!e.detail.empty()) entry["detail"] = e.detail;
        out.push_back(std::move(entry));
    }
    return out;
}

inline json to_json(const OperatorPair& a) { return {{"plus", to_json(a.plus)}, {"minus", to_json(a.minus)}}; }

}  // namespace jsonio

}  // namespace qheis
