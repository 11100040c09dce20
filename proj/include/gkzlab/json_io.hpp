#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "gkzlab/arrangement.hpp"
#include "gkzlab/gkz.hpp"
#include "gkzlab/laurent.hpp"
#include "gkzlab/monodromy.hpp"
#include "gkzlab/perverse.hpp"
#include "gkzlab/windows.hpp"

namespace gkzlab::io {

using json = nlohmann::ordered_json;

// --- primitives -------------------------------------------------------------

inline json rat_json(const Rat& q) { return rat_to_string(q); }

inline Rat rat_from(const json& j, const std::string& what) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    throw SchemaError(what + ": expected an exact rational as \"p/q\" or integer");
}

inline json cplx_json(Cplx z) { return json::array({z.real(), z.imag()}); }

inline Cplx cplx_from(const json& j, const std::string& what) {
    if (j.is_number()) return Cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Cplx(j[0].get<double>(), j[1].get<double>());
    throw SchemaError(what + ": expected a complex number as [re, im]");
}

inline CRat crat_from(const json& j, const std::string& what) {
    if (j.is_string() || j.is_number_integer()) return CRat(rat_from(j, what));
    if (j.is_array() && j.size() == 2)
        return CRat(rat_from(j[0], what), rat_from(j[1], what));
    throw SchemaError(what + ": expected an exact complex rational (\"p/q\" or [re, im])");
}

inline json int_vector_json(const std::vector<Int>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(x.template convert_to<long long>());
    return out;
}

inline json rat_vector_json(const std::vector<Rat>& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(rat_json(q));
    return out;
}

inline IntMat int_matrix_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a nonempty matrix");
    std::size_t cols = 0;
    std::vector<std::vector<Int>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw SchemaError(what + ": expected rows of integers");
        std::vector<Int> r;
        for (const auto& x : row) {
            if (!x.is_number_integer()) throw SchemaError(what + ": entries must be integers");
            r.push_back(Int(x.get<long long>()));
        }
        if (cols == 0) cols = r.size();
        if (r.size() != cols || cols == 0)
            throw SchemaError(what + ": rows must be nonempty and of equal length");
        rows.push_back(std::move(r));
    }
    return from_rows(rows);
}

inline json int_matrix_json(const IntMat& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(int_vector_json(m.row(i)));
    return out;
}

inline json cmat_json(const CMat& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(cplx_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

inline CMat cmat_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a complex matrix");
    std::vector<std::vector<Cplx>> rows;
    std::size_t cols = 0;
    for (const auto& row : j) {
        if (!row.is_array()) throw SchemaError(what + ": expected matrix rows");
        std::vector<Cplx> r;
        for (const auto& x : row) r.push_back(cplx_from(x, what));
        if (cols == 0) cols = r.size();
        if (r.size() != cols) throw SchemaError(what + ": ragged matrix");
        rows.push_back(std::move(r));
    }
    CMat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
}

// --- arrangement ------------------------------------------------------------

inline json hyperplane_json(const Hyperplane& h) {
    return json{{"normal", int_vector_json(h.normal)}, {"offset", rat_json(h.offset)}};
}

inline json box_json(const Box& b) {
    return json{{"lo", rat_vector_json(b.lo)}, {"hi", rat_vector_json(b.hi)}};
}

inline Box box_from(const json& j, std::size_t n) {
    if (!j.is_object() || !j.contains("lo") || !j.contains("hi"))
        throw SchemaError("box: expected {\"lo\": [...], \"hi\": [...]}");
    std::vector<Rat> lo, hi;
    for (const auto& x : j.at("lo")) lo.push_back(rat_from(x, "box.lo"));
    for (const auto& x : j.at("hi")) hi.push_back(rat_from(x, "box.hi"));
    if (lo.size() != n || hi.size() != n) throw SchemaError("box: dimension mismatch");
    return Box::make(std::move(lo), std::move(hi));
}

inline json face_json(const Face& f) {
    return json{{"signs", f.sign_string()},
                {"dim", f.dim},
                {"witness", rat_vector_json(f.witness)}};
}

inline json poset_json(const FacePoset& p) {
    json faces = json::array();
    for (const auto& f : p.faces()) faces.push_back(face_json(f));
    return json{{"faces", faces}};
}

// --- windows / laurent -------------------------------------------------------

inline json window_json(const WindowSet& w) {
    json chars = json::array();
    for (const auto& mu : w.characters) chars.push_back(int_vector_json(mu));
    return json{{"nu", rat_vector_json(w.nu)}, {"characters", chars}};
}

inline json laurent_poly_json(const LaurentPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json t;
        t["exp"] = e;
        t["re"] = c.real();
        t["im"] = c.imag();
        terms.push_back(t);
    }
    return terms;
}

inline json laurent_matrix_json(const LaurentMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(laurent_poly_json(m(i, j)));
        rows.push_back(row);
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

// --- gkz ----------------------------------------------------------------------

template <class K>
json diff_op_json(const DiffOp<K>& op) {
    json terms = json::array();
    for (const auto& t : op.terms) {
        Cplx c = to_complex(t.coeff);
        json e;
        e["x"] = t.xexp;
        e["d"] = t.dexp;
        e["re"] = c.real();
        e["im"] = c.imag();
        terms.push_back(e);
    }
    return terms;
}

template <class K>
json series_json(const GammaSeries<K>& s) {
    json gamma = json::array();
    for (const auto& g : s.gamma) gamma.push_back(cplx_json(to_complex(g)));
    json coeffs = json::array();
    for (const auto& [l, c] : s.coeff) {
        Cplx z = to_complex(c);
        json e;
        e["l"] = l;
        e["re"] = z.real();
        e["im"] = z.imag();
        coeffs.push_back(e);
    }
    return json{{"gamma", gamma}, {"truncation", s.N}, {"base", s.base}, {"coefficients", coeffs}};
}

template <class K>
json residual_json(const ResidualSeries<K>& r) {
    return json{{"interior_max", r.interior_max},
                {"boundary_max", r.boundary_max},
                {"interior_exactly_zero", r.interior_zero}};
}

// --- monodromy ----------------------------------------------------------------

inline json rep_json(const MonodromyRep& rep) {
    json gens = json::array();
    for (std::size_t i = 0; i < rep.generators.size(); ++i)
        gens.push_back(json{{"label", rep.labels[i]}, {"matrix", cmat_json(rep.generators[i])}});
    return json{{"base", cplx_json(rep.base)},
                {"generators", gens},
                {"product_defect", rep.product_defect()}};
}

// --- perverse -------------------------------------------------------------------

inline json validation_json(const FacePoset& p, const ValidationReport& rep) {
    json violations = json::array();
    for (const auto& v : rep.violations) {
        json faces = json::array();
        for (auto f : v.faces) faces.push_back(p.face(f).sign_string());
        violations.push_back(json{{"axiom", v.axiom}, {"faces", faces}, {"defect", v.defect}});
    }
    json unchecked = json::array();
    for (const auto& t : rep.unchecked)
        unchecked.push_back(json::array({p.face(t[0]).sign_string(), p.face(t[1]).sign_string(),
                                         p.face(t[2]).sign_string()}));
    return json{{"pass", rep.pass}, {"violations", violations}, {"unchecked", unchecked}};
}

/// Datum JSON: {"dims": {"<signs>": k, ...}, "gamma": [{"from", "to", "matrix"}],
/// "delta": [{"from", "to", "matrix"}]}; maps for every comparable pair.
inline PerverseDatum datum_from(const json& j, const FacePoset& p) {
    if (!j.is_object()) throw SchemaError("datum: expected an object");
    for (const auto& [key, val] : j.items())
        if (key != "dims" && key != "gamma" && key != "delta")
            throw SchemaError("datum: unknown key '" + key + "'");
    PerverseDatum d;
    d.dims.assign(p.size(), 0);
    if (!j.contains("dims")) throw SchemaError("datum: missing dims");
    for (const auto& [signs, dim] : j.at("dims").items()) {
        auto idx = p.index_of(signs);
        if (!idx) throw SchemaError("datum: unknown face '" + signs + "'");
        d.dims[*idx] = dim.get<std::size_t>();
    }
    auto load = [&](const char* key, auto& target) {
        if (!j.contains(key)) throw SchemaError(std::string("datum: missing ") + key);
        for (const auto& entry : j.at(key)) {
            auto from = p.index_of(entry.at("from").get<std::string>());
            auto to = p.index_of(entry.at("to").get<std::string>());
            if (!from || !to) throw SchemaError("datum: map references an unknown face");
            target[{*from, *to}] = cmat_from(entry.at("matrix"), "datum matrix");
        }
    };
    load("gamma", d.gamma);
    load("delta", d.delta);
    return d;
}

// --- hashing --------------------------------------------------------------------

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gkzlab::io
