#include "vosa/json_io.hpp"

#include "vosa/fermion.hpp"
#include "vosa/lattice.hpp"
#include "vosa/ns.hpp"
#include "vosa/structure.hpp"

#include <set>

namespace vosa {

json rational_json(const Rational& r) { return rational_str(r); }

json scalar_json(const Scalar& s) {
    if (s.im == 0) return rational_str(s.re);
    if (s.re == 0) return rational_str(s.im) + "*i";
    return rational_str(s.re) + "+" + rational_str(s.im) + "*i";
}

json weight_json(const Weight& w) {
    return (w.twice % 2 == 0) ? std::to_string(w.twice / 2)
                              : std::to_string(w.twice) + "/2";
}

json mat_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(scalar_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Rational rational_from_json(const json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        throw SpecError(where + ": " + e.what());
    }
    throw SpecError(where + ": expected an integer or a \"p/q\" string");
}

Weight weight_from_json(const json& j, const std::string& where) {
    Rational r = rational_from_json(j, where);
    try {
        return Weight::of(r);
    } catch (const std::exception& e) {
        throw SpecError(where + ": " + e.what());
    }
}

Mat rational_mat_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw SpecError(where + ": expected a nonempty matrix");
    int rows = static_cast<int>(j.size());
    int cols = j[0].is_array() ? static_cast<int>(j[0].size()) : -1;
    if (cols <= 0) throw SpecError(where + ": expected a matrix of rows");
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[static_cast<size_t>(i)].is_array() ||
            static_cast<int>(j[static_cast<size_t>(i)].size()) != cols)
            throw SpecError(where + ": ragged row " + std::to_string(i));
        for (int k = 0; k < cols; ++k)
            m.at(i, k) = Scalar(rational_from_json(
                j[static_cast<size_t>(i)][static_cast<size_t>(k)],
                where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
    }
    return m;
}

JobSpec parse_jobspec(const json& j) {
    if (!j.is_object()) throw SpecError("job spec must be a JSON object");
    JobSpec s;
    if (!j.contains("construction") || !j["construction"].is_string())
        throw SpecError("missing string field \"construction\"");
    s.construction = j["construction"].get<std::string>();
    static const std::set<std::string> kinds{"ns", "fermion", "lattice", "direct_sum", "tensor"};
    if (!kinds.count(s.construction))
        throw SpecError("unknown construction \"" + s.construction + "\"");
    if (!j.contains("cutoff")) throw SpecError("missing field \"cutoff\"");
    s.cutoff = weight_from_json(j["cutoff"], "cutoff");
    if (s.cutoff.twice <= 0) throw SpecError("cutoff must be positive");
    s.parameters = j.value("parameters", json::object());
    if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty())
        throw SpecError("missing nonempty array field \"checks\"");
    static const std::set<std::string> known{"gram",      "psd",        "invariance",
                                             "commutator", "decompose", "weight_one",
                                             "conformal",  "characters"};
    for (const auto& c : j["checks"]) {
        if (!c.is_string() || !known.count(c.get<std::string>()))
            throw SpecError("unknown check " + c.dump());
        s.checks.push_back(c.get<std::string>());
    }
    if (j.contains("conformal")) {
        const json& cc = j["conformal"];
        if (!cc.is_object() || !cc.contains("kind") || !cc["kind"].is_string())
            throw SpecError("\"conformal\" must be an object with a \"kind\"");
        s.conformal_kind = cc["kind"].get<std::string>();
        if (s.conformal_kind == "sugawara") {
            if (!cc.contains("level") || !cc.contains("dual_coxeter"))
                throw SpecError("sugawara comparison needs \"level\" and \"dual_coxeter\"");
            s.level = rational_from_json(cc["level"], "conformal.level");
            s.dual_coxeter = rational_from_json(cc["dual_coxeter"], "conformal.dual_coxeter");
        } else if (s.conformal_kind != "heisenberg") {
            throw SpecError("conformal kind must be \"sugawara\" or \"heisenberg\"");
        }
    }
    return s;
}

namespace {

IntegralLattice lattice_from_params(const json& p) {
    if (!p.contains("gram")) throw SpecError("lattice parameters need a \"gram\" matrix");
    Mat g = rational_mat_from_json(p["gram"], "parameters.gram");
    if (g.rows != g.cols) throw SpecError("parameters.gram: matrix must be square");
    IntegralLattice L;
    L.rank = g.rows;
    L.gram.assign(static_cast<size_t>(g.rows), std::vector<long>(static_cast<size_t>(g.cols)));
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) {
            const Scalar& s = g.at(i, j);
            if (s.im != 0 || s.re.get_den() != 1)
                throw SpecError("parameters.gram[" + std::to_string(i) + "][" + std::to_string(j) +
                                "]: entries must be integers");
            L.gram[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                static_cast<long>(s.re.get_num().get_si());
            if (g.at(i, j) != g.at(j, i))
                throw SpecError("parameters.gram[" + std::to_string(i) + "][" + std::to_string(j) +
                                "]: matrix is not symmetric");
        }
    try {
        L.validate();
    } catch (const std::exception& e) {
        throw SpecError(std::string("parameters.gram: ") + e.what());
    }
    return L;
}

} // namespace

BuiltInstance build_instance(const std::string& construction, const json& parameters, Weight cutoff) {
    BuiltInstance out;
    if (construction == "ns") {
        if (!parameters.contains("c")) throw SpecError("ns parameters need \"c\"");
        Rational c = rational_from_json(parameters["c"], "parameters.c");
        Rational h = parameters.contains("h")
                         ? rational_from_json(parameters["h"], "parameters.h")
                         : Rational(0);
        if (h != 0)
            throw SpecError("ns with h != 0 is a module scan; only gram/psd/characters apply");
        out.owned.push_back(std::make_unique<TruncatedVOSA>(build_ns_vosa(c, cutoff.twice)));
    } else if (construction == "fermion") {
        if (!parameters.contains("n") || !parameters["n"].is_number_integer())
            throw SpecError("fermion parameters need an integer \"n\"");
        int n = parameters["n"].get<int>();
        if (n <= 0) throw SpecError("parameters.n must be positive");
        FermionSpace fs = FermionSpace::standard(n);
        if (parameters.contains("form")) {
            fs.form = rational_mat_from_json(parameters["form"], "parameters.form");
            if (fs.form.rows != n || fs.form.cols != n)
                throw SpecError("parameters.form must be n x n");
            if (!fs.form.is_hermitian()) throw SpecError("parameters.form must be symmetric");
        }
        out.owned.push_back(std::make_unique<TruncatedVOSA>(build_fermion_vosa(fs, cutoff.twice)));
    } else if (construction == "lattice") {
        IntegralLattice L = lattice_from_params(parameters);
        std::vector<std::vector<long>> extra;
        if (parameters.contains("extra_points"))
            for (const auto& pt : parameters["extra_points"]) {
                std::vector<long> v;
                for (const auto& x : pt) v.push_back(x.get<long>());
                if (static_cast<int>(v.size()) != L.rank)
                    throw SpecError("parameters.extra_points: wrong coordinate count");
                extra.push_back(std::move(v));
            }
        out.owned.push_back(
            std::make_unique<TruncatedVOSA>(build_lattice_vosa(L, cutoff.twice, extra)));
    } else if (construction == "direct_sum") {
        if (!parameters.contains("parts") || !parameters["parts"].is_array() ||
            parameters["parts"].empty())
            throw SpecError("direct_sum parameters need a nonempty \"parts\" array");
        std::vector<const TruncatedVOSA*> parts;
        for (const auto& pj : parameters["parts"]) {
            if (!pj.is_object() || !pj.contains("construction") || !pj["construction"].is_string())
                throw SpecError("each part needs a \"construction\"");
            BuiltInstance part = build_instance(pj["construction"].get<std::string>(),
                                                pj.value("parameters", json::object()), cutoff);
            for (auto& p : part.owned) out.owned.push_back(std::move(p));
            parts.push_back(out.owned.back().get());
        }
        out.owned.push_back(std::make_unique<TruncatedVOSA>(direct_sum(parts)));
    } else if (construction == "tensor") {
        if (!parameters.contains("left") || !parameters.contains("right"))
            throw SpecError("tensor parameters need \"left\" and \"right\"");
        auto build_side = [&](const json& pj, const char* name) {
            if (!pj.is_object() || !pj.contains("construction") || !pj["construction"].is_string())
                throw SpecError(std::string(name) + " needs a \"construction\"");
            return build_instance(pj["construction"].get<std::string>(),
                                  pj.value("parameters", json::object()), cutoff);
        };
        BuiltInstance l = build_side(parameters["left"], "left");
        BuiltInstance r = build_side(parameters["right"], "right");
        const TruncatedVOSA* lp = l.v;
        const TruncatedVOSA* rp = r.v;
        for (auto& p : l.owned) out.owned.push_back(std::move(p));
        for (auto& p : r.owned) out.owned.push_back(std::move(p));
        out.owned.push_back(std::make_unique<TruncatedVOSA>(tensor_product(*lp, *rp)));
    } else {
        throw SpecError("unknown construction \"" + construction + "\"");
    }
    out.v = out.owned.back().get();
    return out;
}

} // namespace vosa
