#include "vosa/json_io.hpp"
#include "vosa/linalg.hpp"
#include "vosa/ns.hpp"
#include "vosa/structure.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

using namespace vosa;

namespace {

// exit codes: 0 pass, 1 check failure, 2 bad spec, 3 cutoff exceeded
constexpr int kPass = 0, kCheckFail = 1, kBadSpec = 2, kCutoff = 3;

json psd_json(const PsdVerdict& v) {
    json out;
    switch (v.kind) {
        case PsdVerdict::PositiveDefinite: out["kind"] = "positive_definite"; break;
        case PsdVerdict::PositiveSemidefinite: out["kind"] = "positive_semidefinite"; break;
        case PsdVerdict::Indefinite: out["kind"] = "indefinite"; break;
    }
    out["rank"] = v.rank;
    if (v.kind == PsdVerdict::Indefinite) {
        json w = json::array();
        for (const auto& s : v.witness) w.push_back(scalar_json(s));
        out["witness"] = std::move(w);
        out["witness_value"] = scalar_json(v.witness_value);
    }
    return out;
}

json characters_json(const std::map<long, long>& table) {
    json out = json::array();
    for (const auto& [w2, d] : table)
        out.push_back({{"weight", weight_json(Weight(w2))}, {"dim", d}});
    return out;
}

std::string characters_csv(const std::map<long, long>& table) {
    std::ostringstream os;
    os << "weight,dim\n";
    for (const auto& [w2, d] : table) os << Weight(w2).str() << "," << d << "\n";
    return os.str();
}

// random in-range commutator tuples; resamples when an intermediate weight
// exceeds the truncation
bool run_commutator_samples(const TruncatedVOSA& v, int count, json* out) {
    std::mt19937_64 rng(0x5eed);
    int total = v.space.total_dim();
    std::uniform_int_distribution<int> id_pick(0, total - 1);
    std::uniform_int_distribution<long> mode_pick(-2, 3);
    bool all = true;
    json cases = json::array();
    int done = 0, attempts = 0;
    while (done < count && attempts < count * 200) {
        ++attempts;
        int ui = id_pick(rng), vi = id_pick(rng), wi = id_pick(rng);
        long m = mode_pick(rng), n = mode_pick(rng);
        try {
            auto r = v.commutator_check(Vec::unit(ui), Vec::unit(vi), m, n, Vec::unit(wi));
            ++done;
            if (!r.pass) {
                all = false;
                cases.push_back({{"u", v.space.label[static_cast<size_t>(ui)]},
                                 {"v", v.space.label[static_cast<size_t>(vi)]},
                                 {"w", v.space.label[static_cast<size_t>(wi)]},
                                 {"m", m},
                                 {"n", n}});
            }
        } catch (const CutoffExceeded&) {
            // out of range, try another tuple
        }
    }
    (*out)["samples"] = done;
    (*out)["failures"] = std::move(cases);
    return all && done == count;
}

json invariance_json(const InvarianceReport& r) {
    json fails = json::array();
    for (const auto& f : r.failures)
        fails.push_back({{"generator", f.generator},
                         {"mode", f.mode},
                         {"weight_u", weight_json(Weight(f.wu2))},
                         {"weight_v", weight_json(Weight(f.wv2))},
                         {"u_index", f.u_index},
                         {"v_index", f.v_index},
                         {"lhs", scalar_json(f.lhs)},
                         {"rhs", scalar_json(f.rhs)}});
    return fails;
}

struct RunResult {
    json report;
    int code = kPass;
    std::string csv; // character table when --csv is set
};

// the NS Verma-module scan: exact Shapovalov Grams at (c, h)
RunResult run_ns_module_scan(const JobSpec& spec) {
    RunResult rr;
    Rational c = rational_from_json(spec.parameters.at("c"), "parameters.c");
    Rational h = rational_from_json(spec.parameters.at("h"), "parameters.h");
    NSParams p{c, h};
    rr.report["construction"] = "ns";
    rr.report["c"] = rational_json(c);
    rr.report["h"] = rational_json(h);
    bool pass = true;
    for (const auto& chk : spec.checks) {
        json& r = rr.report["checks"][chk];
        if (chk == "gram") {
            for (long w2 = 0; w2 <= spec.cutoff.twice; ++w2)
                r["weights"][weight_json(Weight(w2)).get<std::string>()] =
                    mat_json(shapovalov_gram(p, w2));
            r["pass"] = true;
        } else if (chk == "psd") {
            bool ok = true;
            for (long w2 = 0; w2 <= spec.cutoff.twice; ++w2) {
                auto v = psd_verdict(shapovalov_gram(p, w2));
                r["weights"][weight_json(Weight(w2)).get<std::string>()] = psd_json(v);
                if (v.kind == PsdVerdict::Indefinite) ok = false;
            }
            r["pass"] = ok;
            pass = pass && ok;
        } else if (chk == "characters") {
            std::map<long, long> table;
            for (long w2 = 0; w2 <= spec.cutoff.twice; ++w2)
                table[w2] = static_cast<long>(verma_basis(w2).size());
            r["table"] = characters_json(table);
            r["pass"] = true;
            rr.csv = characters_csv(table);
        } else {
            throw SpecError("check \"" + chk + "\" needs h = 0 (vacuum module)");
        }
    }
    rr.report["pass"] = pass;
    rr.code = pass ? kPass : kCheckFail;
    return rr;
}

RunResult run_job(const JobSpec& spec, bool corrupt_form) {
    if (spec.construction == "ns" && spec.parameters.contains("h") &&
        rational_from_json(spec.parameters["h"], "parameters.h") != 0)
        return run_ns_module_scan(spec);

    RunResult rr;
    BuiltInstance built = build_instance(spec.construction, spec.parameters, spec.cutoff);
    TruncatedVOSA& v = *built.v;
    rr.report["construction"] = spec.construction;
    rr.report["central_charge"] = rational_json(v.central_charge);
    rr.report["cutoff"] = weight_json(spec.cutoff);

    if (corrupt_form) {
        for (auto& [w2, g] : v.gram)
            if (w2 > 0 && g.rows > 0) {
                g.at(0, 0) += Scalar(1);
                rr.report["corrupted_weight"] = weight_json(Weight(w2));
                break;
            }
    }

    bool pass = true;
    for (const auto& chk : spec.checks) {
        json& r = rr.report["checks"][chk];
        if (chk == "gram") {
            bool ok = true;
            for (const auto& [w2, g] : v.gram) {
                std::string key = weight_json(Weight(w2)).get<std::string>();
                r["weights"][key]["matrix"] = mat_json(g);
                bool herm = g.is_hermitian();
                r["weights"][key]["hermitian"] = herm;
                ok = ok && herm;
            }
            r["pass"] = ok;
            pass = pass && ok;
        } else if (chk == "psd") {
            bool ok = true;
            for (const auto& [w2, g] : v.gram) {
                auto verdict = psd_verdict(g);
                r["weights"][weight_json(Weight(w2)).get<std::string>()] = psd_json(verdict);
                if (verdict.kind == PsdVerdict::Indefinite) ok = false;
            }
            r["pass"] = ok;
            pass = pass && ok;
        } else if (chk == "invariance") {
            bool ok = true;
            for (size_t g = 0; g < v.gens.size(); ++g) {
                auto rep = v.invariance_check(static_cast<int>(g), v.space.cutoff);
                r["generators"][v.gens[g].name]["pass"] = rep.pass;
                if (!rep.pass) {
                    r["generators"][v.gens[g].name]["failures"] = invariance_json(rep);
                    ok = false;
                }
            }
            r["pass"] = ok;
            pass = pass && ok;
        } else if (chk == "commutator") {
            bool ok = run_commutator_samples(v, 25, &r);
            r["pass"] = ok;
            pass = pass && ok;
        } else if (chk == "decompose") {
            auto rep = decompose(v);
            bool ok = rep.idempotents_sum_to_vacuum && rep.idempotents_orthogonal;
            r["summand_count"] = rep.summands.size();
            r["idempotents_sum_to_vacuum"] = rep.idempotents_sum_to_vacuum;
            r["idempotents_orthogonal"] = rep.idempotents_orthogonal;
            json sums = json::array();
            for (const auto& s : rep.summands) {
                json sj;
                json e = json::object();
                for (const auto& [id, sc] : s.idempotent.c)
                    e[v.space.label[static_cast<size_t>(id)]] = scalar_json(sc);
                sj["idempotent"] = std::move(e);
                json dims = json::array();
                for (const auto& [w2, d] : s.dims)
                    dims.push_back({{"weight", weight_json(Weight(w2))}, {"dim", d}});
                sj["dims"] = std::move(dims);
                sj["vacuum_dim_one"] = s.vacuum_dim_one;
                sj["l1_kills_weight_one"] = s.l1_kills_weight_one;
                sj["l_minus1_kills_vacuum"] = s.l_minus1_kills_vacuum;
                sj["no_negative_weights"] = s.no_negative_weights;
                ok = ok && s.vacuum_dim_one && s.l1_kills_weight_one && s.no_negative_weights;
                sums.push_back(std::move(sj));
            }
            r["summands"] = std::move(sums);
            r["pass"] = ok;
            pass = pass && ok;
        } else if (chk == "weight_one") {
            auto W = weight_one_algebra(v);
            r["dim"] = W.d;
            bool ok = true;
            if (W.d > 0) {
                r["form"] = mat_json(W.form);
                r["killing"] = mat_json(W.killing);
                r["killing_rank"] = W.killing_rank;
                r["form_radical_dim"] = W.form_radical_dim;
                r["antisymmetric"] = W.antisymmetric;
                r["jacobi"] = W.jacobi;
                r["form_invariant"] = W.form_invariant;
                r["contragredient"] = W.contragredient;
                r["radical_meets_derived"] = W.radical_meets_derived;
                ok = W.antisymmetric && W.jacobi && W.form_invariant && W.contragredient;
            }
            r["pass"] = ok;
            pass = pass && ok;
        } else if (chk == "conformal") {
            ConformalComparison cc =
                (spec.conformal_kind == "sugawara")
                    ? conformal_comparison_sugawara(v, spec.level, spec.dual_coxeter)
                    : conformal_comparison_heisenberg(v);
            r["kind"] = spec.conformal_kind;
            r["norm2"] = scalar_json(cc.norm2);
            json dd = json::object();
            for (const auto& [id, sc] : cc.omega_dd.c)
                dd[v.space.label[static_cast<size_t>(id)]] = scalar_json(sc);
            r["omega_difference"] = std::move(dd);
            r["pass"] = cc.pass;
            pass = pass && cc.pass;
        } else if (chk == "characters") {
            auto table = v.characters();
            r["table"] = characters_json(table);
            r["pass"] = true;
            rr.csv = characters_csv(table);
        }
    }
    rr.report["pass"] = pass;
    rr.code = pass ? kPass : kCheckFail;
    return rr;
}

RunResult run_source(const std::string& text, bool corrupt_form, const Weight* cutoff_limit) {
    RunResult rr;
    try {
        json j = json::parse(text);
        JobSpec spec = parse_jobspec(j);
        if (cutoff_limit && cutoff_limit->twice < spec.cutoff.twice)
            throw SpecError("cutoff exceeds VOSA_CUTOFF_LIMIT (" + cutoff_limit->str() + ")");
        return run_job(spec, corrupt_form);
    } catch (const SpecError& e) {
        rr.report = {{"error", e.what()}, {"pass", false}};
        rr.code = kBadSpec;
    } catch (const json::exception& e) {
        rr.report = {{"error", e.what()}, {"pass", false}};
        rr.code = kBadSpec;
    } catch (const CutoffExceeded& e) {
        rr.report = {{"error", e.what()}, {"pass", false}};
        rr.code = kCutoff;
    } catch (const std::exception& e) {
        rr.report = {{"error", e.what()}, {"pass", false}};
        rr.code = kCheckFail;
    }
    return rr;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact truncated vertex operator superalgebra checks"};
    std::vector<std::string> files;
    bool csv = false, corrupt_form = false;
    int jobs = 1;
    app.add_option("inputs", files, "job spec JSON files (stdin when omitted)");
    app.add_flag("--csv", csv, "emit character tables as CSV instead of the JSON report");
    app.add_flag("--corrupt-form", corrupt_form, "flip one Gram entry to exercise failure paths");
    app.add_option("--jobs", jobs, "run input files in parallel")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    Weight limit{0};
    bool has_limit = false;
    if (const char* env = std::getenv("VOSA_CUTOFF_LIMIT")) {
        try {
            limit = Weight::of(parse_rational(env));
            has_limit = true;
        } catch (const std::exception& e) {
            std::cerr << "bad VOSA_CUTOFF_LIMIT: " << e.what() << "\n";
            return kBadSpec;
        }
    }

    std::vector<std::string> sources;
    if (files.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        sources.push_back(ss.str());
    } else {
        for (const auto& f : files) {
            std::ifstream in(f);
            if (!in) {
                std::cerr << "cannot open " << f << "\n";
                return kBadSpec;
            }
            std::ostringstream ss;
            ss << in.rdbuf();
            sources.push_back(ss.str());
        }
    }

    std::vector<RunResult> results(sources.size());
    if (jobs <= 1 || sources.size() <= 1) {
        for (size_t i = 0; i < sources.size(); ++i)
            results[i] = run_source(sources[i], corrupt_form, has_limit ? &limit : nullptr);
    } else {
        std::mutex mx;
        size_t next = 0;
        auto worker = [&]() {
            for (;;) {
                size_t i;
                {
                    std::lock_guard<std::mutex> lk(mx);
                    if (next >= sources.size()) return;
                    i = next++;
                }
                results[i] = run_source(sources[i], corrupt_form, has_limit ? &limit : nullptr);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min<int>(jobs, static_cast<int>(sources.size())); ++t)
            pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    int code = kPass;
    for (const auto& r : results) {
        if (csv && !r.csv.empty()) std::cout << r.csv;
        else std::cout << r.report.dump(2) << "\n";
        code = std::max(code, r.code);
    }
    return code;
}
