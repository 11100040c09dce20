// gkzlab: batch front-end for the toric GKZ/monodromy pipeline.
// Subcommands: analyze | windows | gkz | monodromy | verify-perverse.
// JSON in (job spec), JSON out (report); exit codes: 0 ok, 2 schema error,
// 3 precondition error, 4 numerical failure, 5 indeterminate.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "gkzlab/gkzlab.hpp"
#include "gkzlab/json_io.hpp"

using namespace gkzlab;
using io::json;

namespace {

struct CliArgs {
    std::string spec_path;
    std::string out_path;
    std::optional<double> tol;
    std::optional<std::string> box;
    std::optional<long> truncation;
    std::optional<long> seed;
};

json read_spec(const CliArgs& args) {
    std::ifstream in(args.spec_path);
    if (!in) throw SchemaError("cannot open spec file: " + args.spec_path);
    json spec;
    try {
        in >> spec;
    } catch (const std::exception& e) {
        throw SchemaError(std::string("spec is not valid JSON: ") + e.what());
    }
    if (!spec.is_object()) throw SchemaError("spec must be a JSON object");
    return spec;
}

void reject_unknown_keys(const json& spec, const std::set<std::string>& allowed) {
    for (const auto& [key, val] : spec.items())
        if (!allowed.count(key)) throw SchemaError("unknown spec key '" + key + "'");
}

void require_keys(const json& spec, const std::vector<std::string>& keys) {
    for (const auto& k : keys)
        if (!spec.contains(k)) throw SchemaError("spec is missing required key '" + k + "'");
}

// flags override the corresponding spec fields
json apply_overrides(json spec, const CliArgs& args, std::size_t box_dim) {
    if (args.tol) spec["tolerance"] = *args.tol;
    if (args.truncation) spec["truncation"] = *args.truncation;
    if (args.seed) spec["seed"] = *args.seed;
    if (args.box) {
        // lo,hi per dimension: lo1,hi1,lo2,hi2,...
        std::vector<std::string> parts;
        std::stringstream ss(*args.box);
        std::string tok;
        while (std::getline(ss, tok, ',')) parts.push_back(tok);
        if (parts.size() != 2 * box_dim) throw SchemaError("--box expects lo,hi per dimension");
        json lo = json::array(), hi = json::array();
        for (std::size_t i = 0; i < box_dim; ++i) {
            lo.push_back(parts[2 * i]);
            hi.push_back(parts[2 * i + 1]);
        }
        spec["box"] = json{{"lo", lo}, {"hi", hi}};
    }
    return spec;
}

json report_skeleton(const char* command, const json& spec) {
    json rep;
    rep["tool"] = "gkzlab";
    rep["version"] = GKZLAB_VERSION;
    rep["command"] = command;
    rep["spec_sha"] = io::fnv1a_hex(spec.dump());
    return rep;
}

void emit(const json& report, const CliArgs& args) {
    if (args.out_path.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(args.out_path);
    if (!out) throw SchemaError("cannot open output file: " + args.out_path);
    out << report.dump(2) << "\n";
}

double spec_tolerance(const json& spec, double fallback) {
    if (!spec.contains("tolerance")) return fallback;
    if (!spec.at("tolerance").is_number()) throw SchemaError("tolerance must be a number");
    return spec.at("tolerance").get<double>();
}

ToricInput toric_from(const json& spec) {
    return ToricInput::checked(io::int_matrix_from(spec.at("B"), "B"));
}

std::vector<Rat> rat_vector_from(const json& j, const std::string& what) {
    if (!j.is_array()) throw SchemaError(what + ": expected an array");
    std::vector<Rat> out;
    for (const auto& x : j) out.push_back(io::rat_from(x, what));
    return out;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const json& spec, const CliArgs& args) {
    reject_unknown_keys(spec, {"B", "box", "translation", "tolerance", "seed"});
    require_keys(spec, {"B"});
    auto input = toric_from(spec);
    Box box = spec.contains("box") ? io::box_from(spec.at("box"), input.n())
                                   : Box::standard(input.n());
    std::optional<std::vector<Rat>> translation;
    if (spec.contains("translation")) {
        auto t = rat_vector_from(spec.at("translation"), "translation");
        if (t.size() != input.n()) throw SchemaError("translation: dimension mismatch");
        translation = std::move(t);
    }

    auto kb = kernel_basis(input);
    auto z = Zonotope::from_weights(input);
    auto hs = supporting_hyperplanes(z);
    auto arr = skms_arrangement(input, box, translation ? &*translation : nullptr);
    auto poset = stratify(arr);

    json rep = report_skeleton("analyze", spec);
    rep["tolerances"] = json{{"arithmetic", "exact-rational"}};
    json result;
    result["B"] = io::int_matrix_json(input.B);
    result["d"] = input.d();
    result["n"] = input.n();
    result["kernel_basis"] = io::int_matrix_json(kb.A);
    result["unimodular"] = is_unimodular_weights(input);
    result["quasi_symmetric"] = is_quasi_symmetric(input);
    json delta = json::array();
    for (const auto& h : hs) delta.push_back(io::hyperplane_json(h));
    result["delta_hyperplanes"] = delta;
    json actives = json::array();
    for (const auto& h : arr.active) actives.push_back(io::hyperplane_json(h));
    result["arrangement"] = json{{"box", io::box_json(box)}, {"active", actives}};
    std::vector<std::size_t> by_dim(input.n() + 1, 0);
    for (const auto& f : poset.faces()) ++by_dim[f.dim];
    result["faces"] = json{{"count", poset.size()},
                           {"by_dim", by_dim},
                           {"list", io::poset_json(poset).at("faces")}};
    rep["result"] = std::move(result);
    emit(rep, args);
    return 0;
}

int cmd_windows(const json& spec, const CliArgs& args) {
    reject_unknown_keys(spec, {"B", "nu", "tolerance", "seed"});
    require_keys(spec, {"B", "nu"});
    auto input = toric_from(spec);
    auto nu = rat_vector_from(spec.at("nu"), "nu");
    if (nu.size() != input.n()) throw SchemaError("nu: dimension mismatch");
    auto delta = Zonotope::from_weights(input);
    auto w = enumerate_window(nu, delta);
    auto lifts = lift_characters(w, input);

    json rep = report_skeleton("windows", spec);
    rep["tolerances"] = json{{"arithmetic", "exact-rational"}};
    json result = io::window_json(w);
    json jlifts = json::array();
    for (const auto& lift : lifts)
        jlifts.push_back(json{{"mu", io::int_vector_json(lift.mu)},
                              {"mu_hat", io::int_vector_json(lift.mu_hat)}});
    result["lifts"] = jlifts;
    result["rank"] = w.characters.size();
    rep["result"] = std::move(result);
    emit(rep, args);
    return 0;
}

int cmd_gkz(const json& spec, const CliArgs& args) {
    reject_unknown_keys(spec,
                        {"B", "A", "alpha", "gamma", "truncation", "box_degree", "tolerance", "seed"});
    require_keys(spec, {"B", "alpha", "gamma", "truncation"});
    auto input = toric_from(spec);
    KernelBasis kernel = spec.contains("A")
                             ? KernelBasis::checked(io::int_matrix_from(spec.at("A"), "A"), input)
                             : kernel_basis(input);
    std::vector<CRat> alpha, gamma;
    for (const auto& x : spec.at("alpha")) alpha.push_back(io::crat_from(x, "alpha"));
    for (const auto& x : spec.at("gamma")) gamma.push_back(io::crat_from(x, "gamma"));
    if (!spec.at("truncation").is_number_integer())
        throw SchemaError("truncation must be an integer");
    long trunc = spec.at("truncation").get<long>();
    long box_degree = 2;
    if (spec.contains("box_degree")) box_degree = spec.at("box_degree").get<long>();

    auto sys = build_gkz<CRat>(input, kernel, alpha, box_degree);
    auto series = series_solution(sys, gamma, trunc);

    json rep = report_skeleton("gkz", spec);
    rep["tolerances"] = json{{"arithmetic", "exact-rational"}};
    json result;
    result["A"] = io::int_matrix_json(kernel.A);
    result["nonresonant"] = check_nonresonant(kernel, alpha);
    json homog = json::array();
    for (const auto& op : sys.homogeneity) homog.push_back(io::diff_op_json(op));
    result["homogeneity_ops"] = homog;
    json boxes = json::array();
    for (const auto& [l, op] : sys.box_ops)
        boxes.push_back(json{{"l", io::int_vector_json(l)}, {"op", io::diff_op_json(op)}});
    result["box_ops"] = boxes;
    result["series"] = io::series_json(series);
    json hres = json::array();
    for (const auto& op : sys.homogeneity)
        hres.push_back(io::residual_json(apply_operator(op, series)));
    json bres = json::array();
    for (const auto& [l, op] : sys.box_ops)
        bres.push_back(io::residual_json(apply_operator(op, series)));
    result["residuals"] = json{{"homogeneity", hres}, {"box", bres}};
    rep["result"] = std::move(result);
    emit(rep, args);
    return 0;
}

int cmd_monodromy(const json& spec, const CliArgs& args) {
    reject_unknown_keys(spec, {"gauss", "numeric", "base", "tolerance", "seed"});
    require_keys(spec, {"gauss"});
    const json& g = spec.at("gauss");
    if (!g.is_object()) throw SchemaError("gauss must be an object {a, b, c}");
    for (const auto& [key, val] : g.items())
        if (key != "a" && key != "b" && key != "c")
            throw SchemaError("gauss: unknown key '" + key + "'");
    require_keys(g, {"a", "b", "c"});
    GaussParams p{io::cplx_from(g.at("a"), "gauss.a"), io::cplx_from(g.at("b"), "gauss.b"),
                  io::cplx_from(g.at("c"), "gauss.c")};
    double tol = spec_tolerance(spec, 1e-8);

    auto closed = gauss_closed_form(p);
    auto k0 = conifold_k0_rep();

    json rep = report_skeleton("monodromy", spec);
    rep["tolerances"] = json{{"compare", tol}};
    json result;
    result["closed_form"] = io::rep_json(closed);
    result["k0_laurent"] =
        json{{"variables",
              json::array({"e^(2 pi i a)", "e^(2 pi i b)", "e^(2 pi i c)"})},
             {"g0", io::laurent_matrix_json(k0.g0)},
             {"g1", io::laurent_matrix_json(k0.g1)},
             {"ginf", io::laurent_matrix_json(k0.gi)}};
    auto spec_point = std::vector<Cplx>{unit_phase(p.a), unit_phase(p.b), unit_phase(p.c)};
    result["k0_specialized"] = io::rep_json(k0.specialize_at(spec_point));

    bool run_numeric = spec.contains("numeric") && spec.at("numeric").get<bool>();
    if (run_numeric) {
        // resonant parameters can produce logarithmic solutions; warn instead
        // of silently comparing garbage
        auto near_int = [](Cplx z) {
            return std::abs(z.imag()) < 1e-9 && std::abs(z.real() - std::round(z.real())) < 1e-9;
        };
        json warnings = json::array();
        if (near_int(p.a) || near_int(p.b) || near_int(p.c - p.a) || near_int(p.c - p.b))
            warnings.push_back(
                "resonant parameters: companion system may have logarithmic solutions; "
                "numeric comparison is unreliable");
        Cplx base(0.5, -0.5);
        if (spec.contains("base")) base = io::cplx_from(spec.at("base"), "base");
        MonodromyOptions opts;
        if (const char* env = std::getenv("GKZLAB_THREADS"))
            opts.threads = static_cast<unsigned>(std::max(1L, std::strtol(env, nullptr, 10)));
        auto sys = companion_system(gauss_ode(p.a, p.b, p.c));
        auto numeric = monodromy_rep(sys, base, opts);
        auto cmp = compare_up_to_conjugacy(numeric, closed, tol);
        json deltas = json::array();
        for (const auto& [name, d] : cmp.deltas)
            deltas.push_back(json{{"invariant", name}, {"delta", d}});
        result["numeric"] = io::rep_json(numeric);
        result["comparison"] = json{{"pass", cmp.pass},
                                    {"max_delta", cmp.max_delta},
                                    {"deltas", deltas},
                                    {"irreducible_caveat", cmp.irreducible_caveat},
                                    {"note", cmp.note}};
        result["warnings"] = warnings;
    }
    rep["result"] = std::move(result);
    emit(rep, args);
    return 0;
}

// Seeded mutation fuzz: breaks one axiom per trial and demands that the
// validator flags exactly that class. Mirrors the acceptance-suite check.
json run_perverse_fuzz(unsigned long seed, int rounds, double tol) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.2, 1.8);
    auto square_input = ToricInput::checked(IntMat{{1, -1, 0, 0}, {0, 0, 1, -1}});
    auto square =
        stratify(skms_arrangement(square_input, Box::make({Rat(-1), Rat(-1)}, {Rat(1), Rat(1)})));
    std::size_t v = square.size(), e = square.size(), c = square.size();
    for (std::size_t i = 0; i < square.size() && v == square.size(); ++i)
        if (square.face(i).dim == 0) v = i;
    for (std::size_t i = 0; i < square.size() && e == square.size(); ++i)
        if (square.face(i).dim == 1 && square.leq(v, i)) e = i;
    for (std::size_t i = 0; i < square.size() && c == square.size(); ++i)
        if (square.face(i).dim == 2 && square.leq(e, i)) c = i;

    int trials = 0, isolated = 0;
    auto tally = [&](const std::string& expect, const ValidationReport& report) {
        ++trials;
        auto classes = report.violation_classes();
        if (!report.pass && classes.size() == 1 && classes[0] == expect) ++isolated;
    };
    for (int iter = 0; iter < rounds; ++iter) {
        Cplx scale(u(rng), 0.1 * u(rng));
        {
            auto d = PerverseDatum::identity(square, 1);
            d.gamma[{v, c}] = CMat{{Cplx(1.0) + scale}};
            tally("gamma-functoriality", validate(square, d, tol));
        }
        {
            auto d = PerverseDatum::identity(square, 1);
            d.delta[{c, v}] = CMat{{Cplx(1.0) + scale}};
            tally("delta-functoriality", validate(square, d, tol));
        }
        {
            auto fx = example_datum_rank1(Cplx(u(rng)), Cplx(u(rng)));
            fx.datum.delta[{fx.plus, fx.zero}] = CMat{{Cplx(1.0) + scale}, {Cplx(0.0)}};
            tally("gamma-delta-identity", validate(fx.poset, fx.datum, tol));
        }
        {
            auto fx = example_datum_rank1(Cplx(0.0), Cplx(u(rng)));
            tally("phi-invertibility", validate(fx.poset, fx.datum, tol));
        }
    }
    return json{{"seed", seed},
                {"trials", trials},
                {"isolated", isolated},
                {"pass", trials == isolated}};
}

int cmd_verify_perverse(const json& spec, const CliArgs& args) {
    reject_unknown_keys(spec, {"B", "box", "fixture", "a", "b", "datum", "tolerance", "seed"});
    double tol = spec_tolerance(spec, 1e-10);

    json rep = report_skeleton("verify-perverse", spec);
    rep["tolerances"] = json{{"matrix", tol}};

    if (spec.contains("fixture")) {
        std::string fixture = spec.at("fixture").get<std::string>();
        if (fixture == "fuzz") {
            unsigned long seed = spec.contains("seed") ? spec.at("seed").get<unsigned long>() : 0;
            json result = run_perverse_fuzz(seed, 50, tol);
            bool pass = result.at("pass").get<bool>();
            rep["result"] = std::move(result);
            emit(rep, args);
            return pass ? 0 : 1;
        }
        if (fixture != "rank1") throw SchemaError("unknown fixture (supported: rank1, fuzz)");
        Cplx a = spec.contains("a") ? io::cplx_from(spec.at("a"), "a") : Cplx(1.0);
        Cplx b = spec.contains("b") ? io::cplx_from(spec.at("b"), "b") : Cplx(1.0);
        auto fx = example_datum_rank1(a, b);
        auto report = validate(fx.poset, fx.datum, tol);
        rep["result"] = io::validation_json(fx.poset, report);
        emit(rep, args);
        return report.unchecked.empty() ? 0 : 5;
    }

    require_keys(spec, {"B", "datum"});
    auto input = toric_from(spec);
    Box box = spec.contains("box") ? io::box_from(spec.at("box"), input.n())
                                   : Box::standard(input.n());
    auto poset = stratify(skms_arrangement(input, box));
    auto datum = io::datum_from(spec.at("datum"), poset);
    auto report = validate(poset, datum, tol);
    rep["result"] = io::validation_json(poset, report);
    emit(rep, args);
    return report.unchecked.empty() ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toric GKZ / monodromy / perverse-sheaf pipeline"};
    app.set_version_flag("--version", GKZLAB_VERSION);
    app.require_subcommand(1);

    CliArgs args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", args.spec_path, "job spec JSON file")->required();
        sub->add_option("--out", args.out_path, "write the report here (default: stdout)");
        sub->add_option("--tol", args.tol, "tolerance override");
        sub->add_option("--box", args.box, "clipping box override: lo,hi per dimension");
        sub->add_option("--truncation", args.truncation, "series truncation override");
        sub->add_option("--seed", args.seed, "seed for randomized fixtures");
    };
    auto* analyze = app.add_subcommand("analyze", "kernel, zonotope, arrangement, faces");
    auto* windows = app.add_subcommand("windows", "window characters and lifts");
    auto* gkz = app.add_subcommand("gkz", "GKZ operators, series, residuals");
    auto* monodromy = app.add_subcommand("monodromy", "closed-form and numeric monodromy");
    auto* verify = app.add_subcommand("verify-perverse", "validate perverse-sheaf diagram data");
    for (auto* sub : {analyze, windows, gkz, monodromy, verify}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        json spec = read_spec(args);
        std::size_t dim = 1;
        if (spec.contains("B") && spec.at("B").is_array() && !spec.at("B").empty())
            dim = spec.at("B").size();
        spec = apply_overrides(std::move(spec), args, dim);
        if (*analyze) return cmd_analyze(spec, args);
        if (*windows) return cmd_windows(spec, args);
        if (*gkz) return cmd_gkz(spec, args);
        if (*monodromy) return cmd_monodromy(spec, args);
        if (*verify) return cmd_verify_perverse(spec, args);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.category()) {
            case ErrorCategory::schema: return 2;
            case ErrorCategory::precondition: return 3;
            case ErrorCategory::numerical: return 4;
            case ErrorCategory::indeterminate: return 5;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
