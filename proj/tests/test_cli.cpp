#include <catch2/catch.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

using json = nlohmann::json;

struct RunResult {
    int exit_code;
    std::string output;
};

std::string temp_dir() {
    static std::string dir = [] {
        std::string d = "/tmp/gkzlab_cli_test_XXXXXX";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s", d.c_str());
        REQUIRE(mkdtemp(buf) != nullptr);
        return std::string(buf);
    }();
    return dir;
}

std::string write_spec(const std::string& name, const std::string& body) {
    std::string path = temp_dir() + "/" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

RunResult run(const std::string& subcommand, const std::string& spec_path,
              const std::string& extra = "") {
    std::string out_path = temp_dir() + "/out.json";
    std::remove(out_path.c_str());
    std::string cmd = std::string(GKZLAB_CLI_PATH) + " " + subcommand + " --spec " + spec_path +
                      " --out " + out_path + " " + extra + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return {code, ss.str()};
}

}  // namespace

TEST_CASE("analyze: conifold report carries the expected pipeline data") {
    auto spec = write_spec("conifold.json", R"({"B": [[-1, -1, 1, 1]]})");
    auto r = run("analyze", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    REQUIRE(rep.at("tool") == "gkzlab");
    REQUIRE(rep.at("result").at("unimodular") == true);
    REQUIRE(rep.at("result").at("quasi_symmetric") == true);
    auto delta = rep.at("result").at("delta_hyperplanes");
    REQUIRE(delta.size() == 2);
    REQUIRE(delta[0].at("offset") == "-1");
    REQUIRE(delta[1].at("offset") == "1");
    // default box [-1/2, 3/2]: active translates are the integers 0 and 1
    auto active = rep.at("result").at("arrangement").at("active");
    REQUIRE(active.size() == 2);
    REQUIRE(active[0].at("offset") == "0");
    REQUIRE(active[1].at("offset") == "1");
    REQUIRE(rep.at("result").at("faces").at("count") == 5);
}

TEST_CASE("analyze: non-unimodular input is still a valid analysis") {
    auto spec = write_spec("one.json", R"({"B": [[1]]})");
    auto r = run("analyze", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    REQUIRE(rep.at("result").at("unimodular") == false);
}

TEST_CASE("analyze: non-surjective weights exit with the precondition code") {
    auto spec = write_spec("two.json", R"({"B": [[2]]})");
    auto r = run("analyze", spec);
    REQUIRE(r.exit_code == 3);
}

TEST_CASE("unknown spec keys are a schema error") {
    auto spec = write_spec("unknown.json", R"({"B": [[-1,-1,1,1]], "extra": 1})");
    auto r = run("analyze", spec);
    REQUIRE(r.exit_code == 2);
}

TEST_CASE("malformed spec JSON is a schema error") {
    auto spec = write_spec("broken.json", "{ not json");
    auto r = run("analyze", spec);
    REQUIRE(r.exit_code == 2);
}

TEST_CASE("windows: conifold rank-2 window") {
    auto spec = write_spec("win.json", R"({"B": [[-1,-1,1,1]], "nu": ["3/10"]})");
    auto r = run("windows", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    REQUIRE(rep.at("result").at("rank") == 2);
    REQUIRE(rep.at("result").at("characters") == json::parse("[[0],[1]]"));
}

TEST_CASE("windows: non-generic nu exits with the precondition code") {
    auto spec = write_spec("win_bad.json", R"({"B": [[-1,-1,1,1]], "nu": ["0"]})");
    auto r = run("windows", spec);
    REQUIRE(r.exit_code == 3);
}

TEST_CASE("gkz: constant solution report") {
    auto spec = write_spec("gkz.json", R"({
        "B": [[-1,-1,1,1]],
        "A": [[-1,1,0,0],[1,0,1,0],[1,0,0,1]],
        "alpha": ["0", "0", "0"],
        "gamma": ["0", "0", "0", "0"],
        "truncation": 3,
        "box_degree": 1
    })");
    auto r = run("gkz", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    const auto& res = rep.at("result");
    REQUIRE(res.at("homogeneity_ops").size() == 3);
    REQUIRE(res.at("box_ops").size() == 1);
    for (const auto& h : res.at("residuals").at("homogeneity")) {
        REQUIRE(h.at("interior_exactly_zero") == true);
        REQUIRE(h.at("interior_max") == 0.0);
    }
    for (const auto& b : res.at("residuals").at("box"))
        REQUIRE(b.at("interior_max") == 0.0);
    REQUIRE(res.at("nonresonant") == false);  // alpha = 0 sits on the cone facets
}

TEST_CASE("monodromy: zero parameters expose the integer matrices verbatim") {
    auto spec = write_spec("mono.json", R"({"gauss": {"a": 0, "b": 0, "c": 0}})");
    auto r = run("monodromy", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    auto gens = rep.at("result").at("closed_form").at("generators");
    REQUIRE(gens.size() == 3);
    REQUIRE(gens[0].at("label") == "0");
    REQUIRE(gens[0].at("matrix") == json::parse("[[[2.0,0.0],[1.0,0.0]],[[-1.0,0.0],[0.0,0.0]]]"));
    REQUIRE(gens[1].at("label") == "1");
    REQUIRE(gens[1].at("matrix") == json::parse("[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]"));
    REQUIRE(gens[2].at("label") == "inf");
    REQUIRE(gens[2].at("matrix") == json::parse("[[[0.0,0.0],[-1.0,0.0]],[[1.0,0.0],[2.0,0.0]]]"));
    // specializing the K0 rep at (1,1,1) reproduces them
    REQUIRE(rep.at("result").at("k0_specialized").at("generators")[0].at("matrix") ==
            gens[0].at("matrix"));
}

TEST_CASE("monodromy: numeric comparison passes at the documented tolerance") {
    auto spec = write_spec("mono_num.json", R"({
        "gauss": {"a": [0.3333333333333333, 0], "b": [0.2, 0], "c": [0.5, 0]},
        "numeric": true
    })");
    auto r = run("monodromy", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    REQUIRE(rep.at("result").at("comparison").at("pass") == true);
    REQUIRE(rep.at("result").at("numeric").at("product_defect").get<double>() < 1e-8);
}

TEST_CASE("verify-perverse: rank-1 fixture") {
    auto spec = write_spec("pv.json", R"({"fixture": "rank1", "a": [1, 0], "b": [1, 0]})");
    auto r = run("verify-perverse", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    REQUIRE(rep.at("result").at("pass") == true);

    auto bad = write_spec("pv_bad.json", R"({"fixture": "rank1", "a": [0, 0], "b": [1, 0]})");
    auto rb = run("verify-perverse", bad);
    REQUIRE(rb.exit_code == 0);
    json repb = json::parse(rb.output);
    REQUIRE(repb.at("result").at("pass") == false);
    REQUIRE(repb.at("result").at("violations")[0].at("axiom") == "phi-invertibility");
}

TEST_CASE("verify-perverse: explicit identity datum over the conifold line") {
    auto spec = write_spec("pv_explicit.json", R"({
        "B": [[-1,-1,1,1]],
        "box": {"lo": ["-1/4"], "hi": ["5/4"]},
        "datum": {
            "dims": {"--": 1, "0-": 1, "+-": 1, "+0": 1, "++": 1},
            "gamma": [
                {"from": "--", "to": "--", "matrix": [[[1,0]]]},
                {"from": "0-", "to": "0-", "matrix": [[[1,0]]]},
                {"from": "+-", "to": "+-", "matrix": [[[1,0]]]},
                {"from": "+0", "to": "+0", "matrix": [[[1,0]]]},
                {"from": "++", "to": "++", "matrix": [[[1,0]]]},
                {"from": "0-", "to": "--", "matrix": [[[1,0]]]},
                {"from": "0-", "to": "+-", "matrix": [[[1,0]]]},
                {"from": "+0", "to": "+-", "matrix": [[[1,0]]]},
                {"from": "+0", "to": "++", "matrix": [[[1,0]]]}
            ],
            "delta": [
                {"from": "--", "to": "--", "matrix": [[[1,0]]]},
                {"from": "0-", "to": "0-", "matrix": [[[1,0]]]},
                {"from": "+-", "to": "+-", "matrix": [[[1,0]]]},
                {"from": "+0", "to": "+0", "matrix": [[[1,0]]]},
                {"from": "++", "to": "++", "matrix": [[[1,0]]]},
                {"from": "--", "to": "0-", "matrix": [[[1,0]]]},
                {"from": "+-", "to": "0-", "matrix": [[[1,0]]]},
                {"from": "+-", "to": "+0", "matrix": [[[1,0]]]},
                {"from": "++", "to": "+0", "matrix": [[[1,0]]]}
            ]
        }
    })");
    auto r = run("verify-perverse", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    REQUIRE(rep.at("result").at("pass") == true);
}

TEST_CASE("reports are byte-identical across runs") {
    auto spec = write_spec("det.json", R"({"B": [[-1,-1,1,1]], "nu": ["3/10"]})");
    auto r1 = run("windows", spec);
    auto r2 = run("windows", spec);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r1.output == r2.output);

    auto m1 = run("monodromy", write_spec("det2.json", R"({"gauss": {"a": 0, "b": 0, "c": 0}})"));
    auto m2 = run("monodromy", write_spec("det3.json", R"({"gauss": {"a": 0, "b": 0, "c": 0}})"));
    REQUIRE(m1.output == m2.output);
}

TEST_CASE("box override flag") {
    auto spec = write_spec("boxflag.json", R"({"B": [[-1,-1,1,1]]})");
    auto r = run("analyze", spec, "--box -1/4,9/4");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    auto active = rep.at("result").at("arrangement").at("active");
    REQUIRE(active.size() == 3);  // integers 0, 1, 2
}

TEST_CASE("verify-perverse: seeded fuzz fixture") {
    auto spec = write_spec("fuzz.json", R"({"fixture": "fuzz", "seed": 11})");
    auto r = run("verify-perverse", spec);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.output);
    REQUIRE(rep.at("result").at("trials") == 200);
    REQUIRE(rep.at("result").at("isolated") == 200);
    REQUIRE(rep.at("result").at("pass") == true);
}

TEST_CASE("every report carries the reproducibility envelope") {
    std::vector<std::pair<std::string, std::string>> jobs = {
        {"analyze", write_spec("env1.json", R"({"B": [[-1,-1,1,1]]})")},
        {"windows", write_spec("env2.json", R"({"B": [[-1,-1,1,1]], "nu": ["3/10"]})")},
        {"gkz", write_spec("env3.json",
                           R"({"B": [[-1,-1,1,1]], "alpha": ["0","0","0"],
                               "gamma": ["0","0","0","0"], "truncation": 2})")},
        {"monodromy", write_spec("env4.json", R"({"gauss": {"a": 0, "b": 0, "c": 0}})")},
        {"verify-perverse", write_spec("env5.json", R"({"fixture": "rank1"})")},
    };
    for (const auto& [cmd, spec] : jobs) {
        auto r = run(cmd, spec);
        REQUIRE(r.exit_code == 0);
        json rep = json::parse(r.output);
        for (const auto* key : {"tool", "version", "command", "spec_sha", "tolerances", "result"})
            REQUIRE(rep.contains(key));
        REQUIRE(rep.at("command") == cmd);
    }
}

TEST_CASE("global flags: seed is accepted by every command") {
    auto spec = write_spec("seedflag.json", R"({"B": [[-1,-1,1,1]]})");
    auto r = run("analyze", spec, "--seed 3");
    REQUIRE(r.exit_code == 0);
}

TEST_CASE("numerical failures exit with code 4") {
    // base point on the singularity at 0 makes every lasso clearance vanish
    auto spec = write_spec("collide.json", R"({
        "gauss": {"a": [0.3, 0], "b": [0.2, 0], "c": [0.5, 0]},
        "numeric": true, "base": [0, 0]
    })");
    auto r = run("monodromy", spec);
    REQUIRE(r.exit_code == 4);
}

TEST_CASE("GKZLAB_THREADS does not change the numeric result") {
    auto spec = write_spec("threads.json", R"({
        "gauss": {"a": [0.25, 0], "b": [0.2, 0], "c": [0.6, 0]},
        "numeric": true
    })");
    auto seq = run("monodromy", spec);
    std::string out_path = temp_dir() + "/out.json";
    std::string cmd = std::string("GKZLAB_THREADS=3 ") + GKZLAB_CLI_PATH +
                      " monodromy --spec " + spec + " --out " + out_path + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    REQUIRE(seq.output == ss.str());
}
