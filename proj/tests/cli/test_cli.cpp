#include <doctest.h>

#include <cmath>

#include "urel/cli.hpp"
#include "urel/oracle.hpp"

using namespace urel;
using namespace urel::cli;

namespace {

std::string scenario_path(const std::string& name)
{
    return std::string(UREL_SCENARIO_DIR) + "/" + name;
}

const Json& first_relation(const Report& r, std::size_t task)
{
    return r.results.at(task).at("result").at(0);
}

std::string error_message(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

Json matrix(const CMatrix& m)
{
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ir = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ir.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
    }
    return Json{{"re", re}, {"im", im}};
}

/// Random well-formed scenario text built from the oracle generators.
std::string random_scenario(std::uint64_t seed)
{
    oracle::Rng rng(seed);
    const int d = 2 + static_cast<int>(rng() % 3);
    const int n = 1 + static_cast<int>(rng() % 4);
    Json s;
    s["dim"] = d;
    if (rng() % 2) s["tolerances"] = Json{{"eq_tol", 1e-7}};
    s["states"]["rho"] = matrix(oracle::random_state(rng, d, 1 + static_cast<int>(rng() % d)).matrix());
    s["observables"]["a"] = matrix(oracle::random_observable(rng, d).matrix());
    s["observables"]["b"] = matrix(oracle::random_observable(rng, d).matrix());
    Json effects = Json::array();
    Json outcomes = Json::array();
    const Povm m = oracle::random_povm(rng, d, n);
    for (int i = 0; i < n; ++i) {
        effects.push_back(matrix(m.effect(i)));
        outcomes.push_back(i % 2 ? Json("o" + std::to_string(i)) : Json{{"label", "v" + std::to_string(i)}, {"value", 0.1 * i}});
    }
    s["measurements"]["m"] = Json{{"outcomes", outcomes}, {"effects", effects}};
    const JointPovm j = oracle::random_joint_povm(rng, d, 2, n);
    Json jeff = Json::array();
    for (const auto& e : j.povm().effects()) jeff.push_back(matrix(e));
    Json second = Json::array();
    for (int i = 0; i < n; ++i) second.push_back(i + 0.5);
    s["joint_measurements"]["j"] = Json{{"first", {"x", "y"}}, {"second", second}, {"effects", jeff}};
    const StochasticChannel k = oracle::random_channel(rng, n, 3);
    Json kernel = Json::array();
    for (int r = 0; r < 3; ++r) {
        Json row = Json::array();
        for (int c = 0; c < n; ++c) row.push_back(k.kernel()(r, c));
        kernel.push_back(row);
    }
    s["channels"]["k"] = Json{{"kernel", kernel}};
    Json p = Json::array();
    const ProbDist dist = oracle::random_distribution(rng, n);
    for (int i = 0; i < n; ++i) p.push_back(dist(i));
    s["distributions"]["p"] = p;
    Json f = Json::array();
    for (int i = 0; i < n; ++i) f.push_back(std::normal_distribution<double>()(rng));
    s["functions"]["f"] = f;
    s["tasks"] = Json::array({Json{{"kind", "relation_error"}, {"a", "a"}, {"b", "b"}, {"measurement", "m"}, {"state", "rho"}},
                              Json{{"kind", "nogo"}, {"name", "probe"}, {"a", "a"}, {"b", "b"}, {"state", "rho"}, {"joints", {"j"}}},
                              Json{{"kind", "classical_error"}, {"a", "f"}, {"channel", "k"}, {"distribution", "p"}}});
    return s.dump();
}

} // namespace

TEST_CASE("trivial-measurement scenario reports the Schrodinger bound")
{
    const Report r = run_verify(load_scenario(scenario_path("trivial_reduction.json")));
    CHECK(r.exit_code() == exit_ok);
    const Json& rel = first_relation(r, 0);
    CHECK(rel["id"] == "error");
    CHECK(std::abs(rel["bound"].get<double>() - 1.0) <= 1e-12);
    const Json& schr = first_relation(r, 1);
    CHECK(schr["id"] == "schrodinger");
    CHECK(std::abs(rel["bound"].get<double>() - schr["bound"].get<double>()) <= 1e-12);
    CHECK(std::abs(rel["components"]["R"].get<double>() - schr["components"]["R0"].get<double>()) <= 1e-12);
}

TEST_CASE("AKG scenario saturates the joint representability relation")
{
    const Report r = run_verify(load_scenario(scenario_path("akg_saturation.json")));
    CHECK(r.exit_code() == exit_ok);
    CHECK(r.results[0]["result"]["holds"] == true);
    const Json& rel = first_relation(r, 1);
    CHECK(rel["id"] == "joint_repr");
    CHECK(std::abs(rel["slack"].get<double>()) <= 1e-9);
    CHECK(rel["verdict"] == "holds");
    CHECK(std::abs(first_relation(r, 2)["slack"].get<double>()) <= 1e-9);
}

TEST_CASE("noisy and classical scenarios reproduce the fixture values")
{
    const Report noisy = run_verify(load_scenario(scenario_path("noisy_qubit.json")));
    CHECK(noisy.exit_code() == exit_ok);
    CHECK(noisy.results[0]["result"]["value"].get<double>() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    CHECK(noisy.results[1]["result"]["value"].get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(noisy.results[2]["result"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(noisy.results[3]["result"]["gap_sq"].get<double>() == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(noisy.results[5]["result"]["conditions"]["a"] == false);
    CHECK(noisy.results[6]["result"]["conditions"]["a"] == true);

    const Report bsc = run_verify(load_scenario(scenario_path("classical_bsc.json")));
    CHECK(bsc.exit_code() == exit_ok);
    CHECK(bsc.results[1]["result"]["value"].get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(bsc.rows.size() == 3);
}

TEST_CASE("malformed effect is rejected by name")
{
    const std::string msg = error_message([] { load_scenario(scenario_path("bad_effect.json")); });
    CHECK(msg.find("measurements.broken") != std::string::npos);
    CHECK(msg.find("effect 1") != std::string::npos);
    CHECK(msg.find("positive semidefinite") != std::string::npos);
}

TEST_CASE("parse errors carry line, field and reference context")
{
    const std::string syntax = error_message([] { parse_scenario("{\n  \"dim\": 2,\n  \"states\": {,}\n}", "s.json"); });
    CHECK(syntax.rfind("s.json:3:", 0) == 0);

    const std::string base = R"({"dim": 2, "states": {"rho": {"re": [[0.5, 0], [0, 0.5]]}},
        "observables": {"z": [[1, 0], [0, -1]]}, "tasks": [)";
    CHECK(error_message([&] { parse_scenario(base + R"({"kind": "schrodinger", "a": "z", "b": "x", "state": "rho"}]})"); })
              .find("tasks[0].b: unresolved reference \"x\"") != std::string::npos);
    CHECK(error_message([&] { parse_scenario(base + R"({"kind": "schrodinger", "a": "z", "state": "rho"}]})"); })
              .find("needs field \"b\"") != std::string::npos);
    CHECK(error_message([&] { parse_scenario(base + R"({"kind": "frobnicate"}]})"); }).find("unknown task kind") !=
          std::string::npos);
    CHECK(error_message([&] {
              parse_scenario(base + R"({"kind": "schrodinger", "a": "z", "b": "z", "state": "rho", "x": 1}]})");
          }).find("unknown field \"x\"") != std::string::npos);
    CHECK(error_message([] { parse_scenario(R"({"dim": 2, "observables": {"z": [[1, 0]]}})"); })
              .find("observables.z: expected a 2x2 matrix") != std::string::npos);
    CHECK(error_message([] { parse_scenario(R"({"dim": 2, "states": {"r": [[1, 0], [0, 1]]}})"); })
              .find("states.r: density matrix trace") != std::string::npos);
    CHECK(error_message([] { parse_scenario(R"({"states": {}})"); }).find("missing field \"dim\"") != std::string::npos);
    CHECK(error_message([] { parse_scenario(R"({"dim": 2, "extra": 1})"); }).find("unknown section") != std::string::npos);
}

TEST_CASE("scenario round trip")
{
    for (const char* name : {"trivial_reduction.json", "akg_saturation.json", "noisy_qubit.json", "classical_bsc.json"}) {
        const Scenario s = load_scenario(scenario_path(name));
        const std::string once = scenario_to_json(s).dump(2);
        const Scenario back = parse_scenario(once);
        CHECK(back == s);
        CHECK(scenario_to_json(back).dump(2) == once);
    }
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Scenario s = parse_scenario(random_scenario(seed));
        const Scenario back = parse_scenario(scenario_to_json(s).dump());
        CHECK(back == s);
        CHECK(render(run_verify(back), Format::json) == render(run_verify(s), Format::json));
    }
}

TEST_CASE("tolerance resolution: flags over scenario over defaults")
{
    const Tolerances defaults = resolve_tolerances({}, {});
    CHECK(defaults == Tolerances{});
    ToleranceFlags flags;
    flags.eq_tol = 1e-6;
    const Tolerances t = resolve_tolerances({{"eq_tol", 1e-7}, {"ineq_tol", 1e-11}}, flags);
    CHECK(t.eq_tol == 1e-6);
    CHECK(t.ineq_tol == 1e-11);
    CHECK(t.rank_tol == Tolerances{}.rank_tol);
    flags.rank_tol = -1;
    CHECK_THROWS_AS(resolve_tolerances({}, flags), InputError);
}

TEST_CASE("report formats")
{
    Report r;
    r.command = "verify";
    r.rows.push_back({"task, quoted", "error", 1.0, 0.5, 0.5, "holds"});
    r.rows.push_back({"t", "error", 0.0, INFINITY, -INFINITY, "violated"});
    r.failures.push_back("t: error violated");
    CHECK(r.exit_code() == exit_verification_failure);
    const std::string csv = render(r, Format::csv);
    CHECK(csv.rfind("task,id,lhs,bound,slack,verdict\n", 0) == 0);
    CHECK(csv.find("\"task, quoted\",error,1,0.5,0.5,holds") != std::string::npos);
    CHECK(csv.find("t,error,0,inf,-inf,violated") != std::string::npos);
    const Json parsed = Json::parse(render(r, Format::json));
    CHECK(parsed["verdict"] == "fail");
    CHECK(render(r, Format::text).find("verdict: fail") != std::string::npos);
    CHECK(parse_format("csv") == Format::csv);
    CHECK_THROWS_AS(parse_format("xml"), InputError);
}

TEST_CASE("sweep is deterministic and thread-count independent")
{
    SweepOptions opt;
    opt.count = 60;
    opt.seed = 9;
    opt.workers = 1;
    const std::string one = render(run_sweep(opt), Format::json);
    opt.workers = 4;
    const Report many = run_sweep(opt);
    CHECK(render(many, Format::json) == one);
    CHECK(many.exit_code() == exit_ok);
    CHECK(many.results["instance_errors"] == 0);
    CHECK(many.results["relations"].size() == 18);
    for (const auto& [id, stats] : many.results["relations"].items()) {
        CHECK(stats["violated"] == 0);
    }
    opt.seed = 10;
    CHECK(render(run_sweep(opt), Format::json) != one);

    opt.count = 0;
    const Report empty = run_sweep(opt);
    CHECK(empty.rows.empty());
    CHECK(empty.exit_code() == exit_ok);

    opt.count = -1;
    CHECK_THROWS_AS(run_sweep(opt), InputError);
}

TEST_CASE("integer list flags")
{
    CHECK(parse_int_list("2-4", "--dims") == std::vector<int>{2, 3, 4});
    CHECK(parse_int_list("5,2,3-3", "--dims") == std::vector<int>{2, 3, 5});
    CHECK_THROWS_AS(parse_int_list("0", "--dims"), InputError);
    CHECK_THROWS_AS(parse_int_list("4-2", "--dims"), InputError);
    CHECK_THROWS_AS(parse_int_list("a", "--dims"), InputError);
}

TEST_CASE("demos")
{
    CHECK(demo_names().size() == 7);
    for (const auto& name : demo_names()) {
        const Report r = run_demo(name);
        CHECK_MESSAGE(r.exit_code() == exit_ok, name);
        CHECK(!r.narrative.empty());
        CHECK(r.environment["demo"] == name);
    }
    const Report p = run_demo("projective-errorless");
    int passed = 0;
    for (const auto& entry : p.results) passed += entry.contains("check") && entry["pass"] == true;
    CHECK(passed >= 7);
    CHECK_THROWS_AS(run_demo("unknown"), InputError);
}
