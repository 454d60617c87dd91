// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "envring/fleet.hpp"
#include "envring/json_io.hpp"
#include "envring/verify.hpp"

using namespace envring;

namespace {

  std::string const kCli  = ENVRING_CLI;
  std::string const kData = ENVRING_DATA;

  std::filesystem::path scratch() {
    auto const p = std::filesystem::temp_directory_path() / "envring_test_json_io";
    std::filesystem::create_directories(p);
    return p;
  }

  int run(std::string const& args, std::string const& out = "") {
    std::string cmd = kCli + " " + args;
    if (!out.empty()) {
      cmd += " --output " + (scratch() / out).string();
    }
    cmd += " > " + (scratch() / "stdout.txt").string() + " 2>&1";
    int const status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  Json output(std::string const& out) {
    return read_json_file((scratch() / out).string());
  }

  std::string data(std::string const& name) {
    return kData + "/" + name;
  }

}  // namespace

TEST_CASE("integers and matrices") {
  Int const big = Int(1) << 80;
  CHECK(int_to_json(big).is_string());
  CHECK(int_from_json(int_to_json(big)) == big);
  CHECK(int_from_json(int_to_json(Int(-7))) == -7);
  CHECK(int_to_json(Int(-7)).is_number_integer());
  CHECK_THROWS_WITH_AS(int_from_json(Json("12x")), doctest::Contains("Parse"), Error);
  Matrix const m = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(matrix_from_json(matrix_to_json(m), 2, 3) == m);
  CHECK_THROWS_AS(matrix_from_json(matrix_to_json(m), 3, 2), Error);
  FGAbGroup const g = FGAbGroup::cyclic_sum({2, 0, 6});
  CHECK(group_from_json(group_to_json(g)) == g);
  CHECK(group_from_json(Json{{"orders", {2, 0, 6}}}) == g);
}

TEST_CASE("algebras") {
  SUBCASE("round trip over the fleet") {
    for (auto const& f : default_fleet()) {
      CAPTURE(f.name);
      AlgebraPtr const back = algebra_from_json(algebra_to_json(*f.algebra), &f.variety);
      CHECK(*back == *f.algebra);
      CHECK(*algebra_from_json(algebra_to_json(*f.algebra)) == *f.algebra);
    }
  }
  SUBCASE("tables follow the variety's signature order") {
    Json const j = Json::parse(R"j({
      "name": "Z2", "carrier": ["0", "1"],
      "signature": [{"symbol": "zero", "arity": 0}, {"symbol": "neg", "arity": 1},
                    {"symbol": "add", "arity": 2}],
      "tables": {"zero": "0", "neg": [0, 1], "add": [["0", "1"], ["1", "0"]]}})j");
    Variety const    V = Variety::ab();
    AlgebraPtr const A = algebra_from_json(j, &V);
    CHECK(A->signature() == V.signature());
    CHECK(*A == *cyclic_ab(2));
    CHECK(in_variety(V, *A));
  }
  SUBCASE("errors") {
    Json       j = algebra_to_json(*cyclic_group(2));
    Json       bad_elem = j;
    bad_elem["tables"]["inv"][0] = "h";
    CHECK_THROWS_WITH_AS(algebra_from_json(bad_elem), doctest::Contains("unknown element"), Error);
    Json short_row = j;
    short_row["tables"]["mul"][0] = Json::array({"e"});
    CHECK_THROWS_WITH_AS(algebra_from_json(short_row), doctest::Contains("length 2"), Error);
    Json no_table = j;
    no_table["tables"].erase("inv");
    CHECK_THROWS_WITH_AS(algebra_from_json(no_table), doctest::Contains("no table for inv"), Error);
    Json no_carrier = j;
    no_carrier.erase("carrier");
    CHECK_THROWS_WITH_AS(algebra_from_json(no_carrier), doctest::Contains("Parse"), Error);
    Variety const ab = Variety::ab();
    CHECK_THROWS_WITH_AS(algebra_from_json(j, &ab), doctest::Contains("Validation"), Error);
    CHECK_THROWS_WITH_AS(read_json_file("/nonexistent/a.json"), doctest::Contains("Parse"), Error);
  }
  SUBCASE("empty algebra") {
    Json const j = Json::parse(R"j({"name": "E", "carrier": [],
      "signature": [{"symbol": "f", "arity": 1}], "tables": {"f": []}})j");
    AlgebraPtr const A = algebra_from_json(j);
    CHECK(A->size() == 0);
    CHECK(*algebra_from_json(algebra_to_json(*A)) == *A);
  }
}

TEST_CASE("varieties") {
  CHECK(variety_from_arg("groups").kind() == VarietyKind::Groups);
  CHECK(variety_from_json(Json("cring")).kind() == VarietyKind::CRing);
  CHECK_THROWS_WITH_AS(variety_from_json(Json("lattices")), doctest::Contains("Parse"), Error);
  Json const j = Json::parse(R"j({"name": "semilattices",
    "signature": [{"symbol": "m", "arity": 2}],
    "identities": [{"lhs": "m(x1,x1)", "rhs": "x1"},
                   {"lhs": "m(x1,x2)", "rhs": "m(x2,x1)"},
                   {"lhs": "m(m(x1,x2),x3)", "rhs": "m(x1,m(x2,x3))"}]})j");
  Variety const V = variety_from_json(j);
  CHECK(V.kind() == VarietyKind::Custom);
  CHECK_FALSE(V.has_canonicalizer());
  REQUIRE(V.identities().size() == 3);
  CHECK(V.identities()[2].arity == 3);
  Json const two = Json::parse(R"j({"name": "2", "carrier": ["0", "1"],
    "signature": [{"symbol": "m", "arity": 2}], "tables": {"m": [["0", "0"], ["0", "1"]]}})j");
  CHECK(in_variety(V, *algebra_from_json(two, &V)));
  Json const proj = Json::parse(R"j({"name": "L", "carrier": ["0", "1"],
    "signature": [{"symbol": "m", "arity": 2}], "tables": {"m": [["0", "0"], ["1", "1"]]}})j");
  CHECK_FALSE(in_variety(V, *algebra_from_json(proj, &V)));
}

TEST_CASE("overalgebras and modules") {
  AlgebraPtr const C2 = cyclic_group(2);
  SUBCASE("overalgebra round trip") {
    for (auto const& P : {trivial_overalg(C2), beta_star(C2, {0, 0}), beta_star(C2, {0, 1})}) {
      PointedOveralg const Q = overalg_from_json(overalg_to_json(P), C2);
      CHECK(Q.fibers() == P.fibers());
      CHECK(Q.basepoints() == P.basepoints());
      CHECK(Q.ops() == P.ops());
    }
  }
  SUBCASE("fiber lists with the first point as basepoint") {
    Json j = overalg_to_json(beta_star(C2, {0, 0}));
    for (auto& [a, f] : j["fibers"].items()) {
      Json const points = f["points"];
      f                 = points;
    }
    PointedOveralg const Q = overalg_from_json(j, C2);
    CHECK(Q.basepoint(0) == 0);
    CHECK(Q.basepoint(1) == 0);
  }
  SUBCASE("missing table") {
    Json j = overalg_to_json(beta_star(C2, {0, 0}));
    j["ops"]["mul"].erase("g,e");
    CHECK_THROWS_WITH_AS(overalg_from_json(j, C2), doctest::Contains("(g,e)"), Error);
  }
  SUBCASE("module round trip over the fleet") {
    for (auto const& f : default_fleet()) {
      for (auto const& fm : fleet_modules(f)) {
        CAPTURE(f.name);
        CAPTURE(fm.name);
        AModule const N = module_from_json(module_to_json(fm.module), f.algebra);
        CHECK(N.fibers() == fm.module.fibers());
        CHECK(N.parts() == fm.module.parts());
      }
    }
  }
  SUBCASE("inline base and base by path") {
    Variety const    V = Variety::groups();
    Json             j = module_to_json(AModule::zero(C2));
    CHECK(*base_from_json(j, V, "") == *C2);
    j["base"] = "c2.json";
    CHECK(*base_from_json(j, V, kData) == *C2);
    CHECK_THROWS_WITH_AS(base_from_json(j, V, "/nonexistent"), doctest::Contains("Parse"), Error);
  }
}

TEST_CASE("ringoid reports round trip") {
  for (auto const& f : default_fleet()) {
    CAPTURE(f.name);
    EnvelopeReport const r    = compute_envelope(f.variety, f.algebra, 3, 5);
    Json const           rep  = envelope_report(r, 5);
    Ringoid const        back = ringoid_from_json(rep.at("ringoid"));
    CHECK(ringoid_to_json(back, f.algebra->carrier()).dump() == rep.at("ringoid").dump());
    CHECK_FALSE(back.check_axioms());
    Ringoid const& X = r.ringoid->ringoid();
    for (Element a = 0; a < X.objects(); ++a) {
      for (Element b = 0; b < X.objects(); ++b) {
        CHECK(back.hom(a, b) == X.hom(a, b));
      }
    }
    CHECK(rep.at("version") == kToolVersion);
    CHECK(rep.at("stabilized") == r.stabilized);
    CHECK(rep.at("depth") == r.depth);
    CHECK(rep.at("homs").size() == f.algebra->size() * f.algebra->size());
    for (auto const& fm : fleet_modules(f)) {
      if (fm.module.finite()) {
        Ringoid const& Y = z_of_module(fm.module).ring;
        Json const     j = ringoid_to_json(Y, f.algebra->carrier());
        CHECK(ringoid_to_json(ringoid_from_json(j), f.algebra->carrier()) == j);
      }
    }
  }
}

TEST_CASE("command line") {
  SUBCASE("envelope") {
    CHECK(run("envelope --algebra " + data("c2.json") + " --variety groups --depth 3", "c2.json") == 0);
    Json const c2 = output("c2.json");
    CHECK(c2["stabilized"] == true);
    CHECK(c2["homs"][0]["a"] == "e");
    CHECK(c2["homs"][0]["iso_type"]["free_rank"] == 2);
    CHECK(c2["homs"][0]["iso_type"]["torsion"].empty());

    CHECK(run("envelope --algebra " + data("z2ab.json") + " --variety ab", "z2.json") == 0);
    for (auto const& h : output("z2.json")["homs"]) {
      CHECK(h["iso_type"]["free_rank"] == 1);
    }
    CHECK(run("envelope --algebra " + data("c2.json") + " --variety groups --depth 3 --max-depth 3", "c2x.json") == 3);
    CHECK(output("c2x.json")["stabilized"] == false);
    CHECK(run("envelope --algebra " + data("missing.json") + " --variety groups") == 1);
    CHECK(run("envelope --algebra " + data("c2.json") + " --variety ab") == 2);
    CHECK(run("envelope --algebra " + data("c2.json") + " --variety rings") == 1);
    CHECK(run("envelope --algebra " + data("c2.json") + " --variety groups --depth 4 --max-depth 3") == 2);
    CHECK(run("envelope --variety groups") == 1);
  }
  SUBCASE("modulize") {
    CHECK(run("modulize --input " + data("c2_trivial.json") + " --variety groups", "triv.json") == 0);
    for (auto const& f : output("triv.json")["fibers"]) {
      CHECK(f["iso_type"]["free_rank"] == 0);
      CHECK(f["iso_type"]["torsion"].empty());
    }
    CHECK(run("modulize --input " + data("c2_beta_top.json") + " --variety groups", "beta.json") == 0);
    for (auto const& f : output("beta.json")["fibers"]) {
      CHECK(f["iso_type"]["torsion"] == Json::array({2}));
    }
    CHECK(run("modulize --input " + data("c2_bad_overalg.json") + " --variety groups", "bad.json") == 2);
    Json const bad = output("bad.json");
    CHECK(bad["totally_in"] == false);
    CHECK(bad["witness"]["tuple"].size() > 0);
  }
  SUBCASE("zmod, total and check-total") {
    CHECK(run("zmod --input " + data("c2_z2_module.json") + " --variety groups", "zm.json") == 0);
    CHECK(ringoid_from_json(output("zm.json")["ringoid"]).hom(0, 0).iso_type() == IsoType{0, {2}});
    CHECK(run("total --input " + data("c2_beta_top.json") + " --variety groups", "tot.json") == 0);
    Json const tot = output("tot.json");
    CHECK(tot["algebra"]["carrier"].size() == 4);
    CHECK(in_variety(Variety::groups(), *algebra_from_json(tot["algebra"])));
    CHECK(run("total --input " + data("c2_z2_module.json") + " --variety groups", "totm.json") == 0);
    CHECK(run("check-total --input " + data("c2_z2_module.json") + " --variety groups", "ct.json") == 0);
    CHECK(output("ct.json")["totally_in"] == true);
    CHECK(run("check-total --input " + data("c2_bad_module.json") + " --variety groups", "ct2.json") == 2);
    CHECK(output("ct2.json")["witness"]["text"].get<std::string>().find("fails") != std::string::npos);
  }
  SUBCASE("verify") {
    CHECK(run("verify --only C2 Pt2 --seed 7", "v.json") == 0);
    Json const v = output("v.json");
    CHECK(v["pass"] == true);
    CHECK(v["entries"].size() == 2);
    CHECK(run("verify --only Pt2 --inject-fault composition", "vf.json") == 4);
    Json const vf = output("vf.json");
    CHECK(vf["failed"] == 2);
    CHECK(vf["entries"][1]["checks"][1]["detail"].get<std::string>().find("eZe") != std::string::npos);
    CHECK(run("verify --only Q8") == 2);
    CHECK(run("verify --inject-fault nothing") == 2);
  }
}

TEST_CASE("verify is deterministic and faults are located") {
  VerifyOptions opt;
  opt.only = {"C2", "Z2ring"};
  VerifyResult const a = run_verify(opt);
  VerifyResult const b = run_verify(opt);
  CHECK(a.pass());
  CHECK(a.report.dump() == b.report.dump());
  opt.seed = 99;
  VerifyResult const c = run_verify(opt);
  CHECK(c.passed == a.passed);
  CHECK(c.failed == 0);
  for (auto const& f : verify_faults()) {
    CAPTURE(f);
    VerifyOptions o;
    o.only   = {"Pt2"};
    o.faults = {f};
    VerifyResult const r = run_verify(o);
    CHECK_FALSE(r.pass());
    CHECK(r.summary.rfind("FAIL fault " + f, 0) == 0);
  }
}
