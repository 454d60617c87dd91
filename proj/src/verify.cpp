// SPDX-License-Identifier: Apache-2.0

#include "envring/verify.hpp"

#include <algorithm>
#include <future>

#include "envring/fleet.hpp"

namespace envring {

  namespace {

    struct Check {
      std::string suite;
      CheckOutcome outcome;
    };

    struct EntryResult {
      std::string        name;
      std::string        variety;
      std::vector<Check> checks;

      void add(std::string suite, CheckOutcome o) {
        checks.push_back(Check{std::move(suite), std::move(o)});
      }
      void add(std::string suite, std::string name, bool pass, std::string detail = {}) {
        add(std::move(suite), CheckOutcome{std::move(name), pass, std::move(detail)});
      }
    };

    bool small_fibers(AModule const& M) {
      if (!M.finite()) {
        return false;
      }
      return std::all_of(M.fibers().begin(), M.fibers().end(), [](FGAbGroup const& g) { return g.order() <= 4; });
    }

    // Runs f, turning an Error into a failed outcome.
    template <typename F>
    void guarded(EntryResult& r, std::string const& suite, std::string const& name, F&& f) {
      try {
        f();
      } catch (Error const& e) {
        r.add(suite, name, false, e.what());
      }
    }

    void envelope_suite(EntryResult& r, FleetEntry const& f, EnvelopeReport const& env) {
      FinAlgebra const& A = *f.algebra;
      std::string       detail;
      for (auto const& s : env.steps) {
        if (!s.stable) {
          detail = "depth " + std::to_string(s.depth) + ": " + s.detail;
        }
      }
      r.add("envelope", "stabilizes", env.stabilized,
            env.stabilized ? "depth " + std::to_string(env.depth) : detail);
      if (!env.stabilized) {
        return;
      }
      EnvelopingRingoid const& Z = *env.ringoid;
      CheckOutcome             types{"hom-group types", true, {}};
      for (Element a = 0; a < A.size() && types.pass; ++a) {
        for (Element b = 0; b < A.size() && types.pass; ++b) {
          IsoType const got  = Z.presentation(a, b).group.iso_type();
          IsoType const want = expected_hom_type(f.variety, A, a, b);
          if (!(got == want)) {
            types = {"hom-group types", false,
                     A.element_name(a) + "Z" + A.element_name(b) + " is " + to_string(got) + ", expected " + to_string(want)};
          }
        }
      }
      r.add("envelope", types);
      auto const bad = Z.ringoid().check_axioms();
      r.add("envelope", "ringoid axioms", !bad, bad.value_or(""));
    }

    void module_suite(EntryResult& r, FleetEntry const& f, EnvelopingRingoid const& Z) {
      for (auto const& fm : fleet_modules(f)) {
        std::string const suite = "module " + fm.name;
        auto const        w     = totally_in_witness(f.variety, fm.module);
        r.add(suite, "totally in " + f.variety.name(), !w, w ? w->text : "");
        if (w) {
          continue;
        }
        ModuleAction const M(TotallyIn<AModule>::check(f.variety, fm.module));
        guarded(r, suite, "G and H are inverse", [&] { r.add(suite, round_trip(Z, M)); });
        if (!fm.module.finite()) {
          continue;
        }
        r.add(suite, canonical_map_check(Z, M));
        if (small_fibers(fm.module)) {
          guarded(r, suite, "action theorem", [&] {
            for (auto& o : action_theorem(Z, M)) {
              r.add(suite, std::move(o));
            }
          });
        }
      }
    }

    void modulization_suite(EntryResult& r, FleetEntry const& f) {
      std::size_t const          k = f.algebra->size();
      std::vector<std::uint32_t> bottom(k), top(k, 0);
      for (std::size_t i = 0; i < k; ++i) {
        bottom[i] = static_cast<std::uint32_t>(i);
      }
      std::vector<std::pair<std::string, PointedOveralg>> inputs;
      inputs.emplace_back("trivial", trivial_overalg(f.algebra));
      inputs.emplace_back("beta* of the identity", beta_star(f.algebra, bottom));
      inputs.emplace_back("beta* of the total congruence", beta_star(f.algebra, top));
      for (auto const& [name, P] : inputs) {
        std::string const suite = "modulize " + name;
        guarded(r, suite, "modulize", [&] {
          Modulization const m = modulize(P);
          r.add(suite, "eta a spanning pointed hom", true);
          r.add(suite, "identity transfer", check_identity_transfer(m, f.variety.identities()));
          r.add(suite, "result totally in " + f.variety.name(), totally_in(f.variety, m.result));
        });
      }
    }

    EntryResult run_entry(FleetEntry const& f, VerifyOptions const& opt) {
      EntryResult r{f.name, f.variety.name(), {}};
      {
        auto const w = variety_counterexample(f.variety, *f.algebra);
        r.add("algebra", "in " + f.variety.name(), !w, w ? "identity " + std::to_string(w->identity) : "");
      }
      EnvelopeReport const env = compute_envelope(f.variety, f.algebra, 3, opt.max_depth);
      envelope_suite(r, f, env);
      if (env.stabilized) {
        EnvelopingRingoid const& Z = *env.ringoid;
        module_suite(r, f, Z);
        if (f.variety.kind() == VarietyKind::Groups) {
          for (auto& o : group_corollaries(Z, opt.seed)) {
            r.add("group corollaries", std::move(o));
          }
        }
      }
      guarded(r, "J = R", "J = R at depth 3", [&] {
        EnvelopingRingoid const Z3(f.variety, f.algebra, 3);
        r.add("J = R", j_equals_r(Z3));
      });
      modulization_suite(r, f);
      return r;
    }

    // Each fault corrupts one object derived from C2 and reruns the check
    // that should locate it.
    EntryResult run_fault(std::string const& fault) {
      FleetEntry const  f = default_fleet().front();
      AModule           Z2;
      for (auto const& fm : fleet_modules(f)) {
        if (fm.name == "Z/2 trivial") {
          Z2 = fm.module;
        }
      }
      EntryResult       r{"fault " + fault, f.variety.name(), {}};
      auto const        Z = enveloping_ringoid(f.variety, f.algebra, 3, 6);
      FinAlgebra const& A = *f.algebra;
      if (fault == "composition") {
        Json j = ringoid_to_json(Z->ringoid(), A.carrier());
        auto& cell = j["products"][0]["table"][0][1][0];
        cell       = cell.get<std::int64_t>() + 1;
        Ringoid const bad = ringoid_from_json(j);
        auto const    why = bad.check_axioms();
        r.add("injected fault", "ringoid axioms", !why, why.value_or(""));
        Element const e = 0;
        Vec const& x = bad.basis_product(e, e, e, 0, 1);
        Vec const& y = Z->ringoid().basis_product(e, e, e, 0, 1);
        bool const same = Z->ringoid().hom(e, e).equal(x, y);
        r.add("injected fault", "composition table", same,
              same ? "" : "product of basis vectors 0 and 1 in " + A.element_name(e) + "Z" + A.element_name(e) + " changed");
      } else if (fault == "module-part") {
        Json             j   = module_to_json(Z2);
        std::string const key = A.element_name(1) + "," + A.element_name(1);
        auto&            cell = j["ops"]["mul"][key][0][0][0];
        cell                  = cell.get<std::int64_t>() + 1;
        AModule const bad     = module_from_json(j, f.algebra);
        auto const    w       = totally_in_witness(f.variety, bad);
        r.add("injected fault", "totally in " + f.variety.name(), !w, w ? w->text : "");
      } else if (fault == "ringoid-action") {
        ModuleAction const M(TotallyIn<AModule>::check(f.variety, Z2));
        RingoidModule      N = functor_G(*Z, M);
        std::size_t const  k = A.size();
        Matrix&            m = N.actions[1 * k + 0].front();
        m(0, 0) += 1;
        auto const why = check_ringoid_module(Z->ringoid(), N);
        r.add("injected fault", "ringoid module", !why, why.value_or(""));
      }
      return r;
    }

  }  // namespace

  std::vector<std::string> verify_faults() {
    return {"composition", "module-part", "ringoid-action"};
  }

  IsoType expected_hom_type(Variety const& V, FinAlgebra const& A, Element a, Element b) {
    switch (V.kind()) {
      case VarietyKind::Groups:
        return IsoType{A.size(), {}};
      case VarietyKind::AB:
        return IsoType{1, {}};
      case VarietyKind::CRing:
        return IsoType{0, {Int(static_cast<long>(A.size()))}};
      case VarietyKind::PointedSet:
        return IsoType{a == b ? 1u : 0u, {}};
      default:
        fail(ErrorKind::Validation, "no expected hom-group type for " + V.name());
    }
  }

  VerifyResult run_verify(VerifyOptions const& opt) {
    std::vector<std::string> faults;
    for (auto const& f : opt.faults) {
      if (f == "all") {
        faults = verify_faults();
        break;
      }
      auto const known = verify_faults();
      if (std::find(known.begin(), known.end(), f) == known.end()) {
        fail(ErrorKind::Validation, "unknown fault " + f);
      }
      faults.push_back(f);
    }
    for (auto const& name : opt.only) {
      auto const fleet = default_fleet();
      if (std::none_of(fleet.begin(), fleet.end(), [&](FleetEntry const& f) { return f.name == name; })) {
        fail(ErrorKind::Validation, "unknown fleet entry " + name);
      }
    }

    std::vector<std::future<EntryResult>> jobs;
    for (auto const& f : default_fleet()) {
      if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), f.name) == opt.only.end()) {
        continue;
      }
      jobs.push_back(std::async(std::launch::async, [f, &opt] { return run_entry(f, opt); }));
    }
    std::vector<EntryResult> results;
    for (auto& j : jobs) {
      results.push_back(j.get());
    }
    for (auto const& f : faults) {
      results.push_back(run_fault(f));
    }

    VerifyResult out;
    Json         entries = Json::array();
    std::string  pass_lines, fail_lines;
    for (auto const& r : results) {
      Json checks = Json::array();
      for (auto const& c : r.checks) {
        checks.push_back({{"suite", c.suite}, {"check", c.outcome.name}, {"pass", c.outcome.pass}, {"detail", c.outcome.detail}});
        std::string const line = std::string(c.outcome.pass ? "PASS " : "FAIL ") + r.name + " / " + c.suite + " / " +
                                 c.outcome.name + (c.outcome.detail.empty() ? "" : ": " + c.outcome.detail) + "\n";
        if (c.outcome.pass) {
          ++out.passed;
          pass_lines += line;
        } else {
          ++out.failed;
          fail_lines += line;
        }
      }
      entries.push_back({{"algebra", r.name}, {"variety", r.variety}, {"checks", checks}});
    }
    out.summary = fail_lines + pass_lines;
    out.report  = {{"tool", "envring"},
                   {"version", kToolVersion},
                   {"report", "verify"},
                   {"seed", opt.seed},
                   {"max_depth", opt.max_depth},
                   {"faults", faults},
                   {"only", opt.only},
                   {"entries", entries},
                   {"passed", out.passed},
                   {"failed", out.failed},
                   {"pass", out.failed == 0}};
    return out;
  }

}  // namespace envring
