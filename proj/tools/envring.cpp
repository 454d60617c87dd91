// SPDX-License-Identifier: Apache-2.0
//
// envring command line tool.
//
// Exit codes: 0 success, 1 parse error or missing file, 2 validation error
// or input not totally in the variety, 3 envelope not stabilized, 4 verify
// found a failing property.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "envring/json_io.hpp"
#include "envring/verify.hpp"

using namespace envring;

namespace {

  constexpr int kOk           = 0;
  constexpr int kParse        = 1;
  constexpr int kValidation   = 2;
  constexpr int kNotStable    = 3;
  constexpr int kVerifyFailed = 4;

  struct Config {
    std::string              algebra;
    std::string              input;
    std::string              variety;
    std::size_t              depth     = 3;
    std::size_t              max_depth = 6;
    std::string              output;
    std::uint64_t            seed = 1;
    std::vector<std::string> faults;
    std::vector<std::string> only;
  };

  // JSON goes to --output when given, otherwise to standard output; the
  // summary then goes to standard error so the JSON stays parseable.
  void emit(Config const& c, Json const& j, std::string const& summary) {
    if (!c.output.empty()) {
      write_json_file(c.output, j);
      std::cout << summary;
    } else {
      std::cout << j.dump(2) << '\n';
      std::cerr << summary;
    }
  }

  std::string dir_of(std::string const& path) {
    return std::filesystem::path(path).parent_path().string();
  }

  bool is_module_json(Json const& j) {
    if (!j.is_object() || !j.contains("fibers") || !j.at("fibers").is_object() || j.at("fibers").empty()) {
      return false;
    }
    Json const& f = j.at("fibers").begin().value();
    return f.is_object() && (f.contains("rank") || f.contains("orders"));
  }

  int envelope(Config const& c) {
    if (c.depth == 0 || c.depth > c.max_depth) {
      fail(ErrorKind::Validation, "need 1 <= depth <= max-depth");
    }
    Variety const        V   = variety_from_arg(c.variety);
    AlgebraPtr const     A   = algebra_from_json(read_json_file(c.algebra), &V);
    EnvelopeReport const r   = compute_envelope(V, A, c.depth, c.max_depth);
    std::ostringstream   out;
    out << "envelope of " << A->name() << " in " << V.name() << ": "
        << (r.stabilized ? "stabilized at depth " + std::to_string(r.depth)
                         : "not stabilized up to depth " + std::to_string(c.max_depth))
        << '\n';
    for (auto const& s : r.steps) {
      out << "  depth " << s.depth << " vs " << s.depth + 1 << ": " << (s.stable ? "stable" : s.detail) << '\n';
    }
    for (Element a = 0; a < A->size(); ++a) {
      for (Element b = 0; b < A->size(); ++b) {
        auto const& h = r.ringoid->presentation(a, b);
        out << "  " << A->element_name(a) << "Z" << A->element_name(b) << " = " << to_string(h.group.iso_type())
            << " (" << h.gens.size() << " generators)\n";
      }
    }
    emit(c, envelope_report(r, c.max_depth), out.str());
    return r.stabilized ? kOk : kNotStable;
  }

  Json witness_json(TotalityWitness const& w) {
    return {{"identity", w.identity}, {"tuple", w.tuple}, {"text", w.text}};
  }

  int modulize_cmd(Config const& c) {
    Variety const        V = variety_from_arg(c.variety);
    Json const           j = read_json_file(c.input);
    AlgebraPtr const     A = base_from_json(j, V, dir_of(c.input));
    PointedOveralg const P = overalg_from_json(j, A);
    if (auto w = totally_in_witness(V, P)) {
      Json const report = {{"tool", "envring"}, {"version", kToolVersion}, {"report", "modulize"},
                           {"totally_in", false}, {"witness", witness_json(*w)}};
      emit(c, report, "not totally in " + V.name() + ": " + w->text + "\n");
      return kValidation;
    }
    Modulization const m = modulize(P);
    std::ostringstream out;
    out << "modulization over " << A->name() << ":\n";
    for (Element a = 0; a < A->size(); ++a) {
      out << "  fiber " << A->element_name(a) << ": " << to_string(m.result.fiber(a).iso_type()) << '\n';
    }
    emit(c, modulization_report(m), out.str());
    return kOk;
  }

  int verify_cmd(Config const& c) {
    VerifyOptions opt;
    opt.seed      = c.seed;
    opt.max_depth = c.max_depth;
    opt.faults    = c.faults;
    opt.only      = c.only;
    VerifyResult const r = run_verify(opt);
    std::ostringstream out;
    out << r.summary << r.passed << " passed, " << r.failed << " failed\n";
    emit(c, r.report, out.str());
    return r.pass() ? kOk : kVerifyFailed;
  }

  int zmod_cmd(Config const& c) {
    Variety const    V = variety_from_arg(c.variety);
    Json const       j = read_json_file(c.input);
    AlgebraPtr const A = base_from_json(j, V, dir_of(c.input));
    AModule const    M = module_from_json(j, A);
    ZofModule const  Z = z_of_module(M);
    std::ostringstream out;
    out << "Z_M over " << A->name() << ":\n";
    for (Element a = 0; a < A->size(); ++a) {
      for (Element b = 0; b < A->size(); ++b) {
        out << "  " << A->element_name(a) << "Z" << A->element_name(b) << " = "
            << to_string(Z.ring.hom(a, b).iso_type()) << '\n';
      }
    }
    Json const report = {{"tool", "envring"}, {"version", kToolVersion}, {"report", "zmod"},
                         {"ringoid", ringoid_to_json(Z.ring, A->carrier())}};
    emit(c, report, out.str());
    return kOk;
  }

  int total_cmd(Config const& c) {
    Variety const    V = variety_from_arg(c.variety);
    Json const       j = read_json_file(c.input);
    AlgebraPtr const A = base_from_json(j, V, dir_of(c.input));
    TotalAlgebra const T = is_module_json(j) ? total_algebra(module_from_json(j, A)) : total_algebra(overalg_from_json(j, A));
    Json const report = {{"tool", "envring"}, {"version", kToolVersion}, {"report", "total"},
                         {"algebra", algebra_to_json(*T.algebra)}, {"pi", T.pi}, {"iota", T.iota}};
    emit(c, report, "total algebra with " + std::to_string(T.algebra->size()) + " elements over " + A->name() + "\n");
    return kOk;
  }

  int check_total_cmd(Config const& c) {
    Variety const    V = variety_from_arg(c.variety);
    Json const       j = read_json_file(c.input);
    AlgebraPtr const A = base_from_json(j, V, dir_of(c.input));
    auto const w = is_module_json(j) ? totally_in_witness(V, module_from_json(j, A))
                                     : totally_in_witness(V, overalg_from_json(j, A));
    Json report = {{"tool", "envring"}, {"version", kToolVersion}, {"report", "check-total"},
                   {"variety", V.name()}, {"totally_in", !w}};
    if (w) {
      report["witness"] = witness_json(*w);
    }
    emit(c, report, w ? "not totally in " + V.name() + ": " + w->text + "\n" : "totally in " + V.name() + "\n");
    return w ? kValidation : kOk;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enveloping ringoids, modulization and module checks for finite algebras"};
  app.require_subcommand(1);
  Config c;

  auto add_output = [&c](CLI::App* s) { s->add_option("--output,-o", c.output, "Write the JSON report here"); };
  auto add_variety = [&c](CLI::App* s) {
    s->add_option("--variety", c.variety, "groups, ab, cring, pointed_set, or a variety JSON file")->required();
  };

  CLI::App* env = app.add_subcommand("envelope", "Enveloping ringoid of an algebra");
  env->add_option("--algebra", c.algebra, "Algebra JSON file")->required();
  add_variety(env);
  env->add_option("--depth", c.depth, "First truncation depth")->capture_default_str();
  env->add_option("--max-depth", c.max_depth, "Largest depth tried")->capture_default_str();
  add_output(env);

  CLI::App* mod = app.add_subcommand("modulize", "Modulization of a pointed overalgebra");
  mod->add_option("--input", c.input, "Overalgebra JSON file")->required();
  add_variety(mod);
  add_output(mod);

  CLI::App* ver = app.add_subcommand("verify", "Property battery over the default fleet");
  ver->add_option("--seed", c.seed, "Seed for sampled checks")->capture_default_str();
  ver->add_option("--max-depth", c.max_depth, "Largest depth tried")->capture_default_str();
  ver->add_option("--inject-fault", c.faults, "composition, module-part, ringoid-action or all");
  ver->add_option("--only", c.only, "Fleet entries to run (C2 C3 C4 S3 Z2ab Z4ab Z2ring Z3ring Pt2)");
  add_output(ver);

  CLI::App* zm = app.add_subcommand("zmod", "The subringoid Z_M of End(M)");
  zm->add_option("--input", c.input, "Module JSON file")->required();
  add_variety(zm);
  add_output(zm);

  CLI::App* tot = app.add_subcommand("total", "Total algebra of an overalgebra or module");
  tot->add_option("--input", c.input, "Overalgebra or module JSON file")->required();
  add_variety(tot);
  add_output(tot);

  CLI::App* chk = app.add_subcommand("check-total", "Whether an overalgebra or module is totally in a variety");
  chk->add_option("--input", c.input, "Overalgebra or module JSON file")->required();
  add_variety(chk);
  add_output(chk);

  try {
    app.parse(argc, argv);
  } catch (CLI::Success const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*env) {
      return envelope(c);
    }
    if (*mod) {
      return modulize_cmd(c);
    }
    if (*ver) {
      return verify_cmd(c);
    }
    if (*zm) {
      return zmod_cmd(c);
    }
    if (*tot) {
      return total_cmd(c);
    }
    return check_total_cmd(c);
  } catch (Error const& e) {
    std::cerr << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Parse:
        return kParse;
      case ErrorKind::NotStabilized:
        return kNotStable;
      default:
        return kValidation;
    }
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}
