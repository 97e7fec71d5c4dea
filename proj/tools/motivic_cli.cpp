#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "motivic/json_io.hpp"

using namespace motivic;

namespace {

struct Options {
  bool json = false;
};

void emit(const Options& opt, const std::string& text, const Json& j) {
  if (opt.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
}

int report_exit(const Options& opt, const CheckReport& rep) {
  Json j = to_json(rep);
  if (opt.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (rep.equal ? "EQUAL" : "UNEQUAL") << "\n";
    std::cout << "lhs: " << rep.lhs << "\n";
    std::cout << "rhs: " << rep.rhs << "\n";
    if (!rep.detail.empty()) std::cout << rep.detail << "\n";
  }
  return rep.equal ? 0 : 3;
}

SncModel load_model(const std::string& path) {
  SncModel m = model_from_json(load_json_file(path));
  ValidationReport rep = validate(m);
  if (!rep.ok()) throw InvalidSpec(path + ": " + rep.str());
  return m;
}

PolySet load_set(const SncModel& model, const std::string& path, bool full) {
  if (full || path.empty()) return full_skeleton(model);
  return polyset_from_json(load_json_file(path), model);
}

PresburgerSet load_cells(const SncModel& model, const std::string& path, bool full) {
  if (full || path.empty()) return full_skeleton_cells(model);
  return presburger_from_json(load_json_file(path), model);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact motivic measures and integrals on skeleta of snc models"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json, "emit JSON instead of text");

  std::string model_path, set_path, fn_path, spec_path, ideal, table_path, out_path;
  std::string src_path, tgt_path, morph_path, z_path, morph2_path;
  std::string s_value = "0", q_value;
  bool full = false, use_l1 = false;

  auto* c_validate = app.add_subcommand("validate", "check model invariants");
  c_validate->add_option("model", model_path)->required();

  auto* c_volume = app.add_subcommand("volume", "motivic measure of a polyhedral set");
  c_volume->add_option("model", model_path)->required();
  c_volume->add_option("set", set_path);
  c_volume->add_flag("--full", full, "use the full skeleton");

  auto* c_integrate = app.add_subcommand("integrate", "integral of a motivic function");
  c_integrate->add_option("model", model_path)->required();
  c_integrate->add_option("function", fn_path)->required();

  auto* c_ideal = app.add_subcommand("ideal-power", "integral of |ideal|^s");
  c_ideal->add_option("model", model_path)->required();
  c_ideal->add_option("--ideal", ideal)->required();
  c_ideal->add_option("--s", s_value, "exponent, rational");

  auto* c_stringy = app.add_subcommand("stringy", "stringy motivic class");
  c_stringy->add_option("model", model_path)->required();

  auto* c_lct = app.add_subcommand("lct", "Mather log canonical threshold");
  c_lct->add_option("model", model_path)->required();
  c_lct->add_option("--ideal", ideal)->required();

  auto* c_chi = app.add_subcommand("chi", "Euler-characteristic measure");
  c_chi->add_option("model", model_path)->required();
  c_chi->add_option("--table", table_path)->required();
  c_chi->add_option("set", set_path);
  c_chi->add_flag("--full", full);

  auto* c_blowup = app.add_subcommand("blowup", "apply a smooth transversal blow-up");
  c_blowup->add_option("model", model_path)->required();
  c_blowup->add_option("spec", spec_path)->required();
  c_blowup->add_option("-o,--out", out_path, "write {model, morphism} JSON here");

  auto* c_checkb = app.add_subcommand("check-blowup", "measure invariance under a blow-up");
  c_checkb->add_option("model", model_path)->required();
  c_checkb->add_option("spec", spec_path)->required();
  c_checkb->add_option("set", set_path);
  c_checkb->add_flag("--full", full);
  c_checkb->add_option("--function", fn_path);

  auto* c_push = app.add_subcommand("pushforward", "push a Function along a morphism");
  c_push->add_option("source", src_path)->required();
  c_push->add_option("target", tgt_path)->required();
  c_push->add_option("morphism", morph_path)->required();
  c_push->add_option("functionv", fn_path)->required();
  c_push->add_option("-o,--out", out_path);

  auto* c_intv = app.add_subcommand("integrate-v", "total integral of a Function");
  c_intv->add_option("model", model_path)->required();
  c_intv->add_option("functionv", fn_path)->required();

  auto* c_proj = app.add_subcommand("check-projection", "projection formula instance");
  c_proj->add_option("source", src_path)->required();
  c_proj->add_option("target", tgt_path)->required();
  c_proj->add_option("morphism", morph_path)->required();
  c_proj->add_option("function", fn_path)->required();
  c_proj->add_option("functionv", set_path)->required();

  auto* c_fun = app.add_subcommand("check-functoriality", "two-step functoriality instance");
  c_fun->add_option("modelX", src_path)->required();
  c_fun->add_option("modelY", tgt_path)->required();
  c_fun->add_option("modelZ", z_path)->required();
  c_fun->add_option("morphismXY", morph_path)->required();
  c_fun->add_option("morphismYZ", morph2_path)->required();
  c_fun->add_option("functionv", fn_path)->required();

  auto* c_avol = app.add_subcommand("atomic-volume", "atomic measure of a lattice set");
  c_avol->add_option("model", model_path)->required();
  c_avol->add_option("cells", set_path);
  c_avol->add_flag("--full", full);

  auto* c_aint = app.add_subcommand("atomic-integrate", "atomic integral of terms");
  c_aint->add_option("model", model_path)->required();
  c_aint->add_option("terms", fn_path)->required();

  auto* c_apush = app.add_subcommand("atomic-pushforward", "atomic push-forward of terms");
  c_apush->add_option("source", src_path)->required();
  c_apush->add_option("target", tgt_path)->required();
  c_apush->add_option("morphism", morph_path)->required();
  c_apush->add_option("terms", fn_path)->required();
  c_apush->add_option("-o,--out", out_path);

  auto* c_acheck = app.add_subcommand("check-atomic-blowup", "atomic blow-up invariance");
  c_acheck->add_option("model", model_path)->required();
  c_acheck->add_option("spec", spec_path)->required();
  c_acheck->add_option("cells", set_path);
  c_acheck->add_flag("--full", full);

  auto* c_cross = app.add_subcommand("cross-check-l1", "atomic vs real measure at L -> 1");
  c_cross->add_option("model", model_path)->required();

  auto* c_spec = app.add_subcommand("specialize", "evaluate an atomic class");
  c_spec->add_option("class", fn_path)->required();
  c_spec->add_option("--q", q_value, "evaluate L -> q (rational > 1)");
  c_spec->add_flag("--l1", use_l1, "take the limit L -> 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    if (*c_validate) {
      SncModel m = model_from_json(load_json_file(model_path));
      ValidationReport rep = validate(m);
      emit(opt, rep.str(), to_json(rep));
      return rep.ok() ? 0 : 1;
    }
    if (*c_volume) {
      SncModel m = load_model(model_path);
      std::vector<std::string> warnings;
      MotClass v = measure(m, load_set(m, set_path, full), &warnings);
      Json j{{"value", to_json(v)}, {"warnings", warnings}};
      std::string text = v.str();
      for (const auto& w : warnings) text += "\nwarning: " + w;
      emit(opt, text, j);
      return 0;
    }
    if (*c_integrate) {
      SncModel m = load_model(model_path);
      MotivicFunction f = function_from_json(load_json_file(fn_path), m);
      MotClass v = integrate(m, f);
      emit(opt, v.str(), Json{{"value", to_json(v)}});
      return 0;
    }
    if (*c_ideal) {
      SncModel m = load_model(model_path);
      MotClass v = integrate_ideal_power(m, ideal, parse_rat(s_value));
      emit(opt, v.str(), Json{{"value", to_json(v)}});
      return 0;
    }
    if (*c_stringy) {
      SncModel m = load_model(model_path);
      MotClass v = stringy_class(m);
      emit(opt, v.str(), Json{{"value", to_json(v)}});
      return 0;
    }
    if (*c_lct) {
      SncModel m = load_model(model_path);
      Rat v = mather_lct(m, ideal);
      emit(opt, rat_str(v), Json{{"value", rat_str(v)}});
      return 0;
    }
    if (*c_chi) {
      SncModel m = load_model(model_path);
      auto table = chi_table_from_json(load_json_file(table_path));
      Rat v = euler_measure(m, load_set(m, set_path, full), table);
      emit(opt, rat_str(v), Json{{"value", rat_str(v)}});
      return 0;
    }
    if (*c_blowup) {
      SncModel m = load_model(model_path);
      BlowupSpec spec = blowup_from_json(load_json_file(spec_path), m);
      auto [blown, morph] = blow_up(m, spec);
      Json j{{"model", to_json(blown)}, {"morphism", to_json(morph)}};
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
        emit(opt, "written to " + out_path, j);
      } else {
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }
    if (*c_checkb) {
      SncModel m = load_model(model_path);
      BlowupSpec spec = blowup_from_json(load_json_file(spec_path), m);
      PolySet s = load_set(m, set_path, full);
      MotivicFunction f;
      bool has_f = !fn_path.empty();
      if (has_f) f = function_from_json(load_json_file(fn_path), m);
      CheckReport rep = check_blowup_invariance(m, spec, s, has_f ? &f : nullptr);
      return report_exit(opt, rep);
    }
    if (*c_push) {
      SncModel src = load_model(src_path), tgt = load_model(tgt_path);
      ModelMorphism m = morphism_from_json(load_json_file(morph_path));
      FunctionV g = functionv_from_json(load_json_file(fn_path), src);
      FunctionV out = pushforward(src, tgt, m, g);
      Json j = to_json(out);
      if (!out_path.empty()) {
        std::ofstream o(out_path);
        o << j.dump(2) << "\n";
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*c_intv) {
      SncModel m = load_model(model_path);
      FunctionV g = functionv_from_json(load_json_file(fn_path), m);
      MotClass v = integrate_V(m, g);
      emit(opt, v.str(), Json{{"value", to_json(v)}});
      return 0;
    }
    if (*c_proj) {
      SncModel src = load_model(src_path), tgt = load_model(tgt_path);
      ModelMorphism m = morphism_from_json(load_json_file(morph_path));
      MotivicFunction f = function_from_json(load_json_file(fn_path), tgt);
      FunctionV g = functionv_from_json(load_json_file(set_path), src);
      return report_exit(opt, projection_formula_check(src, tgt, m, f, g));
    }
    if (*c_fun) {
      SncModel mx = load_model(src_path), my = load_model(tgt_path), mz = load_model(z_path);
      ModelMorphism mxy = morphism_from_json(load_json_file(morph_path));
      ModelMorphism myz = morphism_from_json(load_json_file(morph2_path));
      FunctionV g = functionv_from_json(load_json_file(fn_path), mx);
      return report_exit(opt, functoriality_check(mx, my, mz, mxy, myz, g));
    }
    if (*c_avol) {
      SncModel m = load_model(model_path);
      AtomicClass v = atomic_measure(m, load_cells(m, set_path, full));
      emit(opt, v.str(), Json{{"value", to_json(v)}});
      return 0;
    }
    if (*c_aint) {
      SncModel m = load_model(model_path);
      auto terms = atomic_terms_from_json(load_json_file(fn_path));
      for (auto& t : terms) t.cell.face = m.sorted_face(t.cell.face);
      AtomicClass v = atomic_integrate(m, terms);
      emit(opt, v.str(), Json{{"value", to_json(v)}});
      return 0;
    }
    if (*c_apush) {
      SncModel src = load_model(src_path), tgt = load_model(tgt_path);
      ModelMorphism m = morphism_from_json(load_json_file(morph_path));
      auto terms = atomic_terms_from_json(load_json_file(fn_path));
      for (auto& t : terms) t.cell.face = src.sorted_face(t.cell.face);
      auto out = atomic_pushforward(src, tgt, m, terms);
      Json arr = Json::array();
      for (const auto& t : out) arr.push_back(to_json(t));
      Json j{{"terms", arr}};
      if (!out_path.empty()) {
        std::ofstream o(out_path);
        o << j.dump(2) << "\n";
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*c_acheck) {
      SncModel m = load_model(model_path);
      BlowupSpec spec = blowup_from_json(load_json_file(spec_path), m);
      PresburgerSet s = load_cells(m, set_path, full);
      return report_exit(opt, atomic_blowup_check(m, spec, s));
    }
    if (*c_cross) {
      SncModel m = load_model(model_path);
      return report_exit(opt, cross_check_L1(m));
    }
    if (*c_spec) {
      AtomicClass c = atomicclass_from_json(load_json_file(fn_path));
      if (use_l1) {
        MotClass v = c.limit_L1();
        emit(opt, v.str(), Json{{"value", to_json(v)}});
      } else if (!q_value.empty()) {
        MotClass v = c.theta(parse_rat(q_value));
        emit(opt, v.str(), Json{{"value", to_json(v)}});
      } else {
        std::cerr << "specialize needs --q or --l1\n";
        return 1;
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
